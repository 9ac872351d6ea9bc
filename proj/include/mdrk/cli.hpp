#pragma once

// Command-line front end. Every subcommand resolves its inputs, calls the
// library, and writes a summary to `out` plus CSV/JSON artifacts to the
// output directory (--out-dir, else $MDRK_OUTPUT_DIR, else the working
// directory).
//
// Exit codes:
//   0  success
//   1  usage error (unknown flags, missing required values)
//   2  unknown method reference
//   3  malformed tableau or config file
//   4  invalid lambda grid
//   5  validation failure (verify, order-check --expect)
//   6  no feasible method found (optimize)
//   7  other errors (invalid argument values, I/O, integration failure)

#include "mdrk/experiments.hpp"
#include "mdrk/methods.hpp"
#include "mdrk/optimizer.hpp"
#include "mdrk/order_conditions.hpp"
#include "mdrk/ssp_analysis.hpp"
#include "mdrk/tableau.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mdrk::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kUnknownMethod = 2,
  kMalformedFile = 3,
  kInvalidLambdaGrid = 4,
  kValidationFailure = 5,
  kNoFeasibleMethod = 6,
  kRuntimeError = 7,
};

inline constexpr const char* kOutputDirVariable = "MDRK_OUTPUT_DIR";

class LambdaGridError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Values gathered from flags and the optional config file.
struct RunConfig {
  std::string config_path;
  std::string out_dir;
  std::string method;
  std::string problem = "advection-upwind";
  std::string k = "";  // empty: the method's design K
  int m = 0;           // 0: the problem's default grid
  int steps = 0;       // 0: 50 for sweep, 60 for positivity
  double lambda_start = 0.05;
  double lambda_stop = 4.0;
  double lambda_step = 0.05;
  double fine_step = 1e-4;
  double threshold = kTvThreshold;
  std::string choice = "same";
  double weno_eps = kWenoEpsilon;
  double gravity = 1.0;
  // ssp-coef
  bool sd = false;
  double ktilde = 1.0;
  // order-check
  int max_order = kMaxOrder;
  double tol = 1e-10;
  int expect = 0;
  // optimize
  int s = 0;
  int p = 0;
  std::string variant = "M2";
  int seeds = 32;
  int budget = 2000;
  std::uint64_t seed = 1;
  std::string out;
  // converge
  double t_final = 1.0;
  std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  int dim = 5;
};

namespace cli_detail {

inline std::string slug(const std::string& name) {
  std::string s;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-')
      s += ch;
    else if (!s.empty() && s.back() != '_')
      s += '_';
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s.empty() ? "method" : s;
}

inline std::filesystem::path output_dir(const RunConfig& cfg) {
  std::filesystem::path dir = ".";
  if (!cfg.out_dir.empty())
    dir = cfg.out_dir;
  else if (const char* env = std::getenv(kOutputDirVariable); env && *env)
    dir = env;
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("failed writing " + path.string());
}

inline double parse_k_text(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return kInfinity;
  std::size_t used = 0;
  double k = 0.0;
  try {
    k = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != text.size() || !(k > 0.0)) throw Error("K must be a positive number or 'inf'");
  return k;
}

inline double resolve_k(const RunConfig& cfg, const MethodRecord& rec) {
  return cfg.k.empty() ? rec.tableau.design_k() : parse_k_text(cfg.k);
}

inline std::string k_text(double k) { return std::isinf(k) ? "inf" : format_g(k, 6); }

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline LambdaGrid lambda_grid(const RunConfig& cfg) {
  LambdaGrid g{cfg.lambda_start, cfg.lambda_stop, cfg.lambda_step};
  if (!(g.start > 0.0) || !(g.stop >= g.start) || !(g.step > 0.0) || !(cfg.fine_step > 0.0) ||
      !(cfg.fine_step <= g.step))
    throw LambdaGridError("invalid lambda grid: need 0 < start <= stop and 0 < fine-step <= step");
  return g;
}

inline ProblemOptions problem_options(const RunConfig& cfg) {
  ProblemOptions opt;
  opt.m = cfg.m;
  if (cfg.choice == "same")
    opt.choice = DerivativeChoice::Same;
  else if (cfg.choice == "opposite")
    opt.choice = DerivativeChoice::Opposite;
  else
    throw Error("--choice must be 'same' or 'opposite'");
  opt.weno_eps = cfg.weno_eps;
  opt.gravity = cfg.gravity;
  return opt;
}

/// Applies config-file values to options the command line left unset.
inline void apply_config(CLI::App& sub, const nlohmann::json& j) {
  for (CLI::Option* opt : sub.get_options()) {
    if (opt->count() > 0) continue;
    const std::string key = opt->get_single_name();
    if (key.empty() || key == "help" || key == "config" || !j.contains(key)) continue;
    const nlohmann::json& v = j.at(key);
    auto text = [&](const nlohmann::json& x) -> std::string {
      if (x.is_string()) return x.get<std::string>();
      if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
      if (x.is_number_integer()) return std::to_string(x.get<long long>());
      if (x.is_number()) return format_g(x.get<double>(), 17);
      throw ConfigError("config value for '" + key + "' must be a string, number or boolean");
    };
    if (v.is_array()) {
      for (const auto& x : v) opt->add_result(text(x));
    } else {
      opt->add_result(text(v));
    }
    opt->run_callback();
  }
}

inline nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config file " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int list_methods(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream csv;
  csv << "name,stages,variant,K_design,claimed_order,claimed_C_TS,source\n";
  out << "name  stages  variant  K  order  C_TS  source\n";
  for (const auto& rec : registry()) {
    const Tableau& t = rec.tableau;
    const std::string cts = rec.claimed_cts ? format_g(*rec.claimed_cts, 6) : "-";
    out << rec.name << "  " << t.stages() << "  " << to_string(t.variant()) << "  "
        << k_text(t.design_k()) << "  " << rec.claimed_order << "  " << cts << "  "
        << to_string(rec.source) << '\n';
    csv << rec.name << ',' << t.stages() << ',' << to_string(t.variant()) << ','
        << k_text(t.design_k()) << ',' << rec.claimed_order << ','
        << (rec.claimed_cts ? format_g(*rec.claimed_cts, 17) : "") << ',' << to_string(rec.source)
        << '\n';
  }
  out << "family: M3(3,4,<K>) for any K > 0\n";
  write_file(output_dir(cfg) / "methods.csv", csv.str());
  return kOk;
}

inline int order_check(const RunConfig& cfg, std::ostream& out) {
  const MethodRecord rec = resolve_method(cfg.method);
  if (cfg.max_order < 1 || cfg.max_order > kMaxOrder) throw Error("--max-order must lie in 1..6");
  std::ostringstream csv;
  csv << "order,index,lhs,target,residual\n";
  for (const auto& r : residuals(rec.tableau, cfg.max_order)) {
    out << 'p' << r.order << '#' << r.index << " lhs=" << format_g(r.lhs, 6)
        << " target=" << format_g(r.rhs, 6) << " residual=" << format_g(r.residual, 6) << '\n';
    csv << r.order << ',' << r.index << ',' << format_g(r.lhs, 17) << ',' << format_g(r.rhs, 17)
        << ',' << format_g(r.residual, 17) << '\n';
  }
  const int order = order_of(rec.tableau, cfg.tol);
  out << "order " << order << '\n';
  write_file(output_dir(cfg) / ("order_check_" + slug(rec.name) + ".csv"), csv.str());
  if (cfg.expect > 0 && order != cfg.expect) {
    out << "FAIL: expected order " << cfg.expect << '\n';
    return kValidationFailure;
  }
  return kOk;
}

inline int ssp_coef(const RunConfig& cfg, std::ostream& out) {
  const MethodRecord rec = resolve_method(cfg.method);
  nlohmann::json j;
  j["method"] = rec.name;
  if (cfg.sd) {
    const SDResult sd = compute_csd(rec.tableau, cfg.ktilde);
    out << "method " << rec.name << '\n'
        << "Ktilde " << format_g(cfg.ktilde, 6) << '\n'
        << "r_max " << format_g(sd.r_max, 6) << '\n'
        << "rhat_max " << format_g(sd.rhat_max, 6) << '\n'
        << "C_SD " << format_g(sd.csd, 6) << '\n'
        << "effective " << format_g(effective_coefficient(sd.csd, rec.tableau), 6) << '\n';
    j["ktilde"] = cfg.ktilde;
    j["r_max"] = sd.r_max;
    j["rhat_max"] = sd.rhat_max;
    j["C_SD"] = sd.csd;
    write_file(output_dir(cfg) / ("ssp_sd_" + slug(rec.name) + ".json"), j.dump(2) + "\n");
    return kOk;
  }
  const double k = resolve_k(cfg, rec);
  const SSPCertificate c = compute_cts(rec.tableau, k);
  out << "method " << rec.name << '\n'
      << "K " << k_text(k) << '\n'
      << "r_max " << format_g(c.r_max, 6) << '\n'
      << "effective " << format_g(effective_coefficient(c.r_max, rec.tableau), 6) << '\n'
      << "min_Re " << format_g(c.min_Re, 6) << '\n'
      << "min_P " << format_g(c.min_P, 6) << '\n'
      << "min_Q " << format_g(c.min_Q, 6) << '\n';
  j["K"] = std::isinf(k) ? nlohmann::json("inf") : nlohmann::json(k);
  j["r_max"] = c.r_max;
  j["effective"] = effective_coefficient(c.r_max, rec.tableau);
  j["tolerance"] = c.tolerance;
  j["min_Re"] = c.min_Re;
  j["min_P"] = c.min_P;
  j["min_Q"] = c.min_Q;
  if (c.r_max > 0.0) {
    j["R"] = matrix_json(c.witness.R);
    j["P"] = matrix_json(c.witness.P);
    j["Q"] = matrix_json(c.witness.Q);
  }
  write_file(output_dir(cfg) / ("ssp_coef_" + slug(rec.name) + ".json"), j.dump(2) + "\n");
  return kOk;
}

inline int verify(const RunConfig& cfg, std::ostream& out) {
  const MethodRecord rec = resolve_method(cfg.method);
  const Tableau& t = rec.tableau;
  const double k = resolve_k(cfg, rec);
  std::vector<std::string> failures;

  const ValidationReport structure = validate(t);
  for (const auto& d : structure.issues) failures.push_back("structure: " + d.message);
  const bool reducible = is_dj_reducible(t).has_value();
  if (reducible) failures.push_back("structure: tableau is DJ-reducible");

  const int order = order_of(t, cfg.tol);
  if (rec.claimed_order > 0 && order < rec.claimed_order)
    failures.push_back("order: found " + std::to_string(order) + ", claimed " +
                       std::to_string(rec.claimed_order));

  const SSPCertificate c = compute_cts(t, k);
  const bool compare_cts = rec.claimed_cts && k == t.design_k();
  if (compare_cts && std::abs(c.r_max - *rec.claimed_cts) > 1e-3 * std::max(1.0, *rec.claimed_cts))
    failures.push_back("ssp: certified C_TS " + format_g(c.r_max, 6) + ", claimed " +
                       format_g(*rec.claimed_cts, 6));

  out << "method " << rec.name << '\n'
      << "stages " << t.stages() << "  variant " << to_string(t.variant()) << '\n'
      << "structure " << (structure.clean() && !reducible ? "ok" : "FAIL") << '\n'
      << "order " << order;
  if (rec.claimed_order > 0) out << " (claimed " << rec.claimed_order << ')';
  out << '\n' << "C_TS(K=" << k_text(k) << ") " << format_g(c.r_max, 6);
  if (rec.claimed_cts) out << " (claimed " << format_g(*rec.claimed_cts, 6) << ')';
  out << '\n' << "effective " << format_g(effective_coefficient(c.r_max, t), 6) << '\n';
  for (const auto& f : failures) out << "FAIL: " << f << '\n';
  out << (failures.empty() ? "verified" : "verification failed") << '\n';

  nlohmann::json j;
  j["method"] = rec.name;
  j["stages"] = t.stages();
  j["variant"] = to_string(t.variant());
  j["structure_ok"] = structure.clean() && !reducible;
  j["order"] = order;
  j["claimed_order"] = rec.claimed_order;
  j["K"] = std::isinf(k) ? nlohmann::json("inf") : nlohmann::json(k);
  j["C_TS"] = c.r_max;
  if (rec.claimed_cts) j["claimed_C_TS"] = *rec.claimed_cts;
  j["failures"] = failures;
  j["verified"] = failures.empty();
  write_file(output_dir(cfg) / ("verify_" + slug(rec.name) + ".json"), j.dump(2) + "\n");
  return failures.empty() ? kOk : kValidationFailure;
}

inline int optimize_cmd(const RunConfig& cfg, std::ostream& out) {
  OptimizationSpec spec;
  spec.s = cfg.s;
  spec.p = cfg.p;
  spec.variant = variant_from_string(cfg.variant);
  spec.k = parse_k_text(cfg.k.empty() ? "1" : cfg.k);
  spec.seeds = cfg.seeds;
  spec.budget = cfg.budget;
  spec.seed = cfg.seed;
  const OptimizationResult r = optimize(spec);
  out << "method " << method_name(spec.variant, spec.s, spec.p, spec.k) << '\n';
  if (!r.found) {
    out << "no feasible method: " << r.message << '\n';
    return kNoFeasibleMethod;
  }
  const std::filesystem::path path =
      cfg.out.empty() ? output_dir(cfg) / (slug(r.record.name) + ".json")
                      : std::filesystem::path(cfg.out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  save(r.record, path);
  out << "C_TS " << format_g(r.cts, 6) << '\n'
      << "effective " << format_g(effective_coefficient(r.cts, r.record.tableau), 6) << '\n'
      << "order " << r.record.claimed_order << '\n'
      << "max order residual " << format_g(r.best_violation, 6) << '\n'
      << "written " << path.string() << '\n';
  return kOk;
}

inline void print_sweep_summary(std::ostream& out, const MethodRecord& rec, const ProblemSpec& p,
                                const SweepReport& rep, const std::string& csv_path) {
  out << "method " << rec.name << '\n'
      << "problem " << p.name << "  M=" << p.grid.m << '\n'
      << "lambda_obs " << format_g(rep.lambda_obs, 6) << '\n'
      << "C_TS_obs " << format_g(rep.cts_obs, 6) << '\n'
      << "C_TS_pred " << format_g(compute_cts(rec.tableau, p.k).r_max, 6) << '\n';
  if (!rep.crossed) out << "note: no violation within the lambda grid\n";
  out << "written " << csv_path << '\n';
}

inline int sweep_cmd(const RunConfig& cfg, std::ostream& out) {
  const MethodRecord rec = resolve_method(cfg.method);
  const LambdaGrid grid = lambda_grid(cfg);
  const ProblemSpec p = make_problem(cfg.problem, problem_options(cfg));
  if (p.monitor != Monitor::TotalVariation)
    throw Error("problem '" + cfg.problem + "' is positivity-monitored; use 'positivity'");
  const SweepReport rep =
      observed_cts(rec.tableau, p, cfg.steps ? cfg.steps : 50, grid, cfg.fine_step, cfg.threshold);
  std::ostringstream csv;
  write_csv(csv, rep);
  const auto path = output_dir(cfg) / ("sweep_" + slug(rec.name) + "_" + p.name + ".csv");
  write_file(path, csv.str());
  print_sweep_summary(out, rec, p, rep, path.string());
  return kOk;
}

inline int positivity_cmd(const RunConfig& cfg, std::ostream& out) {
  const MethodRecord rec = resolve_method(cfg.method);
  const LambdaGrid grid = lambda_grid(cfg);
  const ProblemSpec p = make_problem("shallow-water", problem_options(cfg));
  const SweepReport rep =
      positivity_sweep(rec.tableau, p, cfg.steps ? cfg.steps : 60, grid, cfg.fine_step);
  std::ostringstream csv;
  write_csv(csv, rep);
  const auto path = output_dir(cfg) / ("positivity_" + slug(rec.name) + ".csv");
  write_file(path, csv.str());
  print_sweep_summary(out, rec, p, rep, path.string());
  return kOk;
}

/// Seeded linear test system u' = L u with a well-conditioned, decaying L.
inline Matrix test_matrix(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  Matrix L(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) L(i, j) = normal(rng);
  return L - Matrix::Identity(dim, dim);
}

inline int converge_cmd(const RunConfig& cfg, std::ostream& out) {
  const MethodRecord rec = resolve_method(cfg.method);
  if (cfg.dim < 1) throw Error("--dim must be positive");
  const Matrix L = test_matrix(cfg.dim, cfg.seed);
  const Vector u0 = Vector::Ones(cfg.dim);
  const Vector exact = Matrix((L * cfg.t_final).exp()) * u0;
  const ConvergenceResult r =
      convergence_study(rec.tableau, linear_rhs(L), u0, cfg.t_final, exact, cfg.dts);
  std::ostringstream csv;
  csv << "dt,error\n";
  out << "method " << rec.name << '\n';
  for (std::size_t i = 0; i < r.dts.size(); ++i) {
    csv << format_g(r.dts[i], 17) << ',' << format_g(r.errors[i], 17) << '\n';
    out << "dt=" << format_g(r.dts[i], 6) << " error=" << format_g(r.errors[i], 6) << '\n';
  }
  const auto path = output_dir(cfg) / ("converge_" + slug(rec.name) + ".csv");
  write_file(path, csv.str());
  out << "observed order " << format_g(r.order, 6) << '\n' << "written " << path.string() << '\n';
  return kOk;
}

}  // namespace cli_detail

/// Parses argv and runs one subcommand; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  using namespace cli_detail;
  RunConfig cfg;
  CLI::App app{"Two-derivative multistage integrators: order, SSP certification, "
               "optimization and experiments",
               "mdrk"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", cfg.config_path, "JSON file with option values; flags override");
    sub->add_option("--out-dir", cfg.out_dir,
                    std::string("artifact directory (default: $") + kOutputDirVariable + " or .)");
  };
  auto method_opt = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "registry name, M3(3,4,<K>) or tableau file");
  };
  auto lambda_opts = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "grid points (0: problem default)");
    sub->add_option("--steps", cfg.steps, "time steps per lambda (0: subcommand default)");
    sub->add_option("--lambda-start", cfg.lambda_start, "first coarse lambda");
    sub->add_option("--lambda-stop", cfg.lambda_stop, "last coarse lambda");
    sub->add_option("--lambda-step", cfg.lambda_step, "coarse lambda spacing");
    sub->add_option("--fine-step", cfg.fine_step, "lambda spacing of the refinement scan");
  };

  CLI::App* list = app.add_subcommand("list-methods", "list registry methods");
  common(list);

  CLI::App* oc = app.add_subcommand("order-check", "order-condition residuals through order 6");
  common(oc);
  method_opt(oc);
  oc->add_option("--max-order", cfg.max_order, "highest order to print");
  oc->add_option("--tol", cfg.tol, "residual tolerance for the reported order");
  oc->add_option("--expect", cfg.expect, "fail unless the order equals this value");

  CLI::App* sc = app.add_subcommand("ssp-coef", "certify the SSP-TS (or SSP-SD) coefficient");
  common(sc);
  method_opt(sc);
  sc->add_option("--k", cfg.k, "K (number or inf; default: the method's design K)");
  sc->add_flag("--sd", cfg.sd, "compute the SSP-SD coefficient instead");
  sc->add_option("--ktilde", cfg.ktilde, "Ktilde for --sd");

  CLI::App* ver = app.add_subcommand("verify", "structure, order and SSP report");
  common(ver);
  method_opt(ver);
  ver->add_option("--k", cfg.k, "K (default: the method's design K)");
  ver->add_option("--tol", cfg.tol, "order residual tolerance");

  CLI::App* opt = app.add_subcommand("optimize", "search for an optimal SSP-TS method");
  common(opt);
  opt->add_option("--s", cfg.s, "stages");
  opt->add_option("--p", cfg.p, "order");
  opt->add_option("--variant", cfg.variant, "M1, M2 or M3");
  opt->add_option("--k", cfg.k, "K (number or inf; default 1)");
  opt->add_option("--seeds", cfg.seeds, "random starts per trial radius");
  opt->add_option("--budget", cfg.budget, "solver iterations per start");
  opt->add_option("--seed", cfg.seed, "random seed");
  opt->add_option("--out", cfg.out, "tableau file to write");

  CLI::App* sw = app.add_subcommand("sweep", "observed SSP coefficient from a TV sweep");
  common(sw);
  method_opt(sw);
  sw->add_option("--problem", cfg.problem,
                 "advection-upwind, burgers-upwind, advection-weno or burgers-weno");
  lambda_opts(sw);
  sw->add_option("--threshold", cfg.threshold, "TV increase counted as a violation");
  sw->add_option("--choice", cfg.choice, "Ft derivative operator: same or opposite");
  sw->add_option("--eps", cfg.weno_eps, "WENO epsilon");

  CLI::App* pos = app.add_subcommand("positivity", "positivity sweep on the dam break");
  common(pos);
  method_opt(pos);
  lambda_opts(pos);
  pos->add_option("--gravity", cfg.gravity, "gravitational constant");

  CLI::App* conv = app.add_subcommand("converge", "temporal convergence on a linear system");
  common(conv);
  method_opt(conv);
  conv->add_option("--t-final", cfg.t_final, "final time");
  conv->add_option("--dts", cfg.dts, "step sizes dividing the final time");
  conv->add_option("--dim", cfg.dim, "system dimension");
  conv->add_option("--seed", cfg.seed, "seed of the random system matrix");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!cfg.config_path.empty()) apply_config(*sub, load_config(cfg.config_path));
    const std::string name = sub->get_name();
    const bool needs_method = name != "list-methods" && name != "optimize";
    if (needs_method && cfg.method.empty()) {
      err << "error: --method is required\n";
      return kUsage;
    }
    if (name == "optimize" && (cfg.s < 1 || cfg.p < 1)) {
      err << "error: --s and --p are required\n";
      return kUsage;
    }
    if (name == "list-methods") return list_methods(cfg, out);
    if (name == "order-check") return order_check(cfg, out);
    if (name == "ssp-coef") return ssp_coef(cfg, out);
    if (name == "verify") return verify(cfg, out);
    if (name == "optimize") return optimize_cmd(cfg, out);
    if (name == "sweep") return sweep_cmd(cfg, out);
    if (name == "positivity") return positivity_cmd(cfg, out);
    if (name == "converge") return converge_cmd(cfg, out);
    return kUsage;
  } catch (const UnknownMethodError& e) {
    err << "error: " << e.what() << '\n';
    return kUnknownMethod;
  } catch (const FileFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedFile;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedFile;
  } catch (const LambdaGridError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidLambdaGrid;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace mdrk::cli
