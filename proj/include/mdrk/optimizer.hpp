#pragma once

// Search for methods maximizing the SSP-TS coefficient at a given K.
//
// At a trial radius r (and rhat = r / K) the search runs in the canonical
// Shu-Osher variables P, Q >= 0 with row sums of P + Q at most one; each row
// is the normalized square of free variables plus a slack. Every such point
// is, by construction, a method whose decomposition at (r, rhat) is
// nonnegative:
//
//   Shat = (I - P - Q)^{-1} Q / (2 rhat^2),  S = (I - P - Q)^{-1} P / r + 2 rhat Shat.
//
// The inner problem is therefore just the order conditions (plus stage order
// two for M2/M3), solved by Levenberg-Marquardt from random starts. The outer
// loop brackets and bisects r. The final tableau is re-certified
// independently by ssp_analysis.

#include "mdrk/linalg.hpp"
#include "mdrk/methods.hpp"
#include "mdrk/order_conditions.hpp"
#include "mdrk/ssp_analysis.hpp"
#include "mdrk/tableau.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mdrk {

struct OptimizationSpec {
  int s = 3;
  int p = 3;
  Variant variant = Variant::M2;
  double k = 1.0;
  int seeds = 32;
  int budget = 2000;  // Levenberg-Marquardt iterations per start
  double tol_order = 1e-10;
  double tol_feas = kFeasibilityTolerance;
  std::uint64_t seed = 1;
  int outer_iterations = 40;
  std::function<void(const std::string&)> log;  // progress messages, optional
};

inline void check(const OptimizationSpec& spec) {
  if (spec.s < 1 || spec.s > kMaxStages) throw Error("stage count must lie in 1..16");
  if (spec.p < 1 || spec.p > kMaxOrder) throw Error("order must lie in 1..6");
  if (spec.variant == Variant::External) throw Error("optimizer variant must be M1, M2 or M3");
  if (!(spec.k > 0.0)) throw Error("K must be positive");
  if (spec.seeds < 1 || spec.budget < 1 || spec.outer_iterations < 1)
    throw Error("seeds, budget and outer iterations must be positive");
}

inline std::string method_name(Variant v, int s, int p, double k) {
  std::ostringstream os;
  os << to_string(v) << '(' << s << ',' << p << ',';
  if (std::isinf(k))
    os << "inf";
  else
    os << k;
  os << ')';
  return os.str();
}

namespace optimizer_detail {

/// Maps a free vector x to a tableau at fixed (r, K). Rows 1..s of the block
/// form (row s is the output) each own the squares of their P and Q entries
/// and one slack. For K = infinity Q vanishes and Shat is unconstrained, so
/// its entries are free variables instead.
class Parametrization {
public:
  Parametrization(int s, Variant variant, double k) : s_(s), variant_(variant), k_(k) {
    for (int i = 1; i <= s; ++i) {
      Row row;
      row.first = n_;
      for (int j = 0; j < i && j < s; ++j) row.p_cols.push_back(j);
      for (int j = 0; j < i && j < s; ++j)
        if (variant != Variant::M3 || j == 0) row.q_cols.push_back(j);
      const int n_p = static_cast<int>(row.p_cols.size());
      const int n_q = static_cast<int>(row.q_cols.size());
      n_ += n_p + (finite_k() ? n_q : 0) + 1;
      rows_.push_back(row);
    }
    if (!finite_k()) {
      shat_first_ = n_;
      for (const auto& row : rows_) n_ += static_cast<int>(row.q_cols.size());
    }
  }

  int size() const { return n_; }
  bool finite_k() const { return !std::isinf(k_); }

  Tableau decode(const Vector& x, double r) const {
    const int n = s_ + 1;
    Matrix P = Matrix::Zero(n, n);
    Matrix Q = Matrix::Zero(n, n);
    Matrix Shat_free = Matrix::Zero(n, n);
    int free_at = shat_first_;
    for (int i = 1; i <= s_; ++i) {
      const Row& row = rows_[static_cast<std::size_t>(i - 1)];
      const int n_p = static_cast<int>(row.p_cols.size());
      const int n_q = finite_k() ? static_cast<int>(row.q_cols.size()) : 0;
      double denom = 0.0;
      for (int v = 0; v < n_p + n_q + 1; ++v) denom += x[row.first + v] * x[row.first + v];
      if (denom <= 0.0) denom = 1.0;
      for (int v = 0; v < n_p; ++v) {
        const double xv = x[row.first + v];
        P(i, row.p_cols[static_cast<std::size_t>(v)]) = xv * xv / denom;
      }
      for (int v = 0; v < n_q; ++v) {
        const double xv = x[row.first + n_p + v];
        Q(i, row.q_cols[static_cast<std::size_t>(v)]) = xv * xv / denom;
      }
      if (!finite_k())
        for (int col : row.q_cols) Shat_free(i, col) = x[free_at++];
    }
    const Matrix Rinv = linalg::unit_lower_inverse(-(P + Q));
    Matrix S, Shat;
    if (finite_k()) {
      const double rhat = r / k_;
      Shat = Rinv * Q / (2.0 * rhat * rhat);
      S = Rinv * P / r + 2.0 * rhat * Shat;
    } else {
      Shat = Shat_free;
      S = Rinv * P / r;
    }
    return Tableau(S.topLeftCorner(s_, s_), Shat.topLeftCorner(s_, s_),
                   S.row(s_).head(s_).transpose(), Shat.row(s_).head(s_).transpose(), variant_,
                   k_);
  }

  Vector random_point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 0.1);
    Vector x(n_);
    for (int v = 0; v < n_; ++v) x[v] = v < shat_first_ ? u(rng) : g(rng);
    return x;
  }

private:
  struct Row {
    int first = 0;
    std::vector<int> p_cols;
    std::vector<int> q_cols;
  };
  int s_;
  Variant variant_;
  double k_;
  int n_ = 0;
  int shat_first_ = std::numeric_limits<int>::max();
  std::vector<Row> rows_;
};

/// Order residuals of orders 1..p, followed by the stage-order-two residuals
/// of stages 2..s for M2/M3.
inline Vector constraint_residuals(const Tableau& t, int p, Variant variant) {
  const Vector order = residual_vector(t, p);
  if (variant == Variant::M1 || t.stages() < 2) return order;
  const Vector tau2 = tau2_residual(t).tail(t.stages() - 1);
  Vector out(order.size() + tau2.size());
  out << order, tau2;
  return out;
}

struct SolveResult {
  Vector x;
  double violation = std::numeric_limits<double>::infinity();  // max |residual|
  bool converged = false;
};

/// Levenberg-Marquardt with a forward-difference Jacobian.
inline SolveResult levenberg_marquardt(const std::function<Vector(const Vector&)>& residual,
                                       Vector x, int budget, double tol) {
  SolveResult out;
  Vector g = residual(x);
  double cost = g.squaredNorm();
  double mu = 1e-3;
  const auto n = x.size();
  Matrix J(g.size(), n);
  for (int it = 0; it < budget; ++it) {
    if (!linalg::all_finite(g)) break;
    if (g.cwiseAbs().maxCoeff() < tol) {
      out.converged = true;
      break;
    }
    for (Eigen::Index v = 0; v < n; ++v) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[v]));
      Vector xp = x;
      xp[v] += h;
      J.col(v) = (residual(xp) - g) / h;
    }
    const Matrix JtJ = J.transpose() * J;
    const Vector Jtg = J.transpose() * g;
    bool improved = false;
    while (mu < 1e12) {
      Matrix H = JtJ;
      H.diagonal().array() += mu * (1.0 + JtJ.diagonal().array());
      const Vector step = H.ldlt().solve(-Jtg);
      const Vector x_new = x + step;
      const Vector g_new = residual(x_new);
      const double c_new = g_new.squaredNorm();
      if (linalg::all_finite(g_new) && c_new < cost) {
        x = x_new;
        g = g_new;
        cost = c_new;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }
  out.x = x;
  out.violation = linalg::all_finite(g) ? g.cwiseAbs().maxCoeff()
                                        : std::numeric_limits<double>::infinity();
  out.converged = out.converged || out.violation < tol;
  return out;
}

}  // namespace optimizer_detail

inline std::string format_residual(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

struct VerificationReport {
  int order = 0;
  double max_order_residual = 0.0;
  bool order_ok = false;
  bool structure_ok = false;
  std::vector<std::string> issues;
  SSPCertificate certificate;
  bool accepted = false;
};

/// Independent re-check of a candidate against a specification.
inline VerificationReport verify_candidate(const Tableau& t, const OptimizationSpec& spec) {
  VerificationReport rep;
  rep.order = order_of(t, spec.tol_order);
  rep.max_order_residual = residual_vector(t, spec.p).cwiseAbs().maxCoeff();
  rep.order_ok = rep.order >= spec.p;
  if (!rep.order_ok)
    rep.issues.push_back("order conditions of order " + std::to_string(rep.order + 1) +
                         " violated (max residual through order " + std::to_string(spec.p) +
                         " is " + format_residual(rep.max_order_residual) + ")");
  const ValidationReport structure = validate(t.with_variant(spec.variant));
  rep.structure_ok = structure.clean();
  for (const auto& d : structure.issues) rep.issues.push_back(d.message);
  rep.certificate = compute_cts(t, spec.k);
  if (rep.certificate.r_max <= 0.0) rep.issues.push_back("not SSP-TS: certified C_TS is 0");
  rep.accepted = rep.order_ok && rep.structure_ok && rep.certificate.r_max > 0.0;
  return rep;
}

struct OptimizationResult {
  bool found = false;
  MethodRecord record{"", Tableau(Matrix::Zero(1, 1), Matrix::Zero(1, 1), Vector::Ones(1),
                                  Vector::Zero(1)),
                      0, std::nullopt, MethodSource::OptimizerGenerated};
  double internal_r = 0.0;  // radius at which the final tableau was constructed
  double cts = 0.0;         // independently certified coefficient
  double best_violation = std::numeric_limits<double>::infinity();
  std::string message;
};

inline OptimizationResult optimize(const OptimizationSpec& spec) {
  check(spec);
  using namespace optimizer_detail;
  const Parametrization param(spec.s, spec.variant, spec.k);
  std::mt19937_64 rng(spec.seed);
  const double solve_tol = spec.tol_order * 1e-2;
  auto log = [&](const std::string& msg) {
    if (spec.log) spec.log(msg);
  };

  OptimizationResult result;
  std::optional<Vector> best_x;
  // Try the warm start first, then fresh random starts.
  auto attempt = [&](double r) -> std::optional<Vector> {
    auto residual = [&](const Vector& x) {
      return constraint_residuals(param.decode(x, r), spec.p, spec.variant);
    };
    if (best_x) {
      const SolveResult sr = levenberg_marquardt(residual, *best_x, spec.budget, solve_tol);
      if (sr.converged) return sr.x;
      result.best_violation = std::min(result.best_violation, sr.violation);
    }
    for (int k = 0; k < spec.seeds; ++k) {
      const SolveResult sr =
          levenberg_marquardt(residual, param.random_point(rng), spec.budget, solve_tol);
      if (sr.converged) return sr.x;
      result.best_violation = std::min(result.best_violation, sr.violation);
    }
    return std::nullopt;
  };

  // Bracket: shrink until feasible, then grow until infeasible.
  double lo = 0.0, hi = 0.0;
  double r = 0.5;
  for (;;) {
    if (auto x = attempt(r)) {
      best_x = x;
      lo = r;
      break;
    }
    if (r < 1e-3) {
      result.message = "no feasible method found (best order violation " +
                       format_residual(result.best_violation) + ")";
      return result;
    }
    r *= 0.5;
  }
  log("feasible at r = " + std::to_string(lo));
  for (r = lo * 1.5;; r *= 1.5) {
    if (auto x = attempt(r)) {
      best_x = x;
      lo = r;
      log("feasible at r = " + std::to_string(lo));
      if (lo > 64.0) break;
    } else {
      hi = r;
      break;
    }
  }
  for (int it = 0; it < spec.outer_iterations && hi - lo > 1e-9 * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (auto x = attempt(mid)) {
      best_x = x;
      lo = mid;
    } else {
      hi = mid;
    }
    log("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  Tableau t = clamp_roundoff(param.decode(*best_x, lo));
  const VerificationReport rep = verify_candidate(t, spec);
  result.internal_r = lo;
  result.cts = rep.certificate.r_max;
  result.best_violation = rep.max_order_residual;
  result.record = {method_name(spec.variant, spec.s, spec.p, spec.k), t, rep.order, result.cts,
                   MethodSource::OptimizerGenerated};
  result.found = rep.accepted;
  result.message = rep.accepted ? "ok" : "candidate failed verification";
  for (const auto& issue : rep.issues) result.message += "; " + issue;
  return result;
}

}  // namespace mdrk
