#pragma once

// Measurement harnesses: total-variation rise and positivity sweeps over
// lambda = dt/dx, and temporal convergence studies.

#include "mdrk/integrator.hpp"
#include "mdrk/linalg.hpp"
#include "mdrk/spatial.hpp"
#include "mdrk/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace mdrk {

inline constexpr double kTvThreshold = 1e-10;

/// sum_j |u_{j+1} - u_j|, including the wrap-around jump when periodic.
inline double total_variation(const Vector& u, bool periodic = true) {
  const auto n = u.size();
  if (n < 2) return 0.0;
  double tv = 0.0;
  for (Eigen::Index j = 0; j + 1 < n; ++j) tv += std::abs(u[j + 1] - u[j]);
  if (periodic) tv += std::abs(u[0] - u[n - 1]);
  return tv;
}

enum class Monitor { TotalVariation, Positivity };

/// A semi-discrete problem together with the step-size normalization of its
/// sweeps: dt = lambda * dt_unit, and the base forward-Euler step dt_fe.
struct ProblemSpec {
  std::string name;
  Grid1D grid;
  RhsPair rhs;
  Vector initial;
  double dt_unit = 0.0;
  double dt_fe = 0.0;
  double k = 1.0;
  Monitor monitor = Monitor::TotalVariation;
  // When set, each step uses dt = lambda * dx / wave_speed(u^n) instead of
  // lambda * dt_unit, so lambda is measured against the current wave speed.
  std::function<double(const Vector&)> wave_speed;
};

struct ProblemOptions {
  int m = 0;  // 0: the problem's default
  DerivativeChoice choice = DerivativeChoice::Same;
  double weno_eps = kWenoEpsilon;
  double gravity = 1.0;
};

inline const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"advection-upwind", "burgers-upwind",
                                              "advection-weno", "burgers-weno", "shallow-water"};
  return names;
}

/// Square wave on [-1, 1] for the scalar problems (601 points for upwind,
/// 201 for WENO); dam break on [0, 1] with 201 points for shallow water.
inline ProblemSpec make_problem(const std::string& name, const ProblemOptions& opt = {}) {
  ProblemSpec p;
  p.name = name;
  if (name == "shallow-water") {
    p.grid = make_grid(opt.m ? opt.m : 201, 0.0, 1.0, false);
    const ShallowWater sw(p.grid, opt.gravity);
    p.rhs = sw.rhs();
    p.initial = dam_break(p.grid);
    // lambda is measured in units of the initial maximal wave speed.
    p.dt_unit = p.grid.dx / sw.max_wave_speed(p.initial);
    p.dt_fe = p.dt_unit;
    p.wave_speed = [sw](const Vector& u) { return sw.max_wave_speed(u); };
    p.monitor = Monitor::Positivity;
    return p;
  }
  const bool upwind = name == "advection-upwind" || name == "burgers-upwind";
  const bool weno = name == "advection-weno" || name == "burgers-weno";
  if (!upwind && !weno) throw Error("unknown problem '" + name + "'");
  p.grid = make_grid(opt.m ? opt.m : (upwind ? 601 : 201), -1.0, 1.0, true);
  if (name == "advection-upwind") p.rhs = advection_upwind(p.grid);
  if (name == "burgers-upwind") p.rhs = burgers_upwind(p.grid);
  if (name == "advection-weno") p.rhs = advection_weno(p.grid, opt.choice, opt.weno_eps);
  if (name == "burgers-weno") p.rhs = burgers_weno(p.grid, opt.choice, opt.weno_eps);
  p.initial = square_wave(p.grid);
  // Unit wave speed for advection; max|u0| = 1 for Burgers on the square wave.
  p.dt_unit = p.grid.dx;
  p.dt_fe = p.grid.dx;
  return p;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepPoint {
  double lambda = 0.0;
  double per_step_rise = 0.0;
  double per_stage_rise = 0.0;
  bool violated = false;
  bool non_finite = false;
};

struct SweepReport {
  std::vector<SweepPoint> points;  // strictly increasing lambda
  double threshold = kTvThreshold;
  double lambda_obs = 0.0;
  double cts_obs = 0.0;
  bool crossed = false;  // whether any grid point was violated
};

/// Largest lambda of the grid below the first violated point.
inline void summarize(SweepReport& report, double dt_unit, double dt_fe) {
  report.lambda_obs = 0.0;
  report.crossed = false;
  for (const auto& pt : report.points) {
    if (pt.violated) {
      report.crossed = true;
      break;
    }
    report.lambda_obs = pt.lambda;
  }
  report.cts_obs = report.lambda_obs * dt_unit / dt_fe;
}

/// Runs one lambda. For TV problems the rises are the largest increases of
/// TV over a step and over consecutive stages; for positivity problems they
/// are the depth of the most negative height seen at steps and at stages.
inline SweepPoint measure(const Tableau& t, const ProblemSpec& p, int n_steps, double lambda,
                          double threshold = kTvThreshold) {
  SweepPoint pt;
  pt.lambda = lambda;
  const double dt = lambda * p.dt_unit;
  const int m = p.grid.m;
  if (p.monitor == Monitor::TotalVariation) {
    double tv_prev_stage = 0.0, tv_step_start = 0.0;
    double step_rise = -std::numeric_limits<double>::infinity();
    double stage_rise = -std::numeric_limits<double>::infinity();
    Observer obs = [&](const Observation& o) {
      const double tv = total_variation(o.state, p.grid.periodic);
      if (o.kind == EventKind::Stage) {
        if (o.stage == 1) {
          tv_step_start = tv;
        } else {
          stage_rise = std::max(stage_rise, tv - tv_prev_stage);
        }
      } else {
        stage_rise = std::max(stage_rise, tv - tv_prev_stage);
        step_rise = std::max(step_rise, tv - tv_step_start);
      }
      tv_prev_stage = tv;
      return true;
    };
    const Trajectory traj = integrate(t, p.rhs, p.initial, dt, n_steps, obs, {false, false});
    pt.per_step_rise = step_rise;
    pt.per_stage_rise = stage_rise;
    pt.non_finite = traj.halt == HaltReason::NonFinite;
    pt.violated = pt.non_finite || !(step_rise <= threshold) || !(stage_rise <= threshold);
  } else {
    double min_step = std::numeric_limits<double>::infinity();
    double min_stage = std::numeric_limits<double>::infinity();
    Stepper stepper(t, p.rhs);
    Vector u = p.initial;
    for (int n = 0; n < n_steps; ++n) {
      const double h_dt = p.wave_speed ? lambda * p.grid.dx / p.wave_speed(u) : dt;
      if (!std::isfinite(h_dt) || !(h_dt > 0.0)) {
        pt.non_finite = true;
        break;
      }
      bool negative = false;
      StepResult r = stepper.advance(u, h_dt, false, [&](int, const Vector& y) {
        min_stage = std::min(min_stage, y.head(m).minCoeff());
        // Once a height is negative sqrt(h) is undefined; stop here.
        negative = min_stage < 0.0;
        return !negative;
      });
      if (!r.finite) {
        pt.non_finite = true;
        break;
      }
      if (negative) break;
      u = std::move(r.u);
      min_step = std::min(min_step, u.head(m).minCoeff());
      if (min_step < 0.0) break;
    }
    pt.per_step_rise = std::max(0.0, -min_step);
    pt.per_stage_rise = std::max(0.0, -min_stage);
    pt.violated = pt.non_finite || min_step < 0.0 || min_stage < 0.0;
  }
  return pt;
}

struct LambdaGrid {
  double start = 0.05;
  double stop = 4.0;
  double step = 0.05;

  std::vector<double> values() const {
    if (!(step > 0.0) || !(stop >= start) || !(start > 0.0))
      throw Error("invalid lambda grid: need 0 < start <= stop and step > 0");
    std::vector<double> v;
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
  }
};

inline SweepReport sweep(const Tableau& t, const ProblemSpec& p, int n_steps,
                         const std::vector<double>& lambdas, double threshold = kTvThreshold) {
  if (n_steps < 1) throw Error("number of steps must be at least 1");
  if (lambdas.empty()) throw Error("empty lambda grid");
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1])))
      throw Error("lambda grid must be positive and strictly increasing");
  SweepReport report;
  report.threshold = threshold;
  for (double lambda : lambdas) report.points.push_back(measure(t, p, n_steps, lambda, threshold));
  summarize(report, p.dt_unit, p.dt_fe);
  return report;
}

/// Coarse scan followed by a fine scan of the coarse interval holding the
/// first violation; lambda_obs is resolved to `fine_step`.
inline SweepReport refined_sweep(const Tableau& t, const ProblemSpec& p, int n_steps,
                                 const LambdaGrid& coarse, double fine_step,
                                 double threshold = kTvThreshold) {
  if (!(fine_step > 0.0)) throw Error("fine lambda step must be positive");
  SweepReport report = sweep(t, p, n_steps, coarse.values(), threshold);
  if (!report.crossed) return report;
  auto first_bad = std::find_if(report.points.begin(), report.points.end(),
                                [](const SweepPoint& pt) { return pt.violated; });
  const double hi = first_bad->lambda;
  const double lo = first_bad == report.points.begin() ? 0.0 : std::prev(first_bad)->lambda;
  std::vector<SweepPoint> fine;
  const long n = std::lround((hi - lo) / fine_step);
  for (long i = 1; i < n; ++i) {
    const double lambda = lo + static_cast<double>(i) * fine_step;
    if (lambda <= 0.0) continue;
    fine.push_back(measure(t, p, n_steps, lambda, threshold));
  }
  report.points.insert(first_bad, fine.begin(), fine.end());
  summarize(report, p.dt_unit, p.dt_fe);
  return report;
}

/// observed_cts: TV sweep on a TV-monitored problem.
inline SweepReport observed_cts(const Tableau& t, const ProblemSpec& p, int n_steps,
                                const LambdaGrid& coarse, double fine_step,
                                double threshold = kTvThreshold) {
  if (p.monitor != Monitor::TotalVariation)
    throw Error("observed_cts needs a total-variation problem; use positivity_sweep");
  return refined_sweep(t, p, n_steps, coarse, fine_step, threshold);
}

inline SweepReport positivity_sweep(const Tableau& t, const ProblemSpec& p, int n_steps,
                                    const LambdaGrid& coarse, double fine_step) {
  if (p.monitor != Monitor::Positivity)
    throw Error("positivity_sweep needs a positivity-monitored problem");
  return refined_sweep(t, p, n_steps, coarse, fine_step);
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline void write_csv(std::ostream& os, const SweepReport& r) {
  os << "lambda,per_step_rise,per_stage_rise,violated\n";
  for (const auto& pt : r.points)
    os << format_g(pt.lambda, 17) << ',' << format_g(pt.per_step_rise, 17) << ','
       << format_g(pt.per_stage_rise, 17) << ',' << (pt.violated ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

struct ConvergenceResult {
  std::vector<double> dts;
  std::vector<double> errors;
  double order = 0.0;  // least-squares slope of log(error) against log(dt)
};

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Integrates to t_final with each dt (t_final / dt must be an integer) and
/// measures the max-norm error against `exact`.
inline ConvergenceResult convergence_study(const Tableau& t, const RhsPair& rhs, const Vector& u0,
                                           double t_final, const Vector& exact,
                                           const std::vector<double>& dts) {
  if (dts.size() < 2) throw Error("convergence study needs at least two step sizes");
  ConvergenceResult out;
  std::vector<double> lx, ly;
  for (double dt : dts) {
    const long n = std::lround(t_final / dt);
    if (n < 1 || std::abs(n * dt - t_final) > 1e-9 * t_final)
      throw Error("step size does not divide the final time");
    const Trajectory traj = integrate(t, rhs, u0, dt, static_cast<int>(n), {}, {false, false});
    if (traj.halted()) throw Error("integration halted: " + traj.diagnostic);
    const double err = (traj.states.back() - exact).cwiseAbs().maxCoeff();
    out.dts.push_back(dt);
    out.errors.push_back(err);
    lx.push_back(std::log(dt));
    ly.push_back(std::log(err));
  }
  out.order = least_squares_slope(lx, ly);
  return out;
}

/// Linear test problem u' = L u with Ft(u) = L^2 u.
inline RhsPair linear_rhs(const Matrix& L) {
  const Matrix L2 = L * L;
  return {[L](const Vector& u) { return Vector(L * u); },
          [L2](const Vector& u) { return Vector(L2 * u); }};
}

}  // namespace mdrk
