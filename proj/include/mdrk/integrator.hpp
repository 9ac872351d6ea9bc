#pragma once

// Explicit two-derivative multistage stepper for autonomous systems
// u' = F(u), with Ft approximating the second derivative u'' = F'(u) F(u).

#include "mdrk/linalg.hpp"
#include "mdrk/tableau.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mdrk {

using Operator = std::function<Vector(const Vector&)>;

struct RhsPair {
  Operator f;
  Operator ftilde;
};

enum class EventKind { Stage, Step };

/// Passed to observers after each stage value is formed (stage = 1..s, the
/// first being u^n itself) and after each completed step (stage = 0).
struct Observation {
  EventKind kind;
  int step;   // 0-based index of the step in progress
  int stage;
  double time;
  const Vector& state;
};

/// Returning false stops the integration after the current event.
using Observer = std::function<bool(const Observation&)>;

struct StepResult {
  Vector u;
  std::vector<Vector> stages;  // filled only on request
  int f_evaluations = 0;
  int ftilde_evaluations = 0;
  bool finite = true;
};

namespace integrator_detail {

/// Stages whose Ft value enters some later stage or the output. For M3
/// tableaus this is only the first stage.
inline std::vector<bool> ftilde_needed(const Tableau& t) {
  const int s = t.stages();
  std::vector<bool> need(static_cast<std::size_t>(s), false);
  for (int j = 0; j < s; ++j) {
    bool used = t.bhat()[j] != 0.0;
    for (int i = j + 1; i < s && !used; ++i) used = t.Ahat()(i, j) != 0.0;
    need[static_cast<std::size_t>(j)] = used;
  }
  return need;
}

inline std::vector<bool> f_needed(const Tableau& t) {
  const int s = t.stages();
  std::vector<bool> need(static_cast<std::size_t>(s), false);
  for (int j = 0; j < s; ++j) {
    bool used = t.b()[j] != 0.0;
    for (int i = j + 1; i < s && !used; ++i) used = t.A()(i, j) != 0.0;
    need[static_cast<std::size_t>(j)] = used;
  }
  return need;
}

}  // namespace integrator_detail

/// Workspace-holding stepper; reuse it across steps of one integration.
class Stepper {
public:
  Stepper(Tableau t, RhsPair rhs)
      : t_(std::move(t)), rhs_(std::move(rhs)),
        need_f_(integrator_detail::f_needed(t_)),
        need_ft_(integrator_detail::ftilde_needed(t_)) {
    if (!linalg::is_strictly_lower(t_.A()) || !linalg::is_strictly_lower(t_.Ahat()))
      throw Error("integrator requires an explicit tableau");
    if (!rhs_.f || !rhs_.ftilde) throw Error("right-hand side pair is incomplete");
  }

  const Tableau& tableau() const { return t_; }

  /// One step of size dt. `on_stage(i, y_i)` is called for i = 1..s and may
  /// return false to abandon the step (the result is then marked non-finite
  /// only if a non-finite value was seen).
  template <typename OnStage>
  StepResult advance(const Vector& u, double dt, bool keep_stages, OnStage&& on_stage) {
    if (!(dt > 0.0)) throw Error("time step must be positive");
    const int s = t_.stages();
    const auto n = u.size();
    f_.resize(static_cast<std::size_t>(s));
    ft_.resize(static_cast<std::size_t>(s));
    StepResult out;
    const double dt2 = dt * dt;
    Vector y(n);
    for (int i = 0; i < s; ++i) {
      y = u;
      for (int j = 0; j < i; ++j) {
        const double a = t_.A()(i, j);
        const double ah = t_.Ahat()(i, j);
        if (a != 0.0) y.noalias() += (dt * a) * f_[static_cast<std::size_t>(j)];
        if (ah != 0.0) y.noalias() += (dt2 * ah) * ft_[static_cast<std::size_t>(j)];
      }
      if (!linalg::all_finite(y)) {
        out.finite = false;
        out.u = y;
        return out;
      }
      if (keep_stages) out.stages.push_back(y);
      if (!on_stage(i + 1, y)) {
        out.u = y;
        return out;
      }
      if (need_f_[static_cast<std::size_t>(i)]) {
        f_[static_cast<std::size_t>(i)] = rhs_.f(y);
        ++out.f_evaluations;
      }
      if (need_ft_[static_cast<std::size_t>(i)]) {
        ft_[static_cast<std::size_t>(i)] = rhs_.ftilde(y);
        ++out.ftilde_evaluations;
      }
    }
    out.u = u;
    for (int j = 0; j < s; ++j) {
      const double b = t_.b()[j];
      const double bh = t_.bhat()[j];
      if (b != 0.0) out.u.noalias() += (dt * b) * f_[static_cast<std::size_t>(j)];
      if (bh != 0.0) out.u.noalias() += (dt2 * bh) * ft_[static_cast<std::size_t>(j)];
    }
    out.finite = linalg::all_finite(out.u);
    return out;
  }

  StepResult advance(const Vector& u, double dt, bool keep_stages = false) {
    return advance(u, dt, keep_stages, [](int, const Vector&) { return true; });
  }

private:
  Tableau t_;
  RhsPair rhs_;
  std::vector<bool> need_f_;
  std::vector<bool> need_ft_;
  std::vector<Vector> f_;
  std::vector<Vector> ft_;
};

inline StepResult step(const Tableau& t, const RhsPair& rhs, const Vector& u, double dt,
                       bool keep_stages = true) {
  Stepper stepper(t, rhs);
  return stepper.advance(u, dt, keep_stages);
}

enum class HaltReason { None, NonFinite, ObserverStop };

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::vector<Vector>> stage_snapshots;
  int steps_completed = 0;
  int f_evaluations = 0;
  int ftilde_evaluations = 0;
  HaltReason halt = HaltReason::None;
  std::string diagnostic;

  bool halted() const { return halt != HaltReason::None; }
};

struct IntegrateOptions {
  bool keep_states = true;  // otherwise only the initial and last state
  bool keep_stages = false;
};

inline Trajectory integrate(const Tableau& t, const RhsPair& rhs, const Vector& u0, double dt,
                            int n_steps, const Observer& observer = {},
                            IntegrateOptions options = {}) {
  if (n_steps < 1) throw Error("number of steps must be at least 1");
  if (!(dt > 0.0)) throw Error("time step must be positive");
  Stepper stepper(t, rhs);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  Vector u = u0;
  bool stop = false;
  for (int n = 0; n < n_steps && !stop; ++n) {
    const double t_n = n * dt;
    auto on_stage = [&](int i, const Vector& y) {
      if (observer && !observer({EventKind::Stage, n, i, t_n, y})) stop = true;
      return !stop;
    };
    StepResult r = stepper.advance(u, dt, options.keep_stages, on_stage);
    traj.f_evaluations += r.f_evaluations;
    traj.ftilde_evaluations += r.ftilde_evaluations;
    if (!r.finite) {
      traj.halt = HaltReason::NonFinite;
      traj.diagnostic = "non-finite state encountered in step " + std::to_string(n + 1) +
                        " (t = " + std::to_string(t_n) + ")";
      break;
    }
    if (stop) {
      traj.halt = HaltReason::ObserverStop;
      traj.diagnostic = "stopped by observer during step " + std::to_string(n + 1);
      break;
    }
    u = std::move(r.u);
    ++traj.steps_completed;
    const double t_next = (n + 1) * dt;
    if (options.keep_states || n + 1 == n_steps) {
      traj.times.push_back(t_next);
      traj.states.push_back(u);
    }
    if (options.keep_stages) traj.stage_snapshots.push_back(std::move(r.stages));
    if (observer && !observer({EventKind::Step, n, 0, t_next, u})) {
      traj.halt = HaltReason::ObserverStop;
      traj.diagnostic = "stopped by observer after step " + std::to_string(n + 1);
      if (!options.keep_states && n + 1 != n_steps) {
        traj.times.push_back(t_next);
        traj.states.push_back(u);
      }
      stop = true;
    }
  }
  return traj;
}

}  // namespace mdrk
