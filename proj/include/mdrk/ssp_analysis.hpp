#pragma once

// Strong-stability certification of two-derivative multistage methods with
// respect to forward Euler plus Taylor-series base steps (SSP-TS) and forward
// Euler plus second-derivative base steps (SSP-SD).
//
// The canonical decomposition of the block form
//   y = e u + dt S F(y) + dt^2 Shat Ft(y)
// at radii (r, rhat) is
//   R = (I + r S + 2 rhat (rhat - r) Shat)^{-1},
//   P = r R (S - 2 rhat Shat),   Q = 2 rhat^2 R Shat,
// with R + P + Q = I. The method is a convex combination of base steps when
// R e, P and Q are componentwise nonnegative; tying r = K rhat gives the
// SSP-TS coefficient.

#include "mdrk/linalg.hpp"
#include "mdrk/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mdrk {

inline constexpr double kFeasibilityTolerance = 1e-12;

struct Decomposition {
  Matrix R;
  Matrix P;
  Matrix Q;
};

struct FeasibilityResult {
  bool feasible = false;
  Decomposition witness;
  double min_Re = 0.0;
  double min_P = 0.0;
  double min_Q = 0.0;
};

struct SSPCertificate {
  double k = kInfinity;
  double r_max = 0.0;
  Decomposition witness;
  double min_Re = 0.0;
  double min_P = 0.0;
  double min_Q = 0.0;
  double tolerance = kFeasibilityTolerance;
  bool feasible_at_zero_plus = false;
};

inline Decomposition canonical_decomposition(const BlockForm& f, double r, double rhat) {
  const Matrix R = linalg::unit_lower_inverse(r * f.S + 2.0 * rhat * (rhat - r) * f.Shat);
  return {R, r * R * (f.S - 2.0 * rhat * f.Shat), 2.0 * rhat * rhat * R * f.Shat};
}

inline Decomposition canonical_decomposition(const Tableau& t, double r, double rhat) {
  if (r < 0.0 || rhat < 0.0) throw Error("decomposition radii must be nonnegative");
  return canonical_decomposition(block_form(t), r, rhat);
}

/// Nonnegativity check of the decomposition at r and rhat = r / k. P and Q
/// are tested per unit radius (P / r and Q / (2 rhat^2)) so that the tolerance
/// does not admit O(r^2) violations near r = 0; min_P and min_Q report those
/// scaled minima.
///
/// For k = infinity the Taylor-series step carries no constraint: rhat -> 0,
/// Q vanishes identically and only (I + rS)^{-1} e and r (I + rS)^{-1} S are
/// checked.
inline FeasibilityResult ts_feasible(const BlockForm& f, double r, double k,
                                     double tol = kFeasibilityTolerance) {
  const auto n = f.S.rows();
  FeasibilityResult out;
  if (std::isinf(k)) {
    const Matrix R = linalg::unit_lower_inverse(r * f.S);
    out.witness = {R, r * R * f.S, Matrix::Zero(n, n)};
    out.min_P = linalg::min_entry(Matrix(R * f.S));
    out.min_Q = 0.0;
  } else {
    const double rhat = r / k;
    const Matrix R = linalg::unit_lower_inverse(r * f.S + 2.0 * rhat * (rhat - r) * f.Shat);
    const Matrix P_unit = R * (f.S - 2.0 * rhat * f.Shat);
    const Matrix Q_unit = R * f.Shat;
    out.witness = {R, r * P_unit, 2.0 * rhat * rhat * Q_unit};
    out.min_P = linalg::min_entry(P_unit);
    out.min_Q = linalg::min_entry(Q_unit);
  }
  out.min_Re = linalg::min_entry(Vector(out.witness.R.rowwise().sum()));
  out.feasible = out.min_Re >= -tol && out.min_P >= -tol && out.min_Q >= -tol;
  return out;
}

inline FeasibilityResult ts_feasible(const Tableau& t, double r, double k,
                                     double tol = kFeasibilityTolerance) {
  if (r < 0.0) throw Error("radius must be nonnegative");
  if (!(k > 0.0)) throw Error("K must be positive");
  return ts_feasible(block_form(t), r, k, tol);
}

namespace ssp_detail {

inline constexpr double kSmallestRadius = 1e-8;
inline constexpr double kRadiusCap = 65536.0;  // 2^16

/// Largest r with feasible(r), assuming feasibility is monotone in r.
/// Returns 0 when even kSmallestRadius is infeasible.
inline double max_feasible_radius(const std::function<bool(double)>& feasible) {
  if (!feasible(kSmallestRadius)) return 0.0;
  double lo = kSmallestRadius;
  double hi = 1.0;
  while (feasible(hi)) {
    lo = hi;
    if (hi >= kRadiusCap) return kRadiusCap;
    hi *= 2.0;
  }
  while (hi - lo >= 1e-12 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace ssp_detail

/// SSP-TS coefficient for Taylor-series ratio k (k may be infinite).
inline SSPCertificate compute_cts(const Tableau& t, double k) {
  if (!(k > 0.0)) throw Error("K must be positive");
  const BlockForm f = block_form(t);
  SSPCertificate cert;
  cert.k = k;
  cert.r_max = ssp_detail::max_feasible_radius(
      [&](double r) { return ts_feasible(f, r, k).feasible; });
  cert.feasible_at_zero_plus = cert.r_max > 0.0;
  const FeasibilityResult at = ts_feasible(f, cert.r_max, k);
  cert.witness = at.witness;
  cert.min_Re = at.min_Re;
  cert.min_P = at.min_P;
  cert.min_Q = at.min_Q;
  return cert;
}

// ---------------------------------------------------------------------------
// SSP-SD
// ---------------------------------------------------------------------------

/// Componentwise check of (I + rS + rhat Shat)^{-1} {e, rS, rhat Shat} >= 0,
/// with the last two scaled per unit radius.
inline bool sd_feasible(const BlockForm& f, double r, double rhat,
                        double tol = kFeasibilityTolerance) {
  const Matrix N = linalg::unit_lower_inverse(r * f.S + rhat * f.Shat);
  return linalg::min_entry(Vector(N.rowwise().sum())) >= -tol &&
         linalg::min_entry(Matrix(N * f.S)) >= -tol &&
         linalg::min_entry(Matrix(N * f.Shat)) >= -tol;
}

struct SDResult {
  double r_max = 0.0;
  double rhat_max = 0.0;
  double csd = 0.0;
};

/// Sweeps rhat over a logarithmic grid, bisects r for each, and keeps the
/// pair maximizing min{r, ktilde * rhat}.
inline SDResult compute_csd(const Tableau& t, double ktilde, int grid_points = 241) {
  if (!(ktilde > 0.0)) throw Error("Ktilde must be positive");
  const BlockForm f = block_form(t);
  SDResult best;
  const double log_lo = std::log10(ssp_detail::kSmallestRadius);
  const double log_hi = std::log10(ssp_detail::kRadiusCap);
  for (int g = 0; g < grid_points; ++g) {
    const double rhat =
        std::pow(10.0, log_lo + (log_hi - log_lo) * g / static_cast<double>(grid_points - 1));
    const double r = ssp_detail::max_feasible_radius(
        [&](double rr) { return sd_feasible(f, rr, rhat); });
    if (r <= 0.0) continue;
    const double value = std::min(r, ktilde * rhat);
    if (value > best.csd) best = {r, rhat, value};
  }
  return best;
}

/// Taylor-series ratio K implied by forward-Euler and second-derivative
/// conditions with ratio ktilde: K = ktilde (sqrt(ktilde^2 + 2) - ktilde).
inline double k_from_ktilde(double ktilde) {
  if (!(ktilde > 0.0)) throw Error("Ktilde must be positive");
  // Rationalized to avoid cancellation for large ktilde.
  return 2.0 * ktilde / (std::sqrt(ktilde * ktilde + 2.0) + ktilde);
}

/// Number of F and Ft evaluations one step actually performs.
inline int function_evaluations(const Tableau& t) {
  const int s = t.stages();
  if (t.variant() == Variant::M3) return s + 1;
  if (t.variant() != Variant::External) return 2 * s;
  int ft = 0;
  for (int j = 0; j < s; ++j)
    if (t.bhat()[j] != 0.0 || t.Ahat().col(j).cwiseAbs().maxCoeff() != 0.0) ++ft;
  return s + ft;
}

/// SSP coefficient per function evaluation.
inline double effective_coefficient(double cts, const Tableau& t) {
  if (cts < 0.0) throw Error("SSP coefficient must be nonnegative");
  return cts / function_evaluations(t);
}

}  // namespace mdrk
