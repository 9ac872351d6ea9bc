#pragma once

// One-dimensional semi-discretizations u_t = F(u) of conservation laws
// u_t + f(u)_x = 0, each paired with a second-derivative approximation
// Ft(u) ~ u_tt = -(f'(u) u_t)_x.
//
// Every scalar operator here is a flux difference -(g_{j+1/2} - g_{j-1/2})/dx
// with a numerical flux built from point values g_j; "plus" variants are
// upwind for f' >= 0 and "minus" variants for f' <= 0.

#include "mdrk/integrator.hpp"
#include "mdrk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace mdrk {

/// M points spanning [x_left, x_right] with dx = (x_right - x_left) / (M - 1).
/// Periodic grids wrap indices modulo M over the stored points.
struct Grid1D {
  int m = 0;
  double dx = 0.0;
  double x_left = 0.0;
  bool periodic = true;

  double x(int j) const { return x_left + j * dx; }
  int wrap(int j) const { return ((j % m) + m) % m; }
};

inline Grid1D make_grid(int m, double x_left, double x_right, bool periodic = true) {
  if (m < 5) throw Error("grid needs at least 5 points");
  if (!(x_right > x_left)) throw Error("grid interval is empty");
  return {m, (x_right - x_left) / (m - 1), x_left, periodic};
}

struct ScalarFlux {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::string name;
};

/// u_t = u_x written as u_t + (-u)_x = 0.
inline ScalarFlux linear_advection_flux() {
  return {[](double u) { return -u; }, [](double) { return -1.0; }, "linear"};
}

inline ScalarFlux burgers_flux() {
  return {[](double u) { return 0.5 * u * u; }, [](double u) { return u; }, "burgers"};
}

inline Vector apply_pointwise(const std::function<double(double)>& g, const Vector& u) {
  Vector out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) out[j] = g(u[j]);
  return out;
}

enum class Direction { Plus, Minus };

inline Direction opposite(Direction d) {
  return d == Direction::Plus ? Direction::Minus : Direction::Plus;
}

inline std::string to_string(Direction d) { return d == Direction::Plus ? "plus" : "minus"; }

// ---------------------------------------------------------------------------
// Flux-difference operators on periodic grids
// ---------------------------------------------------------------------------

/// First-order upwind: numerical flux g_j (plus) or g_{j+1} (minus) at j+1/2.
inline Vector upwind_difference(Direction d, const Grid1D& grid, const Vector& g) {
  const int m = grid.m;
  Vector out(m);
  for (int j = 0; j < m; ++j) {
    const double diff = d == Direction::Plus ? g[j] - g[grid.wrap(j - 1)]
                                             : g[grid.wrap(j + 1)] - g[j];
    out[j] = -diff / grid.dx;
  }
  return out;
}

inline constexpr double kWenoEpsilon = 1e-6;

namespace weno_detail {

/// Fifth-order WENO reconstruction at the interface between v[2] and v[3]
/// from the upwind-biased stencil v[0..4] (left to right, upwind on the left).
inline double reconstruct(const double v[5], double eps, double w[3] = nullptr) {
  const double is0 = 13.0 / 12.0 * std::pow(v[0] - 2 * v[1] + v[2], 2) +
                     0.25 * std::pow(v[0] - 4 * v[1] + 3 * v[2], 2);
  const double is1 = 13.0 / 12.0 * std::pow(v[1] - 2 * v[2] + v[3], 2) +
                     0.25 * std::pow(v[1] - v[3], 2);
  const double is2 = 13.0 / 12.0 * std::pow(v[2] - 2 * v[3] + v[4], 2) +
                     0.25 * std::pow(3 * v[2] - 4 * v[3] + v[4], 2);
  const double a0 = 0.1 / ((eps + is0) * (eps + is0));
  const double a1 = 0.6 / ((eps + is1) * (eps + is1));
  const double a2 = 0.3 / ((eps + is2) * (eps + is2));
  const double sum = a0 + a1 + a2;
  const double w0 = a0 / sum, w1 = a1 / sum, w2 = a2 / sum;
  if (w) {
    w[0] = w0;
    w[1] = w1;
    w[2] = w2;
  }
  return w0 * (2 * v[0] - 7 * v[1] + 11 * v[2]) / 6.0 +
         w1 * (-v[1] + 5 * v[2] + 2 * v[3]) / 6.0 + w2 * (2 * v[2] + 5 * v[3] - v[4]) / 6.0;
}

}  // namespace weno_detail

/// Numerical fluxes ghat_{j+1/2}, j = 0..m-1, of the WENO5 reconstruction.
/// Plus uses g_{j-2..j+2}; minus is its mirror image on g_{j+3..j-1}.
inline Vector weno5_interface_flux(Direction d, const Grid1D& grid, const Vector& g,
                                   double eps = kWenoEpsilon,
                                   std::vector<std::array<double, 3>>* weights = nullptr) {
  const int m = grid.m;
  Vector flux(m);
  if (weights) weights->resize(static_cast<std::size_t>(m));
  double v[5];
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < 5; ++k)
      v[k] = d == Direction::Plus ? g[grid.wrap(j - 2 + k)] : g[grid.wrap(j + 3 - k)];
    flux[j] = weno_detail::reconstruct(
        v, eps, weights ? (*weights)[static_cast<std::size_t>(j)].data() : nullptr);
  }
  return flux;
}

inline Vector weno5_difference(Direction d, const Grid1D& grid, const Vector& g,
                               double eps = kWenoEpsilon) {
  const Vector flux = weno5_interface_flux(d, grid, g, eps);
  Vector out(grid.m);
  for (int j = 0; j < grid.m; ++j) out[j] = -(flux[j] - flux[grid.wrap(j - 1)]) / grid.dx;
  return out;
}

enum class Scheme { Upwind, Weno5 };

inline std::string to_string(Scheme s) { return s == Scheme::Upwind ? "upwind" : "weno5"; }

/// A flux-difference operator D acting on point values of a flux.
struct DifferenceOperator {
  Scheme scheme = Scheme::Upwind;
  Direction direction = Direction::Plus;
  double eps = kWenoEpsilon;

  Vector operator()(const Grid1D& grid, const Vector& g) const {
    return scheme == Scheme::Upwind ? upwind_difference(direction, grid, g)
                                    : weno5_difference(direction, grid, g, eps);
  }
};

/// Operator u -> WENO^{+/-}(f(u)).
inline Operator weno5(Direction d, const Grid1D& grid, const ScalarFlux& flux,
                      double eps = kWenoEpsilon) {
  return [=](const Vector& u) { return weno5_difference(d, grid, apply_pointwise(flux.f, u), eps); };
}

struct SplitFlux {
  Vector plus;
  Vector minus;
};

/// f^{+/-} = (f(u) +/- m u) / 2 with m = max |f'(u)| over the given states.
inline SplitFlux lax_friedrichs_split(const ScalarFlux& flux, const Vector& u) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) m = std::max(m, std::abs(flux.df(u[j])));
  const Vector f = apply_pointwise(flux.f, u);
  return {0.5 * (f + m * u), 0.5 * (f - m * u)};
}

/// Which operator differentiates f'(u) u_t for the second derivative: the same
/// one used for F, or its opposite-wind counterpart.
enum class DerivativeChoice { Same, Opposite };

inline std::string to_string(DerivativeChoice c) {
  return c == DerivativeChoice::Same ? "same" : "opposite";
}

/// Ft(u) = Dt(f'(u) u_t) with u_t = f_op(u), Dt per `choice`.
inline Operator taylor_ftilde(DerivativeChoice choice, const Grid1D& grid,
                              const ScalarFlux& flux, const DifferenceOperator& d,
                              Operator f_op) {
  DifferenceOperator dt = d;
  if (choice == DerivativeChoice::Opposite) dt.direction = opposite(d.direction);
  return [=](const Vector& u) {
    const Vector ut = f_op(u);
    return dt(grid, apply_pointwise(flux.df, u).cwiseProduct(ut));
  };
}

/// F(u) = D(f(u)) with Ft from taylor_ftilde.
inline RhsPair conservation_law(const Grid1D& grid, const ScalarFlux& flux,
                                const DifferenceOperator& d,
                                DerivativeChoice choice = DerivativeChoice::Same) {
  if (!grid.periodic) throw Error("scalar conservation laws here require a periodic grid");
  Operator f = [=](const Vector& u) { return d(grid, apply_pointwise(flux.f, u)); };
  return {f, taylor_ftilde(choice, grid, flux, d, f)};
}

/// u_t = u_x: F_j = (u_{j+1} - u_j)/dx, Ft_j = (u_{j+2} - 2u_{j+1} + u_j)/dx^2.
inline RhsPair advection_upwind(const Grid1D& grid) {
  return conservation_law(grid, linear_advection_flux(), {Scheme::Upwind, Direction::Minus});
}

/// Burgers: F_j = -(f_j - f_{j-1})/dx, Ft_j = -(u_j F_j - u_{j-1} F_{j-1})/dx.
inline RhsPair burgers_upwind(const Grid1D& grid) {
  return conservation_law(grid, burgers_flux(), {Scheme::Upwind, Direction::Plus});
}

inline RhsPair advection_weno(const Grid1D& grid, DerivativeChoice choice = DerivativeChoice::Same,
                              double eps = kWenoEpsilon) {
  return conservation_law(grid, linear_advection_flux(), {Scheme::Weno5, Direction::Minus, eps},
                          choice);
}

inline RhsPair burgers_weno(const Grid1D& grid, DerivativeChoice choice = DerivativeChoice::Same,
                            double eps = kWenoEpsilon) {
  return conservation_law(grid, burgers_flux(), {Scheme::Weno5, Direction::Plus, eps}, choice);
}

// ---------------------------------------------------------------------------
// Shallow water
// ---------------------------------------------------------------------------

/// Heights at or below this are treated as dry (velocity zero).
inline constexpr double kDryHeight = 1e-12;

/// State layout: [h_0 .. h_{m-1}, (hv)_0 .. (hv)_{m-1}]. Ghost cells copy the
/// boundary values. A negative height makes sqrt(h), and with it F, non-finite.
class ShallowWater {
public:
  ShallowWater(Grid1D grid, double g) : grid_(grid), g_(g) {
    if (!(g > 0.0)) throw Error("gravitational constant must be positive");
  }

  const Grid1D& grid() const { return grid_; }
  double gravity() const { return g_; }

  double velocity(double h, double q) const { return h > kDryHeight ? q / h : 0.0; }

  /// max_j |v_j| + sqrt(h_j); NaN once any height is negative.
  double max_wave_speed(const Vector& u) const {
    const int m = grid_.m;
    double alpha = 0.0;
    for (int j = 0; j < m; ++j) {
      const double c = std::sqrt(g_ * u[j]);
      if (std::isnan(c)) return std::numeric_limits<double>::quiet_NaN();
      alpha = std::max(alpha, std::abs(velocity(u[j], u[m + j])) + c);
    }
    return alpha;
  }

  Vector f(const Vector& u) const {
    const int m = grid_.m;
    const double alpha = max_wave_speed(u);
    Vector fh(m), fq(m);
    for (int j = 0; j < m; ++j) {
      const double v = velocity(u[j], u[m + j]);
      fh[j] = u[m + j];
      fq[j] = u[m + j] * v + 0.5 * g_ * u[j] * u[j];
    }
    // Interface j-1/2 for j = 0..m (ghost copies at both ends).
    auto at = [m](int j) { return std::clamp(j, 0, m - 1); };
    Vector out(2 * m);
    std::vector<double> hh(static_cast<std::size_t>(m + 1)), hq(static_cast<std::size_t>(m + 1));
    for (int j = 0; j <= m; ++j) {
      const int r = at(j), l = at(j - 1);
      hh[static_cast<std::size_t>(j)] = 0.5 * (fh[r] + fh[l]) - 0.5 * alpha * (u[r] - u[l]);
      hq[static_cast<std::size_t>(j)] =
          0.5 * (fq[r] + fq[l]) - 0.5 * alpha * (u[m + r] - u[m + l]);
    }
    for (int j = 0; j < m; ++j) {
      const auto k = static_cast<std::size_t>(j);
      out[j] = -(hh[k + 1] - hh[k]) / grid_.dx;
      out[m + j] = -(hq[k + 1] - hq[k]) / grid_.dx;
    }
    return out;
  }

  /// u_tt,j = -(f'(u_{j+1}) u_t,{j+1} - f'(u_{j-1}) u_t,{j-1}) / (2 dx).
  Vector ftilde(const Vector& u) const {
    const int m = grid_.m;
    const Vector ut = f(u);
    Vector jh(m), jq(m);  // f'(u_j) u_t,j
    for (int j = 0; j < m; ++j) {
      const double v = velocity(u[j], u[m + j]);
      jh[j] = ut[m + j];
      jq[j] = (g_ * u[j] - v * v) * ut[j] + 2.0 * v * ut[m + j];
    }
    auto at = [m](int j) { return std::clamp(j, 0, m - 1); };
    Vector out(2 * m);
    for (int j = 0; j < m; ++j) {
      out[j] = -(jh[at(j + 1)] - jh[at(j - 1)]) / (2.0 * grid_.dx);
      out[m + j] = -(jq[at(j + 1)] - jq[at(j - 1)]) / (2.0 * grid_.dx);
    }
    return out;
  }

  RhsPair rhs() const {
    return {[self = *this](const Vector& u) { return self.f(u); },
            [self = *this](const Vector& u) { return self.ftilde(u); }};
  }

private:
  Grid1D grid_;
  double g_;
};

inline RhsPair shallow_water(const Grid1D& grid, double g = 1.0) {
  return ShallowWater(grid, g).rhs();
}

// ---------------------------------------------------------------------------
// Initial conditions
// ---------------------------------------------------------------------------

/// 1 on [-1/2, 1/2], 0 elsewhere.
inline Vector square_wave(const Grid1D& grid) {
  Vector u(grid.m);
  for (int j = 0; j < grid.m; ++j) {
    const double x = grid.x(j);
    u[j] = (x >= -0.5 - 1e-12 && x <= 0.5 + 1e-12) ? 1.0 : 0.0;
  }
  return u;
}

inline Vector smooth_sine(const Grid1D& grid, double offset = 0.0, double amplitude = 1.0) {
  Vector u(grid.m);
  const double length = (grid.periodic ? grid.m : grid.m - 1) * grid.dx;
  for (int j = 0; j < grid.m; ++j)
    u[j] = offset + amplitude * std::sin(2.0 * M_PI * (grid.x(j) - grid.x_left) / length);
  return u;
}

/// (h, v) = (h_left, 0) for x <= x_dam, (h_right, 0) beyond.
inline Vector dam_break(const Grid1D& grid, double h_left = 10.0, double h_right = 0.0,
                        double x_dam = 0.5) {
  Vector u = Vector::Zero(2 * grid.m);
  for (int j = 0; j < grid.m; ++j) u[j] = grid.x(j) <= x_dam + 1e-12 ? h_left : h_right;
  return u;
}

}  // namespace mdrk
