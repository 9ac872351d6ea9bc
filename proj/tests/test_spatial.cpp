#include "mdrk/experiments.hpp"
#include "mdrk/spatial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mdrk;

namespace {

Vector random_state(int m, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(m);
  for (int j = 0; j < m; ++j) v[j] = u(rng);
  return v;
}

}  // namespace

TEST(Spatial, GridConvention) {
  const Grid1D g = make_grid(5, -1.0, 1.0, true);
  EXPECT_DOUBLE_EQ(g.dx, 0.5);
  EXPECT_DOUBLE_EQ(g.x(4), 1.0);
  EXPECT_EQ(g.wrap(-1), 4);
  EXPECT_EQ(g.wrap(5), 0);
}

TEST(Spatial, PeriodicOperatorsConserve) {
  std::mt19937_64 rng(11);
  const Grid1D g = make_grid(64, -1.0, 1.0, true);
  for (const auto& rhs : {advection_upwind(g), burgers_upwind(g), advection_weno(g),
                          burgers_weno(g), burgers_weno(g, DerivativeChoice::Opposite)}) {
    const Vector u = random_state(g.m, rng);
    EXPECT_LT(std::abs(rhs.f(u).sum()) * g.dx, 1e-11);
    EXPECT_LT(std::abs(rhs.ftilde(u).sum()) * g.dx, 1e-9);
  }
}

TEST(Spatial, AdvectionUpwindMatchesDifferenceFormulas) {
  std::mt19937_64 rng(5);
  const Grid1D g = make_grid(40, -1.0, 1.0, true);
  const RhsPair rhs = advection_upwind(g);
  const Vector u = random_state(g.m, rng);
  const Vector f = rhs.f(u), ft = rhs.ftilde(u);
  for (int j = 0; j < g.m; ++j) {
    const double u0 = u[j], u1 = u[g.wrap(j + 1)], u2 = u[g.wrap(j + 2)];
    EXPECT_NEAR(f[j], (u1 - u0) / g.dx, 1e-12);
    EXPECT_NEAR(ft[j], (u2 - 2 * u1 + u0) / (g.dx * g.dx), 1e-9);
  }
}

TEST(Spatial, BurgersUpwindMatchesDifferenceFormulas) {
  std::mt19937_64 rng(6);
  const Grid1D g = make_grid(40, -1.0, 1.0, true);
  const RhsPair rhs = burgers_upwind(g);
  const Vector u = random_state(g.m, rng, 0.0, 1.0);
  const Vector f = rhs.f(u), ft = rhs.ftilde(u);
  for (int j = 0; j < g.m; ++j) {
    const int l = g.wrap(j - 1);
    EXPECT_NEAR(f[j], -(0.5 * u[j] * u[j] - 0.5 * u[l] * u[l]) / g.dx, 1e-12);
    EXPECT_NEAR(ft[j], -(u[j] * f[j] - u[l] * f[l]) / g.dx, 1e-9);
  }
}

TEST(Spatial, Weno5ConvergesAtFifthOrder) {
  std::vector<double> lx, ly;
  for (int m : {64, 128, 256, 512}) {
    const Grid1D g = make_grid(m, 0.0, 1.0, true);
    const double length = m * g.dx;
    const double kw = 2.0 * M_PI / length;
    Vector gv(m), exact(m);
    for (int j = 0; j < m; ++j) {
      gv[j] = std::sin(kw * g.x(j));
      exact[j] = -kw * std::cos(kw * g.x(j));  // D(g) approximates -g_x
    }
    for (Direction d : {Direction::Plus, Direction::Minus}) {
      const double err = (weno5_difference(d, g, gv) - exact).cwiseAbs().maxCoeff();
      if (d == Direction::Plus) {
        lx.push_back(std::log(g.dx));
        ly.push_back(std::log(err));
      }
    }
  }
  EXPECT_GE(least_squares_slope(lx, ly), 4.8);
}

TEST(Spatial, Weno5WeightsNearLinearOnSmoothData) {
  const Grid1D g = make_grid(512, 0.0, 1.0, true);
  const Vector gv = smooth_sine(g, 0.0, 1.0);
  std::vector<std::array<double, 3>> w;
  weno5_interface_flux(Direction::Plus, g, gv, kWenoEpsilon, &w);
  double dev = 0.0;
  for (const auto& wj : w)
    dev = std::max({dev, std::abs(wj[0] - 0.1), std::abs(wj[1] - 0.6), std::abs(wj[2] - 0.3)});
  EXPECT_LT(dev, 1e-2);
}

TEST(Spatial, Weno5MinusMirrorsPlus) {
  std::mt19937_64 rng(3);
  const Grid1D g = make_grid(50, -1.0, 1.0, true);
  const Vector gv = random_state(g.m, rng);
  const Vector rev = gv.reverse();
  const Vector minus = weno5_interface_flux(Direction::Minus, g, gv);
  const Vector plus = weno5_interface_flux(Direction::Plus, g, rev);
  for (int j = 0; j < g.m; ++j) EXPECT_NEAR(minus[j], plus[g.wrap(g.m - 2 - j)], 1e-13);
}

TEST(Spatial, LaxFriedrichsSplit) {
  Vector u(3);
  u << 1.0, -2.0, 0.5;
  const SplitFlux s = lax_friedrichs_split(burgers_flux(), u);
  const Vector plus = (Vector(3) << 1.25, -1.0, 0.5625).finished();
  const Vector minus = (Vector(3) << -0.75, 3.0, -0.4375).finished();
  EXPECT_LT((s.plus - plus).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((s.minus - minus).cwiseAbs().maxCoeff(), 1e-15);
  const SplitFlux a = lax_friedrichs_split(linear_advection_flux(), u);
  EXPECT_LT(a.plus.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((a.minus + u).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Spatial, UpwindForwardEulerIsTvd) {
  std::mt19937_64 rng(17);
  const Grid1D g = make_grid(60, -1.0, 1.0, true);
  const RhsPair adv = advection_upwind(g), burg = burgers_upwind(g);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector u = random_state(g.m, rng);
    const double tv = total_variation(u);
    EXPECT_LE(total_variation(u + g.dx * adv.f(u)), tv + 1e-12);
    const Vector v = random_state(g.m, rng, 0.0, 1.0);
    EXPECT_LE(total_variation(v + g.dx * burg.f(v)), total_variation(v) + 1e-12);
  }
}

TEST(Spatial, ShallowWaterLakeAtRest) {
  const Grid1D g = make_grid(30, 0.0, 1.0, false);
  const ShallowWater sw(g, 1.0);
  Vector u = Vector::Zero(2 * g.m);
  u.head(g.m).setConstant(2.0);
  EXPECT_LT(sw.f(u).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(sw.ftilde(u).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_DOUBLE_EQ(sw.max_wave_speed(u), std::sqrt(2.0));
}

TEST(Spatial, ShallowWaterDryCellsAndNegativeDepth) {
  const Grid1D g = make_grid(20, 0.0, 1.0, false);
  const ShallowWater sw(g, 1.0);
  const Vector u = dam_break(g);
  EXPECT_TRUE(sw.f(u).allFinite());
  EXPECT_TRUE(sw.ftilde(u).allFinite());
  EXPECT_DOUBLE_EQ(sw.max_wave_speed(u), std::sqrt(10.0));
  Vector bad = u;
  bad[g.m - 1] = -1e-3;
  EXPECT_TRUE(std::isnan(sw.max_wave_speed(bad)));
  // Mass changes only through the boundary flux, which vanishes here.
  EXPECT_LT(std::abs(sw.f(u).head(g.m).sum()), 1e-10);
}

TEST(Spatial, ScalarProblemsRequirePeriodicGrid) {
  EXPECT_THROW(advection_upwind(make_grid(10, 0.0, 1.0, false)), Error);
}
