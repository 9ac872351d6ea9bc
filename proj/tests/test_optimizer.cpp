#include "mdrk/optimizer.hpp"

#include <gtest/gtest.h>

using namespace mdrk;

TEST(Optimizer, SpecChecks) {
  OptimizationSpec spec;
  spec.s = 0;
  EXPECT_THROW(check(spec), Error);
  spec.s = 2;
  spec.p = 7;
  EXPECT_THROW(check(spec), Error);
  spec.p = 3;
  spec.k = -1.0;
  EXPECT_THROW(check(spec), Error);
  spec.k = 1.0;
  spec.variant = Variant::External;
  EXPECT_THROW(check(spec), Error);
  EXPECT_EQ(method_name(Variant::M3, 5, 4, 1.0), "M3(5,4,1)");
  EXPECT_EQ(method_name(Variant::M2, 4, 4, kInfinity), "M2(4,4,inf)");
}

TEST(Optimizer, DecodedPointsAreFeasibleAtTheirRadius) {
  std::mt19937_64 rng(4);
  for (Variant v : {Variant::M2, Variant::M3}) {
    const optimizer_detail::Parametrization param(4, v, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      const Tableau t = param.decode(param.random_point(rng), 1.3);
      EXPECT_TRUE(ts_feasible(t, 1.3, 1.0).feasible);
      if (v == Variant::M3) {
        // Second derivatives enter only through the first stage.
        EXPECT_EQ(t.Ahat().rightCols(3).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(t.bhat().tail(3).cwiseAbs().maxCoeff(), 0.0);
      }
    }
  }
}

TEST(Optimizer, RecoversTwoStageThirdOrder) {
  OptimizationSpec spec;
  spec.s = 2;
  spec.p = 3;
  spec.variant = Variant::M2;
  spec.seeds = 8;
  const OptimizationResult a = optimize(spec);
  ASSERT_TRUE(a.found) << a.message;
  EXPECT_GE(a.cts, 1.425);
  EXPECT_LE(a.cts, 1.5 * (1.0 + 1e-3));
  EXPECT_GE(order_of(a.record.tableau), 3);
  EXPECT_EQ(a.record.name, "M2(2,3,1)");

  const OptimizationResult b = optimize(spec);
  EXPECT_EQ(a.record.tableau.A(), b.record.tableau.A());
  EXPECT_EQ(a.record.tableau.bhat(), b.record.tableau.bhat());
}

TEST(Optimizer, ReportsInfeasibleSpecification) {
  OptimizationSpec spec;
  spec.s = 1;
  spec.p = 4;
  spec.seeds = 2;
  spec.budget = 50;
  const OptimizationResult r = optimize(spec);
  EXPECT_FALSE(r.found);
  EXPECT_NE(r.message.find("no feasible method"), std::string::npos);
}

TEST(Optimizer, VerificationRejectsPerturbedCandidate) {
  const Tableau good = find_method("M2(3,4,1)")->tableau;
  OptimizationSpec spec;
  spec.s = 3;
  spec.p = 4;
  spec.variant = Variant::M2;
  EXPECT_TRUE(verify_candidate(good, spec).accepted);

  Vector b = good.b();
  b[0] += 1e-3;
  const Tableau bad(good.A(), good.Ahat(), b, good.bhat(), good.variant(), good.design_k());
  const VerificationReport rep = verify_candidate(bad, spec);
  EXPECT_FALSE(rep.accepted);
  EXPECT_FALSE(rep.order_ok);
  ASSERT_FALSE(rep.issues.empty());
}

TEST(Optimizer, VerificationRejectsMethodsThatAreNotTaylorSeriesSsp) {
  OptimizationSpec spec;
  spec.s = 2;
  spec.p = 4;
  spec.variant = Variant::M1;
  const VerificationReport rep = verify_candidate(find_method("2s4p")->tableau, spec);
  EXPECT_TRUE(rep.order_ok);
  EXPECT_EQ(rep.certificate.r_max, 0.0);
  EXPECT_FALSE(rep.accepted);
}
