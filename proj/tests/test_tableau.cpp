#include "mdrk/methods.hpp"
#include "mdrk/tableau.hpp"

#include <gtest/gtest.h>

using namespace mdrk;

TEST(Tableau, RejectsDimensionMismatch) {
  EXPECT_THROW(Tableau(Matrix::Zero(2, 2), Matrix::Zero(2, 2), Vector::Ones(3), Vector::Zero(3)),
               Error);
  EXPECT_THROW(Tableau(Matrix::Zero(2, 2), Matrix::Zero(2, 3), Vector::Ones(2), Vector::Zero(2)),
               Error);
}

TEST(Tableau, RejectsTooManyStages) {
  const int s = kMaxStages + 1;
  EXPECT_THROW(Tableau(Matrix::Zero(s, s), Matrix::Zero(s, s), Vector::Ones(s), Vector::Zero(s)),
               Error);
}

TEST(Tableau, BlockFormLayout) {
  const Tableau t = find_method("M3(3,4,1)")->tableau;
  const BlockForm f = block_form(t);
  ASSERT_EQ(f.S.rows(), 4);
  EXPECT_DOUBLE_EQ(f.S(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.S(3, 2), 27.0 / 48.0);
  EXPECT_DOUBLE_EQ(f.Shat(3, 0), 1.0 / 24.0);
  EXPECT_DOUBLE_EQ(f.S.col(3).cwiseAbs().sum(), 0.0);
}

TEST(Tableau, BlockFormRejectsImplicit) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 0.5;
  EXPECT_THROW(block_form(Tableau(a, Matrix::Zero(2, 2), Vector::Ones(2) / 2, Vector::Zero(2))),
               Error);
}

TEST(Tableau, ValidateFlagsDiagonalAndNegatives) {
  Matrix a = Matrix::Zero(2, 2);
  a(1, 1) = 0.3;
  a(1, 0) = -0.1;
  const auto report = validate(Tableau(a, Matrix::Zero(2, 2), Vector::Ones(2), Vector::Zero(2)));
  ASSERT_EQ(report.issues.size(), 2u);
  EXPECT_EQ(report.issues[0].kind, Diagnostic::Kind::NegativeEntry);
  EXPECT_EQ(report.issues[1].kind, Diagnostic::Kind::NotExplicit);
}

TEST(Tableau, RoundoffNegativesAreClamped) {
  Matrix a = Matrix::Zero(2, 2);
  a(1, 0) = -1e-16;
  const Tableau t(a, Matrix::Zero(2, 2), Vector::Ones(2) / 2, Vector::Zero(2));
  const auto report = validate(t);
  EXPECT_TRUE(report.clean());
  EXPECT_EQ(report.clamped_entries, 1);
  EXPECT_EQ(clamp_roundoff(t).A()(1, 0), 0.0);
}

TEST(Tableau, ValidateChecksM3Sparsity) {
  Tableau t = find_method("M3(3,4,1)")->tableau;
  Matrix ah = t.Ahat();
  ah(2, 1) = 0.01;
  const auto report = validate(Tableau(t.A(), ah, t.b(), t.bhat(), Variant::M3, 1.0));
  ASSERT_FALSE(report.clean());
  bool structural = false;
  for (const auto& d : report.issues) structural |= d.kind == Diagnostic::Kind::StructureViolation;
  EXPECT_TRUE(structural);
}

TEST(Tableau, RegistryMethodsValidateClean) {
  for (const auto& rec : registry()) {
    const auto report = validate(rec.tableau);
    EXPECT_TRUE(report.clean()) << rec.name << ": " << report.issues.front().message;
  }
}

TEST(Tableau, ShuOsherRoundTripMatchesButcher) {
  // Output row mixes u and y2 through alpha and alphahat; the Butcher weights
  // follow from substituting the stage expansion.
  ShuOsherForm f{Matrix::Zero(3, 2), Matrix::Zero(3, 2), Matrix::Zero(3, 2), Matrix::Zero(3, 2)};
  f.alpha(1, 0) = 1.0;
  f.beta(1, 0) = 0.5;
  f.betahat(1, 0) = 0.125;
  f.alpha(2, 0) = 0.25;
  f.alphahat(2, 1) = 0.75;
  f.beta(2, 0) = 0.1;
  f.beta(2, 1) = 0.4;
  f.betahat(2, 1) = 0.2;
  const Tableau t = shu_osher_to_butcher(f);
  // b_1 = beta_31 + (alpha_32 + alphahat_32) a_21
  EXPECT_NEAR(t.A()(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(t.Ahat()(1, 0), 0.125, 1e-15);
  EXPECT_NEAR(t.b()[0], 0.1 + 0.75 * 0.5, 1e-15);
  EXPECT_NEAR(t.b()[1], 0.4, 1e-15);
  EXPECT_NEAR(t.bhat()[0], 0.75 * 0.125, 1e-15);
  EXPECT_NEAR(t.bhat()[1], 0.2, 1e-15);
}

TEST(Tableau, ShuOsherRejectsInconsistentRows) {
  ShuOsherForm f{Matrix::Zero(2, 1), Matrix::Zero(2, 1), Matrix::Zero(2, 1), Matrix::Zero(2, 1)};
  f.alpha(1, 0) = 0.9;
  f.beta(1, 0) = 1.0;
  EXPECT_THROW(shu_osher_to_butcher(f), Error);
}

TEST(Tableau, DjReducibility) {
  // Stage 3 carries no output weight and feeds nothing: removable.
  Matrix a = Matrix::Zero(3, 3);
  a(1, 0) = 1.0;
  a(2, 0) = 0.5;
  Vector b(3);
  b << 0.5, 0.5, 0.0;
  const auto w = is_dj_reducible(Tableau(a, Matrix::Zero(3, 3), b, Vector::Zero(3)));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->removable, std::vector<int>{2});
  EXPECT_EQ(w->kept, (std::vector<int>{0, 1}));

  // Zero output weight, but consumed by a kept stage: irreducible.
  Matrix a2 = Matrix::Zero(3, 3);
  a2(1, 0) = 1.0;
  a2(2, 1) = 1.0;
  Vector b2(3);
  b2 << 0.5, 0.0, 0.5;
  EXPECT_FALSE(is_dj_reducible(Tableau(a2, Matrix::Zero(3, 3), b2, Vector::Zero(3))).has_value());

  for (const auto& rec : registry())
    EXPECT_FALSE(is_dj_reducible(rec.tableau).has_value()) << rec.name;
}
