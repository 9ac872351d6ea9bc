#include "mdrk/methods.hpp"
#include "mdrk/order_conditions.hpp"
#include "mdrk/ssp_analysis.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace mdrk;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mdrk_test_" + name);
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST(Methods, RegistryNamesAreUnique) {
  std::set<std::string> names;
  for (const auto& rec : registry()) EXPECT_TRUE(names.insert(rec.name).second) << rec.name;
  for (const char* n : {"FE", "TS", "M3(3,4,1)", "M2(4,4,inf)", "2s4p", "M2(4,5,1)", "M3(8,6,1)"})
    EXPECT_TRUE(find_method(n).has_value()) << n;
}

TEST(Methods, FamilyAtOneIsFixedScheme) {
  const Tableau fixed = find_method("M3(3,4,1)")->tableau;
  for (double k : {1.0, 2.5}) {
    const Tableau t = family_m3_3_4(k);
    EXPECT_EQ(t.A(), fixed.A());
    EXPECT_EQ(t.b(), fixed.b());
  }
  // The rational formulas reproduce the fixed scheme in the limit K -> 1.
  const Tableau near = family_m3_3_4(1.0 - 1e-9);
  EXPECT_LT((near.A() - fixed.A()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((near.b() - fixed.b()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((near.bhat() - fixed.bhat()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(family_m3_3_4(0.0), Error);
}

TEST(Methods, SaveLoadRoundTripIsExact) {
  for (const auto& rec : registry()) {
    const auto path = temp_file("roundtrip.json");
    save(rec, path);
    const MethodRecord back = load(path);
    EXPECT_EQ(back.name, rec.name);
    EXPECT_EQ(back.tableau.A(), rec.tableau.A());
    EXPECT_EQ(back.tableau.Ahat(), rec.tableau.Ahat());
    EXPECT_EQ(back.tableau.b(), rec.tableau.b());
    EXPECT_EQ(back.tableau.bhat(), rec.tableau.bhat());
    EXPECT_EQ(back.tableau.variant(), rec.tableau.variant());
    EXPECT_EQ(back.tableau.design_k(), rec.tableau.design_k());
    EXPECT_EQ(back.claimed_order, rec.claimed_order);
    // Second save produces identical text.
    EXPECT_EQ(to_json_text(back), to_json_text(rec));
  }
}

TEST(Methods, FileNumbersCarrySixteenDigits) {
  const std::string text = to_json_text(*find_method("M2(4,4,inf)"));
  EXPECT_NE(text.find("2.5000000000000000e-01"), std::string::npos);
  EXPECT_NE(text.find("\"K_design\": \"inf\""), std::string::npos);
}

TEST(Methods, LoadRejectsDimensionMismatch) {
  const auto path = temp_file("bad_dims.json");
  write(path, R"({"name":"x","s":2,"variant":"external","K_design":1,
                  "A":[[0,0],[1,0]],"Ahat":[[0,0],[0,0]],"b":[0.5,0.5,0.0],"bhat":[0,0]})");
  try {
    load(path);
    FAIL() << "expected FileFormatError";
  } catch (const FileFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension"), std::string::npos);
  }
  write(path, R"({"s":2,"A":[[0,0],[1]],"Ahat":[[0,0],[0,0]],"b":[0.5,0.5],"bhat":[0,0]})");
  EXPECT_THROW(load(path), FileFormatError);
}

TEST(Methods, LoadRejectsNegativeAndMalformed) {
  const auto path = temp_file("bad_neg.json");
  write(path, R"({"s":2,"A":[[0,0],[-0.5,0]],"Ahat":[[0,0],[0,0]],"b":[0.5,0.5],"bhat":[0,0]})");
  EXPECT_THROW(load(path), FileFormatError);
  write(path, "{ not json");
  EXPECT_THROW(load(path), FileFormatError);
  write(path, R"({"s":2,"A":[[0,0],[1,0]]})");
  EXPECT_THROW(load(path), FileFormatError);
  EXPECT_THROW(load(temp_file("does_not_exist.json")), FileFormatError);
}

TEST(Methods, LoadClampsRoundoffNegatives) {
  const auto path = temp_file("clamp.json");
  write(path, R"({"s":2,"A":[[0,0],[1,0]],"Ahat":[[0,0],[-1e-16,0]],"b":[0.5,0.5],"bhat":[0,0]})");
  EXPECT_EQ(load(path).tableau.Ahat()(1, 0), 0.0);
}

TEST(Methods, ResolveNamesFamilyAndFiles) {
  EXPECT_EQ(resolve_method("FE").name, "FE");
  const auto fam = resolve_method("M3(3,4,0.5)");
  EXPECT_EQ(fam.source, MethodSource::ClosedFormFamily);
  EXPECT_NEAR(*fam.claimed_cts, 2.0 / 3.0, 1e-15);
  const auto path = temp_file("resolve.json");
  save(*find_method("TS"), path);
  EXPECT_EQ(resolve_method(path.string()).name, "TS");
  EXPECT_THROW(resolve_method("no-such-method"), UnknownMethodError);
}

TEST(Methods, GeneratedMethodsAreCertified) {
  int generated_count = 0;
  for (const auto& rec : registry()) {
    if (rec.source != MethodSource::OptimizerGenerated) continue;
    ++generated_count;
    const Tableau& t = rec.tableau;
    EXPECT_TRUE(validate(t).clean()) << rec.name;
    EXPECT_FALSE(is_dj_reducible(t).has_value()) << rec.name;
    EXPECT_EQ(order_of(t), rec.claimed_order) << rec.name;
    ASSERT_TRUE(rec.claimed_cts.has_value());
    EXPECT_NEAR(compute_cts(t, t.design_k()).r_max, *rec.claimed_cts, 1e-8) << rec.name;
  }
  EXPECT_GE(generated_count, 4);
}

TEST(Methods, ShippedFilesMatchRegistry) {
  const std::filesystem::path dir = std::filesystem::path(MDRK_SOURCE_DIR) / "data" / "methods";
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const MethodRecord file = load(entry.path());
    const auto rec = find_method(file.name);
    ASSERT_TRUE(rec.has_value()) << file.name;
    EXPECT_EQ(file.tableau.A(), rec->tableau.A()) << file.name;
    EXPECT_EQ(file.tableau.Ahat(), rec->tableau.Ahat()) << file.name;
    EXPECT_EQ(file.tableau.b(), rec->tableau.b()) << file.name;
    EXPECT_EQ(file.tableau.bhat(), rec->tableau.bhat()) << file.name;
    ++files;
  }
  EXPECT_GE(files, 4);
}
