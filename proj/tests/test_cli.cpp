#include "mdrk/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace mdrk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "mdrk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mdrk_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, OrderCheckPrintsEveryCondition) {
  const fs::path dir = scratch("order");
  const Outcome r = run({"order-check", "--method", "FE", "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::regex line(R"(p[1-6]#[0-9]+ lhs=\S+ target=\S+ residual=\S+)");
  int lines = 0;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);)
    if (std::regex_match(l, line)) ++lines;
  EXPECT_EQ(lines, condition_count(6));
  EXPECT_NE(r.out.find("order 1\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "order_check_FE.csv"));
  EXPECT_EQ(run({"order-check", "--method", "FE", "--expect", "2", "--out-dir", dir.string()}).code,
            cli::kValidationFailure);
}

TEST(Cli, SspCoefficient) {
  const fs::path dir = scratch("ssp");
  const Outcome r =
      run({"ssp-coef", "--method", "M3(3,4,1)", "--k", "1", "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r_max 1\n"), std::string::npos) << r.out;
  const auto j = nlohmann::json::parse(slurp(dir / "ssp_coef_M3_3_4_1.json"));
  EXPECT_NEAR(j.at("r_max").get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(j.contains("P"));
  const Outcome inf = run({"ssp-coef", "--method", "M2(4,4,inf)", "--k", "inf", "--out-dir",
                           dir.string()});
  EXPECT_NE(inf.out.find("r_max 4\n"), std::string::npos) << inf.out;
  const Outcome sd = run({"ssp-coef", "--method", "2s4p", "--sd", "--ktilde", "1", "--out-dir",
                          dir.string()});
  EXPECT_EQ(sd.code, 0);
  EXPECT_NE(sd.out.find("C_SD "), std::string::npos);
}

TEST(Cli, VerifyAndValidationFailure) {
  const fs::path dir = scratch("verify");
  EXPECT_EQ(run({"verify", "--method", "M2(4,5,1)", "--out-dir", dir.string()}).code, 0);
  // A second-order method whose file claims fourth order.
  MethodRecord rec = *find_method("TS");
  rec.name = "liar";
  rec.claimed_order = 4;
  rec.claimed_cts.reset();
  save(rec, dir / "liar.json");
  const Outcome r = run({"verify", "--method", (dir / "liar.json").string(), "--out-dir",
                         dir.string()});
  EXPECT_EQ(r.code, cli::kValidationFailure);
  EXPECT_NE(r.out.find("FAIL: order"), std::string::npos);
}

TEST(Cli, DistinctErrorStatuses) {
  const fs::path dir = scratch("errors");
  const Outcome unknown = run({"verify", "--method", "M9(9,9,9)", "--out-dir", dir.string()});
  EXPECT_EQ(unknown.code, cli::kUnknownMethod);
  EXPECT_NE(unknown.err.find("unknown method"), std::string::npos);

  std::ofstream(dir / "broken.json") << "{\"name\": \"x\", \"s\": 2";
  const Outcome broken =
      run({"verify", "--method", (dir / "broken.json").string(), "--out-dir", dir.string()});
  EXPECT_EQ(broken.code, cli::kMalformedFile);

  const Outcome grid = run({"sweep", "--method", "FE", "--lambda-step", "-0.1", "--out-dir",
                            dir.string()});
  EXPECT_EQ(grid.code, cli::kInvalidLambdaGrid);
  EXPECT_NE(grid.err.find("lambda grid"), std::string::npos);

  const Outcome none = run({"optimize", "--s", "1", "--p", "4", "--seeds", "2", "--budget", "50",
                            "--out-dir", dir.string()});
  EXPECT_EQ(none.code, cli::kNoFeasibleMethod);

  EXPECT_EQ(run({"no-such-command"}).code, cli::kUsage);
  EXPECT_EQ(run({"verify"}).code, cli::kUsage);

  std::set<int> codes{cli::kUsage,           cli::kUnknownMethod,      cli::kMalformedFile,
                      cli::kInvalidLambdaGrid, cli::kValidationFailure, cli::kNoFeasibleMethod,
                      cli::kRuntimeError};
  EXPECT_EQ(codes.size(), 7u);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "cfg.json") << R"({"method": "TS", "max-order": 3, "expect": 2})";
  const Outcome from_file = run({"order-check", "--config", (dir / "cfg.json").string(),
                                 "--out-dir", dir.string()});
  EXPECT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("p3#2"), std::string::npos);
  EXPECT_EQ(from_file.out.find("p4#1"), std::string::npos);

  const Outcome flag = run({"order-check", "--config", (dir / "cfg.json").string(),
                            "--max-order", "1", "--out-dir", dir.string()});
  EXPECT_EQ(flag.code, 0);
  EXPECT_EQ(flag.out.find("p2#1"), std::string::npos);

  std::ofstream(dir / "bad.json") << "[1, 2";
  EXPECT_EQ(run({"order-check", "--config", (dir / "bad.json").string()}).code,
            cli::kMalformedFile);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path dir = scratch("env");
  ::setenv(cli::kOutputDirVariable, dir.string().c_str(), 1);
  const Outcome r = run({"list-methods"});
  ::unsetenv(cli::kOutputDirVariable);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "methods.csv"));
  for (const auto& rec : registry()) EXPECT_NE(r.out.find(rec.name), std::string::npos);
}

TEST(Cli, SweepArtifactEqualsLibraryResult) {
  const fs::path dir = scratch("sweep");
  const Outcome r = run({"sweep", "--method", "TS", "--problem", "burgers-upwind", "--m", "101",
                         "--steps", "10", "--lambda-stop", "1.5", "--lambda-step", "0.1",
                         "--fine-step", "0.01", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const ProblemSpec p = make_problem("burgers-upwind", {101});
  const SweepReport rep = observed_cts(find_method("TS")->tableau, p, 10, {0.05, 1.5, 0.1}, 0.01);
  std::ostringstream expected;
  write_csv(expected, rep);
  EXPECT_EQ(slurp(dir / "sweep_TS_burgers-upwind.csv"), expected.str());
  EXPECT_NE(r.out.find("lambda_obs " + format_g(rep.lambda_obs, 6)), std::string::npos);
}

TEST(Cli, OptimizeWritesLoadableTableau) {
  const fs::path dir = scratch("optimize");
  const Outcome r = run({"optimize", "--s", "2", "--p", "3", "--variant", "M2", "--k", "1",
                         "--seeds", "8", "--out", (dir / "m.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const MethodRecord rec = load(dir / "m.json");
  EXPECT_EQ(rec.name, "M2(2,3,1)");
  EXPECT_GE(order_of(rec.tableau), 3);
  EXPECT_GE(compute_cts(rec.tableau, 1.0).r_max, 1.425);
}

TEST(Cli, ConvergeReportsOrder) {
  const fs::path dir = scratch("converge");
  const Outcome r = run({"converge", "--method", "TS", "--dts", "0.02", "0.01", "0.005",
                         "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("observed order ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(r.out.substr(pos + 15)), 2.0, 0.1);
  EXPECT_TRUE(fs::exists(dir / "converge_TS.csv"));
}
