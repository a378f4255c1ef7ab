#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "indet/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return (fs::path(INDET_TEST_DATA_DIR) / name).string(); }

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = indet::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir() {
  std::random_device rd;
  return fs::temp_directory_path() / ("indet_cli_" + std::to_string(rd()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::vector<std::vector<int>> kExample27 = {{3, 4, 2}, {2, 3, 1}, {1, 2, 0}, {3, 4, 2}};

}  // namespace

TEST(Cli, CoupleReproducesExample27) {
  const auto r = run({"couple", "--kind", "plus", "--mu", data("example27_mu_counts.csv"), "--nu",
                      data("example27_nu_counts.csv"), "--normalize"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["command"], "couple");
  EXPECT_TRUE(j["seed"].is_null());
  EXPECT_EQ(j["inputs"]["mu"]["sha256"].get<std::string>().size(), 64U);
  const auto& cells = j["outputs"]["cells"];
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 3; ++v) EXPECT_NEAR(cells[u][v].get<double>(), kExample27[u][v] / 27.0, 1e-15);
  EXPECT_TRUE(j["outputs"]["full_monge"].get<bool>());
  EXPECT_TRUE(j["outputs"]["condition_h"].get<bool>());
}

TEST(Cli, CoupleTimesIsTheProduct) {
  const auto r = run({"couple", "--kind", "times", "--mu", data("half.csv"), "--nu", data("skew.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["outputs"]["cells"][1][0].get<double>(), 0.45, 1e-16);
}

TEST(Cli, CheckMongeOnIdentityIsFalse) {
  const auto r = run({"check-monge", "--matrix", data("identity.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.report()["outputs"]["full_monge"].get<bool>());
}

TEST(Cli, CheckMongeReadsJointJson) {
  const auto r = run({"check-monge", "--matrix", data("pi_example27.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["outputs"]["full_monge"].get<bool>());
}

TEST(Cli, UnknownSubcommandExitsTwo) {
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"couple", "--kind", "plus"}).code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, ConditionViolationNamesTheValue) {
  const auto r = run({"couple", "--kind", "plus", "--mu", data("skew.csv"), "--nu", data("skew.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("0.4 < 1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("condition (H)"), std::string::npos) << r.err;
}

TEST(Cli, SignedFlagEmitsInfeasibleClosedForm) {
  const auto r = run({"couple", "--kind", "plus", "--signed", "--mu", data("skew.csv"), "--nu", data("skew.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.report()["outputs"]["feasible"].get<bool>());
  EXPECT_LT(r.report()["outputs"]["cells"][1][1].get<double>(), 0.0);
}

TEST(Cli, CsvOutputReadsBackLosslessly) {
  const auto r = run({"couple", "--kind", "plus", "--csv", "--mu", data("example27_mu_counts.csv"), "--nu",
                      data("example27_nu_counts.csv"), "--normalize"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto rows = indet::io::read_csv(in);
  const auto j = run({"couple", "--kind", "plus", "--mu", data("example27_mu_counts.csv"), "--nu",
                      data("example27_nu_counts.csv"), "--normalize"})
                     .report();
  ASSERT_EQ(rows.size(), 4U);
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(rows[u][v], j["outputs"]["cells"][u][v].get<double>());
}

TEST(Cli, CsvAndJsonAreExclusive) {
  EXPECT_EQ(run({"check-monge", "--json", "--csv", "--matrix", data("identity.csv")}).code, 2);
}

TEST(Cli, DrawIsDeterministicModuloTimestamp) {
  const std::vector<std::string> args = {"draw", "--mu", data("example27_mu_counts.csv"), "--nu", data("example27_nu_counts.csv"),
                                         "--normalize", "--n", "200", "--seed", "42", "--histogram"};
  json a = run(args).report();
  json b = run(args).report();
  EXPECT_EQ(a["seed"], 42);
  EXPECT_TRUE(a.contains("generator_version"));
  a.erase("timestamp");
  b.erase("timestamp");
  EXPECT_EQ(a.dump(), b.dump());
  // The zero cell of the coupling is never drawn.
  EXPECT_EQ(a["outputs"]["counts"][2][2].get<double>(), 0.0);
}

TEST(Cli, DrawWithoutSeedRecordsOne) {
  const auto r = run({"draw", "--mu", data("half.csv"), "--nu", data("skew.csv"), "--n", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["seed"].is_number_unsigned());
}

TEST(Cli, OutputDirectoryReceivesReportAndArtifacts) {
  const fs::path dir = fresh_dir();
  const auto r = run({"draw", "--mu", data("half.csv"), "--nu", data("skew.csv"), "--n", "10", "--seed", "3",
                      "--output-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "draw.json"));
  const json sidecar = json::parse(slurp(dir / "pairs.json"));
  EXPECT_EQ(sidecar["seed"], 3);
  std::istringstream pairs(slurp(dir / "pairs.csv"));
  EXPECT_EQ(indet::io::read_csv(pairs).size(), 10U);
  fs::remove_all(dir);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path dir = fresh_dir();
  ::setenv("INDET_OUTPUT_DIR", dir.string().c_str(), 1);
  const auto r = run({"check-monge", "--matrix", data("identity.csv")});
  ::unsetenv("INDET_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "check-monge.json"));
  fs::remove_all(dir);
}

TEST(Cli, CriteriaOnTable) {
  const auto r = run({"criteria", "--table", data("table.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json o = r.report()["outputs"];
  EXPECT_NEAR(o["chi2"].get<double>(), 0.25, 1e-15);
  EXPECT_EQ(o["n"], 8);
}

TEST(Cli, CriteriaRelational) {
  const auto r = run({"criteria", "--relational", "--x", data("labels_x.csv"), "--y", data("labels_y.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json o = r.report()["outputs"];
  EXPECT_EQ(o["p"], 3);
  EXPECT_EQ(o["q"], 2);
  EXPECT_LE(std::abs(o["jv_relational"].get<double>()), 1.0);
}

TEST(Cli, CriteriaNeedsAnInput) { EXPECT_EQ(run({"criteria"}).code, 2); }

TEST(Cli, ClusterFindsTheTriangles) {
  const auto r = run({"cluster", "--graph", data("two_triangles.csv"), "--criterion", "plus", "--seed", "5",
                      "--brute-force"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json o = r.report()["outputs"];
  EXPECT_EQ(o["labels"], json({1, 1, 1, 2, 2, 2}));
  EXPECT_NEAR(o["score"].get<double>(), 6.0, 1e-12);
  EXPECT_NEAR(o["brute_force_score"].get<double>(), 6.0, 1e-12);
}

TEST(Cli, ClusterCsvIsOneLabelPerLine) {
  const auto r = run({"cluster", "--graph", data("two_triangles.csv"), "--seed", "1", "--csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\n1\n1\n2\n2\n2\n");
}

TEST(Cli, GuessReportsMomentAndBounds) {
  const auto r = run({"guess", "--pi", data("pi_example27.json"), "--strategy", "margin"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json o = r.report()["outputs"];
  EXPECT_NEAR(o["one_shot"].get<double>(), 23.0 / 243 + 45.0 / 351 + 1.0 / 15, 1e-12);
  EXPECT_LE(o["one_shot_lower"].get<double>(), o["one_shot"].get<double>());
  EXPECT_LE(o["one_shot"].get<double>(), o["one_shot_upper"].get<double>());
  EXPECT_LE(o["lower_bound_generalized"].get<double>(), o["rho_moment"].get<double>());
}

TEST(Cli, TasksSingletonPartition) {
  const auto r = run({"tasks", "--mu", data("tasks_mu.csv"), "--assign", data("tasks_singleton.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json o = r.report()["outputs"];
  EXPECT_EQ(o["one_shot"].get<double>(), 1.0);
  EXPECT_EQ(o["moment"].get<double>(), 1.0);
  EXPECT_LE(o["moment_bound"].get<double>(), 1.0);
}

TEST(Cli, ContinuousWritesGrids) {
  const fs::path dir = fresh_dir();
  const auto r = run({"continuous", "--f", data("f_linear.json"), "--g", data("g_linear.json"), "--grid", "4",
                      "--output-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json o = r.report()["outputs"];
  EXPECT_TRUE(o["feasible"].get<bool>());
  EXPECT_NEAR(o["cdf_upper_corner"].get<double>(), 1.0, 1e-15);
  const auto density = indet::io::read_matrix_csv(dir / "density.csv");
  EXPECT_EQ(density.rows(), 5U);
  EXPECT_EQ(density.cols(), 5U);
  // c(u, v) = 1 + u - v
  EXPECT_NEAR(density(4, 0), 2.0, 1e-15);
  EXPECT_NEAR(density(0, 4), 0.0, 1e-15);
  fs::remove_all(dir);
}

TEST(Cli, ContinuousInfeasibleKeepsVerdict) {
  const auto r = run({"continuous", "--f", data("f_spiky.json"), "--g", data("g_linear.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("0.5 < 1"), std::string::npos) << r.err;
  EXPECT_FALSE(r.report()["outputs"]["feasible"].get<bool>());
}
