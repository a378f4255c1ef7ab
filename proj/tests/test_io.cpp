#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace indet;
using namespace oracle;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("indet_io_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& contents) const {
    fs::path p = path_ / name;
    std::ofstream(p) << contents;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(FormatDouble, RoundTripsRandomDoubles) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 10000; ++i) {
    const double x = d(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    EXPECT_EQ(io::parse_number(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(0.0), "0");
}

TEST(ParseNumber, AcceptsFractionsAndRejectsGarbage) {
  EXPECT_DOUBLE_EQ(io::parse_number("3/27"), 3.0 / 27.0);
  EXPECT_DOUBLE_EQ(io::parse_number(" 0.25 "), 0.25);
  EXPECT_DOUBLE_EQ(io::parse_number("-1e-3"), -1e-3);
  EXPECT_THROW(io::parse_number("abc"), InvalidInput);
  EXPECT_THROW(io::parse_number("1/0"), InvalidInput);
  EXPECT_THROW(io::parse_number("0,5"), InvalidInput);
  EXPECT_THROW(io::parse_number(""), InvalidInput);
}

TEST(Csv, HeaderIsSkippedOnlyWhenAsked) {
  std::istringstream with_header("a,b\n1,2\n3,4\n");
  const auto rows = io::read_csv(with_header, true);
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[1][1], 4.0);

  std::istringstream no_header("a,b\n1,2\n");
  EXPECT_THROW(io::read_csv(no_header, false), InvalidInput);
}

TEST(Csv, HandlesCrlfAndBlankTrailingLines) {
  std::istringstream in("1,2\r\n3,4\r\n\n");
  const auto rows = io::read_csv(in);
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[0][1], 2.0);
}

TEST(Csv, MatrixRoundTripWithinOneUlp) {
  TempDir tmp;
  std::mt19937_64 gen(5);
  const Margin mu = random_margin(gen, 5, 0.05);
  const Margin nu = random_margin(gen, 4, 0.05);
  const Matrix m = independence_coupling(mu, nu).cells();
  std::ostringstream out;
  io::write_matrix_csv(out, m);
  const fs::path p = tmp.file("m.csv", out.str());
  const Matrix back = io::read_matrix_csv(p);
  EXPECT_LE(max_abs_diff(m, back), 1e-15);
  EXPECT_EQ(back, m);
}

TEST(Csv, RaggedRowsAreRejected) {
  TempDir tmp;
  EXPECT_THROW(io::read_matrix_csv(tmp.file("r.csv", "1,2\n3\n")), InvalidInput);
}

TEST(Csv, MissingFileIsInvalidInput) {
  EXPECT_THROW(io::read_matrix_csv("/nonexistent/indet/x.csv"), InvalidInput);
}

TEST(Csv, VectorAsRowOrColumn) {
  TempDir tmp;
  const auto row = io::read_vector_csv(tmp.file("row.csv", "1,2,3\n"));
  const auto col = io::read_vector_csv(tmp.file("col.csv", "1\n2\n3\n"));
  EXPECT_EQ(row, col);
  EXPECT_THROW(io::read_vector_csv(tmp.file("m.csv", "1,2\n3,4\n")), InvalidInput);
}

TEST(Csv, MarginNormalizationIsOptIn) {
  TempDir tmp;
  const fs::path counts = tmp.file("c.csv", "9\n6\n3\n9\n");
  EXPECT_THROW(io::read_margin_csv(counts), InvalidInput);
  const Margin mu = io::read_margin_csv(counts, true);
  EXPECT_NEAR(mu[0], 1.0 / 3.0, 1e-16);
  const Margin fractions = io::read_margin_csv(tmp.file("f.csv", "1/3,2/3\n"));
  EXPECT_NEAR(fractions[1], 2.0 / 3.0, 1e-16);
}

TEST(Csv, LabelsAreOneBasedOnDisk) {
  TempDir tmp;
  const auto labels = io::read_labels_csv(tmp.file("l.csv", "1\n3\n2\n"));
  EXPECT_EQ(labels, (std::vector<std::size_t>{0, 2, 1}));
  std::ostringstream out;
  io::write_labels_csv(out, labels);
  EXPECT_EQ(out.str(), "1\n3\n2\n");
  EXPECT_THROW(io::read_labels_csv(tmp.file("z.csv", "0\n1\n")), InvalidInput);
  EXPECT_THROW(io::read_labels_csv(tmp.file("h.csv", "1.5\n")), InvalidInput);
}

TEST(Csv, EdgesDefaultToUnitWeight) {
  TempDir tmp;
  const auto edges = io::read_edges_csv(tmp.file("e.csv", "1,2\n2,3,0.5\n"));
  ASSERT_EQ(edges.size(), 2U);
  EXPECT_EQ(edges[0].i, 0U);
  EXPECT_EQ(edges[0].j, 1U);
  EXPECT_EQ(edges[0].weight, 1.0);
  EXPECT_EQ(edges[1].weight, 0.5);
  EXPECT_EQ(io::vertex_count(edges), 3U);
}

TEST(Json, JointRoundTrip) {
  const Matrix cells = example27_cells();
  const JointDistribution pi(cells);
  const io::json j = io::to_json(pi);
  ASSERT_TRUE(j.contains("row_margin"));
  const JointDistribution back = io::joint_from_json(io::json::parse(j.dump()));
  EXPECT_EQ(back.cells(), pi.cells());
}

TEST(Json, InconsistentMarginsAreRejected) {
  io::json j = io::to_json(JointDistribution(example27_cells()));
  j["row_margin"][0] = 0.5;
  EXPECT_THROW(io::joint_from_json(j), InvalidInput);
}

TEST(Json, DensityRoundTrip) {
  const DensitySpec f(DensityKind::PiecewiseConstant, {2.0, 3.0, 6.0}, {0.1, 0.3});
  const io::json j = io::to_json(f);
  EXPECT_EQ(j["kind"], "piecewise_constant");
  EXPECT_EQ(io::density_from_json(io::json::parse(j.dump())), f);
}

TEST(Json, DensityKnotsDefaultToSupport) {
  const auto j = io::json::parse(R"({"kind":"piecewise_linear","support":[0,1],"values":[0.5,1.5]})");
  EXPECT_EQ(io::density_from_json(j), DensitySpec::linear(0.5, 1.5));
  const auto bad = io::json::parse(R"({"kind":"piecewise_linear","support":[0,2],"knots":[0,1],"values":[0.5,1.5]})");
  EXPECT_THROW(io::density_from_json(bad), InvalidInput);
  const auto unknown = io::json::parse(R"({"kind":"spline","support":[0,1],"values":[1,1]})");
  EXPECT_THROW(io::density_from_json(unknown), InvalidInput);
}
