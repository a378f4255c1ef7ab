#include "indet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "indet/errors.hpp"

namespace indet::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_decimal(const std::string& s) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) throw InvalidInput("not a number: '" + s + "'");
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  const double num = parse_decimal(trim(s.substr(0, slash)));
  const double den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0.0) throw InvalidInput("zero denominator in '" + s + "'");
  return num / den;
}

std::vector<std::vector<double>> read_csv(std::istream& in, bool header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool skip = header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (skip) {
      skip = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell));
    if (!line.empty() && line.back() == ',') throw InvalidInput("trailing comma in CSV row");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_csv_file(const std::filesystem::path& path, bool header) {
  auto in = open_in(path);
  return read_csv(in, header);
}

Matrix read_matrix_csv(const std::filesystem::path& path, bool header) {
  const auto rows = read_csv_file(path, header);
  if (rows.empty()) throw InvalidInput(path.string() + ": empty matrix");
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidInput(path.string() + ": ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

std::vector<double> read_vector_csv(const std::filesystem::path& path, bool header) {
  const auto rows = read_csv_file(path, header);
  if (rows.empty()) throw InvalidInput(path.string() + ": empty vector");
  if (rows.size() == 1) return rows.front();
  std::vector<double> v;
  for (const auto& r : rows) {
    if (r.size() != 1) throw InvalidInput(path.string() + ": expected a single row or a single column");
    v.push_back(r.front());
  }
  return v;
}

Margin read_margin_csv(const std::filesystem::path& path, bool normalize, bool header) {
  auto v = read_vector_csv(path, header);
  return normalize ? Margin::normalized(v) : Margin(std::move(v));
}

void write_vector_csv(std::ostream& out, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_double(v[i]);
  }
  out << '\n';
}

std::vector<std::size_t> read_labels_csv(const std::filesystem::path& path, bool header) {
  std::vector<std::size_t> labels;
  for (double x : read_vector_csv(path, header)) {
    if (!(x >= 1.0) || x != std::floor(x)) throw InvalidInput(path.string() + ": labels must be positive integers");
    labels.push_back(static_cast<std::size_t>(x) - 1);
  }
  return labels;
}

void write_labels_csv(std::ostream& out, const std::vector<std::size_t>& labels) {
  for (std::size_t l : labels) out << (l + 1) << '\n';
}

std::vector<Edge> read_edges_csv(const std::filesystem::path& path, bool header) {
  std::vector<Edge> edges;
  for (const auto& r : read_csv_file(path, header)) {
    if (r.size() != 2 && r.size() != 3) throw InvalidInput(path.string() + ": edge rows are i,j[,weight]");
    for (std::size_t k = 0; k < 2; ++k)
      if (!(r[k] >= 1.0) || r[k] != std::floor(r[k]))
        throw InvalidInput(path.string() + ": vertex ids must be positive integers");
    edges.push_back({static_cast<std::size_t>(r[0]) - 1, static_cast<std::size_t>(r[1]) - 1,
                     r.size() == 3 ? r[2] : 1.0});
  }
  return edges;
}

std::size_t vertex_count(const std::vector<Edge>& edges) {
  std::size_t n = 0;
  for (const auto& e : edges) n = std::max({n, e.i + 1, e.j + 1});
  return n;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix JSON must be a non-empty array of rows");
  const std::size_t cols = j.front().size();
  std::vector<double> data;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw InvalidInput("matrix JSON rows must have equal length");
    for (const auto& x : row) {
      if (!x.is_number()) throw InvalidInput("matrix JSON cells must be numbers");
      data.push_back(x.get<double>());
    }
  }
  return Matrix(j.size(), cols, std::move(data));
}

json to_json(const JointDistribution& pi) {
  return {{"cells", matrix_to_json(pi.cells())},
          {"row_margin", pi.row_margin().values()},
          {"col_margin", pi.col_margin().values()}};
}

JointDistribution joint_from_json(const json& j) {
  if (!j.is_object() || !j.contains("cells")) throw InvalidInput("joint distribution JSON needs \"cells\"");
  JointDistribution pi(matrix_from_json(j.at("cells")));
  auto check = [&](const char* key, const Margin& m) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != m.size()) throw InvalidInput(std::string(key) + " has the wrong length");
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::abs(v[i] - m[i]) > tol::kMargin) throw InvalidInput(std::string(key) + " disagrees with the cells");
  };
  check("row_margin", pi.row_margin());
  check("col_margin", pi.col_margin());
  return pi;
}

JointDistribution read_joint_json(const std::filesystem::path& path) { return joint_from_json(read_json_file(path)); }

json to_json(const DensitySpec& d) {
  return {{"kind", d.kind() == DensityKind::PiecewiseConstant ? "piecewise_constant" : "piecewise_linear"},
          {"support", {d.lower(), d.upper()}},
          {"knots", d.knots()},
          {"values", d.values()}};
}

DensitySpec density_from_json(const json& j) {
  try {
    const std::string kind_text = j.at("kind").get<std::string>();
    DensityKind kind;
    if (kind_text == "piecewise_constant" || kind_text == "PiecewiseConstant")
      kind = DensityKind::PiecewiseConstant;
    else if (kind_text == "piecewise_linear" || kind_text == "PiecewiseLinear")
      kind = DensityKind::PiecewiseLinear;
    else
      throw InvalidInput("unknown density kind '" + kind_text + "'");
    const auto support = j.at("support").get<std::vector<double>>();
    if (support.size() != 2) throw InvalidInput("density support must be [a, A]");
    std::vector<double> knots = j.contains("knots") ? j.at("knots").get<std::vector<double>>() : std::vector<double>{};
    if (knots.empty()) knots = support;
    if (knots.front() != support[0] || knots.back() != support[1])
      throw InvalidInput("density knots must start and end at the support endpoints");
    return DensitySpec(kind, std::move(knots), j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed density JSON: ") + e.what());
  }
}

DensitySpec read_density_json(const std::filesystem::path& path) { return density_from_json(read_json_file(path)); }

json read_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace indet::io
