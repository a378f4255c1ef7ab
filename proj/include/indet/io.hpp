#pragma once

// File formats. CSV: rows separated by newlines, cells by commas, decimal dot,
// no header unless asked. Cells may also be written as fractions "a/b".
// Indices in files (labels, assignments, edge endpoints) are 1-based.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "indet/continuous.hpp"
#include "indet/graph_cluster.hpp"
#include "indet/matrix.hpp"

namespace indet::io {

using json = nlohmann::json;

/// Shortest decimal form that reads back to the same double (at most 17 significant digits).
std::string format_double(double x);
/// Decimal or "a/b". Throws InvalidInput on anything else.
double parse_number(const std::string& text);

std::vector<std::vector<double>> read_csv(std::istream& in, bool header = false);
std::vector<std::vector<double>> read_csv_file(const std::filesystem::path& path, bool header = false);

Matrix read_matrix_csv(const std::filesystem::path& path, bool header = false);
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// A single row or a single column.
std::vector<double> read_vector_csv(const std::filesystem::path& path, bool header = false);
Margin read_margin_csv(const std::filesystem::path& path, bool normalize = false, bool header = false);
void write_vector_csv(std::ostream& out, const std::vector<double>& v);

/// Positive integer labels, converted to 0-based.
std::vector<std::size_t> read_labels_csv(const std::filesystem::path& path, bool header = false);
/// Writes 0-based labels as 1-based, one per line.
void write_labels_csv(std::ostream& out, const std::vector<std::size_t>& labels);

/// Rows "i,j,weight" with 1-based endpoints; a missing weight means 1.
std::vector<Edge> read_edges_csv(const std::filesystem::path& path, bool header = false);
std::size_t vertex_count(const std::vector<Edge>& edges);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// {"cells": [[...]], "row_margin": [...], "col_margin": [...]}
json to_json(const JointDistribution& pi);
/// Reads "cells"; margins, when present, must agree with the cells within 1e-10.
JointDistribution joint_from_json(const json& j);
JointDistribution read_joint_json(const std::filesystem::path& path);

/// {"kind": "piecewise_constant" | "piecewise_linear", "support": [a, A], "knots": [...], "values": [...]}
/// Knots may be omitted for a single piece.
json to_json(const DensitySpec& d);
DensitySpec density_from_json(const json& j);
DensitySpec read_density_json(const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);

}  // namespace indet::io
