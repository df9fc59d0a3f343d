#pragma once

#include <string>
#include <vector>

#include "snowflake/metric_space.hpp"

namespace snowflake {

/// Loads a space from a file. ".csv": square distance matrix, no header.
/// ".json": {"distances": [[...]], "labels": [...]} or {"points": [[...]]}
/// (Euclidean distances derived). Throws IoError / validation errors.
FiniteMetricSpace load_space(const std::string& path);

/// Square matrix from a JSON file holding either a bare [[...]] array or
/// {"Q": [[...]]}. Returns row-major entries; m is the side length.
std::vector<double> load_square_matrix_json(const std::string& path, int& m);

/// Writes a row-major matrix as CSV with 17 significant digits (lossless
/// round-trip for doubles).
void write_matrix_csv(const std::string& path, const std::vector<double>& values, int rows,
                      int cols);

std::string format_double(double v);  // %.17g

}  // namespace snowflake
