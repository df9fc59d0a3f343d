#include "snowflake/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "snowflake/error.hpp"

namespace snowflake {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<double>> parse_csv_matrix(const std::string& text, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(Errc::IoError, "bad numeric cell '" + cell + "' in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::IoError, "empty matrix in " + path);
  return rows;
}

std::vector<std::vector<double>> json_matrix(const json& j) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) rows.push_back(row.get<std::vector<double>>());
  return rows;
}

}  // namespace

FiniteMetricSpace load_space(const std::string& path) {
  std::string text = read_file(path);
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".json") {
    json j;
    try {
      j = json::parse(text);
    } catch (const std::exception& e) {
      fail(Errc::IoError, "invalid JSON in " + path + ": " + e.what());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    if (j.contains("points")) return space_from_points(json_matrix(j["points"]), labels);
    if (j.contains("distances")) return validate_metric(json_matrix(j["distances"]), labels);
    fail(Errc::IoError, path + " has neither 'points' nor 'distances'");
  }
  return validate_metric(parse_csv_matrix(text, path));
}

std::vector<double> load_square_matrix_json(const std::string& path, int& m) {
  std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::IoError, "invalid JSON in " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("Q")) j = j["Q"];
  if (!j.is_array()) fail(Errc::IoError, path + " does not hold a matrix");
  auto rows = json_matrix(j);
  m = static_cast<int>(rows.size());
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m) fail(Errc::IoError, "matrix in " + path + " not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const std::vector<double>& values, int rows,
                      int cols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out << ',';
      out << format_double(values[static_cast<std::size_t>(r) * cols + c]);
    }
    out << '\n';
  }
}

}  // namespace snowflake
