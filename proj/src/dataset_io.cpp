#include "selci/dataset_io.hpp"

#include "selci/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace selci {

namespace fs = std::filesystem;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "NaN" || s == "NA") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf" || s == "Inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-Inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw NumericInput("cannot parse number '" + s + "'");
  return v;
}

void write_dataset_csv(const fs::path& path, const Dataset& ds) {
  validate(ds);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << 'y';
  for (Index j = 1; j <= ds.p(); ++j) out << ",x" << j;
  out << '\n';
  for (Index t = 0; t < ds.n(); ++t) {
    out << format_double(ds.Y(t));
    for (Index j = 0; j < ds.p(); ++j) out << ',' << format_double(ds.X(t, j));
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Dataset read_dataset_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 2) throw NumericInput(path.string() + ": need a response and at least one column");
  const auto width = header.size();

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (line.back() == '\r') line.pop_back();
    const auto cells = split_csv_line(line);
    if (cells.size() != width) {
      throw NumericInput(path.string() + ": row " + std::to_string(rows + 2) + " has " +
                         std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    }
    for (const auto& c : cells) {
      const double v = parse_double(c);
      if (!std::isfinite(v)) throw NumericInput(path.string() + ": non-finite value in row " + std::to_string(rows + 2));
      values.push_back(v);
    }
    ++rows;
  }
  const auto cols = static_cast<Index>(width);
  Dataset ds;
  ds.Y.resize(rows);
  ds.X.resize(rows, cols - 1);
  for (Index t = 0; t < rows; ++t) {
    const double* row = values.data() + t * cols;
    ds.Y(t) = row[0];
    for (Index j = 1; j < cols; ++j) ds.X(t, j - 1) = row[j];
  }
  validate(ds);
  return ds;
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_sidecar(const fs::path& path, const Dataset& ds, Index burn_in) {
  nlohmann::json j;
  j["setting"] = ds.setting ? std::string(to_string(*ds.setting)) : std::string();
  j["seed"] = ds.seed;
  j["n"] = ds.n();
  j["p"] = ds.p();
  j["burn_in"] = burn_in;
  if (ds.truth) {
    j["beta"] = std::vector<double>(ds.truth->values.data(), ds.truth->values.data() + ds.truth->values.size());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

bool read_sidecar(const fs::path& path, Dataset& ds) {
  std::ifstream in(path);
  if (!in) return false;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (j.contains("setting") && j["setting"].is_string() && !j["setting"].get<std::string>().empty()) {
    ds.setting = parse_setting(j["setting"].get<std::string>());
  }
  if (j.contains("seed")) ds.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("beta")) {
    const auto beta = j["beta"].get<std::vector<double>>();
    CoefVector cv;
    cv.values = Eigen::Map<const Vector>(beta.data(), static_cast<Index>(beta.size()));
    for (Index i = 0; i < cv.values.size(); ++i) {
      if (cv.values(i) != 0.0) cv.support.push_back(i);
    }
    ds.truth = cv;
  }
  return true;
}

}  // namespace selci
