#pragma once

#include "selci/dgp.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace selci {

/// Writes `y,x1,...,xp` followed by one row per observation (17 significant digits).
void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds);

/// Reads a file written by write_dataset_csv(). The first column is the
/// response. Throws IoError on unreadable files and NumericInput on malformed
/// or non-finite cells.
[[nodiscard]] Dataset read_dataset_csv(const std::filesystem::path& path);

/// `<stem>.json` next to the CSV.
[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// JSON metadata: setting, seed, n, p, burn_in and the coefficient vector.
void write_sidecar(const std::filesystem::path& path, const Dataset& ds, Index burn_in);

/// Fills truth, setting and seed of `ds` from a sidecar if one exists.
/// Returns false when the file is absent.
bool read_sidecar(const std::filesystem::path& path, Dataset& ds);

/// Splits one CSV line on commas (no quoting is used by any file we write).
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest text that reads back to the same double; "inf", "-inf" and "nan" for non-finite values.
[[nodiscard]] std::string format_double(double v);
/// Inverse of format_double(). Throws NumericInput.
[[nodiscard]] double parse_double(const std::string& s);

}  // namespace selci
