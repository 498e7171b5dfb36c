#pragma once

#include <string>
#include <vector>

namespace qrtm {

using CsvRow = std::vector<std::string>;

/// Shortest round-trip decimal ("%.17g" trimmed) so outputs are stable.
std::string csv_number(double x);
std::string csv_number(long long x);

/// Writes header and rows; throws std::runtime_error if the file cannot be
/// written or a row's width differs from the header's.
void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows);

/// Reads a file written by write_csv (no quoting support needed).
std::vector<CsvRow> read_csv(const std::string& path);

}  // namespace qrtm
