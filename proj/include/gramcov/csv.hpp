#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gramcov/matrix.hpp"

namespace gramcov {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

/// Writes a matrix as plain CSV, one line per matrix row, entries at full
/// round-trip precision.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& K);

/// Reads a plain CSV matrix. Throws ParseError with the offending row number
/// on malformed input.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Joins cells into one CSV line (no quoting; cells must not contain commas).
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace gramcov
