#pragma once

#include <string>

#include "cohere/randmat.hpp"

namespace cohere::io {

// Matrix file formats.
//
// CSV: header row "x1,...,xp", then n data rows (observations). Values are
// written with 17 significant digits so a read-back reproduces every double.
//
// Binary ("CHL1"): 16-byte header = magic "CHL1", n (LE u32), p (LE u32),
// flags (LE u32, bit 0 set = column-major), then n*p IEEE-754 binary64
// values in little-endian byte order.

void write_csv(const std::string& path, const DataMatrix& X);
DataMatrix read_csv(const std::string& path);

void write_bin(const std::string& path, const DataMatrix& X);
DataMatrix read_bin(const std::string& path);

// Dispatch on extension (".csv" / ".bin"), overridable with format = "csv"/"bin".
void write_matrix(const std::string& path, const DataMatrix& X, const std::string& format = "");
DataMatrix read_matrix(const std::string& path, const std::string& format = "");

// One value per line; used by `simulate --dump-values`.
void write_values_csv(const std::string& path, const std::vector<double>& values);

// Single column (one value per line) or a single comma-separated row.
std::vector<double> read_vector(const std::string& path);

// Shortest-exact decimal with up to 17 significant digits; locale-independent.
std::string format_double(double v);

}  // namespace cohere::io
