#pragma once

#include "twoinf/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace twoinf {

/// Dense CSV: one row per line, comma-separated decimals. Rejects NaN/Inf,
/// ragged rows and empty input.
Matrix readCsvMatrix(std::istream& in);
Matrix readCsvMatrix(const std::string& path);
void writeCsvMatrix(std::ostream& out, const Matrix& A);
void writeCsvMatrix(const std::string& path, const Matrix& A);

/// Matrix Market array format ("%%MatrixMarket matrix array real general",
/// column-major values). Rejects NaN/Inf.
Matrix readMatrixMarketArray(std::istream& in);
Matrix readMatrixMarketArray(const std::string& path);
void writeMatrixMarketArray(std::ostream& out, const Matrix& A);
void writeMatrixMarketArray(const std::string& path, const Matrix& A);

/// Reads either format, dispatching on the MatrixMarket banner.
Matrix readMatrixAuto(const std::string& path);

/// Label vectors serialize as newline-separated 1-based integers.
void writeLabels(const std::string& path, const std::vector<int>& zeroBased);
std::vector<int> readLabels(const std::string& path);

/// Shortest round-trip decimal representation of x (deterministic).
std::string formatDouble(double x);

} // namespace twoinf
