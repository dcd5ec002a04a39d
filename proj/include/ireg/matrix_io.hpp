#pragma once

#include "ireg/linalg.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace ireg {

/// Binary matrix format "IREGMAT1": 8-byte ASCII magic, u64 LE rows, u64 LE cols,
/// then rows*cols IEEE-754 binary64 LE values in row-major order.
void write_iregmat(std::ostream& out, const Matrix& m);
Matrix read_iregmat(std::istream& in);
void write_iregmat(const std::filesystem::path& path, const Matrix& m);
Matrix read_iregmat(const std::filesystem::path& path);

/// CSV: one matrix row per line, ',' separator, '.' decimal point, values
/// printed with 17 significant digits so they round-trip exactly.
void write_csv(std::ostream& out, const Matrix& m);
Matrix read_csv(std::istream& in);
void write_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_csv(const std::filesystem::path& path);

/// Shortest text for v that still round-trips (17 significant digits).
std::string format_double(double v);

/// A vector is stored as a single CSV column.
void write_vector_csv(const std::filesystem::path& path, const Vector& v);
Vector read_vector_csv(const std::filesystem::path& path);

}  // namespace ireg
