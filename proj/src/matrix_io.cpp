#include "ireg/matrix_io.hpp"

#include "ireg/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace ireg {
namespace {

constexpr std::array<char, 8> kMagic = {'I', 'R', 'E', 'G', 'M', 'A', 'T', '1'};

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffU) << (8 * (7 - i));
    return r;
  } else {
    return v;
  }
}

void put_u64(std::ostream& out, std::uint64_t v) {
  const std::uint64_t le = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t le = 0;
  in.read(reinterpret_cast<char*>(&le), sizeof le);
  if (!in) throw IoError("IREGMAT1: truncated header or data");
  return to_little_endian(le);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError("CSV line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

void write_iregmat(std::ostream& out, const Matrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      put_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
    }
  }
  if (!out) throw IoError("IREGMAT1: write failed");
}

Matrix read_iregmat(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("IREGMAT1: bad magic");
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  constexpr auto kMaxDim = static_cast<std::uint64_t>(1) << 31;
  if (rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim) {
    throw IoError("IREGMAT1: invalid dimensions");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = std::bit_cast<double>(get_u64(in));
    }
  }
  return m;
}

void write_iregmat(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path, std::ios::binary | std::ios::trunc);
  write_iregmat(out, m);
}

Matrix read_iregmat(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  return read_iregmat(in);
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out.put(',');
      out << format_double(m(i, j));
    }
    out.put('\n');
  }
  if (!out) throw IoError("CSV: write failed");
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), lineno));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("CSV line " + std::to_string(lineno) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("CSV: no data");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path, std::ios::trunc);
  write_csv(out, m);
}

Matrix read_csv(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  return read_csv(in);
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
  write_csv(path, Matrix(v));
}

Vector read_vector_csv(const std::filesystem::path& path) {
  const Matrix m = read_csv(path);
  if (m.cols() != 1) throw IoError("expected a single-column CSV: " + path.string());
  return m.col(0);
}

}  // namespace ireg
