#include "ireg/error.hpp"
#include "ireg/matrix_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <sstream>

using namespace ireg;
namespace fs = std::filesystem;

namespace {

Matrix awkward_matrix() {
  Matrix m(3, 2);
  m << 0.1, -1e-300, 1.0 / 3.0, 6.02214076e23, -0.0, std::numeric_limits<double>::denorm_min();
  return m;
}

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "ireg_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(IregMat, StreamRoundTripIsBitExact) {
  const Matrix m = awkward_matrix();
  std::stringstream buf;
  write_iregmat(buf, m);
  EXPECT_EQ(buf.str().size(), 8u + 16u + 6u * 8u);
  EXPECT_EQ(buf.str().substr(0, 8), "IREGMAT1");
  const Matrix back = read_iregmat(buf);
  EXPECT_EQ(back, m);
}

TEST(IregMat, RowMajorLittleEndianLayout) {
  Matrix m(1, 2);
  m << 1.0, 2.0;
  std::stringstream buf;
  write_iregmat(buf, m);
  const std::string s = buf.str();
  EXPECT_EQ(static_cast<unsigned char>(s[8]), 1u);   // rows, low byte first
  EXPECT_EQ(static_cast<unsigned char>(s[16]), 2u);  // cols
  // 1.0 = 0x3FF0000000000000, stored little-endian.
  EXPECT_EQ(static_cast<unsigned char>(s[31]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(s[30]), 0xF0u);
  EXPECT_EQ(static_cast<unsigned char>(s[39]), 0x40u);
}

TEST(IregMat, FileRoundTrip) {
  ireg::test::Rng rng(4);
  const Matrix m = ireg::test::gaussian(17, 5, rng);
  const fs::path p = scratch("m.iregmat");
  write_iregmat(p, m);
  EXPECT_EQ(read_iregmat(p), m);
}

TEST(IregMat, RejectsBadMagic) {
  std::stringstream buf;
  write_iregmat(buf, Matrix::Ones(2, 2));
  std::string s = buf.str();
  s[7] = '2';
  std::stringstream bad(s);
  EXPECT_THROW(read_iregmat(bad), IoError);
}

TEST(IregMat, RejectsTruncation) {
  std::stringstream buf;
  write_iregmat(buf, Matrix::Ones(2, 2));
  const std::string s = buf.str();
  std::stringstream header_only(s.substr(0, 20));
  EXPECT_THROW(read_iregmat(header_only), IoError);
  std::stringstream short_data(s.substr(0, s.size() - 3));
  EXPECT_THROW(read_iregmat(short_data), IoError);
}

TEST(IregMat, MissingFile) {
  EXPECT_THROW(read_iregmat(fs::path("/nonexistent/dir/x.iregmat")), IoError);
  EXPECT_THROW(write_iregmat(fs::path("/nonexistent/dir/x.iregmat"), Matrix::Ones(1, 1)), IoError);
}

TEST(Csv, RoundTripIsExact) {
  const Matrix m = awkward_matrix();
  std::stringstream buf;
  write_csv(buf, m);
  const Matrix back = read_csv(buf);
  ASSERT_EQ(back.rows(), 3);
  ASSERT_EQ(back.cols(), 2);
  EXPECT_EQ(back, m);
}

TEST(Csv, Format) {
  Matrix m(2, 2);
  m << 1.0, 0.5, -2.0, 0.1;
  std::stringstream buf;
  write_csv(buf, m);
  EXPECT_EQ(buf.str(), "1,0.5\n-2,0.10000000000000001\n");
}

TEST(Csv, RejectsRaggedAndGarbage) {
  std::stringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), IoError);
  std::stringstream garbage("1,abc\n");
  EXPECT_THROW(read_csv(garbage), IoError);
  std::stringstream empty("");
  EXPECT_THROW(read_csv(empty), IoError);
}

TEST(Csv, VectorFileRoundTrip) {
  ireg::test::Rng rng(8);
  const Vector v = ireg::test::gaussian_vector(33, rng);
  const fs::path p = scratch("v.csv");
  write_vector_csv(p, v);
  EXPECT_EQ(read_vector_csv(p), v);
  write_csv(p, Matrix::Ones(2, 2));
  EXPECT_THROW(read_vector_csv(p), IoError);
}

TEST(FormatDouble, RoundTrips) {
  ireg::test::Rng rng(15);
  for (int i = 0; i < 1000; ++i) {
    const double v = ireg::test::uniform(rng, -1.0, 1.0) * std::pow(10.0, ireg::test::uniform(rng, -300, 300));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}
