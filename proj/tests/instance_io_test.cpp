#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "test_support.hpp"
#include "tsylv/instance_io.hpp"

namespace {

using namespace tsylv;
using tsylv::testing::uniform_index;

ErrorKind parse_kind(const std::string& text) {
  std::istringstream in(text);
  try {
    read_instance(in);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed:\n" << text;
  return ErrorKind::ShapeError;
}

TEST(FormatExact, ShortestRoundTrip) {
  EXPECT_EQ(format_exact(0.5), "0.5");
  EXPECT_EQ(format_exact(-3.0), "-3");
  EXPECT_EQ(format_exact(0.1), "0.1");
  for (double x : {1.0 / 3.0, std::numeric_limits<double>::min(), std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::denorm_min(), -0.0, 1e-300, 123456789.123456789}) {
    const std::string s = format_exact(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, x) << s;
    EXPECT_EQ(std::signbit(back), std::signbit(x));
  }
}

TEST(WriteMatrix, Layout) {
  std::ostringstream os;
  write_matrix(os, "A", DenseMatrix{{1, -0.5}, {2.25, 0}});
  EXPECT_EQ(os.str(), "matrix A 2 2\n1 -0.5\n2.25 0\n");
}

TEST(ReadInstance, ParsesCommentsAndBlankLines) {
  std::istringstream in(
      "# worked example\n\nmatrix A 2 1\n1\n  1  # trailing\n"
      "matrix B 1 2\n1\t0\n\nmatrix C 2 2\n2 1\n+2 1e0\nmatrix X 1 1\n9\n");
  const ProblemInstance inst = read_instance(in);
  EXPECT_EQ(inst.a(), (DenseMatrix{{1}, {1}}));
  EXPECT_EQ(inst.b(), (DenseMatrix{{1, 0}}));
  EXPECT_EQ(inst.c(), (DenseMatrix{{2, 1}, {2, 1}}));
}

TEST(ReadInstance, RoundTripIsExact) {
  Rng rng(71);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = uniform_index(rng, 1, 6), n = uniform_index(rng, 1, 6);
    // Spread magnitudes so the decimal rendering is exercised beyond [-1, 1).
    auto draw = [&](std::size_t r, std::size_t c) {
      DenseMatrix x = rng.matrix(r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) x(i, j) *= std::pow(10.0, 40.0 * rng.symmetric_unit());
      return x;
    };
    const ProblemInstance inst{draw(m, n), draw(n, m), draw(m, m)};
    std::stringstream buf;
    write_instance(buf, inst);
    const ProblemInstance back = read_instance(buf);
    EXPECT_EQ(back.a(), inst.a());
    EXPECT_EQ(back.b(), inst.b());
    EXPECT_EQ(back.c(), inst.c());
    std::ostringstream again;
    write_instance(again, back);
    EXPECT_EQ(again.str(), buf.str());
  }
}

TEST(ReadInstance, RejectsMalformedInput) {
  EXPECT_EQ(parse_kind("matrix A 1 1\n1\nmatrix B 1 1\n1\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A 1 1\n1\nmatrix A 1 1\n1\nmatrix B 1 1\n1\nmatrix C 1 1\n1\n"),
            ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A 2 1\n1\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A 1 2\n1\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A 1 1\nx\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A 1 1\n1.5.2\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A 1 1\nnan\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("matrix A one 1\n1\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind("mat A 1 1\n1\n"), ErrorKind::ParseError);
  // Dimensions that do not fit together are a parse error of the file.
  EXPECT_EQ(parse_kind("matrix A 1 1\n1\nmatrix B 2 1\n1\n1\nmatrix C 1 1\n1\n"),
            ErrorKind::ParseError);
}

TEST(ReadMatrices, ReportsLineNumbers) {
  std::istringstream in("# c\nmatrix A 1 2\n1 2 3\n");
  try {
    read_matrices(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

}  // namespace
