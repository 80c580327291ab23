#include "doctest.h"

#include "mvgamma/errors.hpp"
#include "mvgamma/matrix_io.hpp"

#include <cstdio>
#include <sstream>

using namespace mvgamma;

TEST_CASE("matrix text round trip is exact") {
  Matrix m(3, 3);
  m << 1.0 / 3.0, 0.1, -2e-17, 0.1, 7.25, 1e300, -2e-17, 1e300, 5.0;
  std::stringstream ss;
  io::write_matrix(ss, m);
  CHECK(io::read_matrix(ss) == m);
}

TEST_CASE("matrix reader tolerates blank leading lines and extra spaces") {
  std::istringstream in("\n\n2\n 1   0.5\n0.5\t2 \n\n");
  const Matrix m = io::read_matrix(in);
  CHECK(m(1, 0) == 0.5);
  CHECK(m(1, 1) == 2.0);
}

TEST_CASE("malformed matrices raise ParseError") {
  for (const char* text : {"", "x\n1\n", "2\n1 2\n", "2\n1 2 3\n4 5\n", "2\n1 a\n3 4\n", "0\n",
                           "2.5\n1\n", "1\n1\n7\n", "2 2\n1 0\n0 1\n"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(io::read_matrix(in), ParseError);
  }
  CHECK_THROWS_AS(io::read_matrix_file("/nonexistent/sigma.txt"), ParseError);
}

TEST_CASE("sample csv round trip") {
  Matrix s(2, 3);
  s << 0.1, 0.2, 0.3, 1e-300, 4.0, 1.0 / 7.0;
  std::stringstream ss;
  io::write_sample_csv(ss, s);
  CHECK(ss.str().rfind("x1,x2,x3\n", 0) == 0);
  CHECK(io::read_sample_csv(ss) == s);

  const std::string path = "io_roundtrip_samples.csv";
  io::write_sample_csv_file(path, s);
  CHECK(io::read_sample_csv_file(path) == s);
  std::remove(path.c_str());
}

TEST_CASE("sample csv rejects bad header and ragged rows") {
  std::istringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS_AS(io::read_sample_csv(bad_header), ParseError);
  std::istringstream ragged("x1,x2\n1,2\n3\n");
  CHECK_THROWS_AS(io::read_sample_csv(ragged), ParseError);
}

TEST_CASE("format_double uses 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(2.0) == "2");
}
