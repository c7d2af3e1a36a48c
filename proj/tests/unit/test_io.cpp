#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>

#include "ldpustat/errors.hpp"
#include "ldpustat/io.hpp"

using namespace ldpustat;

namespace {

std::size_t error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("csv numbers skip comments, blanks and a header") {
  const auto rows = parse_csv_numbers("a,b\n# note\n1, 2\n\n3,4.5e-1\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == 0.45);
  CHECK(error_line([] { parse_csv_numbers("1,2\n3,x\n"); }) == 2);
}

TEST_CASE("symmetric matrices") {
  const auto q = parse_symmetric_csv("0,1\n1,0\n");
  CHECK(q.size() == 2);
  CHECK(error_line([] { parse_symmetric_csv("0,1\n2,0\n"); }) > 0);
  CHECK(error_line([] { parse_matrix_csv("0,1\n2\n"); }) == 2);
  CHECK_THROWS_AS(parse_matrix_csv("0,1,2\n1,0,2\n"), ParseError);
}

TEST_CASE("kernels with and without breakpoints") {
  const auto plain = parse_kernel_csv("1,2\n2,3\n");
  CHECK(plain.blocks() == 2);
  CHECK(plain.width(0) == 0.5);
  const auto withb = parse_kernel_csv("0,0.25,1\n1,2\n2,3\n");
  CHECK(withb.blocks() == 2);
  CHECK(withb.width(0) == 0.25);
  CHECK(withb(0.1, 0.9) == 2.0);
  const auto square = parse_kernel_csv("1,2,3\n2,4,5\n3,5,6\n");
  CHECK(square.blocks() == 3);
}

TEST_CASE("data, measures, phi tables, profiles") {
  CHECK(parse_data_csv("0,1\n1\n0\n").indices == std::vector<std::size_t>{0, 1, 1, 0});
  CHECK(error_line([] { parse_data_csv("0,1\n-1\n"); }) == 2);
  CHECK(error_line([] { parse_data_csv("0,1\n1.5\n"); }) == 2);

  const auto mu = parse_measure_csv("atom,prob\n-1,0.25\n1,0.75\n");
  CHECK(mu.prob(1) == 0.75);
  CHECK_THROWS_AS(parse_measure_csv("1,0.5\n2,0.2\n"), InvalidArgument);

  const auto phi = parse_phi_table_csv("0,0,1\n0,1,-1\n1,0,-1\n1,1,1\n");
  CHECK(phi.arity() == 2);
  CHECK(phi(std::vector<std::size_t>{0, 1}) == -1.0);
  CHECK_THROWS_AS(parse_phi_table_csv("0,0,1\n0,1,-1\n1,0,-1\n"), ParseError);
  CHECK_THROWS_AS(parse_phi_table_csv("0,0,1\n0,0,1\n1,0,-1\n1,1,1\n"), ParseError);

  const auto prof = parse_profile_csv("0.1,0.9\n0.5,0.5\n");
  CHECK(prof.rows() == 2);
  CHECK(prof.cols() == 2);
}

TEST_CASE("number formatting is stable at 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(NAN) == "nan");
  CHECK(round12(0.1 + 0.2) == 0.3);
  CHECK(matrix_to_csv(Matrix::from_rows({{1, 0.5}, {2, 3}})) == "1,0.5\n2,3\n");
}

TEST_CASE("missing files name the path") {
  try {
    read_text_file("/nonexistent/for/sure.csv");
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("/nonexistent/for/sure.csv") != std::string::npos);
  }
}
