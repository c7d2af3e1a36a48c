#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ldpustat/kernel.hpp"
#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/phi.hpp"
#include "ldpustat/tilt.hpp"

namespace ldpustat {

/// Whole file as text; throws InvalidArgument naming the path when it cannot be read.
std::string read_text_file(const std::string& path);

/// Comma-separated rows of decimals. Blank lines and lines starting with '#' are skipped;
/// a first line that does not parse as numbers is treated as a header.
std::vector<std::vector<double>> parse_csv_numbers(std::string_view text, bool allow_header = true);

/// n rows of n decimals.
Matrix parse_matrix_csv(std::string_view text);
/// As parse_matrix_csv, then checks symmetry (exactly, or within tol).
SymmetricMatrix parse_symmetric_csv(std::string_view text, double tol = 0.0);

/// m x m block values, optionally preceded by a row of m + 1 breakpoints.
StepKernel parse_kernel_csv(std::string_view text);

/// Atom indices (0-based), separated by commas and/or newlines.
DataVector parse_data_csv(std::string_view text);

/// Rows "atom,prob"; an "atom,prob" header is allowed.
FiniteBaseMeasure parse_measure_csv(std::string_view text);

/// Rows "i1,...,iv,value" listing every atom tuple exactly once (0-based indices).
PhiKernel parse_phi_table_csv(std::string_view text);

/// One row per block: a single column for real profiles, c columns for Potts profiles.
Matrix parse_profile_csv(std::string_view text);

/// Value rounded to 12 significant digits.
double round12(double x);
/// "%.12g" text; infinities print as "inf" / "-inf" and NaN as "nan".
std::string format_number(double x);

/// CSV text of a matrix (format_number per entry).
std::string matrix_to_csv(const Matrix& m);

}  // namespace ldpustat
