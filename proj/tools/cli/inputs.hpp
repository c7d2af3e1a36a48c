#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ldpustat/kernel.hpp"
#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"
#include "ldpustat/phi.hpp"
#include "ldpustat/tilt.hpp"
#include "ldpustat/variational.hpp"

#include "cli/app.hpp"

namespace ldpustat::cli {

/// Builtin name (K2, K3, P4, S3, C4, ...) or a path to an edge-list file.
Motif load_motif(const std::string& spec);
/// rademacher | uniform:c | csv:PATH
FiniteBaseMeasure load_mu(const std::string& spec);
/// product | monochrome | table:PATH
PhiKernel load_phi(const std::string& spec, std::size_t arity, const FiniteBaseMeasure& mu);
StepKernel load_kernel(const std::string& path);
SymmetricMatrix load_matrix(const std::string& path);

/// "a,b,c" or "start:stop:count" (inclusive linspace).
std::vector<double> parse_grid(const std::string& spec);
std::vector<std::size_t> parse_size_list(const std::string& spec);
/// A real number or "inf".
double parse_extended(const std::string& text);

/// Limiting problem from --family, --motif, --w (default W = 1), --mu, --c and --phi.
VariationalProblem make_problem(const RunConfig& cfg);

}  // namespace ldpustat::cli
