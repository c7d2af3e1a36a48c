#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ldpustat::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Every flag of every subcommand. Empty strings / nullopt mean "not given".
struct RunConfig {
  std::string group;
  std::string action;

  std::string matrix, matrix2, w, wn, motif = "K2", phi, mu, data, profile;
  std::string family = "ising";
  std::string out;
  std::optional<double> theta;
  double p = std::numeric_limits<double>::infinity();
  std::optional<double> q;
  double t = 0.25;
  std::size_t n = 10, c = 3, blocks = 0, site = 0;
  std::uint64_t seed = 1;
  std::size_t sweeps = 0, burnin = 100, thin = 1, chains = 8, multistart = 16;
  std::string grid, n_list, r_list = "1,2,inf";
  double damping = 0.5;
  double tolerance = 0.0;  // check tolerance; 0 picks the scenario default
  std::size_t exact_limit = 14, restarts = 8, anneal_steps = 4000;
  bool force_annealing = false, no_twins = false, tree = false, refine = false, v_statistic = false;
};

/// Parses argv and runs the subcommand; JSON summaries go to `out`, diagnostics to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_kernel(const RunConfig& cfg, std::ostream& out);
int cmd_ustat(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_gibbs(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

}  // namespace ldpustat::cli
