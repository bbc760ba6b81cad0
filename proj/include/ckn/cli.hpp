#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ckn/cylinder_grid.hpp"
#include "ckn/params.hpp"

namespace ckn::cli {

enum ExitCode : int {
  kSuccess = 0,
  kDomainError = 1,
  kSolverError = 2,
  kCertificateFailure = 3,
};

struct RunConfig {
  std::string subcommand;
  ProblemParams params{4, 0.0, 0.0, 0.0};
  double L = kDefaultHalfWidth;
  std::size_t n = kDefaultPoints;
  std::vector<double> eps{1e-2};
  std::string k = "gaussian-bump:1,0,1";
  double mu_min = 4.5399929762484854e-05;  // e^-10
  double mu_max = 22026.465794806718;      // e^10
  std::size_t mu_points = 81;
  std::optional<double> a_min, a_max;
  std::size_t a_points = 20;
  std::size_t b_points = 20;
  std::vector<int> j{1, 2, 3, 4, 5};
  unsigned threads = 0;
  std::string out;

  Grid grid() const { return Grid(L, n); }
};

/// The command line that reproduces `config` (without --out and --threads).
std::string canonical_command(const RunConfig& config);

/// `# ckn <version>` and `# command: ...` lines.
void write_header(std::ostream& out, const RunConfig& config);

/// Parses argv and runs the subcommand. Results go to `out` (or --out),
/// diagnostics to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_curves(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_regions(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_groundstate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gamma(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reduce(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_selfcheck(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ckn::cli
