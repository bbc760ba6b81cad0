#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ckn/closed_form.hpp"
#include "ckn/cylinder_grid.hpp"
#include "ckn/params.hpp"
#include "ckn/perturbation.hpp"
#include "ckn/spectral.hpp"

namespace ckn {

/// Newton iteration failed to reach the requested residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual, int iterations)
      : std::runtime_error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

/// The unperturbed critical manifold is degenerate; the reduction does not apply.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// G(u) = (omega/p) sum_k h k(e^{t_k}) (u_k)_+^p.
double G_functional(const RadialProfile& u, const Perturbation& k, const DerivedConstants& dc);

/// Gamma(mu) = G(z_mu) = (omega/p) int k(e^t) phi1(t - ln mu)^p dt on the line.
double Gamma(double mu, const Perturbation& k, const DerivedConstants& dc,
             double h = kLineQuadratureStep);

/// Limit of Gamma at mu -> 0: k(0) norm_pb_p / p.
double Gamma0(const Perturbation& k, const DerivedConstants& dc);

/// Gamma''(0) = (Delta k(0) / (N p)) int |x|^2 |x|^{-bp} z1^p dx.
/// Throws std::invalid_argument when the perturbation carries no Laplacian.
double Gamma2_0(const Perturbation& k, const DerivedConstants& dc);

/// Gamma''(mu) at mu = e^{s0} from centred differences of g(s) = Gamma(e^s):
/// (g'' - g') / mu^2.
double Gamma2_fd(const Perturbation& k, const DerivedConstants& dc, double s0, double delta = 1e-2);

/// Normalized d/dmu of the sampled profile phi1(t - ln mu): the direction
/// -phi1'(t - ln mu), scaled to unit H-norm on the grid.
RadialProfile tangent(double mu, const DerivedConstants& dc, const Grid& grid);

struct ReductionOptions {
  double tol = 1e-10;        // H-norm of the constrained gradient and |constraint|
  int max_iterations = 30;
  double eps_ceiling = 0.1;  // larger |eps| is refused
  unsigned threads = 0;      // 0: hardware concurrency
};

struct ReductionResult {
  explicit ReductionResult(RadialProfile correction) : w(std::move(correction)) {}

  double mu = 0.0;
  double eps = 0.0;
  RadialProfile w;            // u - z_mu, with z_mu the discrete ground state
  double alpha = 0.0;         // multiplier of the tangent direction
  double w_norm = 0.0;
  double grad_residual = 0.0;  // ||f_eps'(u) - alpha xi||
  double full_residual = 0.0;  // ||f_eps'(u)||
  double constraint = 0.0;     // (u - phi_mu, xi)
  double phi_value = 0.0;      // f_eps(u)
  double base_energy = 0.0;    // f_0(z_mu)
  double base_g = 0.0;         // G(z_mu)
  int newton_iters = 0;
};

/// Scalars as `# key=value` lines followed by the profile CSV of w.
void write_result(std::ostream& out, const ReductionResult& result);

struct ProfileRow {
  double mu = 0.0;
  double phi = 0.0;
  double gamma = 0.0;
  double w_norm = 0.0;
  double alpha = 0.0;
  int newton_iters = 0;
  bool ok = false;
  std::string error;  // set when the solve at this mu failed
};

struct CriticalPoint {
  double mu_star = 0.0;
  double phi_value = 0.0;
  double full_residual = 0.0;
  double alpha = 0.0;
  bool maximum = false;    // of Phi
  bool certified = false;  // |alpha| <= 1e-8 and full_residual <= 1e-6
};

struct CriticalSearch {
  std::vector<ProfileRow> sweep;
  std::vector<CriticalPoint> points;  // empty: no interior extremum
};

/// Log-uniform grid of `points` values of mu between mu_min and mu_max.
std::vector<double> log_uniform(double mu_min, double mu_max, std::size_t points);

/// Default sweep: 81 points with ln mu in [-10, 10].
std::vector<double> default_mu_grid();

/// Finite-dimensional reduction of f_eps(u) = (1/2)||u||^2 - (1/p) int (1 + eps k)|x|^{-bp} u_+^p
/// around the radial ground-state family, discretized on a Grid.
///
/// For each mu the discrete problem is solved twice with the constraint
/// (u - phi_mu, xi_mu) = 0: first at eps = 0, which gives the discrete ground
/// state z_mu, then at eps. w is the difference of the two.
class Reduction {
 public:
  /// Throws DegenerateError if the parameters fail the non-degeneracy test.
  Reduction(const ValidatedParams& params, Perturbation k, Grid grid = Grid(),
            ReductionOptions options = {});

  const DerivedConstants& constants() const noexcept { return dc_; }
  const Perturbation& perturbation() const noexcept { return k_; }
  const Grid& grid() const noexcept { return space_.grid(); }
  const CylinderSpace& space() const noexcept { return space_; }
  const ReductionOptions& options() const noexcept { return options_; }
  const NondegeneracyReport& nondegeneracy() const noexcept { return report_; }

  RadialProfile tangent(double mu) const;

  /// Discrete f_eps on the grid.
  double energy(const RadialProfile& u, double eps) const;

  /// Throws SolverError when Newton does not converge.
  ReductionResult solve_w(double mu, double eps) const;

  double phi(double mu, double eps) const { return solve_w(mu, eps).phi_value; }

  /// Rows are in mu order; failures are flagged per row.
  std::vector<ProfileRow> phi_profile(double eps, const std::vector<double>& mu_grid) const;

  /// Interior extrema of Phi_eps on the grid, refined in ln mu by golden
  /// section to refine_tol and then by secant steps on the multiplier.
  CriticalSearch find_critical(double eps, const std::vector<double>& mu_grid,
                               double refine_tol = 1e-6) const;

 private:
  struct Solve {
    std::vector<double> u;
    double alpha = 0.0;
    double grad_residual = 0.0;
    double constraint = 0.0;
    int iterations = 0;
  };

  Solve newton(const std::vector<double>& start, double alpha0, const std::vector<double>& anchor,
               const std::vector<double>& xi, double eps) const;
  std::vector<double> load(const std::vector<double>& u, double eps) const;

  DerivedConstants dc_;
  Perturbation k_;
  CylinderSpace space_;
  ReductionOptions options_;
  NondegeneracyReport report_;
  std::vector<double> k_nodes_;  // k(e^{t_k})
};

}  // namespace ckn
