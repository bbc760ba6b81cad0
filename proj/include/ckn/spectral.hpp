#pragma once

#include <cstddef>
#include <vector>

#include "ckn/cylinder_grid.hpp"
#include "ckn/params.hpp"
#include "ckn/tridiagonal.hpp"

namespace ckn {

/// Absolute tolerance of the Sturm bisection.
inline constexpr double kBisectionTolerance = 1e-10;

/// Symmetric tridiagonal discretization (Dirichlet at +-L) of a
/// Schroedinger-type operator on the cylinder axis:
///   linearized:    L_i = -d^2/dt^2 + LambdaTilde + i(N+i-2) - (p-1) phi1^{p-2}
///   poschl_teller: -d^2/dt^2 - beta cosh^{-2}(gamma t)
///   free:          -d^2/dt^2 + LambdaTilde
class ModeOperator {
 public:
  enum class Kind { Linearized, PoschlTeller, Free };

  static ModeOperator linearized(const DerivedConstants& dc, const Grid& grid, int mode);
  static ModeOperator poschl_teller(const DerivedConstants& dc, const Grid& grid);
  static ModeOperator free(const DerivedConstants& dc, const Grid& grid);

  Kind kind() const noexcept { return kind_; }
  int mode() const noexcept { return mode_; }
  const Grid& grid() const noexcept { return grid_; }
  const DerivedConstants& constants() const noexcept { return dc_; }
  const SymTridiagonal& matrix() const noexcept { return matrix_; }

  /// The same operator on grid().refined().
  ModeOperator refined() const;

 private:
  ModeOperator(Kind kind, const DerivedConstants& dc, const Grid& grid, int mode);

  Kind kind_;
  DerivedConstants dc_;
  Grid grid_;
  int mode_;
  SymTridiagonal matrix_;
};

/// The `count` smallest eigenvalues of the matrix, ascending.
std::vector<double> eigen_lowest(const ModeOperator& op, std::size_t count);

/// Eigenvalue `index` combined from the grid and its refinement,
/// (4 lambda_{h/2} - lambda_h) / 3, which removes the O(h^2) term.
/// Eigenvalues below the far-field level (bound states) are computed with
/// the discrete exterior decay condition at +-L instead of Dirichlet, solved
/// self-consistently in the eigenvalue.
double eigen_extrapolated(const ModeOperator& op, std::size_t index);
std::vector<double> eigen_lowest_extrapolated(const ModeOperator& op, std::size_t count);

struct SpectrumReport {
  std::vector<double> closed_form;  // nu_j, j < bound_state_count
  std::vector<double> numeric;      // extrapolated eigenvalues, same indices
  double max_error = 0.0;           // max_j |numeric - nu_j| / max(1, |nu_j|)
  double min_gap = 0.0;             // smallest spacing between computed bound states
  bool simple = false;              // every gap > 1e-8
  std::size_t negative_count = 0;   // extrapolated eigenvalues below -1e-6
  std::size_t expected_count = 0;   // bound_state_count
};

/// Pure sech^2 operator against the closed-form nu_j.
SpectrumReport pt_spectrum_check(const DerivedConstants& dc, const Grid& grid);

struct ModeMargin {
  int mode = 0;
  double smallest_abs = 0.0;  // min |eigenvalue| of L_mode
  double bottom = 0.0;        // lowest eigenvalue of L_mode
  std::size_t negative_count = 0;
  bool kernel = false;
};

struct NondegeneracyReport {
  bool nondegenerate = false;
  std::size_t radial_kernel_dim = 0;  // eigenvalues of L_0 within tolerance of 0
  int i_max = 0;                      // modes above i_max are positive definite
  double tolerance = 0.0;
  bool refined = false;               // grid was halved once near the tolerance
  std::vector<ModeMargin> margins;    // modes 1..i_max
};

/// Kernel tolerance 1e-6 max(1, LambdaTilde).
double kernel_tolerance(const DerivedConstants& dc);

/// Smallest i >= 1 with LambdaTilde + i(N+i-2) + nu_0 > 0.
int last_relevant_mode(const DerivedConstants& dc);

/// Numerical decision of T_z Z = ker D^2 f_0(z): mode 0 must have a
/// one-dimensional kernel and every mode i >= 1 none.
NondegeneracyReport nondegenerate(const ValidatedParams& params, const Grid& grid = Grid());

/// Margins of one mode operator, using the extrapolated eigenvalues closest to 0.
ModeMargin mode_margin(const DerivedConstants& dc, const Grid& grid, int mode);

struct SymmetryBreakingReport {
  bool breaks = false;        // mode-1 bottom < -tolerance
  double mode1_bottom = 0.0;
  double curve = 0.0;         // h_1(a, 0), derived
  bool curve_predicts = false;  // b < curve
};

/// lambda = 0 test of whether the radial extremal is unstable in the
/// first spherical-harmonic sector.
SymmetryBreakingReport symmetry_breaking(double a, double b, int N, const Grid& grid = Grid());

/// Radial restriction of the CKN quotient, ||u||^2 / ||u||_{p,b}^2.
/// Throws std::invalid_argument for the zero profile.
double rayleigh(const CylinderSpace& space, const RadialProfile& u, double p);

}  // namespace ckn
