#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ckn {

/// Real symmetric tridiagonal matrix stored by its diagonal and its
/// off-diagonal (size n-1).
class SymTridiagonal {
 public:
  SymTridiagonal() = default;
  SymTridiagonal(std::vector<double> diag, std::vector<double> off);

  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> off() const noexcept { return off_; }

  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;

  /// Number of eigenvalues strictly below x, from the inertia of T - xI
  /// (Sturm sequence of the LDL^T pivots).
  std::size_t count_below(double x) const;

  /// Gershgorin enclosure [lo, hi] of the spectrum.
  std::pair<double, double> spectrum_bounds() const;

  /// k-th smallest eigenvalue (0-based) by bisection on count_below.
  double eigenvalue(std::size_t k, double tol = 1e-10) const;

  /// The `count` smallest eigenvalues, ascending.
  std::vector<double> lowest(std::size_t count, double tol = 1e-10) const;

  /// Thomas algorithm; valid for positive definite matrices only.
  std::vector<double> solve_positive_definite(std::span<const double> rhs) const;

  /// Gaussian elimination with partial pivoting (LAPACK gtsv scheme).
  /// Exactly zero pivots are replaced by a tiny value when `regularize` is
  /// set, which is what inverse iteration wants; otherwise they throw.
  std::vector<double> solve(std::span<const double> rhs, bool regularize = false) const;

  /// Unit-norm eigenvector for a (computed) eigenvalue by inverse iteration.
  std::vector<double> eigenvector(double eigenvalue, int iterations = 4) const;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

/// Solution (x, y) of the bordered system
///   [ T   col ] [x]   [rhs]
///   [ row^T 0 ] [y] = [ s ]
/// for a tridiagonal T that may itself be singular. The border is unrolled
/// into a running sum and a copied scalar, giving a banded matrix of
/// bandwidth 3 that is factored by LAPACK dgbsv (partial pivoting), O(n).
/// Throws std::domain_error if the system is singular.
std::pair<std::vector<double>, double> solve_bordered(std::span<const double> diag,
                                                      std::span<const double> lower,
                                                      std::span<const double> upper,
                                                      std::span<const double> col,
                                                      std::span<const double> row,
                                                      std::span<const double> rhs, double s);

}  // namespace ckn
