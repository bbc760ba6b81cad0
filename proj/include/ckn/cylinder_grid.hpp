#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ckn/params.hpp"
#include "ckn/tridiagonal.hpp"

namespace ckn {

inline constexpr double kDefaultHalfWidth = 40.0;
inline constexpr std::size_t kDefaultPoints = 8000;

/// Uniform grid on the cylinder axis t = ln r: interior nodes
/// t_k = -L + (k+1) h, k = 0..n-1, with h = 2L/(n+1). Profiles vanish at +-L.
class Grid {
 public:
  Grid(double half_width = kDefaultHalfWidth, std::size_t points = kDefaultPoints);

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return points_; }
  double step() const noexcept { return step_; }
  double node(std::size_t k) const noexcept {
    return -half_width_ + static_cast<double>(k + 1) * step_;
  }
  std::vector<double> nodes() const;

  /// Same interval, half the step (n -> 2n+1); old nodes are every other new node.
  Grid refined() const { return Grid(half_width_, 2 * points_ + 1); }

  bool operator==(const Grid&) const = default;

 private:
  double half_width_;
  std::size_t points_;
  double step_;
};

/// Values v(t_k) of a radial function u(r) = r^{-(N-2-2a)/2} v(ln r).
class RadialProfile {
 public:
  RadialProfile(Grid grid, std::vector<double> values);
  static RadialProfile zero(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  RadialProfile& operator+=(const RadialProfile& other);
  RadialProfile& operator-=(const RadialProfile& other);
  RadialProfile& operator*=(double c);

 private:
  Grid grid_;
  std::vector<double> values_;
};

RadialProfile operator+(RadialProfile lhs, const RadialProfile& rhs);
RadialProfile operator-(RadialProfile lhs, const RadialProfile& rhs);
RadialProfile operator*(double c, RadialProfile u);

/// values[k] = f(t_k). Throws std::domain_error on a non-finite sample.
RadialProfile sample(const std::function<double(double)>& f, const Grid& grid);

/// Tridiagonal matrix S = tridiag(-1/h^2, 2/h^2 + LambdaTilde, -1/h^2), the
/// discrete form of int (v'^2 + LambdaTilde v^2) dt. Positive definite.
class StiffnessOperator {
 public:
  StiffnessOperator(const Grid& grid, double lambda_tilde);

  const Grid& grid() const noexcept { return grid_; }
  double lambda_tilde() const noexcept { return lambda_tilde_; }
  const SymTridiagonal& matrix() const noexcept { return matrix_; }

  RadialProfile apply(const RadialProfile& u) const;
  RadialProfile solve(const RadialProfile& rhs) const;

 private:
  Grid grid_;
  double lambda_tilde_;
  SymTridiagonal matrix_;
};

/// Radial functions in cylinder coordinates with the H scalar product
/// (u, v) = omega int (u'v' + LambdaTilde uv) dt and the weighted L^p norm.
class CylinderSpace {
 public:
  CylinderSpace(const Grid& grid, double lambda_tilde, double omega);
  CylinderSpace(const DerivedConstants& dc, const Grid& grid);

  const Grid& grid() const noexcept { return stiffness_.grid(); }
  const StiffnessOperator& stiffness() const noexcept { return stiffness_; }
  double omega() const noexcept { return omega_; }
  double lambda_tilde() const noexcept { return stiffness_.lambda_tilde(); }

  /// omega h u^T S v, summed term by term so that inner(u,v) == inner(v,u).
  double inner(const RadialProfile& u, const RadialProfile& v) const;
  double norm(const RadialProfile& u) const;

  /// (omega sum_k h |u_k|^p)^{1/p}; the radial weights cancel exactly at the
  /// critical exponent.
  double lp_norm(const RadialProfile& u, double p) const;

  RadialProfile apply_stiffness(const RadialProfile& u) const { return stiffness_.apply(u); }
  RadialProfile solve_stiffness(const RadialProfile& rhs) const { return stiffness_.solve(rhs); }

  /// H-norm of the Riesz representative of the functional phi -> omega h r^T phi,
  /// i.e. sqrt(omega h r^T S^{-1} r).
  double dual_norm(const RadialProfile& r) const;

 private:
  void require_grid(const RadialProfile& u) const;

  StiffnessOperator stiffness_;
  double omega_;
};

/// Two-column CSV (t, value) with the header `# L=<L> n=<n> convention=t=ln(r)`
/// followed by optional extra `#` lines and the column names.
void write_profile_csv(std::ostream& out, const RadialProfile& u,
                       const std::vector<std::string>& extra_header = {});
RadialProfile read_profile_csv(std::istream& in);

}  // namespace ckn
