#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ckn {

/// Radial perturbation k(|x|) of the nonlinearity, with the metadata the
/// existence theorems are phrased in: k(0), k(infinity) and Delta k(0).
class Perturbation {
 public:
  enum class Kind { GaussianBump, Rational, Tabulated };

  /// k(r) = c exp(-(ln r - t0)^2 / s^2). Requires s > 0.
  static Perturbation gaussian_bump(double c, double t0, double s);

  /// k(r) = (alpha + beta r^2) / (1 + r^2)^2, Delta k(0) = 2N(beta - 2 alpha).
  static Perturbation rational(double alpha, double beta, int N);

  /// Monotone cubic (Fritsch-Carlson) interpolation of (r, k) samples,
  /// constant beyond the first and last abscissa. Metadata is trusted.
  static Perturbation tabulated(std::vector<double> r, std::vector<double> k, double k0,
                                double kinf, std::optional<double> laplacian0,
                                std::string source = "table");

  /// k == c, as a two-point table.
  static Perturbation constant(double c);

  Kind kind() const noexcept { return kind_; }
  double k0() const noexcept { return k0_; }
  double kinf() const noexcept { return kinf_; }
  const std::optional<double>& laplacian0() const noexcept { return laplacian0_; }

  /// Canonical spelling in the `kind:args` mini-language.
  const std::string& spec() const noexcept { return spec_; }

  /// k(r) for r >= 0.
  double operator()(double r) const;

  /// k(e^t), evaluated without forming e^t where that would overflow.
  double at_log_radius(double t) const;

 private:
  Perturbation() = default;
  double interpolate(double r) const;

  Kind kind_ = Kind::GaussianBump;
  std::vector<double> args_;
  std::vector<double> r_, k_, slope_;
  double k0_ = 0.0;
  double kinf_ = 0.0;
  std::optional<double> laplacian0_;
  std::string spec_;
};

/// Parses `gaussian-bump:c,t0,s`, `rational:alpha,beta` or `tabulated:<path>`.
/// Throws std::invalid_argument with the offending text on malformed input.
Perturbation parse_perturbation(const std::string& text, int N);

/// Reads a table of `r,k` rows (comma or whitespace separated, r strictly
/// increasing, r >= 0). Comment lines may carry `k0=`, `kinf=`, `laplacian0=`;
/// missing k0 / kinf default to the first / last tabulated value.
Perturbation load_tabulated(const std::filesystem::path& path);

/// Which existence hypotheses the metadata satisfies:
///   vanishing_ends:   k(inf) = k(0) = 0
///   bump_at_origin:   k(inf) <= k(0) and Delta k(0) > 0
///   dip_at_origin:    k(inf) >= k(0) and Delta k(0) < 0
struct ConditionReport {
  bool vanishing_ends = false;
  bool bump_at_origin = false;
  bool dip_at_origin = false;
  bool laplacian_known = false;
  std::string prediction;
};

ConditionReport check_conditions(const Perturbation& k);

}  // namespace ckn
