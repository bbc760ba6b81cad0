#include "ckn/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

extern "C" void dgbsv_(const int* n, const int* kl, const int* ku, const int* nrhs, double* ab,
                       const int* ldab, int* ipiv, double* b, const int* ldb, int* info);

namespace ckn {

SymTridiagonal::SymTridiagonal(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag)), off_(std::move(off)) {
  if (diag_.empty()) throw std::invalid_argument("SymTridiagonal: empty matrix");
  if (off_.size() + 1 != diag_.size()) {
    throw std::invalid_argument("SymTridiagonal: off-diagonal must have size n-1");
  }
}

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw std::invalid_argument("SymTridiagonal::apply: size mismatch");
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = diag_[k] * x[k];
    if (k > 0) acc += off_[k - 1] * x[k - 1];
    if (k + 1 < n) acc += off_[k] * x[k + 1];
    y[k] = acc;
  }
  return y;
}

double SymTridiagonal::quadratic_form(std::span<const double> x) const {
  const auto y = apply(x);
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

std::size_t SymTridiagonal::count_below(double x) const {
  const std::size_t n = size();
  double max_off2 = 1.0;
  for (double e : off_) max_off2 = std::max(max_off2, e * e);
  const double pivmin = std::numeric_limits<double>::min() * max_off2;

  std::size_t count = 0;
  double d = diag_[0] - x;
  if (std::fabs(d) < pivmin) d = -pivmin;
  if (d < 0) ++count;
  for (std::size_t k = 1; k < n; ++k) {
    d = (diag_[k] - x) - off_[k - 1] * off_[k - 1] / d;
    if (std::fabs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

std::pair<double, double> SymTridiagonal::spectrum_bounds() const {
  const std::size_t n = size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < n; ++k) {
    double radius = 0.0;
    if (k > 0) radius += std::fabs(off_[k - 1]);
    if (k + 1 < n) radius += std::fabs(off_[k]);
    lo = std::min(lo, diag_[k] - radius);
    hi = std::max(hi, diag_[k] + radius);
  }
  return {lo, hi};
}

double SymTridiagonal::eigenvalue(std::size_t k, double tol) const {
  if (k >= size()) throw std::out_of_range("SymTridiagonal::eigenvalue: index out of range");
  auto [lo, hi] = spectrum_bounds();
  const double pad = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  lo -= pad;
  hi += pad;
  for (int it = 0; it < 256 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> SymTridiagonal::lowest(std::size_t count, double tol) const {
  if (count > size()) throw std::out_of_range("SymTridiagonal::lowest: count exceeds size");
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) values[k] = eigenvalue(k, tol);
  return values;
}

std::vector<double> SymTridiagonal::solve_positive_definite(std::span<const double> rhs) const {
  const std::size_t n = size();
  if (rhs.size() != n) throw std::invalid_argument("solve_positive_definite: size mismatch");
  std::vector<double> c(n), x(rhs.begin(), rhs.end());
  double pivot = diag_[0];
  if (!(pivot > 0)) throw std::domain_error("solve_positive_definite: matrix is not positive definite");
  x[0] /= pivot;
  for (std::size_t k = 1; k < n; ++k) {
    c[k - 1] = off_[k - 1] / pivot;
    pivot = diag_[k] - off_[k - 1] * c[k - 1];
    if (!(pivot > 0)) {
      throw std::domain_error("solve_positive_definite: matrix is not positive definite");
    }
    x[k] = (x[k] - off_[k - 1] * x[k - 1]) / pivot;
  }
  for (std::size_t k = n - 1; k-- > 0;) x[k] -= c[k] * x[k + 1];
  return x;
}

std::vector<double> SymTridiagonal::solve(std::span<const double> rhs, bool regularize) const {
  const std::size_t n = size();
  if (rhs.size() != n) throw std::invalid_argument("SymTridiagonal::solve: size mismatch");
  std::vector<double> d(diag_), dl(off_), du(off_), du2(n, 0.0), b(rhs.begin(), rhs.end());
  const auto [lo, hi] = spectrum_bounds();
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi));
  const auto check = [&](double& pivot) {
    if (pivot != 0.0) return;
    if (!regularize) throw std::domain_error("SymTridiagonal::solve: singular matrix");
    pivot = tiny > 0 ? tiny : std::numeric_limits<double>::min();
  };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(d[i]) >= std::fabs(dl[i])) {
      check(d[i]);
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  check(d[n - 1]);
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;) {
    b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
  return b;
}

std::vector<double> SymTridiagonal::eigenvector(double eigenvalue, int iterations) const {
  const std::size_t n = size();
  std::vector<double> shifted_diag(diag_);
  for (double& v : shifted_diag) v -= eigenvalue;
  const SymTridiagonal shifted(std::move(shifted_diag), off_);

  // Deterministic start vector with components in every direction.
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(k) + 0.3);
  for (int it = 0; it < iterations; ++it) {
    x = shifted.solve(x, /*regularize=*/true);
    const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    if (!(norm > 0) || !std::isfinite(norm)) throw std::runtime_error("inverse iteration failed");
    for (double& v : x) v /= norm;
  }
  return x;
}

std::pair<std::vector<double>, double> solve_bordered(std::span<const double> diag,
                                                      std::span<const double> lower,
                                                      std::span<const double> upper,
                                                      std::span<const double> col,
                                                      std::span<const double> row,
                                                      std::span<const double> rhs, double s) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() + 1 != n || upper.size() + 1 != n || col.size() != n ||
      row.size() != n || rhs.size() != n) {
    throw std::invalid_argument("solve_bordered: inconsistent sizes");
  }
  // Unknowns per node i: x_i, y_i (copy of y), c_i = sum_{k<=i} row_k x_k.
  //   T x + col y_i          = rhs_i
  //   y_i - y_{i+1} = 0       (last node: c_{n-1} = s)
  //   c_i - c_{i-1} - row_i x_i = 0
  const int kl = 3, ku = 3;
  const int ldab = 2 * kl + ku + 1;
  const int m = static_cast<int>(3 * n);
  std::vector<double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(m), 0.0);
  const auto at = [&](int i, int j) -> double& {
    return ab[static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab) +
              static_cast<std::size_t>(kl + ku + i - j)];
  };
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const int x = static_cast<int>(3 * k), y = x + 1, c = x + 2;
    at(x, x) = diag[k];
    if (k > 0) at(x, x - 3) = lower[k - 1];
    if (k + 1 < n) at(x, x + 3) = upper[k];
    at(x, y) = col[k];
    b[static_cast<std::size_t>(x)] = rhs[k];
    if (k + 1 < n) {
      at(y, y) = 1.0;
      at(y, y + 3) = -1.0;
    } else {
      at(y, c) = 1.0;
      b[static_cast<std::size_t>(y)] = s;
    }
    at(c, c) = 1.0;
    if (k > 0) at(c, c - 3) = -1.0;
    at(c, x) = -row[k];
  }
  std::vector<int> ipiv(static_cast<std::size_t>(m));
  const int nrhs = 1;
  int info = 0;
  dgbsv_(&m, &kl, &ku, &nrhs, ab.data(), &ldab, ipiv.data(), b.data(), &m, &info);
  if (info != 0) throw std::domain_error("solve_bordered: singular system");
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = b[3 * k];
  return {std::move(x), b[1]};
}

}  // namespace ckn
