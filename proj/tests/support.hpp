#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ckn/params.hpp"

namespace ckn::testing {

/// Seeded draws of admissible (N, a, b, lambda) and of test vectors.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// N in [n_lo, n_hi], a in [-1.5, (N-2)/2 - 0.05], b in [a, a + 0.95],
  /// lambda in [-2, 0.9 ((N-2-2a)/2)^2].
  ProblemParams params(int n_lo = 3, int n_hi = 7) {
    ProblemParams P;
    P.N = integer(n_lo, n_hi);
    P.a = uniform(-1.5, 0.5 * (P.N - 2) - 0.05);
    P.b = P.a + uniform(0.0, 0.95);
    const double w = 0.5 * (P.N - 2 - 2 * P.a);
    P.lambda = uniform(-2.0, 0.9 * w * w);
    return P;
  }

  std::vector<double> vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

/// |x - target| <= rel |target|, with no absolute slack.
inline bool within(double x, double target, double rel) { return std::fabs(x - target) <= rel * std::fabs(target); }

/// Dense Gaussian elimination with partial pivoting on a row-major n x n matrix.
inline std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r * n + c]) > std::fabs(A[piv * n + c])) piv = r;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r * n + c] / A[c * n + c];
      for (std::size_t k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
    x[i] = s / A[i * n + i];
  }
  return x;
}

}  // namespace ckn::testing
