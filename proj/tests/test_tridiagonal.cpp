#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ckn/tridiagonal.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ckn;
using ckn::testing::dense_solve;
using ckn::testing::Generator;

namespace {

SymTridiagonal laplacian(std::size_t n) {
  return SymTridiagonal(std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0));
}

SymTridiagonal random_matrix(Generator& gen, std::size_t n) {
  return SymTridiagonal(gen.vector(n, -3, 3), gen.vector(n - 1, -1, 1));
}

std::vector<double> dense(const SymTridiagonal& T) {
  const std::size_t n = T.size();
  std::vector<double> A(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    A[i * n + i] = T.diag()[i];
    if (i + 1 < n) A[i * n + i + 1] = A[(i + 1) * n + i] = T.off()[i];
  }
  return A;
}

}  // namespace

TEST_CASE("construction checks sizes") {
  CHECK_THROWS_AS(SymTridiagonal({1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("eigenvalues of the discrete Dirichlet Laplacian") {
  const std::size_t n = 50;
  const auto T = laplacian(n);
  const auto ev = T.lowest(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double exact = 2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1));
    CHECK(std::fabs(ev[k] - exact) <= 1e-10);
  }
  CHECK(T.eigenvalue(7) == doctest::Approx(ev[7]).epsilon(1e-12));
}

TEST_CASE("count_below is the eigenvalue counting function") {
  Generator gen(41);
  for (int it = 0; it < 20; ++it) {
    const std::size_t n = gen.integer(2, 40);
    const auto T = random_matrix(gen, n);
    const auto ev = T.lowest(n);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    const auto [lo, hi] = T.spectrum_bounds();
    CHECK(lo <= ev.front());
    CHECK(ev.back() <= hi);
    for (int s = 0; s < 10; ++s) {
      const double x = gen.uniform(lo, hi);
      const auto expected = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [x](double e) { return e < x - 1e-9; }));
      const auto upper = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [x](double e) { return e < x + 1e-9; }));
      const auto c = T.count_below(x);
      CHECK(c >= expected);
      CHECK(c <= upper);
    }
  }
}

TEST_CASE("eigenvalue sum equals the trace") {
  Generator gen(43);
  for (int it = 0; it < 20; ++it) {
    const std::size_t n = gen.integer(2, 30);
    const auto T = random_matrix(gen, n);
    const auto ev = T.lowest(n);
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += T.diag()[i];
    for (double e : ev) sum += e;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
  }
}

TEST_CASE("eigenvectors satisfy the eigen-relation") {
  Generator gen(47);
  for (int it = 0; it < 10; ++it) {
    const std::size_t n = gen.integer(5, 60);
    const auto T = random_matrix(gen, n);
    const double e = T.eigenvalue(0);
    const auto v = T.eigenvector(e);
    const auto Tv = T.apply(v);
    double norm = 0.0, res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      norm += v[i] * v[i];
      res = std::max(res, std::fabs(Tv[i] - e * v[i]));
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res <= 1e-8);
    CHECK(T.quadratic_form(v) == doctest::Approx(e).epsilon(1e-9));
  }
}

TEST_CASE("linear solves invert apply") {
  Generator gen(53);
  for (int it = 0; it < 20; ++it) {
    const std::size_t n = gen.integer(2, 80);
    const auto x = gen.vector(n);
    const auto T = random_matrix(gen, n);
    const auto y = T.solve(T.apply(x));
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-8));

    std::vector<double> d = gen.vector(n, 3, 5);
    const SymTridiagonal P(d, gen.vector(n - 1, -1, 1));
    const auto z = P.solve_positive_definite(P.apply(x));
    for (std::size_t i = 0; i < n; ++i) CHECK(z[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("singular tridiagonal solve throws unless regularized") {
  const SymTridiagonal T({1.0, 1.0}, {1.0});
  const std::vector<double> rhs{1.0, 2.0};
  CHECK_THROWS(T.solve(rhs));
  CHECK_NOTHROW(T.solve(rhs, true));
}

TEST_CASE("bordered solve agrees with dense elimination") {
  Generator gen(59);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = gen.integer(1, 40);
    const auto diag = gen.vector(n, -2, 2);
    const auto lower = gen.vector(n > 0 ? n - 1 : 0);
    const auto upper = gen.vector(n > 0 ? n - 1 : 0);
    const auto col = gen.vector(n);
    const auto row = gen.vector(n);
    const auto rhs = gen.vector(n);
    const double s = gen.uniform(-1, 1);

    const std::size_t m = n + 1;
    std::vector<double> A(m * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      A[i * m + i] = diag[i];
      if (i + 1 < n) {
        A[i * m + i + 1] = upper[i];
        A[(i + 1) * m + i] = lower[i];
      }
      A[i * m + n] = col[i];
      A[n * m + i] = row[i];
    }
    std::vector<double> b = rhs;
    b.push_back(s);
    const auto expected = dense_solve(A, b);
    const auto [x, y] = solve_bordered(diag, lower, upper, col, row, rhs, s);
    REQUIRE(x.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(expected[i]).epsilon(1e-8));
    CHECK(y == doctest::Approx(expected[n]).epsilon(1e-8));
  }
}

TEST_CASE("bordered solve with a singular block") {
  // T has kernel (1, 1, 1); the border restores invertibility
  const std::vector<double> diag{1, 2, 1}, off{-1, -1};
  const std::vector<double> col{1, 1, 1}, row{1, 1, 1}, rhs{1, 0, -1};
  const auto [x, y] = solve_bordered(diag, off, off, col, row, rhs, 0.0);
  const SymTridiagonal T(diag, off);
  const auto Tx = T.apply(x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(Tx[i] + y * col[i] == doctest::Approx(rhs[i]));
  CHECK(x[0] + x[1] + x[2] == doctest::Approx(0.0));
}

TEST_CASE("bordered solve detects a singular system") {
  const std::vector<double> diag{1, 2, 1}, off{-1, -1};
  const std::vector<double> zero{0, 0, 0}, rhs{1, 0, -1};
  CHECK_THROWS_AS(solve_bordered(diag, off, off, zero, zero, rhs, 0.0), std::domain_error);
}

TEST_CASE("dense oracle agrees on tridiagonal systems") {
  Generator gen(61);
  const auto T = random_matrix(gen, 12);
  const auto rhs = gen.vector(12);
  const auto x = dense_solve(dense(T), rhs);
  const auto y = T.solve(rhs);
  for (std::size_t i = 0; i < 12; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-9));
}
