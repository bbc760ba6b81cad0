#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ckn/closed_form.hpp"
#include "ckn/cylinder_grid.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ckn;
using ckn::testing::within;
using ckn::testing::Generator;

namespace {

constexpr double pi = std::numbers::pi;

RadialProfile random_profile(Generator& gen, const Grid& grid, double lo = -1, double hi = 1) {
  // zero near the ends so that the profile is a plausible H-function
  auto v = gen.vector(grid.size(), lo, hi);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= std::exp(-0.05 * grid.node(k) * grid.node(k));
  return RadialProfile(grid, v);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(40.0, 8000);
  CHECK(g.step() == doctest::Approx(80.0 / 8001).epsilon(1e-15));
  CHECK(g.node(0) == doctest::Approx(-40.0 + g.step()));
  CHECK(g.node(7999) == doctest::Approx(40.0 - g.step()));
  CHECK(g.nodes().size() == 8000);
  CHECK_THROWS_AS(Grid(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1.0, 2), std::invalid_argument);
}

TEST_CASE("refinement keeps the old nodes") {
  const Grid g(5.0, 99);
  const Grid f = g.refined();
  CHECK(f.size() == 199);
  CHECK(f.step() == doctest::Approx(0.5 * g.step()));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(f.node(2 * k + 1) == doctest::Approx(g.node(k)).epsilon(1e-14));
}

TEST_CASE("sampling") {
  const Grid g(10.0, 201);
  const auto zero = sample([](double) { return 0.0; }, g);
  CHECK(std::all_of(zero.values().begin(), zero.values().end(), [](double v) { return v == 0.0; }));

  const auto dc = derive(ProblemParams{5, 0.4, 0.6, -1});
  const auto u = sample([&](double t) { return phi1(t, dc); }, g);
  CHECK(std::all_of(u.values().begin(), u.values().end(), [](double v) { return v > 0.0; }));
  const auto peak = std::max_element(u.values().begin(), u.values().end()) - u.values().begin();
  CHECK(std::fabs(g.node(static_cast<std::size_t>(peak))) <= 0.5 * g.step() + 1e-12);

  CHECK_THROWS_AS(sample([](double t) { return 1.0 / t; }, Grid(1.0, 3)), std::domain_error);
  CHECK_THROWS_AS(sample([](double) { return std::numeric_limits<double>::quiet_NaN(); }, g), std::domain_error);
}

TEST_CASE("profile arithmetic refuses mixed grids") {
  auto u = RadialProfile::zero(Grid(1.0, 10));
  const auto v = RadialProfile::zero(Grid(1.0, 11));
  CHECK_THROWS_AS(u += v, std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile(Grid(1.0, 10), std::vector<double>(9)), std::invalid_argument);
}

TEST_CASE("H inner product: symmetry, bilinearity, positivity") {
  Generator gen(71);
  const Grid g(10.0, 400);
  const CylinderSpace space(g, 1.3, 2.0);
  const auto zero = RadialProfile::zero(g);
  for (int it = 0; it < 20; ++it) {
    const auto u = random_profile(gen, g);
    const auto v = random_profile(gen, g);
    const auto w = random_profile(gen, g);
    const double c = gen.uniform(-3, 3);
    CHECK(space.inner(u, v) == space.inner(v, u));
    CHECK(space.inner(u, zero) == 0.0);
    CHECK(space.inner(c * u + v, w) == doctest::Approx(c * space.inner(u, w) + space.inner(v, w)).epsilon(1e-10));
    CHECK(space.inner(u, u) > 0.0);
    CHECK(space.norm(u) == doctest::Approx(std::sqrt(space.inner(u, u))));
    CHECK(space.lp_norm(c * u, 3.0) == doctest::Approx(std::fabs(c) * space.lp_norm(u, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("critical-point identity ||phi1||^2 = int phi1^p") {
  const auto dc = derive(ProblemParams{4, 0, 0, 0});
  const double exact = 32 * pi * pi / 3;
  const Grid g(40.0, 8000);
  const CylinderSpace space(dc, g);
  const auto u = sample([&](double t) { return phi1(t, dc); }, g);
  CHECK(space.inner(u, u) == doctest::Approx(exact).epsilon(1e-4));
  CHECK(std::pow(space.lp_norm(u, dc.p), dc.p) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("inner product converges at second order") {
  const auto dc = derive(ProblemParams{4, 0, 0, 0});
  const double exact = 32 * pi * pi / 3;
  std::size_t n = 999;
  double prev = 0.0;
  for (int level = 0; level < 4; ++level) {
    const Grid g(30.0, n);
    const CylinderSpace space(dc, g);
    const auto u = sample([&](double t) { return phi1(t, dc); }, g);
    const double err = std::fabs(space.inner(u, u) - exact);
    if (level > 0) CHECK(within(prev / err, 4.0, 0.05));
    prev = err;
    n = 2 * n + 1;
  }
}

TEST_CASE("Lp norm is invariant under shifts") {
  const auto dc = derive(ProblemParams{5, 0.4, 0.6, -1});
  const Grid g(40.0, 8000);
  const CylinderSpace space(dc, g);
  const double ref = space.lp_norm(sample([&](double t) { return phi1(t, dc); }, g), dc.p);
  for (double s : {-20.0, -3.3, 7.0, 20.0}) {
    const auto u = sample([&](double t) { return phi1(t - s, dc); }, g);
    CHECK(space.lp_norm(u, dc.p) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("stiffness apply and solve are inverse") {
  Generator gen(73);
  const Grid g(20.0, 3000);
  const StiffnessOperator S(g, 0.7);
  CHECK_THROWS_AS(StiffnessOperator(g, 0.0), std::invalid_argument);
  const auto zero = S.apply(RadialProfile::zero(g));
  CHECK(std::all_of(zero.values().begin(), zero.values().end(), [](double v) { return v == 0.0; }));
  for (int it = 0; it < 5; ++it) {
    const auto u = RadialProfile(g, gen.vector(g.size()));
    const auto back = S.solve(S.apply(u));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::fabs(back[k] - u[k]) <= 1e-10);
  }
}

TEST_CASE("stiffness reproduces the discrete Dirichlet eigen-relation") {
  const Grid g(4.0, 199);
  const double lt = 0.8;
  const StiffnessOperator S(g, lt);
  const double L = g.half_width(), h = g.step();
  for (int m = 1; m <= 3; ++m) {
    const auto u = sample([&](double t) { return std::sin(m * pi * (t + L) / (2 * L)); }, g);
    const double ev = (2 / (h * h)) * (1 - std::cos(m * pi / (g.size() + 1))) + lt;
    const auto Su = S.apply(u);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(Su[k] == doctest::Approx(ev * u[k]).epsilon(1e-9));
    CHECK(ev == doctest::Approx(std::pow(m * pi / (2 * L), 2) + lt).epsilon(1e-3));
  }
}

TEST_CASE("dual norm of S u is the norm of u") {
  Generator gen(79);
  const Grid g(10.0, 500);
  const CylinderSpace space(g, 2.0, 3.0);
  for (int it = 0; it < 5; ++it) {
    const auto u = random_profile(gen, g);
    CHECK(space.dual_norm(space.apply_stiffness(u)) == doctest::Approx(space.norm(u)).epsilon(1e-10));
  }
}

TEST_CASE("discrete CKN inequality on random nonnegative profiles") {
  Generator gen(83);
  for (const auto& P : {ProblemParams{4, 0, 0, 0}, ProblemParams{5, 0.4, 0.6, -1}}) {
    const auto dc = derive(P);
    const Grid g(30.0, 3000);
    const CylinderSpace space(dc, g);
    const auto z = sample([&](double t) { return phi1(t, dc); }, g);
    const double best = space.inner(z, z) / std::pow(space.lp_norm(z, dc.p), 2);
    for (int it = 0; it < 20; ++it) {
      // smooth nonnegative bumps of random centre, width and height
      const double c = gen.uniform(-5, 5), s = gen.uniform(0.3, 4), A = gen.uniform(0.1, 5);
      const double c2 = gen.uniform(-5, 5), A2 = gen.uniform(0, 2);
      const auto u = sample([&](double t) { return A * std::exp(-std::pow((t - c) / s, 2)) + A2 / std::cosh(t - c2); }, g);
      CHECK(space.inner(u, u) / std::pow(space.lp_norm(u, dc.p), 2) >= best * (1 - 1e-6));
    }
  }
}

TEST_CASE("profile CSV round trip") {
  Generator gen(89);
  const Grid g(7.5, 123);
  const RadialProfile u(g, gen.vector(g.size(), -1e3, 1e3));
  std::stringstream ss;
  write_profile_csv(ss, u, {"mu=1"});
  CHECK(ss.str().rfind("# L=7.5 n=123 convention=t=ln(r)\n", 0) == 0);
  const auto back = read_profile_csv(ss);
  CHECK(back.grid() == g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(back[k] == u[k]);

  std::stringstream missing("t,value\n0,1\n");
  CHECK_THROWS(read_profile_csv(missing));
}
