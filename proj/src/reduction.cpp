#include "ckn/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "ckn/csv.hpp"
#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"

namespace ckn {

double G_functional(const RadialProfile& u, const Perturbation& k, const DerivedConstants& dc) {
  const Grid& g = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) sum += k.at_log_radius(g.node(i)) * std::pow(u[i], dc.p);
  }
  return dc.omega * g.step() * sum / dc.p;
}

double Gamma(double mu, const Perturbation& k, const DerivedConstants& dc, double h) {
  if (!(mu > 0.0)) throw std::invalid_argument("Gamma: mu must be positive");
  const double shift = std::log(mu);
  const double m = dc.p * dc.profile_exponent;
  const double width = truncation_width(dc.gamma * m, m * std::log(2.0));
  const auto integrand = [&](double t) {
    return k.at_log_radius(t) * std::pow(phi1(t - shift, dc), dc.p);
  };
  return dc.omega * trapezoid(integrand, shift - width, shift + width, h) / dc.p;
}

double Gamma0(const Perturbation& k, const DerivedConstants& dc) {
  return k.k0() * norm_pb_p(dc) / dc.p;
}

double Gamma2_0(const Perturbation& k, const DerivedConstants& dc) {
  if (!k.laplacian0()) {
    throw std::invalid_argument("Gamma2_0: perturbation '" + k.spec() + "' has no laplacian0");
  }
  return *k.laplacian0() / (dc.params.N * dc.p) * second_moment(dc);
}

double Gamma2_fd(const Perturbation& k, const DerivedConstants& dc, double s0, double delta) {
  const double gm = Gamma(std::exp(s0 - delta), k, dc);
  const double g0 = Gamma(std::exp(s0), k, dc);
  const double gp = Gamma(std::exp(s0 + delta), k, dc);
  const double d1 = (gp - gm) / (2.0 * delta);
  const double d2 = (gp - 2.0 * g0 + gm) / (delta * delta);
  return (d2 - d1) * std::exp(-2.0 * s0);
}

RadialProfile tangent(double mu, const DerivedConstants& dc, const Grid& grid) {
  if (!(mu > 0.0)) throw std::invalid_argument("tangent: mu must be positive");
  const double shift = std::log(mu);
  RadialProfile xi = sample([&](double t) { return -phi1_dt(t - shift, dc); }, grid);
  const double norm = CylinderSpace(dc, grid).norm(xi);
  if (!(norm > 0.0)) throw std::domain_error("tangent: profile is not resolved on the grid");
  xi *= 1.0 / norm;
  return xi;
}

void write_result(std::ostream& out, const ReductionResult& r) {
  out << "# mu=" << format_real(r.mu) << '\n'
      << "# eps=" << format_real(r.eps) << '\n'
      << "# alpha=" << format_real(r.alpha) << '\n'
      << "# w_norm=" << format_real(r.w_norm) << '\n'
      << "# grad_residual=" << format_real(r.grad_residual) << '\n'
      << "# full_residual=" << format_real(r.full_residual) << '\n'
      << "# constraint=" << format_real(r.constraint) << '\n'
      << "# phi_value=" << format_real(r.phi_value) << '\n'
      << "# base_energy=" << format_real(r.base_energy) << '\n'
      << "# base_g=" << format_real(r.base_g) << '\n'
      << "# newton_iters=" << r.newton_iters << '\n';
  write_profile_csv(out, r.w);
}

std::vector<double> log_uniform(double mu_min, double mu_max, std::size_t points) {
  if (!(mu_min > 0.0) || !(mu_max > mu_min) || points < 2) {
    throw std::invalid_argument("log_uniform: need 0 < mu_min < mu_max and at least 2 points");
  }
  const double lo = std::log(mu_min);
  const double hi = std::log(mu_max);
  std::vector<double> mu(points);
  for (std::size_t i = 0; i < points; ++i) {
    mu[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  mu.front() = mu_min;
  mu.back() = mu_max;
  return mu;
}

std::vector<double> default_mu_grid() { return log_uniform(std::exp(-10.0), std::exp(10.0), 81); }

namespace {

std::string describe_degeneracy(const NondegeneracyReport& r) {
  std::ostringstream os;
  os << "critical manifold is degenerate (radial kernel dimension " << r.radial_kernel_dim;
  for (const auto& m : r.margins) {
    if (m.kernel) os << ", kernel in mode " << m.mode;
  }
  os << ")";
  return os.str();
}

}  // namespace

Reduction::Reduction(const ValidatedParams& params, Perturbation k, Grid grid, ReductionOptions options)
    : dc_(derive(params)),
      k_(std::move(k)),
      space_(dc_, grid),
      options_(options),
      report_(nondegenerate(params, grid)) {
  if (!report_.nondegenerate) throw DegenerateError(describe_degeneracy(report_));
  k_nodes_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) k_nodes_[i] = k_.at_log_radius(grid.node(i));
}

RadialProfile Reduction::tangent(double mu) const { return ckn::tangent(mu, dc_, grid()); }

std::vector<double> Reduction::load(const std::vector<double>& u, double eps) const {
  std::vector<double> f(u.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) f[i] = (1.0 + eps * k_nodes_[i]) * std::pow(u[i], dc_.p - 1.0);
  }
  return f;
}

double Reduction::energy(const RadialProfile& u, double eps) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) sum += (1.0 + eps * k_nodes_[i]) * std::pow(u[i], dc_.p);
  }
  return 0.5 * space_.inner(u, u) - space_.omega() * grid().step() * sum / dc_.p;
}

Reduction::Solve Reduction::newton(const std::vector<double>& start, double alpha0,
                                   const std::vector<double>& anchor, const std::vector<double>& xi,
                                   double eps) const {
  const Grid& g = grid();
  const std::size_t n = g.size();
  const SymTridiagonal& S = space_.stiffness().matrix();
  const std::vector<double> s_xi = S.apply(xi);
  const double weight = space_.omega() * g.step();

  Solve state;
  state.u = start;
  state.alpha = alpha0;

  std::vector<double> jac(n), rhs(n), minus_s_xi(n);
  for (std::size_t i = 0; i < n; ++i) minus_s_xi[i] = -s_xi[i];

  for (int it = 0;; ++it) {
    const std::vector<double> f = load(state.u, eps);
    const std::vector<double> su = S.apply(state.u);
    RadialProfile r1 = RadialProfile::zero(g);
    auto& rv = r1.mutable_values();
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rv[i] = su[i] - f[i] - state.alpha * s_xi[i];
      c += s_xi[i] * (state.u[i] - anchor[i]);
    }
    state.grad_residual = space_.dual_norm(r1);
    state.constraint = weight * c;
    state.iterations = it;
    if (!std::isfinite(state.grad_residual) || !std::isfinite(state.alpha)) {
      throw SolverError("Newton iteration produced non-finite values", state.grad_residual, it);
    }
    if (state.grad_residual <= options_.tol && std::fabs(state.constraint) <= options_.tol) return state;
    if (it >= options_.max_iterations) {
      std::ostringstream os;
      os << "Newton did not converge in " << it << " iterations (residual "
         << format_real(state.grad_residual) << ")";
      throw SolverError(os.str(), state.grad_residual, it);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double up = state.u[i] > 0.0 ? std::pow(state.u[i], dc_.p - 2.0) : 0.0;
      jac[i] = S.diag()[i] - (dc_.p - 1.0) * (1.0 + eps * k_nodes_[i]) * up;
      rhs[i] = -rv[i];
    }
    std::pair<std::vector<double>, double> step;
    try {
      step = solve_bordered(jac, S.off(), S.off(), minus_s_xi, s_xi, rhs, -c);
    } catch (const std::domain_error&) {
      throw SolverError("Newton system is singular", state.grad_residual, it);
    }
    for (std::size_t i = 0; i < n; ++i) state.u[i] += step.first[i];
    state.alpha += step.second;
  }
}

ReductionResult Reduction::solve_w(double mu, double eps) const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("solve_w: mu must be positive");
  if (!(std::fabs(eps) <= options_.eps_ceiling)) {
    throw std::invalid_argument("solve_w: |eps| = " + format_real(std::fabs(eps)) +
                                " exceeds the ceiling " + format_real(options_.eps_ceiling));
  }
  const Grid& g = grid();
  const double shift = std::log(mu);
  const RadialProfile anchor = sample([&](double t) { return phi1(t - shift, dc_); }, g);
  const RadialProfile xi = tangent(mu);
  const std::vector<double> anchor_v(anchor.values().begin(), anchor.values().end());
  const std::vector<double> xi_v(xi.values().begin(), xi.values().end());

  const Solve base = newton(anchor_v, 0.0, anchor_v, xi_v, 0.0);
  const Solve full = eps == 0.0 ? base : newton(base.u, base.alpha, anchor_v, xi_v, eps);

  const RadialProfile z(g, base.u);
  const RadialProfile u(g, full.u);
  ReductionResult result(u - z);
  result.mu = mu;
  result.eps = eps;
  result.alpha = full.alpha;
  result.w_norm = space_.norm(result.w);
  result.grad_residual = full.grad_residual;
  result.constraint = full.constraint;
  result.newton_iters = full.iterations + (eps == 0.0 ? 0 : base.iterations);
  result.phi_value = energy(u, eps);
  result.base_energy = energy(z, 0.0);
  result.base_g = G_functional(z, k_, dc_);

  const std::vector<double> su = space_.stiffness().matrix().apply(full.u);
  const std::vector<double> f = load(full.u, eps);
  RadialProfile gradient = RadialProfile::zero(g);
  for (std::size_t i = 0; i < g.size(); ++i) gradient.mutable_values()[i] = su[i] - f[i];
  result.full_residual = space_.dual_norm(gradient);
  return result;
}

std::vector<ProfileRow> Reduction::phi_profile(double eps, const std::vector<double>& mu_grid) const {
  std::vector<ProfileRow> rows(mu_grid.size());
  parallel_for(mu_grid.size(), options_.threads, [&](std::size_t i) {
    ProfileRow& row = rows[i];
    row.mu = mu_grid[i];
    try {
      const ReductionResult r = solve_w(row.mu, eps);
      row.phi = r.phi_value;
      row.w_norm = r.w_norm;
      row.alpha = r.alpha;
      row.newton_iters = r.newton_iters;
      row.gamma = Gamma(row.mu, k_, dc_);
      row.ok = true;
    } catch (const SolverError& e) {
      row.error = e.what();
    }
  });
  return rows;
}

namespace {

struct Sample {
  double s;
  double value;
};

}  // namespace

CriticalSearch Reduction::find_critical(double eps, const std::vector<double>& mu_grid,
                                        double refine_tol) const {
  CriticalSearch search;
  search.sweep = phi_profile(eps, mu_grid);

  std::vector<Sample> pts;
  for (const auto& row : search.sweep) {
    if (row.ok) pts.push_back({std::log(row.mu), row.phi});
  }
  const double flat = 1e2 * options_.tol;

  // Brackets [s_lo, s_hi] around each change of monotonicity, ignoring steps
  // below the flatness threshold.
  struct Bracket {
    double lo, hi;
    bool maximum;
  };
  std::vector<Bracket> brackets;
  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const double d = pts[j + 1].value - pts[j].value;
    const int sign = std::fabs(d) <= flat ? 0 : (d > 0 ? 1 : -1);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      brackets.push_back({pts[last_index].s, pts[j + 1].s, last_sign > 0});
    }
    last_sign = sign;
    last_index = j;
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (const auto& b : brackets) {
    const double sign = b.maximum ? 1.0 : -1.0;
    const auto objective = [&](double s) { return sign * phi(std::exp(s), eps); };
    double lo = b.lo, hi = b.hi;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > refine_tol) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = objective(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = objective(x2);
      }
    }
    double s_best = 0.5 * (lo + hi);

    // Secant steps on the multiplier, which vanishes exactly where Phi is stationary.
    const auto alpha_at = [&](double s) { return solve_w(std::exp(s), eps).alpha; };
    double s0 = s_best;
    double a0 = alpha_at(s0);
    double s1 = std::min(b.hi, s0 + 10.0 * refine_tol);
    double a1 = alpha_at(s1);
    double best_abs = std::fabs(a0);
    if (std::fabs(a1) < best_abs) {
      best_abs = std::fabs(a1);
      s_best = s1;
    }
    for (int it = 0; it < 30 && a1 != a0 && best_abs > 1e-13; ++it) {
      const double s2 = std::clamp(s1 - a1 * (s1 - s0) / (a1 - a0), b.lo, b.hi);
      if (s2 == s1) break;
      s0 = s1;
      a0 = a1;
      s1 = s2;
      a1 = alpha_at(s1);
      if (std::fabs(a1) < best_abs) {
        best_abs = std::fabs(a1);
        s_best = s1;
      }
    }

    const ReductionResult r = solve_w(std::exp(s_best), eps);
    CriticalPoint cp;
    cp.mu_star = r.mu;
    cp.phi_value = r.phi_value;
    cp.full_residual = r.full_residual;
    cp.alpha = r.alpha;
    cp.maximum = b.maximum;
    cp.certified = std::fabs(r.alpha) <= 1e-8 && r.full_residual <= 1e-6;
    search.points.push_back(cp);
  }
  return search;
}

}  // namespace ckn
