#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ckn/cli.hpp"
#include "ckn/closed_form.hpp"
#include "ckn/csv.hpp"
#include "ckn/parallel.hpp"
#include "ckn/perturbation.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/reduction.hpp"
#include "ckn/spectral.hpp"

namespace ckn::cli {

namespace {

std::string flag(const std::string& name, double v) { return " --" + name + " " + format_shortest(v); }
std::string flag(const std::string& name, std::size_t v) { return " --" + name + " " + std::to_string(v); }

std::string list(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_shortest(values[i]);
  return s;
}

std::string list(const std::vector<int>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

double default_a_max(int N) { return 0.5 * (N - 2) - 0.1; }

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 1) throw std::invalid_argument("range needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return v;
}

std::vector<double> a_range(const RunConfig& c) {
  const double lo = c.a_min.value_or(-2.0);
  const double hi = c.a_max.value_or(default_a_max(c.params.N));
  if (!(hi >= lo)) throw std::invalid_argument("--a-max must not be below --a-min");
  return linspace(lo, hi, c.a_points);
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string canonical_command(const RunConfig& c) {
  std::string s = "ckn " + c.subcommand;
  const auto params = [&] {
    s += " --N " + std::to_string(c.params.N) + flag("a", c.params.a) + flag("b", c.params.b) +
         flag("lambda", c.params.lambda);
  };
  const auto grid = [&] { s += flag("L", c.L) + flag("n", c.n); };
  const auto mu = [&] { s += flag("mu-min", c.mu_min) + flag("mu-max", c.mu_max) + flag("mu-points", c.mu_points); };
  const auto a_grid = [&] {
    s += flag("a-min", c.a_min.value_or(-2.0)) + flag("a-max", c.a_max.value_or(default_a_max(c.params.N))) +
         flag("a-points", c.a_points);
  };
  if (c.subcommand == "curves") {
    s += " --N " + std::to_string(c.params.N) + flag("lambda", c.params.lambda);
    a_grid();
    s += " --j " + list(c.j);
  } else if (c.subcommand == "regions") {
    s += " --N " + std::to_string(c.params.N);
    a_grid();
    s += flag("b-points", c.b_points);
    grid();
  } else if (c.subcommand == "spectrum" || c.subcommand == "groundstate") {
    params();
    grid();
  } else if (c.subcommand == "gamma") {
    params();
    s += " --k " + c.k;
    mu();
  } else if (c.subcommand == "reduce" || c.subcommand == "solve") {
    params();
    grid();
    s += " --k " + c.k + " --eps " + list(c.eps);
    mu();
  } else if (c.subcommand == "selfcheck") {
    grid();
  }
  return s;
}

void write_header(std::ostream& out, const RunConfig& c) {
  out << "# ckn " << CKN_VERSION << '\n' << "# command: " << canonical_command(c) << '\n';
}

int cmd_curves(const RunConfig& c, std::ostream& out, std::ostream&) {
  const auto as = a_range(c);
  for (int j : c.j) {
    if (j < 1) throw std::invalid_argument("--j: mode indices must be >= 1");
  }
  write_header(out, c);
  out << "a,j,h_derived,h_printed,b_lower,b_upper\n";
  for (double a : as) {
    for (int j : c.j) {
      const DegeneracyCurve h = degeneracy_curve(j, a, c.params.lambda, c.params.N);
      out << csv_row({format_real(a), std::to_string(j), format_real(h.derived), format_real(h.printed),
                      format_real(a), format_real(a + 1.0)})
          << '\n';
    }
  }
  return kSuccess;
}

int cmd_regions(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.b_points < 1) throw std::invalid_argument("--b-points must be >= 1");
  const auto as = a_range(c);
  struct Cell {
    double a, b;
    SymmetryBreakingReport report;
  };
  std::vector<Cell> cells;
  for (double a : as) {
    validate(ProblemParams{c.params.N, a, a, 0.0});
    for (std::size_t k = 0; k < c.b_points; ++k) {
      const double b = a + static_cast<double>(k + 1) / static_cast<double>(c.b_points + 1);
      cells.push_back({a, b, {}});
    }
  }
  const Grid grid = c.grid();
  parallel_for(cells.size(), c.threads, [&](std::size_t i) {
    cells[i].report = symmetry_breaking(cells[i].a, cells[i].b, c.params.N, grid);
  });

  write_header(out, c);
  out << "a,b,lambda,N,verdict,margin_mode1,h1_derived,curve_test,distance,agree\n";
  std::size_t checked = 0, agreed = 0;
  for (const auto& cell : cells) {
    const auto& r = cell.report;
    const double distance = std::fabs(cell.b - r.curve);
    const bool agree = r.breaks == r.curve_predicts;
    if (distance > 1e-3) {
      ++checked;
      agreed += agree ? 1 : 0;
    }
    out << csv_row({format_real(cell.a), format_real(cell.b), "0", std::to_string(c.params.N),
                    r.breaks ? "breaks" : "radial", format_real(r.mode1_bottom), format_real(r.curve),
                    r.curve_predicts ? "breaks" : "radial", format_real(distance), yes_no(agree)})
        << '\n';
  }
  out << "# agreement " << agreed << "/" << checked << " outside the 1e-3 band around h_1\n";
  if (agreed != checked) {
    err << "regions: eigenvalue test and curve test disagree at " << checked - agreed << " points\n";
    return kCertificateFailure;
  }
  return kSuccess;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ValidatedParams vp = validate(c.params);
  const DerivedConstants dc = derive(vp);
  const Grid grid = c.grid();
  const SpectrumReport pt = pt_spectrum_check(dc, grid);
  const NondegeneracyReport nd = nondegenerate(vp, grid);

  write_header(out, c);
  out << "j,nu_closed_form,nu_numeric,abs_error,rel_error\n";
  for (std::size_t j = 0; j < pt.numeric.size(); ++j) {
    const double nu = pt.closed_form[j];
    const double e = std::fabs(pt.numeric[j] - nu);
    out << csv_row({std::to_string(j), format_real(nu), format_real(pt.numeric[j]), format_real(e),
                    format_real(e / std::max(1.0, std::fabs(nu)))})
        << '\n';
  }
  out << "# max_rel_error=" << format_real(pt.max_error) << '\n'
      << "# simple=" << yes_no(pt.simple) << '\n'
      << "# negative_count=" << pt.negative_count << " bound_state_count=" << pt.expected_count << '\n'
      << "# nondegenerate=" << yes_no(nd.nondegenerate) << " radial_kernel_dim=" << nd.radial_kernel_dim
      << " i_max=" << nd.i_max << " tolerance=" << format_real(nd.tolerance)
      << " refined=" << yes_no(nd.refined) << '\n';
  for (const auto& m : nd.margins) {
    out << "# mode " << m.mode << ": smallest_abs=" << format_real(m.smallest_abs)
        << " bottom=" << format_real(m.bottom) << " negative_count=" << m.negative_count
        << " kernel=" << yes_no(m.kernel) << '\n';
  }
  for (const auto& w : dc.warnings) err << "warning: " << w << '\n';
  if (pt.max_error > 1e-6 || !pt.simple || pt.negative_count != pt.expected_count) {
    err << "spectrum: closed-form bound states not reproduced\n";
    return kCertificateFailure;
  }
  return kSuccess;
}

int cmd_groundstate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DerivedConstants dc = derive(validate(c.params));
  const Grid grid = c.grid();
  const RadialProfile phi = sample([&](double t) { return phi1(t, dc); }, grid);

  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(k);
    const double v = phi[k];
    if (!(v > 0.0)) continue;
    const double scale = std::fabs(phi1_dtt(t, dc)) + dc.lambda_tilde * v + std::pow(v, dc.p - 1.0);
    worst = std::max(worst, std::fabs(ode_residual(t, dc)) / scale);
  }
  const double quad = norm_pb_p(dc);
  const double beta_form = norm_pb_p_beta(dc);
  const double norm_gap = std::fabs(quad - beta_form) / beta_form;

  write_header(out, c);
  std::vector<std::string> extra{
      "p=" + format_real(dc.p),
      "q=" + format_real(dc.q),
      "lambda_tilde=" + format_real(dc.lambda_tilde),
      "beta=" + format_real(dc.beta),
      "gamma=" + format_real(dc.gamma),
      "amplitude=" + format_real(dc.amplitude),
      "norm_pb_p=" + format_real(quad),
      "norm_pb_p_beta=" + format_real(beta_form),
      "energy_f0=" + format_real(energy_f0(dc)),
      "max_rel_ode_residual=" + format_real(worst),
  };
  write_profile_csv(out, phi, extra);
  for (const auto& w : dc.warnings) err << "warning: " << w << '\n';
  if (worst > 1e-10 || norm_gap > 1e-8) {
    err << "groundstate: residual " << format_real(worst) << ", norm mismatch " << format_real(norm_gap) << '\n';
    return kCertificateFailure;
  }
  return kSuccess;
}

int cmd_gamma(const RunConfig& c, std::ostream& out, std::ostream&) {
  const DerivedConstants dc = derive(validate(c.params));
  const Perturbation k = parse_perturbation(c.k, c.params.N);
  const auto mus = log_uniform(c.mu_min, c.mu_max, c.mu_points);
  std::vector<double> values(mus.size());
  parallel_for(mus.size(), c.threads, [&](std::size_t i) { values[i] = Gamma(mus[i], k, dc); });

  const ConditionReport cond = check_conditions(k);
  write_header(out, c);
  out << "# k0=" << format_real(k.k0()) << " kinf=" << format_real(k.kinf());
  if (k.laplacian0()) out << " laplacian0=" << format_real(*k.laplacian0());
  out << '\n' << "# gamma0=" << format_real(Gamma0(k, dc)) << '\n';
  if (k.laplacian0()) {
    try {
      out << "# gamma2_0=" << format_real(Gamma2_0(k, dc)) << '\n';
    } catch (const QuadratureError& e) {
      out << "# gamma2_0=unavailable (" << e.what() << ")\n";
    }
  }
  out << "# prediction: " << cond.prediction << '\n';
  out << "mu,gamma\n";
  for (std::size_t i = 0; i < mus.size(); ++i) out << format_real(mus[i]) << ',' << format_real(values[i]) << '\n';
  return kSuccess;
}

namespace {

Reduction make_reduction(const RunConfig& c) {
  ReductionOptions options;
  options.threads = c.threads;
  return Reduction(validate(c.params), parse_perturbation(c.k, c.params.N), c.grid(), options);
}

}  // namespace

int cmd_reduce(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Reduction red = make_reduction(c);
  const auto mus = log_uniform(c.mu_min, c.mu_max, c.mu_points);
  write_header(out, c);
  bool failed = false;
  for (double eps : c.eps) {
    const auto rows = red.phi_profile(eps, mus);
    out << "# eps=" << format_real(eps) << '\n' << "mu,phi,gamma,w_norm,alpha,newton_iters\n";
    for (const auto& r : rows) {
      if (!r.ok) {
        failed = true;
        err << "reduce: eps=" << format_real(eps) << " mu=" << format_real(r.mu) << ": " << r.error << '\n';
        out << "# failed: " << r.error << '\n';
        out << csv_row({format_real(r.mu), "nan", "nan", "nan", "nan", "-1"}) << '\n';
        continue;
      }
      out << csv_row({format_real(r.mu), format_real(r.phi), format_real(r.gamma), format_real(r.w_norm),
                      format_real(r.alpha), std::to_string(r.newton_iters)})
          << '\n';
    }
  }
  return failed ? kSolverError : kSuccess;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Reduction red = make_reduction(c);
  const auto mus = log_uniform(c.mu_min, c.mu_max, c.mu_points);
  const ConditionReport cond = check_conditions(red.perturbation());
  write_header(out, c);
  out << "# prediction: " << cond.prediction << '\n';
  out << "eps,mu_star,phi,full_residual,alpha,kind,certified\n";
  bool all_certified = true;
  bool failed = false;
  for (double eps : c.eps) {
    const CriticalSearch search = red.find_critical(eps, mus);
    for (const auto& row : search.sweep) {
      if (!row.ok) {
        failed = true;
        err << "solve: eps=" << format_real(eps) << " mu=" << format_real(row.mu) << ": " << row.error << '\n';
      }
    }
    if (search.points.empty()) out << "# eps=" << format_real(eps) << ": no interior extremum\n";
    for (const auto& p : search.points) {
      all_certified = all_certified && p.certified;
      out << csv_row({format_real(eps), format_real(p.mu_star), format_real(p.phi_value),
                      format_real(p.full_residual), format_real(p.alpha), p.maximum ? "max" : "min",
                      yes_no(p.certified)})
          << '\n';
    }
  }
  if (failed) return kSolverError;
  if (!all_certified) {
    err << "solve: a critical point failed its certificate\n";
    return kCertificateFailure;
  }
  return kSuccess;
}

namespace {

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.subcommand == "curves") return cmd_curves(c, out, err);
  if (c.subcommand == "regions") return cmd_regions(c, out, err);
  if (c.subcommand == "spectrum") return cmd_spectrum(c, out, err);
  if (c.subcommand == "groundstate") return cmd_groundstate(c, out, err);
  if (c.subcommand == "gamma") return cmd_gamma(c, out, err);
  if (c.subcommand == "reduce") return cmd_reduce(c, out, err);
  if (c.subcommand == "solve") return cmd_solve(c, out, err);
  if (c.subcommand == "selfcheck") return cmd_selfcheck(c, out, err);
  throw std::invalid_argument("unknown subcommand '" + c.subcommand + "'");
}

void add_params(CLI::App* sub, RunConfig& c) {
  sub->add_option("--N", c.params.N, "dimension N >= 3")->capture_default_str();
  sub->add_option("--a", c.params.a, "weight exponent a")->capture_default_str();
  sub->add_option("--b", c.params.b, "weight exponent b, a <= b < a+1")->capture_default_str();
  sub->add_option("--lambda", c.params.lambda, "Hardy shift lambda")->capture_default_str();
}

void add_grid(CLI::App* sub, RunConfig& c) {
  sub->add_option("--L", c.L, "half-width of the t = ln r interval")->capture_default_str();
  sub->add_option("--n", c.n, "interior grid points")->capture_default_str();
}

void add_mu(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mu-min", c.mu_min, "smallest mu")->capture_default_str();
  sub->add_option("--mu-max", c.mu_max, "largest mu")->capture_default_str();
  sub->add_option("--mu-points", c.mu_points, "log-uniform mu points")->capture_default_str();
}

void add_a_range(CLI::App* sub, RunConfig& c) {
  sub->add_option("--a-min", c.a_min, "smallest a (default -2)");
  sub->add_option("--a-max", c.a_max, "largest a (default (N-2)/2 - 0.1)");
  sub->add_option("--a-points", c.a_points, "points in a")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Extremals of Caffarelli-Kohn-Nirenberg inequalities: spectra, curves and reduction"};
  app.set_version_flag("--version", std::string(CKN_VERSION));
  app.require_subcommand(1);

  auto* curves = app.add_subcommand("curves", "degeneracy curves b = h_j(a, lambda)");
  curves->add_option("--N", c.params.N, "dimension N >= 3")->capture_default_str();
  curves->add_option("--lambda", c.params.lambda, "Hardy shift lambda")->capture_default_str();
  add_a_range(curves, c);
  curves->add_option("--j", c.j, "mode indices")->delimiter(',')->capture_default_str();

  auto* regions = app.add_subcommand("regions", "symmetry-breaking classification on an (a, b) grid, lambda = 0");
  regions->add_option("--N", c.params.N, "dimension N >= 3")->capture_default_str();
  add_a_range(regions, c);
  regions->add_option("--b-points", c.b_points, "points in b per a, inside (a, a+1)")->capture_default_str();
  add_grid(regions, c);

  auto* spectrum = app.add_subcommand("spectrum", "bound states and non-degeneracy of the linearization");
  add_params(spectrum, c);
  add_grid(spectrum, c);

  auto* ground = app.add_subcommand("groundstate", "ground-state profile, norms and ODE residual");
  add_params(ground, c);
  add_grid(ground, c);

  auto* gamma = app.add_subcommand("gamma", "Gamma(mu) = G(z_mu) for a perturbation k");
  add_params(gamma, c);
  gamma->add_option("--k", c.k, "gaussian-bump:c,t0,s | rational:alpha,beta | tabulated:<path>")
      ->capture_default_str();
  add_mu(gamma, c);

  auto* reduce = app.add_subcommand("reduce", "reduced functional Phi_eps(mu) on a mu grid");
  auto* solve = app.add_subcommand("solve", "critical points of Phi_eps, certified");
  for (auto* sub : {reduce, solve}) {
    add_params(sub, c);
    add_grid(sub, c);
    sub->add_option("--k", c.k, "gaussian-bump:c,t0,s | rational:alpha,beta | tabulated:<path>")
        ->capture_default_str();
    sub->add_option("--eps", c.eps, "perturbation strengths")->delimiter(',')->capture_default_str();
    add_mu(sub, c);
  }

  auto* selfcheck = app.add_subcommand("selfcheck", "run the invariant suite");
  add_grid(selfcheck, c);

  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kDomainError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  std::ofstream file;
  std::ostream* sink = &out;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) {
      err << "cannot open --out " << c.out << '\n';
      return kDomainError;
    }
    sink = &file;
  }

  try {
    return dispatch(c, *sink, err);
  } catch (const DegenerateError& e) {
    err << c.subcommand << ": " << e.what() << '\n';
    return kDomainError;
  } catch (const SolverError& e) {
    err << c.subcommand << ": " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    err << c.subcommand << ": " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace ckn::cli
