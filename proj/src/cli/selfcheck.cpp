#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "ckn/cli.hpp"
#include "ckn/closed_form.hpp"
#include "ckn/csv.hpp"
#include "ckn/reduction.hpp"
#include "ckn/spectral.hpp"

namespace ckn::cli {

namespace {

struct Check {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

std::vector<Check> suite(const Grid& grid) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<Check> checks;

  checks.push_back({"bound states match closed form", [grid] {
    double worst = 0.0;
    for (const auto& P : {ProblemParams{4, 0, 0, 0}, ProblemParams{5, 0.4, 0.6, -1}, ProblemParams{3, -0.5, 0, 0.1}}) {
      const auto r = pt_spectrum_check(derive(P), grid);
      if (r.negative_count != r.expected_count || !r.simple) return std::pair{false, std::string("count/simplicity")};
      worst = std::max(worst, r.max_error);
    }
    return std::pair{worst <= 1e-6, "max rel error " + format_real(worst)};
  }});

  checks.push_back({"ground state solves the profile ODE", [] {
    double worst = 0.0;
    for (const auto& P : {ProblemParams{4, 0, 0, 0}, ProblemParams{5, 0.4, 0.6, -1}, ProblemParams{6, -1, -0.5, 2}}) {
      const auto dc = derive(P);
      for (double t = -20.0; t <= 20.0; t += 0.37) {
        const double v = phi1(t, dc);
        const double scale = std::fabs(phi1_dtt(t, dc)) + dc.lambda_tilde * v + std::pow(v, dc.p - 1.0);
        worst = std::max(worst, std::fabs(ode_residual(t, dc)) / scale);
      }
    }
    return std::pair{worst <= 1e-10, "max rel residual " + format_real(worst)};
  }});

  checks.push_back({"energy at N=4, a=b=lambda=0 is 8 pi^2/3", [pi2] {
    const double e = rel(energy_f0(derive(ProblemParams{4, 0, 0, 0})), 8.0 * pi2 / 3.0);
    return std::pair{e <= 1e-6, "rel error " + format_real(e)};
  }});

  checks.push_back({"kernel anchors (degenerate at b=lambda=0, not at b=0.3)", [grid] {
    const auto deg = nondegenerate(validate(ProblemParams{4, 0, 0, 0}), grid);
    const auto non = nondegenerate(validate(ProblemParams{4, 0, 0.3, 0}), grid);
    const auto other = nondegenerate(validate(ProblemParams{4, 0.5, 0.7, 0.1}), grid);
    const bool ok = !deg.nondegenerate && deg.margins.at(0).kernel && non.nondegenerate && other.nondegenerate;
    return std::pair{ok, "mode-1 margin at b=0: " + format_real(deg.margins.at(0).smallest_abs)};
  }});

  checks.push_back({"mode-1 kernel on the curve b = h_1(a, 0)", [grid] {
    const double a = -1.0;
    const double b = degeneracy_curve(1, a, 0.0, 4).derived;
    const auto m = mode_margin(derive(ProblemParams{4, a, b, 0.0}), grid, 1);
    return std::pair{m.smallest_abs <= 1e-5, "smallest |eigenvalue| " + format_real(m.smallest_abs)};
  }});

  checks.push_back({"Gamma''(0) for rational(0,1) is 32 pi^2/3", [pi2] {
    const auto dc = derive(ProblemParams{4, 0, 0, 0});
    const auto k = Perturbation::rational(0.0, 1.0, 4);
    const double e = rel(Gamma2_0(k, dc), 32.0 * pi2 / 3.0);
    const double fd = rel(Gamma2_fd(k, dc, -8.0), Gamma2_0(k, dc));
    return std::pair{e <= 1e-6 && fd <= 1e-3, "oracle " + format_real(e) + ", difference quotient " + format_real(fd)};
  }});

  checks.push_back({"reduction: w linear in eps, certified critical point", [grid] {
    const Reduction red(validate(ProblemParams{4, 0, 0.3, 0}), Perturbation::gaussian_bump(1, 0, 1), grid);
    const double w1 = red.solve_w(1.0, 1e-2).w_norm;
    const double w2 = red.solve_w(1.0, 5e-3).w_norm;
    const double slope = std::log(w1 / w2) / std::log(2.0);
    const auto search = red.find_critical(1e-2, log_uniform(std::exp(-4.0), std::exp(4.0), 17));
    bool certified = !search.points.empty();
    for (const auto& p : search.points) certified = certified && p.certified;
    return std::pair{std::fabs(slope - 1.0) <= 0.1 && certified,
                     "slope " + format_real(slope) + ", critical points " + std::to_string(search.points.size())};
  }});

  return checks;
}

}  // namespace

int cmd_selfcheck(const RunConfig& c, std::ostream& out, std::ostream& err) {
  write_header(out, c);
  const Grid grid = c.grid();
  int failures = 0;
  for (const auto& check : suite(grid)) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = check.run();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    out << (ok ? "PASS " : "FAIL ") << check.name << " (" << detail << ")\n";
    failures += ok ? 0 : 1;
  }
  out << "# " << failures << " failure(s)\n";
  if (failures > 0) {
    err << "selfcheck: " << failures << " check(s) failed\n";
    return kCertificateFailure;
  }
  return kSuccess;
}

}  // namespace ckn::cli
