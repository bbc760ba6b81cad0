#include "ckn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ckn/closed_form.hpp"

namespace ckn {

namespace {

double potential(ModeOperator::Kind kind, const DerivedConstants& dc, int mode, double t) {
  switch (kind) {
    case ModeOperator::Kind::Linearized: {
      const double shift = dc.lambda_tilde + mode * (dc.params.N + mode - 2.0);
      return shift - (dc.p - 1.0) * std::pow(phi1(t, dc), dc.p - 2.0);
    }
    case ModeOperator::Kind::PoschlTeller: {
      const double c = std::cosh(dc.gamma * t);
      return -dc.beta / (c * c);
    }
    case ModeOperator::Kind::Free:
      return dc.lambda_tilde;
  }
  return 0.0;
}

SymTridiagonal assemble(ModeOperator::Kind kind, const DerivedConstants& dc, const Grid& grid,
                        int mode) {
  const double inv_h2 = 1.0 / (grid.step() * grid.step());
  std::vector<double> diag(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    diag[k] = 2.0 * inv_h2 + potential(kind, dc, mode, grid.node(k));
  }
  return SymTridiagonal(std::move(diag), std::vector<double>(grid.size() - 1, -inv_h2));
}

}  // namespace

ModeOperator::ModeOperator(Kind kind, const DerivedConstants& dc, const Grid& grid, int mode)
    : kind_(kind), dc_(dc), grid_(grid), mode_(mode), matrix_(assemble(kind, dc, grid, mode)) {
  if (mode < 0) throw std::invalid_argument("ModeOperator: mode must be >= 0");
}

ModeOperator ModeOperator::linearized(const DerivedConstants& dc, const Grid& grid, int mode) {
  return ModeOperator(Kind::Linearized, dc, grid, mode);
}

ModeOperator ModeOperator::poschl_teller(const DerivedConstants& dc, const Grid& grid) {
  return ModeOperator(Kind::PoschlTeller, dc, grid, 0);
}

ModeOperator ModeOperator::free(const DerivedConstants& dc, const Grid& grid) {
  return ModeOperator(Kind::Free, dc, grid, 0);
}

ModeOperator ModeOperator::refined() const {
  return ModeOperator(kind_, dc_, grid_.refined(), mode_);
}

std::vector<double> eigen_lowest(const ModeOperator& op, std::size_t count) {
  return op.matrix().lowest(count, kBisectionTolerance);
}

namespace {

double far_field_level(const ModeOperator& op) {
  const DerivedConstants& dc = op.constants();
  switch (op.kind()) {
    case ModeOperator::Kind::Linearized:
      return dc.lambda_tilde + op.mode() * (dc.params.N + op.mode() - 2.0);
    case ModeOperator::Kind::PoschlTeller:
      return 0.0;
    case ModeOperator::Kind::Free:
      return dc.lambda_tilde;
  }
  return 0.0;
}

// Eigenvalue `index` with the end rows folded by the exterior decay factor
// rho + 1/rho = 2 + h^2 (level - lambda) that belongs to the trial value lambda.
double folded_eigenvalue(const ModeOperator& op, std::size_t index, double level, double lambda) {
  const SymTridiagonal& m = op.matrix();
  const double h2 = op.grid().step() * op.grid().step();
  const double half = 1.0 + 0.5 * h2 * std::max(0.0, level - lambda);
  const double rho = half - std::sqrt(half * half - 1.0);
  std::vector<double> diag(m.diag().begin(), m.diag().end());
  diag.front() -= rho / h2;
  diag.back() -= rho / h2;
  const SymTridiagonal folded(std::move(diag), std::vector<double>(m.off().begin(), m.off().end()));
  return folded.eigenvalue(index, kBisectionTolerance);
}

// Bound states solve lambda = folded_eigenvalue(lambda). The right side
// decreases in lambda, so the root is bracketed by [g(level), level] and
// found by regula falsi (Illinois). Without a root below `level` the state
// is not bound and the Dirichlet eigenvalue is returned.
double matched_eigenvalue(const ModeOperator& op, std::size_t index) {
  const double level = far_field_level(op);
  const double dirichlet = op.matrix().eigenvalue(index, kBisectionTolerance);
  const double neumann = folded_eigenvalue(op, index, level, level);
  if (!(neumann < level)) return dirichlet;

  const auto F = [&](double lambda) { return folded_eigenvalue(op, index, level, lambda) - lambda; };
  double lo = neumann, hi = level;
  double f_lo = F(lo), f_hi = neumann - level;
  if (f_lo <= 0.0) return lo;
  int side = 0;
  double x = lo;
  for (int it = 0; it < 200; ++it) {
    x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    const double fx = F(x);
    if (fx == 0.0 || hi - lo <= 1e-14 * std::max(1.0, std::fabs(x))) break;
    if (fx > 0.0) {
      lo = x;
      f_lo = fx;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    }
    if (std::fabs(fx) <= 1e-13 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

}  // namespace

double eigen_extrapolated(const ModeOperator& op, std::size_t index) {
  const double coarse = matched_eigenvalue(op, index);
  const double fine = matched_eigenvalue(op.refined(), index);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> eigen_lowest_extrapolated(const ModeOperator& op, std::size_t count) {
  const ModeOperator fine_op = op.refined();
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = (4.0 * matched_eigenvalue(fine_op, k) - matched_eigenvalue(op, k)) / 3.0;
  }
  return out;
}

constexpr double kThresholdTolerance = 1e-6;

SpectrumReport pt_spectrum_check(const DerivedConstants& dc, const Grid& grid) {
  const ModeOperator op = ModeOperator::poschl_teller(dc, grid);
  SpectrumReport report;
  const int count = bound_state_count(dc);
  report.expected_count = static_cast<std::size_t>(count);
  for (int j = 0; j < count; ++j) report.closed_form.push_back(pt_eigenvalue(j, dc));
  report.numeric = eigen_lowest_extrapolated(op, report.expected_count);
  for (std::size_t j = 0; j < report.numeric.size(); ++j) {
    const double nu = report.closed_form[j];
    report.max_error =
        std::max(report.max_error, std::fabs(report.numeric[j] - nu) / std::max(1.0, std::fabs(nu)));
  }
  report.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < report.numeric.size(); ++j) {
    report.min_gap = std::min(report.min_gap, report.numeric[j] - report.numeric[j - 1]);
  }
  report.simple = report.min_gap > 1e-8;
  // A zero-energy threshold state (N/(2q) an integer) is not bound.
  std::size_t negatives = 0;
  while (negatives < op.matrix().size() && eigen_extrapolated(op, negatives) < -kThresholdTolerance) ++negatives;
  report.negative_count = negatives;
  return report;
}

double kernel_tolerance(const DerivedConstants& dc) {
  return 1e-6 * std::max(1.0, dc.lambda_tilde);
}

int last_relevant_mode(const DerivedConstants& dc) {
  const double nu0 = pt_eigenvalue(0, dc);
  int i = 1;
  while (dc.lambda_tilde + i * (dc.params.N + i - 2.0) + nu0 <= 0.0) ++i;
  return i;
}

namespace {

struct NearZero {
  std::vector<double> values;  // extrapolated eigenvalues around 0, ascending
  std::size_t first_index = 0;
  std::size_t coarse_negatives = 0;
};

NearZero eigenvalues_near_zero(const ModeOperator& op, std::size_t below, std::size_t above) {
  NearZero out;
  const ModeOperator fine_op = op.refined();
  out.coarse_negatives = op.matrix().count_below(0.0);
  out.first_index = out.coarse_negatives >= below ? out.coarse_negatives - below : 0;
  const std::size_t last = std::min(op.matrix().size() - 1, out.coarse_negatives + above - 1);
  for (std::size_t k = out.first_index; k <= last; ++k) {
    out.values.push_back((4.0 * matched_eigenvalue(fine_op, k) - matched_eigenvalue(op, k)) / 3.0);
  }
  return out;
}

}  // namespace

ModeMargin mode_margin(const DerivedConstants& dc, const Grid& grid, int mode) {
  const ModeOperator op = ModeOperator::linearized(dc, grid, mode);
  const double tol = kernel_tolerance(dc);
  const NearZero near = eigenvalues_near_zero(op, 1, 1);
  ModeMargin margin;
  margin.mode = mode;
  margin.smallest_abs = std::numeric_limits<double>::infinity();
  for (double v : near.values) margin.smallest_abs = std::min(margin.smallest_abs, std::fabs(v));
  margin.kernel = margin.smallest_abs <= tol;
  margin.bottom = near.first_index == 0 ? near.values.front() : eigen_extrapolated(op, 0);
  std::size_t negatives = near.first_index;
  for (double v : near.values) negatives += v < -tol ? 1 : 0;
  margin.negative_count = negatives;
  return margin;
}

namespace {

NondegeneracyReport assess(const DerivedConstants& dc, const Grid& grid) {
  NondegeneracyReport report;
  report.tolerance = kernel_tolerance(dc);
  report.i_max = last_relevant_mode(dc);

  const NearZero radial = eigenvalues_near_zero(ModeOperator::linearized(dc, grid, 0), 2, 2);
  for (double v : radial.values) report.radial_kernel_dim += std::fabs(v) <= report.tolerance ? 1 : 0;

  bool any_kernel = false;
  for (int i = 1; i <= report.i_max; ++i) {
    report.margins.push_back(mode_margin(dc, grid, i));
    any_kernel = any_kernel || report.margins.back().kernel;
  }
  report.nondegenerate = report.radial_kernel_dim == 1 && !any_kernel;
  return report;
}

bool near_tolerance(const NondegeneracyReport& report) {
  const double tol = report.tolerance;
  for (const auto& m : report.margins) {
    if (m.smallest_abs > tol && m.smallest_abs <= 10.0 * tol) return true;
  }
  return false;
}

}  // namespace

NondegeneracyReport nondegenerate(const ValidatedParams& params, const Grid& grid) {
  const DerivedConstants dc = derive(params);
  NondegeneracyReport report = assess(dc, grid);
  if (near_tolerance(report) || report.radial_kernel_dim != 1) {
    report = assess(dc, grid.refined());
    report.refined = true;
  }
  return report;
}

SymmetryBreakingReport symmetry_breaking(double a, double b, int N, const Grid& grid) {
  const DerivedConstants dc = derive(ProblemParams{N, a, b, 0.0});
  const ModeOperator op = ModeOperator::linearized(dc, grid, 1);
  SymmetryBreakingReport report;
  report.mode1_bottom = eigen_extrapolated(op, 0);
  report.breaks = report.mode1_bottom < -kernel_tolerance(dc);
  report.curve = degeneracy_curve(1, a, 0.0, N).derived;
  report.curve_predicts = b < report.curve;
  return report;
}

double rayleigh(const CylinderSpace& space, const RadialProfile& u, double p) {
  const double lp = space.lp_norm(u, p);
  if (!(lp > 0.0)) throw std::invalid_argument("rayleigh: zero profile");
  return space.inner(u, u) / (lp * lp);
}

}  // namespace ckn
