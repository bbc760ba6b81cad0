#include "ckn/cylinder_grid.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ckn/csv.hpp"

namespace ckn {

Grid::Grid(double half_width, std::size_t points)
    : half_width_(half_width), points_(points), step_(2.0 * half_width / static_cast<double>(points + 1)) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("Grid: half width L must be positive");
  }
  if (points < 3) throw std::invalid_argument("Grid: need at least 3 interior points");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> t(points_);
  for (std::size_t k = 0; k < points_; ++k) t[k] = node(k);
  return t;
}

RadialProfile::RadialProfile(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("RadialProfile: value count does not match the grid");
  }
}

RadialProfile RadialProfile::zero(const Grid& grid) {
  return RadialProfile(grid, std::vector<double>(grid.size(), 0.0));
}

RadialProfile& RadialProfile::operator+=(const RadialProfile& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("RadialProfile: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

RadialProfile& RadialProfile::operator-=(const RadialProfile& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("RadialProfile: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

RadialProfile& RadialProfile::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

RadialProfile operator+(RadialProfile lhs, const RadialProfile& rhs) { return lhs += rhs; }
RadialProfile operator-(RadialProfile lhs, const RadialProfile& rhs) { return lhs -= rhs; }
RadialProfile operator*(double c, RadialProfile u) { return u *= c; }

RadialProfile sample(const std::function<double(double)>& f, const Grid& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(k);
    values[k] = f(t);
    if (!std::isfinite(values[k])) {
      std::ostringstream os;
      os << "sample: non-finite value at t = " << t;
      throw std::domain_error(os.str());
    }
  }
  return RadialProfile(grid, std::move(values));
}

namespace {

SymTridiagonal assemble_stiffness(const Grid& grid, double lambda_tilde) {
  const double inv_h2 = 1.0 / (grid.step() * grid.step());
  return SymTridiagonal(std::vector<double>(grid.size(), 2.0 * inv_h2 + lambda_tilde),
                        std::vector<double>(grid.size() - 1, -inv_h2));
}

}  // namespace

StiffnessOperator::StiffnessOperator(const Grid& grid, double lambda_tilde)
    : grid_(grid), lambda_tilde_(lambda_tilde), matrix_(assemble_stiffness(grid, lambda_tilde)) {
  if (!(lambda_tilde > 0.0)) {
    throw std::invalid_argument("StiffnessOperator: LambdaTilde must be positive");
  }
}

RadialProfile StiffnessOperator::apply(const RadialProfile& u) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("StiffnessOperator: grid mismatch");
  return RadialProfile(grid_, matrix_.apply(u.values()));
}

RadialProfile StiffnessOperator::solve(const RadialProfile& rhs) const {
  if (!(rhs.grid() == grid_)) throw std::invalid_argument("StiffnessOperator: grid mismatch");
  return RadialProfile(grid_, matrix_.solve_positive_definite(rhs.values()));
}

CylinderSpace::CylinderSpace(const Grid& grid, double lambda_tilde, double omega)
    : stiffness_(grid, lambda_tilde), omega_(omega) {}

CylinderSpace::CylinderSpace(const DerivedConstants& dc, const Grid& grid)
    : CylinderSpace(grid, dc.lambda_tilde, dc.omega) {}

void CylinderSpace::require_grid(const RadialProfile& u) const {
  if (!(u.grid() == grid())) throw std::invalid_argument("CylinderSpace: grid mismatch");
}

double CylinderSpace::inner(const RadialProfile& u, const RadialProfile& v) const {
  require_grid(u);
  require_grid(v);
  const auto uv = u.values();
  const auto vv = v.values();
  const std::size_t n = uv.size();
  const double h = grid().step();
  // Forward differences with the Dirichlet zeros at both ends.
  double gradient = uv[0] * vv[0];
  double mass = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mass += uv[k] * vv[k];
    const double du = (k + 1 < n ? uv[k + 1] : 0.0) - uv[k];
    const double dv = (k + 1 < n ? vv[k + 1] : 0.0) - vv[k];
    gradient += du * dv;
  }
  return omega_ * h * (gradient / (h * h) + lambda_tilde() * mass);
}

double CylinderSpace::norm(const RadialProfile& u) const { return std::sqrt(inner(u, u)); }

double CylinderSpace::lp_norm(const RadialProfile& u, double p) const {
  require_grid(u);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double sum = 0.0;
  for (double v : u.values()) sum += std::pow(std::fabs(v), p);
  return std::pow(omega_ * grid().step() * sum, 1.0 / p);
}

double CylinderSpace::dual_norm(const RadialProfile& r) const {
  require_grid(r);
  const RadialProfile riesz = solve_stiffness(r);
  double acc = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) acc += r[k] * riesz[k];
  return std::sqrt(std::max(0.0, omega_ * grid().step() * acc));
}

void write_profile_csv(std::ostream& out, const RadialProfile& u,
                       const std::vector<std::string>& extra_header) {
  const Grid& g = u.grid();
  out << "# L=" << format_real(g.half_width()) << " n=" << g.size() << " convention=t=ln(r)\n";
  for (const auto& line : extra_header) out << "# " << line << '\n';
  out << "t,value\n";
  for (std::size_t k = 0; k < u.size(); ++k) {
    out << format_real(g.node(k)) << ',' << format_real(u[k]) << '\n';
  }
}

RadialProfile read_profile_csv(std::istream& in) {
  std::string line;
  double L = 0.0;
  std::size_t n = 0;
  bool have_grid = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!have_grid && line.find("L=") != std::string::npos) {
        std::istringstream is(line.substr(1));
        std::string token;
        while (is >> token) {
          if (token.rfind("L=", 0) == 0) L = std::stod(token.substr(2));
          if (token.rfind("n=", 0) == 0) n = std::stoul(token.substr(2));
        }
        have_grid = L > 0 && n > 0;
      }
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw std::runtime_error("profile CSV: expected two columns: " + line);
    values.push_back(std::stod(fields[1]));
  }
  if (!have_grid) throw std::runtime_error("profile CSV: missing '# L=<L> n=<n>' header");
  return RadialProfile(Grid(L, n), std::move(values));
}

}  // namespace ckn
