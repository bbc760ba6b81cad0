#include "ckn/quadrature.hpp"

#include <sstream>

namespace ckn {

double trapezoid(const std::function<double(double)>& f, double lo, double hi, double h,
                 std::size_t max_points) {
  if (!(hi > lo) || !(h > 0.0)) throw QuadratureError("trapezoid: empty interval or step");
  const double steps = std::ceil((hi - lo) / h);
  if (!std::isfinite(steps) || steps + 1 > static_cast<double>(max_points)) {
    std::ostringstream os;
    os << "quadrature did not converge: [" << lo << ", " << hi << "] needs " << steps
       << " steps of " << h << " (decay too slow for the point budget)";
    throw QuadratureError(os.str());
  }
  const auto n = static_cast<std::size_t>(steps);
  const double step = (hi - lo) / static_cast<double>(n);
  double sum = 0.5 * (f(lo) + f(hi));
  for (std::size_t k = 1; k < n; ++k) sum += f(lo + static_cast<double>(k) * step);
  const double result = sum * step;
  if (!std::isfinite(result)) throw QuadratureError("quadrature produced a non-finite value");
  return result;
}

double truncation_width(double rate, double log_prefactor, double rel_cutoff) {
  if (!(rate > 0.0)) throw QuadratureError("integrand does not decay (rate <= 0)");
  return (log_prefactor - std::log(rel_cutoff)) / rate;
}

}  // namespace ckn
