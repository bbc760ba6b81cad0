#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace ckn {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Composite trapezoidal rule on [lo, hi] with step close to `h`.
/// Endpoints are assumed to carry negligible mass (decaying integrands on the
/// line), which is where the rule is spectrally accurate.
double trapezoid(const std::function<double(double)>& f, double lo, double hi, double h,
                 std::size_t max_points = 50'000'000);

/// Half-width L such that an integrand bounded by prefactor * exp(-rate |t|)
/// has dropped below rel_cutoff of its peak at |t| = L.
double truncation_width(double rate, double log_prefactor, double rel_cutoff = 1e-16);

}  // namespace ckn
