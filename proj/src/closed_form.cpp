#include "ckn/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ckn/quadrature.hpp"

namespace ckn {

namespace {

// log(cosh(x)) without overflow.
double log_cosh(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double spectral_root(const DerivedConstants& dc) {
  return std::sqrt(1.0 + 4.0 * dc.beta / (dc.gamma * dc.gamma));
}

double exponent_sum(const DerivedConstants& dc) { return dc.params.N / dc.q; }  // p * profile_exponent

}  // namespace

double phi1(double t, const DerivedConstants& dc) {
  return dc.amplitude * std::exp(-dc.profile_exponent * log_cosh(dc.gamma * t));
}

double phi1_dt(double t, const DerivedConstants& dc) {
  return -dc.profile_exponent * dc.gamma * std::tanh(dc.gamma * t) * phi1(t, dc);
}

double phi1_dtt(double t, const DerivedConstants& dc) {
  const double s = dc.profile_exponent;
  const double th = std::tanh(dc.gamma * t);
  const double sech2 = 1.0 - th * th;
  return dc.gamma * dc.gamma * (s * s * th * th - s * sech2) * phi1(t, dc);
}

double z1_direct(double r, const DerivedConstants& dc) {
  const double N = dc.params.N;
  const double q = dc.q;
  const double m = N - 2.0 - 2.0 * dc.params.a;
  const double root = std::sqrt(dc.lambda_four);
  const double n2q = N - 2.0 * q;
  const double coefficient = std::pow(N * dc.lambda_four / n2q, n2q / (4.0 * q));
  const double inner_power = (1.0 - root / m) * m * q / n2q;
  const double bracket = std::pow(r, inner_power) * (1.0 + std::pow(r, 2.0 * q * root / n2q));
  return coefficient * std::pow(bracket, -n2q / (2.0 * q));
}

double ode_residual(double t, const DerivedConstants& dc) {
  const double phi = phi1(t, dc);
  return -phi1_dtt(t, dc) + dc.lambda_tilde * phi - std::pow(phi, dc.p - 1.0);
}

double printed_amplitude(const DerivedConstants& dc) {
  const double N = dc.params.N;
  const double n2q = N - 2.0 * dc.q;
  const double m = N - 2.0 - 2.0 * dc.params.a;
  return std::pow(N * m * std::sqrt(dc.lambda_four) / (4.0 * n2q), 0.5 * dc.profile_exponent);
}

double angular_level(int i, const DerivedConstants& dc) {
  const double N = dc.params.N;
  return -dc.lambda_tilde - static_cast<double>(i) * (N + i - 2.0);
}

double radial_level(int j, const DerivedConstants& dc) {
  const double N = dc.params.N;
  const double n2q = N - 2.0 * dc.q;
  const double bracket = -2.0 * j + N / dc.q;
  return -dc.lambda_four * dc.q * dc.q / (4.0 * n2q * n2q) * bracket * bracket;
}

bool radial_level_is_spectral(int j, const DerivedConstants& dc) {
  return j >= 0 && j < bound_state_count(dc);
}

int bound_state_count(const DerivedConstants& dc) {
  const double bound = 0.5 * (spectral_root(dc) - 1.0);
  return static_cast<int>(std::ceil(bound - 1e-9));
}

double pt_eigenvalue(int j, const DerivedConstants& dc) {
  if (j < 0 || j >= bound_state_count(dc)) {
    throw std::out_of_range("pt_eigenvalue: index " + std::to_string(j) +
                            " is not a bound state (count " +
                            std::to_string(bound_state_count(dc)) + ")");
  }
  const double d = spectral_root(dc) - (1.0 + 2.0 * j);
  return -0.25 * dc.gamma * dc.gamma * d * d;
}

DegeneracyCurve degeneracy_curve(int j, double a, double lambda, int N) {
  if (j < 1) throw std::invalid_argument("degeneracy_curve: j must be >= 1");
  if (N < 3) throw DomainError(DomainViolation::DimensionTooSmall, "N >= 3 violated");
  if (!(a < 0.5 * (N - 2))) {
    throw DomainError(DomainViolation::WeightTooLarge, "a < (N-2)/2 violated");
  }
  const double m = N - 2.0 - 2.0 * a;
  if (!(4.0 * lambda < m * m)) {
    throw DomainError(DomainViolation::ShiftTooLarge, "lambda < ((N-2-2a)/2)^2 violated");
  }
  const double lambda_four = m * m - 4.0 * lambda;
  const double jj = j;
  DegeneracyCurve curve;
  curve.derived = 0.5 * N / std::sqrt(1.0 + 4.0 * jj * (N + jj - 2.0) / lambda_four) - 0.5 * m;
  curve.printed = 0.5 * N / std::sqrt(1.0 + 4.0 * jj * (N + jj - 1.0) / lambda_four) - 0.5 * m;
  return curve;
}

double norm_pb_p(const DerivedConstants& dc, double h) {
  const double m = exponent_sum(dc);
  const double rate = dc.gamma * m;
  const double L = truncation_width(rate, m * std::numbers::ln2);
  const double amp_p = std::pow(dc.amplitude, dc.p);
  const auto integrand = [&](double t) { return std::exp(-m * log_cosh(dc.gamma * t)); };
  return dc.omega * amp_p * trapezoid(integrand, -L, L, h);
}

double norm_pb_p_beta(const DerivedConstants& dc) {
  const double x = 0.5 * exponent_sum(dc);
  const double beta_fn = std::exp(std::lgamma(x) + std::lgamma(0.5) - std::lgamma(x + 0.5));
  return dc.omega * std::pow(dc.amplitude, dc.p) * beta_fn / dc.gamma;
}

double energy_f0(const DerivedConstants& dc, double h) {
  return (0.5 - 1.0 / dc.p) * norm_pb_p(dc, h);
}

double second_moment(const DerivedConstants& dc, double h) {
  const double m = exponent_sum(dc);
  const double rate_right = dc.gamma * m - 2.0;
  if (!(rate_right > 1e-3)) {
    throw QuadratureError("second moment of z1^p diverges: gamma N/q = " +
                          std::to_string(dc.gamma * m) + " <= 2");
  }
  const double rate_left = dc.gamma * m + 2.0;
  // The integrand peaks at t* = atanh(2/(gamma m))/gamma > 0; bound the tails
  // relative to e^{2t*} phi1(t*)^p >= phi1(0)^p.
  const double log_pref = m * std::numbers::ln2;
  const double right = truncation_width(rate_right, log_pref);
  const double left = truncation_width(rate_left, log_pref);
  const double amp_p = std::pow(dc.amplitude, dc.p);
  const auto integrand = [&](double t) {
    return std::exp(2.0 * t - m * log_cosh(dc.gamma * t));
  };
  return dc.omega * amp_p * trapezoid(integrand, -left, right, h);
}

}  // namespace ckn
