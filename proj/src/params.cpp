#include "ckn/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ckn {

namespace {

std::string describe(const ProblemParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << " (N=" << p.N << ", a=" << p.a << ", b=" << p.b << ", lambda=" << p.lambda << ")";
  return os.str();
}

// Above this profile exponent the amplitude C^{p-2} is raised to a power
// larger than 25 and phi1^p under/overflows quickly.
constexpr double kProfileExponentWarning = 50.0;

}  // namespace

ValidatedParams validate(const ProblemParams& params) {
  const auto [N, a, b, lambda] = params;
  if (N < 3) {
    throw DomainError(DomainViolation::DimensionTooSmall, "N >= 3 violated" + describe(params));
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(lambda)) {
    throw DomainError(DomainViolation::WeightTooLarge, "non-finite parameter" + describe(params));
  }
  if (!(a < 0.5 * (N - 2))) {
    throw DomainError(DomainViolation::WeightTooLarge, "a < (N-2)/2 violated" + describe(params));
  }
  const double half = 0.5 * (N - 2 - 2 * a);
  if (!(lambda < half * half)) {
    throw DomainError(DomainViolation::ShiftTooLarge,
                      "lambda < ((N-2-2a)/2)^2 violated" + describe(params));
  }
  if (!(a <= b)) {
    throw DomainError(DomainViolation::BBelowA, "a <= b violated" + describe(params));
  }
  if (!(b < a + 1)) {
    throw DomainError(DomainViolation::BNotBelowAPlusOne, "b < a+1 violated" + describe(params));
  }
  return ValidatedParams(params);
}

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double critical_exponent(int N, double a, double b) {
  return 2.0 * N / (N - 2.0 * (1.0 + a - b));
}

DerivedConstants derive(const ValidatedParams& validated) {
  const ProblemParams& pp = validated.get();
  const double N = pp.N;
  DerivedConstants dc;
  dc.params = pp;
  dc.q = 1.0 + pp.a - pp.b;
  dc.p = critical_exponent(pp.N, pp.a, pp.b);
  dc.weight_exponent = 0.5 * (N - 2.0 - 2.0 * pp.a);
  dc.lambda_tilde = dc.weight_exponent * dc.weight_exponent - pp.lambda;
  dc.lambda_four = (N - 2.0 - 2.0 * pp.a) * (N - 2.0 - 2.0 * pp.a) - 4.0 * pp.lambda;
  const double n2q = N - 2.0 * dc.q;
  dc.beta = N * (N + 2.0 * dc.q) * dc.lambda_four / (4.0 * n2q * n2q);
  dc.gamma = dc.q * std::sqrt(dc.lambda_four) / n2q;
  dc.omega = sphere_area(pp.N);
  dc.profile_exponent = n2q / (2.0 * dc.q);
  // phi1(0)^{p-2} = N Lambda4 / (4(N-2q)), and 1/(p-2) = profile_exponent/2.
  dc.amplitude = std::pow(N * dc.lambda_four / (4.0 * n2q), 0.5 * dc.profile_exponent);

  if (dc.profile_exponent > kProfileExponentWarning) {
    std::ostringstream os;
    os << "profile exponent (N-2q)/(2q) = " << dc.profile_exponent
       << " > " << kProfileExponentWarning
       << ": b is close to a+1, quadrature of u^p is ill-conditioned";
    dc.warnings.push_back(os.str());
  }
  if (!std::isfinite(dc.amplitude) || dc.amplitude == 0.0) {
    dc.warnings.push_back("ground-state amplitude is not representable in double precision");
  }
  return dc;
}

DerivedConstants derive(const ProblemParams& params) { return derive(validate(params)); }

}  // namespace ckn
