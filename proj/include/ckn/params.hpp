#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ckn {

/// Raw problem parameters: dimension N, weight exponents a and b, spectral
/// shift lambda. Nothing is checked until validate() is called.
struct ProblemParams {
  int N = 3;
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;

  bool operator==(const ProblemParams&) const = default;
};

/// The inequality that a rejected ProblemParams violated.
enum class DomainViolation {
  DimensionTooSmall,  // N >= 3
  WeightTooLarge,     // a < (N-2)/2
  ShiftTooLarge,      // lambda < ((N-2-2a)/2)^2
  BBelowA,            // a <= b
  BNotBelowAPlusOne,  // b < a+1
};

class DomainError : public std::invalid_argument {
 public:
  DomainError(DomainViolation violation, const std::string& what)
      : std::invalid_argument(what), violation_(violation) {}

  DomainViolation violation() const noexcept { return violation_; }

 private:
  DomainViolation violation_;
};

/// ProblemParams that passed validate(). Only constructible through it.
class ValidatedParams {
 public:
  const ProblemParams& get() const noexcept { return params_; }
  int N() const noexcept { return params_.N; }
  double a() const noexcept { return params_.a; }
  double b() const noexcept { return params_.b; }
  double lambda() const noexcept { return params_.lambda; }

 private:
  friend ValidatedParams validate(const ProblemParams&);
  explicit ValidatedParams(const ProblemParams& p) : params_(p) {}
  ProblemParams params_;
};

/// Throws DomainError naming the first violated inequality.
ValidatedParams validate(const ProblemParams& params);

/// Every scalar derived from (N, a, b, lambda).
struct DerivedConstants {
  ProblemParams params;
  double p = 0.0;             // critical exponent 2N/(N-2q)
  double q = 0.0;             // 1+a-b, in (0, 1]
  double lambda_tilde = 0.0;  // ((N-2-2a)/2)^2 - lambda
  double lambda_four = 0.0;   // (N-2-2a)^2 - 4 lambda
  double beta = 0.0;          // depth of the sech^2 potential
  double gamma = 0.0;         // width parameter of the sech^2 potential
  double omega = 0.0;         // area of the unit sphere S^{N-1}
  double weight_exponent = 0.0;   // (N-2-2a)/2, u(r) = r^{-weight_exponent} v(ln r)
  double profile_exponent = 0.0;  // (N-2q)/(2q), phi1 ~ cosh(gamma t)^{-profile_exponent}
  double amplitude = 0.0;         // phi1(0)
  std::vector<std::string> warnings;
};

DerivedConstants derive(const ValidatedParams& params);

/// Convenience: validate then derive.
DerivedConstants derive(const ProblemParams& params);

/// Surface area of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

/// Critical exponent p(a, b) = 2N / (N - 2(1+a-b)).
double critical_exponent(int N, double a, double b);

}  // namespace ckn
