#pragma once

#include "ckn/params.hpp"

namespace ckn {

/// Cylinder profile of the ground state, phi1(t) = C cosh(gamma t)^{-(N-2q)/(2q)}.
/// All positive H^1(R) solutions of -phi'' + LambdaTilde phi - phi^{p-1} = 0
/// are its translates phi1(t - ln mu).
double phi1(double t, const DerivedConstants& dc);
double phi1_dt(double t, const DerivedConstants& dc);
double phi1_dtt(double t, const DerivedConstants& dc);

/// The ground state z1 evaluated in x-space from its closed rational-power
/// form. Independent of phi1(); the two agree through u(r) = r^{-(N-2-2a)/2} v(ln r).
double z1_direct(double r, const DerivedConstants& dc);

/// -phi1'' + LambdaTilde phi1 - phi1^{p-1} with analytic derivatives.
double ode_residual(double t, const DerivedConstants& dc);

/// Amplitude phi1(0) as the coefficient is usually printed,
/// [N(N-2-2a) sqrt(Lambda4) / (4(N-2q))]^{(N-2q)/(4q)}. Coincides with
/// dc.amplitude only for lambda = 0; kept for comparison.
double printed_amplitude(const DerivedConstants& dc);

/// A_i = lambda - ((N-2-2a)/2)^2 - i(N+i-2): minus the bottom of the
/// continuous spectrum of the mode-i operator.
double angular_level(int i, const DerivedConstants& dc);

/// B_j = -Lambda4 q^2 / (4(N-2q)^2) (N/q - 2j)^2. Spectral for 0 <= j < N/(2q).
double radial_level(int j, const DerivedConstants& dc);
bool radial_level_is_spectral(int j, const DerivedConstants& dc);

/// Bound states of -d^2/dt^2 - beta cosh^{-2}(gamma t):
/// nu_j = -(gamma^2/4)(sqrt(1 + 4 beta/gamma^2) - (1+2j))^2.
/// Throws std::out_of_range for j >= bound_state_count(dc).
double pt_eigenvalue(int j, const DerivedConstants& dc);

/// Number of j >= 0 with j < (sqrt(1 + 4 beta/gamma^2) - 1)/2 = N/(2q).
/// An index within 1e-9 of the bound is the threshold state and is excluded.
int bound_state_count(const DerivedConstants& dc);

struct DegeneracyCurve {
  double derived = 0.0;  // solves B_0(a,b,lambda) = A_j(a,lambda) for b
  double printed = 0.0;  // same expression with the factor 4j(N+j-1)
};

/// Values b = h_j(a, lambda) at which mode j acquires a kernel. `derived` is
/// the canonical curve; `printed` is reported for comparison only.
/// Throws DomainError if (a, lambda) is not admissible for N.
DegeneracyCurve degeneracy_curve(int j, double a, double lambda, int N);

/// Default step of the trapezoidal rule used for line integrals.
inline constexpr double kLineQuadratureStep = 1e-2;

/// integral |x|^{-bp} z1^p dx = omega int phi1^p dt, by trapezoidal quadrature.
double norm_pb_p(const DerivedConstants& dc, double h = kLineQuadratureStep);

/// Same quantity from omega C^p B(N/(2q), 1/2) / gamma.
double norm_pb_p_beta(const DerivedConstants& dc);

/// f_0(z_mu) = (1/2 - 1/p) norm_pb_p, the same for every mu.
double energy_f0(const DerivedConstants& dc, double h = kLineQuadratureStep);

/// integral |x|^2 |x|^{-bp} z1^p dx = omega int e^{2t} phi1^p dt.
/// Throws QuadratureError when the moment diverges (gamma N/q <= 2).
double second_moment(const DerivedConstants& dc, double h = kLineQuadratureStep);

}  // namespace ckn
