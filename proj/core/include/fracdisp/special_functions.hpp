#pragma once

#include <complex>

#include "fracdisp/params.hpp"

namespace fracdisp {

/// Bessel function of the first kind, nu >= -1/2, x >= 0.
double bessel_j(double nu, double x);
/// Bessel function of the second kind, nu >= -1/2, x > 0.
double bessel_y(double nu, double x);
/// x^{-nu} J_nu(x), finite at x = 0.
double bessel_j_scaled(double nu, double x);
/// Modified Bessel function K_nu, x > 0. Half-integer orders use closed forms.
double bessel_k(double nu, double x);

/// H^(1)_nu(x) = J_nu(x) + i Y_nu(x) for real x > 0.
cplx hankel1(double nu, double x);
/// H^(2)_nu(x) = J_nu(x) - i Y_nu(x) for real x > 0.
cplx hankel2(double nu, double x);

/// Large-argument Hankel expansions, valid for |z| >= 20 and |arg z| < pi.
/// Exact (terminating) for half-integer orders.
cplx hankel1_large(double nu, cplx z);
cplx hankel2_large(double nu, cplx z);

/// J_nu at complex argument for nu = n/2 - 1 (integer or half-integer).
cplx bessel_j_complex(double nu, cplx z);

/// (2 pi)^{-n/2}: prefactor of the radial Fourier transform
/// f^(r) = c_n r^{1-n/2} int_0^inf f(k) J_{n/2-1}(kr) k^{n/2} dk.
double radial_fourier_prefactor(int n);

/// Gamma-function expression for the Riesz potential constant,
/// Gamma(n/2 - alpha) / (4^alpha pi^{n/2} Gamma(alpha)).
double riesz_constant_gamma(const FracParams& params);

}  // namespace fracdisp
