#include "fracdisp/special_functions.hpp"

#include <cmath>
#include <limits>

#include "fracdisp/errors.hpp"

namespace fracdisp {

namespace {

constexpr cplx kI{0.0, 1.0};

bool is_half_integer(double nu) { return std::abs(nu - std::round(nu - 0.5) - 0.5) < 1e-14; }
bool is_integer(double nu) { return std::abs(nu - std::round(nu)) < 1e-14; }

// Power series, adequate for |z| <= 2.
cplx bessel_j_series(double nu, cplx z) {
  const cplx q = -0.25 * z * z;
  cplx term = std::pow(0.5 * z, nu) / std::tgamma(nu + 1.0);
  cplx sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Spherical Bessel j_m via closed forms, m >= -1, |z| >= 2.
cplx spherical_j(int m, cplx z) {
  cplx jm1 = std::cos(z) / z;  // j_{-1}
  cplx j0 = std::sin(z) / z;
  if (m == -1) return jm1;
  for (int k = 0; k < m; ++k) {
    const cplx next = (2.0 * k + 1.0) / z * j0 - jm1;
    jm1 = j0;
    j0 = next;
  }
  return j0;
}

// Bessel's integral for integer order, trapezoid over a full period.
cplx bessel_j_integer(int m, cplx z) {
  const int points = std::max(32, 2 * static_cast<int>(std::abs(z) + std::abs(z.imag())) + 40);
  cplx sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double phi = -kPi + 2.0 * kPi * k / points;
    sum += std::exp(kI * (m * phi - z * std::sin(phi)));
  }
  return sum / static_cast<double>(points);
}

}  // namespace

double bessel_j(double nu, double x) {
  require(nu >= -0.5 && x >= 0.0, "bessel_j: requires nu >= -1/2 and x >= 0");
  if (nu == -0.5) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
  }
  require(nu >= 0.0, "bessel_j: orders in (-1/2, 0) are not supported");
  if (nu == 0.0) return ::j0(x);
  if (nu == 1.0) return ::j1(x);
  if (nu == 0.5) return x == 0.0 ? 0.0 : std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  return std::cyl_bessel_j(nu, x);
}

double bessel_y(double nu, double x) {
  require(nu >= -0.5 && x > 0.0, "bessel_y: requires nu >= -1/2 and x > 0");
  if (nu == -0.5) return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  require(nu >= 0.0, "bessel_y: orders in (-1/2, 0) are not supported");
  if (nu == 0.0) return ::y0(x);
  if (nu == 1.0) return ::y1(x);
  if (nu == 0.5) return -std::sqrt(2.0 / (kPi * x)) * std::cos(x);
  return std::cyl_neumann(nu, x);
}

double bessel_k(double nu, double x) {
  require(x > 0.0, "bessel_k: requires x > 0");
  nu = std::abs(nu);
  if (is_half_integer(nu)) {
    const int m = static_cast<int>(std::lround(nu - 0.5));
    // K_{m+1/2}(x) = sqrt(pi/2x) e^{-x} sum_k (m+k)!/(k!(m-k)!) (2x)^{-k}
    double sum = 0.0;
    double coeff = 1.0;
    for (int k = 0; k <= m; ++k) {
      if (k > 0) coeff *= static_cast<double>((m + k) * (m - k + 1)) / (k * 2.0 * x);
      sum += coeff;
    }
    return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
  }
  if (x > 700.0) return 0.0;
  return std::cyl_bessel_k(nu, x);
}

cplx hankel1(double nu, double x) { return {bessel_j(nu, x), bessel_y(nu, x)}; }
cplx hankel2(double nu, double x) { return {bessel_j(nu, x), -bessel_y(nu, x)}; }

namespace {
cplx hankel_large(double nu, cplx z, double sign) {
  // sign = +1 for H^(1), -1 for H^(2)
  const double mu = 4.0 * nu * nu;
  const cplx is = sign * kI;
  cplx sum = 1.0;
  double a = 1.0;
  cplx zpow = 1.0;
  cplx ipow = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    a *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k);
    if (a == 0.0) break;
    zpow /= z;
    ipow *= is;
    const cplx term = ipow * a * zpow;
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series: stop at the smallest term
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(2.0 / (kPi * z)) * std::exp(is * (z - 0.5 * nu * kPi - 0.25 * kPi)) * sum;
}
}  // namespace

cplx hankel1_large(double nu, cplx z) { return hankel_large(nu, z, 1.0); }
cplx hankel2_large(double nu, cplx z) { return hankel_large(nu, z, -1.0); }

cplx bessel_j_complex(double nu, cplx z) {
  if (std::abs(z) <= 2.0) return bessel_j_series(nu, z);
  if (is_half_integer(nu)) {
    const int m = static_cast<int>(std::lround(nu - 0.5));
    return std::sqrt(2.0 * z / kPi) * spherical_j(m, z);
  }
  if (is_integer(nu)) {
    if (std::abs(z) >= 40.0 && z.real() > 0.0)
      return 0.5 * (hankel1_large(nu, z) + hankel2_large(nu, z));
    return bessel_j_integer(static_cast<int>(std::lround(nu)), z);
  }
  throw ValidationError("bessel_j_complex: order must be an integer or half-integer");
}

double bessel_j_scaled(double nu, double x) {
  require(nu >= -0.5 && x >= 0.0, "bessel_j_scaled: requires nu >= -1/2 and x >= 0");
  if (x < 1.0) {
    const double q = -0.25 * x * x;
    double term = std::pow(0.5, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 40; ++k) {
      term *= q / (k * (k + nu));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::pow(x, -nu) * bessel_j(nu, x);
}

double radial_fourier_prefactor(int n) { return std::pow(2.0 * kPi, -0.5 * n); }

double riesz_constant_gamma(const FracParams& params) {
  const double a = params.alpha();
  const double n = params.n();
  require(2.0 * a < n, "Riesz constant requires 2 alpha < n");
  return std::tgamma(0.5 * n - a) / (std::pow(4.0, a) * std::pow(kPi, 0.5 * n) * std::tgamma(a));
}

}  // namespace fracdisp
