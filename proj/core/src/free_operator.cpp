#include "fracdisp/free_operator.hpp"

#include <algorithm>
#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/quadrature.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

namespace {

constexpr cplx kI{0.0, 1.0};

// z^{-nu} J_nu(z), finite at z = 0.
cplx bessel_j_scaled_complex(double nu, cplx z) {
  if (std::abs(z) < 2.0) {
    const cplx q = -0.25 * z * z;
    cplx term = std::pow(0.5, nu) / std::tgamma(nu + 1.0);
    cplx sum = term;
    for (int k = 1; k < 60; ++k) {
      term *= q / (k * (k + nu));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::pow(z, -nu) * bessel_j_complex(nu, z);
}

// Largest log-growth of |e^{i k^{2a}} J(k rho)| along the ray k = s e^{i theta}.
double ray_growth(double a, double rho, double theta) {
  if (rho == 0.0) return 0.0;
  const double num = rho * std::sin(theta);
  const double den = 2.0 * a * std::sin(2.0 * a * theta);
  const double s = std::pow(num / den, 1.0 / (2.0 * a - 1.0));
  return s * num * (1.0 - 1.0 / (2.0 * a));
}

double choose_angle(double a, double rho, double max_growth) {
  double hi = kPi / (4.0 * a);
  if (ray_growth(a, rho, hi) <= max_growth) return hi;
  double lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ray_growth(a, rho, mid) <= max_growth ? lo : hi) = mid;
  }
  return lo;
}

cplx ray_integral(const FracParams& p, double gamma, double rho, double theta) {
  const double a = p.alpha();
  const double nu = p.bessel_order();
  const cplx dir = std::exp(kI * theta);
  const double decay = std::sin(2.0 * a * theta);
  const double grow = rho * std::sin(theta);
  auto log_mag = [&](double s) {
    return -std::pow(s, 2.0 * a) * decay + s * grow + (gamma - 1.0) * std::log(s);
  };
  double s_end = 1.0;
  while (log_mag(s_end) > -45.0 || s_end < 2.0) {
    s_end *= 1.25;
    if (s_end > 2e5)
      throw ConvergenceError("propagator: rho too large for the rotated-ray quadrature");
  }

  std::vector<double> breaks{0.0};
  for (double b : geometric_breaks(std::min(1e-3, 1e-3 / std::max(rho, 1e-300)), 1.0, 2.0))
    breaks.push_back(b);
  double s = 1.0;
  while (s < s_end) {
    breaks.push_back(s);
    const double rate = 2.0 * a * std::pow(s, 2.0 * a - 1.0) + rho;
    s += std::min(s, 2.0 * kPi / rate);
  }
  breaks.push_back(s_end);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  AdaptiveOptions opt;
  opt.rel_tol = 1e-11;
  bool ok = true;
  const cplx v = integrate_breakpoints(
      [&](double s) -> cplx {
        if (s <= 0.0) return 0.0;
        const cplx k = s * dir;
        return std::exp(kI * std::pow(k, 2.0 * a)) * std::pow(k, gamma - 1.0) *
               bessel_j_scaled_complex(nu, k * rho);
      },
      breaks, opt, &ok);
  if (!ok) throw ConvergenceError("propagator: ray quadrature did not converge");
  return radial_fourier_prefactor(p.n()) * dir * v;
}

}  // namespace

double symbol(double xi_norm, const FracParams& params) {
  require(xi_norm >= 0.0, "symbol: |xi| must be nonnegative");
  return std::pow(xi_norm, 2.0 * params.alpha());
}

void PropagatorSpec::validate() const {
  require(t != 0.0 && std::isfinite(t), "propagator: t must be nonzero");
  require(params.alpha() > 0.5, "propagator: requires alpha > 1/2");
  const double g = effective_gamma();
  const double n = params.n();
  if (params.alpha() < 1.0)
    require((g > 0.0 && g <= n * params.alpha() + 1e-12) || g == n,
            "propagator: gamma must lie in (0, n alpha] or equal n when alpha < 1");
  else
    require(g > 0.0 && g <= n, "propagator: gamma must lie in (0, n]");
  for (double r : r_samples) require(r >= 0.0, "propagator: radii must be nonnegative");
}

cplx propagator_unit(const FracParams& params, double gamma, double rho, bool positive_time) {
  require(params.alpha() > 0.5, "propagator: requires alpha > 1/2");
  require(rho >= 0.0, "propagator: rho must be nonnegative");
  const double theta = choose_angle(params.alpha(), rho, 3.0);
  const cplx v = ray_integral(params, gamma, rho, theta);
  return positive_time ? v : std::conj(v);
}

KernelProfile free_propagator_kernel(const PropagatorSpec& spec) {
  spec.validate();
  const FracParams& p = spec.params;
  const double a = p.alpha();
  const double g = spec.effective_gamma();
  const double at = std::abs(spec.t);
  const double amp = std::pow(at, -g / (2.0 * a));
  const double rscale = std::pow(at, -1.0 / (2.0 * a));
  KernelProfile out;
  out.params = p;
  out.kind = KernelKind::Propagator;
  out.t = spec.t;
  out.gamma = g;
  out.radii = spec.r_samples;
  for (double r : spec.r_samples) {
    const double rho = r * rscale;
    const double theta = choose_angle(a, rho, 3.0);
    const cplx v1 = ray_integral(p, g, rho, theta);
    const cplx v2 = ray_integral(p, g, rho, 0.7 * theta);
    if (std::abs(v1 - v2) > 1e-4 * std::abs(v1) + 1e-300)
      throw ConvergenceError("propagator: rotation angles disagree at r=" + std::to_string(r));
    out.values.push_back(amp * (spec.t > 0.0 ? v1 : std::conj(v1)));
  }
  return out;
}

double propagator_sup_norm(const PropagatorSpec& spec) {
  require(!spec.r_samples.empty(), "propagator_sup_norm: no radii");
  const KernelProfile k = free_propagator_kernel(spec);
  double sup = 0.0;
  for (const cplx& v : k.values) sup = std::max(sup, std::abs(v));
  return sup;
}

}  // namespace fracdisp
