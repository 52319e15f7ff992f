#include "fracdisp/free_resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdisp/errors.hpp"
#include "fracdisp/quadrature.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

namespace {

constexpr cplx kI{0.0, 1.0};

bool is_integer(double a) { return std::abs(a - std::round(a)) < 1e-14; }

// int_0^inf s^{2a+n/2} K_nu(s rho) / (s^{4a} - 2 s^{2a} cos(pi a) + 1) ds
double remainder_integral(const FracParams& p, double rho) {
  const double a = p.alpha();
  const double nu = p.bessel_order();
  const double expo = 2.0 * a + 0.5 * p.n();
  const double c = std::cos(kPi * a);
  auto f = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double s2a = std::pow(s, 2.0 * a);
    return std::pow(s, expo) * bessel_k(nu, s * rho) / (s2a * s2a - 2.0 * s2a * c + 1.0);
  };
  const double upper = std::max(4.0, 60.0 / rho);
  std::vector<double> breaks{0.0};
  const double lo = std::min(1e-3, 1e-3 / rho);
  for (double b : geometric_breaks(lo, upper, 2.0)) breaks.push_back(b);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  AdaptiveOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  bool ok = true;
  const double value = integrate_breakpoints(f, breaks, opt, &ok);
  if (!ok) throw ConvergenceError("scaled_resolvent: remainder integral did not converge");
  return value;
}

void check_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "spectral parameter requires lambda > 0");
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::ResolventPlus: return "resolvent+";
    case KernelKind::ResolventMinus: return "resolvent-";
    case KernelKind::Difference: return "difference";
    case KernelKind::F: return "F";
    case KernelKind::FPlus: return "F+";
    case KernelKind::FMinus: return "F-";
    case KernelKind::Propagator: return "propagator";
  }
  return "unknown";
}

std::string to_string(Sign sign) { return sign == Sign::Plus ? "+" : "-"; }

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::FourAlphaAboveN: return "4alpha>n";
    case Regime::FourAlphaEqualsN: return "4alpha=n";
    case Regime::FourAlphaBelowN: return "4alpha<n";
  }
  return "unknown";
}

cplx scaled_resolvent(const FracParams& params, double rho, Sign sign) {
  const double a = params.alpha();
  require(a < 2.0, "scaled_resolvent: the contour route needs alpha < 2");
  require(std::isfinite(rho) && rho > 0.0, "scaled_resolvent: rho must be positive");
  const double nu = params.bessel_order();
  const int n = params.n();
  cplx bracket = (kPi * kI / (2.0 * a)) * hankel1(nu, rho);
  if (!is_integer(a))
    bracket += 2.0 * std::sin(kPi * a) / kPi * remainder_integral(params, rho);
  const cplx value = radial_fourier_prefactor(n) * std::pow(rho, 1.0 - 0.5 * n) * bracket;
  return sign == Sign::Plus ? value : std::conj(value);
}

cplx scaled_resolvent_offaxis(const FracParams& params, double rho, cplx w) {
  require(std::isfinite(rho) && rho > 0.0, "scaled_resolvent_offaxis: rho must be positive");
  require(w.imag() != 0.0, "scaled_resolvent_offaxis: needs Im w != 0");
  const double a = params.alpha();
  RadialFourierOptions opt;
  opt.analytic_from = std::max(2.0, 1.5 * std::abs(std::pow(w, 1.0 / (2.0 * a))));
  const double center = std::pow(w, 1.0 / (2.0 * a)).real();
  const double width = std::abs(w.imag()) / (2.0 * a);
  for (double m : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    opt.breakpoints.push_back(center - m * width);
    opt.breakpoints.push_back(center + m * width);
  }
  opt.breakpoints.push_back(center);
  opt.rel_tol = 1e-12;
  bool ok = true;
  const cplx value = radial_fourier(
      [&](cplx k) { return 1.0 / (std::pow(k, 2.0 * a) - w); }, params.n(), rho, opt, &ok);
  if (!ok) throw ConvergenceError("free resolvent quadrature did not converge");
  return value;
}

namespace {

double ladder_eps0(double rho) { return 0.02 / std::max(1.0, rho); }

template <typename Eval>
LadderValue run_ladder(double rho, Eval&& eval) {
  LadderValue out;
  out.eps0 = ladder_eps0(rho);
  for (int l = 0; l < 3; ++l) out.levels[l] = eval(out.eps0 / std::pow(2.0, l));
  out.value = (8.0 * out.levels[2] - 6.0 * out.levels[1] + out.levels[0]) / 3.0;
  return out;
}

}  // namespace

LadderValue scaled_resolvent_ladder(const FracParams& params, double rho, Sign sign) {
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  return run_ladder(rho, [&](double eps) {
    return scaled_resolvent_offaxis(params, rho, cplx(1.0, s * eps));
  });
}

cplx free_resolvent_value(const SpectralPoint& pt, const FracParams& params, double r,
                          ResolventMethod method) {
  check_lambda(pt.lambda);
  require(pt.epsilon >= 0.0, "spectral parameter requires epsilon >= 0");
  require(r > 0.0, "free resolvent kernel needs r > 0");
  const double a = params.alpha();
  const double scale = std::pow(pt.lambda, params.n() - 2.0 * a);
  const double rho = pt.lambda * r;
  if (pt.epsilon > 0.0) {
    const double s = pt.sign == Sign::Plus ? 1.0 : -1.0;
    const cplx w(1.0, s * pt.epsilon / std::pow(pt.lambda, 2.0 * a));
    return scale * scaled_resolvent_offaxis(params, rho, w);
  }
  if (method == ResolventMethod::LaplacianSplit) return scale * scaled_resolvent(params, rho, pt.sign);
  return scale * scaled_resolvent_ladder(params, rho, pt.sign).value;
}

KernelProfile free_resolvent_kernel(const SpectralPoint& pt, const FracParams& params,
                                    std::span<const double> radii, ResolventMethod method) {
  KernelProfile out;
  out.params = params;
  out.kind = pt.sign == Sign::Plus ? KernelKind::ResolventPlus : KernelKind::ResolventMinus;
  out.lambda = pt.lambda;
  out.epsilon = pt.epsilon;
  out.radii.assign(radii.begin(), radii.end());
  out.values.reserve(radii.size());
  for (double r : radii) out.values.push_back(free_resolvent_value(pt, params, r, method));
  return out;
}

KernelProfile extract_F(const KernelProfile& resolvent_plus) {
  require(resolvent_plus.kind == KernelKind::ResolventPlus,
          "extract_F: needs an outgoing (+) resolvent profile");
  require(resolvent_plus.epsilon == 0.0, "extract_F: needs a boundary value (epsilon = 0)");
  KernelProfile out = resolvent_plus;
  out.kind = KernelKind::F;
  const double expo = resolvent_plus.params.n() - 2.0 * resolvent_plus.params.alpha();
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    const double r = out.radii[i];
    out.values[i] *= std::pow(r, expo) * std::exp(-kI * (resolvent_plus.lambda * r));
  }
  return out;
}

cplx F_value(const FracParams& params, double rho) {
  return std::pow(rho, params.n() - 2.0 * params.alpha()) * std::exp(-kI * rho) *
         scaled_resolvent(params, rho, Sign::Plus);
}

cplx laplacian_jump(int n, double lambda, double r) {
  check_lambda(lambda);
  require(r >= 0.0, "laplacian_jump: r must be nonnegative");
  const double nu = 0.5 * n - 1.0;
  return 0.5 * kI * std::pow(lambda * lambda / (2.0 * kPi), nu) * bessel_j_scaled(nu, lambda * r);
}

cplx normalized_jump(const FracParams& params, double rho) {
  return laplacian_jump(params.n(), 1.0, rho) / params.alpha();
}

SpectralMeasureResult spectral_measure_kernel(double lambda, const FracParams& params,
                                              std::span<const double> radii, double tolerance) {
  check_lambda(lambda);
  require(!radii.empty(), "spectral_measure_kernel: no radii");
  const double a = params.alpha();
  const double scale = std::pow(lambda, params.n() - 2.0 * a);
  SpectralMeasureResult out;
  out.difference.params = params;
  out.difference.kind = KernelKind::Difference;
  out.difference.lambda = lambda;
  out.difference.radii.assign(radii.begin(), radii.end());

  // The jump symbol 2i eps / ((k^{2a}-1)^2 + eps^2) is integrated directly, so
  // the Green's-function singularity cancels before quadrature.
  std::vector<cplx> lap;
  for (double r : radii) {
    require(r > 0.0, "spectral_measure_kernel: radii must be positive");
    const double rho = lambda * r;
    const LadderValue lv = run_ladder(rho, [&](double eps) {
      RadialFourierOptions opt;
      opt.analytic_from = 2.0;
      const double width = eps / (2.0 * a);
      for (double m : {1.0, 4.0, 16.0, 64.0, 256.0}) {
        opt.breakpoints.push_back(1.0 - m * width);
        opt.breakpoints.push_back(1.0 + m * width);
      }
      opt.breakpoints.push_back(1.0);
      bool ok = true;
      const cplx v = radial_fourier(
          [&](cplx k) {
            const cplx d = std::pow(k, 2.0 * a) - 1.0;
            return 2.0 * kI * eps / (d * d + eps * eps);
          },
          params.n(), rho, opt, &ok);
      if (!ok) throw ConvergenceError("spectral_measure_kernel: jump quadrature did not converge");
      return v;
    });
    out.difference.values.push_back(scale * lv.value);
    lap.push_back(std::pow(lambda, 2.0 - 2.0 * a) * laplacian_jump(params.n(), lambda, r));
  }

  double num = 0.0, den = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < lap.size(); ++i) {
    num += (std::conj(lap[i]) * out.difference.values[i]).real();
    den += std::norm(lap[i]);
    peak = std::max(peak, std::abs(out.difference.values[i]));
  }
  require(den > 0.0, "spectral_measure_kernel: degenerate closed form");
  out.c_numerical = num / den;
  for (std::size_t i = 0; i < lap.size(); ++i) {
    out.closed_form.push_back(out.c_numerical * lap[i]);
    out.max_relative_deviation =
        std::max(out.max_relative_deviation,
                 std::abs(out.closed_form[i] - out.difference.values[i]) / peak);
  }
  if (!(out.max_relative_deviation <= tolerance))
    throw ConvergenceError("spectral_measure_kernel: routes disagree, relative deviation " +
                           std::to_string(out.max_relative_deviation));
  return out;
}

std::pair<cplx, cplx> extract_Fpm(double rho, const FracParams& params) {
  require(std::isfinite(rho) && rho > 0.0, "extract_Fpm: rho must be positive");
  const double nu = params.bessel_order();
  const CutoffSpec blend{1.0, 2.0};
  const double b = blend.chi(rho);
  const cplx e_minus = std::exp(-kI * rho);
  const cplx e_plus = std::exp(kI * rho);
  cplx fp = 0.0, fm = 0.0;
  if (b > 0.0) {
    const cplx half = 0.5 * normalized_jump(params, rho);
    fp += b * e_minus * half;
    fm += b * e_plus * half;
  }
  if (b < 1.0) {
    const cplx pre =
        kI / (4.0 * params.alpha()) * std::pow(2.0 * kPi, -nu) * std::pow(rho, -nu);
    fp += (1.0 - b) * pre * hankel1(nu, rho) * e_minus;
    fm += (1.0 - b) * pre * hankel2(nu, rho) * e_plus;
  }
  return {fp, fm};
}

namespace {

cplx amplitude(AmplitudeKind kind, const FracParams& p, double rho) {
  switch (kind) {
    case AmplitudeKind::F: return F_value(p, rho);
    case AmplitudeKind::FPlus: return extract_Fpm(rho, p).first;
    case AmplitudeKind::FMinus: return extract_Fpm(rho, p).second;
  }
  return 0.0;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

struct RatioSample {
  double ratio = 0.0;
  double small_ratio = 0.0;
  bool noisy = false;
};

// rho^N d^N/drho^N of the amplitude by a central difference of order N; at
// fixed r this is lambda^N d^N/dlambda^N of F(lambda r).
RatioSample ratio_at(AmplitudeKind kind, int N, const FracParams& p, double rho, double rel_step) {
  const double h = rel_step * rho;
  cplx d = 0.0;
  double mag = 0.0;
  for (int k = 0; k <= N; ++k) {
    const cplx f = amplitude(kind, p, rho + (0.5 * N - k) * h);
    const double c = (k % 2 == 0 ? 1.0 : -1.0) * binomial(N, k);
    d += c * f;
    mag = std::max(mag, std::abs(f));
  }
  const double scaled = std::abs(d) / std::pow(rel_step, N);
  const double noise = 1e-11 * mag * std::pow(2.0, N) / std::pow(rel_step, N);
  const double bracket = std::sqrt(1.0 + rho * rho);
  const double n = p.n();
  const double a = p.alpha();
  RatioSample out;
  if (kind == AmplitudeKind::F) {
    out.ratio = scaled / std::pow(bracket, 0.5 * (n + 1.0) - 2.0 * a);
    const double m = std::min({1.0, n - 2.0 * a, 2.0 * a - 0.01});
    out.small_ratio = out.ratio / std::pow(rho, m);
  } else {
    out.ratio = scaled * std::pow(bracket, 0.5 * (n - 1.0));
    out.small_ratio = out.ratio / rho;
  }
  out.noisy = N > 0 && noise > 1e-2 * std::max(scaled, 1e-300) && noise > 1e-8 * mag;
  return out;
}

}  // namespace

BoundReport verify_derivative_bounds(AmplitudeKind kind, int N, const FracParams& params,
                                     const BoundSampling& sampling) {
  const double n = params.n();
  const double a = params.alpha();
  require(N >= 0 && N <= 0.5 * (n + 1.0 + 4.0 * a),
          "verify_derivative_bounds: N must satisfy 0 <= N <= (n+1+4 alpha)/2");
  require(sampling.rho_min > 0.0 && sampling.rho_max > sampling.rho_min,
          "verify_derivative_bounds: invalid rho range");
  require(sampling.samples_per_decade >= 2, "verify_derivative_bounds: too few samples");
  require(sampling.relative_step > 0.0 && sampling.relative_step <= 1e-2,
          "verify_derivative_bounds: step must be at most rho * 1e-2");

  BoundReport rep;
  rep.derivative_order = N;
  const double decades = std::log10(sampling.rho_max / sampling.rho_min);
  for (int level = 0; level < 2; ++level) {
    const int per = sampling.samples_per_decade << level;
    const int count = static_cast<int>(std::ceil(decades * per)) + 1;
    double sup = 0.0, small_sup = 0.0, worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const double rho = sampling.rho_min * std::pow(10.0, decades * i / (count - 1));
      const RatioSample s = ratio_at(kind, N, params, rho, sampling.relative_step);
      if (s.noisy && level == 1)
        rep.failures.push_back("finite-difference noise floor exceeded at rho=" +
                               std::to_string(rho));
      if (!std::isfinite(s.ratio)) {
        rep.failures.push_back("non-finite ratio at rho=" + std::to_string(rho));
        continue;
      }
      if (s.ratio > sup) {
        sup = s.ratio;
        worst = rho;
      }
      if (N >= 1 && rho <= 1.0) small_sup = std::max(small_sup, s.small_ratio);
    }
    if (level == 0) {
      rep.sup_coarse = sup;
      rep.small_sup_coarse = small_sup;
    } else {
      rep.sup_fine = sup;
      rep.small_sup_fine = small_sup;
      rep.worst_rho = worst;
    }
  }
  auto drift = [](double c, double f) { return f > 0.0 ? std::abs(f - c) / f : 0.0; };
  rep.drift = drift(rep.sup_coarse, rep.sup_fine);
  rep.small_drift = drift(rep.small_sup_coarse, rep.small_sup_fine);
  rep.pass = rep.failures.empty() && std::isfinite(rep.sup_fine) && rep.drift < 0.1 &&
             (N == 0 || (std::isfinite(rep.small_sup_fine) && rep.small_drift < 0.1));
  return rep;
}

Regime low_energy_regime(const FracParams& params) {
  const double d = 4.0 * params.alpha() - params.n();
  if (std::abs(d) < 1e-12) return Regime::FourAlphaEqualsN;
  return d > 0.0 ? Regime::FourAlphaAboveN : Regime::FourAlphaBelowN;
}

ExpansionError low_energy_error(double lambda, double r, const FracParams& params) {
  require(lambda > 0.0 && lambda < 1.0, "low_energy_error: requires 0 < lambda < 1");
  require(r > 0.0, "low_energy_error: r must be positive");
  const RieszKernel riesz = riesz_constant(params);
  ExpansionError out;
  out.lambda = lambda;
  out.r = r;
  out.regime = low_energy_regime(params);
  const double n = params.n();
  const double a = params.alpha();
  const cplx R = std::pow(lambda, n - 2.0 * a) * scaled_resolvent(params, lambda * r, Sign::Plus);
  out.E_value = R - riesz(r);
  const double base = std::pow(lambda, n - 2.0 * a);
  switch (out.regime) {
    case Regime::FourAlphaAboveN: out.predicted_bound = base; break;
    case Regime::FourAlphaEqualsN:
      out.predicted_bound = base * (1.0 + std::max(0.0, -std::log(lambda * r)));
      break;
    case Regime::FourAlphaBelowN:
      out.predicted_bound = base + std::pow(lambda, 2.0 * a) * std::pow(r, 4.0 * a - n);
      break;
  }
  return out;
}

double RieszKernel::operator()(double r) const { return C_alpha * std::pow(r, exponent); }

RieszKernel riesz_constant(const FracParams& params) {
  require(params.threshold_regular_free(), "riesz_constant: requires 2 alpha < n");
  const double n = params.n();
  const double a = params.alpha();
  constexpr double lambda = 1e-10;
  RieszKernel out;
  out.exponent = 2.0 * a - n;
  out.gamma_value = riesz_constant_gamma(params);
  std::vector<double> values;
  for (double r : {0.5, 1.0, 2.0}) {
    const double rho = lambda * r;
    values.push_back(std::pow(rho, n - 2.0 * a) * scaled_resolvent(params, rho).real());
  }
  double mean = 0.0;
  for (double v : values) mean += v / values.size();
  for (double v : values)
    out.cross_radius_spread = std::max(out.cross_radius_spread, std::abs(v - mean) / mean);
  if (!(out.cross_radius_spread <= 1e-4))
    throw ConvergenceError("riesz_constant: inconsistent across radii (spread " +
                           std::to_string(out.cross_radius_spread) + ")");
  out.C_alpha = mean;
  return out;
}

}  // namespace fracdisp
