#include "fracdisp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>

#include "fracdisp/errors.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

namespace {

GaussRule build_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  require(order >= 2 && order <= 128, "gauss_legendre: order must be in [2, 128]");
  static std::array<std::unique_ptr<GaussRule>, 129> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache[order]) cache[order] = std::make_unique<GaussRule>(build_rule(order));
  return *cache[order];
}

std::vector<double> geometric_breaks(double a, double b, double ratio) {
  require(a > 0.0 && b > a && ratio > 1.0, "geometric_breaks: need 0 < a < b, ratio > 1");
  std::vector<double> out{a};
  while (out.back() * ratio < b) out.push_back(out.back() * ratio);
  out.push_back(b);
  return out;
}

cplx radial_fourier(const std::function<cplx(cplx)>& symbol, int n, double r,
                    const RadialFourierOptions& opt, bool* converged) {
  require(r > 0.0, "radial_fourier: r must be positive");
  const double nu = 0.5 * n - 1.0;
  const double half_n = 0.5 * n;
  const bool has_tail = !std::isfinite(opt.support_end);
  const double upper = has_tail ? std::max(opt.analytic_from, 25.0 / r) : opt.support_end;
  require(std::isfinite(upper), "radial_fourier: symbol needs finite support or analytic tail");

  std::vector<double> breaks{0.0};
  for (double b : opt.breakpoints)
    if (b > 0.0 && b < upper) breaks.push_back(b);
  const double half_period = kPi / r;
  for (double k = half_period; k < upper; k += half_period) breaks.push_back(k);
  breaks.push_back(upper);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto real_integrand = [&](double k) -> cplx {
    if (k == 0.0) return 0.0;
    return symbol(cplx(k, 0.0)) * bessel_j(nu, k * r) * std::pow(k, half_n);
  };
  // Absolute floor from a rough pass, so panels whose value nearly cancels
  // do not demand unattainable relative accuracy.
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double e = 0.0;
    scale += std::abs(detail::kronrod15(real_integrand, breaks[i], breaks[i + 1], e));
  }
  AdaptiveOptions aopt;
  aopt.rel_tol = opt.rel_tol;
  aopt.abs_tol = std::max(1e-300, 1e-2 * opt.rel_tol * scale / breaks.size());
  bool ok_real = true;
  const cplx real_part = integrate_breakpoints(real_integrand, breaks, aopt, &ok_real);

  cplx tail = 0.0;
  bool ok_tail = true;
  if (has_tail) {
    const double A = upper;
    std::vector<double> sb{0.0};
    for (double s = 0.5 / r; s < 45.0 / r; s *= 2.0) sb.push_back(s);
    sb.push_back(45.0 / r);
    bool ok1 = true, ok2 = true;
    const cplx up = integrate_breakpoints(
        [&](double s) -> cplx {
          const cplx k(A, s);
          return symbol(k) * hankel1_large(nu, k * r) * std::pow(k, half_n);
        },
        sb, aopt, &ok1);
    const cplx down = integrate_breakpoints(
        [&](double s) -> cplx {
          const cplx k(A, -s);
          return symbol(k) * hankel2_large(nu, k * r) * std::pow(k, half_n);
        },
        sb, aopt, &ok2);
    const cplx i(0.0, 1.0);
    tail = 0.5 * (i * up - i * down);
    ok_tail = ok1 && ok2;
  }
  if (converged) *converged = ok_real && ok_tail;
  return radial_fourier_prefactor(n) * std::pow(r, 1.0 - half_n) * (real_part + tail);
}

}  // namespace fracdisp
