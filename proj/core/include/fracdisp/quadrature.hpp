#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fracdisp/params.hpp"

namespace fracdisp {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with `order` points (2 <= order <= 128).
const GaussRule& gauss_legendre(int order);

template <typename F>
auto integrate_gauss(F&& f, double a, double b, int order = 16) {
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  using R = decltype(f(mid));
  R sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return R(sum * half);
}

namespace detail {
struct KronrodTable {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <typename F>
auto kronrod15(F& f, double a, double b, double& err) {
  using K = KronrodTable;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  using R = decltype(f(c));
  const R fc = f(c);
  R gauss = fc * K::wg[3];
  R kron = fc * K::wgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * K::xgk[j];
    const R f1 = f(c - dx);
    const R f2 = f(c + dx);
    kron += K::wgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += K::wg[j / 2] * (f1 + f2);
  }
  err = std::abs(R((kron - gauss) * h));
  return R(kron * h);
}
}  // namespace detail

struct AdaptiveOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-300;
  int max_intervals = 20000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration on [a, b].
/// `converged` (optional) reports whether the tolerance was met.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {},
                        bool* converged = nullptr) {
  using R = decltype(f(a));
  struct Piece {
    double a, b;
    R value;
    double err;
  };
  std::vector<Piece> pieces;
  double e0 = 0.0;
  R v0 = detail::kronrod15(f, a, b, e0);
  pieces.push_back({a, b, v0, e0});
  R total = v0;
  double total_err = e0;
  while (true) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= tol) {
      if (converged) *converged = true;
      break;
    }
    if (static_cast<int>(pieces.size()) >= opt.max_intervals) {
      if (converged) *converged = false;
      break;
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < pieces.size(); ++i)
      if (pieces[i].err > pieces[worst].err) worst = i;
    const Piece p = pieces[worst];
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      if (converged) *converged = false;
      break;
    }
    double el = 0.0, er = 0.0;
    const R vl = detail::kronrod15(f, p.a, m, el);
    const R vr = detail::kronrod15(f, m, p.b, er);
    pieces[worst] = {p.a, m, vl, el};
    pieces.push_back({m, p.b, vr, er});
    total += vl + vr - p.value;
    total_err = std::max(0.0, total_err + el + er - p.err);
  }
  return total;
}

/// Adaptive integration over consecutive breakpoints.
template <typename F>
auto integrate_breakpoints(F&& f, std::span<const double> breaks,
                           const AdaptiveOptions& opt = {}, bool* converged = nullptr) {
  using R = decltype(f(breaks[0]));
  R sum{};
  bool all_ok = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    bool ok = true;
    sum += integrate_adaptive(f, breaks[i], breaks[i + 1], opt, &ok);
    all_ok = all_ok && ok;
  }
  if (converged) *converged = all_ok;
  return sum;
}

/// Geometric breakpoints a, a*q, a*q^2, ... up to b (inclusive).
std::vector<double> geometric_breaks(double a, double b, double ratio = 2.0);

/// Options for the radial Fourier transform of an algebraically decaying
/// symbol that is analytic for Re k >= analytic_from.
struct RadialFourierOptions {
  std::vector<double> breakpoints;  ///< interior points where f is not smooth
  double analytic_from = std::numeric_limits<double>::infinity();
  double support_end = std::numeric_limits<double>::infinity();
  double rel_tol = 1e-12;
};

/// c_n r^{1-n/2} int_0^inf f(k) J_{n/2-1}(k r) k^{n/2} dk.
///
/// The real axis is integrated up to A = max(analytic_from, 25/r); beyond A
/// J is split into Hankel functions and each half is integrated along the
/// vertical line Re k = A into the half plane where it decays. The symbol
/// must be analytic there and decay at least like |k|^{-1/2-n/2+...} so the
/// arcs vanish (Jordan's lemma). A finite support_end skips the tail.
cplx radial_fourier(const std::function<cplx(cplx)>& symbol, int n, double r,
                    const RadialFourierOptions& opt, bool* converged = nullptr);

}  // namespace fracdisp
