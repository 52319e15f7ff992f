#include "fracdisp/symbol_decomposition.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/quadrature.hpp"

namespace fracdisp {

namespace {

// Generalized binomial coefficients binom(p, k), k = 0..count-1.
std::vector<double> binomials(double p, int count) {
  std::vector<double> c(count);
  c[0] = 1.0;
  for (int k = 1; k < count; ++k) c[k] = c[k - 1] * (p - k + 1) / k;
  return c;
}

}  // namespace

cplx annulus_correction(cplx zeta, cplx z, double alpha) {
  const cplx z2a = std::pow(z, 2.0 * alpha);
  const cplx u = zeta - 1.0;
  if (std::abs(u) < 0.05) {
    const std::vector<double> C = binomials(2.0 * alpha, 32);
    cplx num = alpha - C[2];
    cplx den = C[1];
    cplx up = 1.0;
    for (int k = 3; k < 32; ++k) {
      up *= u;
      num -= C[k] * up;
      den += C[k - 1] * up;
    }
    den += C[31] * up * u;
    return num / (alpha * z2a * den * (2.0 + u));
  }
  const cplx z2 = std::pow(zeta, 2.0 * alpha) - 1.0;
  const cplx q = zeta * zeta - 1.0;
  return (alpha * q - z2) / (alpha * z2a * z2 * q);
}

SymbolDecomposition symbol_decomposition(double arg_z, const FracParams& params,
                                         const CutoffSpec& cutoff, std::span<const double> xi) {
  cutoff.validate();
  const double a = params.alpha();
  require(arg_z > 0.0 && arg_z < kPi / (2.0 * a),
          "symbol_decomposition: requires 0 < arg z < pi/(2 alpha)");
  SymbolDecomposition out;
  out.z = std::polar(1.0, arg_z);
  const cplx z2a = std::pow(out.z, 2.0 * a);
  for (double x : xi) {
    require(x >= 0.0, "symbol_decomposition: |xi| must be nonnegative");
    const cplx full = 1.0 / (std::pow(x, 2.0 * a) - z2a);
    const double c_in = cutoff.chi(4.0 * x);
    const double c_out = cutoff.chi(0.5 * x);
    out.xi.push_back(x);
    out.full.push_back(full);
    out.h_ctr.push_back(c_in * full);
    out.h_tail.push_back((1.0 - c_out) * full);
    out.h_ann.push_back((c_out - c_in) * full);
    out.J_ann.push_back(annulus_correction(x / out.z, out.z, a));
  }
  return out;
}

double h_piece_transform(TailPiece piece, const FracParams& params, double rho,
                         const CutoffSpec& cutoff) {
  cutoff.validate();
  const double a = params.alpha();
  RadialFourierOptions opt;
  opt.rel_tol = 1e-12;
  std::function<cplx(cplx)> sym;
  if (piece == TailPiece::Center) {
    const double end = cutoff.outer / 4.0;
    opt.support_end = end;
    opt.breakpoints = {cutoff.inner / 4.0};
    sym = [&](cplx k) -> cplx {
      const double w = cutoff.chi(4.0 * k.real());
      if (w == 0.0) return 0.0;
      return w / (std::pow(k, 2.0 * a) - 1.0);
    };
  } else {
    opt.analytic_from = 2.0 * cutoff.outer;
    opt.breakpoints = {2.0 * cutoff.inner};
    sym = [&](cplx k) -> cplx {
      if (k.imag() != 0.0) return 1.0 / (std::pow(k, 2.0 * a) - 1.0);
      const double w = cutoff.complement(0.5 * k.real());
      if (w == 0.0) return 0.0;
      return w / (std::pow(k, 2.0 * a) - 1.0);
    };
  }
  bool ok = true;
  const cplx v = radial_fourier(sym, params.n(), rho, opt, &ok);
  if (!ok) throw ConvergenceError("h_piece_transform: quadrature did not converge");
  return v.real();
}

BoundReport tail_fourier_bound(TailPiece piece, int N, const FracParams& params,
                               const BoundSampling& sampling) {
  require(N >= 0, "tail_fourier_bound: N must be nonnegative");
  require(sampling.rho_min > 0.0 && sampling.rho_max > sampling.rho_min,
          "tail_fourier_bound: invalid rho range");
  require(sampling.relative_step > 0.0 && sampling.relative_step <= 1e-2,
          "tail_fourier_bound: step must be at most rho * 1e-2");
  const double n = params.n();
  const double a = params.alpha();
  BoundReport rep;
  rep.derivative_order = N;
  const double decades = std::log10(sampling.rho_max / sampling.rho_min);
  for (int level = 0; level < 2; ++level) {
    const int per = sampling.samples_per_decade << level;
    const int count = static_cast<int>(std::ceil(decades * per)) + 1;
    double sup = 0.0, worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const double rho = sampling.rho_min * std::pow(10.0, decades * i / (count - 1));
      const double h = sampling.relative_step * rho;
      double d = 0.0;
      double binom = 1.0;
      for (int k = 0; k <= N; ++k) {
        d += (k % 2 == 0 ? 1.0 : -1.0) * binom *
             h_piece_transform(piece, params, rho + (0.5 * N - k) * h);
        binom = binom * (N - k) / (k + 1);
      }
      d /= std::pow(h, N);
      const double bound = piece == TailPiece::Tail
                               ? std::pow(rho, 2.0 * a - n - N)
                               : std::pow(1.0 + rho * rho, 0.5 * (-n - 2.0 * a - N));
      const double ratio = std::abs(d) / bound;
      if (!std::isfinite(ratio)) {
        rep.failures.push_back("non-finite ratio at rho=" + std::to_string(rho));
        continue;
      }
      if (ratio > sup) {
        sup = ratio;
        worst = rho;
      }
    }
    (level == 0 ? rep.sup_coarse : rep.sup_fine) = sup;
    if (level == 1) rep.worst_rho = worst;
  }
  rep.drift = rep.sup_fine > 0.0 ? std::abs(rep.sup_fine - rep.sup_coarse) / rep.sup_fine : 0.0;
  rep.pass = rep.failures.empty() && std::isfinite(rep.sup_fine) && rep.drift < 0.1;
  return rep;
}

}  // namespace fracdisp
