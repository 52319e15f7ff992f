#include <gtest/gtest.h>

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/special_functions.hpp"
#include "fracdisp/symbol_decomposition.hpp"

using namespace fracdisp;

namespace {
const cplx I(0.0, 1.0);
}

TEST(FreeResolvent, ClassicalThreeDimensional) {
  const FracParams p(1.0, 3);
  for (double lambda : {0.5, 1.0, 2.0})
    for (double r : {0.1, 0.5, 2.0, 7.0, 20.0}) {
      const cplx ref = std::exp(I * lambda * r) / (4 * kPi * r);
      for (auto m : {ResolventMethod::EpsilonLadder, ResolventMethod::LaplacianSplit}) {
        const cplx v = free_resolvent_value({lambda, 0.0, Sign::Plus}, p, r, m);
        EXPECT_LT(std::abs(v - ref), 1e-6 * std::abs(ref)) << lambda << " " << r;
      }
    }
}

TEST(FreeResolvent, ClassicalOneDimensional) {
  const FracParams p(1.0, 1);
  for (double lambda : {0.5, 2.0})
    for (double r : {0.2, 1.0, 6.0}) {
      const cplx ref = I * std::exp(I * lambda * r) / (2 * lambda);
      const cplx v = free_resolvent_value({lambda, 0.0, Sign::Plus}, p, r);
      EXPECT_LT(std::abs(v - ref), 1e-6 * std::abs(ref));
    }
}

TEST(FreeResolvent, OffAxisMatchesClassical) {
  // 1/(|xi|^2 - (lambda^2 + i eps)) has kernel e^{i k r}/(4 pi r), k^2 = lambda^2 + i eps.
  const FracParams p(1.0, 3);
  const double lambda = 1.3, eps = 0.4, r = 2.2;
  const cplx k = std::sqrt(cplx(lambda * lambda, eps));
  const cplx v = free_resolvent_value({lambda, eps, Sign::Plus}, p, r);
  const cplx ref = std::exp(I * k * r) / (4 * kPi * r);
  EXPECT_LT(std::abs(v - ref), 1e-8 * std::abs(ref));
}

TEST(FreeResolvent, ConjugationSymmetry) {
  for (auto p : {FracParams(0.75, 2), FracParams(1.25, 3)})
    for (double rho : {0.05, 1.0, 13.0}) {
      const cplx plus = free_resolvent_value({1.0, 0.0, Sign::Plus}, p, rho);
      const cplx minus = free_resolvent_value({1.0, 0.0, Sign::Minus}, p, rho);
      EXPECT_LT(std::abs(minus - std::conj(plus)), 1e-12 * std::abs(plus));
    }
}

TEST(FreeResolvent, MethodAgreement) {
  for (auto p : {FracParams(0.75, 2), FracParams(1.25, 3)})
    for (double rho : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const double lambda = 1.5;
      const SpectralPoint pt{lambda, 0.0, Sign::Plus};
      const cplx a = free_resolvent_value(pt, p, rho / lambda, ResolventMethod::EpsilonLadder);
      const cplx b = free_resolvent_value(pt, p, rho / lambda, ResolventMethod::LaplacianSplit);
      EXPECT_LT(std::abs(a - b), 1e-5 * std::abs(b)) << p.alpha() << " rho=" << rho;
    }
}

TEST(ExtractF, ClassicalConstant) {
  const FracParams p(1.0, 3);
  const std::vector<double> radii = {0.3, 1.0, 4.0, 12.0};
  const KernelProfile F = extract_F(free_resolvent_kernel({2.0, 0.0, Sign::Plus}, p, radii));
  EXPECT_EQ(F.kind, KernelKind::F);
  for (const cplx& v : F.values) EXPECT_LT(std::abs(v - 1.0 / (4 * kPi)), 1e-7);
}

TEST(ExtractF, LargeArgumentGrowthExponent) {
  // (n+1)/2 - 2 alpha = 0 for alpha = 3/4, n = 2: |F| levels off.
  const FracParams p(0.75, 2);
  const double a = std::abs(F_value(p, 40.0)), b = std::abs(F_value(p, 160.0));
  EXPECT_NEAR(std::log(b / a) / std::log(4.0), 0.0, 0.05);
}

TEST(ExtractF, SmallArgumentRieszLimit) {
  // n > 4 alpha: F(rho) -> C_alpha rho^{n - 2 alpha} ... in the scaled form F(rho) -> C_alpha.
  const FracParams p(0.5, 3);
  const double c = riesz_constant_gamma(p);
  EXPECT_NEAR(std::abs(F_value(p, 1e-4)) / c, 1.0, 1e-2);
}

TEST(ExtractF, RejectsWrongKind) {
  KernelProfile k;
  k.kind = KernelKind::ResolventMinus;
  EXPECT_THROW(extract_F(k), ValidationError);
}

TEST(SpectralMeasure, ClassicalThreeDimensional) {
  const FracParams p(1.0, 3);
  const std::vector<double> radii = {0.1, 1.0, 5.0};
  const auto res = spectral_measure_kernel(1.5, p, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const cplx ref = 2.0 * I * std::sin(1.5 * radii[i]) / (4 * kPi * radii[i]);
    EXPECT_LT(std::abs(res.difference.values[i] - ref), 1e-6 * std::abs(ref));
  }
  EXPECT_NEAR(res.c_numerical, 1.0, 1e-6);
}

TEST(SpectralMeasure, ClassicalOneDimensional) {
  for (double lambda : {0.5, 2.0})
    for (double r : {0.0, 0.4, 3.0})
      EXPECT_LT(std::abs(laplacian_jump(1, lambda, r) - I * std::cos(lambda * r) / lambda), 1e-12);
}

TEST(SpectralMeasure, ConstantIsInverseAlpha) {
  for (auto p : {FracParams(0.75, 2), FracParams(1.25, 3)}) {
    const std::vector<double> radii = {0.2, 1.0, 3.0};
    const auto res = spectral_measure_kernel(1.0, p, radii);
    EXPECT_NEAR(res.c_numerical * p.alpha(), 1.0, 1e-5);
    EXPECT_LT(res.max_relative_deviation, 1e-5);
  }
}

TEST(SpectralMeasure, FiniteAtOrigin) {
  for (auto p : {FracParams(0.75, 2), FracParams(1.25, 3), FracParams(0.5, 3)}) {
    const cplx a = normalized_jump(p, 1e-6);
    const cplx b = normalized_jump(p, 1e-4);
    EXPECT_TRUE(std::isfinite(std::abs(a)));
    EXPECT_LT(std::abs(a - b), 1e-6 * std::max(1.0, std::abs(b)));
  }
}

TEST(Fpm, ClassicalHankelSplit) {
  const FracParams p(1.0, 3);
  for (double rho : {2.0, 5.0, 30.0}) {
    const auto [fp, fm] = extract_Fpm(rho, p);
    EXPECT_LT(std::abs(fp - 1.0 / (4 * kPi * rho)), 1e-9);
    EXPECT_LT(std::abs(fm + 1.0 / (4 * kPi * rho)), 1e-9);
  }
}

TEST(Fpm, ReconstructionIdentity) {
  for (auto p : {FracParams(0.75, 2), FracParams(1.25, 3)})
    for (double rho : {0.01, 0.5, 1.0, 1.3, 1.7, 2.0, 9.0}) {
      const auto [fp, fm] = extract_Fpm(rho, p);
      const cplx j = normalized_jump(p, rho);
      EXPECT_LT(std::abs(std::exp(I * rho) * fp + std::exp(-I * rho) * fm - j),
                1e-12 * std::max(1e-3, std::abs(j)));
    }
}

TEST(Fpm, BoundedNearZero) {
  const FracParams p(1.25, 3);
  for (double rho : {1e-4, 1e-3, 1e-2, 0.1}) {
    const auto [fp, fm] = extract_Fpm(rho, p);
    EXPECT_LT(std::abs(fp), 1.0);
    EXPECT_LT(std::abs(fm), 1.0);
  }
}

TEST(DerivativeBounds, ClassicalConstantPasses) {
  const BoundReport r = verify_derivative_bounds(AmplitudeKind::F, 0, FracParams(1.0, 3));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.sup_fine * 4 * kPi, 1.0, 1e-6);
}

TEST(DerivativeBounds, FpmFirstDerivative) {
  const BoundReport r = verify_derivative_bounds(AmplitudeKind::FPlus, 1, FracParams(1.25, 3));
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_TRUE(std::isfinite(r.small_sup_fine));
}

TEST(DerivativeBounds, RejectsOrderOutOfRange) {
  // (n + 1 + 4 alpha) / 2 = 3.5 for alpha = 3/4, n = 2.
  EXPECT_THROW(verify_derivative_bounds(AmplitudeKind::F, 4, FracParams(0.75, 2)), ValidationError);
}

TEST(LowEnergy, RegimeClassification) {
  EXPECT_EQ(low_energy_regime(FracParams(1.25, 3)), Regime::FourAlphaAboveN);
  EXPECT_EQ(low_energy_regime(FracParams(0.75, 3)), Regime::FourAlphaEqualsN);
  EXPECT_EQ(low_energy_regime(FracParams(0.5, 3)), Regime::FourAlphaBelowN);
  EXPECT_THROW(low_energy_error(1.0, 1.0, FracParams(1.25, 3)), ValidationError);
}

TEST(LowEnergy, ErrorVanishesAsLambdaShrinks) {
  const FracParams p(1.25, 3);
  double prev = 1e300;
  for (double lambda : {0.4, 0.1, 0.025, 0.00625}) {
    const double e = std::abs(low_energy_error(lambda, 1.0, p).E_value);
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(LowEnergy, ExponentAboveRegime) {
  const FracParams p(1.25, 3);
  const double a = std::abs(low_energy_error(0.01, 1.0, p).E_value);
  const double b = std::abs(low_energy_error(0.1, 1.0, p).E_value);
  EXPECT_NEAR(std::log(b / a) / std::log(10.0), 0.5, 0.1);
}

TEST(LowEnergy, BelowRegimeBoundHolds) {
  const FracParams p(0.5, 3);
  double worst = 0.0;
  for (double lambda : {0.05, 0.2, 0.5})
    for (double r : {0.1, 1.0, 5.0}) {
      const ExpansionError e = low_energy_error(lambda, r, p);
      EXPECT_EQ(e.regime, Regime::FourAlphaBelowN);
      worst = std::max(worst, std::abs(e.E_value) / e.predicted_bound);
    }
  EXPECT_LT(worst, 10.0);
}

TEST(Riesz, ClassicalAndGamma) {
  const RieszKernel k = riesz_constant(FracParams(1.0, 3));
  EXPECT_NEAR(k.C_alpha, 1.0 / (4 * kPi), 1e-7);
  EXPECT_LT(k.cross_radius_spread, 1e-4);
  const RieszKernel k5 = riesz_constant(FracParams(1.0, 5));
  EXPECT_NEAR(k5.C_alpha / k5.gamma_value, 1.0, 1e-5);
  const RieszKernel kf = riesz_constant(FracParams(0.75, 2));
  EXPECT_NEAR(kf.C_alpha / kf.gamma_value, 1.0, 1e-5);
  EXPECT_DOUBLE_EQ(kf.exponent, 1.5 - 2.0);
  EXPECT_THROW(riesz_constant(FracParams(1.5, 3)), ValidationError);
}

TEST(SymbolDecomposition, PartitionOfUnity) {
  const FracParams p(0.75, 2);
  std::vector<double> xi;
  for (int k = 0; k <= 60; ++k) xi.push_back(0.05 * k);
  const SymbolDecomposition d = symbol_decomposition(0.3, p, CutoffSpec{}, xi);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    EXPECT_LT(std::abs(d.h_ctr[i] + d.h_tail[i] + d.h_ann[i] - d.full[i]),
              1e-14 * std::abs(d.full[i]));
    if (xi[i] > 0.5) EXPECT_EQ(d.h_ctr[i], cplx(0.0));
    if (xi[i] < 2.0) EXPECT_EQ(d.h_tail[i], cplx(0.0));
    EXPECT_TRUE(std::isfinite(std::abs(d.J_ann[i])));
  }
  EXPECT_THROW(symbol_decomposition(kPi, p, CutoffSpec{}, xi), ValidationError);
}

TEST(SymbolDecomposition, AnnulusCorrectionTaylorLimit) {
  const double a = 0.75;
  const cplx z = std::exp(I * 0.2);
  // Smooth across the removable singularity at zeta = 1.
  const cplx at1 = annulus_correction(1.0, z, a);
  const cplx near = annulus_correction(1.0 + 1e-3, z, a);
  const cplx far = annulus_correction(1.0 + 0.2, z, a);
  EXPECT_TRUE(std::isfinite(std::abs(at1)));
  EXPECT_LT(std::abs(near - at1), 1e-2 * std::abs(at1 - far) + 1e-12);
  // Direct evaluation away from zeta = 1.
  const cplx zeta = 1.3;
  const cplx direct = 1.0 / (std::pow(zeta * z, 2 * a) - std::pow(z, 2 * a)) -
                      1.0 / (a * std::pow(z, 2 * a - 2) * (zeta * zeta * z * z - z * z));
  EXPECT_LT(std::abs(annulus_correction(zeta, z, a) - direct), 1e-12 * std::abs(direct));
}

TEST(SymbolDecomposition, TailBoundsPass) {
  const FracParams p(0.75, 2);
  BoundSampling s;
  s.samples_per_decade = 8;
  EXPECT_TRUE(tail_fourier_bound(TailPiece::Tail, 0, p, s).pass);
  EXPECT_TRUE(tail_fourier_bound(TailPiece::Center, 0, p, s).pass);
}

TEST(SymbolDecomposition, LeadingTailTermIsRiesz) {
  // The Riesz kernel C rho^{2 alpha - n} is the transform of |xi|^{-2 alpha}.
  const FracParams p(0.75, 2);
  const double c = riesz_constant_gamma(p);
  const RieszKernel k = riesz_constant(p);
  EXPECT_NEAR(k(2.0) / (c * std::pow(2.0, -0.5)), 1.0, 1e-5);
}
