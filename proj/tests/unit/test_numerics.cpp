#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracdisp/errors.hpp"
#include "fracdisp/grid.hpp"
#include "fracdisp/operator_norm.hpp"
#include "fracdisp/oscillatory.hpp"
#include "fracdisp/params.hpp"
#include "fracdisp/power_fit.hpp"
#include "fracdisp/quadrature.hpp"
#include "fracdisp/special_functions.hpp"

using namespace fracdisp;

namespace {

// Power series of J_nu, summed in long double.
double bessel_series(double nu, double x) {
  long double term = std::pow(0.5L * x, static_cast<long double>(nu)) / std::tgamma(nu + 1.0L);
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(0.25L * x * x) / (k * (k + nu));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST(Params, Flags) {
  EXPECT_TRUE(FracParams(1.0, 3).threshold_regular_free());
  EXPECT_FALSE(FracParams(1.5, 3).threshold_regular_free());
  EXPECT_TRUE(FracParams(1.25, 3).high_energy_ok());
  EXPECT_FALSE(FracParams(0.9, 3).high_energy_ok());
  EXPECT_TRUE(FracParams(0.75, 2).high_energy_ok());
  EXPECT_THROW(FracParams(0.0, 3), ValidationError);
  EXPECT_THROW(FracParams(1.0, 0), ValidationError);
}

TEST(Params, CutoffPartitionOfUnity) {
  const CutoffSpec chi;
  double prev = 1.0;
  for (int k = 0; k <= 400; ++k) {
    const double s = 3.0 * k / 400.0;
    const double c = chi.chi(s);
    EXPECT_EQ(c + chi.complement(s), 1.0);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_LE(c, prev + 1e-15);
    prev = c;
  }
  EXPECT_EQ(chi.chi(0.5), 1.0);
  EXPECT_EQ(chi.chi(2.5), 0.0);
  EXPECT_THROW((CutoffSpec{2.0, 1.0}.validate()), ValidationError);
}

TEST(Params, StationaryPointOnlyForNegativeTime) {
  PhaseSpec p{-5.0, 2.0, 1.0};
  ASSERT_TRUE(p.stationary_point().has_value());
  EXPECT_NEAR(*p.stationary_point(), std::pow(2.0 / 10.0, 1.0), 1e-14);
  EXPECT_NEAR(p.phase_derivative(*p.stationary_point()), 0.0, 1e-12);
  EXPECT_FALSE((PhaseSpec{5.0, 2.0, 1.0}.stationary_point().has_value()));
  EXPECT_FALSE((PhaseSpec{-5.0, 0.0, 1.0}.stationary_point().has_value()));
  PhaseSpec q{-3.0, 1.5, 1.25};
  const double l0 = std::pow(1.5 / (2.5 * 3.0), 1.0 / 1.5);
  EXPECT_NEAR(*q.stationary_point(), l0, 1e-13);
}

TEST(Grid, OneDimensionalSpacing) {
  const SpatialGrid g = make_grid(1, 10.0, 16, GridMode::FullTensor);
  EXPECT_DOUBLE_EQ(g.spacing(), 1.25);
  EXPECT_EQ(g.size(), 16u);
}

TEST(Grid, TwoDimensionalWeights) {
  const SpatialGrid g = make_grid(2, 10.0, 8, GridMode::FullTensor);
  EXPECT_EQ(g.size(), 64u);
  for (double w : g.weights()) EXPECT_DOUBLE_EQ(w, 2.5 * 2.5);
}

TEST(Grid, RadialShellWeights) {
  const SpatialGrid g = make_grid(3, 20.0, 256, GridMode::Radial);
  const double h = g.spacing();
  const auto r = g.radii();
  EXPECT_DOUBLE_EQ(r.front(), h / 2);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_NEAR(r[i] - r[i - 1], h, 1e-12);
  double sum = 0.0;
  for (double w : g.weights()) sum += w;
  // spacing = 2 extent / points, so the shells cover [0, 2 extent].
  EXPECT_NEAR(sum / (4.0 * kPi * std::pow(40.0, 3) / 3.0), 1.0, 1e-10);
  // Midpoint of the shell measure: 4 pi r^2 h up to O(h^3).
  EXPECT_NEAR(g.weights()[100] / (4.0 * kPi * r[100] * r[100] * h), 1.0, 1e-4);
}

TEST(Grid, WeightsSumToDomainMeasure) {
  for (auto [dim, mode] : {std::pair{1, GridMode::FullTensor}, std::pair{2, GridMode::FullTensor},
                           std::pair{3, GridMode::FullTensor}, std::pair{3, GridMode::Radial}}) {
    const SpatialGrid g = make_grid(dim, 3.0, 16, mode);
    double sum = 0.0;
    for (double w : g.weights()) sum += w;
    EXPECT_NEAR(sum / g.domain_measure(), 1.0, 1e-10);
  }
}

TEST(Grid, Rejections) {
  EXPECT_THROW(make_grid(3, 1.0, 66, GridMode::FullTensor), ValidationError);
  EXPECT_THROW(make_grid(2, 1.0, 7, GridMode::FullTensor), ValidationError);
  EXPECT_THROW(make_grid(4, 1.0, 8, GridMode::FullTensor), ValidationError);
  EXPECT_THROW(make_grid(2, -1.0, 8, GridMode::FullTensor), ValidationError);
  EXPECT_NO_THROW(make_grid(3, 1.0, 256, GridMode::Radial));
}

TEST(Bessel, Values) {
  EXPECT_DOUBLE_EQ(bessel_j(0.0, 0.0), 1.0);
  EXPECT_NEAR(bessel_j(0.5, kPi), 0.0, 1e-15);
  for (double x : {1e-4, 1e-3, 1e-2}) EXPECT_NEAR(bessel_j(1.0, x) / (x / 2), 1.0, x * x);
}

TEST(Bessel, AgainstSeriesOracle) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 0.25, 2.75})
    for (double x : {0.1, 0.7, 2.0, 5.5, 9.0, 14.0}) {
      const double ref = bessel_series(nu, x);
      EXPECT_NEAR(bessel_j(nu, x), ref, 1e-10 * std::max(1.0, std::abs(ref)))
          << "nu=" << nu << " x=" << x;
    }
}

TEST(Bessel, HalfIntegerClosedForms) {
  for (double x : {0.5, 3.0, 40.0, 700.0}) {
    const double s = std::sqrt(2.0 / (kPi * x));
    EXPECT_NEAR(bessel_j(0.5, x), s * std::sin(x), 1e-12);
    EXPECT_NEAR(bessel_y(0.5, x), -s * std::cos(x), 1e-12);
    EXPECT_NEAR(bessel_j(1.5, x), s * (std::sin(x) / x - std::cos(x)), 1e-12);
  }
}

TEST(Bessel, LargeArgumentWronskian) {
  // J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2 / (pi x).
  for (double nu : {0.0, 0.5, 1.0})
    for (double x : {20.0, 150.0, 999.0}) {
      const double w = bessel_j(nu + 1, x) * bessel_y(nu, x) - bessel_j(nu, x) * bessel_y(nu + 1, x);
      EXPECT_NEAR(w * kPi * x / 2.0, 1.0, 1e-9);
    }
}

TEST(Bessel, RieszConstantClassical) {
  EXPECT_NEAR(riesz_constant_gamma(FracParams(1.0, 3)), 1.0 / (4.0 * kPi), 1e-15);
}

TEST(OperatorNorm, IdentityAndRankOne) {
  const SpatialGrid g = make_grid(2, 2.0, 8, GridMode::FullTensor);
  const double w = g.weights()[0];
  const CMatrix id = CMatrix::Identity(g.size(), g.size());
  // Pointwise kernel I has quadrature operator w I.
  EXPECT_NEAR(weighted_operator_norm(id, g, 0.0), w, 1e-12);

  CVector f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f(i) = std::exp(-g.norm(i));
  const CMatrix k = f * f.transpose();
  double fn = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) fn += w * std::norm(f(i));
  EXPECT_NEAR(weighted_operator_norm(k, g, 0.0), fn, 1e-12 * fn);
}

TEST(OperatorNorm, MonotoneInSigma) {
  const SpatialGrid g = make_grid(2, 4.0, 12, GridMode::FullTensor);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CMatrix k(g.size(), g.size());
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j) k(i, j) = u(rng);
  double prev = weighted_operator_norm(k, g, 0.0);
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    const double cur = weighted_operator_norm(k, g, s);
    EXPECT_LE(cur, prev * (1 + 1e-12));
    prev = cur;
  }
}

TEST(OperatorNorm, RejectsNonFinite) {
  const SpatialGrid g = make_grid(1, 1.0, 8, GridMode::FullTensor);
  CMatrix k = CMatrix::Zero(8, 8);
  k(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(weighted_operator_norm(k, g, 1.0), ValidationError);
  EXPECT_THROW(weighted_operator_norm(CMatrix::Zero(8, 8), g, -1.0), ValidationError);
}

TEST(Oscillatory, ZeroAmplitude) {
  const auto r = oscillatory_integral({1.0, 1.0, 1.0}, [](double) { return cplx(0.0); }, 0.0, 3.0);
  EXPECT_EQ(r.value, cplx(0.0));
}

TEST(Oscillatory, ElementaryAntiderivative) {
  const auto r = oscillatory_integral({0.0, 1.0, 1.0}, [](double) { return cplx(1.0); }, 0.0, 1.0);
  const cplx ref = (std::exp(cplx(0, 1)) - 1.0) / cplx(0, 1);
  EXPECT_NEAR(std::abs(r.value - ref), 0.0, 1e-12);
}

TEST(Oscillatory, StationaryPhaseAgainstDenseSimpson) {
  const PhaseSpec ph{-5.0, 2.0, 1.0};
  auto amp = [](double l) { return cplx(std::exp(-(l - 0.3) * (l - 0.3) / 0.5)); };
  const auto r = oscillatory_integral(ph, amp, 0.0, 4.0);
  EXPECT_TRUE(r.stationary_refined);
  const int m = 1000000;
  const double h = 4.0 / m;
  cplx s = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double l = k * h;
    const double c = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += c * amp(l) * std::exp(cplx(0, ph.phase(l)));
  }
  s *= h / 3.0;
  EXPECT_LT(std::abs(r.value - s), 1e-8 * std::abs(s));
}

TEST(Oscillatory, ManyOscillationsWithoutStationaryPoint) {
  const PhaseSpec ph{40.0, 3.0, 1.25};
  auto amp = [](double l) { return cplx(1.0 / (1.0 + l * l), l); };
  const auto r = oscillatory_integral(ph, amp, 0.5, 3.0);
  const int m = 2000000;
  const double h = 2.5 / m;
  cplx s = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double l = 0.5 + k * h;
    const double c = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += c * amp(l) * std::exp(cplx(0, ph.phase(l)));
  }
  s *= h / 3.0;
  EXPECT_LT(std::abs(r.value - s), 1e-6 * std::abs(s));
}

TEST(Oscillatory, Deterministic) {
  const PhaseSpec ph{-2.0, 1.0, 0.75};
  auto amp = [](double l) { return cplx(std::sin(l), 1.0); };
  EXPECT_EQ(oscillatory_integral(ph, amp, 0.0, 5.0).value,
            oscillatory_integral(ph, amp, 0.0, 5.0).value);
}

TEST(Oscillatory, SampledAmplitudeInterpolatesCubics) {
  std::vector<double> x;
  std::vector<cplx> y;
  auto f = [](double s) { return cplx(s * s * s - 2 * s, 0.5 * s * s); };
  for (int k = 0; k < 12; ++k) {
    x.push_back(0.3 * k);
    y.push_back(f(0.3 * k));
  }
  const SampledAmplitude a(x, y);
  for (double s : {0.45, 1.01, 2.2}) EXPECT_NEAR(std::abs(a(s) - f(s)), 0.0, 1e-12);
}

TEST(PowerFit, ExactPowerLaw) {
  std::vector<double> t, y;
  for (int k = 0; k < 8; ++k) {
    t.push_back(10.0 * std::pow(10.0, k / 3.5));
    y.push_back(3.0 * std::pow(t.back(), -1.5));
  }
  const DecayFit f = decay_rate_fit(t, y);
  EXPECT_NEAR(f.exponent, 1.5, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-10);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(f.t_min, t.front());
  EXPECT_DOUBLE_EQ(f.t_max, t.back());
}

TEST(PowerFit, Rejections) {
  std::vector<double> t = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> y = {1, 1, 1, 0, 1, 1, 1, 1};
  EXPECT_THROW(decay_rate_fit(t, y), ValidationError);
  std::vector<double> t4 = {1, 2, 3, 4}, y4 = {1, 2, 3, 4};
  EXPECT_THROW(decay_rate_fit(t4, y4), ValidationError);
  EXPECT_LT(fit_power_law(t4, y4).exponent, 0.0);
}

TEST(Quadrature, GaussAndAdaptive) {
  EXPECT_NEAR(integrate_gauss([](double x) { return std::pow(x, 9); }, 0.0, 1.0, 5), 0.1, 1e-15);
  const double v = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(v, 2.0, 1e-9);
  const auto br = geometric_breaks(1e-3, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(br.front(), 1e-3);
  EXPECT_DOUBLE_EQ(br.back(), 1.0);
}

TEST(Quadrature, RadialFourierGaussian) {
  // FT of exp(-k^2/2) in n = 3 is (2 pi)^{-3/2} exp(-r^2/2) in angular units.
  RadialFourierOptions opt;
  opt.support_end = 40.0;
  for (double r : {0.3, 1.0, 2.5}) {
    const cplx v = radial_fourier([](cplx k) { return std::exp(-k * k / 2.0); }, 3, r, opt);
    EXPECT_NEAR(v.real(), std::pow(2 * kPi, -1.5) * std::exp(-r * r / 2), 1e-12);
  }
}
