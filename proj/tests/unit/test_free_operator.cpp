#include <gtest/gtest.h>

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/free_operator.hpp"

using namespace fracdisp;

namespace {

// Kernel of e^{it(-Delta)} in n dimensions under the angular-frequency
// convention f(x) = (2 pi)^{-n} int e^{i x xi} f^(xi) d xi.
cplx heat_oracle(int n, double t, double r) {
  const cplx a(0.0, -4.0 * kPi * t);
  return std::pow(a, -0.5 * n) * std::exp(cplx(0.0, -r * r / (4.0 * t)));
}

std::vector<double> scaled_radii(double t, double alpha, double rho_max, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k)
    r.push_back(rho_max * k / (count - 1) * std::pow(std::abs(t), 1.0 / (2.0 * alpha)));
  return r;
}

}  // namespace

TEST(Symbol, Values) {
  EXPECT_EQ(symbol(0.0, FracParams(0.75, 2)), 0.0);
  EXPECT_DOUBLE_EQ(symbol(1.0, FracParams(0.75, 2)), 1.0);
  EXPECT_NEAR(symbol(2.0, FracParams(1.25, 3)), std::pow(2.0, 2.5), 1e-14);
  EXPECT_THROW(symbol(-1.0, FracParams(1.0, 3)), ValidationError);
  double prev = 0.0;
  for (int k = 1; k < 50; ++k) {
    const double s = symbol(0.1 * k, FracParams(0.6, 2));
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(Propagator, ClassicalThreeDimensional) {
  PropagatorSpec spec{FracParams(1.0, 3), 2.0, std::nullopt, {0.0, 0.5, 1.0, 2.5, 4.0, 7.0}};
  const KernelProfile k = free_propagator_kernel(spec);
  for (std::size_t i = 0; i < k.radii.size(); ++i) {
    const cplx ref = heat_oracle(3, spec.t, k.radii[i]);
    EXPECT_LT(std::abs(k.values[i] - ref), 1e-6 * std::abs(ref)) << "r=" << k.radii[i];
  }
}

TEST(Propagator, ClassicalOneDimensionalModulus) {
  for (double t : {0.5, 3.0, -2.0}) {
    PropagatorSpec spec{FracParams(1.0, 1), t, std::nullopt, {0.0, 0.7, 2.0, 5.0}};
    const KernelProfile k = free_propagator_kernel(spec);
    for (const cplx& v : k.values)
      EXPECT_NEAR(std::abs(v) * std::sqrt(4 * kPi * std::abs(t)), 1.0, 1e-6);
  }
}

TEST(Propagator, TimeReversalConjugates) {
  const FracParams p(1.25, 3);
  for (double rho : {0.0, 0.8, 2.0})
    EXPECT_LT(std::abs(propagator_unit(p, 3.0, rho, false) - std::conj(propagator_unit(p, 3.0, rho, true))),
              1e-9);
}

TEST(Propagator, ScalingLaw) {
  // The unit-time profile is computed directly, the t-dependence by scaling;
  // check the scaling against a second direct evaluation at another time.
  const FracParams p(1.25, 3);
  const double t1 = 1.0, t2 = 7.0;
  for (double rho : {0.3, 1.1, 2.7}) {
    PropagatorSpec s1{p, t1, std::nullopt, {rho * std::pow(t1, 0.4)}};
    PropagatorSpec s2{p, t2, std::nullopt, {rho * std::pow(t2, 0.4)}};
    const cplx k1 = free_propagator_kernel(s1).values[0];
    const cplx k2 = free_propagator_kernel(s2).values[0];
    EXPECT_LT(std::abs(k2 * std::pow(t2, 1.2) - k1 * std::pow(t1, 1.2)), 1e-9 * std::abs(k1));
  }
}

TEST(Propagator, SupNormClassical) {
  for (double t : {10.0, 100.0, 1000.0}) {
    PropagatorSpec spec{FracParams(1.0, 3), t, std::nullopt, scaled_radii(t, 1.0, 4.0, 9)};
    EXPECT_NEAR(propagator_sup_norm(spec) * std::pow(4 * kPi * t, 1.5), 1.0, 1e-6);
  }
}

TEST(Propagator, DoublingTimeHalvesSupInTwoDimensions) {
  const FracParams p(1.0, 2);
  PropagatorSpec a{p, 20.0, std::nullopt, scaled_radii(20.0, 1.0, 3.0, 7)};
  PropagatorSpec b{p, 40.0, std::nullopt, scaled_radii(40.0, 1.0, 3.0, 7)};
  EXPECT_NEAR(propagator_sup_norm(a) / propagator_sup_norm(b), 2.0, 1e-6);
}

TEST(Propagator, SmoothedTwoDimensionalBounded) {
  const FracParams p(0.75, 2);
  double lo = 1e300, hi = 0.0;
  for (double t : {10.0, 100.0, 1000.0}) {
    PropagatorSpec spec{p, t, 1.5, scaled_radii(t, 0.75, 4.0, 9)};
    const double v = propagator_sup_norm(spec) * t;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_LT(hi / lo, 1.0 + 1e-6);
}

TEST(Propagator, WeakerSmoothingDecaysSlower) {
  const FracParams p(0.75, 2);
  auto exponent = [&](double gamma) {
    PropagatorSpec a{p, 10.0, gamma, scaled_radii(10.0, 0.75, 3.0, 7)};
    PropagatorSpec b{p, 1000.0, gamma, scaled_radii(1000.0, 0.75, 3.0, 7)};
    return std::log(propagator_sup_norm(a) / propagator_sup_norm(b)) / std::log(100.0);
  };
  EXPECT_NEAR(exponent(1.5), 1.0, 1e-6);
  EXPECT_LT(exponent(1.2), exponent(1.5) - 0.1);
}

TEST(Propagator, Validation) {
  EXPECT_THROW((PropagatorSpec{FracParams(0.75, 2), 1.0, 1.8, {0.0}}.validate()), ValidationError);
  EXPECT_THROW((PropagatorSpec{FracParams(1.0, 3), 0.0, std::nullopt, {0.0}}.validate()),
               ValidationError);
  EXPECT_NO_THROW((PropagatorSpec{FracParams(0.75, 2), 1.0, std::nullopt, {0.0}}.validate()));
}
