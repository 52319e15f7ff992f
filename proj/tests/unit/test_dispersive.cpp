#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numeric>

#include "fracdisp/dispersive.hpp"
#include "fracdisp/errors.hpp"
#include "fracdisp/free_operator.hpp"

using namespace fracdisp;

namespace {

// Kernel of e^{it(-Delta)} in three dimensions.
cplx heat3(double t, double r) {
  return std::pow(cplx(0.0, -4.0 * kPi * t), -1.5) * std::exp(cplx(0.0, -r * r / (4.0 * t)));
}

std::vector<std::size_t> all_points(const SpatialGrid& g) {
  std::vector<std::size_t> v(g.size());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

const PotentialSpec kMildWell{PotentialKind::Bump, -0.5, 1.0, 10.0};

}  // namespace

TEST(FreeStone, ClassicalThreeDimensional) {
  const FracParams p(1.0, 3);
  for (double t : {10.0, 40.0})
    for (double rho : {0.0, 0.5, 1.5, 3.0}) {
      const double r = rho * std::sqrt(t);
      const cplx ref = heat3(t, r);
      EXPECT_LT(std::abs(free_stone_kernel(t, r, p, {}) - ref), 1e-3 * std::abs(ref))
          << "t=" << t << " r=" << r;
    }
}

TEST(FreeStone, MatchesFrequencyRepresentation) {
  const FracParams p(1.25, 3);
  for (double t : {10.0, 50.0})
    for (double rho : {0.0, 0.7, 2.0}) {
      const double r = rho * std::pow(t, 0.4);
      const cplx ref = std::pow(t, -1.2) * propagator_unit(p, 3.0, rho, true);
      EXPECT_LT(std::abs(free_stone_kernel(t, r, p, {}) - ref), 1e-3 * std::abs(ref))
          << "t=" << t << " rho=" << rho;
    }
}

TEST(FreeStone, BandsAddUp) {
  const FracParams p(0.75, 2);
  StoneOptions opt;
  opt.smoothing = true;
  for (double r : {0.0, 2.0, 7.0}) {
    const cplx all = free_stone_kernel(20.0, r, p, opt);
    const cplx split = free_stone_kernel(20.0, r, p, opt, EnergyBand::Low) +
                       free_stone_kernel(20.0, r, p, opt, EnergyBand::High);
    EXPECT_LT(std::abs(all - split), 1e-5 * std::abs(all));
  }
}

TEST(FreeStone, TimeReversal) {
  const FracParams p(1.25, 3);
  for (double r : {0.0, 1.0, 5.0})
    EXPECT_EQ(free_stone_kernel(-15.0, r, p, {}), std::conj(free_stone_kernel(15.0, r, p, {})));
}

TEST(FreeStone, Validation) {
  StoneOptions smooth;
  smooth.smoothing = true;
  EXPECT_THROW(free_stone_kernel(1.0, 1.0, FracParams(1.0, 3), smooth), ValidationError);
  EXPECT_THROW(free_stone_kernel(1.0, 1.0, FracParams(1.25, 2), smooth), ValidationError);
  EXPECT_THROW(free_stone_kernel(0.0, 1.0, FracParams(1.0, 3), {}), ValidationError);
  EXPECT_THROW(free_stone_kernel(1.0, -1.0, FracParams(1.0, 3), {}), ValidationError);
  const SpatialGrid g = make_grid(3, 4.0, 16, GridMode::Radial);
  EXPECT_THROW(EigenbasisEvolver(FracParams(1.0, 3), kMildWell, g, true), ValidationError);
}

TEST(Target, Values) {
  EXPECT_DOUBLE_EQ(dispersive_target(FracParams(1.25, 3), false), 1.2);
  EXPECT_DOUBLE_EQ(dispersive_target(FracParams(1.0, 3), false), 1.5);
  EXPECT_DOUBLE_EQ(dispersive_target(FracParams(1.0, 2), false), 1.0);
  EXPECT_DOUBLE_EQ(dispersive_target(FracParams(0.75, 2), true), 1.0);
}

TEST(SupPoints, BufferedAndColumns) {
  const SpatialGrid g = make_grid(2, 6.0, 16, GridMode::FullTensor);
  const auto buf = buffered_points(g);
  ASSERT_FALSE(buf.empty());
  for (std::size_t i : buf) EXPECT_LE(g.norm(i), 3.0 + 1e-12);
  const auto cols = sup_columns(g, 3);
  ASSERT_EQ(cols.size(), 3u);
  EXPECT_EQ(g.norm(cols[0]), 0.0);
  for (std::size_t c : cols) EXPECT_NE(std::find(buf.begin(), buf.end(), c), buf.end());
  EXPECT_THROW(buffered_points(g, 0.0), ValidationError);
}

TEST(Eigenbasis, FreeIdentityAtTimeZero) {
  // Torus: sum over nonzero modes of psi_j(x) psi_j(y) = delta_xy / w - 1/|Omega|.
  const SpatialGrid g = make_grid(2, 4.0, 16, GridMode::FullTensor);
  const PotentialSpec zero{PotentialKind::Bump, 0.0, 1.0, 10.0};
  const EigenbasisEvolver ev(FracParams(0.75, 2), zero, g, false);
  const auto all = all_points(g);
  const EvolutionKernel k = ev.kernel(0.0, all, all);
  const double w = g.weights()[0];
  const double vol = g.domain_measure();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double ref = (i == j ? 1.0 / w : 0.0) - 1.0 / vol;
      worst = std::max(worst, std::abs(k.values(i, j) - ref));
    }
  EXPECT_LT(worst, 1e-9 / w);
}

TEST(Eigenbasis, HermitianAtTimeZeroAndTimeReversal) {
  const SpatialGrid g = make_grid(2, 6.0, 16, GridMode::FullTensor);
  const EigenbasisEvolver ev(FracParams(0.75, 2), kMildWell, g, true);
  const auto all = all_points(g);
  const EvolutionKernel k0 = ev.kernel(0.0, all, all);
  EXPECT_LT((k0.values - k0.values.adjoint()).cwiseAbs().maxCoeff(), 1e-10 * k0.sup());
  const EvolutionKernel kp = ev.kernel(3.0, all, all);
  const EvolutionKernel km = ev.kernel(-3.0, all, all);
  EXPECT_LT((km.values - kp.values.conjugate()).cwiseAbs().maxCoeff(), 1e-12 * kp.sup());
}

TEST(Eigenbasis, ColumnNormsPreserved) {
  const SpatialGrid g = make_grid(2, 6.0, 16, GridMode::FullTensor);
  const EigenbasisEvolver ev(FracParams(0.75, 2), kMildWell, g, false);
  const auto all = all_points(g);
  const std::vector<std::size_t> cols = sup_columns(g, 3);
  auto norms = [&](double t) {
    const EvolutionKernel k = ev.kernel(t, all, cols);
    std::vector<double> out;
    for (Eigen::Index b = 0; b < k.values.cols(); ++b) {
      double s = 0.0;
      for (std::size_t a = 0; a < all.size(); ++a) s += g.weights()[a] * std::norm(k.values(a, b));
      out.push_back(std::sqrt(s));
    }
    return out;
  };
  const auto n0 = norms(0.0);
  for (double t : {0.5, 5.0, 50.0}) {
    const auto nt = norms(t);
    for (std::size_t b = 0; b < n0.size(); ++b) EXPECT_NEAR(nt[b] / n0[b], 1.0, 1e-10);
  }
}

TEST(Stone, PerturbedTimeReversalAndFreeLimit) {
  const SpatialGrid g = make_grid(2, 6.0, 16, GridMode::FullTensor);
  const FracParams p(0.75, 2);
  const auto rows = sup_columns(g, 2);
  const StoneEvolver ev(p, kMildWell, g, rows, rows);
  const EvolutionKernel kp = ev.kernel(5.0);
  const EvolutionKernel km = ev.kernel(-5.0);
  EXPECT_EQ(km.values, kp.values.conjugate().eval());
  EXPECT_GT(ev.min_m_singular_value(), 0.0);
  const StoneEvolver ev0(p, {PotentialKind::Bump, 0.0, 1.0, 10.0}, g, rows, rows);
  const EvolutionKernel k0 = ev0.kernel(5.0);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < rows.size(); ++b)
      EXPECT_EQ(k0.values(a, b), free_stone_kernel(5.0, g.distance(rows[a], rows[b]), p, {}));
}

TEST(Stone, AgreesWithEigenbasisOnPerturbation) {
  // The potential-induced part of the kernel from both methods, same cutoff.
  const SpatialGrid g = make_grid(2, 6.0, 48, GridMode::FullTensor);
  const FracParams p(0.75, 2);
  const PotentialSpec zero{PotentialKind::Bump, 0.0, 1.0, 10.0};
  const auto rows = buffered_points(g, 0.25);
  const auto cols = sup_columns(g, 3, 0.25);
  StoneOptions opt;
  const StoneEvolver sv(p, kMildWell, g, rows, cols, opt);
  const StoneEvolver s0(p, zero, g, rows, cols, opt);
  const EigenbasisEvolver ev(p, kMildWell, g, false);
  const EigenbasisEvolver e0(p, zero, g, false);
  const double t = 0.25;
  const CMatrix ds = sv.kernel(t).values - s0.kernel(t).values;
  const CMatrix de = ev.kernel(t, rows, cols, opt.L).values - e0.kernel(t, rows, cols, opt.L).values;
  const double scale = de.cwiseAbs().maxCoeff();
  ASSERT_GT(scale, 0.0);
  EXPECT_LT((ds - de).cwiseAbs().maxCoeff() / scale, 0.05);
}

TEST(Experiment, FreeEigenbasisOnlySkipsStone) {
  DispersiveConfig cfg;
  cfg.alpha = 0.75;
  cfg.n = 2;
  cfg.potential = {PotentialKind::Bump, 0.0, 1.0, 10.0};
  cfg.points = 16;
  cfg.method = EvolutionMethod::Eigenbasis;
  cfg.t_min = 1.0;
  cfg.t_max = 10.0;
  const DispersiveReport rep = dispersive_experiment(cfg);
  EXPECT_TRUE(rep.errors.empty());
  EXPECT_EQ(rep.t.size(), 8u);
  EXPECT_NEAR(rep.t.front(), 1.0, 1e-14);
  EXPECT_NEAR(rep.t.back(), 10.0, 1e-12);
  EXPECT_TRUE(rep.sup_stone.empty());
  EXPECT_EQ(rep.sup_eigen.size(), 8u);
  EXPECT_TRUE(rep.fit_eigen.has_value());
  EXPECT_FALSE(rep.fit_stone.has_value());
  EXPECT_DOUBLE_EQ(rep.target, 2.0 / 1.5);
}

TEST(Experiment, StageFailurePreservesOtherResults) {
  // Perturbed Stone needs the full tensor; the eigenbasis stage still runs.
  DispersiveConfig cfg;
  cfg.alpha = 1.0;
  cfg.n = 3;
  cfg.potential = kMildWell;
  cfg.extent = 4.0;
  cfg.points = 32;
  cfg.mode = GridMode::Radial;
  cfg.method = EvolutionMethod::Both;
  cfg.t_min = 1.0;
  cfg.t_max = 10.0;
  const DispersiveReport rep = dispersive_experiment(cfg);
  ASSERT_FALSE(rep.errors.empty());
  EXPECT_EQ(rep.errors.front().rfind("stone:", 0), 0u) << rep.errors.front();
  EXPECT_TRUE(rep.sup_stone.empty());
  EXPECT_EQ(rep.sup_eigen.size(), rep.t.size());
  EXPECT_TRUE(rep.fit_eigen.has_value());
  EXPECT_TRUE(rep.cross_difference.empty());
}

TEST(Experiment, ThresholdProximityFlag) {
  DispersiveConfig cfg;
  cfg.alpha = 1.0;
  cfg.n = 3;
  cfg.extent = 2.0;
  cfg.points = 64;
  cfg.mode = GridMode::Radial;
  cfg.method = EvolutionMethod::Eigenbasis;
  cfg.t_min = 1.0;
  cfg.t_max = 10.0;
  cfg.potential = {PotentialKind::Bump, -6.3, 1.0, 10.0};
  const DispersiveReport near = dispersive_experiment(cfg);
  EXPECT_TRUE(near.threshold_flag) << near.threshold_sigma_min;
  cfg.potential.amplitude = -0.5;
  const DispersiveReport mild = dispersive_experiment(cfg);
  EXPECT_FALSE(mild.threshold_flag) << mild.threshold_sigma_min;
  EXPECT_LT(near.threshold_sigma_min, mild.threshold_sigma_min);
}

TEST(Experiment, RejectsBadWindow) {
  DispersiveConfig cfg;
  cfg.t_min = 10.0;
  cfg.t_max = 5.0;
  EXPECT_THROW(dispersive_experiment(cfg), ValidationError);
  cfg.t_max = 100.0;
  cfg.alpha = 1.0;
  cfg.smoothing = true;
  EXPECT_THROW(dispersive_experiment(cfg), ValidationError);
}
