#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/hamiltonian.hpp"

using namespace fracdisp;

namespace {

struct Setup {
  SpatialGrid grid;
  Potential pot;
};

Setup well2d(double amplitude, int points = 16) {
  const SpatialGrid g = make_grid(2, 6.0, points, GridMode::FullTensor);
  return {g, sample_potential(PotentialKind::GaussianWell, amplitude, 1.0, 10.0, g)};
}

}  // namespace

TEST(Hamiltonian, Hermitian) {
  const auto s = well2d(-3.0);
  const DiscreteHamiltonian h = discretize_hamiltonian(FracParams(0.75, 2), s.pot, s.grid);
  EXPECT_LE(hermiticity_residual(h.matrix), 1e-10);
}

TEST(Hamiltonian, FreeEigenvaluesAreLatticeSymbol) {
  const auto s = well2d(0.0);
  const FracParams p(0.75, 2);
  const DiscreteHamiltonian h = discretize_hamiltonian(p, s.pot, s.grid);
  const Eigensystem e = diagonalize(h);
  // Independent lattice: xi = 2 pi k / (N h), k in [-N/2, N/2).
  const int N = s.grid.points_per_axis();
  const double dk = 2 * kPi / (N * s.grid.spacing());
  std::vector<double> ref;
  for (int a = -N / 2; a < N / 2; ++a)
    for (int b = -N / 2; b < N / 2; ++b) ref.push_back(std::pow(dk * std::hypot(a, b), 1.5));
  std::sort(ref.begin(), ref.end());
  ASSERT_EQ(ref.size(), static_cast<std::size_t>(e.values.size()));
  const auto fs = free_spectrum(p, s.grid);
  for (std::size_t k = 0; k < ref.size(); ++k) {
    EXPECT_NEAR(e.values(k), ref[k], 1e-9 * std::max(1.0, ref[k]));
    EXPECT_NEAR(fs[k], ref[k], 1e-12 * std::max(1.0, ref[k]));
  }
  EXPECT_NEAR(h.continuum_resolution, std::pow(dk, 1.5), 1e-12);
}

TEST(Hamiltonian, IntegerPowerIsSpectralLaplacian) {
  // alpha = 1 on a 1-d grid: H applied to a lattice plane wave gives xi^2 times it.
  const SpatialGrid g = make_grid(1, 4.0, 16, GridMode::FullTensor);
  const Potential zero = sample_potential(PotentialKind::Bump, 0.0, 1.0, 10.0, g);
  const DiscreteHamiltonian h = discretize_hamiltonian(FracParams(1.0, 1), zero, g);
  const double xi = 3 * 2 * kPi / 8.0;
  RVector c(16);
  for (int i = 0; i < 16; ++i) c(i) = std::cos(xi * g.node(i)[0]);
  EXPECT_LT((h.matrix * c - xi * xi * c).norm(), 1e-10 * c.norm() * xi * xi);
}

TEST(Hamiltonian, RadialDirichletSpectrum) {
  // l = 0 sector of a ball of radius R: eigenvalues (k pi / R)^{2 alpha}.
  const SpatialGrid g = make_grid(3, 5.0, 40, GridMode::Radial);
  const Potential zero = sample_potential(PotentialKind::Bump, 0.0, 1.0, 10.0, g);
  const FracParams p(1.25, 3);
  const Eigensystem e = diagonalize(discretize_hamiltonian(p, zero, g));
  const double R = 10.0;
  for (int k = 1; k <= 10; ++k) EXPECT_NEAR(e.values(k - 1) / std::pow(k * kPi / R, 2.5), 1.0, 1e-10);
}

TEST(Hamiltonian, RejectsNonRadialPotentialOnRadialGrid) {
  const SpatialGrid g = make_grid(3, 5.0, 20, GridMode::Radial);
  Potential pot = sample_potential(PotentialKind::Bump, -1.0, 2.0, 10.0, g);
  pot.V[3] += 0.5;
  EXPECT_THROW(discretize_hamiltonian(FracParams(1.25, 3), pot, g), ValidationError);
}

TEST(Hamiltonian, DeepWellBinds) {
  const auto s = well2d(-10.0);
  const FracParams p(0.75, 2);
  const DiscreteHamiltonian h = discretize_hamiltonian(p, s.pot, s.grid);
  const Eigensystem e = diagonalize(h);
  EXPECT_LT(e.values(0), 0.0);
  const BoundStateSet b = bound_states(h, e);
  ASSERT_GT(b.eigenvalues.size(), 0);
  for (Eigen::Index k = 0; k < b.eigenvalues.size(); ++k) {
    EXPECT_LT(b.eigenvalues(k), -b.threshold_tolerance);
    const RVector c = b.coefficients.col(k);
    EXPECT_LE((h.matrix * c - b.eigenvalues(k) * c).norm(), 1e-8 * c.norm());
  }
  // Ground state decays away from the well.
  const RVector psi = b.eigenvectors.col(0).cwiseAbs();
  double centre = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    if (s.grid.norm(i) < 1.0) centre = std::max(centre, psi(i));
    if (s.grid.norm(i) > 5.0) edge = std::max(edge, psi(i));
  }
  EXPECT_LT(edge, 0.1 * centre);
  // Weighted orthonormality of grid values.
  const RVector w = Eigen::Map<const RVector>(s.grid.weights().data(), s.grid.size());
  const RMatrix gram = b.eigenvectors.transpose() * w.asDiagonal() * b.eigenvectors;
  EXPECT_LT((gram - RMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Hamiltonian, FreeHasNoBoundStates) {
  const auto s = well2d(0.0);
  const DiscreteHamiltonian h = discretize_hamiltonian(FracParams(0.75, 2), s.pot, s.grid);
  const BoundStateSet b = bound_states(h);
  EXPECT_EQ(b.eigenvalues.size(), 0);
  const RMatrix P = ac_projector(b, h.matrix.rows());
  EXPECT_EQ((P - RMatrix::Identity(P.rows(), P.cols())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, AcProjectorProperties) {
  const auto s = well2d(-10.0);
  const DiscreteHamiltonian h = discretize_hamiltonian(FracParams(0.75, 2), s.pot, s.grid);
  const BoundStateSet b = bound_states(h);
  const RMatrix P = ac_projector(b, h.matrix.rows());
  EXPECT_LE((P * P - P).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((P * h.matrix - h.matrix * P).cwiseAbs().maxCoeff(), 1e-8 * h.matrix.cwiseAbs().maxCoeff());
  EXPECT_LE((P - P.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}
