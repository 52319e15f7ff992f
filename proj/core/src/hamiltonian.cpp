#include "fracdisp/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

namespace {

// Periodic wavenumbers 2 pi k / L for k = -N/2 .. N/2 - 1.
std::vector<double> wavenumbers(int N, double period) {
  std::vector<double> k(N);
  for (int i = 0; i < N; ++i) k[i] = 2.0 * kPi * (i - N / 2) / period;
  return k;
}

std::vector<int> axis_indices(const SpatialGrid& g, std::size_t i) {
  std::vector<int> idx(g.dim());
  for (int d = 0; d < g.dim(); ++d)
    idx[d] = static_cast<int>(std::lround((g.node(i)[d] + g.extent()) / g.spacing()));
  return idx;
}

}  // namespace

std::vector<double> free_spectrum(const FracParams& params, const SpatialGrid& grid) {
  const int N = grid.points_per_axis();
  const double a = params.alpha();
  std::vector<double> out;
  if (grid.mode() == GridMode::Radial) {
    const double R = N * grid.spacing();
    for (int k = 1; k <= N; ++k) out.push_back(std::pow(kPi * k / R, 2.0 * a));
  } else {
    require(grid.dim() <= 2, "free_spectrum: full-tensor grids need n <= 2");
    const auto k = wavenumbers(N, N * grid.spacing());
    if (grid.dim() == 1) {
      for (double x : k) out.push_back(std::pow(std::abs(x), 2.0 * a));
    } else {
      for (double x : k)
        for (double y : k) out.push_back(std::pow(x * x + y * y, a));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DiscreteHamiltonian discretize_hamiltonian(const FracParams& params, const Potential& pot,
                                           const SpatialGrid& grid) {
  require(pot.V.size() == grid.size(), "discretize_hamiltonian: potential does not match grid");
  require(grid.dim() == params.n(), "discretize_hamiltonian: grid dimension must equal n");
  const int N = grid.points_per_axis();
  const double a = params.alpha();
  const double h = grid.spacing();
  DiscreteHamiltonian out;
  const std::size_t size = grid.size();
  out.matrix.resize(size, size);
  out.value_scale.resize(size);

  if (grid.mode() == GridMode::Radial) {
    require(params.n() == 3, "discretize_hamiltonian: radial grids are supported for n = 3");
    if (pot.spec.amplitude != 0.0) {
      // Radial potentials only: samples must follow the profile.
      for (std::size_t i = 0; i < size; ++i)
        require(std::abs(pot.V[i] - potential_value(pot.spec, grid.node(i)[0])) <=
                    1e-12 * (1.0 + std::abs(pot.V[i])),
                "discretize_hamiltonian: non-radial potential on a radial grid");
    }
    const double R = N * h;
    RMatrix S(N, N);
    for (int i = 0; i < N; ++i)
      for (int k = 1; k <= N; ++k)
        S(i, k - 1) = std::sin(kPi * k * (i + 0.5) / N) * std::sqrt((k == N ? 1.0 : 2.0) / N);
    RVector mult(N);
    for (int k = 1; k <= N; ++k) mult(k - 1) = std::pow(kPi * k / R, 2.0 * a);
    out.matrix = S * mult.asDiagonal() * S.transpose();
    for (int i = 0; i < N; ++i) {
      const double r = grid.node(i)[0];
      out.value_scale(i) = 1.0 / std::sqrt(4.0 * kPi * r * r * h);
    }
    out.continuum_resolution = mult(0);
  } else {
    require(grid.dim() <= 2, "discretize_hamiltonian: full-tensor grids need n <= 2");
    const auto k = wavenumbers(N, N * h);
    // Kernel of the multiplier as a function of the periodic offset.
    std::vector<double> cosine(N * N);
    for (int d = 0; d < N; ++d)
      for (int j = 0; j < N; ++j) cosine[d * N + j] = std::cos(2.0 * kPi * (j - N / 2) * d / N);
    std::vector<double> kern;
    if (grid.dim() == 1) {
      kern.assign(N, 0.0);
      for (int d = 0; d < N; ++d)
        for (int j = 0; j < N; ++j) kern[d] += std::pow(std::abs(k[j]), 2.0 * a) * cosine[d * N + j];
      for (double& v : kern) v /= N;
    } else {
      kern.assign(N * N, 0.0);
      std::vector<double> partial(N * N, 0.0);  // (d1, j2)
      for (int d1 = 0; d1 < N; ++d1)
        for (int j2 = 0; j2 < N; ++j2) {
          double s = 0.0;
          for (int j1 = 0; j1 < N; ++j1)
            s += std::pow(k[j1] * k[j1] + k[j2] * k[j2], a) * cosine[d1 * N + j1];
          partial[d1 * N + j2] = s;
        }
      for (int d1 = 0; d1 < N; ++d1)
        for (int d2 = 0; d2 < N; ++d2) {
          double s = 0.0;
          for (int j2 = 0; j2 < N; ++j2) s += partial[d1 * N + j2] * cosine[d2 * N + j2];
          kern[d1 * N + d2] = s / (static_cast<double>(N) * N);
        }
    }
    std::vector<std::vector<int>> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = axis_indices(grid, i);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) {
        std::size_t off = 0;
        for (int d = 0; d < grid.dim(); ++d) off = off * N + ((idx[i][d] - idx[j][d] + N) % N);
        out.matrix(i, j) = kern[off];
      }
    for (std::size_t i = 0; i < size; ++i) out.value_scale(i) = 1.0 / std::sqrt(grid.weights()[i]);
    out.continuum_resolution = std::pow(2.0 * kPi / (N * h), 2.0 * a);
  }
  for (std::size_t i = 0; i < size; ++i) out.matrix(i, i) += pot.V[i];
  return out;
}

double hermiticity_residual(const RMatrix& h) {
  const double scale = h.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (h - h.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigensystem diagonalize(const DiscreteHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h.matrix);
  if (es.info() != Eigen::Success) throw ConvergenceError("diagonalize: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

BoundStateSet bound_states(const DiscreteHamiltonian& h, const Eigensystem& eig) {
  BoundStateSet out;
  out.threshold_tolerance = 10.0 * h.continuum_resolution;
  Eigen::Index count = 0;
  while (count < eig.values.size() && eig.values(count) < -out.threshold_tolerance) ++count;
  out.eigenvalues = eig.values.head(count);
  out.coefficients = eig.vectors.leftCols(count);
  out.eigenvectors = h.value_scale.asDiagonal() * out.coefficients;
  return out;
}

BoundStateSet bound_states(const DiscreteHamiltonian& h) { return bound_states(h, diagonalize(h)); }

RMatrix ac_projector(const BoundStateSet& bound, Eigen::Index size) {
  RMatrix p = RMatrix::Identity(size, size);
  if (bound.coefficients.cols() > 0) p -= bound.coefficients * bound.coefficients.transpose();
  return p;
}

}  // namespace fracdisp
