#pragma once

#include "fracdisp/grid.hpp"
#include "fracdisp/operator_norm.hpp"
#include "fracdisp/params.hpp"
#include "fracdisp/potential.hpp"

namespace fracdisp {

/// Dense H = (-Delta)^alpha + V on a grid, in a symmetric coefficient
/// representation c_i = sqrt(mu_i) psi_i.
///
/// Full-tensor grids (n <= 2): the fractional power acts as the multiplier
/// |xi_k|^{2 alpha} in the discrete Fourier basis of the periodic cell, and
/// mu_i are the grid weights. Radial grids (n = 3, l = 0 sector): the power
/// acts on u = r psi in the sine basis with u(0) = u(R) = 0, and
/// mu_i = 4 pi r_i^2 h.
struct DiscreteHamiltonian {
  RMatrix matrix;
  RVector value_scale;  ///< psi_i = value_scale_i * c_i
  /// Smallest positive free eigenvalue of the grid.
  double continuum_resolution = 0.0;
};

DiscreteHamiltonian discretize_hamiltonian(const FracParams& params, const Potential& pot,
                                           const SpatialGrid& grid);

/// Free eigenvalues |xi_k|^{2 alpha} of the grid, ascending.
std::vector<double> free_spectrum(const FracParams& params, const SpatialGrid& grid);

/// max |H - H^T| / max |H|.
double hermiticity_residual(const RMatrix& h);

struct Eigensystem {
  RVector values;   ///< ascending
  RMatrix vectors;  ///< orthonormal coefficient columns
};

Eigensystem diagonalize(const DiscreteHamiltonian& h);

struct BoundStateSet {
  RVector eigenvalues;
  RMatrix coefficients;  ///< orthonormal columns
  RMatrix eigenvectors;  ///< grid values, orthonormal in the weighted l^2
  double threshold_tolerance = 0.0;
};

/// Eigenpairs with E < -10 * continuum_resolution.
BoundStateSet bound_states(const DiscreteHamiltonian& h, const Eigensystem& eig);
BoundStateSet bound_states(const DiscreteHamiltonian& h);

/// P_ac = I - sum_j e_j e_j^T in the coefficient representation.
RMatrix ac_projector(const BoundStateSet& bound, Eigen::Index size);

}  // namespace fracdisp
