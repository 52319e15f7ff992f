#pragma once

#include <string>
#include <vector>

#include "fracdisp/grid.hpp"
#include "fracdisp/operator_norm.hpp"
#include "fracdisp/params.hpp"
#include "fracdisp/potential.hpp"

namespace fracdisp {

enum class ThresholdClass { Regular, Resonant };
std::string to_string(ThresholdClass c);

struct ThresholdReport {
  double coupling = 0.0;  ///< potential amplitude
  double tol = 1e-3;
  double sigma_min = 0.0;          ///< smallest singular value of T_0
  double sigma_min_refined = 0.0;  ///< same on the refined grid
  double refinement_consistency = 0.0;  ///< sigma_min_refined / sigma_min
  double nearest_eigenvalue = 0.0;      ///< signed eigenvalue of T_0 closest to 0
  /// Eigenvalues of T_0 whose sign differs from the weak-coupling limit U.
  int sign_changes = 0;
  ThresholdClass classification = ThresholdClass::Regular;
  /// Grid functions spanning the numerical kernel (sigma < tol), weighted-orthonormal.
  RMatrix null_vectors;
  /// Grid function of the smallest singular value.
  RVector least_vector;
};

/// T_0 = U + v G_0 v on the grid and on one refinement (twice the points).
/// Resonant iff sigma_min < tol and the refined sigma_min shrinks below half.
ThresholdReport classify_threshold(const PotentialSpec& pot, const FracParams& params,
                                   const SpatialGrid& grid, double tol = 1e-3);

struct ResonanceFunction {
  RVector psi;  ///< -G_0 v phi
  double norm_weighted = 0.0;  ///< L^{2, -alpha - excess}
  double norm_l2 = 0.0;
  double norm_linf = 0.0;
  double residual = 0.0;               ///< |psi + G_0 V psi| / |psi|
  double reconstruction_error = 0.0;   ///< |phi - U v psi| / |phi|
  bool flagged_nonresonant = false;    ///< reconstruction_error > 1e-3
};

ResonanceFunction resonance_function(const RVector& phi, const PotentialSpec& pot,
                                     const FracParams& params, const SpatialGrid& grid,
                                     double excess = 0.05);

/// (G_0 f)(x_i) = sum_j G_0(x_i, x_j) w_j f_j with cell-averaged diagonal.
RVector greens_operator_apply(const RVector& f, const FracParams& params, const SpatialGrid& grid);

struct ThresholdSweep {
  std::vector<double> couplings;
  std::vector<ThresholdReport> reports;
  /// Lowest eigenvalue of H_disc on functions orthogonal to constants
  /// (full-tensor grids) or of H_disc itself (radial grids).
  std::vector<double> lowest_eigenvalue;
  double resolution = 0.0;
  /// First coupling bracket where T_0 acquires a sign change; NaN if none.
  double sigma_crossing = 0.0;
  /// First coupling bracket where the lowest eigenvalue drops below 0; NaN if none.
  double hamiltonian_crossing = 0.0;
  /// Max relative sigma_min drift under refinement over Regular couplings at
  /// least two steps from the crossing.
  double regular_drift = 0.0;
};

/// Sweeps amplitude over `couplings` (uniform spacing) for a fixed shape.
ThresholdSweep threshold_sweep(const PotentialSpec& shape, std::vector<double> couplings,
                               const FracParams& params, const SpatialGrid& grid,
                               double tol = 1e-3);

struct SingularityLadder {
  std::vector<double> radii;
  std::vector<double> first;   ///< |(G_0 V) G_0 (r, 0)|
  std::vector<double> second;  ///< |(G_0 V)^2 G_0 (r, 0)|
  double exponent_first = 0.0;   ///< fitted small-r singularity exponent
  double exponent_second = 0.0;
  double target_first = 0.0;     ///< max(0, n - 4 alpha)
  double target_second = 0.0;    ///< max(0, n - 6 alpha)
};

/// Iterated kernels at y = 0 for radial potentials in n = 3, from the exact
/// angular average of G_0; singularity exponents are fitted over
/// [r_min, r_max] (geometric samples).
SingularityLadder singularity_ladder(const FracParams& params, const PotentialSpec& pot,
                                     double r_min = 1e-5, double r_max = 1e-3, int samples = 9);

}  // namespace fracdisp
