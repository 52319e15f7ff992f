#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/grid.hpp"
#include "fracdisp/operator_norm.hpp"
#include "fracdisp/potential.hpp"
#include "fracdisp/power_fit.hpp"

namespace fracdisp {

/// Free resolvent kernel R_0(lambda^{2a} +- i eps)(x, y) sampled on a grid;
/// lambda = 0 gives the Riesz kernel G_0.
///
/// Full-tensor grids use the radial profile at |x - y|; the diagonal is the
/// average of the kernel over a ball of the cell's volume (local power law
/// plus the regular part). Radial grids (n = 3) use the angular average
/// K(r, s) = (A(r+s) - A(|r-s|)) / (2 r s), A(d) = int_0^d R_0(x) x dx, with
/// diagonal entries averaged over the cell.
///
/// Not thread-safe: distinct-distance values are cached.
class FreeKernel {
 public:
  FreeKernel(const FracParams& params, const SpatialGrid& grid, const SpectralPoint& pt);
  /// lambda = 0: G_0 (requires 2 alpha < n).
  static FreeKernel greens(const FracParams& params, const SpatialGrid& grid);

  cplx operator()(std::size_t i, std::size_t j) const;
  CMatrix block(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  CMatrix full() const;

  /// Kernel at lattice offset (full-tensor grids), offset in units of spacing.
  cplx offset_value(long long squared_offset) const;

  const FracParams& params() const { return params_; }
  const SpatialGrid& grid() const { return grid_; }
  double lambda() const { return pt_.lambda; }

 private:
  FreeKernel(const FracParams& params, const SpatialGrid& grid, const SpectralPoint& pt, bool greens);
  cplx profile(double d) const;          // R_0 at distance d > 0
  cplx radial_A(double d) const;         // int_0^d R_0(x) x dx (n = 3)
  cplx radial_pair(double r, double s) const;
  cplx radial_cell_average(std::size_t i) const;
  cplx tensor_diagonal() const;

  FracParams params_;
  SpatialGrid grid_;
  SpectralPoint pt_;
  bool greens_ = false;
  double riesz_c_ = 0.0;
  mutable std::unordered_map<long long, cplx> cache_;
  mutable std::unordered_map<long long, cplx> diag_cache_;
  mutable bool have_tensor_diag_ = false;
  mutable cplx tensor_diag_;
};

/// Birman-Schwinger operator U + v R_0 v (or T_0 = U + v G_0 v) restricted to
/// the support of v, in the L^2 coefficient representation c_i = sqrt(w_i) f_i.
struct BSOperator {
  CMatrix matrix;
  double lambda = 0.0;
  Sign sign = Sign::Plus;
  std::vector<std::size_t> support;
  RVector vs;  ///< v_i sqrt(w_i) on the support
};

/// lambda = 0 builds T_0 (requires 2 alpha < n). V == 0 is rejected.
BSOperator build_m_matrix(double lambda, Sign sign, const Potential& pot, const SpatialGrid& grid,
                          const FracParams& params);
BSOperator build_m_matrix(const SpectralPoint& pt, const Potential& pot, const SpatialGrid& grid,
                          const FracParams& params);

/// Singular values of a BS operator, descending.
RVector singular_values(const BSOperator& m);

/// R_V = R_0 - R_0 v M^{-1} v R_0 between row and column index sets. V == 0
/// returns the free kernel. Throws ConvergenceError when cond(M) > 1e8.
CMatrix perturbed_resolvent_block(const SpectralPoint& pt, const Potential& pot,
                                  const SpatialGrid& grid, const FracParams& params,
                                  std::span<const std::size_t> rows,
                                  std::span<const std::size_t> cols);
CMatrix perturbed_resolvent(const SpectralPoint& pt, const Potential& pot, const SpatialGrid& grid,
                            const FracParams& params);
CMatrix perturbed_resolvent(double lambda, Sign sign, const Potential& pot, const SpatialGrid& grid,
                            const FracParams& params);

struct BornResult {
  CMatrix kernel;
  /// ||(v R_0 v)^k||, k = 0..2K: the factor controlling each Born term.
  std::vector<double> term_norms;
  bool diverged = false;
};

/// sum_{k=0}^{2K} (-R_0 V)^k R_0 on the full grid, 0 <= K <= 12.
BornResult born_series_sum(int K, const SpectralPoint& pt, const Potential& pot,
                           const SpatialGrid& grid, const FracParams& params);

struct LapOptions {
  /// Target lambda * spacing; the grid is refined per lambda to meet it.
  double lambda_spacing = 1.0;
  Sign sign = Sign::Plus;
  /// Grids up to this size use dense SVD; larger full-tensor grids are
  /// handled matrix-free (FFT convolution and power iteration).
  std::size_t dense_limit = 1600;
  /// Power-iteration settings for the matrix-free path.
  int max_iterations = 300;
  double tolerance = 1e-6;
};

struct LapScalingResult {
  std::vector<double> lambdas;
  std::vector<double> norms;
  std::vector<int> grid_points;
  double exponent = 0.0;  ///< growth exponent: norm ~ lambda^{exponent}
  DecayFit fit;
  bool residual_flag = false;  ///< fit residual > 0.2
};

/// Weighted norm ||<x>^{-sigma} d^j/dlambda^j R_V^{+-}(lambda^{2a}) <y>^{-sigma}|| over a
/// geometric lambda list in [2, 64] and its power-law fit. The grid gives the
/// domain; spacing is refined per lambda.
LapScalingResult lap_scaling(std::span<const double> lambdas, double sigma, int j,
                             const PotentialSpec& pot, const SpatialGrid& grid,
                             const FracParams& params, const LapOptions& opt = {});

/// Norm at a single lambda (used by lap_scaling).
double lap_norm(double lambda, double sigma, int j, const PotentialSpec& pot,
                const SpatialGrid& grid, const FracParams& params, const LapOptions& opt = {});

}  // namespace fracdisp
