#include "fracdisp/operator_norm.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp {

double spectral_norm(const CMatrix& matrix) {
  require(matrix.allFinite(), "operator norm: non-finite kernel entries");
  if (matrix.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(matrix);
  return svd.singularValues()(0);
}

double weighted_operator_norm(const CMatrix& kernel, const SpatialGrid& grid, double sigma) {
  require(kernel.rows() == kernel.cols(), "weighted_operator_norm: kernel must be square");
  require(static_cast<std::size_t>(kernel.rows()) == grid.size(),
          "weighted_operator_norm: kernel does not match grid");
  require(sigma >= 0.0, "weighted_operator_norm: sigma must be >= 0");
  require(kernel.allFinite(), "weighted_operator_norm: non-finite kernel entries");
  const Eigen::Index n = kernel.rows();
  RVector scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.norm(static_cast<std::size_t>(i));
    scale(i) = std::sqrt(grid.weights()[static_cast<std::size_t>(i)]) * std::pow(1.0 + x * x, -0.5 * sigma);
  }
  const CMatrix folded = scale.asDiagonal() * kernel * scale.asDiagonal();
  Eigen::BDCSVD<CMatrix> svd(folded);
  return svd.singularValues()(0);
}

}  // namespace fracdisp
