#pragma once

#include <Eigen/Dense>

#include "fracdisp/grid.hpp"

namespace fracdisp {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// <x>^{-sigma} A <y>^{-sigma} as an operator on the discretized L^2.
///
/// `kernel` holds pointwise kernel values K(x_i, x_j). The returned value is
/// the largest singular value of W^{1/2} D K D W^{1/2}, D = diag(<x_i>^{-sigma}),
/// which is the L^2 operator norm of the quadrature operator.
double weighted_operator_norm(const CMatrix& kernel, const SpatialGrid& grid, double sigma);

/// Same as above with the L^2 form already folded in (matrix acting on
/// weighted coefficients); only the weight <x>^{-sigma} is applied.
double spectral_norm(const CMatrix& matrix);

}  // namespace fracdisp
