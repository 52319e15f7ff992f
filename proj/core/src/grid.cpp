#include "fracdisp/grid.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/params.hpp"

namespace fracdisp {

double unit_sphere_measure(int n) {
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

SpatialGrid make_grid(int dim, double extent, int points, GridMode mode) {
  require(dim >= 1 && dim <= 3, "make_grid: dim must be 1, 2 or 3");
  require(extent > 0.0 && std::isfinite(extent), "make_grid: extent must be positive");
  require(points >= 8 && points % 2 == 0, "make_grid: points must be even and >= 8");
  require(!(mode == GridMode::FullTensor && dim == 3 && points > 64),
          "make_grid: full-tensor 3-d grids are limited to 64 points per axis; use radial mode");

  SpatialGrid g;
  g.dim_ = dim;
  g.extent_ = extent;
  g.points_ = points;
  g.mode_ = mode;
  g.spacing_ = 2.0 * extent / points;
  const double h = g.spacing_;

  if (mode == GridMode::Radial) {
    const double sphere = unit_sphere_measure(dim);
    g.nodes_.reserve(points);
    g.weights_.reserve(points);
    for (int i = 0; i < points; ++i) {
      const double r = (i + 0.5) * h;
      const double lo = i * h, hi = (i + 1) * h;
      g.nodes_.push_back({r, 0.0, 0.0});
      g.weights_.push_back(sphere * (std::pow(hi, dim) - std::pow(lo, dim)) / dim);
    }
    return g;
  }

  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= points;
  g.nodes_.resize(total);
  g.weights_.assign(total, std::pow(h, dim));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = dim - 1; d >= 0; --d) {
      x[d] = -extent + static_cast<double>(rest % points) * h;
      rest /= points;
    }
    g.nodes_[idx] = x;
  }
  return g;
}

double SpatialGrid::norm(std::size_t i) const {
  const auto& x = nodes_[i];
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

double SpatialGrid::distance(std::size_t i, std::size_t j) const {
  if (mode_ == GridMode::Radial) return std::abs(nodes_[i][0] - nodes_[j][0]);
  const auto& a = nodes_[i];
  const auto& b = nodes_[j];
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::vector<double> SpatialGrid::radii() const {
  std::vector<double> r;
  r.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) r.push_back(norm(i));
  return r;
}

double SpatialGrid::domain_measure() const {
  if (mode_ == GridMode::Radial)
    return unit_sphere_measure(dim_) * std::pow(points_ * spacing_, dim_) / dim_;
  return std::pow(2.0 * extent_, dim_);
}

SpatialGrid SpatialGrid::refined(int points) const { return make_grid(dim_, extent_, points, mode_); }

}  // namespace fracdisp
