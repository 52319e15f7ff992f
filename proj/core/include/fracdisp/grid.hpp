#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace fracdisp {

enum class GridMode { FullTensor, Radial };

/// Uniform grid with quadrature weights.
///
/// Full-tensor nodes sit at -extent + i*spacing on each axis (periodic cell,
/// includes the origin). Radial nodes sit at cell midpoints (i + 1/2)*spacing
/// and never touch r = 0; their weights are exact shell measures
/// |S^{n-1}| * integral of r^{n-1} over the cell.
class SpatialGrid {
 public:
  int dim() const { return dim_; }
  double extent() const { return extent_; }
  int points_per_axis() const { return points_; }
  double spacing() const { return spacing_; }
  GridMode mode() const { return mode_; }

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

  /// Coordinates of node i (length dim; radial mode returns {r_i}).
  const std::array<double, 3>& node(std::size_t i) const { return nodes_[i]; }
  double norm(std::size_t i) const;
  double distance(std::size_t i, std::size_t j) const;
  /// Radii of a radial grid.
  std::vector<double> radii() const;

  /// Measure of the covered domain: box volume or ball volume.
  double domain_measure() const;

  /// Same geometry with a different number of points (refinement checks).
  SpatialGrid refined(int points) const;

  friend SpatialGrid make_grid(int dim, double extent, int points, GridMode mode);

 private:
  int dim_ = 1;
  double extent_ = 1.0;
  int points_ = 8;
  double spacing_ = 0.25;
  GridMode mode_ = GridMode::FullTensor;
  std::vector<std::array<double, 3>> nodes_;
  std::vector<double> weights_;
};

/// dim in {1,2,3}; points >= 8 and even; extent > 0. Full-tensor grids in
/// three dimensions are limited to 64 points per axis.
SpatialGrid make_grid(int dim, double extent, int points, GridMode mode);

/// Surface measure of the unit sphere S^{n-1}.
double unit_sphere_measure(int n);

}  // namespace fracdisp
