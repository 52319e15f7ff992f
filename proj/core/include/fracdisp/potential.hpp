#pragma once

#include <string>
#include <vector>

#include "fracdisp/grid.hpp"

namespace fracdisp {

enum class PotentialKind { GaussianWell, Bump, PolynomialDecay };

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

/// Grid-independent description of a potential.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Bump;
  double amplitude = 0.0;
  double width = 1.0;
  double beta = 10.0;  ///< decay exponent metadata

  bool operator==(const PotentialSpec&) const = default;
};

/// V sampled on a grid with v = |V|^{1/2} and U = sgn V (U = +1 where V = 0).
struct Potential {
  PotentialSpec spec;
  std::vector<double> V;
  std::vector<double> v;
  std::vector<double> U;
  /// max |V(x)| <x>^beta over the grid.
  double decay_constant = 0.0;

  bool is_zero() const;
  /// Indices where v != 0.
  std::vector<std::size_t> support() const;
};

/// Pointwise value of the potential at distance r from the origin.
///   gaussian-well:    A exp(-r^2 / w^2)
///   bump:             A exp(1 - 1/(1 - (r/w)^2)) for r < w, 0 otherwise
///   polynomial-decay: A <r>^{-beta}
double potential_value(const PotentialSpec& spec, double r);

Potential sample_potential(const PotentialSpec& spec, const SpatialGrid& grid);
Potential sample_potential(PotentialKind kind, double amplitude, double width, double beta,
                           const SpatialGrid& grid);

}  // namespace fracdisp
