#include "fracdisp/potential.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::GaussianWell: return "gaussian-well";
    case PotentialKind::Bump: return "bump";
    case PotentialKind::PolynomialDecay: return "polynomial-decay";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(const std::string& name) {
  if (name == "gaussian-well") return PotentialKind::GaussianWell;
  if (name == "bump") return PotentialKind::Bump;
  if (name == "polynomial-decay") return PotentialKind::PolynomialDecay;
  throw ValidationError("unknown potential kind '" + name + "'");
}

double potential_value(const PotentialSpec& spec, double r) {
  switch (spec.kind) {
    case PotentialKind::GaussianWell:
      return spec.amplitude * std::exp(-(r * r) / (spec.width * spec.width));
    case PotentialKind::Bump: {
      const double s = r / spec.width;
      if (s >= 1.0) return 0.0;
      return spec.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    case PotentialKind::PolynomialDecay:
      return spec.amplitude * std::pow(1.0 + r * r, -0.5 * spec.beta);
  }
  return 0.0;
}

bool Potential::is_zero() const {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

std::vector<std::size_t> Potential::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s.push_back(i);
  return s;
}

Potential sample_potential(const PotentialSpec& spec, const SpatialGrid& grid) {
  require(spec.width > 0.0, "sample_potential: width must be positive");
  require(std::isfinite(spec.amplitude), "sample_potential: amplitude must be finite");
  require(spec.beta >= 0.0, "sample_potential: beta must be nonnegative");
  Potential p;
  p.spec = spec;
  const std::size_t n = grid.size();
  p.V.resize(n);
  p.v.resize(n);
  p.U.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.norm(i);
    const double V = potential_value(spec, r);
    p.V[i] = V;
    p.v[i] = std::sqrt(std::abs(V));
    p.U[i] = V < 0.0 ? -1.0 : 1.0;
    p.decay_constant = std::max(p.decay_constant, std::abs(V) * std::pow(1.0 + r * r, 0.5 * spec.beta));
  }
  return p;
}

Potential sample_potential(PotentialKind kind, double amplitude, double width, double beta,
                           const SpatialGrid& grid) {
  return sample_potential(PotentialSpec{kind, amplitude, width, beta}, grid);
}

}  // namespace fracdisp
