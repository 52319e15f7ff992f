#include "fracdisp/params.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp {

FracParams::FracParams(double alpha, int n) : alpha_(alpha), n_(n) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
  require(n >= 1, "dimension n must be >= 1");
}

bool FracParams::high_energy_ok() const {
  return (n_ + 1) / 4.0 <= alpha_ && alpha_ < n_ / 2.0;
}

namespace {
double bump_exp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double CutoffSpec::chi(double s) const {
  if (s <= inner) return 1.0;
  if (s >= outer) return 0.0;
  const double x = (s - inner) / (outer - inner);
  const double a = bump_exp(1.0 - x);
  const double b = bump_exp(x);
  return a / (a + b);
}

void CutoffSpec::validate() const {
  require(inner > 0.0 && outer > inner, "cutoff requires 0 < inner < outer");
}

double PhaseSpec::phase(double lambda) const {
  return t * std::pow(lambda, 2.0 * alpha) + lambda * R;
}

double PhaseSpec::phase_derivative(double lambda) const {
  return 2.0 * alpha * t * std::pow(lambda, 2.0 * alpha - 1.0) + R;
}

std::optional<double> PhaseSpec::stationary_point() const {
  if (!(t < 0.0 && R > 0.0) || alpha <= 0.5) return std::nullopt;
  return std::pow(-R / (2.0 * alpha * t), 1.0 / (2.0 * alpha - 1.0));
}

}  // namespace fracdisp
