#include "fracdisp/power_fit.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp {

DecayFit fit_power_law(std::span<const double> t, std::span<const double> y) {
  require(t.size() == y.size() && t.size() >= 2, "power-law fit needs >= 2 matching samples");
  const std::size_t m = t.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    require(t[i] > 0.0 && std::isfinite(t[i]), "power-law fit: abscissae must be positive");
    require(y[i] > 0.0 && std::isfinite(y[i]), "power-law fit: values must be positive");
    const double lx = std::log(t[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  require(denom > 0.0, "power-law fit: abscissae must not all coincide");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = std::log(y[i]) - (intercept + slope * std::log(t[i]));
    ss += d * d;
  }
  DecayFit fit;
  fit.exponent = -slope;
  fit.prefactor = std::exp(intercept);
  fit.residual = std::sqrt(ss / m);
  fit.t_min = t[0];
  fit.t_max = t[0];
  for (double v : t) {
    fit.t_min = std::min(fit.t_min, v);
    fit.t_max = std::max(fit.t_max, v);
  }
  return fit;
}

DecayFit decay_rate_fit(std::span<const double> t, std::span<const double> sup_norms) {
  require(t.size() >= 8, "decay_rate_fit: needs at least 8 samples");
  return fit_power_law(t, sup_norms);
}

}  // namespace fracdisp
