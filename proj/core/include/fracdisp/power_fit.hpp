#pragma once

#include <span>

namespace fracdisp {

/// Least-squares line through (log t, log y): y ~ prefactor * t^{-exponent}.
struct DecayFit {
  double exponent = 0.0;   ///< decay rate, reported positive for decay
  double prefactor = 0.0;
  double residual = 0.0;   ///< RMS deviation in log coordinates
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Requires >= 2 points with positive values. Growth gives a negative exponent.
DecayFit fit_power_law(std::span<const double> t, std::span<const double> y);

/// decay_rate_fit: as fit_power_law but enforces >= 8 samples.
DecayFit decay_rate_fit(std::span<const double> t, std::span<const double> sup_norms);

}  // namespace fracdisp
