#pragma once

#include <optional>
#include <vector>

#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/params.hpp"

namespace fracdisp {

/// |xi|^{2 alpha}.
double symbol(double xi_norm, const FracParams& params);

/// Kernel of e^{it(-Delta)^alpha} |D|^{gamma-n}: the Fourier transform of
/// e^{it|xi|^{2 alpha}} |xi|^{gamma-n}. Unset gamma means gamma = n.
struct PropagatorSpec {
  FracParams params{1.0, 3};
  double t = 1.0;
  std::optional<double> gamma;
  std::vector<double> r_samples;

  double effective_gamma() const { return gamma.value_or(static_cast<double>(params.n())); }
  /// t != 0, alpha > 1/2; gamma in (0, n alpha] or gamma = n when alpha < 1,
  /// gamma in (0, n] otherwise.
  void validate() const;
};

/// Kernel at t = +-1 as a function of rho = r |t|^{-1/(2 alpha)}.
cplx propagator_unit(const FracParams& params, double gamma, double rho, bool positive_time);

/// Radial samples, using K(t, r) = |t|^{-gamma/(2 alpha)} K(sgn t, r |t|^{-1/(2 alpha)}).
/// The frequency integral is taken along a ray rotated into the upper half
/// plane; two rotation angles must agree to 1e-4 relative or a
/// ConvergenceError is thrown.
KernelProfile free_propagator_kernel(const PropagatorSpec& spec);

/// max_r |K(t, r)| over spec.r_samples.
double propagator_sup_norm(const PropagatorSpec& spec);

}  // namespace fracdisp
