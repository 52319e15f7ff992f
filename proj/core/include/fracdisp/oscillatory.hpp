#pragma once

#include <functional>
#include <vector>

#include "fracdisp/params.hpp"

namespace fracdisp {

struct OscillatoryOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  /// Maximal phase increment per Gauss panel on the initial mesh.
  double phase_per_panel = 1.5;
  int gauss_order = 16;
  int max_refinements = 8;
};

struct OscillatoryResult {
  cplx value;
  int panels = 0;
  bool stationary_refined = false;
};

/// int_a^b exp(i (t lambda^{2 alpha} + lambda R)) amplitude(lambda) d lambda.
///
/// Composite Gauss-Legendre on a mesh resolving the phase, graded towards
/// lambda = 0 and refined on [lambda0/2, 2 lambda0] around the stationary
/// point. The mesh is halved until two successive results agree to rel_tol;
/// throws ConvergenceError otherwise.
OscillatoryResult oscillatory_integral(const PhaseSpec& phase,
                                       const std::function<cplx(double)>& amplitude,
                                       double a, double b, const OscillatoryOptions& opt = {});

/// Piecewise-cubic interpolant of an amplitude sampled on increasing nodes.
class SampledAmplitude {
 public:
  SampledAmplitude(std::vector<double> nodes, std::vector<cplx> values);
  cplx operator()(double lambda) const;
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<cplx> values_;
};

}  // namespace fracdisp
