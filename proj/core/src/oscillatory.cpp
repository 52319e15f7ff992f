#include "fracdisp/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdisp/errors.hpp"
#include "fracdisp/quadrature.hpp"

namespace fracdisp {

namespace {

std::vector<double> initial_mesh(const PhaseSpec& phase, double a, double b,
                                 const OscillatoryOptions& opt, bool& refined) {
  std::vector<double> breaks;
  // grade towards the lower endpoint (amplitudes may carry fractional powers)
  const double floor = std::max(a, 1e-9 * (b - a));
  if (a < floor) breaks.push_back(a);
  for (double x = floor; x < a + 0.25 * (b - a); x *= 2.0) breaks.push_back(x);
  breaks.push_back(b);

  refined = false;
  double local_width = b - a;
  double lam0 = 0.0;
  if (auto s = phase.stationary_point(); s && *s > a && *s < b) {
    lam0 = *s;
    refined = true;
    breaks.push_back(0.5 * lam0);
    breaks.push_back(lam0);
    breaks.push_back(std::min(b, 2.0 * lam0));
    const double curvature = std::abs(2.0 * phase.alpha * (2.0 * phase.alpha - 1.0) * phase.t *
                                      std::pow(lam0, 2.0 * phase.alpha - 2.0));
    local_width = std::min(lam0 / 16.0, 0.5 / std::sqrt(std::max(curvature, 1e-300)));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double x) { return x < a || x > b; }),
               breaks.end());

  std::vector<double> mesh{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double dlo = lo > 0.0 ? std::abs(phase.phase_derivative(lo)) : 0.0;
    const double dphi = std::max(dlo, std::abs(phase.phase_derivative(hi)));
    double width = opt.phase_per_panel / std::max(dphi, 1e-300);
    if (refined && lo >= 0.5 * lam0 * (1 - 1e-12) && hi <= 2.0 * lam0 * (1 + 1e-12))
      width = std::min(width, local_width);
    const int pieces =
        std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 1, 1 << 20);
    for (int k = 1; k <= pieces; ++k) mesh.push_back(lo + (hi - lo) * k / pieces);
  }
  return mesh;
}

cplx integrate_mesh(const PhaseSpec& phase, const std::function<cplx(double)>& amplitude,
                    const std::vector<double>& mesh, int order) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    sum += integrate_gauss(
        [&](double lam) { return std::polar(1.0, phase.phase(lam)) * amplitude(lam); }, mesh[i],
        mesh[i + 1], order);
  }
  return sum;
}

std::vector<double> halve(const std::vector<double>& mesh) {
  std::vector<double> out;
  out.reserve(2 * mesh.size());
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    out.push_back(mesh[i]);
    out.push_back(0.5 * (mesh[i] + mesh[i + 1]));
  }
  out.push_back(mesh.back());
  return out;
}

}  // namespace

OscillatoryResult oscillatory_integral(const PhaseSpec& phase,
                                       const std::function<cplx(double)>& amplitude, double a,
                                       double b, const OscillatoryOptions& opt) {
  require(a >= 0.0 && b > a, "oscillatory_integral: interval must satisfy 0 <= a < b");
  OscillatoryResult result;
  std::vector<double> mesh = initial_mesh(phase, a, b, opt, result.stationary_refined);
  cplx previous = integrate_mesh(phase, amplitude, mesh, opt.gauss_order);
  for (int level = 0; level < opt.max_refinements; ++level) {
    mesh = halve(mesh);
    const cplx current = integrate_mesh(phase, amplitude, mesh, opt.gauss_order);
    if (std::abs(current - previous) <= opt.rel_tol * std::abs(current) + opt.abs_tol) {
      result.value = current;
      result.panels = static_cast<int>(mesh.size()) - 1;
      return result;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "oscillatory_integral: no convergence after " << opt.max_refinements
      << " refinements (t=" << phase.t << ", R=" << phase.R << ")";
  throw ConvergenceError(msg.str());
}

SampledAmplitude::SampledAmplitude(std::vector<double> nodes, std::vector<cplx> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  require(nodes_.size() == values_.size() && nodes_.size() >= 4,
          "SampledAmplitude: need >= 4 matching samples");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    require(nodes_[i] > nodes_[i - 1], "SampledAmplitude: nodes must increase");
}

cplx SampledAmplitude::operator()(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::ptrdiff_t j = std::distance(nodes_.begin(), it) - 2;
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(nodes_.size()) - 4);
  cplx sum = 0.0;
  for (int p = 0; p < 4; ++p) {
    double w = 1.0;
    for (int q = 0; q < 4; ++q)
      if (q != p) w *= (x - nodes_[j + q]) / (nodes_[j + p] - nodes_[j + q]);
    sum += w * values_[j + p];
  }
  return sum;
}

}  // namespace fracdisp
