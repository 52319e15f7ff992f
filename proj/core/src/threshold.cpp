#include "fracdisp/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdisp/errors.hpp"
#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/hamiltonian.hpp"
#include "fracdisp/perturbed.hpp"
#include "fracdisp/power_fit.hpp"
#include "fracdisp/quadrature.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

std::string to_string(ThresholdClass c) {
  return c == ThresholdClass::Regular ? "regular" : "resonant";
}

namespace {

void check_threshold_params(const PotentialSpec& pot, const FracParams& params) {
  const double a = params.alpha();
  require(2.0 * a < params.n(), "threshold analysis requires 2 alpha < n");
  require(pot.beta > 2.0 * a, "threshold analysis requires beta > 2 alpha");
  if (a < params.n() / 4.0) require(pot.beta > 4.0 * a, "threshold analysis requires beta > 4 alpha");
}

struct T0Spectrum {
  RVector values;
  RMatrix vectors;  // coefficient columns on the support
  std::vector<std::size_t> support;
  RVector U;
};

T0Spectrum t0_spectrum(const Potential& pot, const FracParams& params, const SpatialGrid& grid) {
  const BSOperator m = build_m_matrix(0.0, Sign::Plus, pot, grid, params);
  const RMatrix t0 = 0.5 * (m.matrix.real() + m.matrix.real().transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t0);
  if (es.info() != Eigen::Success) throw ConvergenceError("T_0 eigensolver failed");
  T0Spectrum out{es.eigenvalues(), es.eigenvectors(), m.support, RVector(m.support.size())};
  for (std::size_t a = 0; a < m.support.size(); ++a) out.U(a) = pot.U[m.support[a]];
  return out;
}

double min_abs(const RVector& v) { return v.cwiseAbs().minCoeff(); }

}  // namespace

ThresholdReport classify_threshold(const PotentialSpec& spec, const FracParams& params,
                                   const SpatialGrid& grid, double tol) {
  check_threshold_params(spec, params);
  require(tol > 0.0, "classify_threshold: tol must be positive");
  const Potential pot = sample_potential(spec, grid);
  require(pot.support().size() >= 8,
          "classify_threshold: grid too coarse for the consistency check (support < 8 nodes)");
  const T0Spectrum coarse = t0_spectrum(pot, params, grid);
  const SpatialGrid fine_grid = grid.refined(2 * grid.points_per_axis());
  const T0Spectrum fine = t0_spectrum(sample_potential(spec, fine_grid), params, fine_grid);

  ThresholdReport rep;
  rep.coupling = spec.amplitude;
  rep.tol = tol;
  rep.sigma_min = min_abs(coarse.values);
  rep.sigma_min_refined = min_abs(fine.values);
  rep.refinement_consistency = rep.sigma_min_refined / rep.sigma_min;
  Eigen::Index imin = 0;
  coarse.values.cwiseAbs().minCoeff(&imin);
  rep.nearest_eigenvalue = coarse.values(imin);
  const int positive_u = static_cast<int>((coarse.U.array() > 0.0).count());
  const int positive_t = static_cast<int>((coarse.values.array() > 0.0).count());
  rep.sign_changes = std::abs(positive_t - positive_u);
  const bool resonant = rep.sigma_min < tol && rep.refinement_consistency < 0.5;
  rep.classification = resonant ? ThresholdClass::Resonant : ThresholdClass::Regular;

  auto to_grid = [&](const RVector& c) {
    RVector g = RVector::Zero(grid.size());
    for (std::size_t a = 0; a < coarse.support.size(); ++a) {
      const std::size_t i = coarse.support[a];
      g(i) = c(a) / std::sqrt(grid.weights()[i]);
    }
    return g;
  };
  rep.least_vector = to_grid(coarse.vectors.col(imin));
  std::vector<Eigen::Index> null_idx;
  for (Eigen::Index k = 0; k < coarse.values.size(); ++k)
    if (std::abs(coarse.values(k)) < tol) null_idx.push_back(k);
  rep.null_vectors.resize(grid.size(), static_cast<Eigen::Index>(null_idx.size()));
  for (std::size_t k = 0; k < null_idx.size(); ++k)
    rep.null_vectors.col(k) = to_grid(coarse.vectors.col(null_idx[k]));
  return rep;
}

RVector greens_operator_apply(const RVector& f, const FracParams& params, const SpatialGrid& grid) {
  require(f.size() == static_cast<Eigen::Index>(grid.size()),
          "greens_operator_apply: function does not match grid");
  const FreeKernel G = FreeKernel::greens(params, grid);
  RVector wf(f.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) wf(j) = grid.weights()[j] * f(j);
  RVector out = RVector::Zero(f.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (wf(j) != 0.0) s += G(i, j).real() * wf(j);
    out(i) = s;
  }
  return out;
}

ResonanceFunction resonance_function(const RVector& phi, const PotentialSpec& spec,
                                     const FracParams& params, const SpatialGrid& grid,
                                     double excess) {
  check_threshold_params(spec, params);
  require(excess > 0.0, "resonance_function: excess must be positive");
  const Potential pot = sample_potential(spec, grid);
  const std::size_t n = grid.size();
  require(phi.size() == static_cast<Eigen::Index>(n), "resonance_function: phi does not match grid");
  RVector vphi(n), Vpsi(n);
  for (std::size_t i = 0; i < n; ++i) vphi(i) = pot.v[i] * phi(i);
  ResonanceFunction out;
  out.psi = -greens_operator_apply(vphi, params, grid);
  for (std::size_t i = 0; i < n; ++i) Vpsi(i) = pot.V[i] * out.psi(i);
  const RVector gv = greens_operator_apply(Vpsi, params, grid);
  auto wnorm = [&](const RVector& f, double sigma) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.norm(i);
      s += grid.weights()[i] * std::pow(1.0 + x * x, -sigma) * f(i) * f(i);
    }
    return std::sqrt(s);
  };
  out.norm_weighted = wnorm(out.psi, params.alpha() + excess);
  out.norm_l2 = wnorm(out.psi, 0.0);
  out.norm_linf = out.psi.cwiseAbs().maxCoeff();
  out.residual = wnorm(out.psi + gv, 0.0) / std::max(out.norm_l2, 1e-300);
  RVector recon(n);
  for (std::size_t i = 0; i < n; ++i) recon(i) = phi(i) - pot.U[i] * pot.v[i] * out.psi(i);
  out.reconstruction_error = wnorm(recon, 0.0) / std::max(wnorm(phi, 0.0), 1e-300);
  out.flagged_nonresonant = out.reconstruction_error > 1e-3;
  return out;
}

namespace {

double lowest_eigenvalue(const FracParams& params, const Potential& pot, const SpatialGrid& grid) {
  DiscreteHamiltonian h = discretize_hamiltonian(params, pot, grid);
  if (grid.mode() == GridMode::FullTensor) {
    // Lift the constant mode of the periodic cell out of the spectrum.
    const Eigen::Index m = h.matrix.rows();
    const RVector one = RVector::Ones(m) / std::sqrt(static_cast<double>(m));
    const double lift = 10.0 * (h.matrix.cwiseAbs().rowwise().sum().maxCoeff() + 1.0);
    h.matrix += lift * one * one.transpose();
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("H_disc eigensolver failed");
  return es.eigenvalues()(0);
}

}  // namespace

ThresholdSweep threshold_sweep(const PotentialSpec& shape, std::vector<double> couplings,
                               const FracParams& params, const SpatialGrid& grid, double tol) {
  require(couplings.size() >= 3, "threshold_sweep: needs >= 3 couplings");
  std::sort(couplings.begin(), couplings.end());
  ThresholdSweep out;
  out.couplings = couplings;
  out.resolution = (couplings.back() - couplings.front()) / (couplings.size() - 1);
  for (double c : couplings) {
    PotentialSpec s = shape;
    s.amplitude = c;
    out.reports.push_back(classify_threshold(s, params, grid, tol));
    out.lowest_eigenvalue.push_back(lowest_eigenvalue(params, sample_potential(s, grid), grid));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.sigma_crossing = nan;
  out.hamiltonian_crossing = nan;
  std::size_t cross_index = couplings.size();
  for (std::size_t k = 1; k < couplings.size(); ++k)
    if (out.reports[k].sign_changes != out.reports[k - 1].sign_changes) {
      out.sigma_crossing = 0.5 * (couplings[k - 1] + couplings[k]);
      cross_index = k;
      break;
    }
  for (std::size_t k = 1; k < couplings.size(); ++k)
    if ((out.lowest_eigenvalue[k] < 0.0) != (out.lowest_eigenvalue[k - 1] < 0.0)) {
      out.hamiltonian_crossing = 0.5 * (couplings[k - 1] + couplings[k]);
      break;
    }
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    const bool near = cross_index < couplings.size() &&
                      (k + 2 >= cross_index && k <= cross_index + 1);
    const ThresholdReport& r = out.reports[k];
    if (near || r.classification != ThresholdClass::Regular) continue;
    out.regular_drift =
        std::max(out.regular_drift, std::abs(r.sigma_min_refined - r.sigma_min) / r.sigma_min);
  }
  return out;
}

namespace {

// Angular average over |z| = s of G_0(x - z), |x| = r (n = 3).
struct RadialGreens {
  double alpha;
  double C;
  double A(double d) const {
    if (std::abs(alpha - 0.5) < 1e-14) return C * std::log(d);
    return C * std::pow(d, 2.0 * alpha - 1.0) / (2.0 * alpha - 1.0);
  }
  double average(double r, double s) const {
    if (r == s) return 0.0;  // integrable log singularity; a null set for the quadrature
    // A(r+s) - A(|r-s|) without cancellation: log((r+s)/|r-s|) = 2 atanh(min/max).
    const double L = 2.0 * std::atanh(std::min(r, s) / std::max(r, s));
    double diff;
    if (std::abs(alpha - 0.5) < 1e-14) {
      diff = C * L;
    } else {
      const double p = 2.0 * alpha - 1.0;
      diff = C * std::pow(std::abs(r - s), p) * std::expm1(p * L) / p;
    }
    return diff / (2.0 * r * s);
  }
  double G(double s) const { return C * std::pow(s, 2.0 * alpha - 3.0); }
};

double radial_apply(const RadialGreens& g, const PotentialSpec& pot, double r, double s_max,
                    const std::function<double(double)>& f, double rel_tol) {
  std::vector<double> breaks{0.0, s_max};
  for (double x = r * 1e-3; x < r; x *= 4.0) breaks.push_back(x);
  for (double q = 0.5; q > 1e-6; q *= 0.25) {
    breaks.push_back(r * (1.0 - q));
    breaks.push_back(r * (1.0 + q));
  }
  breaks.push_back(r);
  for (double x = 2.0 * r; x < s_max; x *= 2.0) breaks.push_back(x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double x) { return x > s_max; }),
               breaks.end());
  AdaptiveOptions opt;
  opt.rel_tol = rel_tol;
  bool ok = true;
  const double v = integrate_breakpoints(
      [&](double s) { return g.average(r, s) * potential_value(pot, s) * f(s) * 4.0 * kPi * s * s; },
      breaks, opt, &ok);
  if (!ok) throw ConvergenceError("singularity_ladder: quadrature did not converge");
  return v;
}

}  // namespace

SingularityLadder singularity_ladder(const FracParams& params, const PotentialSpec& pot,
                                     double r_min, double r_max, int samples) {
  require(params.n() == 3, "singularity_ladder: radial ladder is implemented for n = 3");
  require(2.0 * params.alpha() < 3.0, "singularity_ladder: requires 2 alpha < n");
  require(pot.kind == PotentialKind::Bump, "singularity_ladder: requires a compactly supported bump");
  require(r_min > 0.0 && r_max > r_min && samples >= 3, "singularity_ladder: bad radius window");
  const RadialGreens g{params.alpha(), riesz_constant_gamma(params)};
  const double s_max = pot.width;
  auto first = [&](double r) {
    return radial_apply(g, pot, r, s_max, [&](double s) { return g.G(s); }, 1e-11);
  };
  SingularityLadder out;
  out.target_first = std::max(0.0, 3.0 - 4.0 * params.alpha());
  out.target_second = std::max(0.0, 3.0 - 6.0 * params.alpha());
  for (int k = 0; k < samples; ++k) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(k) / (samples - 1));
    out.radii.push_back(r);
    out.first.push_back(std::abs(first(r)));
    out.second.push_back(std::abs(radial_apply(g, pot, r, s_max, first, 1e-7)));
  }
  out.exponent_first = fit_power_law(out.radii, out.first).exponent;
  out.exponent_second = fit_power_law(out.radii, out.second).exponent;
  return out;
}

}  // namespace fracdisp
