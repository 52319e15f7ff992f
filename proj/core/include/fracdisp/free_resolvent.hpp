#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracdisp/params.hpp"

namespace fracdisp {

enum class Sign { Plus, Minus };

enum class KernelKind {
  ResolventPlus,
  ResolventMinus,
  Difference,
  F,
  FPlus,
  FMinus,
  Propagator,
};

std::string to_string(KernelKind kind);
std::string to_string(Sign sign);

/// Spectral parameter lambda^{2 alpha} +- i epsilon.
struct SpectralPoint {
  double lambda = 1.0;
  double epsilon = 0.0;  ///< 0 means the boundary value
  Sign sign = Sign::Plus;
};

/// Radial samples of a complex kernel.
struct KernelProfile {
  std::vector<double> radii;
  std::vector<cplx> values;
  FracParams params{1.0, 3};
  KernelKind kind = KernelKind::ResolventPlus;
  double lambda = 0.0;
  double epsilon = 0.0;
  double t = 0.0;
  double gamma = 0.0;
};

enum class ResolventMethod {
  /// Radial Bessel quadrature at epsilon-levels, Richardson-extrapolated.
  EpsilonLadder,
  /// Scaled Laplacian resolvent in closed form plus the Fourier transform of
  /// the holomorphic remainder, evaluated along the imaginary frequency axis.
  LaplacianSplit,
};

/// Scaled outgoing resolvent Phi(rho): R_0^+(lambda^{2a})(r) = lambda^{n-2a} Phi(lambda r).
/// Laplacian-split route; requires 0 < alpha < 2 and 2 alpha < n or rho > 0.
cplx scaled_resolvent(const FracParams& params, double rho, Sign sign = Sign::Plus);

/// Scaled resolvent of 1/(|xi|^{2a} - w) by radial quadrature, Im w != 0.
cplx scaled_resolvent_offaxis(const FracParams& params, double rho, cplx w);

struct LadderValue {
  cplx value;
  std::array<cplx, 3> levels;  ///< values at eps0, eps0/2, eps0/4
  double eps0 = 0.0;           ///< scaled epsilon (units of lambda^{2 alpha})
};

/// Richardson extrapolation of the scaled resolvent from three epsilon-levels.
LadderValue scaled_resolvent_ladder(const FracParams& params, double rho, Sign sign);

/// Single kernel value R_0^{+-}(lambda^{2 alpha} +- i eps)(r).
cplx free_resolvent_value(const SpectralPoint& pt, const FracParams& params, double r,
                          ResolventMethod method = ResolventMethod::EpsilonLadder);

KernelProfile free_resolvent_kernel(const SpectralPoint& pt, const FracParams& params,
                                    std::span<const double> radii,
                                    ResolventMethod method = ResolventMethod::EpsilonLadder);

/// F(lambda r) = r^{n-2a} e^{-i lambda r} R_0^+(lambda^{2a})(r).
KernelProfile extract_F(const KernelProfile& resolvent_plus);
/// F as a function of rho = lambda r (Laplacian-split route).
cplx F_value(const FracParams& params, double rho);

/// [R_0^+ - R_0^-] of the Laplacian at lambda^2, closed form via J_{n/2-1}.
cplx laplacian_jump(int n, double lambda, double r);

struct SpectralMeasureResult {
  KernelProfile difference;          ///< epsilon-extrapolated R^+ - R^-
  std::vector<cplx> closed_form;     ///< c lambda^{2-2a} x Laplacian jump
  double c_numerical = 0.0;          ///< fitted constant c (expected 1/alpha)
  double max_relative_deviation = 0.0;
};

/// Jump across the spectrum computed two ways. Throws ConvergenceError when the
/// routes disagree by more than `tolerance` (relative to the largest sample).
SpectralMeasureResult spectral_measure_kernel(double lambda, const FracParams& params,
                                              std::span<const double> radii,
                                              double tolerance = 1e-5);

/// Normalized jump lambda^{2a-n} [R^+ - R^-] as a function of rho.
cplx normalized_jump(const FracParams& params, double rho);

/// Split of the normalized jump into e^{i rho} F_+ + e^{-i rho} F_-.
/// Hankel split for rho >= 2, e^{-+ i rho} jump/2 for rho <= 1, blended between.
std::pair<cplx, cplx> extract_Fpm(double rho, const FracParams& params);

enum class AmplitudeKind { F, FPlus, FMinus };

struct BoundReport {
  int derivative_order = 0;
  double sup_coarse = 0.0;
  double sup_fine = 0.0;
  double drift = 0.0;           ///< relative change of the sup between refinements
  double worst_rho = 0.0;
  /// Small-argument variant (only for N >= 1, rho <= 1).
  double small_sup_coarse = 0.0;
  double small_sup_fine = 0.0;
  double small_drift = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

struct BoundSampling {
  double rho_min = 1e-2;
  double rho_max = 1e2;
  int samples_per_decade = 24;  ///< coarse level; the fine level doubles it
  double relative_step = 5e-3;  ///< central-difference step in lambda, relative
};

/// Ratio sups of |d^N/d lambda^N F(lambda r)| lambda^N / <lambda r>^{p}, with
/// p = (n+1)/2 - 2 alpha for F and p = -(n-1)/2 for F_+-, at two sample
/// densities. 0 <= N <= (n+1+4 alpha)/2.
BoundReport verify_derivative_bounds(AmplitudeKind kind, int N, const FracParams& params,
                                     const BoundSampling& sampling = {});

enum class Regime { FourAlphaAboveN, FourAlphaEqualsN, FourAlphaBelowN };
std::string to_string(Regime regime);

struct ExpansionError {
  double lambda = 0.0;
  double r = 0.0;
  cplx E_value;
  Regime regime = Regime::FourAlphaAboveN;
  double predicted_bound = 0.0;
};

Regime low_energy_regime(const FracParams& params);

/// E = R_0^+(lambda^{2a})(r) - C_alpha r^{2a-n} for 0 < lambda < 1.
ExpansionError low_energy_error(double lambda, double r, const FracParams& params);

struct RieszKernel {
  double C_alpha = 0.0;
  double exponent = 0.0;           ///< 2 alpha - n
  double gamma_value = 0.0;        ///< Gamma-function expression
  double cross_radius_spread = 0.0;

  double operator()(double r) const;
};

/// C_alpha from the lambda -> 0 limit of the free resolvent at several radii.
RieszKernel riesz_constant(const FracParams& params);

}  // namespace fracdisp
