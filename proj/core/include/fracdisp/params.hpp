#pragma once

#include <complex>
#include <optional>

namespace fracdisp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Order alpha of (-Delta)^alpha and the spatial dimension n.
class FracParams {
 public:
  FracParams(double alpha, int n);

  double alpha() const { return alpha_; }
  int n() const { return n_; }

  /// Zero is a regular point of the free operator iff 2 alpha < n.
  bool threshold_regular_free() const { return 2.0 * alpha_ < n_; }
  /// (n+1)/4 <= alpha < n/2, the range where the dispersive rate n/(2 alpha) is expected.
  bool high_energy_ok() const;

  /// Bessel order n/2 - 1 of the radial Fourier transform.
  double bessel_order() const { return 0.5 * n_ - 1.0; }

  bool operator==(const FracParams&) const = default;

 private:
  double alpha_;
  int n_;
};

/// Smooth cutoff: chi == 1 on [0, inner], chi == 0 on [outer, inf).
struct CutoffSpec {
  double inner = 1.0;
  double outer = 2.0;

  double chi(double s) const;
  /// 1 - chi(s); computed so that chi(s) + complement(s) == 1 exactly.
  double complement(double s) const { return 1.0 - chi(s); }
  void validate() const;
};

/// Phase t*lambda^{2 alpha} + lambda*R of a Stone-formula integrand.
struct PhaseSpec {
  double t = 0.0;
  double R = 0.0;
  double alpha = 1.0;

  double phase(double lambda) const;
  double phase_derivative(double lambda) const;
  /// Critical point of the phase; present only when t < 0 and R > 0.
  std::optional<double> stationary_point() const;
};

}  // namespace fracdisp
