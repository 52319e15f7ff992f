#pragma once

#include <span>
#include <vector>

#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/params.hpp"

namespace fracdisp {

/// Pieces of 1/(|xi|^{2a} - z^{2a}) for |z| = 1:
///   h_ctr  = chi(4|xi|) / (...)
///   h_tail = (1 - chi(|xi|/2)) / (...)
///   h_ann  = (chi(|xi|/2) - chi(4|xi|)) / (...)
/// and J(z, xi) = 1/(|xi|^{2a} - z^{2a}) - 1/(a z^{2a-2}(|xi|^2 - z^2)).
struct SymbolDecomposition {
  cplx z;
  std::vector<double> xi;
  std::vector<cplx> full;
  std::vector<cplx> h_ctr;
  std::vector<cplx> h_tail;
  std::vector<cplx> h_ann;
  std::vector<cplx> J_ann;
};

/// J(z, zeta) with zeta = |xi|/z; the removable singularity at zeta = 1 is
/// handled by a Taylor quotient for |zeta - 1| < 0.05.
cplx annulus_correction(cplx zeta, cplx z, double alpha);

/// z = e^{i arg_z}, 0 < arg_z < pi/(2 alpha).
SymbolDecomposition symbol_decomposition(double arg_z, const FracParams& params,
                                         const CutoffSpec& cutoff, std::span<const double> xi);

enum class TailPiece { Tail, Center };

/// Fourier transform of h_tail or h_ctr at the boundary value z = 1.
double h_piece_transform(TailPiece piece, const FracParams& params, double rho,
                         const CutoffSpec& cutoff = {});

/// Ratio sups of |d^N/drho^N h^(rho)| against rho^{2a-n-N} (tail) or
/// <rho>^{-n-2a-N} (center) at two sample densities.
BoundReport tail_fourier_bound(TailPiece piece, int N, const FracParams& params,
                               const BoundSampling& sampling = {});

}  // namespace fracdisp
