#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/grid.hpp"
#include "fracdisp/hamiltonian.hpp"
#include "fracdisp/oscillatory.hpp"
#include "fracdisp/perturbed.hpp"
#include "fracdisp/power_fit.hpp"

namespace fracdisp {

/// Spectral band of the Stone integrand: chi(lambda) splits at lambda ~ 1.
enum class EnergyBand { All, Low, High };

struct StoneOptions {
  double L = 2.0;          ///< frequency cutoff chi(lambda / L)
  bool smoothing = false;  ///< weight lambda^{4 alpha - 3} (n = 2, alpha < 1)
  OscillatoryOptions quadrature{1e-6, 1e-14, 8.0, 16, 8};
  double table_step = 0.04;  ///< lambda spacing of tabulated perturbation amplitudes
};

/// e^{itH_0} P_ac at distance r from Stone's formula with the closed-form
/// free jump split as e^{i lambda r} F_+ + e^{-i lambda r} F_-.
cplx free_stone_kernel(double t, double r, const FracParams& params, const StoneOptions& opt,
                       EnergyBand band = EnergyBand::All);

struct EvolutionKernel {
  double t = 0.0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  CMatrix values;
  double sup() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

/// Grid points with |x| <= fraction * extent (boundary buffer for sups).
std::vector<std::size_t> buffered_points(const SpatialGrid& grid, double fraction = 0.5);
/// Subsample of the buffered points used as kernel columns: the node closest
/// to the origin and points along a diagonal ray.
std::vector<std::size_t> sup_columns(const SpatialGrid& grid, int count = 3, double fraction = 0.5);

/// Stone's formula for e^{itH} P_ac between row and column nodes of a
/// full-tensor grid. Perturbation amplitudes R_0 v M^{-1} v R_0 are tabulated
/// in lambda once (phase e^{i lambda (|x| + |y|)} factored out) and reused
/// for every t.
class StoneEvolver {
 public:
  StoneEvolver(const FracParams& params, const PotentialSpec& pot, const SpatialGrid& grid,
               std::vector<std::size_t> rows, std::vector<std::size_t> cols,
               const StoneOptions& opt = {});
  EvolutionKernel kernel(double t, EnergyBand band = EnergyBand::All) const;
  double min_m_singular_value() const { return min_sigma_; }

 private:
  FracParams params_;
  SpatialGrid grid_;
  std::vector<std::size_t> rows_, cols_;
  StoneOptions opt_;
  bool free_ = true;
  std::vector<double> nodes_;
  std::vector<std::vector<cplx>> table_;  // per pair, per node
  std::vector<double> phase_len_;         // |x| + |y| per pair
  double min_sigma_ = 0.0;
};

EvolutionKernel stone_evolution_kernel(double t, const FracParams& params, const PotentialSpec& pot,
                                       const SpatialGrid& grid, const StoneOptions& opt = {});

/// sum_{E_j > 0} e^{i t E_j} E_j^s psi_j(x) psi_j(y), s = 0 or 1 - 1/alpha.
class EigenbasisEvolver {
 public:
  EigenbasisEvolver(const FracParams& params, const PotentialSpec& pot, const SpatialGrid& grid,
                    bool smoothing);
  /// `cutoff` > 0 applies chi(E^{1/(2 alpha)} / cutoff) (diagnostic).
  EvolutionKernel kernel(double t, const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols, double cutoff = 0.0) const;
  const BoundStateSet& bound() const { return bound_; }

 private:
  FracParams params_;
  bool smoothing_;
  DiscreteHamiltonian ham_;
  Eigensystem eig_;
  BoundStateSet bound_;
};

EvolutionKernel eigenbasis_evolution_kernel(double t, const FracParams& params,
                                            const PotentialSpec& pot, const SpatialGrid& grid,
                                            bool smoothing);

enum class EvolutionMethod { Stone, Eigenbasis, Both };
std::string to_string(EvolutionMethod m);
EvolutionMethod parse_evolution_method(const std::string& name);

struct DispersiveConfig {
  double alpha = 1.25;
  int n = 3;
  PotentialSpec potential;  ///< amplitude 0: free run
  double extent = 6.0;
  int points = 48;
  GridMode mode = GridMode::FullTensor;
  double t_min = 10.0;
  double t_max = 1000.0;
  int t_count = 8;
  EvolutionMethod method = EvolutionMethod::Stone;
  bool smoothing = false;
  double L = 2.0;
  int columns = 3;
  /// Free runs sample r = rho t^{1/(2 alpha)}, rho in [0, free_rho_max].
  double free_rho_max = 4.0;
  int free_rho_count = 9;
  bool double_L = false;
};

struct DispersiveReport {
  std::vector<double> t;
  std::vector<double> sup_stone;
  std::vector<double> sup_eigen;
  std::vector<double> sup_low;
  std::vector<double> sup_high;
  std::vector<double> sup_stone_2L;
  std::optional<DecayFit> fit_stone;
  std::optional<DecayFit> fit_eigen;
  std::optional<DecayFit> fit_stone_2L;
  /// max_t sup|K_stone - K_eigen| / sup|K_eigen|
  std::vector<double> cross_difference;
  double target = 0.0;
  bool threshold_flag = false;
  double threshold_sigma_min = 0.0;
  std::vector<std::string> errors;
};

DispersiveReport dispersive_experiment(const DispersiveConfig& config);

/// Expected decay rate: n/(2 alpha), or 1 for the smoothed n = 2 estimate.
double dispersive_target(const FracParams& params, bool smoothing);

}  // namespace fracdisp
