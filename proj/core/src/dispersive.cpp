#include "fracdisp/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fracdisp/errors.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_smoothing(const FracParams& p, bool smoothing) {
  if (smoothing)
    require(p.n() == 2 && p.alpha() < 1.0, "smoothing is defined for n = 2, alpha < 1");
}

// Stone weight (alpha / (pi i)) lambda^{2a-1} [lambda^{2a-2}] chi(lambda/L) band(lambda).
double stone_weight(double lambda, const FracParams& p, const StoneOptions& opt, EnergyBand band) {
  const double a = p.alpha();
  double w = std::pow(lambda, 2.0 * a - 1.0);
  if (opt.smoothing) w *= std::pow(lambda, 2.0 * a - 2.0);
  const CutoffSpec chi{1.0, 2.0};
  w *= chi.chi(lambda / opt.L);
  if (band == EnergyBand::Low) w *= chi.chi(lambda);
  if (band == EnergyBand::High) w *= chi.complement(lambda);
  return w;
}

std::pair<double, double> band_interval(const StoneOptions& opt, EnergyBand band) {
  double lo = 0.0, hi = 2.0 * opt.L;
  if (band == EnergyBand::Low) hi = std::min(hi, 2.0);
  if (band == EnergyBand::High) lo = 1.0;
  return {lo, hi};
}

cplx kStonePrefactor(double alpha) { return alpha / (kPi * kI); }

}  // namespace

cplx free_stone_kernel(double t, double r, const FracParams& params, const StoneOptions& opt,
                       EnergyBand band) {
  require(t != 0.0, "free_stone_kernel: t must be nonzero");
  require(r >= 0.0, "free_stone_kernel: r must be nonnegative");
  require(opt.L > 0.0, "free_stone_kernel: L must be positive");
  check_smoothing(params, opt.smoothing);
  if (t < 0.0) return std::conj(free_stone_kernel(-t, r, params, opt, band));
  const auto [lo, hi] = band_interval(opt, band);
  if (hi <= lo) return 0.0;
  const double a = params.alpha();
  const double n = params.n();
  auto base = [&](double lam) { return stone_weight(lam, params, opt, band) * std::pow(lam, n - 2.0 * a); };
  cplx sum = 0.0;
  if (r == 0.0) {
    const cplx j0 = normalized_jump(params, 0.0);
    sum = oscillatory_integral(PhaseSpec{t, 0.0, a}, [&](double lam) { return base(lam) * j0; }, lo,
                               hi, opt.quadrature)
              .value;
  } else {
    sum += oscillatory_integral(
               PhaseSpec{t, r, a},
               [&](double lam) { return base(lam) * extract_Fpm(lam * r, params).first; }, lo, hi,
               opt.quadrature)
               .value;
    sum += oscillatory_integral(
               PhaseSpec{t, -r, a},
               [&](double lam) { return base(lam) * extract_Fpm(lam * r, params).second; }, lo, hi,
               opt.quadrature)
               .value;
  }
  return kStonePrefactor(a) * sum;
}

std::vector<std::size_t> buffered_points(const SpatialGrid& grid, double fraction) {
  require(fraction > 0.0 && fraction <= 1.0, "buffered_points: fraction must lie in (0, 1]");
  const double radius = grid.mode() == GridMode::Radial
                            ? fraction * grid.points_per_axis() * grid.spacing()
                            : fraction * grid.extent();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.norm(i) <= radius * (1.0 + 1e-12)) out.push_back(i);
  return out;
}

std::vector<std::size_t> sup_columns(const SpatialGrid& grid, int count, double fraction) {
  require(count >= 1, "sup_columns: count must be positive");
  const std::vector<std::size_t> pool = buffered_points(grid, fraction);
  require(!pool.empty(), "sup_columns: empty buffer");
  const double radius = grid.mode() == GridMode::Radial
                            ? fraction * grid.points_per_axis() * grid.spacing()
                            : fraction * grid.extent();
  std::vector<std::size_t> out;
  for (int k = 0; k < count; ++k) {
    const double target = radius * k / count;
    const double comp = grid.mode() == GridMode::Radial ? target : target / std::sqrt(grid.dim());
    std::size_t best = pool.front();
    double best_d = 1e300;
    for (std::size_t i : pool) {
      double d = 0.0;
      for (int c = 0; c < grid.dim(); ++c) d += std::pow(grid.node(i)[c] - comp, 2);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
  }
  return out;
}

StoneEvolver::StoneEvolver(const FracParams& params, const PotentialSpec& pot,
                           const SpatialGrid& grid, std::vector<std::size_t> rows,
                           std::vector<std::size_t> cols, const StoneOptions& opt)
    : params_(params), grid_(grid), rows_(std::move(rows)), cols_(std::move(cols)), opt_(opt) {
  check_smoothing(params, opt.smoothing);
  require(grid.dim() == params.n(), "StoneEvolver: grid dimension must equal n");
  require(opt.L > 0.0 && opt.table_step > 0.0, "StoneEvolver: L and table_step must be positive");
  const Potential sampled = sample_potential(pot, grid);
  free_ = sampled.is_zero();
  if (free_) return;
  require(grid.mode() == GridMode::FullTensor,
          "StoneEvolver: perturbed Stone kernels need a full-tensor grid");
  const std::vector<std::size_t> S = sampled.support();
  for (double x = 1e-3; x < 0.1; x *= 1.6) nodes_.push_back(x);
  for (double x = 0.1; x < 2.0 * opt.L + opt.table_step; x += opt.table_step) nodes_.push_back(x);
  const std::size_t P = rows_.size() * cols_.size();
  table_.assign(P, std::vector<cplx>(nodes_.size()));
  phase_len_.resize(P);
  for (std::size_t a = 0; a < rows_.size(); ++a)
    for (std::size_t b = 0; b < cols_.size(); ++b)
      phase_len_[a * cols_.size() + b] = grid.norm(rows_[a]) + grid.norm(cols_[b]);
  min_sigma_ = 1e300;
  for (std::size_t q = 0; q < nodes_.size(); ++q) {
    const SpectralPoint pt{nodes_[q], 0.0, Sign::Plus};
    const FreeKernel K(params, grid, pt);
    const BSOperator m = build_m_matrix(pt, sampled, grid, params);
    const RVector sv = singular_values(m);
    min_sigma_ = std::min(min_sigma_, sv(sv.size() - 1));
    if (sv(sv.size() - 1) * 1e8 < sv(0))
      throw ConvergenceError("StoneEvolver: M near-singular at lambda = " + std::to_string(nodes_[q]));
    const Eigen::PartialPivLU<CMatrix> lu(m.matrix);
    const CMatrix right = m.vs.asDiagonal() * K.block(S, cols_);
    const CMatrix corr = (K.block(rows_, S) * m.vs.asDiagonal()) * lu.solve(right);
    for (std::size_t a = 0; a < rows_.size(); ++a)
      for (std::size_t b = 0; b < cols_.size(); ++b) {
        const std::size_t p = a * cols_.size() + b;
        table_[p][q] = std::exp(-kI * nodes_[q] * phase_len_[p]) * corr(a, b);
      }
  }
}

EvolutionKernel StoneEvolver::kernel(double t, EnergyBand band) const {
  require(t != 0.0, "stone_evolution_kernel: t must be nonzero");
  EvolutionKernel out;
  out.t = t;
  out.rows = rows_;
  out.cols = cols_;
  if (t < 0.0) {
    out = kernel(-t, band);
    out.t = t;
    out.values = out.values.conjugate();
    return out;
  }
  out.values.resize(rows_.size(), cols_.size());
  const auto [lo, hi] = band_interval(opt_, band);
  std::map<long long, cplx> free_cache;
  const double a = params_.alpha();
  for (std::size_t ia = 0; ia < rows_.size(); ++ia)
    for (std::size_t ib = 0; ib < cols_.size(); ++ib) {
      const double r = grid_.distance(rows_[ia], cols_[ib]);
      const long long key = std::llround(r * r / (grid_.spacing() * grid_.spacing()) * 16.0);
      cplx value;
      if (auto it = free_cache.find(key); it != free_cache.end()) {
        value = it->second;
      } else {
        value = free_stone_kernel(t, r, params_, opt_, band);
        free_cache.emplace(key, value);
      }
      if (!free_ && hi > lo) {
        const std::size_t p = ia * cols_.size() + ib;
        const SampledAmplitude amp(nodes_, table_[p]);
        const double S = phase_len_[p];
        auto w = [&](double lam) { return stone_weight(lam, params_, opt_, band); };
        const cplx plus = oscillatory_integral(PhaseSpec{t, S, a},
                                               [&](double lam) { return w(lam) * amp(lam); }, lo, hi,
                                               opt_.quadrature)
                              .value;
        const cplx minus =
            oscillatory_integral(PhaseSpec{t, -S, a},
                                 [&](double lam) { return w(lam) * std::conj(amp(lam)); }, lo, hi,
                                 opt_.quadrature)
                .value;
        value -= kStonePrefactor(a) * (plus - minus);
      }
      out.values(ia, ib) = value;
    }
  return out;
}

EvolutionKernel stone_evolution_kernel(double t, const FracParams& params, const PotentialSpec& pot,
                                       const SpatialGrid& grid, const StoneOptions& opt) {
  const StoneEvolver ev(params, pot, grid, buffered_points(grid), sup_columns(grid), opt);
  return ev.kernel(t);
}

EigenbasisEvolver::EigenbasisEvolver(const FracParams& params, const PotentialSpec& pot,
                                     const SpatialGrid& grid, bool smoothing)
    : params_(params), smoothing_(smoothing) {
  check_smoothing(params, smoothing);
  require(grid.size() <= 4096, "eigenbasis evolution: grid too large for dense diagonalization");
  ham_ = discretize_hamiltonian(params, sample_potential(pot, grid), grid);
  eig_ = diagonalize(ham_);
  bound_ = bound_states(ham_, eig_);
}

EvolutionKernel EigenbasisEvolver::kernel(double t, const std::vector<std::size_t>& rows,
                                          const std::vector<std::size_t>& cols,
                                          double cutoff) const {
  const double s = smoothing_ ? 1.0 - 1.0 / params_.alpha() : 0.0;
  const Eigen::Index m = eig_.values.size();
  CVector d = CVector::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double E = eig_.values(j);
    if (E <= 0.0) continue;
    double w = std::pow(E, s);
    if (cutoff > 0.0) w *= CutoffSpec{1.0, 2.0}.chi(std::pow(E, 0.5 / params_.alpha()) / cutoff);
    d(j) = std::polar(w, t * E);
  }
  RMatrix ur(rows.size(), m), uc(cols.size(), m);
  for (std::size_t a = 0; a < rows.size(); ++a)
    ur.row(a) = ham_.value_scale(rows[a]) * eig_.vectors.row(rows[a]);
  for (std::size_t b = 0; b < cols.size(); ++b)
    uc.row(b) = ham_.value_scale(cols[b]) * eig_.vectors.row(cols[b]);
  EvolutionKernel out;
  out.t = t;
  out.rows = rows;
  out.cols = cols;
  out.values = ur.cast<cplx>() * d.asDiagonal() * uc.transpose().cast<cplx>();
  return out;
}

EvolutionKernel eigenbasis_evolution_kernel(double t, const FracParams& params,
                                            const PotentialSpec& pot, const SpatialGrid& grid,
                                            bool smoothing) {
  const EigenbasisEvolver ev(params, pot, grid, smoothing);
  std::vector<std::size_t> all(grid.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return ev.kernel(t, all, all);
}

std::string to_string(EvolutionMethod m) {
  switch (m) {
    case EvolutionMethod::Stone: return "stone";
    case EvolutionMethod::Eigenbasis: return "eigenbasis";
    case EvolutionMethod::Both: return "both";
  }
  return "?";
}

EvolutionMethod parse_evolution_method(const std::string& name) {
  if (name == "stone") return EvolutionMethod::Stone;
  if (name == "eigenbasis") return EvolutionMethod::Eigenbasis;
  if (name == "both") return EvolutionMethod::Both;
  throw ValidationError("unknown evolution method '" + name + "' (stone | eigenbasis | both)");
}

double dispersive_target(const FracParams& params, bool smoothing) {
  if (smoothing) return 1.0;
  return params.n() / (2.0 * params.alpha());
}

namespace {

std::vector<double> geometric_times(double lo, double hi, int count) {
  require(lo > 0.0 && hi > lo && count >= 2, "t window must satisfy 0 < t_min < t_max, count >= 2");
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return t;
}

template <class F>
void guarded(DispersiveReport& rep, const std::string& stage, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    rep.errors.push_back(stage + ": " + e.what());
  }
}

}  // namespace

DispersiveReport dispersive_experiment(const DispersiveConfig& cfg) {
  const FracParams params(cfg.alpha, cfg.n);
  check_smoothing(params, cfg.smoothing);
  DispersiveReport rep;
  rep.t = geometric_times(cfg.t_min, cfg.t_max, cfg.t_count);
  rep.target = dispersive_target(params, cfg.smoothing);
  StoneOptions opt;
  opt.L = cfg.L;
  opt.smoothing = cfg.smoothing;
  StoneOptions opt2 = opt;
  opt2.L = 2.0 * cfg.L;
  const bool free = cfg.potential.amplitude == 0.0;
  const bool want_stone = cfg.method != EvolutionMethod::Eigenbasis;
  const bool want_eigen = cfg.method != EvolutionMethod::Stone;

  if (free && want_stone) {
    guarded(rep, "stone", [&] {
      for (double t : rep.t) {
        double s = 0.0, lo = 0.0, hi = 0.0, s2 = 0.0;
        for (int k = 0; k < cfg.free_rho_count; ++k) {
          const double rho = cfg.free_rho_max * k / std::max(1, cfg.free_rho_count - 1);
          const double r = rho * std::pow(t, 1.0 / (2.0 * cfg.alpha));
          s = std::max(s, std::abs(free_stone_kernel(t, r, params, opt)));
          lo = std::max(lo, std::abs(free_stone_kernel(t, r, params, opt, EnergyBand::Low)));
          hi = std::max(hi, std::abs(free_stone_kernel(t, r, params, opt, EnergyBand::High)));
          if (cfg.double_L) s2 = std::max(s2, std::abs(free_stone_kernel(t, r, params, opt2)));
        }
        rep.sup_stone.push_back(s);
        rep.sup_low.push_back(lo);
        rep.sup_high.push_back(hi);
        if (cfg.double_L) rep.sup_stone_2L.push_back(s2);
      }
    });
  }

  std::optional<SpatialGrid> grid;
  std::vector<std::size_t> rows, cols;
  if (!free || want_eigen) {
    guarded(rep, "grid", [&] {
      grid = make_grid(cfg.n, cfg.extent, cfg.points, cfg.mode);
      rows = buffered_points(*grid);
      cols = sup_columns(*grid, cfg.columns);
    });
  }
  if (grid && !free && 2.0 * cfg.alpha < cfg.n) {
    guarded(rep, "threshold", [&] {
      const Potential pot = sample_potential(cfg.potential, *grid);
      const RVector sv = singular_values(build_m_matrix(0.0, Sign::Plus, pot, *grid, params));
      rep.threshold_sigma_min = sv(sv.size() - 1);
      rep.threshold_flag = rep.threshold_sigma_min < 0.1;
    });
  }
  std::vector<EvolutionKernel> stone_k, eigen_k;
  if (grid && !free && want_stone) {
    guarded(rep, "stone", [&] {
      const StoneEvolver ev(params, cfg.potential, *grid, rows, cols, opt);
      for (double t : rep.t) {
        stone_k.push_back(ev.kernel(t));
        rep.sup_stone.push_back(stone_k.back().sup());
        rep.sup_low.push_back(ev.kernel(t, EnergyBand::Low).sup());
        rep.sup_high.push_back(ev.kernel(t, EnergyBand::High).sup());
      }
      if (cfg.double_L) {
        const StoneEvolver ev2(params, cfg.potential, *grid, rows, cols, opt2);
        for (double t : rep.t) rep.sup_stone_2L.push_back(ev2.kernel(t).sup());
      }
    });
  }
  if (grid && want_eigen) {
    guarded(rep, "eigenbasis", [&] {
      const EigenbasisEvolver ev(params, cfg.potential, *grid, cfg.smoothing);
      for (double t : rep.t) {
        eigen_k.push_back(ev.kernel(t, rows, cols));
        rep.sup_eigen.push_back(eigen_k.back().sup());
      }
    });
  }
  if (!stone_k.empty() && stone_k.size() == eigen_k.size()) {
    for (std::size_t k = 0; k < stone_k.size(); ++k)
      rep.cross_difference.push_back((stone_k[k].values - eigen_k[k].values).cwiseAbs().maxCoeff() /
                                     eigen_k[k].sup());
  }
  if (rep.sup_stone.size() == rep.t.size())
    guarded(rep, "fit", [&] { rep.fit_stone = decay_rate_fit(rep.t, rep.sup_stone); });
  if (rep.sup_eigen.size() == rep.t.size())
    guarded(rep, "fit", [&] { rep.fit_eigen = decay_rate_fit(rep.t, rep.sup_eigen); });
  if (rep.sup_stone_2L.size() == rep.t.size())
    guarded(rep, "fit", [&] { rep.fit_stone_2L = decay_rate_fit(rep.t, rep.sup_stone_2L); });
  return rep;
}

}  // namespace fracdisp
