#include "fracdisp/perturbed.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "fracdisp/errors.hpp"
#include "fracdisp/quadrature.hpp"
#include "fracdisp/special_functions.hpp"

namespace fracdisp {

namespace {

constexpr cplx kI{0.0, 1.0};

// B(rho) = int_0^rho Phi(u) u du for n = 3, 1/2 < alpha < 2.
cplx radial_antiderivative(double alpha, double rho) {
  cplx value = (std::exp(kI * rho) - 1.0) / (4.0 * kPi * alpha * kI);
  if (rho == 0.0 || std::abs(alpha - std::round(alpha)) < 1e-14) return value;
  const double c = std::cos(kPi * alpha);
  const double kappa = std::sin(kPi * alpha) / (2.0 * kPi * kPi);
  const double S = std::max(10.0, 60.0 / rho);
  auto f = [&](double s) {
    const double s2a = std::pow(s, 2.0 * alpha);
    return s2a * -std::expm1(-s * rho) / (s2a * s2a - 2.0 * s2a * c + 1.0);
  };
  std::vector<double> breaks{0.0};
  for (double b : geometric_breaks(std::min(1e-2, 1e-2 / rho), S, 2.0)) breaks.push_back(b);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  AdaptiveOptions opt;
  opt.rel_tol = 1e-12;
  bool ok = true;
  const double body = integrate_breakpoints(f, breaks, opt, &ok);
  if (!ok) throw ConvergenceError("radial kernel: antiderivative quadrature did not converge");
  // 1/(x^2 - 2cx + 1) = sum U_k(c) x^k with x = s^{-2 alpha}.
  double tail = 0.0, u_prev = 0.0, u = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double p = 2.0 * alpha * (k + 1) - 1.0;
    const double term = u * std::pow(S, -p) / p;
    tail += term;
    if (std::abs(term) < 1e-17 * std::abs(tail)) break;
    const double next = 2.0 * c * u - u_prev;
    u_prev = u;
    u = next;
  }
  return value + kappa * (body + tail);
}

long long tensor_key(const SpatialGrid& g, std::size_t i, std::size_t j) {
  const double h = g.spacing();
  long long m = 0;
  for (int d = 0; d < g.dim(); ++d) {
    const long long k = std::llround((g.node(i)[d] - g.node(j)[d]) / h);
    m += k * k;
  }
  return m;
}

}  // namespace

FreeKernel::FreeKernel(const FracParams& params, const SpatialGrid& grid, const SpectralPoint& pt)
    : FreeKernel(params, grid, pt, false) {}

FreeKernel FreeKernel::greens(const FracParams& params, const SpatialGrid& grid) {
  return FreeKernel(params, grid, SpectralPoint{0.0, 0.0, Sign::Plus}, true);
}

FreeKernel::FreeKernel(const FracParams& params, const SpatialGrid& grid, const SpectralPoint& pt,
                       bool greens)
    : params_(params), grid_(grid), pt_(pt), greens_(greens || pt.lambda == 0.0) {
  const double a = params.alpha();
  const int n = params.n();
  require(grid.dim() == n, "free kernel: grid dimension must equal n");
  require(pt.lambda >= 0.0 && pt.epsilon >= 0.0, "free kernel: needs lambda, epsilon >= 0");
  if (greens_) require(2.0 * a < n, "free kernel: G_0 requires 2 alpha < n");
  if (grid.mode() == GridMode::Radial) {
    require(n == 3, "free kernel: radial grids are supported for n = 3");
    if (!greens_) {
      require(a > 0.5 && a < 2.0, "free kernel: radial n = 3 kernel requires 1/2 < alpha < 2");
      require(pt.epsilon == 0.0, "free kernel: radial kernel is built at epsilon = 0");
    }
  } else {
    require(std::abs(2.0 * a - n) > 1e-12, "free kernel: 2 alpha = n (log kernel) unsupported");
    if (!greens_ && pt.epsilon == 0.0) require(a < 2.0, "free kernel: requires alpha < 2");
  }
  if (2.0 * a < n) riesz_c_ = riesz_constant(params).C_alpha;
}

cplx FreeKernel::profile(double d) const {
  const double a = params_.alpha();
  const int n = params_.n();
  if (greens_) return riesz_c_ * std::pow(d, 2.0 * a - n);
  if (pt_.epsilon > 0.0) return free_resolvent_value(pt_, params_, d);
  return std::pow(pt_.lambda, n - 2.0 * a) * scaled_resolvent(params_, pt_.lambda * d, pt_.sign);
}

cplx FreeKernel::tensor_diagonal() const {
  if (have_tensor_diag_) return tensor_diag_;
  const double a = params_.alpha();
  const int n = params_.n();
  const double h = grid_.spacing();
  cplx value;
  if (2.0 * a < n) {
    const double radius = h * std::pow(std::tgamma(0.5 * n + 1.0) / std::pow(kPi, 0.5 * n), 1.0 / n);
    value = riesz_c_ * n * std::pow(radius, 2.0 * a - n) / (2.0 * a);
    if (!greens_) {
      const double d0 = 1e-4 * h;
      value += profile(d0) - riesz_c_ * std::pow(d0, 2.0 * a - n);
    }
  } else {
    value = profile(1e-6 * h);
  }
  tensor_diag_ = value;
  have_tensor_diag_ = true;
  return value;
}

cplx FreeKernel::offset_value(long long m) const {
  require(grid_.mode() == GridMode::FullTensor, "offset_value: full-tensor grids only");
  if (m == 0) return tensor_diagonal();
  auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  const cplx v = profile(grid_.spacing() * std::sqrt(static_cast<double>(m)));
  cache_.emplace(m, v);
  return v;
}

cplx FreeKernel::radial_A(double d) const {
  const double a = params_.alpha();
  if (greens_) {
    if (std::abs(a - 0.5) < 1e-14) return riesz_c_ * std::log(d);
    return riesz_c_ * std::pow(d, 2.0 * a - 1.0) / (2.0 * a - 1.0);
  }
  const cplx b = std::pow(pt_.lambda, 1.0 - 2.0 * a) * radial_antiderivative(a, pt_.lambda * d);
  return pt_.sign == Sign::Plus ? b : std::conj(b);
}

cplx FreeKernel::radial_pair(double r, double s) const {
  return (radial_A(r + s) - radial_A(std::abs(r - s))) / (2.0 * r * s);
}

cplx FreeKernel::radial_cell_average(std::size_t i) const {
  auto it = diag_cache_.find(static_cast<long long>(i));
  if (it != diag_cache_.end()) return it->second;
  const double h = grid_.spacing();
  const double r = grid_.node(i)[0];
  const GaussRule& g = gauss_legendre(16);
  cplx sum = 0.0;
  // s = r +- (h/2) u^3 removes the endpoint singularity at s = r.
  for (double side : {-1.0, 1.0}) {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double u = 0.5 * (g.nodes[q] + 1.0);
      const double s = r + side * 0.5 * h * u * u * u;
      const double jac = 0.5 * h * 3.0 * u * u * 0.5;
      sum += g.weights[q] * jac * radial_pair(r, s) * 4.0 * kPi * s * s;
    }
  }
  const cplx v = sum / grid_.weights()[i];
  diag_cache_.emplace(static_cast<long long>(i), v);
  return v;
}

cplx FreeKernel::operator()(std::size_t i, std::size_t j) const {
  if (grid_.mode() == GridMode::FullTensor) return offset_value(tensor_key(grid_, i, j));
  if (i == j) return radial_cell_average(i);
  const double r = grid_.node(i)[0];
  const double s = grid_.node(j)[0];
  const double h = grid_.spacing();
  const long long ks = std::llround(2.0 * (r + s) / h);
  const long long kd = std::llround(2.0 * std::abs(r - s) / h);
  auto lookup = [&](long long key, double d) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const cplx v = radial_A(d);
    cache_.emplace(key, v);
    return v;
  };
  return (lookup(ks, r + s) - lookup(kd, std::abs(r - s))) / (2.0 * r * s);
}

CMatrix FreeKernel::block(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  CMatrix m(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) m(a, b) = (*this)(rows[a], cols[b]);
  return m;
}

CMatrix FreeKernel::full() const {
  std::vector<std::size_t> idx(grid_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return block(idx, idx);
}

BSOperator build_m_matrix(const SpectralPoint& pt, const Potential& pot, const SpatialGrid& grid,
                          const FracParams& params) {
  require(pot.V.size() == grid.size(), "build_m_matrix: potential does not match grid");
  BSOperator m;
  m.lambda = pt.lambda;
  m.sign = pt.sign;
  m.support = pot.support();
  require(!m.support.empty(), "build_m_matrix: V == 0 leaves U + v R_0 v undefined");
  const FreeKernel K = pt.lambda == 0.0 ? FreeKernel::greens(params, grid) : FreeKernel(params, grid, pt);
  const std::size_t S = m.support.size();
  m.vs.resize(S);
  for (std::size_t a = 0; a < S; ++a) {
    const std::size_t i = m.support[a];
    m.vs(a) = pot.v[i] * std::sqrt(grid.weights()[i]);
  }
  m.matrix = m.vs.asDiagonal() * K.block(m.support, m.support) * m.vs.asDiagonal();
  for (std::size_t a = 0; a < S; ++a) m.matrix(a, a) += pot.U[m.support[a]];
  return m;
}

BSOperator build_m_matrix(double lambda, Sign sign, const Potential& pot, const SpatialGrid& grid,
                          const FracParams& params) {
  return build_m_matrix(SpectralPoint{lambda, 0.0, sign}, pot, grid, params);
}

RVector singular_values(const BSOperator& m) {
  Eigen::BDCSVD<CMatrix> svd(m.matrix);
  return svd.singularValues();
}

namespace {

// Solver for M with a conditioning check.
Eigen::PartialPivLU<CMatrix> factor_checked(const BSOperator& m) {
  const RVector sv = singular_values(m);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > 1e8)
    throw ConvergenceError("M is near-singular (smallest singular value " + std::to_string(smin) +
                           "); numerical embedded resonance");
  return Eigen::PartialPivLU<CMatrix>(m.matrix);
}

}  // namespace

CMatrix perturbed_resolvent_block(const SpectralPoint& pt, const Potential& pot,
                                  const SpatialGrid& grid, const FracParams& params,
                                  std::span<const std::size_t> rows,
                                  std::span<const std::size_t> cols) {
  require(pt.lambda > 0.0, "perturbed_resolvent: requires lambda > 0");
  const FreeKernel K(params, grid, pt);
  CMatrix out = K.block(rows, cols);
  if (pot.is_zero()) return out;
  const BSOperator m = build_m_matrix(pt, pot, grid, params);
  const auto lu = factor_checked(m);
  const CMatrix right = m.vs.asDiagonal() * K.block(m.support, cols);
  const CMatrix left = K.block(rows, m.support) * m.vs.asDiagonal();
  out -= left * lu.solve(right);
  return out;
}

CMatrix perturbed_resolvent(const SpectralPoint& pt, const Potential& pot, const SpatialGrid& grid,
                            const FracParams& params) {
  std::vector<std::size_t> idx(grid.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return perturbed_resolvent_block(pt, pot, grid, params, idx, idx);
}

CMatrix perturbed_resolvent(double lambda, Sign sign, const Potential& pot, const SpatialGrid& grid,
                            const FracParams& params) {
  return perturbed_resolvent(SpectralPoint{lambda, 0.0, sign}, pot, grid, params);
}

BornResult born_series_sum(int K, const SpectralPoint& pt, const Potential& pot,
                           const SpatialGrid& grid, const FracParams& params) {
  require(K >= 0 && K <= 12, "born_series_sum: K must lie in [0, 12]");
  require(pt.lambda > 0.0, "born_series_sum: requires lambda > 0");
  const FreeKernel R0(params, grid, pt);
  BornResult out;
  out.kernel = R0.full();
  out.term_norms.push_back(1.0);
  const std::vector<std::size_t> S = pot.support();
  if (S.empty() || K == 0) return out;
  std::vector<std::size_t> all(grid.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  RVector wV(S.size()), vs(S.size());
  for (std::size_t a = 0; a < S.size(); ++a) {
    wV(a) = grid.weights()[S[a]] * pot.V[S[a]];
    vs(a) = pot.v[S[a]] * std::sqrt(grid.weights()[S[a]]);
  }
  const CMatrix KSS = R0.block(S, S);
  const CMatrix KxS = R0.block(all, S);
  const CMatrix core = vs.asDiagonal() * KSS * vs.asDiagonal();
  CMatrix core_pow = CMatrix::Identity(S.size(), S.size());
  CMatrix Y = wV.asDiagonal() * KxS.transpose();  // P K(S, :), kernel symmetric
  for (int k = 1; k <= 2 * K; ++k) {
    core_pow = core_pow * core;
    const double tn = spectral_norm(core_pow);
    out.term_norms.push_back(tn);
    if (!std::isfinite(tn) || tn > 1e8) {
      out.diverged = true;
      break;
    }
    out.kernel += (k % 2 == 0 ? 1.0 : -1.0) * (KxS * Y);
    Y = wV.asDiagonal() * (KSS * Y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Limiting-absorption scaling.

namespace {

using Apply = std::function<CVector(const CVector&)>;

// Largest singular value of B (B^T = B) by Lanczos on B^* B.
double largest_singular_value(const Apply& B, Eigen::Index dim, int max_steps, double tol) {
  auto BhB = [&](const CVector& x) {
    const CVector y = B(x);
    return CVector(B(y.conjugate()).conjugate());
  };
  std::vector<CVector> Q;
  CVector q = CVector::Ones(dim);
  for (Eigen::Index i = 0; i < dim; ++i) q(i) = 1.0 + 0.37 * std::sin(1.3 * i);
  q.normalize();
  std::vector<double> al, be;
  double prev = 0.0;
  for (int k = 0; k < std::min<int>(max_steps, static_cast<int>(dim)); ++k) {
    Q.push_back(q);
    CVector w = BhB(q);
    const double a = q.dot(w).real();
    al.push_back(a);
    for (const CVector& v : Q) w -= v * v.dot(w);
    for (const CVector& v : Q) w -= v * v.dot(w);
    const double b = w.norm();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      T(i, i) = al[i];
      if (i < k) T(i, i + 1) = T(i + 1, i) = be[i];
    }
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T).eigenvalues().maxCoeff();
    if (k > 2 && std::abs(top - prev) <= tol * top) return std::sqrt(top);
    prev = top;
    if (b < 1e-14 * std::abs(top)) return std::sqrt(top);
    be.push_back(b);
    q = w / b;
  }
  return std::sqrt(prev);
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Coefficient-space action of the perturbed resolvent via FFT convolution.
class ConvResolvent {
 public:
  ConvResolvent(const FracParams& params, const SpatialGrid& grid, const Potential& pot,
                const SpectralPoint& pt)
      : grid_(grid), N_(grid.points_per_axis()), dim_(grid.dim()) {
    P_ = 2 * N_;
    const FreeKernel K(params, grid, pt);
    const double w = grid.weights()[0];
    std::vector<cplx> ker(total());
    for (std::size_t idx = 0; idx < ker.size(); ++idx) {
      long long m = 0;
      std::size_t rest = idx;
      for (int d = 0; d < dim_; ++d) {
        long long a = static_cast<long long>(rest % P_);
        rest /= P_;
        if (a >= P_ / 2) a -= P_;
        m += a * a;
      }
      ker[idx] = w * K.offset_value(m);
    }
    kernel_hat_ = fft(ker, false);
    support_ = pot.support();
    if (!support_.empty()) {
      const BSOperator M = build_m_matrix(pt, pot, grid, params);
      lu_ = factor_checked(M);
      v_.resize(support_.size());
      for (std::size_t a = 0; a < support_.size(); ++a) v_(a) = pot.v[support_[a]];
    }
  }

  CVector free_apply(const CVector& f) const {
    std::vector<cplx> buf(total(), 0.0);
    for (std::size_t i = 0; i < grid_.size(); ++i) buf[embed(i)] = f(i);
    std::vector<cplx> hat = fft(buf, false);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= kernel_hat_[i];
    const std::vector<cplx> back = fft(hat, true);
    CVector out(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) out(i) = back[embed(i)];
    return out;
  }

  CVector apply(const CVector& f) const {
    CVector g = free_apply(f);
    if (support_.empty()) return g;
    CVector b(support_.size());
    for (std::size_t a = 0; a < support_.size(); ++a) b(a) = v_(a) * g(support_[a]);
    const CVector x = lu_.solve(b);
    CVector h = CVector::Zero(grid_.size());
    for (std::size_t a = 0; a < support_.size(); ++a) h(support_[a]) = v_(a) * x(a);
    return g - free_apply(h);
  }

 private:
  std::size_t total() const {
    std::size_t t = 1;
    for (int d = 0; d < dim_; ++d) t *= static_cast<std::size_t>(P_);
    return t;
  }
  // Grid index -> padded index (axis-major order matching the grid).
  std::size_t embed(std::size_t i) const {
    std::size_t rest = i, out = 0, stride = 1;
    std::vector<std::size_t> digits(dim_);
    for (int d = dim_ - 1; d >= 0; --d) {
      digits[d] = rest % N_;
      rest /= N_;
    }
    for (int d = 0; d < dim_; ++d) {
      out += digits[d] * stride;
      stride *= static_cast<std::size_t>(P_);
    }
    return out;
  }
  std::vector<cplx> fft(const std::vector<cplx>& in, bool inverse) const {
    Eigen::FFT<double> engine;
    std::vector<cplx> data = in;
    std::vector<cplx> line(P_), res(P_);
    std::size_t stride = 1;
    for (int d = 0; d < dim_; ++d) {
      const std::size_t block = stride * P_;
      for (std::size_t base = 0; base < data.size(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
          for (long long k = 0; k < P_; ++k) line[k] = data[base + off + k * stride];
          if (inverse)
            engine.inv(res, line);
          else
            engine.fwd(res, line);
          for (long long k = 0; k < P_; ++k) data[base + off + k * stride] = res[k];
        }
      }
      stride *= P_;
    }
    return data;
  }

  const SpatialGrid& grid_;
  long long N_;
  long long P_ = 0;
  int dim_;
  std::vector<cplx> kernel_hat_;
  std::vector<std::size_t> support_;
  RVector v_;
  Eigen::PartialPivLU<CMatrix> lu_;
};

SpatialGrid lap_grid(const SpatialGrid& base, double lambda, double lambda_spacing) {
  const double span = base.mode() == GridMode::Radial ? 2.0 * base.extent() : 2.0 * base.extent();
  int points = static_cast<int>(std::ceil(span * lambda / lambda_spacing));
  points += points % 2;
  return base.refined(std::max(points, base.points_per_axis()));
}

}  // namespace

double lap_norm(double lambda, double sigma, int j, const PotentialSpec& pot_spec,
                const SpatialGrid& base, const FracParams& params, const LapOptions& opt) {
  require(lambda > 0.0, "lap_norm: lambda must be positive");
  require(j >= 0 && j <= 4, "lap_norm: derivative order must lie in [0, 4]");
  const SpatialGrid grid = lap_grid(base, lambda, opt.lambda_spacing);
  const Potential pot = sample_potential(pot_spec, grid);
  const std::size_t n = grid.size();
  RVector scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.norm(i);
    scale(i) = std::pow(1.0 + x * x, -0.5 * sigma);
  }
  const double diameter = base.mode() == GridMode::Radial
                              ? 4.0 * base.extent()
                              : 2.0 * base.extent() * std::sqrt(static_cast<double>(base.dim()));
  const double delta = std::min(1e-3 * lambda, 0.02 / diameter);

  std::vector<double> nodes, coef;
  for (int k = 0; k <= j; ++k) {
    nodes.push_back(lambda + (0.5 * j - k) * delta);
    coef.push_back((k % 2 == 0 ? 1.0 : -1.0) * binomial(j, k) / std::pow(delta, j));
  }

  const bool dense = n <= opt.dense_limit || grid.mode() == GridMode::Radial;
  if (dense) {
    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < nodes.size(); ++k)
      acc += coef[k] * perturbed_resolvent(SpectralPoint{nodes[k], 0.0, opt.sign}, pot, grid, params);
    RVector sw(n);
    for (std::size_t i = 0; i < n; ++i) sw(i) = scale(i) * std::sqrt(grid.weights()[i]);
    const CMatrix B = sw.asDiagonal() * acc * sw.asDiagonal();
    return largest_singular_value([&](const CVector& x) { return CVector(B * x); },
                                  static_cast<Eigen::Index>(n), opt.max_iterations, opt.tolerance);
  }
  require(grid.mode() == GridMode::FullTensor && grid.dim() <= 2,
          "lap_norm: matrix-free path needs a full-tensor grid with dim <= 2");
  std::vector<ConvResolvent> ops;
  ops.reserve(nodes.size());
  for (double l : nodes) ops.emplace_back(params, grid, pot, SpectralPoint{l, 0.0, opt.sign});
  auto B = [&](const CVector& x) {
    const CVector sx = scale.cwiseProduct(x);
    CVector y = CVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < ops.size(); ++k) y += coef[k] * ops[k].apply(sx);
    return CVector(scale.cwiseProduct(y));
  };
  return largest_singular_value(B, static_cast<Eigen::Index>(n), opt.max_iterations, opt.tolerance);
}

LapScalingResult lap_scaling(std::span<const double> lambdas, double sigma, int j,
                             const PotentialSpec& pot, const SpatialGrid& grid,
                             const FracParams& params, const LapOptions& opt) {
  require(lambdas.size() >= 2, "lap_scaling: needs at least two lambda values");
  for (double l : lambdas)
    require(l >= 2.0 && l <= 64.0, "lap_scaling: lambda values must lie in [2, 64]");
  require(sigma >= j + 0.5 + 0.05 - 1e-12, "lap_scaling: requires sigma >= j + 1/2 + 0.05");
  if (pot.amplitude != 0.0)
    require(pot.kind != PotentialKind::PolynomialDecay || pot.beta > 1.0 + 2.0 * j,
            "lap_scaling: requires beta > 1 + 2j");
  LapScalingResult out;
  for (double l : lambdas) {
    out.lambdas.push_back(l);
    out.norms.push_back(lap_norm(l, sigma, j, pot, grid, params, opt));
    out.grid_points.push_back(lap_grid(grid, l, opt.lambda_spacing).points_per_axis());
  }
  out.fit = fit_power_law(out.lambdas, out.norms);
  out.exponent = -out.fit.exponent;
  out.residual_flag = out.fit.residual > 0.2;
  return out;
}

}  // namespace fracdisp
