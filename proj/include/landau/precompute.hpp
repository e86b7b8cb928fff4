#pragma once

#include <chrono>
#include <functional>
#include <numbers>
#include <thread>

#include "landau/kernels.hpp"

namespace landau {

// 0-based symmetric pairs (i <= j) in the order (1,1),(1,2),...,(d,d)
inline std::vector<std::array<int, 2>> symmetric_pairs(int d) {
  std::vector<std::array<int, 2>> p;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) p.push_back({i, j});
  return p;
}

inline int pair_index(int d, int i, int j) {
  if (i > j) std::swap(i, j);
  int n = 0;
  for (int a = 0; a < i; ++a) n += d - a;
  return n + (j - i);
}

namespace detail {

// Runs body(begin, end) over [0, n) split into contiguous chunks. Each output
// element is owned by exactly one chunk, so results do not depend on threads.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  std::size_t t = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < t; ++k) {
    std::size_t b = n * k / t, e = n * (k + 1) / t;
    pool.emplace_back([&, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

// out[o, m, i] = sum_q E[m, q] in[o, q, i]; dims describe `in`
inline std::vector<cplx> contract_axis(const std::vector<cplx>& in, std::vector<std::size_t>& dims, int axis,
                                       const std::vector<cplx>& E, std::size_t rows, int threads = 1) {
  std::size_t outer = 1, inner = 1, n = dims[axis];
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  std::vector<cplx> out(outer * rows * inner, cplx(0.0));
  parallel_for(outer, threads, [&](std::size_t ob, std::size_t oe) {
    for (std::size_t o = ob; o < oe; ++o)
      for (std::size_t m = 0; m < rows; ++m) {
        const cplx* e = &E[m * n];
        cplx* dst = &out[(o * rows + m) * inner];
        for (std::size_t q = 0; q < n; ++q) {
          const cplx* src = &in[(o * n + q) * inner];
          cplx w = e[q];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
      }
  });
  dims[axis] = rows;
  return out;
}

}  // namespace detail

// Correlations y(p) = sum_q x(q) t(q - p) along one axis of a natural-order
// array, by zero-padded FFT convolution. The Nyquist mode of psi is split
// evenly between -M/2 and +M/2 so the trigonometric interpolant of psi is real;
// that makes S conjugate-symmetric for a real kernel.
//   apply_split: x is psi-like (input side), output p in [-M/2, M/2)
//   apply_fold:  output over [-M/2, M/2], times E_{-p}(b_1), folded back onto
//                [-M/2, M/2) with the halved Nyquist weight
class AxisCorrelator {
 public:
  AxisCorrelator(const TruncatedDomain& d, int axis, const AxisIntegrals& I, int k)
      : axis_(axis), M_(d.modes[axis]), N_(2 * d.modes[axis] + 2), k_(k), stride_(d.stride(axis)), total_(d.size()) {
    double L = d.length(axis), b1 = d.intervals[axis].lo;
    for (int p = 0; p <= M_; ++p) {
      int kap = p - M_ / 2;
      double turns = std::remainder(static_cast<double>(kap) * b1 / L, 1.0);
      phase_.push_back(std::polar(1.0, -2.0 * std::numbers::pi * turns));
    }
    scale_ = I(0, 0);
    for (int p = 0; p < M_; ++p) tail_.push_back(I(k, M_ - p));
    if (k_ == 0) return;
    std::vector<cplx> R(N_, cplx(0.0));
    for (int n = -M_; n <= M_; ++n) R[(n + N_) % N_] = I(k, -n);
    engine_ = FourierEngine::get({N_});
    Rhat_.resize(N_);
    engine_->forward_raw(R.data(), Rhat_.data());
    for (auto& z : Rhat_) z /= static_cast<double>(N_);
  }

  void apply_split(std::vector<cplx>& x) const {
    for_lines(x, [&](std::vector<cplx>& line) {
      cplx nyq = 0.5 * line[0];
      if (k_ == 0) {
        for (int p = 0; p < M_; ++p) line[p] *= scale_;
        line[0] = nyq * scale_;
        return;
      }
      line[0] = nyq;
      auto y = convolve(line);
      for (int p = 0; p < M_; ++p) line[p] = y[p] + nyq * tail_[p];
    });
  }

  // the input's Nyquist mode is split the same way; `odd` flips the sign of
  // its +M/2 copy (derivative weights, mu_{+M/2} = -mu_{-M/2})
  void apply_fold(std::vector<cplx>& x, bool odd = false) const {
    double sgn = odd ? -1.0 : 1.0;
    for_lines(x, [&](std::vector<cplx>& line) {
      std::vector<cplx> y;
      cplx nyq = 0.5 * line[0];
      if (k_ == 0) {
        y.assign(line.begin(), line.begin() + M_);
        y[0] = nyq;
        y.push_back(sgn * nyq);
        for (auto& z : y) z *= scale_;
      } else {
        line[0] = nyq;
        line.push_back(sgn * nyq);
        y = convolve(line);
      }
      line.resize(M_);
      for (int p = 1; p < M_; ++p) line[p] = phase_[p] * y[p];
      line[0] = 0.5 * (phase_[0] * y[0] + phase_[M_] * y[M_]);
    });
  }

  int axis() const { return axis_; }

 private:
  // y(p), p = 0..M (natural index, M <-> +M/2), from x(q), q = 0..M-1 or 0..M
  std::vector<cplx> convolve(const std::vector<cplx>& x) const {
    std::vector<cplx> buf(N_, cplx(0.0)), spec(N_);
    std::copy(x.begin(), x.end(), buf.begin());
    engine_->forward_raw(buf.data(), spec.data());
    for (int n = 0; n < N_; ++n) spec[n] *= Rhat_[n];
    engine_->backward_raw(spec.data(), buf.data());
    buf.resize(M_ + 1);
    return buf;
  }

  template <class F>
  void for_lines(std::vector<cplx>& x, F&& f) const {
    std::vector<cplx> line(M_);
    std::size_t lines = total_ / M_;
    for (std::size_t l = 0; l < lines; ++l) {
      std::size_t hi = l / stride_, lo = l % stride_;
      std::size_t base = hi * stride_ * M_ + lo;
      line.assign(M_, cplx(0.0));
      for (int q = 0; q < M_; ++q) line[q] = x[base + q * stride_];
      f(line);
      for (int p = 0; p < M_; ++p) x[base + p * stride_] = line[p];
    }
  }

  int axis_, M_, N_, k_;
  std::size_t stride_, total_;
  cplx scale_ = 1.0;
  std::vector<cplx> tail_, phase_;
  std::shared_ptr<const FourierEngine> engine_;
  std::vector<cplx> Rhat_;
};

// correlators for exponents k = 0, 1, 2 on every axis
struct CorrelatorSet {
  std::vector<std::array<std::shared_ptr<AxisCorrelator>, 3>> axes;

  CorrelatorSet() = default;
  CorrelatorSet(const TruncatedDomain& d, const std::vector<AxisIntegrals>& I) : axes(d.dim) {
    for (int a = 0; a < d.dim; ++a)
      for (int k = 0; k < 3; ++k) axes[a][k] = std::make_shared<AxisCorrelator>(d, a, I[a], k);
  }

  // y(p) = sum_l psi'_l prod_a I_a(k_a, l_a - p_a) over the Nyquist-split psi'
  std::vector<cplx> correlate(std::vector<cplx> x, const Index& k) const {
    for (std::size_t a = 0; a < axes.size(); ++a) axes[a][k[a]]->apply_split(x);
    return x;
  }

  // z(l) = sum over aliases l' of l of s(l') E_{-l'}(b_1) sum_m' g'_m' prod_a I_a(k_a, m'_a - l'_a),
  // g' the Nyquist-split g; odd_axis marks g = mu_{odd_axis} f (-1: none)
  std::vector<cplx> fold(std::vector<cplx> g, const Index& k, int odd_axis = -1) const {
    for (std::size_t a = 0; a < axes.size(); ++a) axes[a][k[a]]->apply_fold(g, static_cast<int>(a) == odd_axis);
    return g;
  }
};

enum class QuadratureScope { Local, WholeDomain };

inline const char* to_string(QuadratureScope s) { return s == QuadratureScope::Local ? "local" : "whole"; }

struct BuildOptions {
  int refinement = 2;
  QuadratureScope scope = QuadratureScope::Local;
  int threads = 1;
};

struct StageTimings {
  double regularize = 0, psi_transform = 0, correlation = 0, quadrature = 0, total = 0;
};

struct PrecomputedTables {
  DomainPtr domain;
  KernelSpec kernel;
  int refinement = 2;
  QuadratureScope scope = QuadratureScope::Local;

  ModeTables modes;
  std::vector<AxisIntegrals> integrals;
  CorrelatorSet correlators;
  std::vector<cplx> psi;        // psi_l, natural order
  std::vector<cplx> psi_phase;  // psi_l E_{-l}(b_1)
  std::vector<std::vector<cplx>> S;
  std::vector<std::vector<cplx>> W;
  bool psi_single_mode = false;
  bool residue_empty = true;
  StageTimings timings;

  std::size_t moment_count() const {
    std::size_t n = 0;
    for (const auto& w : W) n += w.size();
    return n;
  }
};

inline std::vector<cplx> psi_spectral(const RegularizedKernel& rk) {
  std::vector<cplx> c(rk.domain->size());
  Transformer(rk.domain).forward(rk.psi.values().data(), c.data());
  return c;
}

// S_ij(m) = sum_l psi_l T_ij(l - m), T_ij = prod_a I_a((e_i + e_j)_a, .)
inline std::vector<std::vector<cplx>> correlation_sums(const TruncatedDomain& d, const std::vector<cplx>& psi,
                                                       const CorrelatorSet& corr) {
  std::vector<std::vector<cplx>> S;
  for (auto [i, j] : symmetric_pairs(d.dim)) {
    Index k{0, 0, 0};
    k[i] += 1;
    k[j] += 1;
    S.push_back(corr.correlate(psi, k));
  }
  return S;
}

namespace detail {

inline std::vector<double> midpoint_nodes(double lo, double hi, int n) {
  std::vector<double> x(n);
  double hq = (hi - lo) / n;
  for (int q = 0; q < n; ++q) x[q] = lo + (q + 0.5) * hq;
  return x;
}

// W_ij(m) = sum_nodes w u_i u_j g(u) exp(-mu_m . u) with g given on the node lattice
inline std::vector<std::vector<cplx>> moments_on_lattice(const TruncatedDomain& d,
                                                         const std::vector<std::vector<double>>& nodes,
                                                         const std::vector<double>& g, double weight, int threads) {
  std::vector<std::vector<cplx>> E(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    int M = d.modes[a];
    const auto& x = nodes[a];
    E[a].resize(static_cast<std::size_t>(M) * x.size());
    for (int j = 0; j < M; ++j)
      for (std::size_t q = 0; q < x.size(); ++q) {
        double ang = -2.0 * std::numbers::pi * std::remainder((j - M / 2) * x[q] / d.length(a), 1.0);
        E[a][j * x.size() + q] = std::polar(1.0, ang);
      }
  }
  std::vector<std::vector<cplx>> W;
  std::size_t count = g.size();
  for (auto [i, j] : symmetric_pairs(d.dim)) {
    std::vector<cplx> h(count);
    std::vector<std::size_t> dims;
    for (int a = 0; a < d.dim; ++a) dims.push_back(nodes[a].size());
    for (std::size_t n = 0; n < count; ++n) {
      std::size_t r = n;
      Vec u{0, 0, 0};
      for (int a = d.dim - 1; a >= 0; --a) {
        u[a] = nodes[a][r % dims[a]];
        r /= dims[a];
      }
      h[n] = weight * u[i] * u[j] * g[n];
    }
    for (int a = d.dim - 1; a >= 0; --a) h = contract_axis(h, dims, a, E[a], d.modes[a], threads);
    W.push_back(std::move(h));
  }
  return W;
}

inline std::vector<double> lattice_values(const std::vector<std::vector<double>>& nodes, int dim,
                                          const std::function<double(const Vec&)>& fn) {
  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= nodes[a].size();
  std::vector<double> g(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t r = n;
    Vec u{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      u[a] = nodes[a][r % nodes[a].size()];
      r /= nodes[a].size();
    }
    g[n] = fn(u);
  }
  return g;
}

}  // namespace detail

// box-local midpoint product rule with r subcells per grid cell
inline std::vector<std::vector<cplx>> quadrature_moments(const RegularizedKernel& rk, int refinement, int threads = 1) {
  const auto& d = *rk.domain;
  if (refinement < 1) throw Error(ErrorCode::InvalidArgument, "quadrature refinement must be >= 1");
  if (!d.box || rk.kind == InterpolantKind::None) {
    std::size_t np = symmetric_pairs(d.dim).size();
    return std::vector<std::vector<cplx>>(np, std::vector<cplx>(d.size(), cplx(0.0)));
  }
  std::vector<std::vector<double>> nodes(d.dim);
  double weight = 1.0;
  for (int a = 0; a < d.dim; ++a) {
    const auto& b = d.box->bounds[a];
    int n = (d.box->hi_index[a] - d.box->lo_index[a]) * refinement;
    nodes[a] = detail::midpoint_nodes(b.lo, b.hi, n);
    weight *= b.length() / n;
  }
  auto g = detail::lattice_values(nodes, d.dim, [&](const Vec& u) { return rk.residue_at(u); });
  return detail::moments_on_lattice(d, nodes, g, weight, threads);
}

// quadrature of the full kernel over the whole truncated domain (psi = 0)
inline std::vector<std::vector<cplx>> whole_domain_moments(const KernelSpec& spec, const TruncatedDomain& d,
                                                           int refinement, int threads = 1) {
  if (refinement < 1) throw Error(ErrorCode::InvalidArgument, "quadrature refinement must be >= 1");
  std::vector<std::vector<double>> nodes(d.dim);
  double weight = 1.0;
  for (int a = 0; a < d.dim; ++a) {
    int n = d.modes[a] * refinement;
    nodes[a] = detail::midpoint_nodes(d.intervals[a].lo, d.intervals[a].hi, n);
    weight *= d.length(a) / n;
  }
  auto g = detail::lattice_values(nodes, d.dim, [&](const Vec& u) {
    bool origin = true;
    for (int a = 0; a < d.dim; ++a) origin = origin && u[a] == 0.0;
    return origin ? 0.0 : kernel_value(spec, u);
  });
  return detail::moments_on_lattice(d, nodes, g, weight, threads);
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline void finish_tables(PrecomputedTables& t) {
  const auto& d = *t.domain;
  t.modes = mode_tables(d);
  t.integrals = axis_integrals(d);
  t.correlators = CorrelatorSet(d, t.integrals);
  t.psi_single_mode = t.kernel.is_constant();
}

inline void fill_psi_phase(PrecomputedTables& t) {
  t.psi_phase.resize(t.psi.size());
  for (std::size_t n = 0; n < t.psi.size(); ++n) t.psi_phase[n] = t.psi[n] * std::conj(t.modes.boundary_phase[n]);
}

}  // namespace detail

inline PrecomputedTables build_tables(const DomainPtr& domain, const KernelSpec& kernel, const BuildOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  auto t_start = clock::now();
  PrecomputedTables t;
  t.domain = domain;
  t.kernel = kernel;
  t.refinement = opt.refinement;
  t.scope = opt.scope;
  detail::finish_tables(t);
  const auto& d = *domain;
  if (kernel.dim != d.dim) throw Error(ErrorCode::InvalidArgument, "kernel and domain dimensions differ");

  if (opt.scope == QuadratureScope::WholeDomain) {
    t.psi.assign(d.size(), cplx(0.0));
    t.psi_single_mode = false;
    detail::fill_psi_phase(t);
    t.S.assign(symmetric_pairs(d.dim).size(), std::vector<cplx>(d.size(), cplx(0.0)));
    auto tq = clock::now();
    t.W = whole_domain_moments(kernel, d, opt.refinement, opt.threads);
    t.timings.quadrature = detail::seconds_since(tq);
    t.residue_empty = false;
    t.timings.total = detail::seconds_since(t_start);
    return t;
  }

  auto t0 = clock::now();
  RegularizedKernel rk = regularize(kernel, domain);
  t.timings.regularize = detail::seconds_since(t0);

  t0 = clock::now();
  t.psi = psi_spectral(rk);
  if (t.psi_single_mode) {
    std::size_t z = SpectralField(domain).zero_index();
    cplx c0 = t.psi[z];
    std::fill(t.psi.begin(), t.psi.end(), cplx(0.0));
    t.psi[z] = c0;
  }
  detail::fill_psi_phase(t);
  t.timings.psi_transform = detail::seconds_since(t0);

  t0 = clock::now();
  t.S = correlation_sums(d, t.psi, t.correlators);
  t.timings.correlation = detail::seconds_since(t0);

  t0 = clock::now();
  t.residue_empty = rk.residue.empty();
  t.W = quadrature_moments(rk, opt.refinement, opt.threads);
  t.timings.quadrature = detail::seconds_since(t0);
  t.timings.total = detail::seconds_since(t_start);
  return t;
}

}  // namespace landau
