#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>

#include "landau/precompute.hpp"

namespace landau {

enum class Approach { CCT1, CCT2, CRT1, CRT2, CST1, CST2 };

inline const char* to_string(Approach a) {
  switch (a) {
    case Approach::CCT1: return "CCT1";
    case Approach::CCT2: return "CCT2";
    case Approach::CRT1: return "CRT1";
    case Approach::CRT2: return "CRT2";
    case Approach::CST1: return "CST1";
    case Approach::CST2: return "CST2";
  }
  return "?";
}

inline Approach parse_approach(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Approach a : {Approach::CCT1, Approach::CCT2, Approach::CRT1, Approach::CRT2, Approach::CST1, Approach::CST2})
    if (s == to_string(a)) return a;
  throw Error(ErrorCode::InvalidArgument, "unknown approach '" + s + "'");
}

inline bool transforms_once(Approach a) { return a == Approach::CCT1 || a == Approach::CRT1 || a == Approach::CST1; }
inline bool constant_variant(Approach a) { return a == Approach::CCT1 || a == Approach::CCT2; }
inline bool regular_variant(Approach a) { return a == Approach::CRT1 || a == Approach::CRT2; }

// 0-based versions of the index sets, in the usual listing order
struct IndexSets {
  std::vector<std::array<int, 2>> M1;
  std::vector<std::array<int, 3>> M2;
  std::vector<Index> M3;
};

inline IndexSets index_sets(int d) {
  IndexSets s;
  s.M1 = symmetric_pairs(d);
  if (d == 2) {
    s.M2 = {{0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 1, 0}};
    s.M3 = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}, {1, 1, 0}, {0, 2, 0}};
  } else {
    s.M2 = {{0, 0, 1}, {0, 0, 2}, {0, 1, 0}, {0, 1, 1}, {0, 2, 0}, {0, 2, 2},
            {1, 1, 0}, {1, 1, 2}, {1, 2, 1}, {1, 2, 2}, {2, 2, 0}, {2, 2, 1}};
    s.M3 = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
            {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  }
  return s;
}

struct EvalOptions {
  double residue_tol = default_residue_tolerance();
  bool keep_fields = true;  // keep I/J fields in the result
};

struct EvalTimings {
  double gradient = 0, fields = 0, assemble = 0, divergence = 0, total = 0;
};

struct LandauEvaluation {
  std::vector<GridField> Qc;
  GridField Q_values;
  SpectralField Q_coefficients;
  std::vector<GridField> I_fields;
  std::vector<GridField> J_fields;
  int transform_count = 0;
  double max_residue = 0.0;
  EvalTimings timings;
};

// counts every transform issued during one evaluation. Fields that cancel to
// round-off carry no usable symmetry information, so residues are judged
// against the largest field scale seen so far in the evaluation.
class CountingTransformer {
 public:
  CountingTransformer(DomainPtr d, double tol) : tr_(std::move(d)), tol_(tol) {}

  std::vector<cplx> forward(const std::vector<double>& v) {
    ++count_;
    std::vector<cplx> c(v.size());
    tr_.forward(v.data(), c.data());
    return c;
  }
  GridField inverse(const std::vector<cplx>& c) {
    ++count_;
    GridField f(tr_.domain());
    double scale = 0.0;
    max_residue_ = std::max(max_residue_, tr_.inverse(c.data(), f.values().data(), tol_, seen_scale_, &scale));
    seen_scale_ = std::max(seen_scale_, scale);
    return f;
  }

  const DomainPtr& domain() const { return tr_.domain(); }
  int count() const { return count_; }
  double max_residue() const { return max_residue_; }

 private:
  Transformer tr_;
  double tol_;
  int count_ = 0;
  double max_residue_ = 0.0;
  double seen_scale_ = 0.0;
};

inline void check_compatible(Approach a, const PrecomputedTables& t, const TruncatedDomain& field_domain) {
  if (!t.domain->same_geometry(field_domain))
    throw Error(ErrorCode::TableMismatch, "tables were built for a different domain");
  if (constant_variant(a) && !t.kernel.is_constant())
    throw Error(ErrorCode::ApproachKernelMismatch, std::string(to_string(a)) + " needs a constant kernel, got " + t.kernel.name());
  if (regular_variant(a) && t.kernel.is_singular())
    throw Error(ErrorCode::ApproachKernelMismatch, std::string(to_string(a)) + " needs a regular kernel");
  if ((constant_variant(a) || regular_variant(a)) && t.scope != QuadratureScope::Local)
    throw Error(ErrorCode::TableMismatch, std::string(to_string(a)) + " needs box-local tables");
}

// fingerprint check against the configuration a caller expects
inline void check_tables(const PrecomputedTables& t, const TruncatedDomain& d, const KernelSpec& k) {
  if (!(*t.domain == d)) throw Error(ErrorCode::TableMismatch, "table domain/box differs from the requested domain");
  if (!(t.kernel == k)) throw Error(ErrorCode::TableMismatch, "table kernel differs from the requested kernel");
}

namespace detail {

inline std::vector<cplx> eigen_weights(const TruncatedDomain& d, const ModeTables& mt, int axis) {
  std::vector<cplx> w(d.size());
  std::size_t st = d.stride(axis);
  int M = d.modes[axis];
  for (std::size_t n = 0; n < w.size(); ++n) w[n] = mt.mu[axis][(n / st) % M];
  return w;
}

inline std::vector<double> coordinate_field(const TruncatedDomain& d, int axis) {
  std::vector<double> v(d.size());
  std::size_t st = d.stride(axis);
  int M = d.modes[axis];
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = d.coord(axis, static_cast<int>((n / st) % M));
  return v;
}

inline std::vector<cplx> times(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> c(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) c[n] = a[n] * b[n];
  return c;
}

}  // namespace detail

using FieldPair = std::pair<std::vector<GridField>, std::vector<GridField>>;

inline std::vector<GridField> gradient(const SpectralField& fc, const ModeTables& mt, CountingTransformer& tr) {
  const auto& d = *fc.domain();
  std::vector<GridField> g;
  for (int a = 0; a < d.dim; ++a) g.push_back(tr.inverse(detail::times(detail::eigen_weights(d, mt, a), fc.coeffs())));
  return g;
}

inline std::vector<GridField> gradient(const SpectralField& fc) {
  CountingTransformer tr(fc.domain(), default_residue_tolerance());
  return gradient(fc, mode_tables(*fc.domain()), tr);
}

// one inverse transform per field of modified coefficients f_m [E_{-m}(b1) S_ij(m) + W_ij(m)]
inline FieldPair fundamental_fields_T2(const SpectralField& fc, const PrecomputedTables& t, bool use_W,
                                       CountingTransformer& tr) {
  const auto& d = *t.domain;
  if (!fc.domain()->same_geometry(d)) throw Error(ErrorCode::TableMismatch, "field and tables live on different domains");
  auto sets = index_sets(d.dim);
  std::vector<std::vector<cplx>> base(sets.M1.size(), std::vector<cplx>(d.size()));
  for (std::size_t p = 0; p < sets.M1.size(); ++p)
    for (std::size_t n = 0; n < d.size(); ++n) {
      cplx g = std::conj(t.modes.boundary_phase[n]) * t.S[p][n];
      if (use_W) g += t.W[p][n];
      base[p][n] = fc[n] * g;
    }
  FieldPair out;
  for (std::size_t p = 0; p < sets.M1.size(); ++p) out.first.push_back(tr.inverse(base[p]));
  std::vector<std::vector<cplx>> mu(d.dim);
  for (int a = 0; a < d.dim; ++a) mu[a] = detail::eigen_weights(d, t.modes, a);
  for (auto [i, j, k] : sets.M2) out.second.push_back(tr.inverse(detail::times(mu[k], base[pair_index(d.dim, i, j)])));
  return out;
}

// I_ij(v) = v_i v_j A_0 - v_i A_{e_j} - v_j A_{e_i} + A_{e_i+e_j} (+ residue part),
// A_k = inverse transform of psi_l E_{-l}(b1) sum_m g_m I(k, m - l)
inline FieldPair fundamental_fields_T1(const SpectralField& fc, const PrecomputedTables& t, bool use_W,
                                       bool single_mode, CountingTransformer& tr) {
  const auto& d = *t.domain;
  if (!fc.domain()->same_geometry(d)) throw Error(ErrorCode::TableMismatch, "field and tables live on different domains");
  auto sets = index_sets(d.dim);
  std::size_t N = d.size(), zero = fc.zero_index();
  bool with_W = use_W && !t.residue_empty;

  std::vector<std::vector<cplx>> weights;  // g for weight -1 (f) at slot d, mu_k f at slot k
  for (int a = 0; a < d.dim; ++a) weights.push_back(detail::times(detail::eigen_weights(d, t.modes, a), fc.coeffs()));
  weights.push_back(fc.coeffs());
  std::vector<std::vector<double>> coords;
  for (int a = 0; a < d.dim; ++a) coords.push_back(detail::coordinate_field(d, a));

  std::map<std::pair<int, int>, std::vector<double>> cache;
  auto k_id = [](const Index& k) { return k[0] * 9 + k[1] * 3 + k[2]; };
  auto A = [&](int w, const Index& k) -> const std::vector<double>& {
    auto key = std::make_pair(w, k_id(k));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<double> field;
    if (single_mode) {
      cplx c0 = 0.0;
      const auto& g = weights[w];
      for (std::size_t n = 0; n < N; ++n) {
        if (g[n] == cplx(0.0)) continue;
        Index m = d.mode(n);
        cplx p = g[n];
        for (int a = 0; a < d.dim; ++a) {
          int M = d.modes[a];
          if (m[a] == -M / 2)  // Nyquist split, odd copy for derivative weights
            p *= 0.5 * (t.integrals[a](k[a], -M / 2) + (a == w ? -1.0 : 1.0) * t.integrals[a](k[a], M / 2));
          else
            p *= t.integrals[a](k[a], m[a]);
        }
        c0 += p;
      }
      field.assign(N, (t.psi_phase[zero] * c0).real() / d.sqrt_volume());
    } else {
      auto C = t.correlators.fold(weights[w], k, w < d.dim ? w : -1);
      for (std::size_t n = 0; n < N; ++n) C[n] *= t.psi[n];
      field = std::move(tr.inverse(C).values());
    }
    return cache.emplace(key, std::move(field)).first->second;
  };

  auto build = [&](int i, int j, int w) {
    Index e0{0, 0, 0}, ei{0, 0, 0}, ej{0, 0, 0}, eij{0, 0, 0};
    ei[i] += 1;
    ej[j] += 1;
    eij[i] += 1;
    eij[j] += 1;
    const auto& a0 = A(w, e0);
    const auto& ai = A(w, ei);
    const auto& aj = A(w, ej);
    const auto& aij = A(w, eij);
    GridField out(t.domain);
    auto& o = out.values();
    const auto& vi = coords[i];
    const auto& vj = coords[j];
    for (std::size_t n = 0; n < N; ++n) o[n] = vi[n] * vj[n] * a0[n] - vi[n] * aj[n] - vj[n] * ai[n] + aij[n];
    if (with_W) {
      auto r = tr.inverse(detail::times(weights[w], t.W[pair_index(d.dim, i, j)]));
      for (std::size_t n = 0; n < N; ++n) o[n] += r[n];
    }
    return out;
  };

  FieldPair out;
  for (auto [i, j] : sets.M1) out.first.push_back(build(i, j, d.dim));
  for (auto [i, j, k] : sets.M2) out.second.push_back(build(i, j, k));
  return out;
}

// Q^c_i = sum_j A_ij d_j f + B_i f with A_ii = sum_{k != i} I_kk, A_ij = -I_ij,
// B_i = sum_{k != i} (J_{ikk} - J_{kki})
inline std::vector<GridField> assemble_Qc(const std::vector<GridField>& I, const std::vector<GridField>& J,
                                          const GridField& f, const std::vector<GridField>& grad) {
  const auto& d = *f.domain();
  auto sets = index_sets(d.dim);
  auto Iat = [&](int i, int j) -> const GridField& { return I[pair_index(d.dim, i, j)]; };
  auto Jat = [&](int i, int j, int k) -> const GridField& {
    if (i > j) std::swap(i, j);
    for (std::size_t q = 0; q < sets.M2.size(); ++q)
      if (sets.M2[q] == std::array<int, 3>{i, j, k}) return J[q];
    throw Error(ErrorCode::InvalidArgument, "index triple outside M_2");
  };
  std::vector<GridField> Qc;
  std::size_t N = d.size();
  for (int i = 0; i < d.dim; ++i) {
    GridField q(f.domain());
    auto& o = q.values();
    for (int j = 0; j < d.dim; ++j) {
      if (j == i) {
        for (int k = 0; k < d.dim; ++k) {
          if (k == i) continue;
          const auto& Ikk = Iat(k, k);
          for (std::size_t n = 0; n < N; ++n) o[n] += Ikk[n] * grad[i][n];
        }
      } else {
        const auto& Iij = Iat(i, j);
        for (std::size_t n = 0; n < N; ++n) o[n] -= Iij[n] * grad[j][n];
      }
    }
    for (int k = 0; k < d.dim; ++k) {
      if (k == i) continue;
      const auto& Jp = Jat(i, k, k);
      const auto& Jm = Jat(k, k, i);
      for (std::size_t n = 0; n < N; ++n) o[n] += (Jp[n] - Jm[n]) * f[n];
    }
    Qc.push_back(std::move(q));
  }
  return Qc;
}

inline std::pair<GridField, SpectralField> divergence(const std::vector<GridField>& Qc, const ModeTables& mt,
                                                      CountingTransformer& tr) {
  const auto& d = *tr.domain();
  SpectralField Qm(tr.domain());
  for (int a = 0; a < d.dim; ++a) {
    auto c = tr.forward(Qc[a].values());
    auto mu = detail::eigen_weights(d, mt, a);
    for (std::size_t n = 0; n < c.size(); ++n) Qm[n] += mu[n] * c[n];
  }
  GridField Q = tr.inverse(Qm.coeffs());
  return {std::move(Q), std::move(Qm)};
}

namespace detail {

inline LandauEvaluation evaluate_core(Approach a, const GridField& f, const SpectralField& fc,
                                      const PrecomputedTables& t, CountingTransformer& tr, const EvalOptions& opt) {
  using clock = std::chrono::steady_clock;
  LandauEvaluation ev;
  auto t0 = clock::now();
  auto grad = gradient(fc, t.modes, tr);
  ev.timings.gradient = seconds_since(t0);

  t0 = clock::now();
  bool use_W = !(constant_variant(a) || regular_variant(a));
  FieldPair fields = transforms_once(a) ? fundamental_fields_T1(fc, t, use_W, constant_variant(a), tr)
                                        : fundamental_fields_T2(fc, t, use_W, tr);
  ev.timings.fields = seconds_since(t0);

  t0 = clock::now();
  ev.Qc = assemble_Qc(fields.first, fields.second, f, grad);
  ev.timings.assemble = seconds_since(t0);

  t0 = clock::now();
  auto [Q, Qm] = divergence(ev.Qc, t.modes, tr);
  ev.timings.divergence = seconds_since(t0);
  ev.Q_values = std::move(Q);
  ev.Q_coefficients = std::move(Qm);
  if (opt.keep_fields) {
    ev.I_fields = std::move(fields.first);
    ev.J_fields = std::move(fields.second);
  }
  ev.transform_count = tr.count();
  ev.max_residue = tr.max_residue();
  return ev;
}

}  // namespace detail

inline LandauEvaluation evaluate(Approach a, const GridField& f, const PrecomputedTables& t,
                                 const EvalOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  check_compatible(a, t, *f.domain());
  CountingTransformer tr(t.domain, opt.residue_tol);
  SpectralField fc(t.domain, tr.forward(f.values()));
  auto ev = detail::evaluate_core(a, f, fc, t, tr, opt);
  ev.timings.total = detail::seconds_since(t0);
  return ev;
}

// same, starting from coefficients (values come from one inverse transform)
inline LandauEvaluation evaluate_spectral(Approach a, const SpectralField& fc, const PrecomputedTables& t,
                                          const EvalOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  check_compatible(a, t, *fc.domain());
  CountingTransformer tr(t.domain, opt.residue_tol);
  GridField f = tr.inverse(fc.coeffs());
  auto ev = detail::evaluate_core(a, f, fc, t, tr, opt);
  ev.timings.total = detail::seconds_since(t0);
  return ev;
}

}  // namespace landau
