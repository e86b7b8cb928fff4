#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "landau/domain.hpp"

namespace landau {

using cplx = std::complex<double>;

class GridField {
 public:
  GridField() = default;
  explicit GridField(DomainPtr d) : domain_(std::move(d)), values_(domain_->size(), 0.0) {}
  GridField(DomainPtr d, std::vector<double> v) : domain_(std::move(d)), values_(std::move(v)) {
    if (values_.size() != domain_->size()) throw Error(ErrorCode::InvalidArgument, "grid field size mismatch");
  }

  const DomainPtr& domain() const { return domain_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }
  std::size_t size() const { return values_.size(); }

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(DomainPtr d) : domain_(std::move(d)), coeffs_(domain_->size(), cplx(0.0)) {}
  SpectralField(DomainPtr d, std::vector<cplx> c) : domain_(std::move(d)), coeffs_(std::move(c)) {
    if (coeffs_.size() != domain_->size()) throw Error(ErrorCode::InvalidArgument, "spectral field size mismatch");
  }

  const DomainPtr& domain() const { return domain_; }
  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx& operator[](std::size_t n) { return coeffs_[n]; }
  cplx operator[](std::size_t n) const { return coeffs_[n]; }
  std::size_t size() const { return coeffs_.size(); }

  // flat index of the zero mode in natural ordering
  std::size_t zero_index() const {
    Index z{0, 0, 0};
    for (int a = 0; a < domain_->dim; ++a) z[a] = domain_->modes[a] / 2;
    return domain_->ravel(z);
  }

 private:
  DomainPtr domain_;
  std::vector<cplx> coeffs_;
};

// eigenvalues mu_kappa = 2 pi i kappa / L per axis (natural order) and the
// boundary phases E_m(b_1) = prod exp(mu_{m_a} b_{a1})
struct ModeTables {
  std::vector<std::vector<cplx>> mu;
  std::vector<cplx> boundary_phase;

  cplx mu_of(int axis, int kappa) const { return mu[axis][kappa + static_cast<int>(mu[axis].size()) / 2]; }
};

inline cplx eigenvalue(int kappa, double length) { return cplx(0.0, 2.0 * std::numbers::pi * kappa / length); }

inline ModeTables mode_tables(const TruncatedDomain& d) {
  ModeTables t;
  t.mu.resize(d.dim);
  std::vector<std::vector<cplx>> phase(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    int M = d.modes[a];
    for (int j = 0; j < M; ++j) {
      int m = j - M / 2;
      t.mu[a].push_back(eigenvalue(m, d.length(a)));
      // exp(mu b1) = exp(2 pi i m b1 / L), reduce the angle for accuracy
      double ang = 2.0 * std::numbers::pi * std::remainder(m * d.intervals[a].lo / d.length(a), 1.0);
      phase[a].push_back(std::polar(1.0, ang));
    }
  }
  t.boundary_phase.resize(d.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    Index idx = d.unravel(n);
    cplx p = 1.0;
    for (int a = 0; a < d.dim; ++a) p *= phase[a][idx[a]];
    t.boundary_phase[n] = p;
  }
  return t;
}

// closed-form integral of xi^k F_kappa(xi) over iv, F_kappa = exp(mu (xi - b1)) / sqrt(L)
inline cplx basic_integral_1d(int k, long kappa, const Interval& iv) {
  double L = iv.length(), sL = std::sqrt(L);
  double b1 = iv.lo, b2 = iv.hi;
  if (kappa == 0) {
    switch (k) {
      case 0: return sL;
      case 1: return (b2 * b2 - b1 * b1) / (2.0 * sL);
      case 2: return (b2 * b2 * b2 - b1 * b1 * b1) / (3.0 * sL);
    }
  } else {
    cplx mu = eigenvalue(static_cast<int>(kappa), L);
    switch (k) {
      case 0: return 0.0;
      case 1: return sL / mu;
      case 2: return ((b2 * b2 - b1 * b1) * mu - 2.0 * L) / (sL * mu * mu);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "basic integral exponent must be 0, 1 or 2");
}

inline cplx basic_integral_tensor(const Index& k, const Index& m, const TruncatedDomain& d) {
  cplx p = 1.0;
  for (int a = 0; a < d.dim; ++a) p *= basic_integral_1d(k[a], m[a], d.intervals[a]);
  return p;
}

// I_a(k, kappa) for kappa in [-M, M], k in {0,1,2}
struct AxisIntegrals {
  int M = 0;
  std::array<std::vector<cplx>, 3> table;

  cplx operator()(int k, int kappa) const { return table[k][kappa + M]; }
};

inline std::vector<AxisIntegrals> axis_integrals(const TruncatedDomain& d) {
  std::vector<AxisIntegrals> out(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    out[a].M = d.modes[a];
    for (int k = 0; k < 3; ++k)
      for (int kap = -d.modes[a]; kap <= d.modes[a]; ++kap)
        out[a].table[k].push_back(basic_integral_1d(k, kap, d.intervals[a]));
  }
  return out;
}

namespace detail {

inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// natural index j <-> fft index (j + M/2) mod M, per axis
inline std::vector<std::size_t> shift_map(const TruncatedDomain& d) {
  std::vector<std::size_t> map(d.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    Index idx = d.unravel(n);
    for (int a = 0; a < d.dim; ++a) idx[a] = (idx[a] + d.modes[a] / 2) % d.modes[a];
    map[n] = d.ravel(idx);
  }
  return map;
}

}  // namespace detail

// FFTW plans for one mode shape. Execution uses the new-array interface, so a
// single engine may be shared between threads.
class FourierEngine {
 public:
  explicit FourierEngine(const std::vector<int>& modes) : modes_(modes) {
    std::size_t n = 1;
    for (int m : modes_) n *= m;
    std::vector<cplx> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fwd_ = fftw_plan_dft(static_cast<int>(modes_.size()), modes_.data(), pa, pb, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft(static_cast<int>(modes_.size()), modes_.data(), pa, pb, FFTW_BACKWARD, flags);
  }
  ~FourierEngine() {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FourierEngine(const FourierEngine&) = delete;
  FourierEngine& operator=(const FourierEngine&) = delete;

  void forward_raw(cplx* in, cplx* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  void backward_raw(cplx* in, cplx* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
  }

  static std::shared_ptr<const FourierEngine> get(const std::vector<int>& modes) {
    static std::mutex m;
    static std::map<std::vector<int>, std::shared_ptr<const FourierEngine>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto& e = cache[modes];
    if (!e) e = std::make_shared<FourierEngine>(modes);
    return e;
  }

 private:
  std::vector<int> modes_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

inline double default_residue_tolerance() { return 1e-8; }

inline std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Transforms bound to a domain. f_m = (prod h_a) sum_l f(v_l) conj(F_m(v_l)),
// f(v_l) = sum_m f_m F_m(v_l).
class Transformer {
 public:
  explicit Transformer(DomainPtr d)
      : domain_(std::move(d)), engine_(FourierEngine::get(domain_->modes)), shift_(detail::shift_map(*domain_)) {
    fwd_scale_ = domain_->cell_volume() / domain_->sqrt_volume();
    inv_scale_ = 1.0 / domain_->sqrt_volume();
    // Nyquist-plane modes with their aliased negation
    const auto& dom = *domain_;
    for (std::size_t n = 0; n < dom.size(); ++n) {
      Index q = dom.unravel(n), r{0, 0, 0};
      bool nyq = false;
      for (int a = 0; a < dom.dim; ++a) {
        nyq = nyq || q[a] == 0;
        r[a] = (dom.modes[a] - q[a]) % dom.modes[a];
      }
      if (nyq) nyquist_.emplace_back(n, dom.ravel(r));
    }
  }

  const DomainPtr& domain() const { return domain_; }

  void forward(const double* values, cplx* coeffs) const {
    std::size_t n = domain_->size();
    std::vector<cplx> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = values[i];
    engine_->forward_raw(a.data(), b.data());
    for (std::size_t j = 0; j < n; ++j) coeffs[j] = fwd_scale_ * b[shift_[j]];
  }

  // returns the max imaginary residue; throws when it exceeds tol * max(scale, floor_scale)
  double inverse(const cplx* coeffs, double* values, double tol = default_residue_tolerance(),
                 double floor_scale = 0.0, double* scale_out = nullptr) const {
    std::size_t n = domain_->size();
    std::vector<cplx> a(n), b(n);
    double l1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[shift_[j]] = coeffs[j];
      l1 += std::abs(coeffs[j]);
    }
    engine_->backward_raw(a.data(), b.data());
    // field scale: the l1 bound sum |c_m| / sqrt(V) on the reconstructed values
    double res = 0.0, scale = l1 * inv_scale_;
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = inv_scale_ * b[i].real();
      res = std::max(res, std::abs(inv_scale_ * b[i].imag()));
    }
    if (scale_out) *scale_out = scale;
    // The real part keeps the Hermitian projection of the Nyquist plane (its
    // +M/2 half is the conjugate partner). The antisymmetric part there is not
    // a symmetry violation, so its l1 bound is allowed on top of the tolerance.
    double nyq = 0.0;
    for (auto [i, j] : nyquist_) nyq += 0.5 * std::abs(coeffs[i] - std::conj(coeffs[j]));
    nyq *= inv_scale_;
    if (!(res <= tol * std::max(scale, floor_scale) + nyq * (1.0 + 1e-12) + 1e-300))
      throw Error(ErrorCode::ImaginaryResidueExceeded,
                  "imaginary residue " + fmt_sci(res) + " vs field scale " + fmt_sci(scale));
    return res;
  }

  SpectralField forward(const GridField& f) const {
    SpectralField c(domain_);
    forward(f.values().data(), c.coeffs().data());
    return c;
  }
  GridField inverse(const SpectralField& c, double* residue = nullptr, double tol = default_residue_tolerance()) const {
    GridField f(domain_);
    double r = inverse(c.coeffs().data(), f.values().data(), tol);
    if (residue) *residue = r;
    return f;
  }

 private:
  DomainPtr domain_;
  std::shared_ptr<const FourierEngine> engine_;
  std::vector<std::size_t> shift_;
  std::vector<std::pair<std::size_t, std::size_t>> nyquist_;
  double fwd_scale_ = 1.0, inv_scale_ = 1.0;
};

inline SpectralField forward_transform(const GridField& f) { return Transformer(f.domain()).forward(f); }

inline GridField inverse_transform(const SpectralField& c, double* residue = nullptr,
                                   double tol = default_residue_tolerance()) {
  return Transformer(c.domain()).inverse(c, residue, tol);
}

// axis is 0-based
inline SpectralField spectral_derivative(const SpectralField& c, int axis) {
  const auto& d = *c.domain();
  if (axis < 0 || axis >= d.dim) throw Error(ErrorCode::InvalidArgument, "derivative axis out of range");
  SpectralField out(c.domain());
  std::size_t st = d.stride(axis);
  int M = d.modes[axis];
  for (std::size_t n = 0; n < c.size(); ++n) {
    int j = static_cast<int>((n / st) % M);
    out[n] = eigenvalue(j - M / 2, d.length(axis)) * c[n];
  }
  return out;
}

}  // namespace landau
