#pragma once

#include <cfloat>
#include <functional>

#include "landau/fourier.hpp"

namespace landau {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  Vec momentum{0, 0, 0};
  double energy = 0.0;
  double entropy = 0.0;
  double positive_fraction = 0.0;
};

// Neumaier-compensated sum; plain accumulation over 64^3 points leaves
// ~1e-13 relative noise in the mass, which would mask its exact invariance
class CompensatedSum {
 public:
  void add(double x) {
    double t = s_ + x;
    c_ += std::abs(s_) >= std::abs(x) ? (s_ - t) + x : (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

// rectangle rule on the periodic grid
inline double mass(const GridField& f) {
  CompensatedSum s;
  for (double x : f.values()) s.add(x);
  return s.value() * f.domain()->cell_volume();
}

inline Vec momentum(const GridField& f) {
  const auto& d = *f.domain();
  std::array<CompensatedSum, 3> s;
  for (std::size_t n = 0; n < f.size(); ++n) {
    Vec v = d.point(n);
    for (int a = 0; a < d.dim; ++a) s[a].add(v[a] * f[n]);
  }
  Vec p{0, 0, 0};
  for (int a = 0; a < d.dim; ++a) p[a] = s[a].value() * d.cell_volume();
  return p;
}

inline double energy(const GridField& f) {
  const auto& d = *f.domain();
  CompensatedSum s;
  for (std::size_t n = 0; n < f.size(); ++n) {
    Vec v = d.point(n);
    s.add((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) * f[n]);
  }
  return s.value() * d.cell_volume();
}

// sum over strictly positive values only
inline double entropy(const GridField& f, double* positive_fraction = nullptr) {
  CompensatedSum s;
  std::size_t pos = 0;
  for (double x : f.values())
    if (x > 0.0) {
      s.add(x * std::log(x));
      ++pos;
    }
  if (positive_fraction) *positive_fraction = f.size() ? static_cast<double>(pos) / f.size() : 0.0;
  return s.value() * f.domain()->cell_volume();
}

inline DiagnosticsRecord diagnostics(double t, const GridField& f) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = mass(f);
  r.momentum = momentum(f);
  r.energy = energy(f);
  r.entropy = entropy(f, &r.positive_fraction);
  return r;
}

struct ErrorNorms {
  double abs_max = 0.0;
  double rel_max = 0.0;  // abs_max relative to the reference scale max|ref|
  double l2 = 0.0;       // sqrt(prod h * sum err^2)
  double ref_max = 0.0;
};

inline ErrorNorms error_norms(const GridField& numeric, const std::function<double(const Vec&)>& reference) {
  const auto& d = *numeric.domain();
  ErrorNorms e;
  double sq = 0.0;
  for (std::size_t n = 0; n < numeric.size(); ++n) {
    double r = reference(d.point(n));
    double err = std::abs(numeric[n] - r);
    e.abs_max = std::max(e.abs_max, err);
    e.ref_max = std::max(e.ref_max, std::abs(r));
    sq += err * err;
  }
  double eps_den = 1e-30 * e.ref_max + DBL_MIN;
  e.rel_max = e.abs_max / std::max(e.ref_max, eps_den);
  e.l2 = std::sqrt(sq * d.cell_volume());
  return e;
}

inline ErrorNorms error_norms(const GridField& numeric, const GridField& reference) {
  std::vector<double> ref = reference.values();
  const auto& d = *numeric.domain();
  ErrorNorms e;
  double sq = 0.0;
  for (std::size_t n = 0; n < numeric.size(); ++n) {
    double err = std::abs(numeric[n] - ref[n]);
    e.abs_max = std::max(e.abs_max, err);
    e.ref_max = std::max(e.ref_max, std::abs(ref[n]));
    sq += err * err;
  }
  e.rel_max = e.abs_max / std::max(e.ref_max, 1e-30 * e.ref_max + DBL_MIN);
  e.l2 = std::sqrt(sq * d.cell_volume());
  return e;
}

}  // namespace landau
