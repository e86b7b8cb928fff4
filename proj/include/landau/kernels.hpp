#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "landau/fourier.hpp"

namespace landau {

struct ConstantKernel {
  double C = 1.0;
};
struct CosineProductKernel {};
// exp(-sum_a w_a v_a^2)
struct GaussianKernel {
  std::vector<double> weights;
};
// C |v|^beta
struct PowerLawKernel {
  double C = 1.0;
  double beta = -3.0;
};

struct KernelSpec {
  int dim = 2;
  std::variant<ConstantKernel, CosineProductKernel, GaussianKernel, PowerLawKernel> family;

  static KernelSpec constant(int d, double C) {
    if (!(C > 0)) throw Error(ErrorCode::InvalidArgument, "constant kernel needs C > 0");
    return {d, ConstantKernel{C}};
  }
  static KernelSpec cosine(int d) { return {d, CosineProductKernel{}}; }
  static KernelSpec gaussian(std::vector<double> w) {
    int d = static_cast<int>(w.size());
    return {d, GaussianKernel{std::move(w)}};
  }
  static KernelSpec power_law(int d, double C, double beta) {
    if (!(C > 0)) throw Error(ErrorCode::InvalidArgument, "power-law kernel needs C > 0");
    return {d, PowerLawKernel{C, beta}};
  }

  bool is_constant() const { return std::holds_alternative<ConstantKernel>(family); }
  bool is_singular() const {
    auto* p = std::get_if<PowerLawKernel>(&family);
    return p && p->beta < 0;
  }

  // serialization fingerprint: tag + up to four parameters
  int tag() const { return static_cast<int>(family.index()); }
  std::array<double, 4> params() const {
    std::array<double, 4> p{0, 0, 0, 0};
    if (auto* c = std::get_if<ConstantKernel>(&family)) p[0] = c->C;
    if (auto* g = std::get_if<GaussianKernel>(&family))
      for (std::size_t a = 0; a < g->weights.size() && a < 3; ++a) p[a] = g->weights[a];
    if (auto* q = std::get_if<PowerLawKernel>(&family)) {
      p[0] = q->C;
      p[1] = q->beta;
    }
    return p;
  }
  static KernelSpec from_tag(int d, int tag, const std::array<double, 4>& p) {
    switch (tag) {
      case 0: return constant(d, p[0]);
      case 1: return cosine(d);
      case 2: return gaussian(std::vector<double>(p.begin(), p.begin() + d));
      case 3: return power_law(d, p[0], p[1]);
    }
    throw Error(ErrorCode::VersionMismatch, "unknown kernel tag " + std::to_string(tag));
  }
  bool operator==(const KernelSpec& o) const { return dim == o.dim && tag() == o.tag() && params() == o.params(); }

  std::string name() const {
    switch (tag()) {
      case 0: return "constant";
      case 1: return "cosine";
      case 2: return "gaussian";
      default: return "powerlaw";
    }
  }
};

inline double kernel_value(const KernelSpec& k, const Vec& v) {
  const int d = k.dim;
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantKernel>) {
          return f.C;
        } else if constexpr (std::is_same_v<T, CosineProductKernel>) {
          double p = 1.0;
          for (int a = 0; a < d; ++a) p *= std::cos(v[a]);
          return p;
        } else if constexpr (std::is_same_v<T, GaussianKernel>) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += f.weights[a] * v[a] * v[a];
          return std::exp(-s);
        } else {
          double r2 = 0.0;
          for (int a = 0; a < d; ++a) r2 += v[a] * v[a];
          if (r2 == 0.0) {
            if (f.beta < 0) throw Error(ErrorCode::SingularPoint, "negative power kernel at the origin");
            return f.beta == 0 ? f.C : 0.0;
          }
          if (f.beta == -3.0) return f.C / (r2 * std::sqrt(r2));
          return f.C * std::pow(r2, 0.5 * f.beta);
        }
      },
      k.family);
}

enum class InterpolantKind { None, Lagrange, RadialQuartic };

// psi on the grid plus the sub-grid interpolant used inside the box.
// Regular kernels: tensor Lagrange interpolant of phi through the box grid
// nodes (psi = phi at every node). Singular kernels: radial a0 + a1 r^2 + a2 r^4
// least-squares fit to phi on the closed box boundary.
struct RegularizedKernel {
  KernelSpec spec;
  DomainPtr domain;
  GridField psi;
  std::vector<std::pair<std::size_t, double>> residue;  // sorted by flat index, entries on L~ only
  InterpolantKind kind = InterpolantKind::None;
  std::array<double, 3> radial{0, 0, 0};
  std::vector<std::vector<double>> nodes;  // lagrange nodes per axis
  std::vector<double> node_values;         // phi on the node lattice, row-major

  double interpolant(const Vec& u) const {
    const int d = spec.dim;
    if (kind == InterpolantKind::RadialQuartic) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) r2 += u[a] * u[a];
      return radial[0] + r2 * (radial[1] + r2 * radial[2]);
    }
    if (kind == InterpolantKind::Lagrange) {
      std::vector<std::vector<double>> basis(d);
      for (int a = 0; a < d; ++a) basis[a] = lagrange_basis(nodes[a], u[a]);
      double s = 0.0;
      std::size_t n = nodes[0].size();
      if (d == 2) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < nodes[1].size(); ++j)
            s += basis[0][i] * basis[1][j] * node_values[i * nodes[1].size() + j];
      } else {
        std::size_t n1 = nodes[1].size(), n2 = nodes[2].size();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n1; ++j) {
            double bij = basis[0][i] * basis[1][j];
            for (std::size_t k = 0; k < n2; ++k) s += bij * basis[2][k] * node_values[(i * n1 + j) * n2 + k];
          }
      }
      return s;
    }
    return kernel_value(spec, u);
  }

  // (phi - psi)(u) inside the box, 0 at the origin
  double residue_at(const Vec& u) const {
    bool origin = true;
    for (int a = 0; a < spec.dim; ++a) origin = origin && u[a] == 0.0;
    if (origin) return 0.0;
    return kernel_value(spec, u) - interpolant(u);
  }

  static std::vector<double> lagrange_basis(const std::vector<double>& x, double t) {
    std::vector<double> b(x.size(), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        if (i != j) b[i] *= (t - x[j]) / (x[i] - x[j]);
    return b;
  }
};

inline RegularizedKernel regularize(const KernelSpec& spec, const DomainPtr& domain) {
  const auto& d = *domain;
  if (spec.dim != d.dim) throw Error(ErrorCode::InvalidArgument, "kernel and domain dimensions differ");
  if (spec.is_singular() && !d.box)
    throw Error(ErrorCode::MissingBoxForSingularKernel, "singular kernel requires a singularity box");

  RegularizedKernel rk;
  rk.spec = spec;
  rk.domain = domain;
  rk.psi = GridField(domain);
  auto& psi = rk.psi.values();

  if (!d.box) {
    for (std::size_t n = 0; n < d.size(); ++n) psi[n] = kernel_value(spec, d.point(n));
    return rk;
  }

  const auto& box = *d.box;
  auto in_closed_box = [&](const Index& idx) {
    for (int a = 0; a < d.dim; ++a)
      if (idx[a] < box.lo_index[a] || idx[a] > box.hi_index[a]) return false;
    return true;
  };
  auto in_open_box = [&](const Index& idx) {
    for (int a = 0; a < d.dim; ++a)
      if (idx[a] <= box.lo_index[a] || idx[a] >= box.hi_index[a]) return false;
    return true;
  };

  if (spec.is_singular()) {
    rk.kind = InterpolantKind::RadialQuartic;
    // scaled least squares on the boundary shell, s = r^2 / s0
    std::vector<double> s, y;
    double s0 = 0.0;
    for (int a = 0; a < d.dim; ++a) s0 += box.bounds[a].hi * box.bounds[a].hi;
    for (std::size_t n = 0; n < d.size(); ++n) {
      Index idx = d.unravel(n);
      if (!in_closed_box(idx) || in_open_box(idx)) continue;
      Vec v = d.point(n);
      double r2 = 0.0;
      for (int a = 0; a < d.dim; ++a) r2 += v[a] * v[a];
      s.push_back(r2 / s0);
      y.push_back(kernel_value(spec, v));
    }
    Eigen::MatrixXd A(s.size(), 3);
    Eigen::VectorXd b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = s[i];
      A(i, 2) = s[i] * s[i];
      b(i) = y[i];
    }
    Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    rk.radial = {c(0), c(1) / s0, c(2) / (s0 * s0)};
  } else {
    rk.kind = InterpolantKind::Lagrange;
    rk.nodes.resize(d.dim);
    for (int a = 0; a < d.dim; ++a)
      for (int l = box.lo_index[a]; l <= box.hi_index[a]; ++l) rk.nodes[a].push_back(d.coord(a, l));
    if (d.dim == 2) {
      for (double x : rk.nodes[0])
        for (double y : rk.nodes[1]) rk.node_values.push_back(kernel_value(spec, {x, y, 0.0}));
    } else {
      for (double x : rk.nodes[0])
        for (double y : rk.nodes[1])
          for (double z : rk.nodes[2]) rk.node_values.push_back(kernel_value(spec, {x, y, z}));
    }
  }

  for (std::size_t n = 0; n < d.size(); ++n) {
    Index idx = d.unravel(n);
    if (!in_open_box(idx)) {
      psi[n] = kernel_value(spec, d.point(n));
      continue;
    }
    Vec v = d.point(n);
    bool origin = true;
    for (int a = 0; a < d.dim; ++a) origin = origin && v[a] == 0.0;
    if (rk.kind == InterpolantKind::Lagrange) {
      psi[n] = kernel_value(spec, v);  // the interpolant reproduces node values exactly
      rk.residue.emplace_back(n, 0.0);
    } else {
      psi[n] = rk.interpolant(v);
      rk.residue.emplace_back(n, origin ? 0.0 : kernel_value(spec, v) - psi[n]);
    }
  }
  return rk;
}

inline const std::vector<std::pair<std::size_t, double>>& residue_values(const RegularizedKernel& rk) {
  return rk.residue;
}

}  // namespace landau
