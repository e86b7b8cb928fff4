#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "landau/error.hpp"

namespace landau {

using Vec = std::array<double, 3>;  // unused trailing components stay 0
using Index = std::array<int, 3>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Grid-aligned box around the origin. lo_index/hi_index are the grid indices of
// the box faces, interior holds the flat indices strictly inside (L~).
struct SingularityBox {
  std::vector<Interval> bounds;
  std::vector<int> lo_index;
  std::vector<int> hi_index;
  std::vector<std::size_t> interior;

  int cells(int axis) const { return (hi_index[axis] - lo_index[axis]) / 2; }
  bool operator==(const SingularityBox& o) const {
    return bounds == o.bounds && lo_index == o.lo_index && hi_index == o.hi_index;
  }
};

class TruncatedDomain {
 public:
  int dim = 0;
  std::vector<Interval> intervals;
  std::vector<int> modes;
  std::optional<SingularityBox> box;

  double length(int a) const { return intervals[a].length(); }
  double h(int a) const { return intervals[a].length() / modes[a]; }
  double coord(int a, int l) const { return intervals[a].lo + l * h(a); }

  std::size_t size() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(modes[a]);
    return n;
  }
  double cell_volume() const {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) w *= h(a);
    return w;
  }
  double volume() const {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) w *= length(a);
    return w;
  }
  double sqrt_volume() const { return std::sqrt(volume()); }

  std::size_t stride(int a) const {
    std::size_t s = 1;
    for (int b = a + 1; b < dim; ++b) s *= static_cast<std::size_t>(modes[b]);
    return s;
  }
  Index unravel(std::size_t n) const {
    Index idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(n % modes[a]);
      n /= modes[a];
    }
    return idx;
  }
  std::size_t ravel(const Index& idx) const {
    std::size_t n = 0;
    for (int a = 0; a < dim; ++a) n = n * modes[a] + idx[a];
    return n;
  }
  Vec point(std::size_t n) const {
    Index idx = unravel(n);
    Vec v{0, 0, 0};
    for (int a = 0; a < dim; ++a) v[a] = coord(a, idx[a]);
    return v;
  }
  // mode multi-index m (natural order, m_a in [-M_a/2, M_a/2)) of flat spectral index n
  Index mode(std::size_t n) const {
    Index idx = unravel(n);
    for (int a = 0; a < dim; ++a) idx[a] -= modes[a] / 2;
    return idx;
  }

  bool same_geometry(const TruncatedDomain& o) const {
    return dim == o.dim && intervals == o.intervals && modes == o.modes;
  }
  bool operator==(const TruncatedDomain& o) const { return same_geometry(o) && box == o.box; }
};

using DomainPtr = std::shared_ptr<const TruncatedDomain>;

namespace detail {

inline int aligned_index(const TruncatedDomain& d, int a, double x) {
  double s = (x - d.intervals[a].lo) / d.h(a);
  double r = std::round(s);
  if (std::abs(s - r) > 1e-9 * std::max(1.0, std::abs(s)))
    throw Error(ErrorCode::BoxNotGridAligned,
                "box face " + std::to_string(x) + " is not a grid coordinate on axis " + std::to_string(a + 1));
  return static_cast<int>(r);
}

}  // namespace detail

// box_halfwidths empty -> no box; otherwise the box is prod [-b0_a, b0_a]
inline DomainPtr build_domain(const std::vector<Interval>& intervals, const std::vector<int>& modes,
                              const std::vector<double>& box_halfwidths = {}) {
  int d = static_cast<int>(intervals.size());
  if (d < 2 || d > 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 2 or 3");
  if (static_cast<int>(modes.size()) != d)
    throw Error(ErrorCode::InvalidArgument, "need one mode count per interval");
  for (int a = 0; a < d; ++a) {
    if (!(intervals[a].lo < intervals[a].hi))
      throw Error(ErrorCode::EmptyInterval, "axis " + std::to_string(a + 1));
    if (modes[a] % 2 != 0) throw Error(ErrorCode::OddModeCount, "M_" + std::to_string(a + 1) + " = " + std::to_string(modes[a]));
    if (modes[a] < 4) throw Error(ErrorCode::InvalidArgument, "mode counts must be >= 4");
  }

  auto dom = std::make_shared<TruncatedDomain>();
  dom->dim = d;
  dom->intervals = intervals;
  dom->modes = modes;

  if (!box_halfwidths.empty()) {
    if (static_cast<int>(box_halfwidths.size()) != d)
      throw Error(ErrorCode::InvalidArgument, "need one box halfwidth per axis");
    SingularityBox box;
    for (int a = 0; a < d; ++a) {
      double b0 = box_halfwidths[a];
      if (!(b0 > 0)) throw Error(ErrorCode::InvalidArgument, "box halfwidth must be positive");
      if (!(intervals[a].lo < -b0 && b0 < intervals[a].hi))
        throw Error(ErrorCode::BoxNotInsideDomain, "axis " + std::to_string(a + 1));
      int lo = detail::aligned_index(*dom, a, -b0);
      int hi = detail::aligned_index(*dom, a, b0);
      box.lo_index.push_back(lo);
      box.hi_index.push_back(hi);
      box.bounds.push_back({dom->coord(a, lo), dom->coord(a, hi)});
    }
    for (std::size_t n = 0; n < dom->size(); ++n) {
      Index idx = dom->unravel(n);
      bool inside = true;
      for (int a = 0; a < d && inside; ++a) inside = idx[a] > box.lo_index[a] && idx[a] < box.hi_index[a];
      if (inside) box.interior.push_back(n);
    }
    dom->box = std::move(box);
  }
  return dom;
}

// box of `cells` grid cells per axis around the origin (0 -> no box)
inline DomainPtr build_domain_cells(const std::vector<Interval>& intervals, const std::vector<int>& modes, int cells) {
  if (cells <= 0) return build_domain(intervals, modes);
  std::vector<double> hw;
  for (std::size_t a = 0; a < intervals.size(); ++a) hw.push_back(cells * intervals[a].length() / modes[a]);
  return build_domain(intervals, modes, hw);
}

inline std::vector<Vec> grid_points(const TruncatedDomain& d) {
  std::vector<Vec> pts(d.size());
  for (std::size_t n = 0; n < pts.size(); ++n) pts[n] = d.point(n);
  return pts;
}

inline DomainPtr symmetric_domain(int d, double b, int M, int box_cells = 0) {
  return build_domain_cells(std::vector<Interval>(d, Interval{-b, b}), std::vector<int>(d, M), box_cells);
}

}  // namespace landau
