#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "landau/diagnostics.hpp"
#include "landau/kernels.hpp"

namespace landau {

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;

struct TestProblem {
  char id = 'A';
  int dim = 2;
  KernelSpec kernel;
  ScalarFn density;
  std::optional<VectorFn> reference_Qc;
  std::optional<ScalarFn> reference_Q;
  std::optional<std::function<double(const Vec&, double)>> exact_solution;
  double half_width = 10.0;  // default domain [-b, b]^d
  int default_modes = 64;
  double default_t0 = 0.0;

  GridField sample(const DomainPtr& d) const {
    GridField f(d);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = density(d->point(n));
    return f;
  }
  GridField sample_exact(const DomainPtr& d, double t) const {
    if (!exact_solution) throw Error(ErrorCode::NoReferenceAvailable, "problem has no exact solution");
    GridField f(d);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = (*exact_solution)(d->point(n), t);
    return f;
  }
};

struct BkwConstants {
  double a1, a2, a3;
};

inline BkwConstants bkw_constants(int d) { return d == 2 ? BkwConstants{2.0, 1.0, 1.0 / 8.0} : BkwConstants{2.5, 1.5, 1.0 / 6.0}; }

inline double bkw_K(double t, int d) { return 1.0 - 0.5 * std::exp(-bkw_constants(d).a3 * t); }

inline double bkw(const Vec& v, double t, int d) {
  auto c = bkw_constants(d);
  double K = bkw_K(t, d);
  double r2 = 0.0;
  for (int a = 0; a < d; ++a) r2 += v[a] * v[a];
  double pre = std::pow(2.0 * std::numbers::pi * K, -0.5 * d);
  return pre * std::exp(-0.5 * r2 / K) * (c.a1 - c.a2 / K + 0.5 * (1.0 - K) / (K * K) * r2);
}

namespace detail {

inline double r2_of(const Vec& v, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += v[a] * v[a];
  return s;
}

inline TestProblem problem_A(int d) {
  using std::numbers::pi;
  TestProblem p;
  p.id = 'A';
  p.dim = d;
  p.kernel = KernelSpec::constant(d, d == 2 ? 1.0 / 16.0 : 1.0 / 24.0);
  p.exact_solution = [d](const Vec& v, double t) { return bkw(v, t, d); };
  if (d == 2) {
    p.density = [](const Vec& v) {
      double r2 = r2_of(v, 2);
      return std::exp(-r2) * r2 / pi;
    };
    p.reference_Qc = [](const Vec& v) {
      double r2 = r2_of(v, 2);
      double s = -std::exp(-r2) * (r2 - 2.0) / (16.0 * pi);
      return Vec{s * v[0], s * v[1], 0.0};
    };
    p.reference_Q = [](const Vec& v) {
      double r2 = r2_of(v, 2);
      return std::exp(-r2) * (r2 * r2 - 4.0 * r2 + 2.0) / (8.0 * pi);
    };
    p.default_modes = 100;
    p.default_t0 = 0.0;
  } else {
    double c = std::pow(pi, 1.5);
    p.density = [c](const Vec& v) {
      double r2 = r2_of(v, 3);
      return std::exp(-r2) * (2.0 * r2 - 1.0) / (2.0 * c);
    };
    p.reference_Qc = [c](const Vec& v) {
      double r2 = r2_of(v, 3);
      double s = -std::exp(-r2) * (r2 - 2.5) / (12.0 * c);
      return Vec{s * v[0], s * v[1], s * v[2]};
    };
    p.reference_Q = [c](const Vec& v) {
      double r2 = r2_of(v, 3);
      return std::exp(-r2) * (r2 * r2 - 5.0 * r2 + 3.75) / (6.0 * c);
    };
    p.default_modes = 64;
    p.default_t0 = 6.0 * std::log(1.25);
  }
  return p;
}

inline TestProblem problem_B(int d) {
  using std::cos, std::sin;
  using std::numbers::pi;
  TestProblem p;
  p.id = 'B';
  p.dim = d;
  p.kernel = KernelSpec::cosine(d);
  p.half_width = pi;
  p.default_modes = 64;
  p.density = [d](const Vec& v) {
    double s = 1.0;
    for (int a = 0; a < d; ++a) s *= sin(v[a]);
    return s;
  };
  if (d == 2) {
    p.reference_Qc = [](const Vec& v) {
      double v1 = v[0], v2 = v[1];
      double q1 = pi * pi / 8.0 * cos(2 * v2) * (2 * v1 * cos(2 * v1) - sin(2 * v1) - 2 * v1);
      double q2 = -pi * pi / 4.0 * cos(2 * v1) * sin(v2) * (2 * v2 * sin(v2) + cos(v2));
      return Vec{q1, q2, 0.0};
    };
    p.reference_Q = [](const Vec& v) {
      double v1 = v[0], v2 = v[1];
      double q1 = (2 * v2 * sin(2 * v2) + 1) * cos(2 * v1);
      double q2 = (2 * v1 * sin(2 * v1) + 1) * cos(2 * v2);
      return -pi * pi / 4.0 * (q1 + q2);
    };
  } else {
    p.reference_Qc = [](const Vec& v) {
      double v1 = v[0], v2 = v[1], v3 = v[2];
      double c3 = cos(v3);
      double q11 = (cos(2 * v3) - 0.5) * (v1 * cos(2 * v1) - 0.5 * sin(2 * v1) - v1) * cos(2 * v2);
      double q12 = (0.25 * sin(2 * v1) - 0.5 * v1 * cos(2 * v1)) * cos(2 * v3) + v1 * (c3 * c3 - 0.5);
      double q21 = (cos(2 * v3) - 0.5) * (v2 * cos(2 * v2) - 0.5 * sin(2 * v2) - v2) * cos(2 * v1);
      double q22 = (0.25 * sin(2 * v2) - 0.5 * v2 * cos(2 * v2)) * cos(2 * v3) + v2 * (c3 * c3 - 0.5);
      double q31 = 0.25 * (2 * v3 * cos(2 * v3) - sin(2 * v3) - 2 * v3);
      double q32 = 2 * cos(2 * v1) * cos(2 * v2) - cos(2 * v1) - cos(2 * v2);
      double k = -pi * pi * pi / 4.0;
      return Vec{k * (q11 + q12), k * (q21 + q22), k * q31 * q32};
    };
    p.reference_Q = [](const Vec& v) {
      double v1 = v[0], v2 = v[1], v3 = v[2];
      double c3 = cos(v3);
      double q11 = v2 * sin(2 * v2) * cos(2 * v3) + v3 * cos(2 * v2) * sin(2 * v3);
      double q12 = 0.5 * (-v2 * sin(2 * v2) - v3 * sin(2 * v3) + cos(2 * v2) + cos(2 * v3) - 1);
      double q1 = (q11 + q12) * cos(2 * v1);
      double q21 = (v1 * sin(2 * v1) + 0.5) * cos(2 * v3);
      double q22 = -0.5 * (v1 * sin(2 * v1) + v3 * sin(2 * v3) + 1);
      double q2 = (q21 + q22) * cos(2 * v2);
      double q3 = -0.5 * (v1 * sin(2 * v1) + v2 * sin(2 * v2)) * cos(2 * v3) - c3 * c3 + 0.5;
      return pi * pi * pi / 2.0 * (q1 + q2 + q3);
    };
  }
  return p;
}

inline TestProblem problem_C(int d) {
  using std::exp;
  using std::numbers::pi;
  TestProblem p;
  p.id = 'C';
  p.dim = d;
  if (d == 2) {
    p.kernel = KernelSpec::gaussian({1.0, 2.0});
    p.default_modes = 256;
    p.density = [](const Vec& v) { return exp(-0.5 * v[0] * v[0] - 0.25 * v[1] * v[1]); };
    auto q1 = [](const Vec& v) { return std::sqrt(6.0) * pi * exp(-5.0 / 6.0 * v[0] * v[0] - 17.0 / 36.0 * v[1] * v[1]); };
    p.reference_Qc = [q1](const Vec& v) {
      double a = q1(v), v1 = v[0], v2 = v[1];
      return Vec{-a * v1 * (v2 * v2 + 18.0) / 2187.0, a * v2 * (v1 * v1 + 3.0) / 729.0, 0.0};
    };
    p.reference_Q = [q1](const Vec& v) {
      double v1s = v[0] * v[0], v2s = v[1] * v[1];
      return -q1(v) * (7 * v1s * v2s - 198 * v1s + 57 * v2s + 54) / 13122.0;
    };
  } else {
    p.kernel = KernelSpec::gaussian({1.0, 2.0, 3.0});
    p.default_modes = 64;
    p.density = [](const Vec& v) { return exp(-0.5 * v[0] * v[0] - 0.25 * v[1] * v[1] - 0.125 * v[2] * v[2]); };
    auto q1 = [](const Vec& v) {
      return std::sqrt(3.0) * std::pow(pi, 1.5) *
             exp(-5.0 / 6.0 * v[0] * v[0] - 17.0 / 36.0 * v[1] * v[1] - 49.0 / 200.0 * v[2] * v[2]);
    };
    p.reference_Qc = [q1](const Vec& v) {
      double v1 = v[0], v2 = v[1], v3 = v[2];
      double a = 2.0 * q1(v);
      double q21 = -v1 * (1250 * v2 * v2 + 243 * v3 * v3 + 46800) / 6834375.0;
      double q22 = v2 * (1250 * v1 * v1 - 9 * v3 * v3 + 2850) / 2278125.0;
      double q23 = v3 * (27 * v1 * v1 + v2 * v2 + 99) / 91125.0;
      return Vec{a * q21, a * q22, a * q23};
    };
    p.reference_Q = [q1](const Vec& v) {
      double s1 = v[0] * v[0], s2 = v[1] * v[1], s3 = v[2] * v[2];
      double q31 = 17500 * s1 * s2 + 7047 * s1 * s3 + 135 * s2 * s3;
      // the q32 term of the sum
      double q32 = -1005300 * s1 + 111000 * s2 + 46899 * s3 + 369900;
      return -q1(v) * (q31 + q32) / 41006250.0;
    };
  }
  return p;
}

inline TestProblem problem_D(int d) {
  using std::numbers::pi;
  TestProblem p;
  p.id = 'D';
  p.dim = d;
  if (d == 2) {
    p.kernel = KernelSpec::power_law(2, 1.0 / 16.0, -3.0);
    p.default_modes = 128;
    p.density = [](const Vec& v) {
      double a = (v[0] + 2) * (v[0] + 2) + (v[1] - 1) * (v[1] - 1);
      double b = v[0] * v[0] + (v[1] + 1) * (v[1] + 1);
      return (std::exp(-0.5 * a) + std::exp(-0.5 * b)) / (4.0 * pi);
    };
  } else {
    p.kernel = KernelSpec::power_law(3, 1.0 / (4.0 * pi), -3.0);
    p.default_modes = 64;
    const double c1 = 10.0, c2 = 0.3;
    p.density = [c1, c2](const Vec& v) {
      double r = std::sqrt(r2_of(v, 3));
      return std::exp(-c1 / (c2 * c2) * (r - c2) * (r - c2)) / (c1 * c1);
    };
  }
  return p;
}

}  // namespace detail

inline TestProblem make_problem(char id, int d) {
  if (d != 2 && d != 3) throw Error(ErrorCode::UnsupportedProblem, "dimension must be 2 or 3");
  switch (std::toupper(static_cast<unsigned char>(id))) {
    case 'A': return detail::problem_A(d);
    case 'B': return detail::problem_B(d);
    case 'C': return detail::problem_C(d);
    case 'D': return detail::problem_D(d);
  }
  throw Error(ErrorCode::UnsupportedProblem, std::string("unknown test problem '") + id + "'");
}

inline std::pair<Vec, double> reference_operator(const TestProblem& p, const Vec& v) {
  if (!p.reference_Qc || !p.reference_Q)
    throw Error(ErrorCode::NoReferenceAvailable, std::string("problem ") + p.id + " has no reference operator");
  return {(*p.reference_Qc)(v), (*p.reference_Q)(v)};
}

inline DomainPtr default_domain(const TestProblem& p, int modes = 0, int box_cells = 0) {
  return symmetric_domain(p.dim, p.half_width, modes > 0 ? modes : p.default_modes, box_cells);
}

}  // namespace landau
