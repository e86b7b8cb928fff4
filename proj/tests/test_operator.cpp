#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace landau;

namespace {

double rel_error(const GridField& num, const std::function<double(const Vec&)>& ref) {
  return error_norms(num, ref).rel_max;
}

double rel_diff(const GridField& a, const GridField& b) { return error_norms(a, b).rel_max; }

Approach all_approaches[] = {Approach::CCT1, Approach::CCT2, Approach::CRT1,
                             Approach::CRT2, Approach::CST1, Approach::CST2};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

// gradient of the Test A 2D density
double dfA(const Vec& v, int a) { return 2 * v[a] / M_PI * std::exp(-(v[0] * v[0] + v[1] * v[1])) * (1 - v[0] * v[0] - v[1] * v[1]); }

}  // namespace

TEST(IndexSets, Sizes) {
  auto s2 = index_sets(2), s3 = index_sets(3);
  EXPECT_EQ(s2.M1.size(), 3u);
  EXPECT_EQ(s2.M2.size(), 4u);
  EXPECT_EQ(s2.M3.size(), 6u);
  EXPECT_EQ(s3.M1.size(), 6u);
  EXPECT_EQ(s3.M2.size(), 12u);
  EXPECT_EQ(s3.M3.size(), 10u);
  for (auto [i, j, k] : s3.M2) EXPECT_LE(i, j);
}

TEST(Approach, ParseAndClassify) {
  EXPECT_EQ(parse_approach("cst2"), Approach::CST2);
  EXPECT_EQ(parse_approach("CcT1"), Approach::CCT1);
  EXPECT_EQ(code_of([] { parse_approach("NST1"); }), ErrorCode::InvalidArgument);
  EXPECT_TRUE(transforms_once(Approach::CRT1));
  EXPECT_FALSE(transforms_once(Approach::CST2));
}

TEST(Gradient, ConstantAndTestA) {
  auto d = symmetric_domain(2, 10, 100);
  GridField c(d);
  for (auto& x : c.values()) x = 3.0;
  for (const auto& g : gradient(forward_transform(c))) EXPECT_LE(oracle::max_abs(g.values()), 1e-13);
  auto p = make_problem('A', 2);
  auto g = gradient(forward_transform(p.sample(d)));
  for (int a = 0; a < 2; ++a) EXPECT_LE(error_norms(g[a], [a](const Vec& v) { return dfA(v, a); }).abs_max, 1e-8);
}

TEST(Evaluate, TransformCounts) {
  auto p2 = make_problem('C', 2);
  auto d2 = default_domain(p2, 32);
  auto t2 = build_tables(d2, p2.kernel);
  auto f2 = p2.sample(d2);
  EXPECT_EQ(evaluate(Approach::CST2, f2, t2).transform_count, 13);
  EXPECT_EQ(evaluate(Approach::CRT2, f2, t2).transform_count, 13);

  auto p3 = make_problem('D', 3);
  auto d3 = symmetric_domain(3, 1, 16, 4);
  auto t3 = build_tables(d3, p3.kernel);
  auto ev = evaluate(Approach::CST2, p3.sample(d3), t3);
  EXPECT_EQ(ev.transform_count, 26);
  EXPECT_EQ(ev.I_fields.size(), 6u);
  EXPECT_EQ(ev.J_fields.size(), 12u);
  EXPECT_EQ(ev.Qc.size(), 3u);
}

TEST(Evaluate, ZeroModeIsExactlyZero) {
  for (char id : {'A', 'C', 'D'}) {
    auto p = make_problem(id, 2);
    auto d = default_domain(p, 32, p.kernel.is_singular() ? 4 : 0);
    auto t = build_tables(d, p.kernel);
    for (Approach a : {Approach::CST1, Approach::CST2}) {
      auto ev = evaluate(a, p.sample(d), t);
      EXPECT_EQ(ev.Q_coefficients[ev.Q_coefficients.zero_index()], cplx(0.0)) << id;
    }
  }
}

TEST(Evaluate, ZeroDensity) {
  auto p = make_problem('D', 2);
  auto d = default_domain(p, 32, 4);
  auto t = build_tables(d, p.kernel);
  GridField z(d);
  for (Approach a : {Approach::CST1, Approach::CST2}) {
    auto ev = evaluate(a, z, t);
    for (const auto& f : ev.I_fields) EXPECT_EQ(oracle::max_abs(f.values()), 0.0);
    for (const auto& f : ev.J_fields) EXPECT_EQ(oracle::max_abs(f.values()), 0.0);
    for (const auto& f : ev.Qc) EXPECT_EQ(oracle::max_abs(f.values()), 0.0);
    EXPECT_EQ(oracle::max_abs(ev.Q_values.values()), 0.0);
  }
}

TEST(Evaluate, TestA2D) {
  auto p = make_problem('A', 2);
  auto d = default_domain(p);
  auto t = build_tables(d, p.kernel);
  auto f = p.sample(d);
  for (Approach a : all_approaches) {
    auto ev = evaluate(a, f, t);
    EXPECT_LE(error_norms(ev.Q_values, *p.reference_Q).abs_max, 1e-6) << to_string(a);
    EXPECT_LE(rel_error(ev.Q_values, *p.reference_Q), 1e-10) << to_string(a);
    for (int i = 0; i < 2; ++i) {
      auto ref = [&, i](const Vec& v) { return (*p.reference_Qc)(v)[i]; };
      EXPECT_LE(error_norms(ev.Qc[i], ref).abs_max, 1e-6) << to_string(a);
    }
    std::size_t origin = d->ravel({50, 50, 0});
    EXPECT_NEAR(ev.Q_values[origin], 1 / (4 * M_PI), 1e-10);
    EXPECT_LE(std::abs(ev.Qc[0][origin]), 1e-14);
    EXPECT_LE(std::abs(ev.Qc[1][origin]), 1e-14);
  }
}

TEST(Evaluate, ConstantKernelEquivalence) {
  auto p = make_problem('A', 3);
  auto d = build_domain({{-7, 8}, {-8, 7}, {-7.5, 7.5}}, {32, 32, 32});
  auto t = build_tables(d, p.kernel);
  auto f = p.sample(d);
  auto q1 = evaluate(Approach::CCT1, f, t), q2 = evaluate(Approach::CCT2, f, t);
  for (Approach a : {Approach::CRT1, Approach::CST1}) EXPECT_LE(rel_diff(evaluate(a, f, t).Q_values, q1.Q_values), 1e-10);
  for (Approach a : {Approach::CRT2, Approach::CST2}) EXPECT_LE(rel_diff(evaluate(a, f, t).Q_values, q2.Q_values), 1e-10);
}

TEST(Evaluate, TestC2D) {
  auto p = make_problem('C', 2);
  auto d = default_domain(p);
  auto f = p.sample(d);
  auto t = build_tables(d, p.kernel);
  for (Approach a : {Approach::CST2, Approach::CST1, Approach::CRT2}) {
    auto ev = evaluate(a, f, t);
    EXPECT_LE(rel_error(ev.Q_values, *p.reference_Q), 1e-8) << to_string(a);
  }
  // singular-capable tables with a box around the origin give the same answer
  auto db = default_domain(p, 0, 4);
  auto tb = build_tables(db, p.kernel);
  EXPECT_LE(rel_error(evaluate(Approach::CST2, p.sample(db), tb).Q_values, *p.reference_Q), 1e-8);
}

TEST(Evaluate, TestC3DFlux) {
  auto p = make_problem('C', 3);
  auto d = default_domain(p);
  auto t = build_tables(d, p.kernel);
  auto ev = evaluate(Approach::CST2, p.sample(d), t);
  // absolute: the slow v3 tail is cut at exp(-12.5), which bounds the relative error
  for (int i = 0; i < 3; ++i) {
    auto ref = [&, i](const Vec& v) { return (*p.reference_Qc)(v)[i]; };
    EXPECT_LE(error_norms(ev.Qc[i], ref).abs_max, 1e-6) << i;
  }
}

TEST(Evaluate, TestD2DApproachesAgree) {
  auto p = make_problem('D', 2);
  auto d = default_domain(p, 0, 4);
  auto t = build_tables(d, p.kernel);
  auto f = p.sample(d);
  auto a = evaluate(Approach::CST2, f, t), b = evaluate(Approach::CST1, f, t);
  EXPECT_LE(rel_diff(b.Q_values, a.Q_values), 1e-6);
  EXPECT_EQ(code_of([&] { evaluate(Approach::CRT2, f, t); }), ErrorCode::ApproachKernelMismatch);
  EXPECT_EQ(code_of([&] { evaluate(Approach::CCT1, f, t); }), ErrorCode::ApproachKernelMismatch);
}

TEST(Evaluate, TestBFailsAsExpected) {
  // the non-periodic integral operator is not representable by the Fourier series
  auto p = make_problem('B', 2);
  auto d = default_domain(p);
  auto t = build_tables(d, p.kernel);
  auto ev = evaluate(Approach::CST2, p.sample(d), t);
  EXPECT_GE(rel_error(ev.Q_values, *p.reference_Q), 1e-2);
}

TEST(Evaluate, MismatchedDomain) {
  auto p = make_problem('C', 2);
  auto t = build_tables(default_domain(p, 32), p.kernel);
  auto f = p.sample(default_domain(p, 64));
  EXPECT_EQ(code_of([&] { evaluate(Approach::CST2, f, t); }), ErrorCode::TableMismatch);
}

TEST(Evaluate, WholeDomainTablesRejectRegularVariants) {
  auto p = make_problem('C', 2);
  auto d = default_domain(p, 32);
  BuildOptions o;
  o.scope = QuadratureScope::WholeDomain;
  auto t = build_tables(d, p.kernel, o);
  EXPECT_EQ(code_of([&] { evaluate(Approach::CRT1, p.sample(d), t); }), ErrorCode::TableMismatch);
  EXPECT_NO_THROW(evaluate(Approach::CST1, p.sample(d), t));
}

namespace {

// K[a][k][q] = int_{b_a1}^{b_a2} w^k F_m(w) dw for m = q - M/2 .. M/2 (q = 0..M), by quadrature
std::vector<std::array<std::vector<cplx>, 3>> moment_tables(const TruncatedDomain& d, int sign) {
  std::vector<std::array<std::vector<cplx>, 3>> K(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    double lo = d.intervals[a].lo, hi = d.intervals[a].hi, L = hi - lo;
    int M = d.modes[a];
    for (int k = 0; k < 3; ++k)
      for (int q = 0; q <= M; ++q) {
        int m = q - M / 2;
        int panels = std::max(1, std::abs(m));
        cplx s = 0.0;
        for (int j = 0; j < panels; ++j) {
          double a0 = lo + L * j / panels, b0 = lo + L * (j + 1) / panels;
          s += oracle::integrate_c(
              [&](double u) { return std::pow(u, k) * std::polar(1.0, sign * 2 * M_PI * m * (u - lo) / L) / std::sqrt(L); },
              a0, b0);
        }
        K[a][k].push_back(s);
      }
  }
  return K;
}

}  // namespace

TEST(Fields, ConstantKernelIFieldsMatchQuadrature) {
  double C = 1.0 / 16;
  auto d = build_domain({{-5, 6}, {-6, 5}}, {16, 16});
  auto p = make_problem('A', 2);
  auto f = p.sample(d);
  auto t = build_tables(d, KernelSpec::constant(2, C));
  auto fc = forward_transform(f);
  auto pairs = symmetric_pairs(2);
  double lo0 = d->intervals[0].lo, lo1 = d->intervals[1].lo;

  // T2: I_ij(v) = int_Omega C u_i u_j f(v - u) du = Re sum_m f_m F_m(v) C prod_a int u^k exp(-mu u) du
  auto Kneg = moment_tables(*d, -1);
  for (Approach a : {Approach::CST2, Approach::CCT2}) {
    auto ev = evaluate(a, f, t);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      Index k{0, 0, 0};
      k[pairs[pi][0]] += 1;
      k[pairs[pi][1]] += 1;
      std::vector<double> ref(d->size());
      for (std::size_t n = 0; n < d->size(); ++n) {
        Vec v = d->point(n);
        cplx s = 0.0;
        for (std::size_t mm = 0; mm < d->size(); ++mm) {
          Index q = d->unravel(mm), m = d->mode(mm);
          // int u^k exp(-mu u) = sqrt(L) exp(-mu b1) int u^k F_{-m}(u)
          cplx w0 = std::sqrt(11.0) * std::polar(1.0, -2 * M_PI * m[0] * lo0 / 11) * Kneg[0][k[0]][q[0]];
          cplx w1 = std::sqrt(11.0) * std::polar(1.0, -2 * M_PI * m[1] * lo1 / 11) * Kneg[1][k[1]][q[1]];
          s += fc[mm] * oracle::fourier_fn(m[0], v[0], lo0, 11) * oracle::fourier_fn(m[1], v[1], lo1, 11) * C * w0 * w1;
        }
        ref[n] = s.real();
      }
      EXPECT_LE(oracle::max_diff(ev.I_fields[pi].values(), ref), 1e-8 * oracle::max_abs(ref))
          << to_string(a) << " pair " << pi;
    }
  }

  // T1: I_ij(v) = int_Omega C (v - w)_i (v - w)_j f(w) dw with the real (Nyquist-split) interpolant of f
  auto K = moment_tables(*d, +1);
  auto axis_factor = [&](int a, int k, double v, int q) {
    // int (v - w)^k F_m(w) dw, averaged over both Nyquist copies
    auto one = [&](int qq) {
      const auto& T = K[a];
      if (k == 0) return T[0][qq];
      if (k == 1) return v * T[0][qq] - T[1][qq];
      return v * v * T[0][qq] - 2.0 * v * T[1][qq] + T[2][qq];
    };
    return q == 0 ? 0.5 * (one(0) + one(16)) : one(q);
  };
  for (Approach a : {Approach::CST1, Approach::CCT1, Approach::CRT1}) {
    auto ev = evaluate(a, f, t);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      Index k{0, 0, 0};
      k[pairs[pi][0]] += 1;
      k[pairs[pi][1]] += 1;
      std::vector<double> ref(d->size());
      for (std::size_t n = 0; n < d->size(); ++n) {
        Vec v = d->point(n);
        cplx s = 0.0;
        for (std::size_t mm = 0; mm < d->size(); ++mm) {
          Index q = d->unravel(mm);
          s += fc[mm] * C * axis_factor(0, k[0], v[0], q[0]) * axis_factor(1, k[1], v[1], q[1]);
        }
        EXPECT_LE(std::abs(s.imag()), 1e-12 * std::abs(s) + 1e-15);
        ref[n] = s.real();
      }
      EXPECT_LE(oracle::max_diff(ev.I_fields[pi].values(), ref), 1e-8 * oracle::max_abs(ref))
          << to_string(a) << " pair " << pi;
    }
  }
}

TEST(Fields, Linearity) {
  auto p = make_problem('D', 2);
  auto d = default_domain(p, 32, 4);
  auto t = build_tables(d, p.kernel);
  auto f = p.sample(d);
  GridField g(d);
  for (std::size_t n = 0; n < g.size(); ++n) {
    Vec v = d->point(n);
    g[n] = std::exp(-0.3 * (v[0] - 1) * (v[0] - 1) - 0.2 * v[1] * v[1]);
  }
  GridField h(d);
  for (std::size_t n = 0; n < h.size(); ++n) h[n] = 2.5 * f[n] - 0.75 * g[n];
  for (Approach a : {Approach::CST1, Approach::CST2}) {
    auto ef = evaluate(a, f, t), eg = evaluate(a, g, t), eh = evaluate(a, h, t);
    auto check = [&](const std::vector<GridField>& F, const std::vector<GridField>& G, const std::vector<GridField>& H) {
      for (std::size_t q = 0; q < F.size(); ++q) {
        std::vector<double> comb(d->size());
        for (std::size_t n = 0; n < comb.size(); ++n) comb[n] = 2.5 * F[q][n] - 0.75 * G[q][n];
        EXPECT_LE(oracle::max_diff(comb, H[q].values()), 1e-12 * oracle::max_abs(comb) + 1e-300) << to_string(a);
      }
    };
    check(ef.I_fields, eg.I_fields, eh.I_fields);
    check(ef.J_fields, eg.J_fields, eh.J_fields);
  }
}

TEST(Fields, DenseQuadratureOfFlux) {
  // rectangle rule on the grid for the flux integral, constant kernel, an
  // anisotropic (non-equilibrium) Gaussian
  double C = 1.0 / 16;
  auto g = [](const Vec& v) { return std::exp(-0.5 * v[0] * v[0] - 0.25 * v[1] * v[1]); };
  std::vector<double> errs;
  for (int M : {16, 32, 64}) {
    auto d = symmetric_domain(2, 12, M);
    auto t = build_tables(d, KernelSpec::constant(2, C));
    GridField f(d);
    std::vector<std::vector<double>> df(2, std::vector<double>(d->size()));
    for (std::size_t n = 0; n < f.size(); ++n) {
      Vec v = d->point(n);
      f[n] = g(v);
      df[0][n] = -v[0] * f[n];
      df[1][n] = -0.5 * v[1] * f[n];
    }
    auto ref = oracle::dense_Qc_2d(*d, KernelSpec::constant(2, C), f.values(), df);
    auto ev = evaluate(Approach::CST2, f, t);
    double e = 0.0, s = 0.0;
    for (int i = 0; i < 2; ++i) {
      e = std::max(e, oracle::max_diff(ev.Qc[i].values(), ref[i]));
      s = std::max(s, oracle::max_abs(ref[i]));
    }
    errs.push_back(e / s);
  }
  EXPECT_LE(errs[2], 1e-3) << errs[0] << " " << errs[1] << " " << errs[2];
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[2], errs[1]);
}

TEST(Evaluate, SpectralEntryMatchesValues) {
  auto p = make_problem('C', 2);
  auto d = default_domain(p, 64);
  auto t = build_tables(d, p.kernel);
  auto f = p.sample(d);
  auto a = evaluate(Approach::CST2, f, t), b = evaluate_spectral(Approach::CST2, forward_transform(f), t);
  EXPECT_LE(rel_diff(a.Q_values, b.Q_values), 1e-13);
  EXPECT_EQ(b.transform_count, 13);
}
