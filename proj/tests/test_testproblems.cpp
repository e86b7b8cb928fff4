#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace landau;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(MakeProblem, Examples) {
  auto a2 = make_problem('A', 2);
  EXPECT_TRUE(a2.kernel.is_constant());
  EXPECT_EQ(a2.kernel, KernelSpec::constant(2, 1.0 / 16));
  EXPECT_NEAR(a2.density({1, 0, 0}), std::exp(-1.0) / M_PI, 1e-16);
  EXPECT_EQ(a2.half_width, 10.0);

  auto a3 = make_problem('a', 3);
  EXPECT_NEAR(a3.default_t0, 6 * std::log(1.25), 1e-15);
  EXPECT_NEAR(bkw_K(a3.default_t0, 3), 0.6, 1e-15);

  auto d3 = make_problem('D', 3);
  EXPECT_TRUE(d3.kernel.is_singular());
  EXPECT_NEAR(d3.density({0.3, 0, 0}), 0.01, 1e-17);
  EXPECT_NEAR(d3.density({0, 0, 0}), std::exp(-10.0 / 0.09 * 0.09) / 100, 1e-17);

  EXPECT_EQ(make_problem('B', 2).half_width, M_PI);
  EXPECT_EQ(make_problem('C', 3).kernel, KernelSpec::gaussian({1, 2, 3}));
}

TEST(MakeProblem, Unsupported) {
  EXPECT_EQ(code_of([] { make_problem('E', 2); }), ErrorCode::UnsupportedProblem);
  EXPECT_EQ(code_of([] { make_problem('A', 4); }), ErrorCode::UnsupportedProblem);
  EXPECT_EQ(code_of([] { make_problem('C', 1); }), ErrorCode::UnsupportedProblem);
}

TEST(MakeProblem, ReferenceAvailability) {
  for (int d : {2, 3}) {
    EXPECT_TRUE(make_problem('A', d).exact_solution.has_value());
    for (char id : {'B', 'C'}) {
      auto p = make_problem(id, d);
      EXPECT_FALSE(p.exact_solution.has_value());
      EXPECT_NO_THROW(reference_operator(p, {0.1, 0.2, 0.3}));
      EXPECT_EQ(code_of([&] { p.sample_exact(default_domain(p, 8), 0.0); }), ErrorCode::NoReferenceAvailable);
    }
    auto pd = make_problem('D', d);
    EXPECT_EQ(code_of([&] { reference_operator(pd, {0, 0, 0}); }), ErrorCode::NoReferenceAvailable);
    EXPECT_FALSE(pd.exact_solution.has_value());
  }
}

TEST(ReferenceOperator, ValuesAtOrigin) {
  double pi32 = std::pow(M_PI, 1.5);
  EXPECT_NEAR(reference_operator(make_problem('A', 2), {0, 0, 0}).second, 1 / (4 * M_PI), 1e-16);
  EXPECT_NEAR(reference_operator(make_problem('A', 3), {0, 0, 0}).second, 3.75 / (6 * pi32), 1e-16);
  EXPECT_NEAR(reference_operator(make_problem('B', 2), {0, 0, 0}).second, -M_PI * M_PI / 2, 1e-14);
  for (char id : {'A', 'B', 'C'})
    for (int d : {2, 3}) {
      Vec qc = reference_operator(make_problem(id, d), {0, 0, 0}).first;
      for (int a = 0; a < 3; ++a) EXPECT_EQ(qc[a], 0.0) << id << d;
    }
}

TEST(Bkw, Limits) {
  EXPECT_NEAR(bkw({0, 0, 0}, 400.0, 2), 1 / (2 * M_PI), 1e-15);
  EXPECT_NEAR(bkw({0, 0, 0}, 400.0, 3), 1 / std::pow(2 * M_PI, 1.5), 1e-15);
  // at t = 0 the 2D BKW profile is the Test A initial density
  auto p = make_problem('A', 2);
  for (Vec v : {Vec{0, 0, 0}, Vec{0.5, -1, 0}, Vec{2, 1, 0}}) EXPECT_NEAR(bkw(v, 0.0, 2), p.density(v), 1e-16);
  // in 3D the operator-test density is a different (signed) profile; BKW at t0 vanishes at the
  // origin and is non-negative
  double t0 = make_problem('A', 3).default_t0;
  EXPECT_EQ(bkw({0, 0, 0}, t0, 3), 0.0);
  for (Vec v : {Vec{0.1, 0, 0}, Vec{0.5, -1, 0.2}, Vec{3, 2, 1}}) EXPECT_GT(bkw(v, t0, 3), 0.0);
}

// guards the long transcribed closed forms: Q must be the divergence of Qc
TEST(ReferenceOperator, DivergenceOfFlux) {
  const double h = 1e-4;
  std::mt19937_64 rng(5);
  for (char id : {'A', 'B', 'C'})
    for (int d : {2, 3}) {
      auto p = make_problem(id, d);
      double w = id == 'B' ? M_PI : 3.0;
      std::uniform_real_distribution<double> u(-w, w);
      std::vector<Vec> pts(40, Vec{0, 0, 0});
      double scale = 0.0;
      for (auto& v : pts) {
        for (int a = 0; a < d; ++a) v[a] = u(rng);
        scale = std::max(scale, std::abs((*p.reference_Q)(v)));
      }
      for (const auto& v : pts) {
        double div = 0.0;
        for (int a = 0; a < d; ++a) {
          Vec vp = v, vm = v;
          vp[a] += h;
          vm[a] -= h;
          div += ((*p.reference_Qc)(vp)[a] - (*p.reference_Qc)(vm)[a]) / (2 * h);
        }
        EXPECT_NEAR(div, (*p.reference_Q)(v), 1e-6 * scale) << id << d;
      }
    }
}

// the exact BKW flow, the discrete operator and the closed form agree
TEST(Consistency, BkwTimeDerivativeMatchesOperator) {
  auto p = make_problem('A', 2);
  auto d = default_domain(p, 64);
  auto t = build_tables(d, p.kernel);
  auto f = p.sample_exact(d, 0.0);
  auto Q = evaluate(Approach::CRT1, f, t).Q_values;
  double qmax = oracle::max_abs(Q.values());
  std::vector<double> errs;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    auto f1 = p.sample_exact(d, delta);
    double e = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) e = std::max(e, std::abs((f1[n] - f[n]) / delta - Q[n]));
    errs.push_back(e / qmax);
  }
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[2], errs[1]);
  EXPECT_LE(errs[2], 1e-4);
  // and the operator matches the closed form
  auto e = error_norms(Q, *p.reference_Q);
  EXPECT_LE(e.abs_max, 1e-6);
}
