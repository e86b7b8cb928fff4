#pragma once

#include <cmath>
#include <numeric>

#include "landau/diagnostics.hpp"
#include "landau/operator.hpp"

namespace landau {

struct IntegrationPlan {
  double t0 = 0.0;
  double T = 0.0;
  std::vector<double> stepsizes;  // empty -> `steps` uniform steps
  int steps = 0;
  int rk_order = 4;
  Approach approach = Approach::CST2;
  int diagnostics_every = 1;  // steps between diagnostics records
  int snapshot_every = 0;     // 0: initial and final snapshot only
  EvalOptions eval{default_residue_tolerance(), false};

  std::vector<double> taus() const {
    if (!stepsizes.empty()) {
      double s = std::accumulate(stepsizes.begin(), stepsizes.end(), 0.0);
      for (double tau : stepsizes)
        if (!(tau > 0)) throw Error(ErrorCode::InvalidArgument, "stepsizes must be positive");
      if (std::abs(s - (T - t0)) > 1e-12 * std::max(1.0, std::abs(T - t0)))
        throw Error(ErrorCode::InvalidArgument, "stepsizes do not sum to T - t0");
      return stepsizes;
    }
    if (steps <= 0 || !(T > t0)) throw Error(ErrorCode::InvalidArgument, "need T > t0 and a positive step count");
    return std::vector<double>(steps, (T - t0) / steps);
  }
};

struct State {
  SpectralField coeffs;
  GridField values;
};

struct Snapshot {
  double t = 0.0;
  GridField values;
  SpectralField coeffs;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  std::vector<cplx> zero_mode;  // f_0 after every step (index 0 = initial)
  std::vector<double> times;
  int steps_done = 0;
};

// explicit tableaus: Euler, Heun, Kutta's third order, classical RK4
struct Tableau {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
};

inline Tableau tableau(int order) {
  switch (order) {
    case 1: return {{{}}, {1.0}};
    case 2: return {{{}, {1.0}}, {0.5, 0.5}};
    case 3: return {{{}, {0.5}, {-1.0, 2.0}}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
    case 4: return {{{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}}, {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}};
  }
  throw Error(ErrorCode::InvalidArgument, "rk order must be 1..4");
}

namespace detail {

inline bool all_finite(const std::vector<cplx>& c) {
  for (const auto& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace detail

inline std::vector<cplx> rhs(const SpectralField& y, Approach a, const PrecomputedTables& t, const EvalOptions& opt) {
  EvalOptions o = opt;
  o.keep_fields = false;
  return evaluate_spectral(a, y, t, o).Q_coefficients.coeffs();
}

// advances the coefficients; the zero mode only ever receives exact zeros
inline SpectralField step_coefficients(const SpectralField& y, double tau, int order, Approach a,
                                       const PrecomputedTables& t, const EvalOptions& opt = {}, std::int64_t index = 0) {
  if (!(tau > 0) && !(tau < 0)) throw Error(ErrorCode::InvalidArgument, "stepsize must be nonzero");
  auto tab = tableau(order);
  std::size_t s = tab.b.size(), N = y.size();
  std::vector<std::vector<cplx>> k(s);
  for (std::size_t i = 0; i < s; ++i) {
    SpectralField stage = y;
    for (std::size_t j = 0; j < i; ++j) {
      double aij = tab.a[i][j];
      if (aij == 0.0) continue;
      for (std::size_t n = 0; n < N; ++n) stage[n] += (tau * aij) * k[j][n];
    }
    try {
      k[i] = rhs(stage, a, t, opt);
    } catch (const Error& e) {
      // a real state cannot produce a complex stage unless the step has gone unstable: the growing
      // modes swamp the round-off that keeps the coefficients conjugate-symmetric
      if (e.code() == ErrorCode::ImaginaryResidueExceeded)
        throw Error(ErrorCode::BlowUp, "unstable stage at step " + std::to_string(index) + " (" + e.what() +
                                           "); try a smaller stepsize", index);
      throw;
    }
    if (!detail::all_finite(k[i]))
      throw Error(ErrorCode::BlowUp, "non-finite stage at step " + std::to_string(index) + "; try a smaller stepsize", index);
  }
  SpectralField out = y;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t n = 0; n < N; ++n) out[n] += (tau * tab.b[i]) * k[i][n];
  if (!detail::all_finite(out.coeffs()))
    throw Error(ErrorCode::BlowUp, "non-finite state at step " + std::to_string(index), index);
  return out;
}

inline State step(const State& f, double tau, const IntegrationPlan& plan, const PrecomputedTables& t,
                  std::int64_t index = 0) {
  State next;
  next.coeffs = step_coefficients(f.coeffs, tau, plan.rk_order, plan.approach, t, plan.eval, index);
  try {
    next.values = Transformer(t.domain).inverse(next.coeffs, nullptr, plan.eval.residue_tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ImaginaryResidueExceeded) throw;
    throw Error(ErrorCode::BlowUp, "unstable state at step " + std::to_string(index) + " (" + e.what() + ")", index);
  }
  for (double x : next.values.values())
    if (!std::isfinite(x)) throw Error(ErrorCode::BlowUp, "non-finite values at step " + std::to_string(index), index);
  return next;
}

// fills `traj` as it goes so a caller still has the good part after a BlowUp
inline void integrate(const GridField& f0, const IntegrationPlan& plan, const PrecomputedTables& t, Trajectory& traj) {
  check_compatible(plan.approach, t, *f0.domain());
  auto taus = plan.taus();
  Transformer tr(t.domain);
  State s{tr.forward(f0), f0};
  std::size_t z = s.coeffs.zero_index();
  double time = plan.t0;
  traj = Trajectory{};
  traj.snapshots.push_back({time, s.values, s.coeffs});
  traj.diagnostics.push_back(diagnostics(time, s.values));
  traj.zero_mode.push_back(s.coeffs[z]);
  traj.times.push_back(time);
  int every = std::max(1, plan.diagnostics_every);
  for (std::size_t n = 0; n < taus.size(); ++n) {
    s = step(s, taus[n], plan, t, static_cast<std::int64_t>(n));
    time = (n + 1 == taus.size()) ? plan.T : time + taus[n];
    traj.steps_done = static_cast<int>(n + 1);
    traj.zero_mode.push_back(s.coeffs[z]);
    traj.times.push_back(time);
    bool last = n + 1 == taus.size();
    if (last || (n + 1) % every == 0) traj.diagnostics.push_back(diagnostics(time, s.values));
    if (!last && plan.snapshot_every > 0 && (n + 1) % plan.snapshot_every == 0)
      traj.snapshots.push_back({time, s.values, s.coeffs});
    if (last) traj.snapshots.push_back({time, s.values, s.coeffs});
  }
}

inline Trajectory integrate(const GridField& f0, const IntegrationPlan& plan, const PrecomputedTables& t) {
  Trajectory traj;
  integrate(f0, plan, t, traj);
  return traj;
}

}  // namespace landau
