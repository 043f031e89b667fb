#include "tordust/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tordust/errors.hpp"
#include "tordust/lorentz.hpp"
#include "tordust/util.hpp"

namespace tordust {

namespace {

// out += c * rates, over the 24 evolved fields; time is handled by the caller
void axpy(FieldState& out, double c, const FieldState& rates) {
  auto dst = field_list(out);
  auto src = field_list(rates);
  for (int f = 0; f < kNumFields; ++f) {
    Field& d = *dst[f];
    const Field& s = *src[f];
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += c * s[i];
  }
}

FieldState stage_state(const FieldState& base, double t, double c, const FieldState& rates) {
  FieldState s = base;
  s.t = t;
  axpy(s, c, rates);
  return s;
}

// sup of |f| and its first two spectral derivatives
double cb_proxy(const Grid3& g, const Field& f, std::array<int, 3>& cell) {
  double best = 0;
  std::size_t arg = 0;
  auto scan = [&](const Field& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]);
      if (a > best) {
        best = a;
        arg = i;
      }
    }
  };
  scan(f);
  const Spectrum base = g.forward(f);
  Spectrum tmp;
  for (int a = 0; a < 3; ++a) {
    g.apply_derivative(base, a == 0, a == 1, a == 2, tmp);
    scan(g.inverse(tmp));
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      g.apply_derivative(base, (a == 0) + (b == 0), (a == 1) + (b == 1), (a == 2) + (b == 2),
                         tmp);
      scan(g.inverse(tmp));
    }
  const int n = g.n();
  cell = {static_cast<int>(arg) / (n * n), (static_cast<int>(arg) / n) % n,
          static_cast<int>(arg) % n};
  return best;
}

BreakdownScenario scenario_for(ErrCode code) {
  switch (code) {
    case ErrCode::degenerate_g00:
      return BreakdownScenario::g00_to_zero;
    case ErrCode::not_lorentzian:
      return BreakdownScenario::spatial_metric_degenerate;
    default:
      return BreakdownScenario::none;
  }
}

void validate(const Grid3& grid, const Background& bg, const FieldState& init,
              const RunConfig& cfg) {
  const StepperConfig& st = cfg.stepper;
  if (!(st.dt > 0)) fail(ErrCode::invalid_config, "dt must be positive");
  if (!(st.cfl_safety > 0) || st.cfl_safety > 1.0)
    fail(ErrCode::invalid_config, "cfl_safety must lie in (0, 1]");
  if (!(st.t_final > init.t)) fail(ErrCode::invalid_config, "t_final must exceed the start time");
  if (!(cfg.sample_dt > 0)) fail(ErrCode::invalid_config, "sample_dt must be positive");
  if (!(cfg.guard.g00_floor > 0) || !(cfg.guard.eig_floor > 0) ||
      !(cfg.guard.blowup_ceiling > 0))
    fail(ErrCode::invalid_config, "monitor thresholds must be positive");
  const double cap = st.cfl_safety * cfl_max_dt(grid, bg, init);
  if (st.dt > cap)
    fail(ErrCode::cfl_violation, "dt exceeds the admissible step at the initial state");
}

}  // namespace

int breakdown_code(BreakdownScenario sc) {
  switch (sc) {
    case BreakdownScenario::none:
      return 0;
    case BreakdownScenario::g00_to_zero:
      return 10;
    case BreakdownScenario::spatial_metric_degenerate:
      return 11;
    case BreakdownScenario::cnorm_blowup:
      return 12;
  }
  return 0;
}

std::string_view breakdown_name(BreakdownScenario sc) {
  switch (sc) {
    case BreakdownScenario::none:
      return "None";
    case BreakdownScenario::g00_to_zero:
      return "G00ToZero";
    case BreakdownScenario::spatial_metric_degenerate:
      return "SpatialMetricDegenerate";
    case BreakdownScenario::cnorm_blowup:
      return "CNormBlowup";
  }
  return "None";
}

double cfl_max_dt(const Grid3& grid, const Background& bg, const FieldState& s) {
  const double e2 = bg.at(s.t).exp_om(2.0);
  double worst = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    MetricPoint m;
    m.tt = s.g00[i];
    for (int j = 0; j < 3; ++j) m.tx[j] = s.g0[j][i];
    for (int p = 0; p < 6; ++p) m.sp[p] = e2 * s.h[p][i];
    const InverseMetricPoint gi = invert_metric(m);
    Sym3 neg;
    for (int p = 0; p < 6; ++p) neg[p] = -gi.sp[p];
    const double lam_max = -sym3_min_eigenvalue(neg);
    if (lam_max <= 0) fail(ErrCode::not_lorentzian, "inverse spatial metric not positive");
    worst = std::min(worst, std::sqrt(-gi.tt / lam_max));
  }
  return grid.dx() * worst;
}

FieldState step(const Grid3& grid, const Background& bg, const FieldState& s,
                const StepperConfig& cfg, const RhsOptions& opt) {
  const double dt = cfg.dt;
  const double t = s.t;
  FieldState k1, k2;
  assemble_rates(grid, bg, s, k1, opt);

  if (cfg.integrator == Integrator::rk2) {
    // midpoint rule
    const FieldState mid = stage_state(s, t + 0.5 * dt, 0.5 * dt, k1);
    assemble_rates(grid, bg, mid, k2, opt);
    FieldState out = stage_state(s, t + dt, dt, k2);
    return out;
  }

  FieldState k3, k4;
  const FieldState s2 = stage_state(s, t + 0.5 * dt, 0.5 * dt, k1);
  assemble_rates(grid, bg, s2, k2, opt);
  const FieldState s3 = stage_state(s, t + 0.5 * dt, 0.5 * dt, k2);
  assemble_rates(grid, bg, s3, k3, opt);
  const FieldState s4 = stage_state(s, t + dt, dt, k3);
  assemble_rates(grid, bg, s4, k4, opt);

  FieldState out = s;
  out.t = t + dt;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  return out;
}

BreakdownReport monitor(const Grid3& grid, const Background& bg, const FieldState& s,
                        const MonitorConfig& cfg) {
  BreakdownReport rep;
  rep.time = s.t;
  const int n = grid.n();
  auto cell_of = [n](std::size_t i) {
    return std::array<int, 3>{static_cast<int>(i) / (n * n), (static_cast<int>(i) / n) % n,
                              static_cast<int>(i) % n};
  };

  double worst_g00 = std::numeric_limits<double>::lowest();
  std::size_t arg_g00 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (s.g00[i] > worst_g00) {
      worst_g00 = s.g00[i];
      arg_g00 = i;
    }
  if (worst_g00 > -cfg.g00_floor) {
    rep.scenario = BreakdownScenario::g00_to_zero;
    rep.witness = {cell_of(arg_g00), "g00", worst_g00};
    return rep;
  }

  const double e2 = bg.at(s.t).exp_om(2.0);
  double worst_eig = std::numeric_limits<double>::max();
  std::size_t arg_eig = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Sym3 h;
    for (int p = 0; p < 6; ++p) h[p] = s.h[p][i];
    const double eig = sym3_min_eigenvalue(h);
    if (eig < worst_eig) {
      worst_eig = eig;
      arg_eig = i;
    }
  }
  if (worst_eig < cfg.eig_floor) {
    rep.scenario = BreakdownScenario::spatial_metric_degenerate;
    rep.witness = {cell_of(arg_eig), "min eig g_jk", e2 * worst_eig};
    return rep;
  }

  const auto names = field_names();
  const auto fields = field_list(s);
  for (int f = 0; f < kNumFields; ++f) {
    std::array<int, 3> cell{};
    const double proxy = cb_proxy(grid, *fields[f], cell);
    if (proxy > cfg.blowup_ceiling) {
      rep.scenario = BreakdownScenario::cnorm_blowup;
      rep.witness = {cell, std::string(names[f]), proxy};
      return rep;
    }
  }
  return rep;
}

RunResult run(const Grid3& grid, const Background& bg, const FieldState& init,
              const RunConfig& cfg, const SampleHook& on_sample) {
  validate(grid, bg, init, cfg);

  RunResult res;
  res.final_state = init;
  const double t_final = cfg.stepper.t_final;
  const double tiny = 1e-12 * std::max(1.0, std::abs(t_final));

  auto sample = [&](const FieldState& s, int code) {
    DiagnosticsRecord rec;
    try {
      rec = compute_record(grid, bg, s, cfg.norms);
    } catch (const Error&) {
      rec.t = s.t;  // state too degenerate to measure; keep the time stamp
    }
    rec.breakdown = code;
    res.series.push_back(rec);
    if (on_sample) on_sample(s, rec);
  };

  auto finish_broken = [&](BreakdownReport rep) {
    res.report = std::move(rep);
    sample(res.final_state, breakdown_code(res.report.scenario));
    return res;
  };

  sample(res.final_state, 0);
  double next_sample = init.t + cfg.sample_dt;

  while (res.final_state.t < t_final - tiny) {
    BreakdownReport rep = monitor(grid, bg, res.final_state, cfg.guard);
    if (rep.scenario != BreakdownScenario::none) return finish_broken(std::move(rep));

    StepperConfig st = cfg.stepper;
    st.dt = std::min(st.dt, t_final - res.final_state.t);

    FieldState next;
    try {
      next = step(grid, bg, res.final_state, st);
    } catch (const Error& e) {
      const BreakdownScenario sc = scenario_for(e.code());
      if (sc == BreakdownScenario::none) throw;
      BreakdownReport r;
      r.scenario = sc;
      r.time = res.final_state.t;
      r.witness.what = e.what();
      r.witness.value = std::numeric_limits<double>::quiet_NaN();
      return finish_broken(std::move(r));
    }
    if (!all_finite(next))
      fail(ErrCode::non_finite, "non-finite value escaped the breakdown monitor");
    res.final_state = std::move(next);

    if (res.final_state.t >= next_sample - tiny && res.final_state.t < t_final - tiny) {
      sample(res.final_state, 0);
      while (next_sample <= res.final_state.t + tiny) next_sample += cfg.sample_dt;
    }
  }

  res.report.time = res.final_state.t;
  sample(res.final_state, 0);
  return res;
}

}  // namespace tordust
