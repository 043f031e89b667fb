#include "tordust/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tordust/checkpoint.hpp"
#include "tordust/errors.hpp"
#include "tordust/initial_data.hpp"

using namespace tordust;

namespace {

double state_dist(const FieldState& a, const FieldState& b) {
  const auto fa = field_list(a);
  const auto fb = field_list(b);
  double worst = 0;
  for (int f = 0; f < kNumFields; ++f)
    for (std::size_t i = 0; i < fa[f]->size(); ++i)
      worst = std::max(worst, std::abs((*fa[f])[i] - (*fb[f])[i]));
  return worst;
}

bool state_equal(const FieldState& a, const FieldState& b) {
  if (a.t != b.t) return false;
  const auto fa = field_list(a);
  const auto fb = field_list(b);
  for (int f = 0; f < kNumFields; ++f)
    if (*fa[f] != *fb[f]) return false;
  return true;
}

FieldState evolve(const Grid3& grid, const Background& bg, FieldState s, double dt, int steps,
                  Integrator integ = Integrator::rk4) {
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.integrator = integ;
  for (int k = 0; k < steps; ++k) s = step(grid, bg, s, cfg);
  return s;
}

FieldState smooth_data(const Grid3& grid, const Background& bg, const BackgroundParams& params,
                       double amp, std::uint64_t seed) {
  PerturbationSpec spec;
  spec.amplitude = amp;
  spec.seed = seed;
  return construct_modified_data(grid, bg, perturbed_flrw(grid, params, spec));
}

}  // namespace

TEST_CASE("attractor state is a fixed point of the stepper") {
  const Grid3 grid(16);
  for (double rho_bar : {0.0, 3.0}) {
    CAPTURE(rho_bar);
    const Background bg(BackgroundParams{3.0, rho_bar});
    const FieldState home = make_flrw_state(grid, rho_bar);
    FieldState s = home;
    StepperConfig cfg;
    cfg.dt = 0.1;
    for (int k = 0; k < 20; ++k) {
      s = step(grid, bg, s, cfg);
      CHECK(state_dist(s, home) <= 1e-10);
    }
    CHECK(s.t == doctest::Approx(2.0).epsilon(1e-13));

    cfg.integrator = Integrator::rk2;
    FieldState r = step(grid, bg, home, cfg);
    CHECK(state_dist(r, home) <= 1e-10);
    CHECK(r.t == doctest::Approx(0.1));
  }
}

TEST_CASE("step refinement shows fourth-order convergence") {
  const Grid3 grid(16);
  const BackgroundParams params{3.0, 0.0};
  const Background bg(params);
  const FieldState s0 = smooth_data(grid, bg, params, 1e-3, 1);

  const double t_final = 0.32;
  const double dt0 = 0.08;
  std::array<FieldState, 4> sol;
  for (int k = 0; k < 4; ++k)
    sol[k] = evolve(grid, bg, s0, dt0 / (1 << k), 4 << k);
  const FieldState ref = evolve(grid, bg, s0, dt0 / 32, 128);
  CHECK(sol[0].t == doctest::Approx(t_final).epsilon(1e-12));

  // halving the step cuts the change by the fourth-order factor
  const double d01 = state_dist(sol[0], sol[1]);
  const double d12 = state_dist(sol[1], sol[2]);
  const double d23 = state_dist(sol[2], sol[3]);
  CHECK(d01 / d12 >= 12.0);
  CHECK(d01 / d12 <= 20.0);
  CHECK(d12 / d23 >= 12.0);
  CHECK(d12 / d23 <= 20.0);

  // log-log error slope against the fine reference
  std::vector<double> xs, ys;
  for (int k = 0; k < 4; ++k) {
    const double err = state_dist(sol[k], ref);
    REQUIRE(err > 1e-15);
    xs.push_back(std::log(dt0 / (1 << k)));
    ys.push_back(std::log(err));
  }
  const auto ab = line_fit(xs, ys);
  CHECK(ab[1] >= 3.7);
  CHECK(ab[1] <= 4.3);

  // the midpoint integrator trails at second order
  const FieldState r1 = evolve(grid, bg, s0, dt0, 4, Integrator::rk2);
  const FieldState r2 = evolve(grid, bg, s0, dt0 / 2, 8, Integrator::rk2);
  const double e1 = state_dist(r1, ref);
  const double e2 = state_dist(r2, ref);
  CHECK(e1 / e2 >= 3.2);
  CHECK(e1 / e2 <= 5.0);
  CHECK(e1 > state_dist(sol[0], ref));  // visibly less accurate than rk4
}

TEST_CASE("monitor classifies each breakdown scenario") {
  const Grid3 grid(16);
  const Background bg(BackgroundParams{3.0, 0.0});
  const MonitorConfig cfg;

  const FieldState home = make_flrw_state(grid, 0.0);
  CHECK(monitor(grid, bg, home, cfg).scenario == BreakdownScenario::none);

  FieldState lapse = home;
  for (double& v : lapse.g00) v = -0.05;
  const BreakdownReport r1 = monitor(grid, bg, lapse, cfg);
  CHECK(r1.scenario == BreakdownScenario::g00_to_zero);
  CHECK(r1.witness.value == -0.05);
  CHECK(r1.witness.what == "g00");

  FieldState squashed = home;
  for (int p : {0, 3, 5})
    for (double& v : squashed.h[p]) v = 5e-4;
  const BreakdownReport r2 = monitor(grid, bg, squashed, cfg);
  CHECK(r2.scenario == BreakdownScenario::spatial_metric_degenerate);
  CHECK(r2.witness.value == doctest::Approx(5e-4).epsilon(1e-12));

  FieldState hot = home;
  for (double& v : hot.rho) v = 2e6;
  const BreakdownReport r3 = monitor(grid, bg, hot, cfg);
  CHECK(r3.scenario == BreakdownScenario::cnorm_blowup);
  CHECK(r3.witness.what == "rho");
  CHECK(r3.witness.value == doctest::Approx(2e6).epsilon(1e-9));

  // precedence: the lapse check runs first
  FieldState both = hot;
  for (double& v : both.g00) v = -0.05;
  CHECK(monitor(grid, bg, both, cfg).scenario == BreakdownScenario::g00_to_zero);

  CHECK(breakdown_code(BreakdownScenario::none) == 0);
  CHECK(breakdown_code(BreakdownScenario::g00_to_zero) == 10);
  CHECK(breakdown_code(BreakdownScenario::spatial_metric_degenerate) == 11);
  CHECK(breakdown_code(BreakdownScenario::cnorm_blowup) == 12);
  CHECK(breakdown_name(BreakdownScenario::cnorm_blowup) == "CNormBlowup");
}

TEST_CASE("run returns early on breakdown while every value is still finite") {
  const Grid3 grid(16);
  const BackgroundParams params{3.0, 0.0};
  const Background bg(params);

  SUBCASE("lapse already beyond the floor") {
    FieldState s = make_flrw_state(grid, 0.0);
    for (int ix = 0; ix < grid.n(); ++ix)
      for (int iy = 0; iy < grid.n(); ++iy)
        for (int iz = 0; iz < grid.n(); ++iz)
          s.g00[grid.index(ix, iy, iz)] = -0.2 + 0.15 * std::cos(grid.coord(ix));
    RunConfig cfg;
    cfg.stepper.dt = 0.01;
    cfg.stepper.t_final = 1.0;
    const RunResult res = run(grid, bg, s, cfg);
    CHECK(res.report.scenario == BreakdownScenario::g00_to_zero);
    CHECK(res.report.time == 0.0);
    CHECK(res.series.back().breakdown == 10);
    CHECK(all_finite(res.final_state));
  }

  SUBCASE("growing spatial metric crosses the sup-norm ceiling") {
    // friction freezes h near 1 + kh0/(3 H); a ceiling inside that transient
    // must fire mid-run, strictly before anything non-finite
    FieldState s = make_flrw_state(grid, 0.0);
    for (int p : {0, 3, 5})
      for (double& v : s.kh[p]) v = 0.9;
    RunConfig cfg;
    cfg.stepper.dt = 0.02;
    cfg.stepper.t_final = 2.0;
    cfg.guard.blowup_ceiling = 1.2;
    const RunResult res = run(grid, bg, s, cfg);
    CHECK(res.report.scenario == BreakdownScenario::cnorm_blowup);
    CHECK(res.report.time > 0.1);
    CHECK(res.report.time < 1.0);
    CHECK(res.series.back().breakdown == 12);
    CHECK(all_finite(res.final_state));
  }

  SUBCASE("contracting spatial metric trips the eigenvalue floor") {
    // kh = -6 overwhelms the friction long enough to drive h toward zero
    FieldState s = make_flrw_state(grid, 0.0);
    for (int p : {0, 3, 5})
      for (double& v : s.kh[p]) v = -6.0;
    RunConfig cfg;
    cfg.stepper.dt = 0.02;
    cfg.stepper.t_final = 2.0;
    cfg.guard.eig_floor = 0.1;
    const RunResult res = run(grid, bg, s, cfg);
    CHECK(res.report.scenario == BreakdownScenario::spatial_metric_degenerate);
    CHECK(res.report.time > 0.05);
    CHECK(res.series.back().breakdown == 11);
    CHECK(all_finite(res.final_state));
  }
}

TEST_CASE("small perturbations stay within the global bound") {
  const Grid3 grid(16);
  const BackgroundParams params{3.0, 0.0};
  const Background bg(params);
  const FieldState s0 = smooth_data(grid, bg, params, 1e-3, 2026);

  RunConfig cfg;
  cfg.stepper.dt = 0.1;
  cfg.stepper.t_final = 5.0;
  cfg.sample_dt = 0.25;
  const RunResult res = run(grid, bg, s0, cfg);

  CHECK(res.report.scenario == BreakdownScenario::none);
  CHECK(res.final_state.t == doctest::Approx(5.0).epsilon(1e-12));
  REQUIRE(res.series.size() >= 20);
  const double s_start = res.series.front().s_total;
  REQUIRE(s_start > 0);
  for (const auto& rec : res.series) {
    CHECK(rec.s_total <= 5.0 * s_start);
    CHECK_FALSE(rec.non_coercive);
    CHECK(rec.breakdown == 0);
  }
}

TEST_CASE("checkpoint resume reproduces the uninterrupted run bitwise") {
  const Grid3 grid(16);
  const BackgroundParams params{3.0, 0.0};
  const Background bg(params);
  const FieldState s0 = smooth_data(grid, bg, params, 1e-3, 3);
  const std::uint64_t hash = fnv1a64("checkpoint-test-config");
  const std::string path = "ckpt_roundtrip.tmp";

  const FieldState straight = evolve(grid, bg, s0, 0.04, 10);
  const FieldState mid = evolve(grid, bg, s0, 0.04, 5);
  write_checkpoint(path, grid, mid, hash);

  const CheckpointInfo info = read_checkpoint_info(path);
  CHECK(info.version == 1);
  CHECK(info.config_hash == hash);
  CHECK(info.n == 16);
  CHECK(info.t == mid.t);

  const FieldState loaded = read_checkpoint(path, grid, hash);
  CHECK(state_equal(loaded, mid));
  const FieldState resumed = evolve(grid, bg, loaded, 0.04, 5);
  CHECK(state_equal(resumed, straight));

  CHECK_THROWS_AS((void)read_checkpoint(path, grid, hash + 1), Error);
  try {
    (void)read_checkpoint(path, grid, hash + 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::config_mismatch);
  }
  const Grid3 small(8);
  CHECK_THROWS_AS((void)read_checkpoint(path, small, hash), Error);

  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f);
    std::fputs("not a checkpoint", f);
    std::fclose(f);
  }
  try {
    (void)read_checkpoint_info(path);
    FAIL("garbage accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::format_error);
  }
  std::remove(path.c_str());
  try {
    (void)read_checkpoint_info(path);
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::io_error);
  }
}

TEST_CASE("configuration is validated before any stepping") {
  const Grid3 grid(16);
  const BackgroundParams params{3.0, 0.0};
  const Background bg(params);
  const FieldState s0 = make_flrw_state(grid, 0.0);

  auto expect = [&](RunConfig cfg, ErrCode code) {
    try {
      (void)run(grid, bg, s0, cfg);
      FAIL_CHECK("config accepted unexpectedly");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  RunConfig cfg;
  cfg.stepper.dt = 0.0;
  expect(cfg, ErrCode::invalid_config);
  cfg = RunConfig{};
  cfg.stepper.cfl_safety = 1.5;
  expect(cfg, ErrCode::invalid_config);
  cfg = RunConfig{};
  cfg.stepper.cfl_safety = 0.0;
  expect(cfg, ErrCode::invalid_config);
  cfg = RunConfig{};
  cfg.stepper.t_final = 0.0;
  expect(cfg, ErrCode::invalid_config);
  cfg = RunConfig{};
  cfg.sample_dt = 0.0;
  expect(cfg, ErrCode::invalid_config);
  cfg = RunConfig{};
  cfg.stepper.dt = 0.3;  // above safety * cfl_max_dt ~ 0.196 on this grid
  expect(cfg, ErrCode::cfl_violation);

  // the admissible-step bound itself
  const double cap = cfl_max_dt(grid, bg, s0);
  CHECK(cap == doctest::Approx(grid.dx()).epsilon(1e-12));
}

TEST_CASE("identical configurations give bitwise-identical diagnostics") {
  const Grid3 grid(16);
  const BackgroundParams params{3.0, 0.5};
  const Background bg(params);
  const FieldState s0 = smooth_data(grid, bg, params, 1e-3, 7);

  RunConfig cfg;
  cfg.stepper.dt = 0.1;
  cfg.stepper.t_final = 0.6;
  cfg.sample_dt = 0.2;

  const RunResult a = run(grid, bg, s0, cfg);
  const RunResult b = run(grid, bg, s0, cfg);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i)
    CHECK(diagnostics_csv_row(a.series[i]) == diagnostics_csv_row(b.series[i]));
  CHECK(state_equal(a.final_state, b.final_state));
  CHECK(a.report.scenario == BreakdownScenario::none);
}
