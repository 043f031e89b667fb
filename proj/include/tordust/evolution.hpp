#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "tordust/background.hpp"
#include "tordust/diagnostics.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"
#include "tordust/rhs.hpp"

namespace tordust {

enum class Integrator { rk4, rk2 };

struct StepperConfig {
  double dt = 0.01;
  double cfl_safety = 0.5;  // in (0, 1]
  double t_final = 1.0;
  Integrator integrator = Integrator::rk4;
};

// Runtime guards; each threshold proxies one of the ways a development can
// stop being a development.
struct MonitorConfig {
  double g00_floor = 0.1;       // trip when max g00 > -g00_floor
  double eig_floor = 1e-3;      // trip when min eig g_jk < eig_floor * e^{2 Omega}
  double blowup_ceiling = 1e6;  // sup bound on any field and its first two derivatives
};

enum class BreakdownScenario { none, g00_to_zero, spatial_metric_degenerate, cnorm_blowup };

// process exit code attached to diagnostics rows: 0, 10, 11, 12
int breakdown_code(BreakdownScenario sc);
std::string_view breakdown_name(BreakdownScenario sc);

struct BreakdownWitness {
  std::array<int, 3> cell{};  // grid location of the extremal value
  std::string what;           // offending quantity or propagated error text
  double value = 0;
};

struct BreakdownReport {
  BreakdownScenario scenario = BreakdownScenario::none;
  double time = 0;
  BreakdownWitness witness;
};

// largest stable step at this state: dx * min sqrt(-g^00 / lambda_max(g^ab)),
// before the safety factor
double cfl_max_dt(const Grid3& grid, const Background& bg, const FieldState& s);

// single explicit Runge-Kutta step of size cfg.dt; the background enters each
// stage at that stage's time
FieldState step(const Grid3& grid, const Background& bg, const FieldState& s,
                const StepperConfig& cfg, const RhsOptions& opt = {});

BreakdownReport monitor(const Grid3& grid, const Background& bg, const FieldState& s,
                        const MonitorConfig& cfg);

struct RunConfig {
  StepperConfig stepper;
  MonitorConfig guard;
  NormConfig norms;
  double sample_dt = 0.1;  // diagnostics cadence
};

struct RunResult {
  FieldState final_state;
  std::vector<DiagnosticsRecord> series;
  BreakdownReport report;
};

using SampleHook = std::function<void(const FieldState&, const DiagnosticsRecord&)>;

// Full loop: validate, then step/monitor/sample until t_final or breakdown.
// Deterministic for a fixed grid, background, and state.  Throws
// invalid_config on malformed parameters and cfl_violation when dt exceeds
// the admissible step at the initial state.
RunResult run(const Grid3& grid, const Background& bg, const FieldState& init,
              const RunConfig& cfg, const SampleHook& on_sample = {});

}  // namespace tordust
