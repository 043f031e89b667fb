#pragma once

#include <cstdint>
#include <string>

#include "tordust/background.hpp"
#include "tordust/diagnostics.hpp"
#include "tordust/evolution.hpp"
#include "tordust/initial_data.hpp"

namespace tordust {

struct OutputConfig {
  std::string directory = "out";
  double sample_dt = 0.1;
  double checkpoint_dt = 0;  // 0 disables periodic checkpoints
};

// One batch run, fully specified.  Every field has a default, so a partial
// config file is legal and the serialized form is reproducible on its own.
struct SimConfig {
  BackgroundParams cosmology;
  int n = 16;
  bool use_cfl = false;  // when set, dt is derived from cfl_safety at t = 0
  StepperConfig stepper;
  NormConfig norms;
  PerturbationSpec perturbation;
  MonitorConfig guard;
  OutputConfig output;
};

SimConfig default_config();

// strict parse: unknown keys and precondition violations are collected and
// reported together in one invalid_config error
SimConfig parse_config(const std::string& json_text);
SimConfig load_config(const std::string& path);

// canonical form: every default materialized, keys in a fixed order
std::string serialize_config(const SimConfig& cfg);

// identity of the physics; the output section is excluded so relocating a run
// does not change it
std::uint64_t config_hash(const SimConfig& cfg);

std::string_view integrator_name(Integrator i);
bool parse_integrator(std::string_view name, Integrator& out);

bool operator==(const SimConfig& a, const SimConfig& b);

}  // namespace tordust
