#include "tordust/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "tordust/errors.hpp"

namespace tordust {
namespace {

using nlohmann::json;

json pair_json(const EnergyPair& p) { return json::array({p.gamma, p.delta}); }

json to_json(const SimConfig& c) {
  json j;
  j["cosmology"] = {{"lambda", c.cosmology.lambda}, {"rho_bar", c.cosmology.rho_bar}};
  j["numerics"] = {{"n", c.n},
                   {"dt", c.stepper.dt},
                   {"use_cfl", c.use_cfl},
                   {"cfl_safety", c.stepper.cfl_safety},
                   {"t_final", c.stepper.t_final},
                   {"integrator", std::string(integrator_name(c.stepper.integrator))}};
  j["norms"] = {{"q", c.norms.q},
                {"sobolev_order", c.norms.sobolev_order},
                {"energy",
                 {{"g00", pair_json(c.norms.g00)},
                  {"g0s", pair_json(c.norms.g0s)},
                  {"h", pair_json(c.norms.h)},
                  {"du_g00", pair_json(c.norms.du_g00)},
                  {"du_g0s", pair_json(c.norms.du_g0s)},
                  {"du_h", pair_json(c.norms.du_h)}}}};
  json modes = json::array();
  for (const auto& m : c.perturbation.modes)
    modes.push_back({{"wavevector", m.wavevector},
                     {"target", std::string(data_target_name(m.target))},
                     {"phase", m.phase}});
  j["perturbation"] = {
      {"amplitude", c.perturbation.amplitude}, {"seed", c.perturbation.seed}, {"modes", modes}};
  j["monitor"] = {{"g00_floor", c.guard.g00_floor},
                  {"eig_floor", c.guard.eig_floor},
                  {"blowup_ceiling", c.guard.blowup_ceiling}};
  j["output"] = {{"directory", c.output.directory},
                 {"sample_dt", c.output.sample_dt},
                 {"checkpoint_dt", c.output.checkpoint_dt}};
  return j;
}

// every legal key; anything else in the file is a typo worth rejecting
const json& schema_keys() {
  static const json k = to_json(SimConfig{});
  return k;
}

void collect_unknown_keys(const json& doc, const json& known, const std::string& prefix,
                          std::vector<std::string>& issues) {
  if (!doc.is_object()) return;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.is_object() || !known.contains(it.key())) {
      issues.push_back("unknown key " + prefix + it.key());
      continue;
    }
    if (it.value().is_object()) collect_unknown_keys(it.value(), known[it.key()], prefix + it.key() + ".", issues);
  }
}

template <typename T>
void fetch(const json& j, const char* section, const char* key, T& out,
           std::vector<std::string>& issues) {
  if (!j.contains(section) || !j[section].contains(key)) return;
  try {
    out = j[section][key].get<T>();
  } catch (const json::exception&) {
    issues.push_back(std::string(section) + "." + key + ": wrong type");
  }
}

void fetch_pair(const json& j, const char* key, EnergyPair& out,
                std::vector<std::string>& issues) {
  if (!j.contains("norms") || !j["norms"].contains("energy") ||
      !j["norms"]["energy"].contains(key))
    return;
  const json& v = j["norms"]["energy"][key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    issues.push_back(std::string("norms.energy.") + key + ": expected [gamma, delta]");
    return;
  }
  out.gamma = v[0].get<double>();
  out.delta = v[1].get<double>();
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate(const SimConfig& c, std::vector<std::string>& issues) {
  if (!(c.cosmology.lambda > 0)) issues.push_back("cosmology.lambda: must be > 0");
  if (!(c.cosmology.rho_bar >= 0)) issues.push_back("cosmology.rho_bar: must be >= 0");
  if (!power_of_two(c.n) || c.n < 8) issues.push_back("numerics.n: must be a power of two >= 8");
  if (!(c.stepper.dt > 0)) issues.push_back("numerics.dt: must be > 0");
  if (!(c.stepper.cfl_safety > 0 && c.stepper.cfl_safety <= 1))
    issues.push_back("numerics.cfl_safety: must be in (0, 1]");
  if (!(c.stepper.t_final > 0)) issues.push_back("numerics.t_final: must be > 0");
  if (!(c.norms.q > 0 && c.norms.q <= 0.125)) issues.push_back("norms.q: must be in (0, 1/8]");
  if (c.norms.sobolev_order < 1) issues.push_back("norms.sobolev_order: must be >= 1");
  if (!(c.perturbation.amplitude >= 0)) issues.push_back("perturbation.amplitude: must be >= 0");
  const int cut = c.n / 3;
  for (std::size_t i = 0; i < c.perturbation.modes.size(); ++i)
    for (int a = 0; a < 3; ++a)
      if (std::abs(c.perturbation.modes[i].wavevector[a]) > cut) {
        issues.push_back("perturbation.modes[" + std::to_string(i) +
                         "]: wavevector outside the dealias band for n = " + std::to_string(c.n));
        break;
      }
  if (!(c.guard.g00_floor > 0)) issues.push_back("monitor.g00_floor: must be > 0");
  if (!(c.guard.eig_floor > 0)) issues.push_back("monitor.eig_floor: must be > 0");
  if (!(c.guard.blowup_ceiling > 0)) issues.push_back("monitor.blowup_ceiling: must be > 0");
  if (c.output.directory.empty()) issues.push_back("output.directory: must not be empty");
  if (!(c.output.sample_dt > 0)) issues.push_back("output.sample_dt: must be > 0");
  if (!(c.output.checkpoint_dt >= 0)) issues.push_back("output.checkpoint_dt: must be >= 0");
}

[[noreturn]] void raise(const std::vector<std::string>& issues) {
  std::string msg = "config:";
  for (const auto& s : issues) msg += "\n  " + s;
  fail(ErrCode::invalid_config, msg);
}

}  // namespace

SimConfig default_config() { return SimConfig{}; }

std::string_view integrator_name(Integrator i) { return i == Integrator::rk2 ? "rk2" : "rk4"; }

bool parse_integrator(std::string_view name, Integrator& out) {
  if (name == "rk4") {
    out = Integrator::rk4;
    return true;
  }
  if (name == "rk2") {
    out = Integrator::rk2;
    return true;
  }
  return false;
}

SimConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrCode::invalid_config, std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrCode::invalid_config, "config: top level must be an object");

  std::vector<std::string> issues;
  collect_unknown_keys(j, schema_keys(), "", issues);

  SimConfig c;
  fetch(j, "cosmology", "lambda", c.cosmology.lambda, issues);
  fetch(j, "cosmology", "rho_bar", c.cosmology.rho_bar, issues);
  fetch(j, "numerics", "n", c.n, issues);
  fetch(j, "numerics", "dt", c.stepper.dt, issues);
  fetch(j, "numerics", "use_cfl", c.use_cfl, issues);
  fetch(j, "numerics", "cfl_safety", c.stepper.cfl_safety, issues);
  fetch(j, "numerics", "t_final", c.stepper.t_final, issues);
  if (j.contains("numerics") && j["numerics"].contains("integrator")) {
    std::string name;
    fetch(j, "numerics", "integrator", name, issues);
    if (!parse_integrator(name, c.stepper.integrator))
      issues.push_back("numerics.integrator: expected rk4 or rk2, got \"" + name + "\"");
  }
  fetch(j, "norms", "q", c.norms.q, issues);
  fetch(j, "norms", "sobolev_order", c.norms.sobolev_order, issues);
  fetch_pair(j, "g00", c.norms.g00, issues);
  fetch_pair(j, "g0s", c.norms.g0s, issues);
  fetch_pair(j, "h", c.norms.h, issues);
  fetch_pair(j, "du_g00", c.norms.du_g00, issues);
  fetch_pair(j, "du_g0s", c.norms.du_g0s, issues);
  fetch_pair(j, "du_h", c.norms.du_h, issues);
  fetch(j, "perturbation", "amplitude", c.perturbation.amplitude, issues);
  fetch(j, "perturbation", "seed", c.perturbation.seed, issues);
  if (j.contains("perturbation") && j["perturbation"].contains("modes")) {
    const json& modes = j["perturbation"]["modes"];
    if (!modes.is_array()) {
      issues.push_back("perturbation.modes: expected an array");
    } else {
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const json& m = modes[i];
        PerturbationMode pm;
        bool ok = m.is_object();
        if (ok && m.contains("wavevector")) {
          try {
            pm.wavevector = m["wavevector"].get<std::array<int, 3>>();
          } catch (const json::exception&) {
            ok = false;
          }
        }
        std::string target;
        if (ok && m.contains("target")) {
          try {
            target = m["target"].get<std::string>();
          } catch (const json::exception&) {
            ok = false;
          }
          if (ok && !parse_data_target(target, pm.target)) {
            issues.push_back("perturbation.modes[" + std::to_string(i) +
                             "].target: unknown component \"" + target + "\"");
            continue;
          }
        }
        if (ok && m.contains("phase")) {
          try {
            pm.phase = m["phase"].get<double>();
          } catch (const json::exception&) {
            ok = false;
          }
        }
        if (!ok) {
          issues.push_back("perturbation.modes[" + std::to_string(i) + "]: malformed entry");
          continue;
        }
        for (auto it = m.begin(); it != m.end(); ++it)
          if (it.key() != "wavevector" && it.key() != "target" && it.key() != "phase")
            issues.push_back("unknown key perturbation.modes[" + std::to_string(i) + "]." +
                             it.key());
        c.perturbation.modes.push_back(pm);
      }
    }
  }
  fetch(j, "monitor", "g00_floor", c.guard.g00_floor, issues);
  fetch(j, "monitor", "eig_floor", c.guard.eig_floor, issues);
  fetch(j, "monitor", "blowup_ceiling", c.guard.blowup_ceiling, issues);
  fetch(j, "output", "directory", c.output.directory, issues);
  fetch(j, "output", "sample_dt", c.output.sample_dt, issues);
  fetch(j, "output", "checkpoint_dt", c.output.checkpoint_dt, issues);

  validate(c, issues);
  if (!issues.empty()) raise(issues);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrCode::io_error, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t config_hash(const SimConfig& cfg) {
  json j = to_json(cfg);
  j.erase("output");
  const std::string bytes = j.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

bool operator==(const SimConfig& a, const SimConfig& b) {
  return to_json(a) == to_json(b);
}

}  // namespace tordust
