#include "tordust/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "tordust/checkpoint.hpp"
#include "tordust/diagnostics.hpp"
#include "tordust/errors.hpp"
#include "tordust/evolution.hpp"
#include "tordust/initial_data.hpp"

namespace fs = std::filesystem;

namespace tordust {
namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FieldState build_initial(const Grid3& grid, const Background& bg, const SimConfig& cfg) {
  return construct_modified_data(grid, bg, perturbed_flrw(grid, cfg.cosmology, cfg.perturbation));
}

double pick_dt(const Grid3& grid, const Background& bg, const SimConfig& cfg,
               const FieldState& init) {
  if (!cfg.use_cfl) return cfg.stepper.dt;
  return cfg.stepper.cfl_safety * cfl_max_dt(grid, bg, init);
}

std::string ckpt_path(const std::string& dir, int idx) {
  char name[32];
  std::snprintf(name, sizeof name, "ckpt_%04d.bin", idx);
  return (fs::path(dir) / name).string();
}

// header plus every row strictly before t_resume; the resumed run re-emits
// the row at t_resume itself
std::string csv_rows_before(const std::string& path, double t_resume) {
  std::ifstream in(path);
  if (!in) return diagnostics_csv_header() + "\n";
  std::string out, line;
  if (std::getline(in, line)) out = line + "\n";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const double t_row = std::strtod(line.c_str(), nullptr);
    if (t_row < t_resume) out += line + "\n";
  }
  return out;
}

RunArtifacts execute(const SimConfig& cfg, const Grid3& grid, const Background& bg,
                     FieldState init, double dt, const double* resume_t) {
  const auto wall0 = std::chrono::steady_clock::now();

  RunArtifacts art;
  art.directory = resolve_output_dir(cfg.output);
  fs::create_directories(art.directory);
  art.csv_path = (fs::path(art.directory) / "diagnostics.csv").string();
  art.manifest_path = (fs::path(art.directory) / "manifest.json").string();
  art.final_state_path = (fs::path(art.directory) / "final_state.bin").string();
  const std::uint64_t hash = config_hash(cfg);

  std::string preserved;
  if (resume_t) preserved = csv_rows_before(art.csv_path, *resume_t);
  std::ofstream csv(art.csv_path, std::ios::trunc);
  if (!csv) fail(ErrCode::io_error, "cannot open " + art.csv_path);
  if (resume_t) csv << preserved;
  else csv << diagnostics_csv_header() << '\n';

  const double cdt = cfg.output.checkpoint_dt;
  const double tiny = 1e-12 * std::max(1.0, std::abs(cfg.stepper.t_final));
  double next_ckpt = cdt > 0 ? cdt : std::numeric_limits<double>::infinity();
  if (resume_t && cdt > 0) next_ckpt = (std::floor((*resume_t + tiny) / cdt) + 1.0) * cdt;

  const auto hook = [&](const FieldState& s, const DiagnosticsRecord& rec) {
    csv << diagnostics_csv_row(rec) << '\n';
    csv.flush();
    ++art.samples;
    if (s.t >= next_ckpt - tiny && s.t < cfg.stepper.t_final - tiny) {
      write_checkpoint(ckpt_path(art.directory, static_cast<int>(std::llround(s.t / cdt))),
                       grid, s, hash);
      while (next_ckpt <= s.t + tiny) next_ckpt += cdt;
    }
  };

  RunConfig rc;
  rc.stepper = cfg.stepper;
  rc.stepper.dt = dt;
  rc.norms = cfg.norms;
  rc.guard = cfg.guard;
  rc.sample_dt = cfg.output.sample_dt;
  const RunResult res = run(grid, bg, std::move(init), rc, hook);

  art.exit_code = breakdown_code(res.report.scenario);
  art.breakdown = std::string(breakdown_name(res.report.scenario));
  art.final_time = res.final_state.t;
  write_checkpoint(art.final_state_path, grid, res.final_state, hash);
  art.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  nlohmann::json m;
  m["config"] = nlohmann::json::parse(serialize_config(cfg));
  m["config_hash"] = hash_hex(hash);
  m["library_version"] = std::string(kLibraryVersion);
  m["manifest_version"] = 1;
  m["dt"] = dt;
  m["exit_code"] = art.exit_code;
  m["breakdown"] = art.breakdown;
  m["final_time"] = art.final_time;
  m["samples"] = art.samples;
  m["wall_seconds"] = art.wall_seconds;
  if (resume_t) m["resumed_from_t"] = *resume_t;
  if (res.report.scenario != BreakdownScenario::none) {
    m["breakdown_time"] = res.report.time;
    m["breakdown_witness"] = res.report.witness.what;
  }
  std::ofstream mout(art.manifest_path, std::ios::trunc);
  if (!mout) fail(ErrCode::io_error, "cannot open " + art.manifest_path);
  mout << m.dump(2) << '\n';
  return art;
}

}  // namespace

std::string resolve_output_dir(const OutputConfig& out) {
  fs::path p(out.directory);
  const char* root = std::getenv("TORDUST_OUTPUT_ROOT");
  if (root && *root && p.is_relative()) p = fs::path(root) / p;
  return p.string();
}

RunArtifacts run_to_disk(const SimConfig& cfg) {
  Grid3 grid(cfg.n);
  Background bg(cfg.cosmology);
  FieldState init = build_initial(grid, bg, cfg);
  const double dt = pick_dt(grid, bg, cfg, init);
  return execute(cfg, grid, bg, std::move(init), dt, nullptr);
}

RunArtifacts resume_from_checkpoint(const SimConfig& cfg, const std::string& path) {
  Grid3 grid(cfg.n);
  Background bg(cfg.cosmology);
  double dt = cfg.stepper.dt;
  if (cfg.use_cfl) dt = pick_dt(grid, bg, cfg, build_initial(grid, bg, cfg));
  FieldState state = read_checkpoint(path, grid, config_hash(cfg));
  const double rt = state.t;
  return execute(cfg, grid, bg, std::move(state), dt, &rt);
}

}  // namespace tordust
