#pragma once

#include <string>

#include "tordust/config.hpp"

namespace tordust {

inline constexpr std::string_view kLibraryVersion = "1.0.0";

// Where a batch run left its artifacts.  exit_code is 0 for a clean run and
// the breakdown code when a guard stopped it early.
struct RunArtifacts {
  std::string directory;
  std::string csv_path;
  std::string manifest_path;
  std::string final_state_path;
  int exit_code = 0;
  std::string breakdown;
  double final_time = 0;
  double wall_seconds = 0;
  int samples = 0;
};

// cfg.output.directory, joined under $TORDUST_OUTPUT_ROOT when that is set
// and the directory is relative
std::string resolve_output_dir(const OutputConfig& out);

// Full batch run: diagnostics.csv, periodic ckpt_NNNN.bin, final_state.bin,
// manifest.json.  Checkpoints land on sample times, so checkpoint_dt should
// be a multiple of sample_dt.
RunArtifacts run_to_disk(const SimConfig& cfg);

// Continue from a checkpoint written by run_to_disk with the same physics
// config.  Existing diagnostics rows at or past the checkpoint time are
// dropped and re-emitted, which reproduces the uninterrupted file bitwise.
RunArtifacts resume_from_checkpoint(const SimConfig& cfg, const std::string& ckpt_path);

}  // namespace tordust
