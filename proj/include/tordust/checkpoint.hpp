#pragma once

#include <cstdint>
#include <string>

#include "tordust/fields.hpp"
#include "tordust/grid.hpp"

namespace tordust {

// Binary snapshot of a full state.  Layout: 8-byte magic, u32 version,
// u64 config hash, u32 grid size, f64 time, then the 24 field arrays in
// canonical order, all little-endian.  Resuming from a snapshot reproduces
// the uninterrupted run bitwise.

struct CheckpointInfo {
  std::uint32_t version = 0;
  std::uint64_t config_hash = 0;
  int n = 0;
  double t = 0;
};

void write_checkpoint(const std::string& path, const Grid3& grid, const FieldState& s,
                      std::uint64_t config_hash);

// header only; throws io_error / format_error
CheckpointInfo read_checkpoint_info(const std::string& path);

// throws config_mismatch when the stored hash or grid size disagrees
FieldState read_checkpoint(const std::string& path, const Grid3& grid,
                           std::uint64_t config_hash);

}  // namespace tordust
