#pragma once

#include <array>
#include <string_view>

#include "tordust/grid.hpp"

namespace tordust {

// Evolved variables of the first-order reduction.  k-prefixed members hold the time
// derivative of their partner; rho stores the rescaled density, u the spatial velocity.
struct FieldState {
  double t = 0;
  Field g00, k00, rho;
  std::array<Field, 3> g0, k0, u;
  std::array<Field, 6> h, kh;
};

// homogeneous attractor data at t = 0
FieldState make_flrw_state(const Grid3& grid, double rho_bar);

inline constexpr int kNumFields = 24;

// canonical field ordering used by checkpoints and CSV output
std::array<std::string_view, kNumFields> field_names();
std::array<Field*, kNumFields> field_list(FieldState& s);
std::array<const Field*, kNumFields> field_list(const FieldState& s);

bool all_finite(const FieldState& s);

}  // namespace tordust
