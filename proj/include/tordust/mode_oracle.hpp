#pragma once

#include <array>
#include <complex>
#include <string_view>
#include <vector>

#include "tordust/background.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"

namespace tordust {

// One Fourier mode of the 24 evolved variables around the homogeneous solution.
// Amplitudes follow the canonical field order; the grid realization of entry A
// at wavevector k is Re(A) cos(k.x) - Im(A) sin(k.x), so the evolved object is
// the real mode pair and conjugate symmetry is automatic.
struct ModeState {
  std::array<int, 3> wavevector{};
  std::array<std::complex<double>, kNumFields> amp{};
};

// position of a named variable in ModeState::amp; -1 when unknown
int mode_index(std::string_view field_name);

// smallest grid whose dealias band contains the wavevector
int minimal_grid_n(const std::array<int, 3>& wavevector);

// homogeneous state at time t plus scale * mode
FieldState realize_mode(const Grid3& grid, const Background& bg, double t, const ModeState& m,
                        double scale);

// amplitudes of the deviation from the homogeneous state at s.t
ModeState project_mode(const Grid3& grid, const Background& bg, const FieldState& s,
                       const std::array<int, 3>& wavevector);

// central-difference directional derivative of the full right-hand side at the
// homogeneous solution; eps is applied to the sup-normalized mode
ModeState jacobian_action(const Background& bg, double t, const ModeState& m, double eps = 1e-6);

struct ModeSample {
  double t = 0;
  ModeState mode;
};

// adaptive embedded Runge-Kutta integration of the linearized system from t = 0;
// the series holds every accepted step, ending exactly at t_final.  Throws
// tolerance_not_met when the controller cannot reach the requested accuracy.
std::vector<ModeSample> evolve_mode(const BackgroundParams& params, const ModeState& mode0,
                                    double t_final, double tol = 1e-10);

}  // namespace tordust
