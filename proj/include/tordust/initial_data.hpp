#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tordust/background.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"

namespace tordust {

// Slice data at t = 0: induced metric, extrinsic curvature, dust density, and
// the slice-tangential part of the four-velocity.
struct GeometricData {
  std::array<Field, 6> gsp;   // spatial metric, positive definite pointwise
  std::array<Field, 6> kext;  // extrinsic curvature
  Field rho;                  // >= 0
  std::array<Field, 3> usp;
};

// Components a perturbation mode can target.
enum class DataTarget : int {
  g11, g12, g13, g22, g23, g33,
  K11, K12, K13, K22, K23, K33,
  rho,
  u1, u2, u3,
};
inline constexpr int kNumDataTargets = 16;

std::string_view data_target_name(DataTarget t);
bool parse_data_target(std::string_view name, DataTarget& out);

struct PerturbationMode {
  std::array<int, 3> wavevector{};  // |k_i| <= n/3, zero vector allowed
  DataTarget target = DataTarget::g11;
  double phase = 0;
};

// amplitude scales every mode; an empty mode list means "draw a generic
// band-limited family from seed" (two modes per target, deterministic).
struct PerturbationSpec {
  double amplitude = 0;
  std::vector<PerturbationMode> modes;
  std::uint64_t seed = 0;
};

/// Homogeneous attractor slice: identity metric, omega(0) * identity curvature.
GeometricData flrw_data(const Grid3& grid, const BackgroundParams& params);

// Attractor slice plus cosine perturbations; deterministic in spec.  The
// density is clipped at zero rather than rejected.  Throws amplitude_too_large
// if the metric loses positive definiteness, invalid_argument on a mode
// outside the dealias band.
GeometricData perturbed_flrw(const Grid3& grid, const BackgroundParams& params,
                             const PerturbationSpec& spec);

// First-order state whose contracted Christoffel symbols match the gauge
// values on the initial slice.  Throws not_lorentzian if gsp is not positive
// definite somewhere.
FieldState construct_modified_data(const Grid3& grid, const Background& bg,
                                   const GeometricData& geo);

struct ConstraintResiduals {
  Field gauss;                   // scalar (Hamiltonian) residual
  std::array<Field, 3> codazzi;  // momentum residual
};

// Gauss and Codazzi residuals of the slice data, with the 3-Ricci scalar and
// slice covariant derivatives evaluated spectrally.  Reported, never enforced.
ConstraintResiduals constraint_residuals(const Grid3& grid, const BackgroundParams& params,
                                         const GeometricData& geo);

}  // namespace tordust
