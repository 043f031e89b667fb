#pragma once

#include <array>

#include "tordust/background.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"

namespace tordust {

struct RhsOptions {
  double g00_upper_floor = 0.1;  // breakdown when |g^00| drops below this
  bool dealias = true;           // applied once to the assembled rates
};

// wave-equation right-hand sides before the second-derivative isolation
struct WaveRhsFields {
  Field tt;
  std::array<Field, 3> tx;
  std::array<Field, 6> sp;
};

WaveRhsFields wave_rhs(const Grid3& grid, const Background& bg, const FieldState& s);

// d_tt of the wave variables, isolated through the reciprocal metric:
// d_tt v = (RHS_v - 2 g^{0a} d_a d_t v - g^{ab} d_a d_b v) / g^{00}
void second_time_derivatives(const Grid3& grid, const Background& bg, const FieldState& s,
                             Field& ddg00, std::array<Field, 3>& ddg0, std::array<Field, 6>& ddh,
                             const RhsOptions& opt = {});
// which: 0 = g00, 1..3 = g0j, 4..9 = h components in storage order
Field second_time_derivative(const Grid3& grid, const Background& bg, const FieldState& s,
                             int which, const RhsOptions& opt = {});

void fluid_rhs(const Grid3& grid, const Background& bg, const FieldState& s, Field& drho,
               std::array<Field, 3>& du, const RhsOptions& opt = {});

// full first-order-reduction rates; rates.t is set to 1 (dt/dt)
void assemble_rates(const Grid3& grid, const Background& bg, const FieldState& s,
                    FieldState& rates, const RhsOptions& opt = {});

}  // namespace tordust
