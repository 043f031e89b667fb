#pragma once

#include <array>

#include "tordust/background.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"

namespace tordust {

// Inverse Riemannian metric that controls top-order spatial derivatives:
// H^jk = e^{2 Om} (g^jk + g^00 u^j u^k / (u^0)^2 - g^0j u^k / u^0 - g^0k u^j / u^0).
struct EllipticCoefficients {
  std::array<Field, 6> hij;
};

EllipticCoefficients elliptic_coefficients(const Grid3& grid, const Background& bg,
                                           const FieldState& s);

// smallest eigenvalue over the grid; positive on near-attractor states
double elliptic_min_eigenvalue(const Grid3& grid, const EllipticCoefficients& co);

// wave components are indexed 0: g00, 1..3: g0j, 4..9: h components

// H^ab d_a d_b v  minus  the reduced-wave-operator side, both evaluated
// independently; vanishes up to spectral truncation error
Field elliptic_identity_residual(const Grid3& grid, const Background& bg, const FieldState& s,
                                 int component);

// same identity for a manufactured v with caller-supplied time derivatives
Field elliptic_identity_residual(const Grid3& grid, const Background& bg, const FieldState& s,
                                 const Field& v, const Field& vt, const Field& vtt);

struct TopOrderSpatial {
  std::array<Field, 6> dd;  // d_a d_b v, symmetric storage
  double lhs_l2 = 0;        // sqrt of the sum of |d_a d_b v|_{L^2}^2 over ordered pairs
  double rhs_bound = 0;     // L2 size of the operator side, for ratio reporting
};

TopOrderSpatial top_order_spatial(const Grid3& grid, const Background& bg, const FieldState& s,
                                  int component);

}  // namespace tordust
