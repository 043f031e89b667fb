#pragma once

#include <array>

#include "tordust/background.hpp"
#include "tordust/util.hpp"

namespace tordust {

// Pointwise Lorentzian algebra for the reduced system.  All functions here act on
// values at a single grid point; fields and transforms live elsewhere.

struct MetricPoint {
  double tt = -1.0;  // g_00
  Vec3 tx{};         // g_0j
  Sym3 sp{};         // g_jk
};

struct InverseMetricPoint {
  double tt = -1.0;  // g^00
  Vec3 tx{};         // g^0j
  Sym3 sp{};         // g^jk
};

// d_mu applied to every metric component; slot 0 is the time derivative
struct MetricGradPoint {
  std::array<double, 4> tt{};  // d_mu g_00
  std::array<Vec3, 4> tx{};    // d_mu g_0j
  std::array<Sym3, 4> sp{};    // d_mu g_jk
};

// Gamma_{mu lam nu} = (d_mu g_{lam nu} + d_nu g_{mu lam} - d_lam g_{mu nu}) / 2
using Christoffel1 = std::array<std::array<std::array<double, 4>, 4>, 4>;

double metric_component(const MetricPoint& m, int al, int be);
double inverse_component(const InverseMetricPoint& m, int al, int be);
double grad_component(const MetricGradPoint& d, int mu, int al, int be);

// Block inversion through the spatial inverse; throws not_lorentzian when the spatial
// part is not positive definite or the reciprocal lapse combination is not negative.
InverseMetricPoint invert_metric(const MetricPoint& m);

// future-directed root of g_{alpha beta} u^al u^be = -1 given u^j; throws not_lorentzian
double solve_u0(const MetricPoint& m, const Vec3& u);

Christoffel1 christoffel_first_kind(const MetricGradPoint& d);

// Gamma_{mu nu}^{al} = g^{al lam} Gamma_{mu lam nu}
double raised_christoffel(const InverseMetricPoint& gi, const Christoffel1& G, int al, int mu, int nu);

// evolved variables and their grid derivatives gathered at one point
struct LocalInput {
  double g00 = -1.0;
  Vec3 g0{};
  Sym3 h{};  // rescaled spatial metric
  double k00 = 0;  // d_t g00
  Vec3 k0{};       // d_t g0j
  Sym3 kh{};       // d_t h_jk
  Vec3 dg00{};                 // d_a g00
  std::array<Vec3, 3> dg0{};   // [a][j] = d_a g0j
  std::array<Sym3, 3> dh{};    // [a] = d_a h_jk
};

// Assembled geometric context: true 4-metric, inverse, first-kind symbols, weights.
struct LocalGeometry {
  double om = 0;      // omega(t)
  double hubble = 0;
  double rho_bar = 0;
  double e2 = 1, e2i = 1, e3i = 1, e5i = 1;  // e^{2 Om}, e^{-2 Om}, e^{-3 Om}, e^{-5 Om}
  MetricPoint g;
  InverseMetricPoint gi;
  Sym3 h{}, kh{};
  std::array<Sym3, 3> dh{};
  MetricGradPoint dg;  // includes d_t g_jk = e^{2 Om}(kh + 2 om h)
  Christoffel1 G{};

  double gsp(int j, int k) const { return g.sp[sym_idx(j, k)]; }
  double gitx(int j) const { return gi.tx[j]; }
  double gisp(int j, int k) const { return gi.sp[sym_idx(j, k)]; }
  double k00() const { return dg.tt[0]; }
  double k0(int j) const { return dg.tx[0][j]; }
  double dg00(int a) const { return dg.tt[a + 1]; }
  double dg0(int a, int j) const { return dg.tx[a + 1][j]; }
  double dtgsp(int j, int k) const { return dg.sp[0][sym_idx(j, k)]; }
  double dgsp(int a, int j, int k) const { return dg.sp[a + 1][sym_idx(j, k)]; }
  double dthv(int j, int k) const { return kh[sym_idx(j, k)]; }
  double hv(int j, int k) const { return h[sym_idx(j, k)]; }
  double dhv(int a, int j, int k) const { return dh[a][sym_idx(j, k)]; }
  // e^{2Om} g^{ab} d_t h_{al} - 2 om g^{0b} g_{0l}; exact zero on the attractor
  double tsh(int b, int l) const;
};

LocalGeometry make_local_geometry(const BackgroundPoint& bg, const LocalInput& in);

struct LocalFluid {
  double rho = 0;
  Vec3 u{};
  double u0 = 1;
  double ul0 = -1;  // u_0
  Vec3 ul{};        // u_j
};

LocalFluid make_local_fluid(const LocalGeometry& geo, double rho, const Vec3& u);

// deviation of the Christoffel symbols from their attractor principal parts
struct ChristoffelDeviation {
  double c000 = 0;                 // upper 0, lower 00
  Vec3 c0j0{};                     // upper 0, lower j0
  Vec3 cj00{};                     // upper j, lower 00
  std::array<Vec3, 3> cj0k{};      // [j][k]: upper j, lower 0k
  Sym3 c0jk{};                     // upper 0, lower jk
  std::array<Sym3, 3> ckij{};      // [k][ij]: upper k, lower ij
};

ChristoffelDeviation christoffel_deviation(const LocalGeometry& geo);

// quadratic gradient remainders (the non-principal part of the gradient-squared term)
double grad_quad_remainder_tt(const LocalGeometry& geo);
Vec3 grad_quad_remainder_tx(const LocalGeometry& geo);
Sym3 grad_quad_remainder_sp(const LocalGeometry& geo);

// remainders of the contracted-symbol (gauge) terms in the 00 and 0j equations
double gauge_quad_remainder_tt(const LocalGeometry& geo);
Vec3 gauge_quad_remainder_tx(const LocalGeometry& geo);

// full gradient-squared term from its definition; test oracle for the remainders
double grad_quad_term(const LocalGeometry& geo, int mu, int nu);

// C^mu = g^{al be} Gamma_{al be}^{mu}
std::array<double, 4> contracted_christoffel(const LocalGeometry& geo);
// D^mu = C^mu - 3 om delta^mu_0
std::array<double, 4> gauge_residual_point(const LocalGeometry& geo);

// wave-equation source terms (everything beyond the attractor-linear part)
double wave_source_tt(const LocalGeometry& geo, const LocalFluid& fl);
Vec3 wave_source_tx(const LocalGeometry& geo, const LocalFluid& fl);
Sym3 wave_source_sp(const LocalGeometry& geo, const LocalFluid& fl);

struct FluidGrad {
  Vec3 drho{};                // d_a rho
  std::array<Vec3, 3> du{};   // [a][j] = d_a u^j
};

// transport sources; velocity_source returns the vector entering the u^j equation
Vec3 velocity_source(const LocalGeometry& geo, const LocalFluid& fl, const ChristoffelDeviation& cd);
double density_source(const LocalGeometry& geo, const LocalFluid& fl, const FluidGrad& fg,
                      const ChristoffelDeviation& cd, const Vec3& vel_src);

}  // namespace tordust
