#include "tordust/rhs.hpp"

#include <string>

#include "tordust/errors.hpp"
#include "tordust/lorentz.hpp"

namespace tordust {

namespace {

// wave-variable slots: 0 = g00, 1..3 = g0j, 4..9 = h components
const Field& wave_field(const FieldState& s, int w) {
  if (w == 0) return s.g00;
  if (w < 4) return s.g0[w - 1];
  return s.h[w - 4];
}

const Field& partner_k_field(const FieldState& s, int w) {
  if (w == 0) return s.k00;
  if (w < 4) return s.k0[w - 1];
  return s.kh[w - 4];
}

void first_derivs(const Grid3& g, const Field& f, std::array<Field, 3>& out) {
  Spectrum sp = g.forward(f);
  Spectrum tmp(sp.size());
  for (int a = 0; a < 3; ++a) {
    g.apply_derivative(sp, a == 0 ? 1 : 0, a == 1 ? 1 : 0, a == 2 ? 1 : 0, tmp);
    out[a] = g.inverse(tmp);
  }
}

void second_derivs(const Grid3& g, const Field& f, std::array<Field, 6>& out) {
  Spectrum sp = g.forward(f);
  Spectrum tmp(sp.size());
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      int e[3] = {0, 0, 0};
      ++e[a];
      ++e[b];
      g.apply_derivative(sp, e[0], e[1], e[2], tmp);
      out[sym_idx(a, b)] = g.inverse(tmp);
    }
}

struct Prepared {
  std::array<std::array<Field, 3>, 10> d1;   // d_a of wave fields
  std::array<std::array<Field, 3>, 10> dk1;  // d_a of partner k fields
  std::array<std::array<Field, 6>, 10> d2;   // d_a d_b of wave fields
  std::array<Field, 3> drho;
  std::array<std::array<Field, 3>, 3> du;  // [j][a] = d_a u^j
  bool has_iso = false, has_fluid = false;
};

Prepared prepare(const Grid3& grid, const FieldState& s, bool iso, bool fluid) {
  Prepared p;
  for (int w = 0; w < 10; ++w) first_derivs(grid, wave_field(s, w), p.d1[w]);
  if (iso) {
    for (int w = 0; w < 10; ++w) {
      first_derivs(grid, partner_k_field(s, w), p.dk1[w]);
      second_derivs(grid, wave_field(s, w), p.d2[w]);
    }
    p.has_iso = true;
  }
  if (fluid) {
    first_derivs(grid, s.rho, p.drho);
    for (int j = 0; j < 3; ++j) first_derivs(grid, s.u[j], p.du[j]);
    p.has_fluid = true;
  }
  return p;
}

LocalInput gather(const FieldState& s, const Prepared& p, std::size_t i) {
  LocalInput in;
  in.g00 = s.g00[i];
  in.k00 = s.k00[i];
  for (int j = 0; j < 3; ++j) {
    in.g0[j] = s.g0[j][i];
    in.k0[j] = s.k0[j][i];
  }
  for (int c = 0; c < 6; ++c) {
    in.h[c] = s.h[c][i];
    in.kh[c] = s.kh[c][i];
  }
  for (int a = 0; a < 3; ++a) {
    in.dg00[a] = p.d1[0][a][i];
    for (int j = 0; j < 3; ++j) in.dg0[a][j] = p.d1[1 + j][a][i];
    for (int c = 0; c < 6; ++c) in.dh[a][c] = p.d1[4 + c][a][i];
  }
  return in;
}

struct WaveRhsPoint {
  double tt;
  Vec3 tx;
  Sym3 sp;
};

WaveRhsPoint wave_rhs_point(const BackgroundPoint& bgp, const LocalGeometry& geo,
                            const LocalFluid& fl, const LocalInput& in) {
  const double hub = bgp.hubble;
  WaveRhsPoint r;
  r.tt = 5.0 * hub * in.k00 + 6.0 * hub * hub * (in.g00 + 1.0) + wave_source_tt(geo, fl);
  const Vec3 stx = wave_source_tx(geo, fl);
  for (int j = 0; j < 3; ++j) {
    double tr = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) tr += geo.gisp(a, b) * geo.G[a + 1][j + 1][b + 1];
    r.tx[j] = 3.0 * hub * in.k0[j] + 2.0 * hub * hub * in.g0[j] - 2.0 * hub * tr + stx[j];
  }
  const Sym3 ssp = wave_source_sp(geo, fl);
  for (int c = 0; c < 6; ++c) r.sp[c] = 3.0 * hub * in.kh[c] + ssp[c];
  return r;
}

// (RHS - 2 g^{0a} d_a k - g^{ab} d_ab v) / g^00 for wave slot w
double isolate_point(const LocalGeometry& geo, const Prepared& p, int w, double rhs,
                     std::size_t i) {
  double num = rhs;
  for (int a = 0; a < 3; ++a) num -= 2.0 * geo.gitx(a) * p.dk1[w][a][i];
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      num -= (a == b ? 1.0 : 2.0) * geo.gisp(a, b) * p.d2[w][sym_idx(a, b)][i];
  return num / geo.gi.tt;
}

void check_floor(const LocalGeometry& geo, double floor) {
  if (floor > 0 && geo.gi.tt > -floor)
    fail(ErrCode::degenerate_g00,
         "|g^00| below floor " + std::to_string(floor) + " during rhs evaluation");
}

void ensure_shape(const Grid3& grid, FieldState& s) {
  for (Field* f : field_list(s))
    if (f->size() != grid.size()) *f = grid.make_field();
}

}  // namespace

WaveRhsFields wave_rhs(const Grid3& grid, const Background& bg, const FieldState& s) {
  const BackgroundPoint bgp = bg.at(s.t);
  const Prepared p = prepare(grid, s, false, false);
  WaveRhsFields out;
  out.tt = grid.make_field();
  for (auto& f : out.tx) f = grid.make_field();
  for (auto& f : out.sp) f = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const LocalInput in = gather(s, p, i);
    const LocalGeometry geo = make_local_geometry(bgp, in);
    const LocalFluid fl = make_local_fluid(geo, s.rho[i], {s.u[0][i], s.u[1][i], s.u[2][i]});
    const WaveRhsPoint r = wave_rhs_point(bgp, geo, fl, in);
    out.tt[i] = r.tt;
    for (int j = 0; j < 3; ++j) out.tx[j][i] = r.tx[j];
    for (int c = 0; c < 6; ++c) out.sp[c][i] = r.sp[c];
  }
  return out;
}

void second_time_derivatives(const Grid3& grid, const Background& bg, const FieldState& s,
                             Field& ddg00, std::array<Field, 3>& ddg0, std::array<Field, 6>& ddh,
                             const RhsOptions& opt) {
  const BackgroundPoint bgp = bg.at(s.t);
  const Prepared p = prepare(grid, s, true, false);
  ddg00 = grid.make_field();
  for (auto& f : ddg0) f = grid.make_field();
  for (auto& f : ddh) f = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const LocalInput in = gather(s, p, i);
    const LocalGeometry geo = make_local_geometry(bgp, in);
    check_floor(geo, opt.g00_upper_floor);
    const LocalFluid fl = make_local_fluid(geo, s.rho[i], {s.u[0][i], s.u[1][i], s.u[2][i]});
    const WaveRhsPoint r = wave_rhs_point(bgp, geo, fl, in);
    ddg00[i] = isolate_point(geo, p, 0, r.tt, i);
    for (int j = 0; j < 3; ++j) ddg0[j][i] = isolate_point(geo, p, 1 + j, r.tx[j], i);
    for (int c = 0; c < 6; ++c) ddh[c][i] = isolate_point(geo, p, 4 + c, r.sp[c], i);
  }
}

Field second_time_derivative(const Grid3& grid, const Background& bg, const FieldState& s,
                             int which, const RhsOptions& opt) {
  if (which < 0 || which > 9) fail(ErrCode::invalid_argument, "wave component out of range");
  Field ddg00;
  std::array<Field, 3> ddg0;
  std::array<Field, 6> ddh;
  second_time_derivatives(grid, bg, s, ddg00, ddg0, ddh, opt);
  if (which == 0) return ddg00;
  if (which < 4) return ddg0[which - 1];
  return ddh[which - 4];
}

void fluid_rhs(const Grid3& grid, const Background& bg, const FieldState& s, Field& drho,
               std::array<Field, 3>& du, const RhsOptions& opt) {
  const BackgroundPoint bgp = bg.at(s.t);
  const Prepared p = prepare(grid, s, false, true);
  drho = grid.make_field();
  for (auto& f : du) f = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const LocalInput in = gather(s, p, i);
    const LocalGeometry geo = make_local_geometry(bgp, in);
    check_floor(geo, opt.g00_upper_floor);
    const LocalFluid fl = make_local_fluid(geo, s.rho[i], {s.u[0][i], s.u[1][i], s.u[2][i]});
    const ChristoffelDeviation cd = christoffel_deviation(geo);
    FluidGrad fg;
    for (int a = 0; a < 3; ++a) {
      fg.drho[a] = p.drho[a][i];
      for (int j = 0; j < 3; ++j) fg.du[a][j] = p.du[j][a][i];
    }
    const Vec3 vs = velocity_source(geo, fl, cd);
    for (int j = 0; j < 3; ++j) {
      double num = -2.0 * geo.om * fl.u0 * fl.u[j] - fl.u0 * cd.cj00[j] + vs[j];
      for (int a = 0; a < 3; ++a) num -= fl.u[a] * fg.du[a][j];
      du[j][i] = num / fl.u0;
    }
    double num = density_source(geo, fl, fg, cd, vs);
    for (int a = 0; a < 3; ++a) num -= fl.u[a] * fg.drho[a];
    drho[i] = num / fl.u0;
  }
}

void assemble_rates(const Grid3& grid, const Background& bg, const FieldState& s,
                    FieldState& rates, const RhsOptions& opt) {
  const BackgroundPoint bgp = bg.at(s.t);
  const Prepared p = prepare(grid, s, true, true);
  ensure_shape(grid, rates);
  rates.t = 1.0;
  rates.g00 = s.k00;
  rates.g0 = s.k0;
  rates.h = s.kh;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const LocalInput in = gather(s, p, i);
    const LocalGeometry geo = make_local_geometry(bgp, in);
    check_floor(geo, opt.g00_upper_floor);
    const LocalFluid fl = make_local_fluid(geo, s.rho[i], {s.u[0][i], s.u[1][i], s.u[2][i]});
    const WaveRhsPoint r = wave_rhs_point(bgp, geo, fl, in);
    rates.k00[i] = isolate_point(geo, p, 0, r.tt, i);
    for (int j = 0; j < 3; ++j) rates.k0[j][i] = isolate_point(geo, p, 1 + j, r.tx[j], i);
    for (int c = 0; c < 6; ++c) rates.kh[c][i] = isolate_point(geo, p, 4 + c, r.sp[c], i);

    const ChristoffelDeviation cd = christoffel_deviation(geo);
    FluidGrad fg;
    for (int a = 0; a < 3; ++a) {
      fg.drho[a] = p.drho[a][i];
      for (int j = 0; j < 3; ++j) fg.du[a][j] = p.du[j][a][i];
    }
    const Vec3 vs = velocity_source(geo, fl, cd);
    for (int j = 0; j < 3; ++j) {
      double num = -2.0 * geo.om * fl.u0 * fl.u[j] - fl.u0 * cd.cj00[j] + vs[j];
      for (int a = 0; a < 3; ++a) num -= fl.u[a] * fg.du[a][j];
      rates.u[j][i] = num / fl.u0;
    }
    double num = density_source(geo, fl, fg, cd, vs);
    for (int a = 0; a < 3; ++a) num -= fl.u[a] * fg.drho[a];
    rates.rho[i] = num / fl.u0;
  }

  if (opt.dealias)
    for (Field* f : field_list(rates)) grid.dealias_field(*f);
}

}  // namespace tordust
