#pragma once

#include <algorithm>
#include <cmath>

#include "tordust/background.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"
#include "tordust/lorentz.hpp"
#include "tordust/util.hpp"

namespace testutil {

// band-limited random field: a handful of low modes with random phases
inline tordust::Field random_modes(const tordust::Grid3& g, tordust::SplitMix64& rng, double amp) {
  static constexpr int kModes[8][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},
                                       {1, 0, 1}, {0, 1, 1}, {2, 1, 0}, {1, 1, 1}};
  double c[8], ph[8];
  for (int m = 0; m < 8; ++m) {
    c[m] = amp * rng.uniform(-1, 1);
    ph[m] = rng.uniform(0, 2 * M_PI);
  }
  tordust::Field f = g.make_field();
  for (int ix = 0; ix < g.n(); ++ix)
    for (int iy = 0; iy < g.n(); ++iy)
      for (int iz = 0; iz < g.n(); ++iz) {
        double v = 0;
        for (int m = 0; m < 8; ++m)
          v += c[m] * std::cos(kModes[m][0] * g.coord(ix) + kModes[m][1] * g.coord(iy) +
                               kModes[m][2] * g.coord(iz) + ph[m]);
        f[g.index(ix, iy, iz)] = v;
      }
  return f;
}

inline tordust::FieldState random_state(const tordust::Grid3& g, tordust::SplitMix64& rng,
                                        double amp, double rho_base) {
  tordust::FieldState s = tordust::make_flrw_state(g, rho_base);
  auto add = [&](tordust::Field& f, double scale) {
    tordust::Field m = random_modes(g, rng, scale);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += m[i];
  };
  add(s.g00, amp);
  add(s.k00, amp);
  add(s.rho, amp);
  for (int j = 0; j < 3; ++j) {
    add(s.g0[j], amp);
    add(s.k0[j], amp);
    add(s.u[j], amp);
  }
  for (int i = 0; i < 6; ++i) {
    add(s.h[i], amp);
    add(s.kh[i], amp);
  }
  return s;
}

// max over the grid and over all four components of the contracted-symbol
// deviation from the gauge values; spatial derivatives taken spectrally here,
// independently of the right-hand-side plumbing
inline double gauge_residual_max(const tordust::Grid3& g, const tordust::Background& bg,
                                 const tordust::FieldState& s) {
  using namespace tordust;
  const BackgroundPoint bp = bg.at(s.t);
  std::array<Field, 3> dg00;
  std::array<std::array<Field, 3>, 3> dg0;  // [a][j]
  std::array<std::array<Field, 6>, 3> dh;   // [a]
  for (int a = 0; a < 3; ++a) {
    dg00[a] = g.ddx(s.g00, a);
    for (int j = 0; j < 3; ++j) dg0[a][j] = g.ddx(s.g0[j], a);
    for (int c = 0; c < 6; ++c) dh[a][c] = g.ddx(s.h[c], a);
  }
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
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
      in.dg00[a] = dg00[a][i];
      for (int j = 0; j < 3; ++j) in.dg0[a][j] = dg0[a][j][i];
      for (int c = 0; c < 6; ++c) in.dh[a][c] = dh[a][c][i];
    }
    for (double v : gauge_residual_point(make_local_geometry(bp, in)))
      worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace testutil
