#include "tordust/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tordust/errors.hpp"
#include "tordust/util.hpp"

namespace tordust {

namespace {

constexpr std::array<std::string_view, kNumDataTargets> kTargetNames = {
    "g11", "g12", "g13", "g22", "g23", "g33",
    "K11", "K12", "K13", "K22", "K23", "K33",
    "rho", "u1",  "u2",  "u3",
};

void check_sizes(const Grid3& grid, const GeometricData& geo) {
  const std::size_t sz = grid.size();
  bool ok = geo.rho.size() == sz;
  for (int c = 0; c < 6; ++c) ok = ok && geo.gsp[c].size() == sz && geo.kext[c].size() == sz;
  for (int j = 0; j < 3; ++j) ok = ok && geo.usp[j].size() == sz;
  if (!ok) fail(ErrCode::invalid_argument, "slice data does not match the grid");
}

Sym3 gather_sym(const std::array<Field, 6>& f, std::size_t i) {
  return {f[0][i], f[1][i], f[2][i], f[3][i], f[4][i], f[5][i]};
}

// cos(k.x + phase) accumulated onto a field
void add_mode(const Grid3& grid, const PerturbationMode& m, double amp, Field& f) {
  const int n = grid.n();
  for (int ix = 0; ix < n; ++ix) {
    const double x = grid.coord(ix);
    for (int iy = 0; iy < n; ++iy) {
      const double y = grid.coord(iy);
      for (int iz = 0; iz < n; ++iz) {
        const double t = m.wavevector[0] * x + m.wavevector[1] * y +
                         m.wavevector[2] * grid.coord(iz) + m.phase;
        f[grid.index(ix, iy, iz)] += amp * std::cos(t);
      }
    }
  }
}

std::vector<PerturbationMode> default_family(SplitMix64& rng) {
  // two modes per target with |k_i| <= 2; fixed draw order keeps this
  // reproducible across platforms
  std::vector<PerturbationMode> modes;
  modes.reserve(2 * kNumDataTargets);
  for (int t = 0; t < kNumDataTargets; ++t) {
    for (int rep = 0; rep < 2; ++rep) {
      PerturbationMode m;
      m.target = static_cast<DataTarget>(t);
      for (int a = 0; a < 3; ++a)
        m.wavevector[a] = static_cast<int>(rng.next_u64() % 5) - 2;
      m.phase = rng.uniform(0.0, 2.0 * M_PI);
      modes.push_back(m);
    }
  }
  return modes;
}

}  // namespace

std::string_view data_target_name(DataTarget t) { return kTargetNames[static_cast<int>(t)]; }

bool parse_data_target(std::string_view name, DataTarget& out) {
  for (int t = 0; t < kNumDataTargets; ++t) {
    if (kTargetNames[t] == name) {
      out = static_cast<DataTarget>(t);
      return true;
    }
  }
  return false;
}

GeometricData flrw_data(const Grid3& grid, const BackgroundParams& params) {
  const double om0 = Background(params).at(0.0).omega;
  GeometricData geo;
  for (int c = 0; c < 6; ++c) {
    const bool diag = c == 0 || c == 3 || c == 5;
    geo.gsp[c] = grid.make_field(diag ? 1.0 : 0.0);
    geo.kext[c] = grid.make_field(diag ? om0 : 0.0);
  }
  geo.rho = grid.make_field(params.rho_bar);
  for (int j = 0; j < 3; ++j) geo.usp[j] = grid.make_field();
  return geo;
}

GeometricData perturbed_flrw(const Grid3& grid, const BackgroundParams& params,
                             const PerturbationSpec& spec) {
  GeometricData geo = flrw_data(grid, params);
  if (spec.amplitude == 0) return geo;

  SplitMix64 rng(spec.seed);
  const std::vector<PerturbationMode> modes =
      spec.modes.empty() ? default_family(rng) : spec.modes;

  const int cut = grid.dealias_cut();
  for (const PerturbationMode& m : modes) {
    for (int a = 0; a < 3; ++a)
      if (std::abs(m.wavevector[a]) > cut)
        fail(ErrCode::invalid_argument, "perturbation mode outside the dealias band");
  }

  std::array<Field, 6> dk;  // curvature perturbation, applied after the metric
  for (int c = 0; c < 6; ++c) dk[c] = grid.make_field();
  for (const PerturbationMode& m : modes) {
    const int t = static_cast<int>(m.target);
    if (t < 6) add_mode(grid, m, spec.amplitude, geo.gsp[t]);
    else if (t < 12) add_mode(grid, m, spec.amplitude, dk[t - 6]);
    else if (t == 12) add_mode(grid, m, spec.amplitude, geo.rho);
    else add_mode(grid, m, spec.amplitude, geo.usp[t - 13]);
  }

  const double om0 = Background(params).at(0.0).omega;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!sym3_positive_definite(gather_sym(geo.gsp, i)))
      fail(ErrCode::amplitude_too_large, "perturbed metric is not positive definite");
  }
  for (int c = 0; c < 6; ++c)
    for (std::size_t i = 0; i < grid.size(); ++i)
      geo.kext[c][i] = om0 * geo.gsp[c][i] + dk[c][i];
  for (std::size_t i = 0; i < grid.size(); ++i) geo.rho[i] = std::max(geo.rho[i], 0.0);
  return geo;
}

FieldState construct_modified_data(const Grid3& grid, const Background& bg,
                                   const GeometricData& geo) {
  check_sizes(grid, geo);
  const double om0 = bg.at(0.0).omega;

  FieldState s;
  s.t = 0;
  s.g00 = grid.make_field(-1.0);
  s.k00 = grid.make_field();
  s.rho = geo.rho;
  s.h = geo.gsp;
  for (int j = 0; j < 3; ++j) {
    s.g0[j] = grid.make_field();
    s.k0[j] = grid.make_field();
    s.u[j] = geo.usp[j];
  }
  for (int c = 0; c < 6; ++c) s.kh[c] = grid.make_field();

  std::array<std::array<Field, 6>, 3> dg;  // [a] = d_a gsp
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 6; ++c) dg[a][c] = grid.ddx(geo.gsp[c], a);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Sym3 gs = gather_sym(geo.gsp, i);
    const Sym3 kx = gather_sym(geo.kext, i);
    if (!sym3_positive_definite(gs))
      fail(ErrCode::not_lorentzian, "slice metric is not positive definite");
    Sym3 gi;
    sym3_inverse(gs, gi);

    double tr = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) tr += sym_get(gi, a, b) * sym_get(kx, a, b);
    s.k00[i] = 2.0 * (3.0 * om0 - tr);

    for (int c = 0; c < 6; ++c) s.kh[c][i] = 2.0 * kx[c] - 2.0 * om0 * gs[c];

    for (int j = 0; j < 3; ++j) {
      double v = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          v += sym_get(gi, a, b) *
               (dg[a][sym_idx(b, j)][i] - 0.5 * dg[j][sym_idx(a, b)][i]);
      s.k0[j][i] = v;
    }
  }
  return s;
}

ConstraintResiduals constraint_residuals(const Grid3& grid, const BackgroundParams& params,
                                         const GeometricData& geo) {
  check_sizes(grid, geo);
  const std::size_t sz = grid.size();

  std::array<std::array<Field, 6>, 3> dg, dk;  // [a] = d_a gsp, d_a kext
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 6; ++c) {
      dg[a][c] = grid.ddx(geo.gsp[c], a);
      dk[a][c] = grid.ddx(geo.kext[c], a);
    }

  // second-kind symbols of the slice metric as grid fields, so their
  // derivatives below can be taken spectrally
  std::array<Field, 6> ginv;
  std::array<std::array<Field, 6>, 3> gam;  // [c] = Gamma^c_(ab)
  for (int c = 0; c < 6; ++c) ginv[c] = grid.make_field();
  for (int c = 0; c < 3; ++c)
    for (int p = 0; p < 6; ++p) gam[c][p] = grid.make_field();

  for (std::size_t i = 0; i < sz; ++i) {
    const Sym3 gs = gather_sym(geo.gsp, i);
    Sym3 gi;
    if (!sym3_inverse(gs, gi)) fail(ErrCode::not_lorentzian, "slice metric is singular");
    for (int c = 0; c < 6; ++c) ginv[c][i] = gi[c];
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          double v = 0;
          for (int d = 0; d < 3; ++d)
            v += 0.5 * sym_get(gi, c, d) *
                 (dg[a][sym_idx(d, b)][i] + dg[b][sym_idx(d, a)][i] - dg[d][sym_idx(a, b)][i]);
          gam[c][sym_idx(a, b)][i] = v;
        }
      }
  }

  std::array<Field, 6> div_gam;  // sum_c d_c Gamma^c_ab
  for (int p = 0; p < 6; ++p) {
    div_gam[p] = grid.make_field();
    for (int c = 0; c < 3; ++c) {
      const Field d = grid.ddx(gam[c][p], c);
      for (std::size_t i = 0; i < sz; ++i) div_gam[p][i] += d[i];
    }
  }

  std::array<Field, 3> tr_gam;  // Gamma^c_cb
  for (int b = 0; b < 3; ++b) {
    tr_gam[b] = grid.make_field();
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < sz; ++i) tr_gam[b][i] += gam[c][sym_idx(c, b)][i];
  }
  std::array<std::array<Field, 3>, 3> dtr;  // [a][b] = d_a Gamma^c_cb
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) dtr[a][b] = grid.ddx(tr_gam[b], a);

  ConstraintResiduals out;
  out.gauss = grid.make_field();
  for (int j = 0; j < 3; ++j) out.codazzi[j] = grid.make_field();

  for (std::size_t i = 0; i < sz; ++i) {
    const Sym3 gs = gather_sym(geo.gsp, i);
    const Sym3 gi = gather_sym(ginv, i);
    const Sym3 kx = gather_sym(geo.kext, i);
    const auto gamv = [&](int c, int a, int b) { return gam[c][sym_idx(a, b)][i]; };

    double scal = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double r = div_gam[sym_idx(a, b)][i] - dtr[a][b][i];
        for (int c = 0; c < 3; ++c) {
          r += tr_gam[c][i] * gamv(c, a, b);
          for (int d = 0; d < 3; ++d) r -= gamv(c, a, d) * gamv(d, c, b);
        }
        scal += sym_get(gi, a, b) * r;
      }

    double kk = 0, trk = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        trk += sym_get(gi, a, b) * sym_get(kx, a, b);
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d)
            kk += sym_get(gi, a, c) * sym_get(gi, b, d) * sym_get(kx, a, b) * sym_get(kx, c, d);
      }

    double usq = 0;
    Vec3 ul{};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) usq += sym_get(gs, a, b) * geo.usp[a][i] * geo.usp[b][i];
      for (int j = 0; j < 3; ++j) ul[j] += sym_get(gs, j, a) * geo.usp[a][i];
    }
    const double u0 = std::sqrt(1.0 + usq);
    out.gauss[i] = scal - kk + trk * trk - 2.0 * params.lambda - 2.0 * geo.rho[i] * u0 * u0;

    // D_c K_ab = d_c K_ab - Gamma^d_ca K_db - Gamma^d_cb K_ad
    const auto cov = [&](int c, int a, int b) {
      double v = dk[c][sym_idx(a, b)][i];
      for (int d = 0; d < 3; ++d)
        v -= gamv(d, c, a) * sym_get(kx, d, b) + gamv(d, c, b) * sym_get(kx, a, d);
      return v;
    };
    for (int j = 0; j < 3; ++j) {
      double v = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          v += sym_get(gi, a, b) * (cov(b, a, j) - cov(j, a, b));
      out.codazzi[j][i] = v + geo.rho[i] * u0 * ul[j];
    }
  }
  return out;
}

}  // namespace tordust
