#include "tordust/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tordust/errors.hpp"
#include "tordust/lorentz.hpp"
#include "tordust/rhs.hpp"
#include "tordust/util.hpp"

namespace tordust {

namespace {

constexpr int kSymMult[6] = {1, 2, 2, 1, 2, 1};  // ordered-pair count per stored component
constexpr double kRatioFloor = 1e-14;

int mi_key(int a, int b, int c) { return (a * 8 + b) * 8 + c; }

// All spatial derivatives of one field up to max_order from a single forward
// transform.  Entry (0,0,0) is a plain copy of the input.
class DerivCache {
 public:
  DerivCache(const Grid3& grid, const Field& f, int max_order) {
    lookup_.fill(-1);
    const auto mis = multi_indices(max_order);
    fields_.resize(mis.size());
    const Spectrum base = grid.forward(f);
    Spectrum tmp;
    for (std::size_t m = 0; m < mis.size(); ++m) {
      const auto& a = mis[m];
      lookup_[mi_key(a[0], a[1], a[2])] = static_cast<int>(m);
      if (a[0] == 0 && a[1] == 0 && a[2] == 0) {
        fields_[m] = f;
      } else {
        grid.apply_derivative(base, a[0], a[1], a[2], tmp);
        fields_[m] = grid.inverse(tmp);
      }
    }
  }

  const Field& at(int a, int b, int c) const { return fields_[lookup_[mi_key(a, b, c)]]; }
  const Field& at(const std::array<int, 3>& m) const { return at(m[0], m[1], m[2]); }
  const Field& at(const std::array<int, 3>& m, int extra) const {
    std::array<int, 3> n = m;
    n[extra] += 1;
    return at(n);
  }
  const Field& at(const std::array<int, 3>& m, int e1, int e2) const {
    std::array<int, 3> n = m;
    n[e1] += 1;
    n[e2] += 1;
    return at(n);
  }

 private:
  std::array<int, 512> lookup_;
  std::vector<Field> fields_;
};

struct Ctx {
  const Grid3& grid;
  const FieldState& s;
  const NormConfig& cfg;
  BackgroundPoint bp;
  FieldState rates;                         // un-dealiased rates of every evolved field
  Field u0, du0;                            // u^0 and d_t u^0
  Field g00i;                               // g^00
  std::array<Field, 6> gspi;                // g^{ab}
  std::array<Field, 3> d_u0;                // d_a u^0
  std::array<std::array<Field, 3>, 3> d_u;  // [a][b] = d_a u^b
  double min_eig_h = 0;
  double max_g00 = 0;
  double max_g00i = 0;

  double w(double c) const { return bp.exp_om(c); }
};

Ctx make_ctx(const Grid3& grid, const Background& bg, const FieldState& s,
             const NormConfig& cfg) {
  Ctx c{grid, s, cfg, bg.at(s.t), {}, {}, {}, {}, {}, {}, {}, 0, 0, 0};
  RhsOptions opt;
  opt.dealias = false;
  assemble_rates(grid, bg, s, c.rates, opt);

  const double e2 = c.bp.exp_om(2.0);
  const double om = c.bp.omega;
  c.u0 = grid.make_field();
  c.du0 = grid.make_field();
  c.g00i = grid.make_field();
  for (int p = 0; p < 6; ++p) c.gspi[p] = grid.make_field();
  c.min_eig_h = std::numeric_limits<double>::max();
  c.max_g00 = std::numeric_limits<double>::lowest();
  c.max_g00i = std::numeric_limits<double>::lowest();

  for (std::size_t i = 0; i < grid.size(); ++i) {
    MetricPoint m;
    m.tt = s.g00[i];
    Sym3 h;
    for (int j = 0; j < 3; ++j) m.tx[j] = s.g0[j][i];
    for (int p = 0; p < 6; ++p) {
      h[p] = s.h[p][i];
      m.sp[p] = e2 * h[p];
    }
    const InverseMetricPoint gi = invert_metric(m);
    c.g00i[i] = gi.tt;
    for (int p = 0; p < 6; ++p) c.gspi[p][i] = gi.sp[p];

    const Vec3 u{s.u[0][i], s.u[1][i], s.u[2][i]};
    const double u0 = solve_u0(m, u);
    c.u0[i] = u0;

    // d_t u^0 from u_mu d_t u^mu = -(d_t g_{al be}) u^al u^be / 2
    double quad = s.k00[i] * u0 * u0;
    for (int j = 0; j < 3; ++j) quad += 2.0 * s.k0[j][i] * u0 * u[j];
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int p = sym_idx(j, k);
        quad += e2 * (s.kh[p][i] + 2.0 * om * s.h[p][i]) * u[j] * u[k];
      }
    double low0 = s.g00[i] * u0;
    for (int a = 0; a < 3; ++a) low0 += s.g0[a][i] * u[a];
    double acc = -0.5 * quad;
    for (int a = 0; a < 3; ++a) {
      double lowa = s.g0[a][i] * u0;
      for (int b = 0; b < 3; ++b) lowa += e2 * s.h[sym_idx(a, b)][i] * u[b];
      acc -= lowa * c.rates.u[a][i];
    }
    c.du0[i] = acc / low0;

    c.min_eig_h = std::min(c.min_eig_h, sym3_min_eigenvalue(h));
    c.max_g00 = std::max(c.max_g00, s.g00[i]);
    c.max_g00i = std::max(c.max_g00i, gi.tt);
  }

  for (int a = 0; a < 3; ++a) {
    c.d_u0[a] = grid.ddx(c.u0, a);
    for (int b = 0; b < 3; ++b) c.d_u[a][b] = grid.ddx(s.u[b], a);
  }
  return c;
}

// u^0 ft + u^a (d_a f) with every factor already on the grid
Field transport(const Ctx& c, const Field& ft, const Field& dx, const Field& dy,
                const Field& dz) {
  Field out = c.grid.make_field();
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    out[i] = c.u0[i] * ft[i] + c.s.u[0][i] * dx[i] + c.s.u[1][i] * dy[i] + c.s.u[2][i] * dz[i];
  return out;
}

struct DuBlockNorms {
  double kf = 0;                   // |du d_t f|_{H^s}
  double f = 0;                    // |du f|_{H^s}
  std::array<double, 3> df{};      // |du d_a f|_{H^s}
  std::array<double, 3> df_low{};  // same one Sobolev order down
};

DuBlockNorms du_block_norms(const Ctx& c, const Field& f, const Field& kf, const Field& ddf) {
  const Grid3& g = c.grid;
  const int s = c.cfg.sobolev_order;
  DerivCache df1(g, f, 2);
  DerivCache dk1(g, kf, 1);
  DuBlockNorms out;
  out.kf = g.sobolev_norm(transport(c, ddf, dk1.at(1, 0, 0), dk1.at(0, 1, 0), dk1.at(0, 0, 1)), s);
  out.f = g.sobolev_norm(transport(c, kf, df1.at(1, 0, 0), df1.at(0, 1, 0), df1.at(0, 0, 1)), s);
  for (int a = 0; a < 3; ++a) {
    std::array<int, 3> e{};
    e[a] = 1;
    const Field t = transport(c, dk1.at(e), df1.at(e, 0), df1.at(e, 1), df1.at(e, 2));
    const Spectrum st = g.forward(t);
    out.df[a] = g.sobolev_norm(st, s);
    out.df_low[a] = g.sobolev_norm(st, s - 1);
  }
  return out;
}

void norms_into(const Ctx& c, DiagnosticsRecord& rec) {
  const Grid3& g = c.grid;
  const int s = c.cfg.sobolev_order;
  const double q = c.cfg.q;

  auto dsob = [&](const Spectrum& base, int a1, int a2, int a3, int order) {
    Spectrum tmp;
    g.apply_derivative(base, a1, a2, a3, tmp);
    return g.sobolev_norm(tmp, order);
  };

  Field g00p = c.s.g00;
  for (double& x : g00p) x += 1.0;
  Field drho = c.s.rho;
  for (double& x : drho) x -= c.bp.rho_bar;

  const Spectrum Sg00 = g.forward(g00p);
  const Spectrum Sk00 = g.forward(c.s.k00);

  rec.s_g00 = c.w(q) * (g.sobolev_norm(Sk00, s) + g.sobolev_norm(Sg00, s));
  for (int a = 0; a < 3; ++a)
    rec.s_g00 += c.w(q - 1) * dsob(Sg00, a == 0, a == 1, a == 2, s);

  rec.se_g00 = 0;
  for (int a = 0; a < 3; ++a)
    rec.se_g00 += c.w(q - 1) * dsob(Sk00, a == 0, a == 1, a == 2, s);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      rec.se_g00 += c.w(q - 2) *
                    dsob(Sg00, (a == 0) + (b == 0), (a == 1) + (b == 1), (a == 2) + (b == 2), s);

  rec.s_g0s = 0;
  rec.se_g0s = 0;
  for (int j = 0; j < 3; ++j) {
    const Spectrum Sg0 = g.forward(c.s.g0[j]);
    const Spectrum Sk0 = g.forward(c.s.k0[j]);
    rec.s_g0s += c.w(q - 1) * (g.sobolev_norm(Sk0, s) + g.sobolev_norm(Sg0, s));
    for (int a = 0; a < 3; ++a) {
      rec.s_g0s += c.w(q - 2) * dsob(Sg0, a == 0, a == 1, a == 2, s);
      rec.se_g0s += c.w(q - 2) * dsob(Sk0, a == 0, a == 1, a == 2, s);
      for (int b = 0; b < 3; ++b)
        rec.se_g0s += c.w(q - 3) * dsob(Sg0, (a == 0) + (b == 0), (a == 1) + (b == 1),
                                        (a == 2) + (b == 2), s);
    }
  }

  rec.s_h = 0;
  rec.se_h = 0;
  for (int p = 0; p < 6; ++p) {
    const double m = kSymMult[p];
    const Spectrum Sh = g.forward(c.s.h[p]);
    const Spectrum Skh = g.forward(c.s.kh[p]);
    rec.s_h += m * c.w(q) * g.sobolev_norm(Skh, s);
    for (int a = 0; a < 3; ++a) {
      Spectrum tmp;
      g.apply_derivative(Sh, a == 0, a == 1, a == 2, tmp);
      rec.s_h += m * (g.sobolev_norm(tmp, s - 1) + c.w(q - 1) * g.sobolev_norm(tmp, s));
      rec.se_h += m * c.w(q - 1) * dsob(Skh, a == 0, a == 1, a == 2, s);
      for (int b = 0; b < 3; ++b)
        rec.se_h += m * c.w(q - 2) * dsob(Sh, (a == 0) + (b == 0), (a == 1) + (b == 1),
                                          (a == 2) + (b == 2), s);
    }
  }

  rec.s_u = 0;
  rec.s_u_top = 0;
  for (int j = 0; j < 3; ++j) {
    const Spectrum Su = g.forward(c.s.u[j]);
    rec.s_u += c.w(1 + q) * g.sobolev_norm(Su, s);
    for (int a = 0; a < 3; ++a)
      rec.s_u_top += c.w(q) * dsob(Su, a == 0, a == 1, a == 2, s);
  }
  rec.s_rho = g.sobolev_norm(drho, s);

  {
    const DuBlockNorms b = du_block_norms(c, g00p, c.s.k00, c.rates.k00);
    rec.s_du_g00 = c.w(q) * (b.kf + b.f);
    for (int a = 0; a < 3; ++a) rec.s_du_g00 += c.w(q - 1) * b.df[a];
  }
  rec.s_du_g0s = 0;
  for (int j = 0; j < 3; ++j) {
    const DuBlockNorms b = du_block_norms(c, c.s.g0[j], c.s.k0[j], c.rates.k0[j]);
    rec.s_du_g0s += c.w(q - 1) * (b.kf + b.f);
    for (int a = 0; a < 3; ++a) rec.s_du_g0s += c.w(q - 2) * b.df[a];
  }
  rec.s_du_dh = 0;
  for (int p = 0; p < 6; ++p) {
    const DuBlockNorms b = du_block_norms(c, c.s.h[p], c.s.kh[p], c.rates.kh[p]);
    const double m = kSymMult[p];
    rec.s_du_dh += m * c.w(q) * (b.kf + b.f);
    for (int a = 0; a < 3; ++a)
      rec.s_du_dh += m * (c.w(q) * b.df_low[a] + c.w(q - 1) * b.df[a]);
  }
  rec.s_du_u = 0;
  for (int j = 0; j < 3; ++j) {
    DerivCache d1(g, c.s.u[j], 1);
    rec.s_du_u += c.w(1 + q) * g.sobolev_norm(
        transport(c, c.rates.u[j], d1.at(1, 0, 0), d1.at(0, 1, 0), d1.at(0, 0, 1)), s);
  }
  {
    DerivCache d1(g, c.s.rho, 1);
    rec.s_du_rho = c.w(q) * g.sobolev_norm(
        transport(c, c.rates.rho, d1.at(1, 0, 0), d1.at(0, 1, 0), d1.at(0, 0, 1)), s);
  }

  rec.s_g = rec.s_g00 + rec.s_g0s + rec.s_h;
  rec.s_du_g = rec.s_du_g00 + rec.s_du_g0s + rec.s_du_dh;
  rec.se = rec.se_g00 + rec.se_g0s + rec.se_h;
  rec.s_below_top = rec.s_g + rec.s_u + rec.s_rho;
  rec.s_du_below_top = rec.s_du_g + rec.s_du_u + rec.s_du_rho;
  rec.s_total = rec.s_below_top + rec.s_du_below_top + rec.se + rec.s_u_top;
}

// 1/2 int of -g00i vt^2 + gspi dv dv - 2 gamma H g00i v vt + delta H^2 v^2;
// v == nullptr stands for the zero field.
double block_sq(const Ctx& c, const EnergyPair& pr, const Field* v, const Field& vt,
                const Field& dvx, const Field& dvy, const Field& dvz) {
  const Grid3& g = c.grid;
  const double H = c.bp.hubble;
  Field integrand = g.make_field();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double dv[3] = {dvx[i], dvy[i], dvz[i]};
    double a = -c.g00i[i] * vt[i] * vt[i];
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) a += c.gspi[sym_idx(j, k)][i] * dv[j] * dv[k];
    if (v) {
      const double vv = (*v)[i];
      a += -2.0 * pr.gamma * H * c.g00i[i] * vv * vt[i] + pr.delta * H * H * vv * vv;
    }
    integrand[i] = a;
  }
  return 0.5 * g.integral(integrand);
}

// Accumulates the squared plain and transport blocks of one wave component over
// all multi-indices up to the Sobolev order.  mass_v selects whether the plain
// block keeps its v slot (the h pair is (0,0), so it never does there).
void wave_component_energy(const Ctx& c, const Field& f, const Field& kf, const Field& ddf,
                           double wexp, const EnergyPair& pr, const EnergyPair& du_pr,
                           double mult, bool mass_v, double& acc_plain, double& acc_du) {
  const Grid3& g = c.grid;
  const int s = c.cfg.sobolev_order;
  DerivCache tf(g, f, s + 2);
  DerivCache tk(g, kf, s + 1);
  DerivCache tdd(g, ddf, s);
  const double w2 = c.w(wexp) * c.w(wexp);
  const bool du_mass = (du_pr.gamma != 0.0 || du_pr.delta != 0.0);

  Field v_du = g.make_field();
  Field vt_du = g.make_field();
  std::array<Field, 3> dv_du{g.make_field(), g.make_field(), g.make_field()};

  for (const auto& al : multi_indices(s)) {
    const Field* v = mass_v ? &tf.at(al) : nullptr;
    acc_plain += mult * w2 * block_sq(c, pr, v, tk.at(al), tf.at(al, 0), tf.at(al, 1), tf.at(al, 2));

    const Field& ka = tk.at(al);
    const Field& dda = tdd.at(al);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double vv = c.u0[i] * ka[i];
      double vt = c.du0[i] * ka[i] + c.u0[i] * dda[i];
      for (int b = 0; b < 3; ++b) {
        const double fb = tf.at(al, b)[i];
        vv += c.s.u[b][i] * fb;
        vt += c.rates.u[b][i] * fb + c.s.u[b][i] * tk.at(al, b)[i];
      }
      v_du[i] = vv;
      vt_du[i] = vt;
    }
    for (int a = 0; a < 3; ++a) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        double dv = c.d_u0[a][i] * ka[i] + c.u0[i] * tk.at(al, a)[i];
        for (int b = 0; b < 3; ++b)
          dv += c.d_u[a][b][i] * tf.at(al, b)[i] + c.s.u[b][i] * tf.at(al, a, b)[i];
        dv_du[a][i] = dv;
      }
    }
    acc_du += mult * w2 * block_sq(c, du_pr, du_mass ? &v_du : nullptr, vt_du, dv_du[0],
                                   dv_du[1], dv_du[2]);
  }
}

void energies_into(const Ctx& c, DiagnosticsRecord& rec) {
  const Grid3& g = c.grid;
  const int s = c.cfg.sobolev_order;
  const double q = c.cfg.q;
  const double H = c.bp.hubble;

  Field g00p = c.s.g00;
  for (double& x : g00p) x += 1.0;

  double e_g00 = 0, e_du_g00 = 0;
  wave_component_energy(c, g00p, c.s.k00, c.rates.k00, q, c.cfg.g00, c.cfg.du_g00, 1.0, true,
                        e_g00, e_du_g00);

  double e_g0s = 0, e_du_g0s = 0;
  for (int j = 0; j < 3; ++j)
    wave_component_energy(c, c.s.g0[j], c.s.k0[j], c.rates.k0[j], q - 1, c.cfg.g0s,
                          c.cfg.du_g0s, 1.0, true, e_g0s, e_du_g0s);

  double e_dh = 0, e_du_dh = 0, e_h_low = 0;
  for (int p = 0; p < 6; ++p) {
    wave_component_energy(c, c.s.h[p], c.s.kh[p], c.rates.kh[p], q, c.cfg.h, c.cfg.du_h,
                          kSymMult[p], false, e_dh, e_du_dh);
    const Spectrum sh = g.forward(c.s.h[p]);
    const double full = g.sobolev_norm(sh, s);
    const double zero = g.l2_norm_spectral(sh);
    e_h_low += kSymMult[p] * 0.5 * H * H * (full * full - zero * zero);
  }

  double e_u = 0, e_u_top = 0;
  for (int j = 0; j < 3; ++j) {
    const Spectrum su = g.forward(c.s.u[j]);
    const double nu = g.sobolev_norm(su, s);
    e_u += c.w(1 + q) * c.w(1 + q) * nu * nu;
    for (int a = 0; a < 3; ++a) {
      Spectrum tmp;
      g.apply_derivative(su, a == 0, a == 1, a == 2, tmp);
      const double nd = g.sobolev_norm(tmp, s);
      e_u_top += c.w(q) * c.w(q) * nd * nd;
    }
  }
  Field drho = c.s.rho;
  for (double& x : drho) x -= c.bp.rho_bar;
  const double e_rho = g.sobolev_norm(drho, s);

  rec.e_g00 = std::sqrt(e_g00);
  rec.e_du_g00 = std::sqrt(e_du_g00);
  rec.e_g0s = std::sqrt(e_g0s);
  rec.e_du_g0s = std::sqrt(e_du_g0s);
  rec.e_dh = std::sqrt(e_dh);
  rec.e_du_dh = std::sqrt(e_du_dh);
  rec.e_h_low = std::sqrt(std::max(e_h_low, 0.0));
  rec.e_u = std::sqrt(e_u);
  rec.e_u_top = std::sqrt(e_u_top);
  rec.e_rho = e_rho;

  rec.e_g = rec.e_g00 + rec.e_g0s + rec.e_dh + rec.e_h_low;
  rec.e_du_g = rec.e_du_g00 + rec.e_du_g0s + rec.e_du_dh;
  rec.e_below_top = rec.e_g + rec.e_u + rec.e_rho;
  rec.e_total = rec.e_below_top + rec.e_du_g + rec.e_u_top;
}

void health_into(const Ctx& c, DiagnosticsRecord& rec) {
  const Grid3& g = c.grid;

  std::array<Field, 3> dg00;
  std::array<std::array<Field, 3>, 3> dg0;  // [j][a] = d_a g0j
  std::array<std::array<Field, 3>, 6> dh;   // [p][a]
  for (int a = 0; a < 3; ++a) {
    dg00[a] = g.ddx(c.s.g00, a);
    for (int j = 0; j < 3; ++j) dg0[j][a] = g.ddx(c.s.g0[j], a);
    for (int p = 0; p < 6; ++p) dh[p][a] = g.ddx(c.s.h[p], a);
  }

  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    LocalInput in;
    in.g00 = c.s.g00[i];
    in.k00 = c.s.k00[i];
    for (int j = 0; j < 3; ++j) {
      in.g0[j] = c.s.g0[j][i];
      in.k0[j] = c.s.k0[j][i];
    }
    for (int p = 0; p < 6; ++p) {
      in.h[p] = c.s.h[p][i];
      in.kh[p] = c.s.kh[p][i];
    }
    for (int a = 0; a < 3; ++a) {
      in.dg00[a] = dg00[a][i];
      for (int j = 0; j < 3; ++j) in.dg0[a][j] = dg0[j][a][i];
      for (int p = 0; p < 6; ++p) in.dh[a][p] = dh[p][a][i];
    }
    const auto resid = gauge_residual_point(make_local_geometry(c.bp, in));
    for (int mu = 0; mu < 4; ++mu) worst = std::max(worst, std::abs(resid[mu]));
  }
  rec.gauge_resid_max = worst;

  // first-order transport/space commutator applied to each metric component:
  // [d_a, du] v = (d_a u^0) d_t v + (d_a u^b) d_b v
  double total = 0;
  Field w = g.make_field();
  auto add_comm = [&](const Field& kv, const Field& dvx, const Field& dvy, const Field& dvz,
                      double mult) {
    const Field* dv[3] = {&dvx, &dvy, &dvz};
    for (int a = 0; a < 3; ++a) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        double x = c.d_u0[a][i] * kv[i];
        for (int b = 0; b < 3; ++b) x += c.d_u[a][b][i] * (*dv[b])[i];
        w[i] = x;
      }
      total += mult * g.l2_norm(w);
    }
  };
  add_comm(c.s.k00, dg00[0], dg00[1], dg00[2], 1.0);
  for (int j = 0; j < 3; ++j) add_comm(c.s.k0[j], dg0[j][0], dg0[j][1], dg0[j][2], 1.0);
  for (int p = 0; p < 6; ++p) add_comm(c.s.kh[p], dh[p][0], dh[p][1], dh[p][2], kSymMult[p]);
  rec.du_comm = total;

  rec.min_eig_h = c.min_eig_h;
  rec.min_eig_g = c.bp.exp_om(2.0) * c.min_eig_h;
  rec.max_g00 = c.max_g00;
  rec.non_coercive = c.max_g00i > -0.5;
}

}  // namespace

Field du_apply(const Grid3& grid, const Background& bg, const FieldState& s, const Field& f,
               const Field& ft) {
  const double e2 = bg.at(s.t).exp_om(2.0);
  std::array<Field, 3> df;
  for (int a = 0; a < 3; ++a) df[a] = grid.ddx(f, a);
  Field out = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    MetricPoint m;
    m.tt = s.g00[i];
    for (int j = 0; j < 3; ++j) m.tx[j] = s.g0[j][i];
    for (int p = 0; p < 6; ++p) m.sp[p] = e2 * s.h[p][i];
    const Vec3 u{s.u[0][i], s.u[1][i], s.u[2][i]};
    const double u0 = solve_u0(m, u);
    out[i] = u0 * ft[i] + u[0] * df[0][i] + u[1] * df[1][i] + u[2] * df[2][i];
  }
  return out;
}

double building_block_energy_sq(const Grid3& grid, const Field& g00_inv,
                                const std::array<Field, 6>& gsp_inv, double hubble,
                                const EnergyPair& c, const Field& v, const Field& vt,
                                const std::array<Field, 3>& dv) {
  Field integrand = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d[3] = {dv[0][i], dv[1][i], dv[2][i]};
    double a = -g00_inv[i] * vt[i] * vt[i];
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) a += gsp_inv[sym_idx(j, k)][i] * d[j] * d[k];
    a += -2.0 * c.gamma * hubble * g00_inv[i] * v[i] * vt[i];
    a += c.delta * hubble * hubble * v[i] * v[i];
    integrand[i] = a;
  }
  return 0.5 * grid.integral(integrand);
}

DiagnosticsRecord compute_norms(const Grid3& grid, const Background& bg, const FieldState& s,
                                const NormConfig& cfg) {
  const Ctx c = make_ctx(grid, bg, s, cfg);
  DiagnosticsRecord rec;
  rec.t = s.t;
  norms_into(c, rec);
  return rec;
}

void compute_energies(const Grid3& grid, const Background& bg, const FieldState& s,
                      const NormConfig& cfg, DiagnosticsRecord& rec) {
  const Ctx c = make_ctx(grid, bg, s, cfg);
  energies_into(c, rec);
}

DiagnosticsRecord compute_record(const Grid3& grid, const Background& bg, const FieldState& s,
                                 const NormConfig& cfg) {
  const Ctx c = make_ctx(grid, bg, s, cfg);
  DiagnosticsRecord rec;
  rec.t = s.t;
  norms_into(c, rec);
  energies_into(c, rec);
  health_into(c, rec);
  return rec;
}

std::vector<NormEnergyRatio> norm_energy_ratio(const DiagnosticsRecord& r) {
  std::vector<NormEnergyRatio> out;
  auto push = [&](const char* name, double n, double e) {
    NormEnergyRatio x;
    x.name = name;
    x.norm = n;
    x.energy = e;
    x.defined = (n >= kRatioFloor || e >= kRatioFloor);
    x.ratio = !x.defined ? 0.0
              : e > 0.0  ? n / e
                         : std::numeric_limits<double>::infinity();
    out.push_back(std::move(x));
  };
  push("g00", r.s_g00, r.e_g00);
  push("g0star", r.s_g0s, r.e_g0s);
  push("h", r.s_h, r.e_h_low + r.e_dh);
  push("du_g00", r.s_du_g00, r.e_du_g00);
  push("du_g0star", r.s_du_g0s, r.e_du_g0s);
  push("du_dh", r.s_du_dh, r.e_du_dh);
  push("g", r.s_g, r.e_g);
  push("du_g", r.s_du_g, r.e_du_g);
  push("u", r.s_u, r.e_u);
  push("u_top", r.s_u_top, r.e_u_top);
  push("rho", r.s_rho, r.e_rho);
  push("below_top", r.s_below_top, r.e_below_top);
  push("elliptic", r.se, r.e_below_top + r.e_du_g);
  push("total", r.s_total, r.e_total);
  return out;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, double t_a,
                   double t_b) {
  if (t.size() != value.size()) fail(ErrCode::invalid_argument, "fit series length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_a || t[i] > t_b) continue;
    if (!(value[i] > 0.0))
      fail(ErrCode::invalid_argument, "fit window requires positive samples");
    xs.push_back(t[i]);
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 8) fail(ErrCode::invalid_argument, "fit window holds fewer than 8 samples");
  const auto ab = line_fit(xs, ys);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - ab[0] - ab[1] * xs[i];
    ss += r * r;
  }
  DecayFit out;
  out.exponent = ab[1];
  out.residual = std::sqrt(ss / static_cast<double>(xs.size()));
  out.samples = static_cast<int>(xs.size());
  return out;
}

std::string diagnostics_csv_header() {
  return "t,S_g00,S_du_g00,Se_g00,S_g0star,S_du_g0star,Se_g0star,S_h,S_du_dh,Se_h,"
         "S_u,S_du_u,S_u_top,S_rho,S_du_rho,S_g,S_du_g,Se_g,S_below_top,S_du_below_top,"
         "S_total,E_g00,E_du_g00,E_g0star,E_du_g0star,E_h_low,E_dh,E_du_dh,E_g,E_du_g,"
         "E_u,E_u_top,E_rho,E_below_top,E_total,gauge_resid_max,du_comm,min_eig_h,"
         "min_eig_g,max_g00,non_coercive,breakdown";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  const double vals[] = {r.t,        r.s_g00,      r.s_du_g00,      r.se_g00,
                         r.s_g0s,    r.s_du_g0s,   r.se_g0s,        r.s_h,
                         r.s_du_dh,  r.se_h,       r.s_u,           r.s_du_u,
                         r.s_u_top,  r.s_rho,      r.s_du_rho,      r.s_g,
                         r.s_du_g,   r.se,         r.s_below_top,   r.s_du_below_top,
                         r.s_total,  r.e_g00,      r.e_du_g00,      r.e_g0s,
                         r.e_du_g0s, r.e_h_low,    r.e_dh,          r.e_du_dh,
                         r.e_g,      r.e_du_g,     r.e_u,           r.e_u_top,
                         r.e_rho,    r.e_below_top, r.e_total,      r.gauge_resid_max,
                         r.du_comm,  r.min_eig_h,  r.min_eig_g,     r.max_g00};
  std::string out;
  char buf[40];
  for (double v : vals) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    out += ',';
  }
  std::snprintf(buf, sizeof buf, "%d,%d", r.non_coercive ? 1 : 0, r.breakdown);
  out += buf;
  return out;
}

}  // namespace tordust
