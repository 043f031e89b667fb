#include "tordust/lorentz.hpp"

#include <cmath>

#include "tordust/errors.hpp"

namespace tordust {

double metric_component(const MetricPoint& m, int al, int be) {
  if (al == 0 && be == 0) return m.tt;
  if (al == 0) return m.tx[be - 1];
  if (be == 0) return m.tx[al - 1];
  return m.sp[sym_idx(al - 1, be - 1)];
}

double inverse_component(const InverseMetricPoint& m, int al, int be) {
  if (al == 0 && be == 0) return m.tt;
  if (al == 0) return m.tx[be - 1];
  if (be == 0) return m.tx[al - 1];
  return m.sp[sym_idx(al - 1, be - 1)];
}

double grad_component(const MetricGradPoint& d, int mu, int al, int be) {
  if (al == 0 && be == 0) return d.tt[mu];
  if (al == 0) return d.tx[mu][be - 1];
  if (be == 0) return d.tx[mu][al - 1];
  return d.sp[mu][sym_idx(al - 1, be - 1)];
}

InverseMetricPoint invert_metric(const MetricPoint& m) {
  if (!(m.tt < 0)) fail(ErrCode::not_lorentzian, "metric: g_00 must be negative");
  if (!sym3_positive_definite(m.sp))
    fail(ErrCode::not_lorentzian, "metric: spatial block not positive definite");
  Sym3 spinv;
  if (!sym3_inverse(m.sp, spinv))
    fail(ErrCode::not_lorentzian, "metric: spatial block singular");

  Vec3 si{};  // (S^{-1} g_0)^j
  for (int j = 0; j < 3; ++j)
    for (int a = 0; a < 3; ++a) si[j] += spinv[sym_idx(j, a)] * m.tx[a];
  double d2 = 0;  // g_0a (S^{-1})^{ab} g_0b
  for (int a = 0; a < 3; ++a) d2 += si[a] * m.tx[a];

  const double k = m.tt - d2;
  if (!(k < 0)) fail(ErrCode::not_lorentzian, "metric: time-time inverse not negative");

  InverseMetricPoint inv;
  inv.tt = 1.0 / k;
  for (int j = 0; j < 3; ++j) inv.tx[j] = -inv.tt * si[j];
  for (int j = 0; j < 3; ++j)
    for (int kk = j; kk < 3; ++kk)
      inv.sp[sym_idx(j, kk)] = spinv[sym_idx(j, kk)] + inv.tt * si[j] * si[kk];
  return inv;
}

double solve_u0(const MetricPoint& m, const Vec3& u) {
  if (!(m.tt < 0)) fail(ErrCode::not_lorentzian, "velocity: g_00 must be negative");
  double b = 0;
  for (int a = 0; a < 3; ++a) b += m.tx[a] * u[a];
  double quad = 0;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) quad += m.sp[sym_idx(a, c)] * u[a] * u[c];
  const double r = b / m.tt;
  const double disc = 1.0 + r * r - quad / m.tt - (m.tt + 1.0) / m.tt;
  if (!(disc > 0)) fail(ErrCode::not_lorentzian, "velocity: no real future-directed root");
  const double u0 = -r + std::sqrt(disc);
  if (!(u0 > 0)) fail(ErrCode::not_lorentzian, "velocity: root not future-directed");
  return u0;
}

Christoffel1 christoffel_first_kind(const MetricGradPoint& d) {
  Christoffel1 G{};
  for (int mu = 0; mu < 4; ++mu)
    for (int lam = 0; lam < 4; ++lam)
      for (int nu = 0; nu < 4; ++nu)
        G[mu][lam][nu] = 0.5 * (grad_component(d, mu, lam, nu) + grad_component(d, nu, mu, lam) -
                                grad_component(d, lam, mu, nu));
  return G;
}

double raised_christoffel(const InverseMetricPoint& gi, const Christoffel1& G, int al, int mu,
                          int nu) {
  double s = 0;
  for (int lam = 0; lam < 4; ++lam) s += inverse_component(gi, al, lam) * G[mu][lam][nu];
  return s;
}

double LocalGeometry::tsh(int b, int l) const {
  double s = 0;
  for (int a = 0; a < 3; ++a) s += gisp(a, b) * dthv(a, l);
  return e2 * s - 2.0 * om * gitx(b) * g.tx[l];
}

LocalGeometry make_local_geometry(const BackgroundPoint& bg, const LocalInput& in) {
  LocalGeometry geo;
  geo.om = bg.omega;
  geo.hubble = bg.hubble;
  geo.rho_bar = bg.rho_bar;
  geo.e2 = bg.exp_om(2.0);
  geo.e2i = bg.exp_om(-2.0);
  geo.e3i = bg.exp_om(-3.0);
  geo.e5i = bg.exp_om(-5.0);

  geo.g.tt = in.g00;
  geo.g.tx = in.g0;
  for (int i = 0; i < 6; ++i) geo.g.sp[i] = geo.e2 * in.h[i];
  geo.gi = invert_metric(geo.g);
  geo.h = in.h;
  geo.kh = in.kh;
  geo.dh = in.dh;

  geo.dg.tt[0] = in.k00;
  geo.dg.tx[0] = in.k0;
  for (int i = 0; i < 6; ++i) geo.dg.sp[0][i] = geo.e2 * (in.kh[i] + 2.0 * geo.om * in.h[i]);
  for (int a = 0; a < 3; ++a) {
    geo.dg.tt[a + 1] = in.dg00[a];
    geo.dg.tx[a + 1] = in.dg0[a];
    for (int i = 0; i < 6; ++i) geo.dg.sp[a + 1][i] = geo.e2 * in.dh[a][i];
  }
  geo.G = christoffel_first_kind(geo.dg);
  return geo;
}

LocalFluid make_local_fluid(const LocalGeometry& geo, double rho, const Vec3& u) {
  LocalFluid fl;
  fl.rho = rho;
  fl.u = u;
  fl.u0 = solve_u0(geo.g, u);
  fl.ul0 = geo.g.tt * fl.u0;
  for (int a = 0; a < 3; ++a) fl.ul0 += geo.g.tx[a] * u[a];
  for (int j = 0; j < 3; ++j) {
    fl.ul[j] = geo.g.tx[j] * fl.u0;
    for (int a = 0; a < 3; ++a) fl.ul[j] += geo.gsp(j, a) * u[a];
  }
  return fl;
}

ChristoffelDeviation christoffel_deviation(const LocalGeometry& geo) {
  const auto& g = geo;
  ChristoffelDeviation cd;

  double s = g.gi.tt * g.k00();
  for (int a = 0; a < 3; ++a) s += g.gitx(a) * (2.0 * g.k0(a) - g.dg00(a));
  cd.c000 = 0.5 * s;

  for (int j = 0; j < 3; ++j) {
    s = g.gi.tt * g.dg00(j);
    for (int a = 0; a < 3; ++a)
      s += g.gitx(a) * (g.dg0(j, a) - g.dg0(a, j) + 2.0 * g.om * g.gsp(j, a) +
                        g.e2 * g.dthv(a, j));
    cd.c0j0[j] = 0.5 * s;
  }

  for (int j = 0; j < 3; ++j) {
    s = g.gitx(j) * g.k00();
    for (int a = 0; a < 3; ++a) s += g.gisp(j, a) * (2.0 * g.k0(a) - g.dg00(a));
    cd.cj00[j] = 0.5 * s;
  }

  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      s = g.gitx(j) * g.dg00(k) - 2.0 * g.om * g.gitx(j) * g.g.tx[k];
      for (int a = 0; a < 3; ++a)
        s += g.gisp(j, a) * (g.dg0(k, a) - g.dg0(a, k) + g.e2 * g.dthv(a, k));
      cd.cj0k[j][k] = 0.5 * s;
    }

  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k) {
      s = g.gi.tt * (g.dg0(j, k) + g.dg0(k, j)) + g.e2 * g.dthv(j, k) -
          2.0 * g.om * (g.gi.tt + 1.0) * g.gsp(j, k) - (g.gi.tt + 1.0) * g.e2 * g.dthv(j, k);
      for (int a = 0; a < 3; ++a)
        s += g.gitx(a) * (g.dgsp(j, a, k) + g.dgsp(k, a, j) - g.dgsp(a, j, k));
      cd.c0jk[sym_idx(j, k)] = 0.5 * s;
    }

  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        s = g.gitx(k) * (g.dg0(i, j) + g.dg0(j, i)) - g.gitx(k) * g.e2 * g.dthv(i, j) -
            2.0 * g.om * g.e2 * g.gitx(k) * g.hv(i, j);
        for (int a = 0; a < 3; ++a)
          s += g.gisp(k, a) * (g.dgsp(i, a, j) + g.dgsp(j, i, a) - g.dgsp(a, i, j));
        cd.ckij[k][sym_idx(i, j)] = 0.5 * s;
      }

  return cd;
}

double grad_quad_remainder_tt(const LocalGeometry& g) {
  const auto& G = g.G;
  double r = g.gi.tt * g.gi.tt * (g.k00() * g.k00() - G[0][0][0] * G[0][0][0]);

  for (int a = 0; a < 3; ++a)
    r += g.gi.tt * g.gitx(a) *
         (2.0 * g.k00() * (g.k0(a) + g.dg00(a)) - 4.0 * G[0][0][0] * G[0][0][a + 1]);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      r += g.gi.tt * g.gisp(a, b) *
           (g.k0(a) * g.k0(b) + g.dg00(a) * g.dg00(b) - 2.0 * G[0][0][a + 1] * G[0][0][b + 1]);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      r += g.gitx(a) * g.gitx(b) *
           (2.0 * g.k00() * g.dg0(a, b) + 2.0 * g.k0(b) * g.dg00(a) -
            2.0 * G[0][0][0] * G[a + 1][0][b + 1] - 2.0 * G[0][0][b + 1] * G[0][0][a + 1]);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int l = 0; l < 3; ++l)
        r += g.gisp(a, b) * g.gitx(l) *
             (2.0 * g.k0(a) * g.dg0(l, b) + 2.0 * g.dg00(b) * g.dg0(a, l) -
              4.0 * G[0][0][a + 1] * G[l + 1][0][b + 1]);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m)
          r += g.gisp(a, b) * g.gisp(l, m) * g.dg0(a, l) * g.dg0(b, m);

  for (int b = 0; b < 3; ++b)
    for (int l = 0; l < 3; ++l)
      for (int m = 0; m < 3; ++m)
        r += 0.5 * g.gisp(l, m) * g.tsh(b, l) * (g.dg0(b, m) + g.dg0(m, b));

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m)
          r -= 0.25 * g.gisp(a, b) * g.gisp(l, m) * (g.dg0(a, l) + g.dg0(l, a)) *
               (g.dg0(b, m) + g.dg0(m, b));

  for (int b = 0; b < 3; ++b)
    for (int l = 0; l < 3; ++l) r -= 0.25 * g.tsh(b, l) * g.tsh(l, b);

  return r;
}

Vec3 grad_quad_remainder_tx(const LocalGeometry& g) {
  const auto& G = g.G;
  Vec3 out{};
  for (int j = 0; j < 3; ++j) {
    double r = g.gi.tt * g.gi.tt * (g.k00() * g.k0(j) - G[0][0][0] * G[0][j + 1][0]);

    for (int a = 0; a < 3; ++a)
      r += g.gi.tt * g.gitx(a) *
           (g.k00() * (g.dtgsp(a, j) + g.dg0(a, j)) + g.k0(j) * (g.k0(a) + g.dg00(a)) -
            2.0 * G[0][0][0] * G[0][j + 1][a + 1] - 2.0 * G[0][j + 1][0] * G[0][0][a + 1]);

    for (int a = 0; a < 3; ++a)
      r += g.gi.tt * g.tsh(a, j) * (g.k0(a) - 0.5 * g.dg00(a));

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        r += 0.5 * g.gi.tt * g.gisp(a, b) * g.dg00(a) * (g.dg0(b, j) + g.dg0(j, b));

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        r += g.gitx(a) * g.gitx(b) *
             (g.k00() * g.dgsp(a, b, j) + g.k0(b) * g.dg0(a, j) + g.dg00(a) * g.dtgsp(b, j) +
              g.dg0(a, b) * g.k0(j) - G[0][0][0] * G[a + 1][j + 1][b + 1] -
              2.0 * G[0][0][b + 1] * G[0][j + 1][a + 1] - G[a + 1][0][b + 1] * G[0][j + 1][0]);

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int l = 0; l < 3; ++l)
          r += g.gisp(a, b) * g.gitx(l) *
               (g.k0(a) * g.dgsp(l, b, j) + g.dg0(l, a) * g.dtgsp(b, j) +
                g.dg00(b) * g.dgsp(a, l, j) + g.dg0(b, l) * g.dg0(a, j) -
                2.0 * G[0][0][a + 1] * G[l + 1][j + 1][b + 1]);

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int l = 0; l < 3; ++l)
          r -= g.gisp(a, b) * g.gitx(l) *
               ((g.dg0(l, a) + g.dg0(a, l)) * G[0][j + 1][b + 1] -
                0.5 * g.dtgsp(l, a) * (g.dg0(b, j) - g.dg0(j, b)));

    for (int a = 0; a < 3; ++a) r += g.om * g.gitx(a) * g.e2 * g.dthv(a, j);

    for (int b = 0; b < 3; ++b)
      for (int l = 0; l < 3; ++l) r += 0.5 * g.gitx(l) * g.tsh(b, l) * g.dtgsp(b, j);

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m)
            r += g.gisp(a, b) * g.gisp(l, m) *
                 (g.dg0(a, l) * g.dgsp(b, m, j) -
                  0.5 * (g.dg0(a, l) + g.dg0(l, a)) * G[b + 1][j + 1][m + 1]);

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m)
          r += 0.5 * g.gisp(a, b) * g.tsh(m, a) * G[b + 1][j + 1][m + 1];

    out[j] = r;
  }
  return out;
}

Sym3 grad_quad_remainder_sp(const LocalGeometry& g) {
  const auto& G = g.G;
  Sym3 out{};
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k) {
      double r = g.gi.tt * g.gi.tt * (g.k0(j) * g.k0(k) - G[0][j + 1][0] * G[0][k + 1][0]);

      for (int a = 0; a < 3; ++a)
        r += g.gi.tt * g.gitx(a) *
             (g.k0(j) * (g.dtgsp(a, k) + g.dg0(a, k)) + g.k0(k) * (g.dtgsp(a, j) + g.dg0(a, j)) -
              2.0 * G[0][j + 1][0] * G[0][k + 1][a + 1] -
              2.0 * G[0][k + 1][0] * G[0][j + 1][a + 1]);

      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          r += g.gi.tt * g.gisp(a, b) *
               (g.dg0(a, j) * g.dg0(b, k) -
                0.5 * (g.dg0(a, j) - g.dg0(j, a)) * (g.dg0(b, k) - g.dg0(k, b)));

      for (int b = 0; b < 3; ++b)
        r -= 0.5 * g.gi.tt * g.tsh(b, j) * (g.dg0(b, k) - g.dg0(k, b));
      for (int a = 0; a < 3; ++a)
        r -= 0.5 * g.gi.tt * g.tsh(a, k) * (g.dg0(a, j) - g.dg0(j, a));

      for (int a = 0; a < 3; ++a)
        r -= g.om * g.gi.tt * g.g.tx[k] * g.gitx(a) * g.dtgsp(a, j);

      for (int b = 0; b < 3; ++b) r += 0.5 * g.gi.tt * g.tsh(b, j) * g.e2 * g.dthv(b, k);

      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          r += g.gitx(a) * g.gitx(b) *
               (g.k0(j) * g.dgsp(a, b, k) + g.dtgsp(b, j) * g.dg0(a, k) +
                g.dg0(a, j) * g.dtgsp(b, k) + g.dgsp(a, b, j) * g.k0(k) -
                G[0][j + 1][0] * G[a + 1][k + 1][b + 1] -
                2.0 * G[0][j + 1][b + 1] * G[0][k + 1][a + 1] -
                G[a + 1][j + 1][b + 1] * G[0][k + 1][0]);

      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int l = 0; l < 3; ++l)
            r += g.gisp(a, b) * g.gitx(l) *
                 (g.dtgsp(a, j) * g.dgsp(l, b, k) + g.dgsp(l, a, j) * g.dtgsp(b, k) +
                  g.dg0(b, j) * g.dgsp(a, l, k) + g.dgsp(b, l, j) * g.dg0(a, k) -
                  2.0 * G[0][j + 1][a + 1] * G[l + 1][k + 1][b + 1] -
                  2.0 * G[l + 1][j + 1][a + 1] * G[0][k + 1][b + 1]);

      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
              r += g.gisp(a, b) * g.gisp(m, l) *
                   (g.dgsp(a, l, j) * g.dgsp(b, m, k) -
                    G[a + 1][j + 1][l + 1] * G[b + 1][k + 1][m + 1]);

      out[sym_idx(j, k)] = r;
    }
  return out;
}

double gauge_quad_remainder_tt(const LocalGeometry& g) {
  const auto& G = g.G;
  double g0g0 = 0;
  for (int a = 0; a < 3; ++a) g0g0 += g.gitx(a) * g.g.tx[a];
  double trsh = 0;
  for (int a = 0; a < 3; ++a) trsh += g.tsh(a, a);

  double r = -6.0 / g.g.tt * g.om * g.om * ((g.g.tt + 1.0) * (g.g.tt + 1.0) - g0g0);
  r -= g.om * (g.gi.tt + 1.0) * trsh;

  double s = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += g.gisp(a, b) * g.dg0(a, b);
  r += 2.0 * g.om * (g.gi.tt + 1.0) * s;

  s = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += g.gitx(a) * g.gitx(b) * G[0][a + 1][b + 1];
  r += 4.0 * g.om * s;

  s = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int l = 0; l < 3; ++l) s += g.gisp(a, b) * g.gitx(l) * G[a + 1][l + 1][b + 1];
  r += 2.0 * g.om * s;

  // completes the contracted-symbol expansion; without these the 00 identity breaks
  // at quadratic order.  (g^00+1) and g^{0a} keep them small near the attractor.
  r += g.om * (g.gi.tt + 1.0) * (g.gi.tt - 1.0) * g.k00();
  for (int a = 0; a < 3; ++a)
    r += g.om * g.gi.tt * g.gitx(a) * (2.0 * g.k0(a) + g.dg00(a));

  return r;
}

Vec3 gauge_quad_remainder_tx(const LocalGeometry& g) {
  Vec3 out{};
  for (int j = 0; j < 3; ++j) {
    double r = 2.0 * g.om * g.om * (g.gi.tt + 1.0) * g.g.tx[j];
    for (int a = 0; a < 3; ++a)
      r -= 2.0 * g.om * g.gitx(a) * (g.e2 * g.dthv(a, j) + g.dg0(a, j) - g.dg0(j, a));
    out[j] = r;
  }
  return out;
}

double grad_quad_term(const LocalGeometry& g, int mu, int nu) {
  double s = 0;
  for (int al = 0; al < 4; ++al)
    for (int be = 0; be < 4; ++be)
      for (int ka = 0; ka < 4; ++ka)
        for (int la = 0; la < 4; ++la)
          s += inverse_component(g.gi, al, be) * inverse_component(g.gi, ka, la) *
               (grad_component(g.dg, al, nu, ka) * grad_component(g.dg, be, mu, la) -
                g.G[al][nu][ka] * g.G[be][mu][la]);
  return s;
}

std::array<double, 4> contracted_christoffel(const LocalGeometry& g) {
  std::array<double, 4> c{};
  for (int mu = 0; mu < 4; ++mu) {
    double s = 0;
    for (int al = 0; al < 4; ++al)
      for (int be = 0; be < 4; ++be)
        s += inverse_component(g.gi, al, be) * raised_christoffel(g.gi, g.G, mu, al, be);
    c[mu] = s;
  }
  return c;
}

std::array<double, 4> gauge_residual_point(const LocalGeometry& g) {
  auto c = contracted_christoffel(g);
  c[0] -= 3.0 * g.om;
  return c;
}

double wave_source_tt(const LocalGeometry& g, const LocalFluid& fl) {
  const double dA = grad_quad_remainder_tt(g);
  const double dC = gauge_quad_remainder_tt(g);
  double r = -(g.g.tt + 1.0) * g.e3i * g.rho_bar - g.e3i * (fl.rho - g.rho_bar);
  r += 2.0 * g.e3i * fl.rho * (1.0 - fl.ul0 * fl.ul0);
  r -= g.e3i * fl.rho * (g.g.tt + 1.0);
  r += 2.0 * (dA + dC);
  r += 5.0 * (g.om - g.hubble) * g.k00();
  r += 6.0 * (g.om * g.om - g.hubble * g.hubble) * (g.g.tt + 1.0);
  return r;
}

Vec3 wave_source_tx(const LocalGeometry& g, const LocalFluid& fl) {
  const Vec3 dA = grad_quad_remainder_tx(g);
  const Vec3 dC = gauge_quad_remainder_tx(g);
  Vec3 out{};
  for (int j = 0; j < 3; ++j) {
    double r = 0.5 * g.e3i * g.rho_bar * g.g.tx[j] - 2.0 * g.e3i * fl.rho * fl.ul0 * fl.ul[j];
    r -= g.e3i * fl.rho * g.g.tx[j];
    r += 2.0 * (g.hubble * g.hubble - g.om * g.om) * g.g.tx[j];
    r += 3.0 * (g.om - g.hubble) * g.k0(j);
    double s = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s += g.gisp(a, b) * g.G[a + 1][j + 1][b + 1];
    r -= 2.0 * (g.om - g.hubble) * s;
    r += 2.0 * (dA[j] + dC[j]);
    out[j] = r;
  }
  return out;
}

Sym3 wave_source_sp(const LocalGeometry& g, const LocalFluid& fl) {
  const Sym3 dA = grad_quad_remainder_sp(g);
  Sym3 out{};
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k) {
      const int i = sym_idx(j, k);
      double r = g.rho_bar * g.e3i * (g.gi.tt + 1.0) * g.h[i];
      r -= g.e3i * (fl.rho - g.rho_bar) * g.h[i];
      r -= 2.0 * g.e5i * fl.rho * fl.ul[j] * fl.ul[k];
      r += 3.0 * (g.om - g.hubble) * g.kh[i];
      for (int a = 0; a < 3; ++a) r -= 4.0 * g.om * g.gitx(a) * g.dhv(a, j, k);
      r += 2.0 * g.e2i * dA[i];
      out[i] = r;
    }
  return out;
}

Vec3 velocity_source(const LocalGeometry&, const LocalFluid& fl, const ChristoffelDeviation& cd) {
  Vec3 out{};
  for (int j = 0; j < 3; ++j) {
    double r = -fl.u0 * (fl.u0 - 1.0) * cd.cj00[j];
    for (int a = 0; a < 3; ++a) r -= 2.0 * fl.u0 * fl.u[a] * cd.cj0k[j][a];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r -= fl.u[a] * fl.u[b] * cd.ckij[j][sym_idx(a, b)];
    out[j] = r;
  }
  return out;
}

double density_source(const LocalGeometry& g, const LocalFluid& fl, const FluidGrad& fg,
                      const ChristoffelDeviation& cd, const Vec3& vel_src) {
  double r = 0;
  for (int a = 0; a < 3; ++a) r -= fl.rho * fg.du[a][a];

  double s = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += fl.ul[a] * fl.u[b] * fg.du[b][a];
  r -= fl.rho / (fl.ul0 * fl.u0) * s;

  s = 0;
  for (int a = 0; a < 3; ++a) s += fl.ul[a] * fl.u[a];
  r -= 2.0 * g.om * fl.rho / fl.ul0 * s;

  s = 0;
  for (int a = 0; a < 3; ++a) s += fl.ul[a] * cd.cj00[a];
  r -= fl.rho / fl.ul0 * s;

  s = 0;
  for (int a = 0; a < 3; ++a) s += fl.ul[a] * vel_src[a];
  r += fl.rho / (fl.ul0 * fl.u0) * s;

  double c0 = cd.c000;  // Delta^al_{al 0}
  for (int a = 0; a < 3; ++a) c0 += cd.cj0k[a][a];
  s = c0 * fl.u0;
  for (int j = 0; j < 3; ++j) {
    double cj = cd.c0j0[j];  // Delta^al_{al j}
    for (int a = 0; a < 3; ++a) cj += cd.ckij[a][sym_idx(a, j)];
    s += cj * fl.u[j];
  }
  r -= fl.rho * s;

  s = g.k00() * fl.u0 * fl.u0;
  for (int a = 0; a < 3; ++a) s += 2.0 * g.k0(a) * fl.u[a] * fl.u0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      s += (g.e2 * g.dthv(a, b) + 2.0 * g.om * g.gsp(a, b)) * fl.u[a] * fl.u[b];
  r += fl.rho / (2.0 * fl.ul0) * s;

  return r;
}

}  // namespace tordust
