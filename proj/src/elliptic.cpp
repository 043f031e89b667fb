#include "tordust/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "tordust/diagnostics.hpp"
#include "tordust/lorentz.hpp"
#include "tordust/rhs.hpp"
#include "tordust/util.hpp"

namespace tordust {
namespace {

struct PointwiseInverse {
  Field g00i;
  std::array<Field, 3> g0i;
  std::array<Field, 6> gspi;
  Field u0;
};

PointwiseInverse pointwise_inverse(const Grid3& grid, const Background& bg, const FieldState& s) {
  PointwiseInverse pw;
  pw.g00i = grid.make_field();
  for (auto& f : pw.g0i) f = grid.make_field();
  for (auto& f : pw.gspi) f = grid.make_field();
  pw.u0 = grid.make_field();

  const double e2 = bg.at(s.t).exp_om(2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    MetricPoint m;
    m.tt = s.g00[i];
    for (int j = 0; j < 3; ++j) m.tx[j] = s.g0[j][i];
    for (int p = 0; p < 6; ++p) m.sp[p] = e2 * s.h[p][i];
    const InverseMetricPoint gi = invert_metric(m);
    pw.g00i[i] = gi.tt;
    for (int j = 0; j < 3; ++j) pw.g0i[j][i] = gi.tx[j];
    for (int p = 0; p < 6; ++p) pw.gspi[p][i] = gi.sp[p];
    pw.u0[i] = solve_u0(m, Vec3{s.u[0][i], s.u[1][i], s.u[2][i]});
  }
  return pw;
}

const Field& component_field(const FieldState& s, int c) {
  if (c == 0) return s.g00;
  if (c < 4) return s.g0[c - 1];
  return s.h[c - 4];
}

const Field& component_rate(const FieldState& s, int c) {
  if (c == 0) return s.k00;
  if (c < 4) return s.k0[c - 1];
  return s.kh[c - 4];
}

// H^ab at one point, from already-inverted metric values
double coeff_at(const PointwiseInverse& pw, const FieldState& s, double e2, std::size_t i, int a,
                int b) {
  const double u0 = pw.u0[i];
  const double ua = s.u[a][i];
  const double ub = s.u[b][i];
  return e2 * (pw.gspi[sym_idx(a, b)][i] + pw.g00i[i] * ua * ub / (u0 * u0) -
               pw.g0i[a][i] * ub / u0 - pw.g0i[b][i] * ua / u0);
}

Field residual_impl(const Grid3& grid, const Background& bg, const FieldState& s, const Field& v,
                    const Field& vt, const Field& vtt) {
  const PointwiseInverse pw = pointwise_inverse(grid, bg, s);
  const double e2 = bg.at(s.t).exp_om(2.0);

  std::array<Field, 3> dv;
  std::array<Field, 3> dvt;
  std::array<Field, 6> ddv;
  for (int a = 0; a < 3; ++a) {
    dv[a] = grid.ddx(v, a);
    dvt[a] = grid.ddx(vt, a);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      int e[3] = {0, 0, 0};
      ++e[a];
      ++e[b];
      ddv[sym_idx(a, b)] = grid.derivative(v, e[0], e[1], e[2]);
    }

  const Field tr_vt = du_apply(grid, bg, s, vt, vtt);
  std::array<Field, 3> tr_dv;
  for (int a = 0; a < 3; ++a) tr_dv[a] = du_apply(grid, bg, s, dv[a], dvt[a]);

  // operator side: reduced wave operator from its definition plus the two
  // transport corrections; gets the pipeline's single dealias pass
  Field op = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u0 = pw.u0[i];
    double box = pw.g00i[i] * vtt[i];
    for (int a = 0; a < 3; ++a) box += 2.0 * pw.g0i[a][i] * dvt[a][i];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) box += pw.gspi[sym_idx(a, b)][i] * ddv[sym_idx(a, b)][i];
    double acc = e2 * box - e2 * (pw.g00i[i] / u0) * tr_vt[i];
    for (int a = 0; a < 3; ++a) {
      const double coef = pw.g00i[i] * s.u[a][i] / (u0 * u0) - 2.0 * pw.g0i[a][i] / u0;
      acc += e2 * coef * tr_dv[a][i];
    }
    op[i] = acc;
  }
  grid.dealias_field(op);

  Field res = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double lhs = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) lhs += coeff_at(pw, s, e2, i, a, b) * ddv[sym_idx(a, b)][i];
    res[i] = lhs - op[i];
  }
  return res;
}

}  // namespace

EllipticCoefficients elliptic_coefficients(const Grid3& grid, const Background& bg,
                                           const FieldState& s) {
  const PointwiseInverse pw = pointwise_inverse(grid, bg, s);
  const double e2 = bg.at(s.t).exp_om(2.0);
  EllipticCoefficients co;
  for (auto& f : co.hij) f = grid.make_field();
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) co.hij[sym_idx(a, b)][i] = coeff_at(pw, s, e2, i, a, b);
  return co;
}

double elliptic_min_eigenvalue(const Grid3& grid, const EllipticCoefficients& co) {
  double worst = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Sym3 m;
    for (int p = 0; p < 6; ++p) m[p] = co.hij[p][i];
    worst = std::min(worst, sym3_min_eigenvalue(m));
  }
  return worst;
}

Field elliptic_identity_residual(const Grid3& grid, const Background& bg, const FieldState& s,
                                 int component) {
  RhsOptions opt;
  opt.dealias = false;  // vtt participates in an exact cancellation; keep it raw
  const Field vtt = second_time_derivative(grid, bg, s, component, opt);
  return residual_impl(grid, bg, s, component_field(s, component), component_rate(s, component),
                       vtt);
}

Field elliptic_identity_residual(const Grid3& grid, const Background& bg, const FieldState& s,
                                 const Field& v, const Field& vt, const Field& vtt) {
  return residual_impl(grid, bg, s, v, vt, vtt);
}

TopOrderSpatial top_order_spatial(const Grid3& grid, const Background& bg, const FieldState& s,
                                  int component) {
  const Field& v = component_field(s, component);
  const Field& vt = component_rate(s, component);
  RhsOptions opt;
  opt.dealias = false;
  const Field vtt = second_time_derivative(grid, bg, s, component, opt);

  TopOrderSpatial out;
  std::array<Field, 3> dv;
  std::array<Field, 3> dvt;
  for (int a = 0; a < 3; ++a) {
    dv[a] = grid.ddx(v, a);
    dvt[a] = grid.ddx(vt, a);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      int e[3] = {0, 0, 0};
      ++e[a];
      ++e[b];
      out.dd[sym_idx(a, b)] = grid.derivative(v, e[0], e[1], e[2]);
    }

  static constexpr int kSymMult[6] = {1, 2, 2, 1, 2, 1};
  double acc = 0;
  for (int p = 0; p < 6; ++p) {
    const double nn = grid.l2_norm(out.dd[p]);
    acc += kSymMult[p] * nn * nn;
  }
  out.lhs_l2 = std::sqrt(acc);

  const PointwiseInverse pw = pointwise_inverse(grid, bg, s);
  const double e2 = bg.at(s.t).exp_om(2.0);
  const Field tr_vt = du_apply(grid, bg, s, vt, vtt);

  Field box = grid.make_field();
  Field tr_t = grid.make_field();
  std::array<Field, 3> tr_a;
  for (int a = 0; a < 3; ++a) {
    const Field tr = du_apply(grid, bg, s, dv[a], dvt[a]);
    tr_a[a] = grid.make_field();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u0 = pw.u0[i];
      const double coef = pw.g00i[i] * s.u[a][i] / (u0 * u0) - 2.0 * pw.g0i[a][i] / u0;
      tr_a[a][i] = e2 * coef * tr[i];
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double b = pw.g00i[i] * vtt[i];
    for (int a = 0; a < 3; ++a) b += 2.0 * pw.g0i[a][i] * dvt[a][i];
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < 3; ++k) b += pw.gspi[sym_idx(a, k)][i] * out.dd[sym_idx(a, k)][i];
    box[i] = e2 * b;
    tr_t[i] = e2 * (pw.g00i[i] / pw.u0[i]) * tr_vt[i];
  }

  out.rhs_bound = grid.l2_norm(box) + grid.l2_norm(tr_t);
  for (int a = 0; a < 3; ++a) out.rhs_bound += grid.l2_norm(tr_a[a]);
  return out;
}

}  // namespace tordust
