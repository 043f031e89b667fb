#include "tordust/mode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tordust/errors.hpp"
#include "tordust/rhs.hpp"

namespace tordust {
namespace {

// sampled cos/sin carrier of one wavevector
struct ModeBasis {
  Field c, s;
  bool zero = false;
};

ModeBasis make_basis(const Grid3& g, const std::array<int, 3>& k) {
  ModeBasis b;
  b.zero = (k[0] == 0 && k[1] == 0 && k[2] == 0);
  b.c = g.make_field();
  b.s = g.make_field();
  for (int ix = 0; ix < g.n(); ++ix)
    for (int iy = 0; iy < g.n(); ++iy)
      for (int iz = 0; iz < g.n(); ++iz) {
        const double ph = k[0] * g.coord(ix) + k[1] * g.coord(iy) + k[2] * g.coord(iz);
        const std::size_t i = g.index(ix, iy, iz);
        b.c[i] = std::cos(ph);
        b.s[i] = std::sin(ph);
      }
  return b;
}

void check_band(const Grid3& g, const std::array<int, 3>& k) {
  for (int a = 0; a < 3; ++a)
    if (std::abs(k[a]) > g.dealias_cut())
      fail(ErrCode::invalid_argument, "mode wavevector outside the dealias band");
}

std::complex<double> project_onto(const Grid3& g, const ModeBasis& b, const Field& f) {
  double pc = 0, ps = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    pc += f[i] * b.c[i];
    ps += f[i] * b.s[i];
  }
  const double inv = 1.0 / static_cast<double>(g.size());
  if (b.zero) return {pc * inv, 0.0};
  return {2.0 * pc * inv, -2.0 * ps * inv};
}

double sup_amp(const ModeState& m) {
  double worst = 0;
  for (const auto& a : m.amp) worst = std::max(worst, std::abs(a));
  return worst;
}

void add_mode(const Grid3& g, const ModeBasis& b, FieldState& s, const ModeState& m,
              double scale) {
  auto fl = field_list(s);
  for (int f = 0; f < kNumFields; ++f) {
    const double re = scale * m.amp[f].real();
    const double im = scale * m.amp[f].imag();
    if (re == 0 && im == 0) continue;
    Field& dst = *fl[f];
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += re * b.c[i] - im * b.s[i];
  }
}

ModeState action_on_grid(const Grid3& g, const ModeBasis& b, const Background& bg, double t,
                         const ModeState& m, double eps) {
  ModeState rate;
  rate.wavevector = m.wavevector;
  const double scale = sup_amp(m);
  if (scale == 0) return rate;

  FieldState plus = make_flrw_state(g, bg.rho_bar());
  plus.t = t;
  FieldState minus = plus;
  add_mode(g, b, plus, m, eps / scale);
  add_mode(g, b, minus, m, -eps / scale);

  FieldState rp, rm;
  assemble_rates(g, bg, plus, rp);
  assemble_rates(g, bg, minus, rm);

  const auto lp = field_list(rp);
  const auto lm = field_list(rm);
  Field diff = g.make_field();
  const double back = scale / (2.0 * eps);
  for (int f = 0; f < kNumFields; ++f) {
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = (*lp[f])[i] - (*lm[f])[i];
    rate.amp[f] = back * project_onto(g, b, diff);
  }
  return rate;
}

}  // namespace

int mode_index(std::string_view field_name) {
  const auto names = field_names();
  for (int f = 0; f < kNumFields; ++f)
    if (names[f] == field_name) return f;
  return -1;
}

int minimal_grid_n(const std::array<int, 3>& wavevector) {
  int m = 0;
  for (int a = 0; a < 3; ++a) m = std::max(m, std::abs(wavevector[a]));
  int n = 8;
  while (n / 3 < m) n *= 2;
  return n;
}

FieldState realize_mode(const Grid3& grid, const Background& bg, double t, const ModeState& m,
                        double scale) {
  check_band(grid, m.wavevector);
  FieldState s = make_flrw_state(grid, bg.rho_bar());
  s.t = t;
  const ModeBasis b = make_basis(grid, m.wavevector);
  add_mode(grid, b, s, m, scale);
  return s;
}

ModeState project_mode(const Grid3& grid, const Background& bg, const FieldState& s,
                       const std::array<int, 3>& wavevector) {
  check_band(grid, wavevector);
  const ModeBasis b = make_basis(grid, wavevector);
  const FieldState base = make_flrw_state(grid, bg.rho_bar());
  ModeState m;
  m.wavevector = wavevector;
  const auto ls = field_list(s);
  const auto lb = field_list(base);
  Field d = grid.make_field();
  for (int f = 0; f < kNumFields; ++f) {
    for (std::size_t i = 0; i < grid.size(); ++i) d[i] = (*ls[f])[i] - (*lb[f])[i];
    m.amp[f] = project_onto(grid, b, d);
  }
  return m;
}

ModeState jacobian_action(const Background& bg, double t, const ModeState& m, double eps) {
  if (!(eps > 0)) fail(ErrCode::invalid_argument, "jacobian_action: eps must be positive");
  const Grid3 grid(minimal_grid_n(m.wavevector));
  const ModeBasis b = make_basis(grid, m.wavevector);
  return action_on_grid(grid, b, bg, t, m, eps);
}

std::vector<ModeSample> evolve_mode(const BackgroundParams& params, const ModeState& mode0,
                                    double t_final, double tol) {
  if (!(t_final > 0)) fail(ErrCode::invalid_argument, "evolve_mode: t_final must be positive");
  if (!(tol > 0)) fail(ErrCode::invalid_argument, "evolve_mode: tol must be positive");

  const Background bg(params);
  const Grid3 grid(minimal_grid_n(mode0.wavevector));
  const ModeBasis basis = make_basis(grid, mode0.wavevector);

  constexpr int kDim = 2 * kNumFields;
  using Vec = std::array<double, kDim>;
  auto pack = [](const ModeState& m) {
    Vec y;
    for (int f = 0; f < kNumFields; ++f) {
      y[2 * f] = m.amp[f].real();
      y[2 * f + 1] = m.amp[f].imag();
    }
    return y;
  };
  auto unpack = [&mode0](const Vec& y) {
    ModeState m;
    m.wavevector = mode0.wavevector;
    for (int f = 0; f < kNumFields; ++f) m.amp[f] = {y[2 * f], y[2 * f + 1]};
    return m;
  };
  auto rhs = [&](double t, const Vec& y) { return pack(action_on_grid(grid, basis, bg, t, unpack(y), 1e-6)); };

  // Dormand-Prince 5(4) pair
  static constexpr double kC[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1, 1};
  static constexpr double kA[7][6] = {
      {},
      {1. / 5},
      {3. / 40, 9. / 40},
      {44. / 45, -56. / 15, 32. / 9},
      {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
      {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
      {35. / 384, 0, 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84}};
  static constexpr double kB4[7] = {5179. / 57600,    0,          7571. / 16695, 393. / 640,
                                    -92097. / 339200, 187. / 2100, 1. / 40};

  std::vector<ModeSample> series;
  Vec y = pack(mode0);
  double t = 0;
  series.push_back({t, unpack(y)});

  double y_scale = 0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  if (y_scale == 0) {
    series.push_back({t_final, unpack(y)});
    return series;
  }

  double dt = std::min(0.01, t_final / 10.0);
  const double dt_floor = 1e-12 * std::max(1.0, t_final);
  const double tiny = 1e-12 * std::max(1.0, std::abs(t_final));

  for (long iter = 0; iter < 2000000; ++iter) {
    if (t + dt > t_final) dt = t_final - t;

    std::array<Vec, 7> k;
    k[0] = rhs(t, y);
    for (int st = 1; st < 7; ++st) {
      Vec ys = y;
      for (int j = 0; j < st; ++j) {
        if (kA[st][j] == 0) continue;
        for (int i = 0; i < kDim; ++i) ys[i] += dt * kA[st][j] * k[j][i];
      }
      k[st] = rhs(t + kC[st] * dt, ys);
    }

    // fifth-order solution uses the last tableau row; the embedded fourth-order
    // result only feeds the error estimate
    Vec y5 = y;
    for (int i = 0; i < kDim; ++i) {
      double acc5 = 0, acc4 = 0;
      for (int st = 0; st < 6; ++st) acc5 += kA[6][st] * k[st][i];
      for (int st = 0; st < 7; ++st) acc4 += kB4[st] * k[st][i];
      y5[i] = y[i] + dt * acc5;
      k[0][i] = dt * (acc5 - acc4);  // reuse slot 0 as the error vector
    }

    double sup = y_scale;
    for (int i = 0; i < kDim; ++i) sup = std::max(sup, std::abs(y5[i]));
    double err = 0;
    for (int i = 0; i < kDim; ++i) {
      const double sc = tol * (sup + std::max(std::abs(y[i]), std::abs(y5[i])));
      err = std::max(err, std::abs(k[0][i]) / sc);
    }

    if (err <= 1.0) {
      t += dt;
      y = y5;
      y_scale = 0;
      for (double v : y) y_scale = std::max(y_scale, std::abs(v));
      series.push_back({t, unpack(y)});
      if (t >= t_final - tiny) return series;
    }
    const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    dt *= std::clamp(grow, 0.2, 5.0);
    if (dt < dt_floor)
      fail(ErrCode::tolerance_not_met, "evolve_mode: step size underflow at t = " + std::to_string(t));
  }
  fail(ErrCode::tolerance_not_met, "evolve_mode: step budget exhausted");
}

}  // namespace tordust
