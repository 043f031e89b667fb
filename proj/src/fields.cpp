#include "tordust/util.hpp"

#include "tordust/fields.hpp"

#include <cmath>

#include "tordust/errors.hpp"

namespace tordust {

double sym3_det(const Sym3& s) {
  const double a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5];
  return a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
}

bool sym3_inverse(const Sym3& s, Sym3& out) {
  const double det = sym3_det(s);
  if (!(std::fabs(det) > 1e-300)) return false;
  const double a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5];
  const double inv = 1.0 / det;
  out[0] = (d * f - e * e) * inv;
  out[1] = (c * e - b * f) * inv;
  out[2] = (b * e - c * d) * inv;
  out[3] = (a * f - c * c) * inv;
  out[4] = (b * c - a * e) * inv;
  out[5] = (a * d - b * b) * inv;
  return true;
}

bool sym3_positive_definite(const Sym3& s) {
  const double a = s[0], b = s[1], d = s[3];
  if (!(a > 0)) return false;
  if (!(a * d - b * b > 0)) return false;
  return sym3_det(s) > 0;
}

double sym3_min_eigenvalue(const Sym3& s) {
  // trigonometric closed form for the symmetric 3x3 eigenproblem
  const double a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5];
  const double q = (a + d + f) / 3.0;
  const double aa = a - q, dd = d - q, ff = f - q;
  const double p2 = aa * aa + dd * dd + ff * ff + 2.0 * (b * b + c * c + e * e);
  if (p2 <= 0) return q;
  const double p = std::sqrt(p2 / 6.0);
  // r = det((A - q I)/p) / 2, clamped against roundoff
  const double ba = aa / p, bd = dd / p, bf = ff / p;
  const double bb = b / p, bc = c / p, be = e / p;
  double r = (ba * (bd * bf - be * be) - bb * (bb * bf - be * bc) + bc * (bb * be - bd * bc)) / 2.0;
  r = std::fmax(-1.0, std::fmin(1.0, r));
  const double phi = std::acos(r) / 3.0;
  // smallest root of the shifted characteristic polynomial
  return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t SplitMix64::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::array<double, 2> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrCode::invalid_argument, "line_fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-300) fail(ErrCode::invalid_argument, "line_fit degenerate abscissae");
  const double b = (n * sxy - sx * sy) / denom;
  const double a = (sy - b * sx) / n;
  return {a, b};
}


FieldState make_flrw_state(const Grid3& grid, double rho_bar) {
  FieldState s;
  s.t = 0;
  s.g00 = grid.make_field(-1.0);
  s.k00 = grid.make_field();
  s.rho = grid.make_field(rho_bar);
  for (int j = 0; j < 3; ++j) {
    s.g0[j] = grid.make_field();
    s.k0[j] = grid.make_field();
    s.u[j] = grid.make_field();
  }
  for (int i = 0; i < 6; ++i) {
    s.h[i] = grid.make_field(i == 0 || i == 3 || i == 5 ? 1.0 : 0.0);
    s.kh[i] = grid.make_field();
  }
  return s;
}

std::array<std::string_view, kNumFields> field_names() {
  return {"g00", "g01", "g02", "g03", "h11", "h12", "h13", "h22", "h23", "h33",
          "k00", "k01", "k02", "k03", "kh11", "kh12", "kh13", "kh22", "kh23", "kh33",
          "rho", "u1", "u2", "u3"};
}

std::array<Field*, kNumFields> field_list(FieldState& s) {
  return {&s.g00, &s.g0[0], &s.g0[1], &s.g0[2], &s.h[0], &s.h[1], &s.h[2], &s.h[3], &s.h[4],
          &s.h[5], &s.k00, &s.k0[0], &s.k0[1], &s.k0[2], &s.kh[0], &s.kh[1], &s.kh[2], &s.kh[3],
          &s.kh[4], &s.kh[5], &s.rho, &s.u[0], &s.u[1], &s.u[2]};
}

std::array<const Field*, kNumFields> field_list(const FieldState& s) {
  return {&s.g00, &s.g0[0], &s.g0[1], &s.g0[2], &s.h[0], &s.h[1], &s.h[2], &s.h[3], &s.h[4],
          &s.h[5], &s.k00, &s.k0[0], &s.k0[1], &s.k0[2], &s.kh[0], &s.kh[1], &s.kh[2], &s.kh[3],
          &s.kh[4], &s.kh[5], &s.rho, &s.u[0], &s.u[1], &s.u[2]};
}

bool all_finite(const FieldState& s) {
  for (const Field* f : field_list(s))
    for (double v : *f)
      if (!std::isfinite(v)) return false;
  return std::isfinite(s.t);
}

}  // namespace tordust
