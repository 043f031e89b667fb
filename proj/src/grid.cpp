#include "tordust/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

#include "tordust/errors.hpp"

namespace tordust {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid3::Grid3(int n) : n_(n) {
  if (n < 8 || !power_of_two(n)) fail(ErrCode::invalid_argument, "grid: n must be a power of two >= 8");
  size_ = static_cast<std::size_t>(n) * n * n;
  spec_size_ = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  dx_ = 2.0 * M_PI / n;

  auto* re = static_cast<double*>(fftw_malloc(sizeof(double) * size_));
  auto* cx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec_size_));
  if (!re || !cx) fail(ErrCode::invalid_argument, "grid: allocation failed");
  // FFTW_ESTIMATE keeps planning deterministic across processes
  plan_fwd_ = fftw_plan_dft_r2c_3d(n, n, n, re, cx, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_3d(n, n, n, cx, re, FFTW_ESTIMATE);
  anchor_real_ = re;
  anchor_cplx_ = cx;
  if (!plan_fwd_ || !plan_inv_) fail(ErrCode::invalid_argument, "grid: planning failed");
}

Grid3::~Grid3() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  if (anchor_real_) fftw_free(anchor_real_);
  if (anchor_cplx_) fftw_free(anchor_cplx_);
}

void Grid3::forward(const Field& f, Spectrum& out) const {
  if (f.size() != size_) fail(ErrCode::invalid_argument, "grid: field size mismatch");
  out.resize(spec_size_);
  auto* re = static_cast<double*>(fftw_malloc(sizeof(double) * size_));
  auto* cx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec_size_));
  std::memcpy(re, f.data(), sizeof(double) * size_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), re, cx);
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < spec_size_; ++i)
    out[i] = std::complex<double>(cx[i][0] * scale, cx[i][1] * scale);
  fftw_free(re);
  fftw_free(cx);
}

void Grid3::inverse(const Spectrum& s, Field& out) const {
  if (s.size() != spec_size_) fail(ErrCode::invalid_argument, "grid: spectrum size mismatch");
  out.resize(size_);
  auto* re = static_cast<double*>(fftw_malloc(sizeof(double) * size_));
  auto* cx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec_size_));
  for (std::size_t i = 0; i < spec_size_; ++i) {
    cx[i][0] = s[i].real();
    cx[i][1] = s[i].imag();
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_), cx, re);
  std::memcpy(out.data(), re, sizeof(double) * size_);
  fftw_free(re);
  fftw_free(cx);
}

Spectrum Grid3::forward(const Field& f) const {
  Spectrum s;
  forward(f, s);
  return s;
}

Field Grid3::inverse(const Spectrum& s) const {
  Field f;
  inverse(s, f);
  return f;
}

void Grid3::apply_derivative(const Spectrum& in, int ax, int ay, int az, Spectrum& out) const {
  if (in.size() != spec_size_) fail(ErrCode::invalid_argument, "grid: spectrum size mismatch");
  out.resize(spec_size_);
  const int half = n_ / 2;
  std::size_t idx = 0;
  for (int ix = 0; ix < n_; ++ix) {
    const int kx = freq(ix);
    for (int iy = 0; iy < n_; ++iy) {
      const int ky = freq(iy);
      for (int iz = 0; iz <= half; ++iz, ++idx) {
        const int kz = iz;  // half-complex axis holds 0..n/2
        if ((ax && kx == -half) || (ay && ky == -half) || (az && kz == half)) {
          out[idx] = 0.0;
          continue;
        }
        std::complex<double> m(1.0, 0.0);
        for (int r = 0; r < ax; ++r) m *= std::complex<double>(0.0, kx);
        for (int r = 0; r < ay; ++r) m *= std::complex<double>(0.0, ky);
        for (int r = 0; r < az; ++r) m *= std::complex<double>(0.0, kz);
        out[idx] = in[idx] * m;
      }
    }
  }
}

Field Grid3::derivative(const Field& f, int ax, int ay, int az) const {
  Spectrum s = forward(f), d;
  apply_derivative(s, ax, ay, az, d);
  return inverse(d);
}

Field Grid3::ddx(const Field& f, int axis) const {
  return derivative(f, axis == 0 ? 1 : 0, axis == 1 ? 1 : 0, axis == 2 ? 1 : 0);
}

void Grid3::dealias(Spectrum& s) const {
  if (s.size() != spec_size_) fail(ErrCode::invalid_argument, "grid: spectrum size mismatch");
  const int cut = dealias_cut();
  const int half = n_ / 2;
  std::size_t idx = 0;
  for (int ix = 0; ix < n_; ++ix) {
    const int kx = std::abs(freq(ix));
    for (int iy = 0; iy < n_; ++iy) {
      const int ky = std::abs(freq(iy));
      for (int iz = 0; iz <= half; ++iz, ++idx) {
        if (kx > cut || ky > cut || iz > cut) s[idx] = 0.0;
      }
    }
  }
}

void Grid3::dealias_field(Field& f) const {
  Spectrum s = forward(f);
  dealias(s);
  inverse(s, f);
}

double Grid3::integral(const Field& f) const {
  double acc = 0.0;
  for (double v : f) acc += v;
  return acc * dx_ * dx_ * dx_;
}

double Grid3::l2_norm(const Field& f) const {
  double acc = 0.0;
  for (double v : f) acc += v * v;
  return std::sqrt(acc * dx_ * dx_ * dx_);
}

double Grid3::max_abs(const Field& f) const {
  double m = 0.0;
  for (double v : f) m = std::fmax(m, std::fabs(v));
  return m;
}

namespace {
constexpr double kTwoPiCubed = 248.05021344239853;  // (2*pi)^3
}

double Grid3::l2_norm_spectral(const Spectrum& s) const {
  if (s.size() != spec_size_) fail(ErrCode::invalid_argument, "grid: spectrum size mismatch");
  double acc = 0.0;
  const int half = n_ / 2;
  std::size_t idx = 0;
  for (int ix = 0; ix < n_; ++ix)
    for (int iy = 0; iy < n_; ++iy)
      for (int iz = 0; iz <= half; ++iz, ++idx) {
        const double w = (iz == 0 || iz == half) ? 1.0 : 2.0;
        acc += w * std::norm(s[idx]);
      }
  return std::sqrt(acc * kTwoPiCubed);
}

double Grid3::sobolev_norm(const Spectrum& s, int order) const {
  if (s.size() != spec_size_) fail(ErrCode::invalid_argument, "grid: spectrum size mismatch");
  if (order < 0) fail(ErrCode::invalid_argument, "grid: negative order");
  const auto alphas = multi_indices(order);
  const int half = n_ / 2;
  double acc = 0.0;
  std::size_t idx = 0;
  for (int ix = 0; ix < n_; ++ix) {
    const double kx2 = static_cast<double>(freq(ix)) * freq(ix);
    for (int iy = 0; iy < n_; ++iy) {
      const double ky2 = static_cast<double>(freq(iy)) * freq(iy);
      for (int iz = 0; iz <= half; ++iz, ++idx) {
        const double kz2 = static_cast<double>(iz) * iz;
        double mult = 0.0;
        for (const auto& a : alphas) {
          double term = 1.0;
          for (int r = 0; r < a[0]; ++r) term *= kx2;
          for (int r = 0; r < a[1]; ++r) term *= ky2;
          for (int r = 0; r < a[2]; ++r) term *= kz2;
          mult += term;
        }
        const double w = (iz == 0 || iz == half) ? 1.0 : 2.0;
        acc += w * mult * std::norm(s[idx]);
      }
    }
  }
  return std::sqrt(acc * kTwoPiCubed);
}

double Grid3::sobolev_norm(const Field& f, int order) const {
  return sobolev_norm(forward(f), order);
}

double Grid3::cb_bound(const Spectrum& s, int order) const {
  if (s.size() != spec_size_) fail(ErrCode::invalid_argument, "grid: spectrum size mismatch");
  const int half = n_ / 2;
  double acc = 0.0;
  std::size_t idx = 0;
  for (int ix = 0; ix < n_; ++ix) {
    const double kx2 = static_cast<double>(freq(ix)) * freq(ix);
    for (int iy = 0; iy < n_; ++iy) {
      const double ky2 = static_cast<double>(freq(iy)) * freq(iy);
      for (int iz = 0; iz <= half; ++iz, ++idx) {
        const double k2 = kx2 + ky2 + static_cast<double>(iz) * iz;
        const double w = (iz == 0 || iz == half) ? 1.0 : 2.0;
        double mult = 1.0 + std::sqrt(k2);
        if (order >= 2) mult += k2;
        acc += w * mult * std::abs(s[idx]);
      }
    }
  }
  return acc;
}

std::vector<std::array<int, 3>> multi_indices(int max_order) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; b <= max_order - a; ++b)
      for (int c = 0; c <= max_order - a - b; ++c) out.push_back({a, b, c});
  return out;
}

}  // namespace tordust
