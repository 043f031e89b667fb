#pragma once

#include <array>
#include <complex>
#include <vector>

namespace tordust {

using Field = std::vector<double>;  // n^3 reals, index (ix*n + iy)*n + iz

// Half-complex spectrum of a real field (r2c layout, n*n*(n/2+1) coefficients,
// normalized so entries are series coefficients of the trigonometric interpolant).
using Spectrum = std::vector<std::complex<double>>;

// Uniform periodic grid on [-pi, pi)^3 with FFT-based derivatives.  Immutable after
// construction; transform calls go through freshly allocated aligned buffers, so a
// const Grid3 may be shared across threads.
class Grid3 {
 public:
  explicit Grid3(int n);  // n a power of two, n >= 8
  ~Grid3();
  Grid3(const Grid3&) = delete;
  Grid3& operator=(const Grid3&) = delete;

  int n() const { return n_; }
  std::size_t size() const { return size_; }
  std::size_t spectral_size() const { return spec_size_; }
  double dx() const { return dx_; }
  double coord(int i) const { return -M_PI + dx_ * i; }
  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * n_ + iz;
  }
  // integer frequency of storage index i along a full axis, in [-n/2, n/2)
  int freq(int i) const { return i < n_ / 2 ? i : i - n_; }
  int dealias_cut() const { return n_ / 3; }

  Field make_field(double fill = 0.0) const { return Field(size_, fill); }

  void forward(const Field& f, Spectrum& out) const;
  void inverse(const Spectrum& s, Field& out) const;  // input left intact
  Spectrum forward(const Field& f) const;
  Field inverse(const Spectrum& s) const;

  // multiply by (ik_x)^ax (ik_y)^ay (ik_z)^az; Nyquist planes are zeroed
  void apply_derivative(const Spectrum& in, int ax, int ay, int az, Spectrum& out) const;
  Field derivative(const Field& f, int ax, int ay, int az) const;
  Field ddx(const Field& f, int axis) const;

  // 2/3-rule mask: zero every coefficient with |k_i| > floor(n/3) on any axis
  void dealias(Spectrum& s) const;
  void dealias_field(Field& f) const;

  double integral(const Field& f) const;  // equal-weight quadrature, exact on band-limited f
  double l2_norm(const Field& f) const;
  double max_abs(const Field& f) const;
  // Parseval evaluation of ||f||_{L^2} from the spectrum
  double l2_norm_spectral(const Spectrum& s) const;
  // || f ||_{H^order}^2 = sum over multi-indices |alpha| <= order of ||d_alpha f||^2,
  // evaluated spectrally with the product multiplier prod_i k_i^{2 alpha_i}
  double sobolev_norm(const Spectrum& s, int order) const;
  double sobolev_norm(const Field& f, int order) const;
  // spectral ell^1 bound on sup|f| + sup|grad f| (+ sup|grad^2 f| if order==2)
  double cb_bound(const Spectrum& s, int order) const;

 private:
  int n_;
  std::size_t size_, spec_size_;
  double dx_;
  void* plan_fwd_ = nullptr;  // fftw_plan, kept opaque here
  void* plan_inv_ = nullptr;
  void* anchor_real_ = nullptr;  // buffers the plans were created with
  void* anchor_cplx_ = nullptr;
};

// all multi-indices (a1,a2,a3) with a1+a2+a3 <= max_order, lexicographic
std::vector<std::array<int, 3>> multi_indices(int max_order);

}  // namespace tordust
