#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace tordust {

// Symmetric 3x3 component storage order: 11, 12, 13, 22, 23, 33.
constexpr int sym_idx(int j, int k) {
  return (j <= k) ? j * (5 - j) / 2 + k : k * (5 - k) / 2 + j;
}

using Sym3 = std::array<double, 6>;
using Vec3 = std::array<double, 3>;

inline double sym_get(const Sym3& s, int j, int k) { return s[sym_idx(j, k)]; }

double sym3_det(const Sym3& s);
// Inverse of a symmetric 3x3 matrix; returns false if |det| is below tiny.
bool sym3_inverse(const Sym3& s, Sym3& out);
// Smallest eigenvalue via the closed-form symmetric solver.
double sym3_min_eigenvalue(const Sym3& s);
// True if positive definite (leading principal minors).
bool sym3_positive_definite(const Sym3& s);

// FNV-1a 64-bit, used for config identity.
std::uint64_t fnv1a64(const void* data, std::size_t len);
inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// splitmix64; deterministic across platforms, used for perturbation draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  // uniform in [0, 1)
  double next_double();
  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

// Least-squares line fit y ~ a + b*x; returns {a, b}.
std::array<double, 2> line_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tordust
