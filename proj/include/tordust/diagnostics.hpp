#pragma once

#include <array>
#include <string>
#include <vector>

#include "tordust/background.hpp"
#include "tordust/fields.hpp"
#include "tordust/grid.hpp"

namespace tordust {

struct EnergyPair {
  double gamma = 0;
  double delta = 0;
};

// Weight exponents and quadratic-form constants of the norm/energy hierarchy.
// The defaults pick gamma so the mixed v*dtv term drops from the time
// derivative of each block and delta = beta + gamma*alpha; the h-block pair
// must stay (0,0).
struct NormConfig {
  double q = 0.1;          // in (0, 1/8]
  int sobolev_order = 3;   // spatial Sobolev order of the below-top norms
  EnergyPair g00{1.0, 11.0};
  EnergyPair g0s{2.0 / 3.0, 4.0};
  EnergyPair h{0.0, 0.0};
  // same blocks for the transport-differentiated fields (alpha shifted by 2)
  EnergyPair du_g00{1.0, 13.0};
  EnergyPair du_g0s{2.0 / 3.0, 16.0 / 3.0};
  EnergyPair du_h{0.0, 0.0};
};

// One diagnostics sample.  Norm entries are 1-homogeneous in the perturbation,
// energy entries are square roots of quadratic forms.
struct DiagnosticsRecord {
  double t = 0;

  double s_g00 = 0, s_du_g00 = 0, se_g00 = 0;
  double s_g0s = 0, s_du_g0s = 0, se_g0s = 0;
  double s_h = 0, s_du_dh = 0, se_h = 0;
  double s_u = 0, s_du_u = 0, s_u_top = 0;
  double s_rho = 0, s_du_rho = 0;
  double s_g = 0, s_du_g = 0, se = 0;
  double s_below_top = 0, s_du_below_top = 0, s_total = 0;

  double e_g00 = 0, e_du_g00 = 0;
  double e_g0s = 0, e_du_g0s = 0;
  double e_h_low = 0, e_dh = 0, e_du_dh = 0;
  double e_g = 0, e_du_g = 0;
  double e_u = 0, e_u_top = 0, e_rho = 0;
  double e_below_top = 0, e_total = 0;

  double gauge_resid_max = 0;
  double du_comm = 0;      // first-order transport/space commutator magnitude
  double min_eig_h = 0;    // smallest eigenvalue of h_jk over the grid
  double min_eig_g = 0;    // = e^{2 Omega} * min_eig_h
  double max_g00 = 0;
  bool non_coercive = false;  // g^00 > -1/2 somewhere
  int breakdown = 0;          // scenario exit code, 0 while healthy
};

// u^0 * ft + u^a d_a f, with u^0 recomputed from the normalization.  ft is the
// caller-known time derivative of f.
Field du_apply(const Grid3& grid, const Background& bg, const FieldState& s, const Field& f,
               const Field& ft);

// One scalar quadratic block: 1/2 integral of
//   -g^00 vt^2 + g^ab dv_a dv_b - 2 gamma H g^00 v vt + delta H^2 v^2
// with the pointwise inverse-metric fields supplied by the caller.
double building_block_energy_sq(const Grid3& grid, const Field& g00_inv,
                                const std::array<Field, 6>& gsp_inv, double hubble,
                                const EnergyPair& c, const Field& v, const Field& vt,
                                const std::array<Field, 3>& dv);

// Norm entries only (plus t); energies fill an existing record.
DiagnosticsRecord compute_norms(const Grid3& grid, const Background& bg, const FieldState& s,
                                const NormConfig& cfg);
void compute_energies(const Grid3& grid, const Background& bg, const FieldState& s,
                      const NormConfig& cfg, DiagnosticsRecord& rec);

// Full sample: norms, energies, gauge residual, commutator report, health.
DiagnosticsRecord compute_record(const Grid3& grid, const Background& bg, const FieldState& s,
                                 const NormConfig& cfg);

struct NormEnergyRatio {
  std::string name;
  double norm = 0;
  double energy = 0;
  double ratio = 0;
  bool defined = false;  // false when both sides sit at roundoff
};

std::vector<NormEnergyRatio> norm_energy_ratio(const DiagnosticsRecord& rec);

struct DecayFit {
  double exponent = 0;
  double residual = 0;  // rms misfit of log(value) about the line
  int samples = 0;
};

// Least-squares exponent of a positive series over [t_a, t_b]; throws
// invalid_argument on fewer than 8 samples or non-positive values.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, double t_a,
                   double t_b);

// CSV schema: fixed column order, one line per record, no trailing newline.
std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& rec);

}  // namespace tordust
