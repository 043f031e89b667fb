#pragma once

#include <vector>

namespace tordust {

struct BackgroundParams {
  double lambda = 3.0;   // cosmological constant, > 0
  double rho_bar = 0.0;  // homogeneous dust density, >= 0
};

// Snapshot of the homogeneous solution at one time.
struct BackgroundPoint {
  double t = 0;
  double hubble = 0;     // H = sqrt(lambda/3)
  double a = 1;          // scale factor, a(0) = 1
  double log_a = 0;      // Omega(t) = ln a
  double omega = 0;      // a'/a
  double omega_dot = 0;  // = -rho_bar/2 * a^-3
  double rho_bar = 0;

  // e^{c * Omega}; weights use small |c| so double precision is fine here
  double exp_om(double c) const;
};

// Closed-form attractor background.  a(t) solves (a'/a)^2 = H^2 + rho_bar/(3 a^3),
// evaluated through a log-rewritten expression in long double so that late times
// (H t >> 1) keep full relative accuracy.
class Background {
 public:
  explicit Background(BackgroundParams p);

  BackgroundPoint at(double t) const;
  double hubble() const { return hubble_; }
  double lambda() const { return params_.lambda; }
  double rho_bar() const { return params_.rho_bar; }
  const BackgroundParams& params() const { return params_; }

 private:
  BackgroundParams params_;
  double hubble_;
  long double s_;  // sqrt(rho_bar/lambda + 1)
};

// Independent cross-check: integrate a' = a*sqrt(H^2 + rho_bar/(3a^3)) from a(0)=1
// with a fixed-step embedded RK45 pair; throws step_too_large if the local error
// estimate of any step exceeds tol.
double background_ode_integrate(const BackgroundParams& p, double t_final, double dt, double tol);

// Envelope checks on a time grid: returns the worst signed margin (>= 0 means all hold).
//   (1/2)^{2/3} e^{Ht} <= a <= A e^{Ht},  A = ((s+1)/2)^{2/3}
//   H <= omega <= sqrt(H^2 + rho_bar/3),  omega_dot <= 0
//   0 <= omega - H <= (2 rho_bar/(3H)) e^{-3Ht}
double background_bounds_margin(const BackgroundParams& p, const std::vector<double>& times);

}  // namespace tordust
