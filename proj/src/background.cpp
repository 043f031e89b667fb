#include "tordust/background.hpp"

#include <cmath>

#include "tordust/errors.hpp"

namespace tordust {

double BackgroundPoint::exp_om(double c) const { return std::exp(c * log_a); }

Background::Background(BackgroundParams p) : params_(p) {
  if (!(p.lambda > 0) || !std::isfinite(p.lambda))
    fail(ErrCode::invalid_argument, "background: lambda must be positive");
  if (!(p.rho_bar >= 0) || !std::isfinite(p.rho_bar))
    fail(ErrCode::invalid_argument, "background: rho_bar must be >= 0");
  hubble_ = std::sqrt(p.lambda / 3.0);
  s_ = sqrtl(static_cast<long double>(p.rho_bar) / static_cast<long double>(p.lambda) + 1.0L);
}

BackgroundPoint Background::at(double t) const {
  if (!(t >= 0) || !std::isfinite(t)) fail(ErrCode::invalid_argument, "background: t must be >= 0");
  BackgroundPoint out;
  out.t = t;
  out.hubble = hubble_;
  out.rho_bar = params_.rho_bar;

  // a^{3/2} = sinh(x) s + cosh(x), x = 3Ht/2.  Rewritten as
  //   (3/2) Omega = x + ln((s+1)/2) + log1p(((1-s)/(1+s)) e^{-2x})
  // which stays accurate for all x >= 0.
  const long double x = 1.5L * static_cast<long double>(hubble_) * static_cast<long double>(t);
  long double log_a32;
  if (t == 0) {
    log_a32 = 0.0L;
  } else {
    log_a32 = x + logl((s_ + 1.0L) / 2.0L) + log1pl(((1.0L - s_) / (1.0L + s_)) * expl(-2.0L * x));
  }
  const long double log_a = (2.0L / 3.0L) * log_a32;
  const long double a3inv = expl(-3.0L * log_a);
  const long double h2 = static_cast<long double>(hubble_) * static_cast<long double>(hubble_);
  const long double om = sqrtl(h2 + (static_cast<long double>(params_.rho_bar) / 3.0L) * a3inv);

  out.log_a = static_cast<double>(log_a);
  out.a = static_cast<double>(expl(log_a));
  out.omega = static_cast<double>(om);
  out.omega_dot = static_cast<double>(-0.5L * static_cast<long double>(params_.rho_bar) * a3inv);
  return out;
}

namespace {

// Cash-Karp embedded RK45 tableau for the scalar ODE a' = f(a).
double ck_step(double a, double dt, double h2, double rho_bar, double& err) {
  auto f = [h2, rho_bar](double y) { return y * std::sqrt(h2 + rho_bar / (3.0 * y * y * y)); };
  const double k1 = f(a);
  const double k2 = f(a + dt * (k1 / 5.0));
  const double k3 = f(a + dt * (3.0 * k1 + 9.0 * k2) / 40.0);
  const double k4 = f(a + dt * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
  const double k5 = f(a + dt * (-11.0 * k1 / 54.0 + 2.5 * k2 - 70.0 * k3 / 27.0 + 35.0 * k4 / 27.0));
  const double k6 = f(a + dt * (1631.0 * k1 / 55296.0 + 175.0 * k2 / 512.0 + 575.0 * k3 / 13824.0 +
                                44275.0 * k4 / 110592.0 + 253.0 * k5 / 4096.0));
  const double y5 = a + dt * (37.0 * k1 / 378.0 + 250.0 * k3 / 621.0 + 125.0 * k4 / 594.0 +
                              512.0 * k6 / 1771.0);
  const double y4 = a + dt * (2825.0 * k1 / 27648.0 + 18575.0 * k3 / 48384.0 +
                              13525.0 * k4 / 55296.0 + 277.0 * k5 / 14336.0 + 0.25 * k6);
  err = std::fabs(y5 - y4);
  return y5;
}

}  // namespace

double background_ode_integrate(const BackgroundParams& p, double t_final, double dt, double tol) {
  Background bg(p);  // validates params
  if (!(t_final >= 0) || !(dt > 0)) fail(ErrCode::invalid_argument, "ode: bad t_final/dt");
  const double h2 = bg.hubble() * bg.hubble();
  double a = 1.0, t = 0.0;
  while (t < t_final) {
    const double step = std::min(dt, t_final - t);
    double err = 0.0;
    const double next = ck_step(a, step, h2, p.rho_bar, err);
    if (err > tol * std::max(1.0, std::fabs(a)))
      fail(ErrCode::step_too_large, "ode: local error above tolerance, reduce dt");
    a = next;
    t += step;
  }
  return a;
}

double background_bounds_margin(const BackgroundParams& p, const std::vector<double>& times) {
  Background bg(p);
  const double h = bg.hubble();
  // log-space envelopes keep the comparison meaningful when a ~ e^{Ht} is huge
  const double log_upper = (2.0 / 3.0) * std::log(0.5 * (std::sqrt(p.rho_bar / p.lambda + 1.0) + 1.0));
  const double log_lower = (2.0 / 3.0) * std::log(0.5);
  const double omega_cap = std::sqrt(h * h + p.rho_bar / 3.0);
  double margin = 1e300;
  for (double t : times) {
    const auto b = bg.at(t);
    margin = std::min(margin, b.log_a - (h * t + log_lower));
    margin = std::min(margin, (h * t + log_upper) - b.log_a);
    margin = std::min(margin, (b.omega - h) / omega_cap);
    margin = std::min(margin, (omega_cap - b.omega) / omega_cap);
    margin = std::min(margin, -b.omega_dot);
    if (p.rho_bar > 0) {
      const double decay_cap = (2.0 * p.rho_bar / (3.0 * h)) * std::exp(-3.0 * h * t);
      margin = std::min(margin, (decay_cap - (b.omega - h)) / decay_cap);
    }
  }
  return margin;
}

}  // namespace tordust
