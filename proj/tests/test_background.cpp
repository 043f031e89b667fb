#include "tordust/background.hpp"

#include <cmath>

#include "doctest.h"
#include "tordust/errors.hpp"

using namespace tordust;

// Frozen 50-digit references from tests/oracle/background_oracle.py.

TEST_CASE("vacuum background is exactly exponential") {
  Background bg({3.0, 0.0});
  CHECK(bg.hubble() == doctest::Approx(1.0).epsilon(1e-15));
  for (double t : {0.0, 0.3, 1.0, 7.0, 40.0}) {
    const auto b = bg.at(t);
    CHECK(b.log_a == doctest::Approx(t).epsilon(1e-14));
    CHECK(b.omega == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.omega_dot == 0.0);
    if (t <= 40.0) CHECK(b.a == doctest::Approx(std::exp(t)).epsilon(1e-13));
  }
  CHECK(bg.at(1.0).a == doctest::Approx(2.71828182845904523536).epsilon(1e-15));
}

TEST_CASE("dust background matches the high-precision closed form") {
  Background bg({3.0, 3.0});
  auto b = bg.at(1.0);
  CHECK(b.a == doctest::Approx(3.064134257698178151543).epsilon(1e-15));
  CHECK(b.log_a == doctest::Approx(1.119765068704985365115).epsilon(1e-15));
  CHECK(b.omega == doctest::Approx(1.01723141357901679826).epsilon(1e-15));
  CHECK(b.omega_dot == doctest::Approx(-0.05213962315794708153636).epsilon(1e-14));

  b = bg.at(0.5);
  CHECK(b.a == doctest::Approx(1.821136663299009437362).epsilon(1e-15));
  CHECK(b.omega == doctest::Approx(1.079614037064472209769).epsilon(1e-15));
  CHECK(b.omega_dot == doctest::Approx(-0.2483497035399713614956).epsilon(1e-14));

  Background bg2({1.0, 2.0});
  b = bg2.at(2.0);
  CHECK(b.a == doctest::Approx(3.884609479512136474786).epsilon(1e-15));
  CHECK(b.log_a == doctest::Approx(1.357022458693033383087).epsilon(1e-15));
  CHECK(b.omega == doctest::Approx(0.5871167801134067449919).epsilon(1e-15));
  CHECK(b.omega_dot == doctest::Approx(-0.01705917023610160886909).epsilon(1e-14));
}

TEST_CASE("late times keep full relative accuracy") {
  Background bg({3.0, 3.0});
  const auto b = bg.at(25.0);
  CHECK(b.a == doctest::Approx(81631762619.97914760717).epsilon(1e-14));
  CHECK(b.log_a == doctest::Approx(25.12548427097306514388).epsilon(1e-15));
  // omega - H has decayed to ~1.7e-33 here; double collapses it to exactly H
  CHECK(b.omega == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(b.omega_dot) < 1e-30);
}

TEST_CASE("initial conditions are exact") {
  for (auto p : {BackgroundParams{3.0, 0.0}, BackgroundParams{3.0, 3.0}, BackgroundParams{0.7, 11.0}}) {
    Background bg(p);
    const auto b = bg.at(0.0);
    CHECK(b.a == 1.0);
    CHECK(b.log_a == 0.0);
    CHECK(b.omega == doctest::Approx(std::sqrt(p.lambda / 3.0 + p.rho_bar / 3.0)).epsilon(1e-15));
    CHECK(b.omega_dot == doctest::Approx(-0.5 * p.rho_bar).epsilon(1e-15));
  }
}

TEST_CASE("ODE cross-check agrees with the closed form") {
  for (auto p : {BackgroundParams{3.0, 3.0}, BackgroundParams{1.0, 2.0}, BackgroundParams{3.0, 0.0}}) {
    Background bg(p);
    const double a_ode = background_ode_integrate(p, 1.5, 1e-3, 1e-12);
    CHECK(a_ode == doctest::Approx(bg.at(1.5).a).epsilon(1e-10));
  }
  // too-large steps must be rejected, not silently accepted
  CHECK_THROWS_AS(background_ode_integrate({3.0, 3.0}, 2.0, 0.5, 1e-14), Error);
}

TEST_CASE("envelopes and monotonicity hold on a dense grid") {
  std::vector<double> times;
  for (int i = 0; i <= 400; ++i) times.push_back(i * 0.05);
  CHECK(background_bounds_margin({3.0, 3.0}, times) >= -1e-12);
  CHECK(background_bounds_margin({1.0, 2.0}, times) >= -1e-12);
  CHECK(background_bounds_margin({3.0, 0.0}, times) >= -1e-12);
  // decay envelope is tight up to a modest constant: frozen limit 0.34314575...
  Background bg({3.0, 3.0});
  CHECK((bg.at(6.0).omega - 1.0) * std::exp(18.0) ==
        doctest::Approx(0.3431457514042772960026).epsilon(1e-6));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Background({-1.0, 0.0}), Error);
  CHECK_THROWS_AS(Background({0.0, 1.0}), Error);
  CHECK_THROWS_AS(Background({3.0, -0.5}), Error);
  Background bg({3.0, 1.0});
  CHECK_THROWS_AS(bg.at(-0.1), Error);
}
