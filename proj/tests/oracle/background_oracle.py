#!/usr/bin/env python3
# High-precision reference values for the homogeneous background, used as frozen
# constants in test_background.cpp.  The scale factor solves
#     (a'/a)^2 = H^2 + (rho_bar/3) a^-3,   a(0) = 1,  H = sqrt(lambda/3),
# whose closed form is
#     a(t) = { sinh(3Ht/2) * sqrt(rho_bar/(3H^2) + 1) + cosh(3Ht/2) }^(2/3).
# We evaluate that expression at 50 digits and also integrate the ODE directly as an
# independent cross-check.

import mpmath as mp

mp.mp.dps = 50


def a_closed(lam, rho_bar, t):
    H = mp.sqrt(lam / mp.mpf(3))
    s = mp.sqrt(rho_bar / (3 * H * H) + 1)
    x = 3 * H * t / 2
    return (mp.sinh(x) * s + mp.cosh(x)) ** (mp.mpf(2) / 3)


def omega(lam, rho_bar, t):
    H = mp.sqrt(lam / mp.mpf(3))
    a = a_closed(lam, rho_bar, t)
    return mp.sqrt(H * H + rho_bar / (3 * a**3))


def omega_dot(lam, rho_bar, t):
    a = a_closed(lam, rho_bar, t)
    return -rho_bar / (2 * a**3)


def a_ode(lam, rho_bar, t):
    H = mp.sqrt(lam / mp.mpf(3))

    def f(tt, y):
        return [y[0] * mp.sqrt(H * H + rho_bar / (3 * y[0] ** 3))]

    return mp.odefun(f, 0, [mp.mpf(1)], tol=mp.mpf(10) ** -30)(t)[0]


def show(name, v):
    print(f"{name} = {mp.nstr(v, 22)}")


for (lam, rho_bar, t) in [(3, 3, 1), (3, 0, 1), (3, 3, mp.mpf('0.5')),
                          (1, 2, 2), (3, 3, 25)]:
    tag = f"lam={lam} rho={rho_bar} t={t}"
    show(f"a({tag})", a_closed(mp.mpf(lam), mp.mpf(rho_bar), mp.mpf(t)))
    show(f"Omega({tag})", mp.log(a_closed(mp.mpf(lam), mp.mpf(rho_bar), mp.mpf(t))))
    show(f"omega({tag})", omega(mp.mpf(lam), mp.mpf(rho_bar), mp.mpf(t)))
    show(f"omega_dot({tag})", omega_dot(mp.mpf(lam), mp.mpf(rho_bar), mp.mpf(t)))
    if t <= 2:
        show(f"a_ode({tag})", a_ode(mp.mpf(lam), mp.mpf(rho_bar), mp.mpf(t)))

# envelope constant in the upper bound a(t) <= A exp(H t)
for (lam, rho_bar) in [(3, 3), (1, 2)]:
    H = mp.sqrt(mp.mpf(lam) / 3)
    s = mp.sqrt(mp.mpf(rho_bar) / (3 * H * H) + 1)
    show(f"A(lam={lam} rho={rho_bar})", (0.5 * (s + 1)) ** (mp.mpf(2) / 3))

# late-time decay of omega - H, sampled for the derivative-envelope test
lam, rho_bar = mp.mpf(3), mp.mpf(3)
H = mp.sqrt(lam / 3)
for t in [2, 4, 6]:
    w = omega(lam, rho_bar, mp.mpf(t)) - H
    show(f"(omega-H)*exp(3Ht)(t={t})", w * mp.exp(3 * H * t))
