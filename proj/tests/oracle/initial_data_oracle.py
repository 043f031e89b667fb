#!/usr/bin/env python3
"""Frozen reference values for the slice-data constructor and curvature residuals.

Two independent computations, no FFTs anywhere:

  1. the shift time-derivative  d_t g_{0j} = g^{ab} (d_a g_{bj} - 1/2 d_j g_{ab})
     for an explicit band-limited 3-metric, using the closed-form derivative of
     each cosine mode, evaluated at a few grid points of the n = 16 grid;

  2. the scalar curvature of the conformally flat metric  exp(2 phi) delta_{jk},
     phi = A cos(x + 2y - z + 2/5), via a fully symbolic Christoffel/Ricci
     chain in sympy, evaluated at grid points of the n = 32 grid.  The closed
     form  exp(-2 phi) (-4 lap(phi) - 2 |grad phi|^2)  is printed alongside as a
     consistency check on the symbolic pipeline itself.

Run from the repository root:  python3 tests/oracle/initial_data_oracle.py
"""

import math

import numpy as np
import sympy as sp


def coord(i, n):
    return -math.pi + (2 * math.pi / n) * i


# ---------------------------------------------------------------- shift rate

EPS = 0.05
# (sym component, kx, ky, kz, phase); metric = Id + sum of EPS*cos(k.x + phase)
MODES = [
    (0, 1, 2, 0, 0.0),
    (1, 0, 1, 1, 0.3),
    (2, 1, 0, -1, 0.7),
    (3, 0, 0, 2, 0.1),
    (4, 1, 1, 1, 1.1),
    (5, 0, 1, 0, 0.5),
]
SYM = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def metric_at(x):
    g = np.eye(3)
    dg = np.zeros((3, 3, 3))  # [a][j][k] = d_a g_jk
    for (c, kx, ky, kz, ph) in MODES:
        t = kx * x[0] + ky * x[1] + kz * x[2] + ph
        j, k = SYM[c]
        v = EPS * math.cos(t)
        g[j, k] += v
        if j != k:
            g[k, j] += v
        for a, ka in enumerate((kx, ky, kz)):
            if ka == 0:
                continue
            d = -EPS * ka * math.sin(t)
            dg[a, j, k] += d
            if j != k:
                dg[a, k, j] += d
    return g, dg


POINTS16 = [(2, 5, 9), (7, 3, 12), (11, 14, 6)]

print("# shift rate d_t g0j on the n=16 grid, modes as tabulated above")
for ij in POINTS16:
    x = [coord(i, 16) for i in ij]
    g, dg = metric_at(x)
    gi = np.linalg.inv(g)
    out = []
    for j in range(3):
        s = 0.0
        for a in range(3):
            for b in range(3):
                s += gi[a, b] * (dg[a, b, j] - 0.5 * dg[j, a, b])
        out.append(s)
    print(ij, " ".join(f"{v:.17g}" for v in out))

# ------------------------------------------------- conformal scalar curvature

X = sp.symbols("x y z", real=True)
A = sp.Rational(1, 10)
phase = sp.Rational(2, 5)
phi = A * sp.cos(X[0] + 2 * X[1] - X[2] + phase)
g = sp.exp(2 * phi) * sp.eye(3)
gi = g.inv()

Gam = [[[sp.S.Zero] * 3 for _ in range(3)] for _ in range(3)]
for c in range(3):
    for a in range(3):
        for b in range(3):
            s = sp.S.Zero
            for d in range(3):
                s += gi[c, d] * (
                    sp.diff(g[d, a], X[b]) + sp.diff(g[d, b], X[a]) - sp.diff(g[a, b], X[d])
                )
            Gam[c][a][b] = sp.expand(s / 2)

Ric = sp.zeros(3)
for a in range(3):
    for b in range(3):
        s = sp.S.Zero
        for c in range(3):
            s += sp.diff(Gam[c][a][b], X[c]) - sp.diff(Gam[c][c][b], X[a])
            for d in range(3):
                s += Gam[c][c][d] * Gam[d][a][b] - Gam[c][a][d] * Gam[d][c][b]
        Ric[a, b] = s

scal = sum(gi[a, b] * Ric[a, b] for a in range(3) for b in range(3))

lap = sum(sp.diff(phi, v, 2) for v in X)
grad2 = sum(sp.diff(phi, v) ** 2 for v in X)
closed = sp.exp(-2 * phi) * (-4 * lap - 2 * grad2)

POINTS32 = [(3, 11, 20), (17, 6, 29), (25, 30, 9)]

print("# conformal scalar curvature on the n=32 grid (symbolic | closed form)")
for ij in POINTS32:
    subs = {X[a]: sp.nsimplify(-sp.pi + sp.Rational(2 * ij[a], 32) * sp.pi) for a in range(3)}
    v_sym = sp.N(scal.subs(subs), 22)
    v_cf = sp.N(closed.subs(subs), 22)
    print(ij, f"{float(v_sym):.17g}", f"{float(v_cf):.17g}")
