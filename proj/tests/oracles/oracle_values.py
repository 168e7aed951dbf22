"""Independent oracle for frozen test values.

Uses dense matrices, numpy determinants and mpmath at 50 digits; shares
no code path with the C++ diagonal log-determinant implementation.
Run: python3 tests/oracles/oracle_values.py
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 50


def power_split(p, il_db):
    r = mp.mpf(10) ** (mp.mpf(il_db) / 10)
    # rho_ml + rho_fl = p, rho_ml = r rho_fl
    a = mp.matrix([[1, 1], [1, -r]])
    b = mp.matrix([p, 0])
    x = mp.lu_solve(a, b)
    return x[0], x[1]


def sigma(sinr, n):
    nt = len(sinr)
    m = mp.diag([1 / mp.mpf(s) for s in sinr])
    m[n, n] += nt
    return m


def spatial_bound(sinr):
    nt = len(sinr)
    acc = mp.mpf(0)
    for n in range(nt):
        inner = mp.mpf(0)
        for k in range(nt):
            inner += mp.det(sigma(sinr, n)) / mp.det(sigma(sinr, n) + sigma(sinr, k))
        acc += mp.log(inner, 2)
    return mp.log(nt, 2) - nt - acc / nt


def cmcc(sinr):
    nt = len(sinr)
    return sum(mp.log(1 + nt * mp.mpf(s), 2) for s in sinr) / nt


def t2_bound(sinr):
    nt = len(sinr)
    acc = mp.mpf(0)
    for n in range(nt):
        inner = sum((mp.mpf(1) / nt) / mp.det(sigma(sinr, n) + sigma(sinr, k)) for k in range(nt))
        acc += mp.log(inner, 2)
    return acc / nt - nt * mp.log(mp.pi, 2)


def t1(sinr):
    nt = len(sinr)
    return -nt * mp.log(mp.pi * mp.e, 2) - sum(mp.log(mp.det(sigma(sinr, n)), 2) for n in range(nt)) / nt


def show(label, v):
    print(f"{label} = {mp.nstr(v, 17)}")


for p, il in [(1, 5), (2, 20), (1, 0.5)]:
    a, b = power_split(p, il)
    show(f"power_split({p},{il}).rho_ml", a)
    show(f"power_split({p},{il}).rho_fl", b)

a, b = power_split(1, 5)
show("mrc_ml nt2 nrm2 il5 sig1", a * 2 / (a * 2 + b * 4 + 2))
show("mrc_fl nt2 nrf2 il5 sig0.01", b * 2 / (b * 2 + 2 * mp.mpf("0.01")))
show("smx_ml nt2 nrm2 il5 sig1", a * 2 / (a * 2 + b * 4 + 4))

for s in ([1, 1], [0.5, 0.5], [0.3, 2.0], [1, 3, 0.2, 8], [1e-3, 1e-3], [50, 50, 50]):
    show(f"spatial{s}", spatial_bound(s))
    show(f"cmcc{s}", cmcc(s))
    show(f"t2{s}", t2_bound(s))
    show(f"t1{s}", t1(s))

# Exact spatial MI for N_t = 2, SINR = 1 by 2-D quadrature over |y1|^2, |y2|^2.
# Under antenna 1 the powers are Exp(mean 3) and Exp(mean 1).
f = lambda u1, u2: mp.exp(-u1 / 3) / 3 * mp.exp(-u2) * mp.log(1 + mp.exp(-mp.mpf(2) / 3 * (u1 - u2)), 2)
mp.mp.dps = 20
show("exact_spatial[1,1]", 1 - mp.quad(f, [0, 10, 40, mp.inf], [0, 5, 30, mp.inf]))
