"""Independent high-precision oracle for every frozen constant in the test suite.

All values are computed with mpmath at 50 significant digits, using only
power series / elementary functions (no scipy, no package code), so the
test expectations are derived from a source independent of the library.

Run:  python tools/oracle_constants.py
"""

import mpmath as mp

mp.mp.dps = 50


def i0_series(x):
    """Modified Bessel I0 via its power series, term-by-term."""
    x = mp.mpf(x)
    return mp.nsum(lambda k: (x / 2) ** (2 * k) / mp.factorial(k) ** 2, [0, mp.inf])


def i1_series(x):
    """Modified Bessel I1 via its power series."""
    x = mp.mpf(x)
    return mp.nsum(
        lambda k: (x / 2) ** (2 * k + 1) / (mp.factorial(k) * mp.factorial(k + 1)),
        [0, mp.inf],
    )


def tel_ac(x, mu, v, t):
    """Constant-rate telegraph a.c. density at |x| < v t.

    e^{-mu t}/(2 v) [ mu I0(z) + I1(z) mu v^2 t / sqrt(v^2 t^2 - x^2) ],
    z = (mu/v) sqrt(v^2 t^2 - x^2).
    """
    x, mu, v, t = map(mp.mpf, (x, mu, v, t))
    s = mp.sqrt(v * v * t * t - x * x)
    z = mu / v * s
    dt_i0 = i1_series(z) * (mu / v) * v * v * t / s
    return mp.e ** (-mu * t) / (2 * v) * (mu * i0_series(z) + dt_i0)


def show(name, value, spec=None):
    v = mp.mpf(value)
    line = f"{name:44s} = {mp.nstr(v, 17)}"
    if spec is not None:
        line += f"   (spec {spec}, diff {mp.nstr(v - mp.mpf(spec), 3)})"
    print(line)


one = mp.mpf(1)

print("--- Bessel values (series) vs mpmath builtin cross-check ---")
for x in ("0.5", "1"):
    assert mp.almosteq(i0_series(x), mp.besseli(0, mp.mpf(x)))
    assert mp.almosteq(i1_series(x), mp.besseli(1, mp.mpf(x)))
show("I0(0.5)", i0_series("0.5"), "1.0634834")
show("I0(1)", i0_series(1), "1.2660659")
show("I1(0.5)", i1_series("0.5"), "0.2578943")
show("I1(1)", i1_series(1), "0.5651591")

print("--- integrals ---")
int_i0_01 = mp.nsum(
    lambda l: mp.mpf(1) / (4**l * mp.factorial(l) ** 2 * (2 * l + 1)), [0, mp.inf]
)
show("int_0^1 I0(s) ds (termwise series)", int_i0_01, "1.0865210")
assert mp.almosteq(int_i0_01, mp.quad(lambda s: mp.besseli(0, s), [0, 1]))

print("--- i0 time derivative examples ---")
show("I1(0.5)*0.5 (nu=1/2,c=t=1,x=0)", i1_series("0.5") / 2, "0.1289472")
show("limit x->ct, nu=c=t=1: nu^2 c^2 t/2", mp.mpf(1) / 2, "0.5")

print("--- telegraph density spot values ---")
p0 = tel_ac(0, "0.5", "0.5", 1)
show("tel ac(0): mu=v=0.5, t=1", p0, "0.4007303")
show("  = e^-.5 * .5 * (I0+I1)(0.5)", mp.e ** mp.mpf("-0.5") / 2 * (i0_series("0.5") + i1_series("0.5")))
show("atom total e^{-0.5}", mp.e ** mp.mpf("-0.5"), "0.6065307")

print("--- standard joint density at origin, lam=c=t=1 ---")
# p(0,0,1) = (1/2) pU(0,1)^2 with pU the (lam/2, c/2) = (0.5, 0.5) telegraph
show("0.5 * tel_ac(0)^2", p0 * p0 / 2, "0.0802924")

print("--- boundary spot values, lam=c=t=1 ---")
f_std = mp.e ** (-one) / 8 * (i0_series("0.5") + i1_series("0.5"))
show("standard f(0,1) = e^-1/8 (I0+I1)(1/2)", f_std, "0.0607689")
# cross-check against (e^{-Lam/2}/4) pV(eta/2, t)
assert mp.almosteq(f_std, mp.e ** mp.mpf("-0.5") / 4 * tel_ac(0, "0.5", "0.5", 1))
f_ref = mp.e ** (-one) / 12 * (i0_series(one / 3) + i1_series(one / 3))
show("reflecting f(0,1) = e^-1/12 (I0+I1)(1/3)", f_ref, "0.0366948")
# cross-check against (e^{-2Lam/3}/4) pbar(eta/2, t), pbar = telegraph(lam/3, c/2)
assert mp.almosteq(f_ref, mp.e ** (-2 * one / 3) / 4 * tel_ac(0, one / 3, "0.5", 1))

print("--- boundary/diagonal integral values at Lambda=1 ---")
show("std 0.5(e^-1/2 - e^-1)", (mp.e ** mp.mpf("-0.5") - mp.e ** (-one)) / 2, "0.1193256")
show("refl 0.5(e^-2/3 - e^-1)", (mp.e ** (-2 * one / 3) - mp.e ** (-one)) / 2, "0.0727688")

print("--- singular masses at Lambda=1 ---")
show("vertex e^-1", mp.e ** (-one), "0.3678794")
show("std border total 2e^-1/2 - e^-1", 2 * mp.e ** mp.mpf("-0.5") - mp.e ** (-one), "0.8451819")
show("std sides 2e^-1/2 - 2e^-1", 2 * mp.e ** mp.mpf("-0.5") - 2 * mp.e ** (-one), "0.4773025")
show("std ac 1 - 2e^-1/2 + e^-1", 1 - 2 * mp.e ** mp.mpf("-0.5") + mp.e ** (-one), "0.1548181")
show("refl sides 2(e^-2/3 - e^-1)", 2 * (mp.e ** (-2 * one / 3) - mp.e ** (-one)), "0.2910754")
show("refl diagonals e^-2/3 - e^-1", mp.e ** (-2 * one / 3) - mp.e ** (-one), "0.1455377")
show("refl ac 1 - 3e^-2/3 + 2e^-1", 1 - 3 * mp.e ** (-2 * one / 3) + 2 * mp.e ** (-one), "0.1955076")

print("--- marginal atoms at Lambda=1 ---")
show("e^-1/4", mp.e ** (-one) / 4, "0.0919699")
show("e^-1/2", mp.e ** (-one) / 2, "0.1839397")
show("e^-2/3 / 2", mp.e ** (-2 * one / 3) / 2, "0.2567086")

print("--- rate bookkeeping ---")
show("ln cosh 1", mp.log(mp.cosh(1)), "0.4337808")
show("equilibrium level -2 ln(1 - 2^-1/2)", -2 * mp.log(1 - 1 / mp.sqrt(2)), "2.4558874")
tstar = mp.findroot(lambda t: mp.log(mp.cosh(t)) + 2 * mp.log(1 - 1 / mp.sqrt(2)), 3)
show("tanh-rate t* solving lncosh t = level", tstar, "3.1466")

print("--- L1 conjecture endpoint at Lambda=1 ---")
endpoint = (1 - mp.e ** (-2 * one / 3)) ** 2 + mp.e ** (-one) * (1 - mp.e ** (-one / 3))
show("(1-e^-2/3)^2 + e^-1(1-e^-1/3)", endpoint, "0.3410451")
show("equals 1 - 3e^-2/3 + 2e^-1 + refl diag", endpoint - (1 - 3 * mp.e ** (-2 * one / 3) + 2 * mp.e ** (-one)) - (mp.e ** (-2 * one / 3) - mp.e ** (-one)))

print("--- telegraph conditional-on-n densities, v=t=1 ---")
# n=1: uniform 1/(2vt); n=2 symmetric-start: also uniform 1/(2vt)
show("n=1 density (uniform)", one / 2, "0.5")
show("n=2 density at x=0 (symmetrized, uniform too)", one / 2)

print("--- boundary conditional values, c=t=1 ---")
show("std N=1: 1/(8ct)", one / 8, "0.125")
show("refl N=1: 1/(12ct)", one / 12, "0.0833333")

print("--- Bessel convolution identity RHS at lam=c=t=1 ---")
show("c int_0^t I0", mp.quad(lambda s: mp.besseli(0, s), [0, 1]))
show("(c/2)(I0(1)-1)", (i0_series(1) - 1) / 2)
show("(lam c/4)(I1(1)-1/2)", (i1_series(1) - mp.mpf("0.5")) / 4)

print("--- direct quadrature of the three convolution identities, lam=c=t=1 ---")
lam = c = t = one
nu = lam / c


def arg(y):
    return nu * mp.sqrt(c * c * t * t / 4 - y * y)


def dt_i0(y):
    # d/dt sqrt(c^2 t^2/4 - y^2) = (c^2 t / 4) / sqrt(.)
    s = mp.sqrt(c * c * t * t / 4 - y * y)
    return mp.besseli(1, nu * s) * nu * c * c * t / (4 * s)


lhs1 = mp.quad(lambda y: mp.besseli(0, arg(y)) ** 2, [-t / 2, 0, t / 2])
lhs2 = mp.quad(lambda y: mp.besseli(0, arg(y)) * dt_i0(y), [-t / 2, 0, t / 2])
lhs3 = mp.quad(lambda y: dt_i0(y) ** 2, [-t / 2, 0, t / 2])
show("quad I0*I0", lhs1)
show("quad I0*dtI0", lhs2)
show("quad dtI0*dtI0", lhs3)
