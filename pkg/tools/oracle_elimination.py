"""Formal elimination check of the scalar PDEs implied by the first-order
transport systems, with time-varying rate.

State variables are formal symbols F[j][(a,b)] = d^a_x d^b_y f_j at a fixed
time; the time-derivative operator T acts by the transport system extended
with T(lam_k) = lam_{k+1) for the rate derivatives.  Every claimed scalar
equation must reduce to the zero polynomial in these symbols.
"""

import sympy as sp

c = sp.Symbol("c")
lam = [sp.Symbol(f"lam{k}") for k in range(6)]  # lambda, lambda', ...

MAXD = 9


def make_state(nfun, ndim):
    F = {}
    for j in range(nfun):
        if ndim == 2:
            for a in range(MAXD):
                for b in range(MAXD - a):
                    F[(j, a, b)] = sp.Symbol(f"F{j}_{a}_{b}")
        else:
            for a in range(MAXD):
                F[(j, a)] = sp.Symbol(f"F{j}_{a}")
    return F


def lift_time(expr, F, tmap):
    """Apply T (one time derivative) to a polynomial in state symbols and
    rate symbols, where tmap gives T on each state symbol."""
    out = 0
    poly = sp.expand(expr)
    for sym in poly.free_symbols:
        if sym in tmap:
            out += sp.diff(poly, sym) * tmap[sym]
    for k in range(len(lam) - 1):
        out += sp.diff(poly, lam[k]) * lam[k + 1]
    return sp.expand(out)


def planar_check(kind):
    dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    F = make_state(4, 2)
    tmap = {}
    for j in range(4):
        dx, dy = dirs[j]
        for a in range(MAXD):
            for b in range(MAXD - a):
                adv = 0
                if a + b + 1 < MAXD:
                    if dx:
                        adv += dx * F[(j, a + 1, b)]
                    if dy:
                        adv += dy * F[(j, a, b + 1)]
                if kind == "reflecting":
                    gain = lam[0] / 3 * sum(F[(i, a, b)] for i in range(4) if i != j)
                else:  # standard: orthogonal only
                    gain = lam[0] / 2 * (F[((j + 1) % 4, a, b)] + F[((j + 3) % 4, a, b)])
                tmap[F[(j, a, b)]] = -c * adv - lam[0] * F[(j, a, b)] + gain

    def p_spatial(a, b):
        return sum(F[(j, a, b)] for j in range(4))

    p = p_spatial(0, 0)
    pt = [p]
    for _ in range(4):
        pt.append(lift_time(pt[-1], F, tmap))
    lap = p_spatial(2, 0) + p_spatial(0, 2)
    lap_t = lift_time(lap, F, tmap)
    lap_tt = lift_time(lap_t, F, tmap)
    pxxyy = p_spatial(2, 2)

    L, L1, L2 = lam[0], lam[1], lam[2]
    if kind == "reflecting":
        lhs = (pt[4] + 4 * L * pt[3]
               + (sp.Rational(16, 3) * L**2 + 4 * L1) * pt[2]
               + (sp.Rational(64, 27) * L**3 + sp.Rational(16, 3) * L * L1
                  + sp.Rational(4, 3) * L2) * pt[1]
               + c**4 * pxxyy)
        rhs = c**2 * (lap_tt + 2 * L * lap_t
                      + (sp.Rational(8, 9) * L**2 + sp.Rational(2, 3) * L1) * lap)
    else:
        lhs = (pt[4] + 4 * L * pt[3]
               + (5 * L**2 + 4 * L1) * pt[2]
               + (2 * L**3 + 5 * L * L1 + L2) * pt[1]
               + c**4 * pxxyy)
        rhs = c**2 * (lap_tt + 2 * L * lap_t + (L**2 + L1) * lap)
    resid = sp.expand(lhs - rhs)
    print(f"{kind} 4th-order time-varying residual: {sp.simplify(resid)}")


def marginal_check(kind):
    # velocities +c, 0, -c -> functions f1, f0, f2
    F = make_state(3, 1)
    vel = {0: c, 1: 0, 2: -c}
    tmap = {}
    for j in range(3):
        for a in range(MAXD):
            adv = vel[j] * F[(j, a + 1)] if a + 1 < MAXD and vel[j] != 0 else 0
            if kind == "standard":
                # moving -> stops w.p. 1, stopped -> +-c w.p. 1/2
                if j == 1:  # stopped
                    flow = lam[0] * (F[(0, a)] + F[(2, a)]) - lam[0] * F[(1, a)]
                else:
                    flow = lam[0] / 2 * 0 - lam[0] * F[(j, a)]
                    flow += lam[0] / 2 * F[(1, a)]
            else:
                # reflecting marginal kernel:
                # stopped: stays 1/3, to +-c 1/3 each; moving: stops 2/3, reverses 1/3
                if j == 1:
                    flow = (-lam[0] + lam[0] / 3) * F[(1, a)] \
                           + sp.Rational(2, 3) * lam[0] * (F[(0, a)] + F[(2, a)])
                elif j == 0:
                    flow = -lam[0] * F[(0, a)] + lam[0] / 3 * F[(1, a)] \
                           + lam[0] / 3 * F[(2, a)]
                else:
                    flow = -lam[0] * F[(2, a)] + lam[0] / 3 * F[(1, a)] \
                           + lam[0] / 3 * F[(0, a)]
            tmap[F[(j, a)]] = -adv + flow

    def p_spatial(a):
        return sum(F[(j, a)] for j in range(3))

    p = p_spatial(0)
    pt = [p]
    for _ in range(3):
        pt.append(lift_time(pt[-1], F, tmap))
    pxx = p_spatial(2)
    pxx_t = lift_time(pxx, F, tmap)
    L, L1 = lam[0], lam[1]
    if kind == "standard":
        resid = (pt[3] + 3 * L * pt[2] + (2 * L**2 + L1) * pt[1]
                 - c**2 * pxx_t - c**2 * L * pxx)
    else:
        resid = (pt[3] + sp.Rational(8, 3) * L * pt[2]
                 + sp.Rational(4, 3) * (sp.Rational(4, 3) * L**2 + L1) * pt[1]
                 - c**2 * pxx_t - sp.Rational(2, 3) * c**2 * L * pxx)
    print(f"{kind} marginal 3rd-order residual: {sp.simplify(sp.expand(resid))}")


if __name__ == "__main__":
    planar_check("reflecting")
    planar_check("standard")
    marginal_check("standard")
    marginal_check("reflecting")
