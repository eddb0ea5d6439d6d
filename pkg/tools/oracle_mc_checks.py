"""Monte Carlo oracle for the distributional formulas that the library will
implement in closed form.

Everything here is written directly from the *definition* of the motions
(uniform initial direction, Poisson-paced switches, variant-specific kernel),
with no shared code with the library, so it can serve as an independent
reference for:

  * the interior series density of the reflecting motion (conditional
    telegraph densities x Poisson weights, with the pure-shared-switch
    terms removed: those carry the diagonal mass, not interior density);
  * the conditional-independence factorization of the dependent U/V pair
    given the three switch counts (own-U, own-V, shared);
  * the marginal density of the standard motion as a telegraph convolution
    plus atom cross-terms;
  * the singular class masses.

Run:  python3 tools/oracle_mc_checks.py
"""

import numpy as np
from math import comb, factorial, exp
from scipy import special, stats

rng = np.random.default_rng(20250814)

LAM = 1.0
C = 1.0
T = 1.0


# ----------------------------------------------------------------------
# definition-level planar sampler (constant rate), chunked
# ----------------------------------------------------------------------

DIRS = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


def sample_planar(n, kind, rng, lam=LAM, t=T, c=C):
    """Endpoints (x, y) plus the exact switch count, one chunk."""
    counts = rng.poisson(lam * t, size=n)
    nmax = int(counts.max())
    # event times: row-sorted uniforms, one column per potential event
    times = rng.random((n, nmax + 1)) * t
    times[np.arange(nmax + 1)[None, :] >= counts[:, None]] = t
    times.sort(axis=1)
    d = rng.integers(0, 4, size=n)
    x = np.zeros(n)
    y = np.zeros(n)
    prev = np.zeros(n)
    for j in range(nmax + 1):
        dt = times[:, j] - prev
        x += DIRS[d, 0] * c * dt
        y += DIRS[d, 1] * c * dt
        prev = times[:, j]
        active = j < counts
        if not active.any():
            break
        if kind == "standard":
            step = rng.choice([1, 3], size=n)
        else:  # reflecting
            step = rng.integers(1, 4, size=n)
        d = np.where(active, (d + step) % 4, d)
    return x, y, counts


# ----------------------------------------------------------------------
# corrected reflecting series density
# ----------------------------------------------------------------------

def tel_conditional(x, n, m):
    """Telegraph position density given n >= 1 switches, symmetric start,
    speed*horizon = m (support (-m, m))."""
    x = np.asarray(x, dtype=float)
    q = m * m - x * x
    if n % 2 == 1:
        k = (n - 1) // 2
        return factorial(2 * k + 1) / factorial(k) ** 2 * q**k / (2 * m) ** (2 * k + 1)
    k = n // 2
    return (
        factorial(2 * k)
        / (factorial(k) * factorial(k - 1))
        * q ** (k - 1)
        / (2 ** (2 * k) * m ** (2 * k - 1))
    )


def reflecting_series(x, y, lam=LAM, t=T, c=C, hmax=40):
    """Interior density of the reflecting motion at (x, y)."""
    u = (x + y) / 2.0
    v = (x - y) / 2.0
    m = c * t / 2.0
    mu = lam * t / 3.0  # each of the three streams
    pois = stats.poisson.pmf(np.arange(hmax + 1), mu)
    # w[h, k] = sum over shared count n of the three pmfs, minus the
    # pure-shared diagonal terms n = h = k (those sit on the diagonals)
    w = np.zeros((hmax + 1, hmax + 1))
    for h in range(1, hmax + 1):
        for k in range(1, hmax + 1):
            s = 0.0
            for n in range(0, min(h, k) + 1):
                if n == h == k:
                    continue
                s += pois[h - n] * pois[k - n] * pois[n]
            w[h, k] = s
    fu = np.array([tel_conditional(u, h, m) for h in range(1, hmax + 1)])
    fv = np.array([tel_conditional(v, k, m) for k in range(1, hmax + 1)])
    return 0.5 * np.einsum("i...,ij,j...->...", fu, w[1:, 1:], fv)


# ----------------------------------------------------------------------
# constant-rate telegraph ac density (for the marginal convolution)
# ----------------------------------------------------------------------

def tel_ac(x, mu, v, t):
    x = np.asarray(x, dtype=float)
    s2 = np.clip(v * v * t * t - x * x, 0.0, None)
    s = np.sqrt(s2)
    z = mu / v * s
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(z > 1e-8, special.i1(z) / np.where(z > 0, z, 1.0), 0.5)
    dt_i0 = ratio * (mu / v) ** 2 * v * v * t
    return np.exp(-mu * t) / (2 * v) * (mu * special.i0(z) + dt_i0)


def marginal_density(x, lam=LAM, t=T, c=C, nodes=80):
    """ac density of X = U + V (standard motion marginal), 0 < x < ct."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m = c * t / 2.0
    lo = np.maximum(-m, x - m)
    hi = np.minimum(m, x + m)
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    mid = (lo + hi) / 2.0
    half = (hi - lo) / 2.0
    wpts = mid[:, None] + half[:, None] * gl_x[None, :]
    vals = tel_ac(wpts, lam / 2, c / 2, t) * tel_ac(x[:, None] - wpts, lam / 2, c / 2, t)
    conv = (vals * gl_w[None, :]).sum(axis=1) * half
    cross = exp(-lam * t / 2) * (tel_ac(x - m, lam / 2, c / 2, t) * (np.abs(x - m) < m)
                                 + tel_ac(x + m, lam / 2, c / 2, t) * (np.abs(x + m) < m))
    return conv + cross


# ----------------------------------------------------------------------
# checks
# ----------------------------------------------------------------------

def check_reflecting_interior():
    print("== reflecting interior density vs MC ==")
    cells = [(0.3, 0.2), (0.1, 0.45), (-0.25, 0.15), (0.05, -0.35)]
    width = 0.1
    ntot = 40_000_000
    chunk = 2_000_000
    hits = np.zeros(len(cells))
    for _ in range(ntot // chunk):
        x, y, _ = sample_planar(chunk, "reflecting", rng)
        for i, (cx, cy) in enumerate(cells):
            hits[i] += np.count_nonzero(
                (np.abs(x - cx) < width / 2) & (np.abs(y - cy) < width / 2)
            )
    gx, gw = np.polynomial.legendre.leggauss(24)
    for i, (cx, cy) in enumerate(cells):
        xs = cx + gx * width / 2
        ys = cy + gx * width / 2
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        dens = reflecting_series(X, Y)
        mass = np.einsum("i,j,ij->", gw, gw, dens) * (width / 2) ** 2
        p = hits[i] / ntot
        se = np.sqrt(p * (1 - p) / ntot)
        z = (p - mass) / se
        print(f"cell {cx:+0.2f},{cy:+0.2f}: series {mass:.6e} mc {p:.6e} z={z:+.2f}")


def check_mass_split():
    mu = LAM * T / 3.0
    hmax = 40
    w_sum = 0.0
    pois = stats.poisson.pmf(np.arange(hmax + 1), mu)
    for h in range(1, hmax + 1):
        for k in range(1, hmax + 1):
            for n in range(0, min(h, k) + 1):
                if n == h == k:
                    continue
                w_sum += pois[h - n] * pois[k - n] * pois[n]
    target = 1 - 3 * exp(-2 * LAM * T / 3) + 2 * exp(-LAM * T)
    print(f"series weight total {w_sum:.12f} vs interior mass {target:.12f}")


def check_conditional_independence():
    print("== dependent-pair factorization given (own_u, own_v, shared) ==")
    n = 6_000_000
    m = C * T / 2.0
    for n_u, n_v, n_sh in [(1, 1, 1), (2, 0, 1), (1, 0, 2), (2, 1, 1)]:
        h, k = n_u + n_sh, n_v + n_sh
        t_u = rng.random((n, n_u)) * T if n_u else np.zeros((n, 0))
        t_v = rng.random((n, n_v)) * T if n_v else np.zeros((n, 0))
        t_s = rng.random((n, n_sh)) * T
        tu = np.sort(np.concatenate([t_u, t_s], axis=1), axis=1)
        tv = np.sort(np.concatenate([t_v, t_s], axis=1), axis=1)

        def alt_sum(tt):
            full = np.concatenate([tt, np.full((n, 1), T)], axis=1)
            dt = np.diff(np.concatenate([np.zeros((n, 1)), full], axis=1), axis=1)
            signs = (-1.0) ** np.arange(tt.shape[1] + 1)
            return (dt * signs).sum(axis=1)

        s_u = rng.choice([-1.0, 1.0], size=n)
        s_v = rng.choice([-1.0, 1.0], size=n)
        U = s_u * (C / 2) * alt_sum(tu)
        V = s_v * (C / 2) * alt_sum(tv)
        # a few cells
        worst = 0.0
        for cu, cv in [(0.0, 0.0), (0.3, 0.1), (-0.35, 0.35), (0.2, -0.4), (0.44, 0.44)]:
            wdt = 0.05
            pmc = np.mean((np.abs(U - cu) < wdt / 2) & (np.abs(V - cv) < wdt / 2))
            gx, gw = np.polynomial.legendre.leggauss(12)
            uu = cu + gx * wdt / 2
            vv = cv + gx * wdt / 2
            du = tel_conditional(uu, h, m)
            dv = tel_conditional(vv, k, m)
            pth = (du @ gw) * (dv @ gw) * (wdt / 2) ** 2
            se = np.sqrt(max(pmc, 1e-12) * (1 - pmc) / n) + 1e-15
            worst = max(worst, abs(pmc - pth) / se)
        print(f"counts (u,v,shared)=({n_u},{n_v},{n_sh}) -> worst |z| {worst:.2f}")


def check_marginal():
    print("== standard marginal density vs MC ==")
    ntot = 20_000_000
    chunk = 2_000_000
    edges = np.arange(0.10, 0.95, 0.05)
    hist = np.zeros(len(edges) - 1)
    for _ in range(ntot // chunk):
        x, _, _ = sample_planar(chunk, "standard", rng)
        hist += np.histogram(x, bins=edges)[0]
    from scipy.integrate import quad

    worst = 0.0
    for i in range(len(edges) - 1):
        mass = quad(lambda z: marginal_density(np.array([z]))[0],
                    edges[i], edges[i + 1], epsabs=1e-11)[0]
        p = hist[i] / ntot
        se = np.sqrt(p * (1 - p) / ntot)
        worst = max(worst, abs(p - mass) / se)
    print(f"bins on (0.1, 0.9): worst |z| = {worst:.2f}")
    total = quad(lambda z: marginal_density(np.array([z]))[0], 0, 1,
                 epsabs=1e-11, limit=200)[0]
    # ac mass on (0, ct) should be (1 - atom mass)/2 by symmetry
    atoms = exp(-LAM * T) / 4 * 2 + exp(-LAM * T) / 2
    print(f"int_0^ct marginal ac = {total:.10f} vs (1-atoms)/2 = {(1-atoms)/2:.10f}")


def check_masses():
    print("== singular class masses (reflecting) ==")
    ntot = 8_000_000
    chunk = 2_000_000
    cls = np.zeros(4)  # vertex, side, diagonal, interior
    tol = 1e-12
    for _ in range(ntot // chunk):
        x, y, _ = sample_planar(chunk, "reflecting", rng)
        on_border = np.abs(np.abs(x) + np.abs(y) - C * T) < tol
        on_vertex = on_border & ((np.abs(x) < tol) | (np.abs(y) < tol))
        on_diag = ~on_border & ((np.abs(x) < tol) | (np.abs(y) < tol))
        cls[0] += np.count_nonzero(on_vertex)
        cls[1] += np.count_nonzero(on_border & ~on_vertex)
        cls[2] += np.count_nonzero(on_diag)
        cls[3] += np.count_nonzero(~on_border & ~on_diag)
    cls /= ntot
    L = LAM * T
    exact = [exp(-L), 2 * (exp(-2 * L / 3) - exp(-L)), exp(-2 * L / 3) - exp(-L),
             1 - 3 * exp(-2 * L / 3) + 2 * exp(-L)]
    for name, got, want in zip(["vertex", "side", "diag", "ac"], cls, exact):
        se = np.sqrt(want * (1 - want) / ntot)
        print(f"{name:8s} mc {got:.6f} exact {want:.6f} z={(got-want)/se:+.2f}")


if __name__ == "__main__":
    check_mass_split()
    check_masses()
    check_conditional_independence()
    check_reflecting_interior()
    check_marginal()
