"""Planar motions with four orthogonal directions switched by a Poisson process.

Variants
--------
standard     at each event the particle turns left or right (never straight
             on, never back); equivalently X+Y and X-Y are independent
             telegraph processes of half rate and half speed.
qstandard    at each event the direction is kept with probability 1-q and
             otherwise turns left/right with q/2 each; distributionally equal
             to standard with rate q*lambda.
reflecting   at each event the particle picks one of the three other
             directions uniformly; equivalently the two diagonal telegraph
             components flip at a private rate lambda/3 each plus a shared
             lambda/3 stream that flips both at once, which creates atoms on
             the diagonals x = 0 and y = 0.
qreflecting  kept with probability 1-q, else one of the other three with q/3;
             equal in law to reflecting with rate q*lambda.
uniform      new direction uniform over all four, i.e. qreflecting with
             q = 3/4; normalized to that on construction.

Speeds c_x, c_y may differ; sampling and the closed forms run on the
unit-speed motion and scale axes at the end, so the support is the rhombus
|x|/c_x + |y|/c_y <= t.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import (DivergentIntegral, DomainError, NoRoot, UnsupportedRate,
                     UnsupportedVariant)
from .rates import CHUNK, RateFunction, sample_event_matrix, sample_poisson
from .telegraph import ac_density, alternating_sum, conditional_density_poly

VARIANTS = ("standard", "qstandard", "reflecting", "qreflecting", "uniform")

# Relative tolerance for deciding that a coordinate sits exactly on the border
# or on a diagonal.  The samplers produce those points with at most a few ulp
# of noise, far below this.
CLASS_TOL = 1e-12

# ac(t) mass equals border mass of the standard motion when Lambda(t) hits this.
EQUILIBRIUM_LEVEL = -2.0 * math.log(1.0 - 1.0 / math.sqrt(2.0))

_DX = np.array([1.0, 0.0, -1.0, 0.0])
_DY = np.array([0.0, 1.0, 0.0, -1.0])

CLASS_NAMES = {0: "interior",
               1: "side-ne", 2: "side-nw", 3: "side-sw", 4: "side-se",
               5: "vertex-e", 6: "vertex-n", 7: "vertex-w", 8: "vertex-s",
               9: "diagonal-h", 10: "diagonal-v"}

SIDE_CODES = (1, 2, 3, 4)
VERTEX_CODES = (5, 6, 7, 8)
DIAGONAL_CODES = (9, 10)


@dataclass(frozen=True)
class MotionSpec:
    """Variant, switching rate, thinning parameter q and axis speeds."""

    variant: str
    rate: RateFunction
    q: float = 1.0
    c_x: float = 1.0
    c_y: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.c_x <= 0 or self.c_y <= 0:
            raise ValueError("speeds must be positive")
        if self.variant == "uniform":
            # uniform over all four directions == keep with prob 1/4
            object.__setattr__(self, "variant", "qreflecting")
            object.__setattr__(self, "q", 0.75)
        if self.variant in ("standard", "reflecting"):
            object.__setattr__(self, "q", 1.0)
        if not 0.0 < self.q <= 1.0:
            raise ValueError("q must lie in (0, 1]")

    @property
    def family(self):
        return "standard" if self.variant in ("standard", "qstandard") else "reflecting"

    @property
    def is_symmetric(self):
        return self.c_x == self.c_y

    @property
    def c(self):
        if not self.is_symmetric:
            raise UnsupportedVariant("operation needs equal axis speeds")
        return self.c_x

    def effective_rate(self):
        """q * lambda(t): the rate of the equivalent plain variant."""
        return self.rate if self.q == 1.0 else self.rate.scaled(self.q)

    def effective_cumulative(self, t):
        return self.q * self.rate.cumulative(t)

    def effective_lambda(self):
        if not self.rate.is_constant:
            raise UnsupportedRate("closed form needs a constant rate")
        return self.q * self.rate.param

    def describe(self):
        return {"variant": self.variant, "q": self.q, "c_x": self.c_x,
                "c_y": self.c_y, "rate": self.rate.describe()}


@dataclass(frozen=True)
class PlanarState:
    x: float
    y: float
    direction: int


@dataclass(frozen=True)
class UVPair:
    """Diagonal coordinates u = (x/c_x + y/c_y)/2, v = (x/c_x - y/c_y)/2."""

    u: float
    v: float


def uv_from_xy(spec, x, y):
    return UVPair(u=(x / spec.c_x + y / spec.c_y) / 2.0,
                  v=(x / spec.c_x - y / spec.c_y) / 2.0)


def xy_from_uv(spec, pair):
    return (spec.c_x * (pair.u + pair.v), spec.c_y * (pair.u - pair.v))


@dataclass(frozen=True)
class PathRecord:
    """One trajectory: switch times, directions per segment, positions."""

    horizon: float
    event_times: np.ndarray   # shape (k,)
    directions: np.ndarray    # shape (k+1,), direction on each segment
    positions: np.ndarray     # shape (k+2, 2): start, each switch, endpoint
    x: float
    y: float
    label: str


def classify_codes(ux, uy, t):
    """Support-region codes for unit-speed endpoints (see CLASS_NAMES).

    0 interior; 1-4 open border sides by quadrant; 5-8 vertices (+x, +y, -x,
    -y); 9/10 points of the horizontal/vertical diagonal strictly inside.
    """
    scalar = np.ndim(ux) == 0 and np.ndim(uy) == 0
    ux = np.atleast_1d(np.asarray(ux))
    uy = np.atleast_1d(np.asarray(uy))
    tol = CLASS_TOL * t
    ax = np.abs(ux)
    ay = np.abs(uy)
    border = ax + ay >= t - tol
    on_x_axis = ay <= tol
    on_y_axis = ax <= tol
    codes = np.zeros(ux.shape, dtype=np.int8)
    quad = np.where((ux > 0) & (uy > 0), 1,
                    np.where((ux < 0) & (uy > 0), 2,
                             np.where((ux < 0) & (uy < 0), 3, 4)))
    side = border & ~on_x_axis & ~on_y_axis
    codes[side] = quad[side]
    vx = border & on_x_axis
    codes[vx & (ux > 0)] = 5
    codes[vx & (ux < 0)] = 7
    vy = border & on_y_axis
    codes[vy & (uy > 0)] = 6
    codes[vy & (uy < 0)] = 8
    diag_h = ~border & on_x_axis
    diag_v = ~border & on_y_axis & ~on_x_axis
    codes[diag_h] = 9
    codes[diag_v] = 10
    return int(codes[0]) if scalar else codes


class SupportRegion:
    """Classifier of points of the rhombus |x|/c_x + |y|/c_y <= t at time t."""

    def __init__(self, spec, t):
        if t <= 0:
            raise ValueError("t must be positive")
        self.spec = spec
        self.t = float(t)

    def classify(self, x, y):
        s = self.t * (1.0 + CLASS_TOL)
        if abs(x) / self.spec.c_x + abs(y) / self.spec.c_y > s:
            raise DomainError("point lies outside the support")
        code = classify_codes(np.float64(x / self.spec.c_x),
                              np.float64(y / self.spec.c_y), self.t)
        return CLASS_NAMES[int(code)]


def _step_cutoffs(spec):
    # cumulative probabilities over step increments; step 0 keeps the direction
    if spec.family == "standard":
        # steps 1 (left) and 3 (right) with q/2 each
        return np.array([1.0 - spec.q, 1.0 - spec.q / 2.0]), np.array([0, 1, 3])
    return (np.array([1.0 - spec.q, 1.0 - 2.0 * spec.q / 3.0, 1.0 - spec.q / 3.0]),
            np.array([0, 1, 2, 3]))


def _direct_chunk(spec, t, n, rng):
    """Unit-speed endpoints by walking the direction kernel event by event."""
    counts, times = sample_event_matrix(spec.rate, t, n, rng)
    kmax = times.shape[1]
    d0 = rng.integers(0, 4, n)
    u = rng.random((n, kmax))
    cutoffs, steps_of = _step_cutoffs(spec)
    idx = np.searchsorted(cutoffs, u, side="right")   # right-open bins over [0,1)
    steps = steps_of[idx].astype(np.int16)
    steps[np.arange(kmax)[None, :] >= counts[:, None]] = 0
    dirs = (d0[:, None] + np.cumsum(steps, axis=1)) % 4
    dirs_full = np.concatenate([d0[:, None], dirs], axis=1)
    bounds = np.concatenate([np.zeros((n, 1)), times, np.full((n, 1), float(t))], axis=1)
    segs = np.diff(bounds, axis=1)
    ux = (segs * _DX[dirs_full]).sum(axis=1)
    uy = (segs * _DY[dirs_full]).sum(axis=1)
    return ux, uy, counts


def _decomposition_chunk(spec, t, n, rng, eff_rate):
    """Unit-speed endpoints through the diagonal telegraph decomposition."""
    if spec.family == "standard":
        half = eff_rate.scaled(0.5)
        c_u, t_u = sample_event_matrix(half, t, n, rng)
        c_v, t_v = sample_event_matrix(half, t, n, rng)
        a_u = alternating_sum(c_u, t_u, t)
        a_v = alternating_sum(c_v, t_v, t)
        counts = c_u + c_v
    else:
        third = eff_rate.scaled(1.0 / 3.0)
        c_u, t_u = sample_event_matrix(third, t, n, rng)
        c_v, t_v = sample_event_matrix(third, t, n, rng)
        c_s, t_s = sample_event_matrix(third, t, n, rng)
        a_u = alternating_sum(c_u + c_s, np.sort(np.concatenate([t_u, t_s], axis=1), axis=1), t)
        a_v = alternating_sum(c_v + c_s, np.sort(np.concatenate([t_v, t_s], axis=1), axis=1), t)
        counts = c_u + c_v + c_s
    s_u = rng.integers(0, 2, n) * 2 - 1
    s_v = rng.integers(0, 2, n) * 2 - 1
    uu = 0.5 * (s_u * a_u)
    vv = 0.5 * (s_v * a_v)
    return uu + vv, uu - vv, counts


def sample_endpoints(spec, t, n, rng, via_decomposition=False, return_counts=False):
    """Vectorized endpoint sampler: (x, y, codes[, switch_counts]) arrays.

    Direct mode walks the direction kernel of the variant (q applied as a
    keep-probability at each event of the raw rate); decomposition mode builds
    the diagonal telegraph components of the equivalent plain variant.  Both
    run in fixed-size chunks so results depend only on (spec, t, n, seed).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    xs, ys, cs, ks = [], [], [], []
    eff = spec.effective_rate() if via_decomposition else None
    done = 0
    while done < n:
        m = min(CHUNK, n - done)
        if via_decomposition:
            ux, uy, counts = _decomposition_chunk(spec, t, m, rng, eff)
        else:
            ux, uy, counts = _direct_chunk(spec, t, m, rng)
        codes = classify_codes(ux, uy, t)
        xs.append(spec.c_x * ux)
        ys.append(spec.c_y * uy)
        cs.append(codes)
        ks.append(counts)
        done += m
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    codes = np.concatenate(cs)
    if return_counts:
        return x, y, codes, np.concatenate(ks)
    return x, y, codes


def sample_planar(spec, t, rng):
    """One trajectory with its full switch history."""
    if t <= 0:
        raise ValueError("t must be positive")
    events = sample_poisson(spec.rate, t, rng)
    cutoffs, steps_of = _step_cutoffs(spec)
    d = int(rng.integers(0, 4))
    dirs = [d]
    pos = [(0.0, 0.0)]
    x = y = 0.0
    prev = 0.0
    for s in events.times:
        x += (s - prev) * _DX[d]
        y += (s - prev) * _DY[d]
        pos.append((x, y))
        d = int((d + steps_of[int(np.searchsorted(cutoffs, rng.random(), side="right"))]) % 4)
        dirs.append(d)
        prev = s
    x += (t - prev) * _DX[d]
    y += (t - prev) * _DY[d]
    pos.append((x, y))
    code = int(classify_codes(np.float64(x), np.float64(y), t))
    positions = np.asarray(pos) * np.array([spec.c_x, spec.c_y])
    return PathRecord(horizon=float(t), event_times=events.times,
                      directions=np.asarray(dirs), positions=positions,
                      x=spec.c_x * x, y=spec.c_y * y, label=CLASS_NAMES[code])


def sample_planar_via_decomposition(spec, t, rng):
    """One endpoint built from the diagonal telegraph decomposition."""
    if t <= 0:
        raise ValueError("t must be positive")
    eff = spec.effective_rate()

    def one_component_times():
        return sample_poisson(eff.scaled(0.5 if spec.family == "standard" else 1.0 / 3.0),
                              t, rng).times

    if spec.family == "standard":
        flips_u = one_component_times()
        flips_v = one_component_times()
    else:
        own_u = one_component_times()
        own_v = one_component_times()
        shared = one_component_times()
        flips_u = np.sort(np.concatenate([own_u, shared]))
        flips_v = np.sort(np.concatenate([own_v, shared]))

    def endpoint(flips):
        sign, a, prev = 1.0, 0.0, 0.0
        for s in flips:
            a += sign * (s - prev)
            sign, prev = -sign, s
        a += sign * (t - prev)
        return a, sign

    a_u, sg_u = endpoint(flips_u)
    a_v, sg_v = endpoint(flips_v)
    s_u = float(rng.integers(0, 2) * 2 - 1)
    s_v = float(rng.integers(0, 2) * 2 - 1)
    uu = 0.5 * s_u * a_u
    vv = 0.5 * s_v * a_v
    fu = s_u * sg_u   # final half-velocity signs determine the direction
    fv = s_v * sg_v
    direction = {(1, 1): 0, (1, -1): 1, (-1, -1): 2, (-1, 1): 3}[(int(fu), int(fv))]
    return PlanarState(x=spec.c_x * (uu + vv), y=spec.c_y * (uu - vv), direction=direction)


def singular_masses(spec, t):
    """Masses {vertex, side_total, diagonal_total, ac} at time t; they sum to 1.

    ``vertex`` is the total over the four vertices, ``side_total`` over the
    four open sides, ``diagonal_total`` over both open diagonals (zero for the
    standard family).  Rates with divergent integral give zero singular mass.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    try:
        lam = spec.effective_cumulative(t)
    except DivergentIntegral:
        lam = math.inf
    e1 = math.exp(-lam)
    if spec.family == "standard":
        eh = math.exp(-lam / 2.0)
        return {"vertex": e1, "side_total": 2.0 * (eh - e1), "diagonal_total": 0.0,
                "ac": 1.0 - 2.0 * eh + e1}
    e23 = math.exp(-2.0 * lam / 3.0)
    return {"vertex": e1, "side_total": 2.0 * (e23 - e1), "diagonal_total": e23 - e1,
            "ac": 1.0 - 3.0 * e23 + 2.0 * e1}


# ---------------------------------------------------------------------------
# interior joint density


def _standard_joint_unit(lam, t, ux, uy):
    # product of the two independent diagonal telegraphs, Jacobian 1/2
    u = (ux + uy) / 2.0
    v = (ux - uy) / 2.0
    return 0.5 * ac_density(lam / 2.0, 0.5, t, u) * ac_density(lam / 2.0, 0.5, t, v)


def _poisson_pmf(mean, kmax):
    k = np.arange(kmax + 1)
    out = np.exp(k * math.log(mean) - mean - np.array([math.lgamma(i + 1.0) for i in k]))
    return out


def _poisson_truncation(mean, tail):
    """Smallest H with P(N > H) < tail."""
    p = math.exp(-mean)
    cdf = p
    h = 0
    while 1.0 - cdf >= tail and h < 400:
        h += 1
        p *= mean / h
        cdf += p
    return h


def _reflecting_weights(mean, tail):
    """Matrix W[h,k] (h,k >= 1) of switch-count weights of the reflecting ac part.

    W[h,k] = sum_n P(h-n) P(k-n) P(n) over 0 <= n <= min(h,k), with the
    all-shared terms n = h = k removed: those paths have both diagonal
    components flipping at identical instants, i.e. the diagonal atoms, not ac
    mass.  P is the Poisson(mean) pmf, mean = Lambda/3.  The retained weights
    sum to the ac mass 1 - 3 e^(-2L/3) + 2 e^(-L) exactly.
    """
    h = _poisson_truncation(mean, tail)
    p = _poisson_pmf(mean, h)
    w = np.zeros((h + 1, h + 1))
    for n in range(0, h + 1):
        shifted = np.zeros(h + 1)
        shifted[n:] = p[:h + 1 - n]
        w += p[n] * np.outer(shifted, shifted)
        if n >= 1:
            w[n, n] -= p[n] * p[0] * p[0]
    return w[1:, 1:]


def _reflecting_joint_unit(lam, t, ux, uy, tail=1e-13):
    """Interior density of the unit-speed reflecting motion at time t.

    Mixture over the per-component switch counts (h, k) of products of
    conditional telegraph densities, weighted by _reflecting_weights.  The
    weight construction treats the h-n and k-n private flips and the n shared
    flips as if they merged into independent conditional components; shared
    flip times make the two components dependent beyond their counts, so this
    evaluation is a close approximation of the true interior density rather
    than an exact law (the governing-equation check resolves the difference).
    """
    ux = np.asarray(ux)
    uy = np.asarray(uy)
    shape = np.broadcast_shapes(ux.shape, uy.shape, np.shape(t))
    u = np.broadcast_to((ux + uy) / 2.0, shape).ravel()
    v = np.broadcast_to((ux - uy) / 2.0, shape).ravel()
    dtype = np.result_type(u, v)
    if np.ndim(t) == 0:
        m = t / 2.0
        w = _reflecting_weights(lam * t / 3.0, tail)
        hmax = w.shape[0]
        fu = np.empty((hmax, u.size), dtype=dtype)
        fv = np.empty((hmax, v.size), dtype=dtype)
        for i in range(hmax):
            fu[i] = conditional_density_poly(i + 1, m, u)
            fv[i] = conditional_density_poly(i + 1, m, v)
        out = 0.5 * np.einsum("hi,hk,ki->i", fu, w, fv)
        return out.reshape(shape) if shape else out[0]
    # weights depend on t through the Poisson mean: evaluate per t slice
    tflat = np.broadcast_to(t, shape).ravel()
    out = np.empty(u.size, dtype=dtype)
    for tv in np.unique(tflat):
        sel = tflat == tv
        wt = _reflecting_weights(lam * float(tv) / 3.0, tail)
        hh = wt.shape[0]
        m = tv / 2.0
        usel = u[sel]
        vsel = v[sel]
        fu = np.empty((hh, usel.size), dtype=dtype)
        fv = np.empty((hh, vsel.size), dtype=dtype)
        for i in range(hh):
            fu[i] = conditional_density_poly(i + 1, m, usel)
            fv[i] = conditional_density_poly(i + 1, m, vsel)
        out[sel] = 0.5 * np.einsum("hi,hk,ki->i", fu, wt, fv)
    return out.reshape(shape)


def joint_density(spec, x, y, t):
    """Interior ac density at (x, y); needs a constant rate.

    Standard family: exact product of the diagonal telegraphs.  Reflecting
    family: switch-count mixture as described in _reflecting_joint_unit.
    """
    lam = spec.effective_lambda()
    if t <= 0:
        raise ValueError("t must be positive")
    ux = x / spec.c_x
    uy = y / spec.c_y
    if abs(ux) + abs(uy) >= t * (1.0 - CLASS_TOL):
        raise DomainError("(x, y) is not strictly inside the support")
    if spec.family == "standard":
        val = _standard_joint_unit(lam, t, np.float64(ux), np.float64(uy))
    else:
        val = _reflecting_joint_unit(lam, t, np.float64(ux), np.float64(uy))
    return float(val) / (spec.c_x * spec.c_y)


def joint_density_field(spec, tail=1e-12):
    """f(t, x, y) callback for grid evaluation (no domain clamping)."""
    lam = spec.effective_lambda()

    def fld(t, x, y):
        ux = np.asarray(x) / spec.c_x
        uy = np.asarray(y) / spec.c_y
        if spec.family == "standard":
            val = _standard_joint_unit(lam, t, ux, uy)
        else:
            val = _reflecting_joint_unit(lam, t, ux, uy, tail=tail)
        return val / (spec.c_x * spec.c_y)

    return fld


# ---------------------------------------------------------------------------
# boundary, diagonal, L1 and marginal laws (symmetric speeds, constant rate)


def _require_closed_form(spec):
    if not spec.is_symmetric:
        raise UnsupportedVariant("closed form needs equal axis speeds")
    return spec.effective_lambda(), spec.c


def boundary_density(spec, eta, t):
    """Density along each open border side, parametrized by eta in (-ct, ct).

    On the side x + y = ct the coordinate is eta = x - y; all four sides carry
    the same law by symmetry.  The value is exp(-a L) / 4 times the ac density
    of a half-speed telegraph at eta/2, where a = 1/2 and the telegraph rate is
    lambda/2 for the standard family, a = 2/3 and rate lambda/3 for the
    reflecting family.  Each side integrates to (e^(-aL) - e^(-L)) / 2.
    """
    lam, c = _require_closed_form(spec)
    if t <= 0:
        raise ValueError("t must be positive")
    if abs(eta) >= c * t:
        raise DomainError("|eta| >= c t")
    return float(_boundary_unit(spec.family, lam, c, t, np.float64(eta)))


def _boundary_unit(family, lam, c, t, eta):
    t_arr = np.asarray(t)
    if t_arr.dtype.kind != "f":
        t_arr = t_arr.astype(np.float64)
    if family == "standard":
        return np.exp(-lam * t_arr / 2.0) / 4.0 * ac_density(lam / 2.0, c / 2.0, t, eta / 2.0)
    return np.exp(-2.0 * lam * t_arr / 3.0) / 4.0 * ac_density(lam / 3.0, c / 2.0, t, eta / 2.0)


def boundary_density_field(spec):
    """f(t, eta) callback for grid evaluation."""
    lam, c = _require_closed_form(spec)
    fam = spec.family

    def fld(t, eta):
        return _boundary_unit(fam, lam, c, t, np.asarray(eta))

    return fld


def boundary_density_conditional(spec, n, eta, t):
    """Joint density of (landing on one fixed side, coordinate eta) given n switches.

    Standard family, n = 2k+1:
        (2k+1)! / (2 k!^2) (c^2 t^2 - eta^2)^k / (4 c t)^(2k+1)
    and each even count n = 2k+2 gives exactly half the n = 2k+1 value.  The
    reflecting family multiplies the standard value by (2/3)^n: a border path
    must alternate between the two directions spanning the side, and each
    switch picks the single continuing direction with probability 1/2
    (standard) or 1/3 (reflecting).  Integral over the side: 2^-(n+1), resp.
    3^-n / 2.
    """
    lam, c = _require_closed_form(spec)
    if int(n) != n or n < 1:
        raise ValueError("n must be an integer >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    m = c * t
    if abs(eta) >= m:
        raise DomainError("|eta| >= c t")
    n = int(n)
    val = _side_conditional_std(n, m, np.float64(eta))
    if spec.family == "reflecting":
        val = val * (2.0 / 3.0) ** n
    return float(val)


def _side_conditional_std(n, m, eta):
    if n % 2 == 0:
        return 0.5 * _side_conditional_std(n - 1, m, eta)
    k = (n - 1) // 2
    coef = math.factorial(2 * k + 1) / (2.0 * math.factorial(k) ** 2)
    return coef * (m * m - eta * eta) ** k / (4.0 * m) ** (2 * k + 1)


def diagonal_density(spec, x, t):
    """Density on the open diagonal y = 0 of the reflecting family.

    Equals the border-side law: exp(-2L/3)/4 times the half-speed rate
    lambda/3 telegraph ac density at x/2.  Each diagonal integrates to
    (e^(-2L/3) - e^(-L)) / 2.  Standard-family motions put no mass there.
    """
    if spec.family != "reflecting":
        raise UnsupportedVariant("diagonal atoms exist only for the reflecting family")
    lam, c = _require_closed_form(spec)
    if t <= 0:
        raise ValueError("t must be positive")
    if abs(x) >= c * t:
        raise DomainError("|x| >= c t")
    return float(_boundary_unit("reflecting", lam, c, t, np.float64(x)))


def l1_distance_density(spec, z, t):
    """Density of the L1 displacement Z = |X| + |Y| on (0, ct), standard family.

    Z = 2 max(|U|, |V|) for the independent diagonal components, which gives
    4 p(z/2) \\int_0^{z/2} p, with p the ac density of the half-rate half-speed
    telegraph.  The ac part integrates to (1 - e^(-L/2))^2; the border mass
    sits at z = ct.
    """
    if spec.family != "standard":
        raise UnsupportedVariant("L1 closed form covers the standard family")
    lam, c = _require_closed_form(spec)
    if t <= 0:
        raise ValueError("t must be positive")
    if not 0.0 <= z < c * t:
        raise DomainError("need 0 <= z < c t")
    if z == 0.0:
        return 0.0
    outer = float(ac_density(lam / 2.0, c / 2.0, t, np.float64(z / 2.0)))
    inner = specfun.integrate(lambda w: float(ac_density(lam / 2.0, c / 2.0, t, np.float64(w))),
                              0.0, z / 2.0, 1e-11)
    return 4.0 * outer * inner


def marginal_singular(spec, t):
    """Atoms of the X marginal: {'edge': mass at each of ±ct, 'zero': mass at 0}."""
    if t <= 0:
        raise ValueError("t must be positive")
    try:
        lam = spec.effective_cumulative(t)
    except DivergentIntegral:
        lam = math.inf
    e1 = math.exp(-lam)
    if spec.family == "standard":
        return {"edge": e1 / 4.0, "zero": e1 / 2.0}
    return {"edge": e1 / 4.0, "zero": math.exp(-2.0 * lam / 3.0) / 2.0}


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _marginal_conv_unit(lam, t, x):
    """ac density of X for the unit-speed standard motion, elementwise.

    Convolution of the two half-speed component laws: ac*ac by fixed-order
    Gauss-Legendre over the support overlap, plus the component atoms riding
    on the other component's ac part.
    """
    x = np.asarray(x)
    tt = np.asarray(t)
    dtype = np.result_type(x, tt, np.float64)
    m = tt / 2.0
    lo = np.maximum(-m, x - m)
    hi = np.minimum(m, x + m)
    width = np.clip(hi - lo, 0.0, None)
    nodes = _GL_NODES.astype(dtype)
    wts = _GL_WEIGHTS.astype(dtype)
    shp = np.broadcast(x, tt).shape
    lo_b = np.broadcast_to(lo, shp)[..., None]
    w_b = np.broadcast_to(width, shp)[..., None]
    ww = lo_b + (nodes + 1.0) * 0.5 * w_b
    f = ac_density(lam / 2.0, 0.5, np.broadcast_to(tt, shp)[..., None], ww) \
        * ac_density(lam / 2.0, 0.5, np.broadcast_to(tt, shp)[..., None],
                     np.broadcast_to(x, shp)[..., None] - ww)
    conv = (f * wts).sum(axis=-1) * np.broadcast_to(width, shp) * 0.5
    # each component's edge atom (mass e^(-L/2)/2) rides on the other's ac
    # part, once per component, so the shifted terms carry twice that mass
    atom = np.exp(-lam * tt / 2.0)
    shift = ac_density(lam / 2.0, 0.5, tt, x - m) + ac_density(lam / 2.0, 0.5, tt, x + m)
    return conv + atom * shift


def marginal_density(spec, x, t):
    """ac density of the X coordinate on (-ct, ct), standard family."""
    if spec.family != "standard":
        raise UnsupportedVariant("marginal closed form covers the standard family")
    lam, c = _require_closed_form(spec)
    if t <= 0:
        raise ValueError("t must be positive")
    if abs(x) >= c * t:
        raise DomainError("|x| >= c t")
    return float(_marginal_conv_unit(lam, t, np.float64(x / c))) / c


def marginal_density_field(spec):
    """f(t, x) callback for grid evaluation."""
    lam, c = _require_closed_form(spec)
    if spec.family != "standard":
        raise UnsupportedVariant("marginal closed form covers the standard family")

    def fld(t, x):
        return _marginal_conv_unit(lam, t, np.asarray(x) / c) / c

    return fld


def marginal_sample_batch(spec, t, n, rng):
    """Positions of the X coordinate sampled through its three-speed chain.

    The X velocity is a Markov chain on {-c, 0, +c} driven by the switching
    events: standard kernel sends ±c -> 0 surely and 0 -> ±c with 1/2 each;
    the reflecting kernel sends 0 -> {0, +c, -c} with 1/3 each and ±c -> 0
    with 2/3, ±c -> ∓c with 1/3.  q-variants keep the state with probability
    1-q at each event.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    out = np.empty(n)
    q = spec.q
    refl = spec.family == "reflecting"
    done = 0
    while done < n:
        m = min(CHUNK, n - done)
        counts, times = sample_event_matrix(spec.rate, t, m, rng)
        kmax = times.shape[1]
        u0 = rng.random(m)
        state = np.where(u0 < 0.25, 1, np.where(u0 < 0.75, 0, -1)).astype(np.int8)
        bounds = np.concatenate([np.zeros((m, 1)), times, np.full((m, 1), float(t))], axis=1)
        pos = np.zeros(m)
        u = rng.random((m, kmax))
        for j in range(kmax):
            pos += state * (bounds[:, j + 1] - bounds[:, j])
            active = j < counts
            w = u[:, j]
            moved = active & (w >= 1.0 - q)
            ww = (w - (1.0 - q)) / q
            if refl:
                new = np.where(state == 0,
                               np.where(ww < 1.0 / 3.0, 0,
                                        np.where(ww < 2.0 / 3.0, 1, -1)),
                               np.where(ww < 2.0 / 3.0, 0, -state))
            else:
                new = np.where(state == 0, np.where(ww < 0.5, 1, -1), 0)
            state = np.where(moved, new, state).astype(np.int8)
        pos += state * (float(t) - bounds[:, kmax])
        out[done:done + m] = spec.c_x * pos
        done += m
    return out


def marginal_sampler(spec, t, rng):
    """One draw of the X coordinate through the three-speed chain."""
    return float(marginal_sample_batch(spec, t, 1, rng)[0])


def conjecture_l1_reflecting(spec, u, t, n_paths=1_000_000, rng=None):
    """Candidate closed form for P(|X| + |Y| < u) of the reflecting motion,
    with a Monte Carlo estimate alongside.

    Candidate: F(u) = (2 I_S(u/2))^2 + e^(-L) * 2 I_T(min(u, ct/2)), where I_S
    integrates the ac density of a rate-(2 lambda/3) half-speed telegraph (the
    diagonal component of a standard motion of rate 4 lambda/3) and I_T the ac
    density of a rate-(lambda/3) half-speed telegraph.  At u = ct this equals
    (1 - e^(-2L/3))^2 + e^(-L)(1 - e^(-L/3)), which is exactly the interior
    plus diagonal mass.  The interior values are a conjecture: only the
    endpoint identity is asserted.
    """
    if spec.family != "reflecting":
        raise UnsupportedVariant("the candidate law covers the reflecting family")
    lam, c = _require_closed_form(spec)
    if t <= 0:
        raise ValueError("t must be positive")
    if not 0.0 <= u <= c * t * (1.0 + CLASS_TOL):
        raise DomainError("need 0 <= u <= c t")
    big_l = lam * t
    if u >= c * t * (1.0 - CLASS_TOL):
        conj = (1.0 - math.exp(-2.0 * big_l / 3.0)) ** 2 \
            + math.exp(-big_l) * (1.0 - math.exp(-big_l / 3.0))
    elif u == 0.0:
        conj = 0.0
    else:
        def ac_s(w):
            return float(ac_density(2.0 * lam / 3.0, c / 2.0, t, np.float64(w)))

        def ac_t(w):
            return float(ac_density(lam / 3.0, c / 2.0, t, np.float64(w)))

        i_s = specfun.integrate(ac_s, 0.0, u / 2.0, 1e-11)
        i_t = specfun.integrate(ac_t, 0.0, min(u, c * t / 2.0), 1e-11)
        conj = (2.0 * i_s) ** 2 + math.exp(-big_l) * 2.0 * i_t
    if rng is None:
        rng = np.random.default_rng(0)
    x, y, _ = sample_endpoints(spec, t, n_paths, rng)
    hits = np.count_nonzero(np.abs(x) / spec.c_x + np.abs(y) / spec.c_y < u / c)
    phat = hits / n_paths
    stderr = math.sqrt(max(phat * (1.0 - phat), 1e-300) / n_paths)
    return {"conjectured": conj, "mc": phat, "mc_stderr": stderr}


def equilibrium_time(spec):
    """Time at which the ac mass of a standard-family motion equals its border mass.

    Happens when the effective cumulative rate hits
    EQUILIBRIUM_LEVEL = -2 log(1 - 1/sqrt(2)).  Raises NoRoot when the
    cumulative rate stays below that level.
    """
    if spec.family != "standard":
        raise UnsupportedVariant("equilibrium of ac vs border mass is a standard-family notion")
    if not spec.rate.integrable_at_zero:
        raise NoRoot("divergent cumulative rate: ac mass is 1 for every t > 0")
    target = EQUILIBRIUM_LEVEL / spec.q
    hi = 1.0
    for _ in range(80):
        if spec.rate.cumulative(hi) >= target:
            break
        hi *= 2.0
    else:
        raise NoRoot(f"cumulative rate never reaches {target}")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if spec.rate.cumulative(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
