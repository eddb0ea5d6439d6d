"""One-dimensional telegraph process.

A particle starts at the origin with velocity +v or -v (fair coin) and reverses
velocity at every event of the switching Poisson process.  The module provides
an exact sampler, the constant-rate closed-form law (two boundary atoms plus an
absolutely continuous Bessel density), the conditional densities given the
number of reversals, and the singular boundary mass for general rates.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DivergentIntegral, DomainError
from .rates import RateFunction, sample_event_matrix, sample_poisson


@dataclass(frozen=True)
class TelegraphSpec:
    speed: float
    rate: RateFunction

    def __post_init__(self):
        if self.speed <= 0:
            raise ValueError("speed must be positive")


@dataclass(frozen=True)
class TelegraphSample:
    position: float
    final_velocity: float
    switch_count: int


@dataclass(frozen=True)
class Density1D:
    """Mixed law at a fixed time: boundary atoms plus an ac density.

    ``atoms`` is a tuple of (location, mass) pairs; ``ac`` is a callable
    raising DomainError outside the open support, or None when no closed form
    exists (non-constant rates: simulate instead).
    """

    atoms: tuple
    ac: object
    t: float
    spec: TelegraphSpec

    def total_mass(self, abs_tol=1e-10):
        mass = sum(m for _, m in self.atoms)
        if self.ac is not None:
            vt = self.spec.speed * self.t
            mass += specfun.integrate(self.ac, -vt, vt, abs_tol)
        return mass


def alternating_sum(counts, times, horizon):
    """Endpoint functional A = (-1)^n t + 2 sum_k (-1)^(k-1) s_k of sorted switch times.

    ``times`` must be row-sorted and padded with ``horizon`` beyond each row's
    count; the position of a unit-speed telegraph path with initial sign +1 is
    exactly A.  Zero-event rows give A = horizon exactly, which keeps the
    boundary atoms exact in floating point.
    """
    counts = np.asarray(counts)
    kmax = times.shape[1]
    k = np.arange(1, kmax + 1)
    signs = np.where(k % 2 == 1, 1.0, -1.0)
    masked = np.where(np.arange(kmax)[None, :] < counts[:, None], times, 0.0)
    body = (masked * signs).sum(axis=1)
    return np.where(counts % 2 == 0, 1.0, -1.0) * horizon + 2.0 * body


def sample_telegraph_batch(spec, t, n, rng):
    """(positions, final_velocities, switch_counts) for n independent paths."""
    counts, times = sample_event_matrix(spec.rate, t, n, rng)
    a = alternating_sum(counts, times, t)
    s0 = rng.integers(0, 2, n) * 2 - 1
    positions = spec.speed * (s0 * a)
    velocities = spec.speed * (s0 * np.where(counts % 2 == 0, 1, -1))
    return positions, velocities, counts


def sample_telegraph(spec, t, rng):
    """One exact telegraph sample at time t."""
    events = sample_poisson(spec.rate, t, rng)
    sign = 1.0
    a = 0.0
    prev = 0.0
    for s in events.times:
        a += sign * (s - prev)
        sign = -sign
        prev = s
    a += sign * (t - prev)
    s0 = float(rng.integers(0, 2) * 2 - 1)
    return TelegraphSample(position=spec.speed * s0 * a,
                           final_velocity=spec.speed * s0 * sign,
                           switch_count=events.count)


def ac_density(mu, v, t, x):
    """Constant-rate telegraph ac density, elementwise and dtype-preserving.

    exp(-mu t)/(2v) [mu I0(z) + dI0/dt],  z = (mu/v) sqrt(v^2 t^2 - x^2);
    zero outside the open light cone.  No domain validation -- callers that
    must reject out-of-support queries wrap this.
    """
    t_arr = np.asarray(t)
    if t_arr.dtype.kind != "f":
        t_arr = t_arr.astype(np.float64)
    x_arr = np.asarray(x)
    if x_arr.dtype.kind != "f":
        x_arr = x_arr.astype(np.float64)
    dtype = np.result_type(t_arr, x_arr)
    t_arr = t_arr.astype(dtype, copy=False)
    x_arr = x_arr.astype(dtype, copy=False)
    s2 = (v * t_arr) ** 2 - x_arr * x_arr
    inside = s2 >= 0
    s2c = np.clip(s2, 0.0, None)
    z = (mu / v) * np.sqrt(s2c)
    dt_term = specfun.i0_dt(mu / v, v, t_arr, x_arr, validate=False)
    val = np.exp(-mu * t_arr) / (2.0 * v) * (mu * specfun.bessel_i0(z) + dt_term)
    return np.where(inside, val, np.zeros_like(val))


def density_field(mu, v):
    """f(t, x) callback evaluating the constant-rate ac density on grids."""
    def field(t, x):
        return ac_density(mu, v, t, x)
    return field


def telegraph_density_const(mu, v, t):
    """Closed-form constant-rate law: atoms exp(-mu t)/2 at ±vt plus ac part."""
    if mu < 0 or v <= 0 or t <= 0:
        raise ValueError("need mu >= 0, v > 0, t > 0")
    vt = v * t
    half = math.exp(-mu * t) / 2.0
    spec = TelegraphSpec(speed=v, rate=_const_rate(mu))

    def ac(x):
        x_arr = np.asarray(x, dtype=np.float64)
        if np.any(np.abs(x_arr) >= vt):
            raise DomainError(f"|x| >= v t = {vt}; the ac density lives on the open interval")
        return ac_density(mu, v, t, x_arr) if x_arr.ndim else float(ac_density(mu, v, t, x_arr))

    return Density1D(atoms=((-vt, half), (vt, half)), ac=ac, t=float(t), spec=spec)


def _const_rate(mu):
    from .rates import constant
    return constant(mu)


def telegraph_density(spec, t):
    """Law of the telegraph at time t for a general rate.

    Constant rates get the full closed form.  Other rates get the boundary
    atoms only (ac part unavailable in closed form -- use Monte Carlo), with
    zero atoms when the cumulative rate diverges.
    """
    if spec.rate.is_constant:
        return telegraph_density_const(spec.rate.param, spec.speed, t)
    half = singular_mass(spec, t) / 2.0
    vt = spec.speed * t
    return Density1D(atoms=((-vt, half), (vt, half)), ac=None, t=float(t), spec=spec)


def telegraph_conditional_density(n, v, t, x):
    """Density of the position given exactly n >= 1 reversals (symmetric start).

    With m = v t:
      n = 2k+1:  (2k+1)!/(k!)^2 (m^2-x^2)^k / (2m)^(2k+1)
      n = 2k  :  (2k)!/(k!(k-1)!) (m^2-x^2)^(k-1) / (2^(2k) m^(2k-1))
    Both n = 1 and n = 2 reduce to the uniform value 1/(2m).
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be an integer >= 1")
    if v <= 0 or t <= 0:
        raise ValueError("need v > 0, t > 0")
    m = v * t
    if abs(x) >= m:
        raise DomainError(f"|x| >= v t = {m}")
    return float(conditional_density_poly(int(n), m, np.float64(x)))


def conditional_density_poly(n, m, x):
    """Vectorized conditional-on-n density; no domain checks, dtype-preserving."""
    d = x * x
    s = m * m - d
    if n % 2 == 1:
        k = (n - 1) // 2
        coef = math.factorial(2 * k + 1) / (math.factorial(k) ** 2 * 2.0 ** (2 * k + 1))
        return coef * s ** k / m ** (2 * k + 1)
    k = n // 2
    coef = math.factorial(2 * k) / (math.factorial(k) * math.factorial(k - 1) * 2.0 ** (2 * k))
    return coef * s ** (k - 1) / m ** (2 * k - 1)


def singular_mass(spec, t):
    """Total boundary mass exp(-Lambda(t)), split equally between ±vt.

    Rates whose integral diverges (e.g. coth, foong) put zero mass on the
    boundary for every t > 0.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 1.0
    if not spec.rate.integrable_at_zero:
        return 0.0
    try:
        lam = spec.rate.cumulative(t)
    except DivergentIntegral:
        return 0.0
    return math.exp(-lam)
