"""Switching intensities lambda(t) and non-homogeneous Poisson event sampling.

Four named rate families are built in:

* ``const:a``   -- lambda(t) = a
* ``foong:a``   -- lambda(t) = a / t   (not integrable at zero)
* ``tanh:a``    -- lambda(t) = a tanh(a t)
* ``coth:a``    -- lambda(t) = a coth(a t)   (not integrable at zero)

plus ``custom`` for user callables.  Sampling uses thinning against a constant
majorant taken as 1.01 times the dense maximum of the rate over the horizon;
the constant family is the exact no-rejection special case.
"""

import math

import numpy as np
from scipy.integrate import quad

from .errors import DivergentIntegral, NoMajorant, NonIntegrableRate

_MAJORANT_POINTS = 1024
_MAJORANT_SAFETY = 1.01
_FD_STEP = 1e-6
_QUAD_ABS_TOL = 1e-12

# Batch samplers draw this many paths per chunk.  Fixed so that results do not
# depend on memory pressure or thread hints.
CHUNK = 1 << 18


class RateFunction:
    """An intensity lambda(t) >= 0 with its cumulative integral and derivatives.

    Build instances with the module factories (constant, foong_van_kolck,
    iacus_tanh, garra_coth, custom) or with parse().  ``cumulative`` falls back
    to adaptive quadrature and the derivatives to central differences when no
    closed form was supplied.
    """

    __slots__ = ("kind", "param", "integrable_at_zero", "_fn", "_cum", "_d1", "_d2")

    def __init__(self, kind, param, fn, cumulative=None, deriv1=None, deriv2=None,
                 integrable_at_zero=True):
        self.kind = kind
        self.param = param
        self._fn = fn
        self._cum = cumulative
        self._d1 = deriv1
        self._d2 = deriv2
        self.integrable_at_zero = integrable_at_zero

    def __call__(self, t):
        return self._fn(np.asarray(t, dtype=np.float64))

    @property
    def is_constant(self):
        return self.kind == "const"

    @property
    def constant_value(self):
        if not self.is_constant:
            raise ValueError("rate is not constant")
        return self.param

    def cumulative(self, t):
        """Lambda(t) = integral of the rate over (0, t]."""
        if not self.integrable_at_zero:
            raise DivergentIntegral(f"{self.kind} rate is not integrable at zero")
        t = float(t)
        if t <= 0.0:
            return 0.0
        if self._cum is not None:
            return float(self._cum(t))
        val, _ = quad(lambda s: float(self._fn(np.float64(s))), 0.0, t,
                      epsabs=_QUAD_ABS_TOL, epsrel=1e-12, limit=400)
        return float(val)

    def deriv1(self, t):
        if self._d1 is not None:
            return self._d1(np.asarray(t, dtype=np.float64))
        t = np.asarray(t, dtype=np.float64)
        h = np.maximum(_FD_STEP, _FD_STEP * np.abs(t))
        return (self._fn(t + h) - self._fn(t - h)) / (2.0 * h)

    def deriv2(self, t):
        if self._d2 is not None:
            return self._d2(np.asarray(t, dtype=np.float64))
        t = np.asarray(t, dtype=np.float64)
        h = np.maximum(_FD_STEP, _FD_STEP * np.abs(t))
        return (self._fn(t + h) - 2.0 * self._fn(t) + self._fn(t - h)) / (h * h)

    def scaled(self, factor):
        """The rate factor * lambda(t), with closed forms carried along."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        if self.kind == "const":
            return constant(factor * self.param)
        base = self
        return RateFunction(
            kind=f"scaled({factor})*{self.kind}",
            param=self.param,
            fn=lambda t: factor * base._fn(np.asarray(t, dtype=np.float64)),
            cumulative=(None if base._cum is None else (lambda t: factor * base._cum(t))),
            deriv1=(None if base._d1 is None else (lambda t: factor * base._d1(t))),
            deriv2=(None if base._d2 is None else (lambda t: factor * base._d2(t))),
            integrable_at_zero=base.integrable_at_zero,
        )

    def majorant(self, horizon):
        """A finite constant upper bound for the rate on (0, horizon]."""
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.is_constant:
            return float(self.param)
        tt = np.linspace(horizon / _MAJORANT_POINTS, horizon, _MAJORANT_POINTS)
        vals = np.asarray(self._fn(tt), dtype=np.float64)
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise NoMajorant("rate is not finite and nonnegative over the horizon")
        return float(vals.max() * _MAJORANT_SAFETY)

    def describe(self):
        return {"kind": self.kind, "param": self.param,
                "integrable_at_zero": self.integrable_at_zero}

    def __repr__(self):
        return f"RateFunction({self.kind}, param={self.param})"


def constant(lam):
    """Constant rate lambda(t) = lam."""
    lam = float(lam)
    if lam < 0:
        raise ValueError("rate must be nonnegative")
    return RateFunction(
        kind="const", param=lam,
        fn=lambda t: np.full_like(np.asarray(t, dtype=np.float64), lam),
        cumulative=lambda t: lam * t,
        deriv1=lambda t: np.zeros_like(np.asarray(t, dtype=np.float64)),
        deriv2=lambda t: np.zeros_like(np.asarray(t, dtype=np.float64)),
    )


def foong_van_kolck(lam):
    """lambda(t) = lam / t; the integral diverges at zero."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("parameter must be positive")
    return RateFunction(
        kind="foong", param=lam,
        fn=lambda t: lam / t,
        deriv1=lambda t: -lam / (t * t),
        deriv2=lambda t: 2.0 * lam / (t * t * t),
        integrable_at_zero=False,
    )


def _log_cosh(x):
    # stable: log cosh x = |x| + log1p(exp(-2|x|)) - log 2
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def iacus_tanh(lam):
    """lambda(t) = lam tanh(lam t), with Lambda(t) = log cosh(lam t)."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("parameter must be positive")
    return RateFunction(
        kind="tanh", param=lam,
        fn=lambda t: lam * np.tanh(lam * t),
        cumulative=lambda t: _log_cosh(lam * t),
        deriv1=lambda t: lam * lam / np.cosh(lam * t) ** 2,
        deriv2=lambda t: -2.0 * lam ** 3 * np.tanh(lam * t) / np.cosh(lam * t) ** 2,
    )


def garra_coth(lam):
    """lambda(t) = lam coth(lam t); the integral diverges at zero."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("parameter must be positive")
    return RateFunction(
        kind="coth", param=lam,
        fn=lambda t: lam / np.tanh(lam * t),
        deriv1=lambda t: -(lam / np.sinh(lam * t)) ** 2,
        deriv2=lambda t: 2.0 * lam ** 3 * np.cosh(lam * t) / np.sinh(lam * t) ** 3,
        integrable_at_zero=False,
    )


def custom(fn, cumulative=None, deriv1=None, deriv2=None, integrable_at_zero=True,
           label="custom"):
    """Wrap a user-supplied vectorized rate callable."""
    return RateFunction(kind=label, param=None, fn=lambda t: np.asarray(fn(t), dtype=np.float64),
                        cumulative=cumulative, deriv1=deriv1, deriv2=deriv2,
                        integrable_at_zero=integrable_at_zero)


_FACTORY = {"const": constant, "foong": foong_van_kolck,
            "tanh": iacus_tanh, "coth": garra_coth}


def parse(text):
    """Parse a rate string such as 'const:1.0', 'tanh:2.0', 'coth:1.5', 'foong:1.0'."""
    name, sep, arg = text.partition(":")
    name = name.strip().lower()
    if name not in _FACTORY:
        raise ValueError(f"unknown rate family {name!r}; expected one of {sorted(_FACTORY)}")
    if not sep or not arg.strip():
        raise ValueError(f"rate {name!r} needs a numeric parameter, e.g. '{name}:1.0'")
    return _FACTORY[name](float(arg))


class EventTimes:
    """Event times of one Poisson path on (0, horizon], strictly increasing."""

    __slots__ = ("horizon", "times")

    def __init__(self, horizon, times):
        self.horizon = float(horizon)
        self.times = np.asarray(times, dtype=np.float64)

    @property
    def count(self):
        return int(self.times.size)

    def __repr__(self):
        return f"EventTimes(horizon={self.horizon}, count={self.count})"


def sample_poisson(rate, horizon, rng):
    """One path of the non-homogeneous Poisson process driven by ``rate``.

    Constant rates use the exact order-statistics construction; other rates are
    thinned against the constant majorant.  Raises NonIntegrableRate when the
    rate has a divergent integral at zero (the expected count is infinite).
    """
    if not rate.integrable_at_zero:
        raise NonIntegrableRate(f"{rate.kind} rate has divergent integral; no finite path")
    horizon = float(horizon)
    if horizon <= 0:
        return EventTimes(horizon, np.empty(0))
    if rate.is_constant:
        n = rng.poisson(rate.param * horizon)
        return EventTimes(horizon, np.sort(rng.random(n)) * horizon)
    m = rate.majorant(horizon)
    if m == 0.0:
        return EventTimes(horizon, np.empty(0))
    n = rng.poisson(m * horizon)
    props = np.sort(rng.random(n)) * horizon
    keep = rng.random(n) < np.asarray(rate(props), dtype=np.float64) / m
    return EventTimes(horizon, props[keep])


def sample_event_matrix(rate, horizon, n, rng):
    """(counts, times) for n paths; ``times`` is row-sorted, padded with ``horizon``.

    Rows with fewer events than columns hold the horizon in the trailing slots,
    which downstream alternating sums and segment differences rely on.
    """
    if not rate.integrable_at_zero:
        raise NonIntegrableRate(f"{rate.kind} rate has divergent integral; no finite path")
    if rate.is_constant:
        counts = rng.poisson(rate.param * horizon, n)
        kmax = max(int(counts.max(initial=0)), 1)
        u = rng.random((n, kmax))
        mask = np.arange(kmax)[None, :] < counts[:, None]
        times = np.sort(np.where(mask, u, 1.0), axis=1) * horizon
        return counts, times
    m = rate.majorant(horizon)
    if m == 0.0:
        return np.zeros(n, dtype=np.int64), np.full((n, 1), horizon)
    nprop = rng.poisson(m * horizon, n)
    kmax = max(int(nprop.max(initial=0)), 1)
    u = rng.random((n, kmax))
    mask = np.arange(kmax)[None, :] < nprop[:, None]
    props = np.sort(np.where(mask, u, 1.0), axis=1) * horizon
    accept = mask & (rng.random((n, kmax)) < np.asarray(rate(props)) / m)
    times = np.sort(np.where(accept, props, horizon), axis=1)
    return accept.sum(axis=1), times


def cumulative_rate(rate, t):
    """Lambda(t); raises DivergentIntegral for rates that blow up at zero."""
    return rate.cumulative(t)
