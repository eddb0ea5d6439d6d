"""Modified Bessel functions and adaptive quadrature used by the closed-form laws.

I0 and I1 are evaluated by their power series for arguments up to 15 and by the
large-argument asymptotic expansion beyond that.  Both preserve the floating
dtype of the input, so density fields can be evaluated in extended precision
(np.longdouble) when finite-difference work needs it.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _sciint

from .errors import DomainError, NonConvergent

# Switch from the power series to the asymptotic expansion here.
SERIES_ASYMPTOTIC_CROSSOVER = 15.0

# Below this argument I1(z)/z is evaluated by its own series, which removes the
# 0/0 at the light-cone edge.
_SMALL_Z = 1e-6


def _as_float_array(x):
    arr = np.asarray(x)
    if arr.dtype.kind != "f":
        arr = arr.astype(np.float64)
    return arr


def _series_i0(x, eps):
    # sum_k (x^2/4)^k / k!^2, term ratio q/k^2
    q = x * x / 4.0
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 400):
        term = term * q / (k * k)
        total = total + term
        if not np.any(term > eps * total):
            break
    return total


def _series_i1(x, eps):
    # (x/2) * sum_k (x^2/4)^k / (k! (k+1)!), term ratio q/(k(k+1))
    q = x * x / 4.0
    term = x / 2.0
    total = term.copy()
    for k in range(1, 400):
        term = term * q / (k * (k + 1))
        total = total + term
        if not np.any(term > eps * total):
            break
    return total


def _asymptotic(x, mu, eps):
    # I_nu(x) ~ e^x/sqrt(2 pi x) * sum_k t_k,  t_0 = 1,
    # t_k = t_{k-1} * ((2k-1)^2 - mu) / (8 k x),  mu = 4 nu^2.
    # The series is divergent; stop at the smallest term.
    one = np.ones_like(x)
    term = one.copy()
    total = one.copy()
    prev_mag = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 40):
        term = term * (((2 * k - 1) ** 2 - mu) / (8.0 * k)) / x
        mag = np.abs(term)
        # freeze lanes whose terms stopped shrinking or became negligible
        active = active & (mag < prev_mag) & (mag > eps * np.abs(total))
        if not np.any(active):
            break
        total = np.where(active, total + term, total)
        prev_mag = mag
    return np.exp(x) / np.sqrt(2.0 * np.pi * x) * total


def _bessel(x, mu, series_fn):
    arr = _as_float_array(x)
    scalar = arr.ndim == 0
    arr = np.abs(np.atleast_1d(arr))
    if mu == 4:  # I1 is odd; callers pass x >= 0 in practice, keep |x| and sign
        sign = np.sign(np.atleast_1d(_as_float_array(x)))
        sign = np.where(sign == 0, 1.0, sign)
    eps = np.finfo(arr.dtype).eps * 0.25
    out = np.empty_like(arr)
    small = arr <= SERIES_ASYMPTOTIC_CROSSOVER
    if np.any(small):
        out[small] = series_fn(arr[small], eps)
    if np.any(~small):
        out[~small] = _asymptotic(arr[~small], mu, eps)
    if mu == 4:
        out = out * sign
    if scalar:
        return out[()] if out.ndim == 0 else out[0]
    return out


def bessel_i0(x):
    """Modified Bessel function I0, elementwise, dtype-preserving."""
    return _bessel(x, 0, _series_i0)


def bessel_i1(x):
    """Modified Bessel function I1, elementwise, dtype-preserving."""
    return _bessel(x, 4, _series_i1)


@dataclass(frozen=True)
class BesselArg:
    """Argument bundle nu * sqrt(c^2 t^2 - x^2) for the light-cone Bessel terms."""

    nu: float
    c: float
    t: float
    x: float

    def __post_init__(self):
        if self.nu < 0 or self.c <= 0 or self.t < 0:
            raise DomainError("need nu >= 0, c > 0, t >= 0")
        if abs(self.x) > self.c * self.t:
            raise DomainError("|x| > c t lies outside the light cone")


def i0_dt(nu, c, t, x, validate=True):
    """d/dt I0(nu sqrt(c^2 t^2 - x^2)) = I1(z)/z * nu^2 c^2 t, elementwise.

    The I1(z)/z factor is continued through z = 0 by its series, so the
    light-cone edge |x| = c t is a removable point.  With validate=True a point
    strictly outside the cone raises DomainError; with validate=False the
    square root is clamped (used by vectorized fields that stay inside).
    """
    scalar = np.ndim(t) == 0 and np.ndim(x) == 0
    t_arr = np.atleast_1d(_as_float_array(t))
    x_arr = np.atleast_1d(_as_float_array(x))
    dtype = np.result_type(t_arr, x_arr)
    s2 = (c * t_arr) ** 2 - x_arr * x_arr
    if validate and np.any(s2 < -4.0 * np.finfo(np.float64).eps * (c * np.max(t_arr)) ** 2):
        raise DomainError("|x| > c t lies outside the light cone")
    s2 = np.clip(s2, 0.0, None)
    z, scale = np.broadcast_arrays(nu * np.sqrt(s2), (nu * nu * c * c) * t_arr)
    ratio = np.empty(z.shape, dtype=dtype)
    small = z < _SMALL_Z
    if np.any(small):
        zz = z[small]
        ratio[small] = 0.5 * (1.0 + zz * zz / 8.0)
    if np.any(~small):
        zz = z[~small]
        ratio[~small] = bessel_i1(zz) / zz
    out = ratio * scale
    if scalar:
        return float(out.ravel()[0])
    return out


def i0_time_derivative(arg):
    """Time derivative of I0 along the light-cone argument, at a single point."""
    return i0_dt(arg.nu, arg.c, arg.t, arg.x, validate=True)


def integrate(f, a, b, abs_tol=1e-10):
    """Adaptive quadrature of f over [a, b] to absolute tolerance abs_tol.

    Raises NonConvergent when the estimated error cannot be brought below the
    tolerance (allowing for a small relative floor on large values).
    """
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", _sciint.IntegrationWarning)
        try:
            val, err = _sciint.quad(f, a, b, epsabs=abs_tol, epsrel=1e-12, limit=200)
        except _sciint.IntegrationWarning:
            try:
                val, err = _sciint.quad(f, a, b, epsabs=abs_tol, epsrel=1e-12, limit=800)
            except _sciint.IntegrationWarning as exc:
                raise NonConvergent(f"quadrature did not reach {abs_tol}") from exc
        except Exception as exc:  # quadpack signals hopeless integrands this way
            raise NonConvergent(str(exc)) from exc
    if not np.isfinite(val) or err > 10.0 * max(abs_tol, 1e-11 * abs(val)):
        raise NonConvergent(f"quadrature error estimate {err} above tolerance {abs_tol}")
    return float(val)
