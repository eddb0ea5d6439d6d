"""Bessel evaluation and quadrature wrapper."""

import math

import numpy as np
import pytest
from scipy import special

from orthomotion import specfun
from orthomotion.errors import DomainError, NonConvergent


def test_i0_matches_scipy_across_branches():
    # crosses the series/asymptotic switch at 15
    x = np.concatenate([np.linspace(0.0, 14.9, 61), np.linspace(15.1, 80.0, 61)])
    got = specfun.bessel_i0(x)
    want = special.i0(x)
    assert np.allclose(got, want, rtol=5e-14, atol=0.0)


def test_i1_matches_scipy_across_branches():
    x = np.concatenate([np.linspace(0.0, 14.9, 61), np.linspace(15.1, 80.0, 61)])
    got = specfun.bessel_i1(x)
    want = special.i1(x)
    assert np.allclose(got, want, rtol=5e-14, atol=1e-300)


def test_i1_is_odd():
    assert specfun.bessel_i1(-2.0) == -specfun.bessel_i1(2.0)
    assert specfun.bessel_i1(0.0) == 0.0


def test_branches_agree_at_the_crossover():
    # both branches must match the reference right at the seam
    c = specfun.SERIES_ASYMPTOTIC_CROSSOVER
    for x in (c - 1e-9, c, c + 1e-9):
        assert specfun.bessel_i0(x) == pytest.approx(special.i0(x), rel=1e-13)
        assert specfun.bessel_i1(x) == pytest.approx(special.i1(x), rel=1e-13)


def test_dtype_preserved():
    x = np.asarray([0.5, 20.0], dtype=np.longdouble)
    assert specfun.bessel_i0(x).dtype == np.longdouble
    assert specfun.bessel_i1(x).dtype == np.longdouble
    assert isinstance(float(specfun.bessel_i0(1.0)), float)


def test_frozen_values():
    # mpmath besseli to 17 digits
    assert specfun.bessel_i0(1.0) == pytest.approx(1.2660658777520083, rel=1e-15)
    assert specfun.bessel_i0(0.5) == pytest.approx(1.0634833707413235, rel=1e-15)
    assert specfun.bessel_i1(1.0) == pytest.approx(0.56515910399248503, rel=1e-15)
    assert specfun.bessel_i1(0.5) == pytest.approx(0.25789430539089632, rel=1e-15)


def test_bessel_arg_validation():
    specfun.BesselArg(nu=1.0, c=1.0, t=1.0, x=0.999)
    with pytest.raises(DomainError):
        specfun.BesselArg(nu=1.0, c=1.0, t=1.0, x=1.0001)
    with pytest.raises(DomainError):
        specfun.BesselArg(nu=-1.0, c=1.0, t=1.0, x=0.0)
    with pytest.raises(DomainError):
        specfun.BesselArg(nu=1.0, c=0.0, t=1.0, x=0.0)


def test_i0_time_derivative_example():
    # z = 0.5 at the origin: I1(0.5)/0.5 * nu^2 c^2 t = I1(0.5) * 0.5
    arg = specfun.BesselArg(nu=1.0, c=0.5, t=1.0, x=0.0)
    assert specfun.i0_time_derivative(arg) == pytest.approx(0.12894715269544816, rel=1e-14)


def test_i0_dt_matches_finite_difference():
    nu, c, t, x = 1.3, 0.7, 1.1, 0.4
    h = 1e-6

    def f(tt):
        return float(specfun.bessel_i0(nu * math.sqrt(c * c * tt * tt - x * x)))

    fd = (f(t + h) - f(t - h)) / (2.0 * h)
    got = specfun.i0_dt(nu, c, t, np.float64(x))
    assert got == pytest.approx(fd, rel=1e-8)


def test_i0_dt_light_cone_edge():
    # z -> 0: I1(z)/z -> 1/2, so the limit is nu^2 c^2 t / 2
    got = specfun.i0_dt(1.0, 1.0, 1.0, np.float64(1.0))
    assert got == pytest.approx(0.5, rel=1e-13)


def test_i0_dt_scalar_and_array():
    v = specfun.i0_dt(1.0, 0.5, 1.0, np.float64(0.0))
    assert isinstance(v, float)
    arr = specfun.i0_dt(1.0, 0.5, 1.0, np.array([0.0, 0.1, 0.3]))
    assert arr.shape == (3,)
    assert arr[0] == pytest.approx(v, rel=1e-15)


def test_i0_dt_domain_check():
    with pytest.raises(DomainError):
        specfun.i0_dt(1.0, 1.0, 1.0, np.float64(1.5))
    # validate=False skips the check for grid callers that clamp themselves
    specfun.i0_dt(1.0, 1.0, 1.0, np.float64(0.5), validate=False)


def test_integrate_known_value():
    # int_0^1 I0(s) ds, mpmath quad to 17 digits
    got = specfun.integrate(lambda s: float(specfun.bessel_i0(s)), 0.0, 1.0, 1e-12)
    assert got == pytest.approx(1.0865210970235898, abs=1e-12)


def test_integrate_rejects_divergent():
    with pytest.raises(NonConvergent):
        specfun.integrate(lambda s: 1.0 / s, 0.0, 1.0, 1e-10)
