"""One-dimensional telegraph process: sampler, density, conditional laws."""

import math

import numpy as np
import pytest

from orthomotion import specfun, telegraph
from orthomotion.errors import DomainError
from orthomotion.rates import constant, foong_van_kolck, iacus_tanh
from orthomotion.telegraph import TelegraphSpec


def test_alternating_sum_hand_example():
    # start +1 for 0.2, then -1 for 0.3, then +1 for 0.5
    counts = np.array([2])
    times = np.array([[0.2, 0.5]])
    got = telegraph.alternating_sum(counts, times, 1.0)
    assert got[0] == pytest.approx(0.2 - 0.3 + 0.5, abs=1e-15)


def test_alternating_sum_padding_is_inert():
    counts = np.array([1, 0])
    times = np.array([[0.25, 1.0], [1.0, 1.0]])  # padded with the horizon
    got = telegraph.alternating_sum(counts, times, 1.0)
    assert got[0] == pytest.approx(0.25 - 0.75, abs=1e-15)
    assert got[1] == 1.0  # zero switches: full drift, exactly the horizon


def test_ac_density_frozen_origin():
    # mpmath: e^{-1/2}/1 * (1/2 I0(z) + dI0/dt term) at x=0, mu=v=1/2, t=1
    got = float(telegraph.ac_density(0.5, 0.5, 1.0, np.float64(0.0)))
    assert got == pytest.approx(0.40072803681701088, rel=1e-14)


def test_ac_density_even_and_zero_outside():
    # on the cone edge the one-sided limit is kept; strictly outside is zero
    vals = telegraph.ac_density(1.0, 1.0, 1.0, np.array([-0.3, 0.3, 1.0, 1.7]))
    assert vals[0] == vals[1]
    assert vals[2] == pytest.approx(math.exp(-1.0) / 2.0 * 1.5, rel=1e-13)
    assert vals[3] == 0.0


def test_ac_density_longdouble_field():
    x = np.array([0.0, 0.25], dtype=np.longdouble)
    out = telegraph.ac_density(1.0, 1.0, np.longdouble(1.0), x)
    assert out.dtype == np.longdouble


def test_density_total_mass_is_one():
    d = telegraph.telegraph_density_const(0.8, 1.2, 1.5)
    assert d.total_mass() == pytest.approx(1.0, abs=1e-9)
    atom_mass = sum(m for _, m in d.atoms)
    assert atom_mass == pytest.approx(math.exp(-0.8 * 1.5), rel=1e-14)


def test_density_atoms_at_cone_edge():
    d = telegraph.telegraph_density_const(1.0, 2.0, 0.5)
    locs = sorted(loc for loc, _ in d.atoms)
    assert locs == [-1.0, 1.0]


def test_density_validates_domain():
    d = telegraph.telegraph_density_const(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        d.ac(1.0)
    assert d.ac(0.999) > 0


def test_density_nonconstant_rate_has_atoms_only():
    d = telegraph.telegraph_density(TelegraphSpec(speed=1.0, rate=iacus_tanh(1.0)), 1.0)
    assert d.ac is None
    atom_mass = sum(m for _, m in d.atoms)
    assert atom_mass == pytest.approx(math.exp(-math.log(math.cosh(1.0))), rel=1e-14)


def test_singular_mass():
    spec = TelegraphSpec(speed=1.0, rate=constant(2.0))
    assert telegraph.singular_mass(spec, 1.5) == pytest.approx(math.exp(-3.0), rel=1e-14)
    assert telegraph.singular_mass(spec, 0.0) == 1.0
    divergent = TelegraphSpec(speed=1.0, rate=foong_van_kolck(1.0))
    assert telegraph.singular_mass(divergent, 1.0) == 0.0


def test_conditional_density_small_counts_are_uniform():
    # one or two switches spread the path uniformly over the cone
    m = 2.0  # v t
    for n in (1, 2):
        v1 = telegraph.telegraph_conditional_density(n, 2.0, 1.0, 0.0)
        v2 = telegraph.telegraph_conditional_density(n, 2.0, 1.0, 1.3)
        assert v1 == pytest.approx(1.0 / (2.0 * m), rel=1e-14)
        assert v2 == pytest.approx(1.0 / (2.0 * m), rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_conditional_density_normalizes(n):
    got = specfun.integrate(
        lambda x: telegraph.telegraph_conditional_density(n, 1.0, 1.0, x),
        -1.0 + 1e-13, 1.0 - 1e-13, 1e-11)
    assert got == pytest.approx(1.0, abs=1e-9)


def test_conditional_density_domain_and_args():
    with pytest.raises(DomainError):
        telegraph.telegraph_conditional_density(1, 1.0, 1.0, 1.5)
    with pytest.raises(ValueError):
        telegraph.telegraph_conditional_density(0, 1.0, 1.0, 0.0)


def test_sampler_exact_atoms_and_support():
    rng = np.random.default_rng(5)
    spec = TelegraphSpec(speed=2.0, rate=constant(1.0))
    pos, vel, counts = telegraph.sample_telegraph_batch(spec, 1.5, 40_000, rng)
    assert np.all(np.abs(pos) <= 2.0 * 1.5 + 1e-12)
    assert set(np.unique(vel)) <= {-2.0, 2.0}
    still = counts == 0
    assert np.all(np.abs(pos[still]) == 3.0)  # exact, not approximate
    assert np.any(still)


def test_sampler_matches_density_chi2():
    # one-sample chi-square against the closed form, fixed stream
    from orthomotion import harness

    rng = np.random.default_rng(11)
    spec = TelegraphSpec(speed=1.0, rate=constant(1.0))
    pos, _, _ = telegraph.sample_telegraph_batch(spec, 1.0, 200_000, rng)
    d = telegraph.telegraph_density_const(1.0, 1.0, 1.0)
    rep = harness.chi_square_vs_density(pos, d, bins=30, name="telegraph")
    assert rep.p_value > 0.001


def test_scalar_sampler_consistent():
    rng = np.random.default_rng(9)
    spec = TelegraphSpec(speed=1.0, rate=iacus_tanh(2.0))
    s = telegraph.sample_telegraph(spec, 1.0, rng)
    assert abs(s.position) <= 1.0
    assert s.final_velocity in (-1.0, 1.0)
    assert s.switch_count >= 0


def test_density_field_energy_decay():
    # mass inside the cone is constant in t; peak decays
    fld = telegraph.density_field(1.0, 1.0)
    v1 = float(fld(1.0, np.float64(0.0)))
    v2 = float(fld(2.0, np.float64(0.0)))
    assert v2 < v1
