"""Planar samplers, classification, masses and every closed-form law."""

import math

import numpy as np
import pytest

from orthomotion import planar, specfun
from orthomotion.errors import DomainError, NoRoot, UnsupportedRate, UnsupportedVariant
from orthomotion.planar import MotionSpec
from orthomotion.rates import constant, foong_van_kolck, iacus_tanh


def std(lam=1.0, **kw):
    return MotionSpec(variant="standard", rate=constant(lam), **kw)


def refl(lam=1.0, **kw):
    return MotionSpec(variant="reflecting", rate=constant(lam), **kw)


# ---------------------------------------------------------------------------
# spec normalization and classification


def test_uniform_normalizes_to_qreflecting():
    spec = MotionSpec(variant="uniform", rate=constant(1.0))
    assert spec.variant == "qreflecting"
    assert spec.q == 0.75
    assert spec.effective_lambda() == 0.75


def test_plain_variants_force_q_one():
    spec = MotionSpec(variant="standard", rate=constant(1.0), q=0.3)
    assert spec.q == 1.0


def test_spec_validation():
    with pytest.raises(ValueError):
        MotionSpec(variant="spiral", rate=constant(1.0))
    with pytest.raises(ValueError):
        MotionSpec(variant="qstandard", rate=constant(1.0), q=0.0)
    with pytest.raises(ValueError):
        MotionSpec(variant="standard", rate=constant(1.0), c_x=0.0)


def test_asymmetric_speeds_block_scalar_c():
    spec = std(c_x=1.0, c_y=2.0)
    with pytest.raises(UnsupportedVariant):
        spec.c


def test_effective_lambda_needs_constant_rate():
    spec = MotionSpec(variant="standard", rate=iacus_tanh(1.0))
    with pytest.raises(UnsupportedRate):
        spec.effective_lambda()


def test_classify_codes_catalog():
    t = 1.0
    pts = {(0.2, 0.3): 0,
           (0.5, 0.5): 1, (-0.5, 0.5): 2, (-0.5, -0.5): 3, (0.5, -0.5): 4,
           (1.0, 0.0): 5, (0.0, 1.0): 6, (-1.0, 0.0): 7, (0.0, -1.0): 8,
           (0.4, 0.0): 9, (0.0, -0.4): 10}
    for (x, y), want in pts.items():
        assert planar.classify_codes(np.float64(x), np.float64(y), t) == want
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    got = planar.classify_codes(xs, ys, t)
    assert list(got) == list(pts.values())


def test_support_region_scales_speeds():
    spec = std(c_x=2.0, c_y=0.5)
    region = planar.SupportRegion(spec, 1.0)
    assert region.classify(2.0, 0.0) == "vertex-e"   # vertex at c_x * t
    assert region.classify(0.0, 0.5) == "vertex-n"
    assert region.classify(0.2, 0.1) == "interior"
    with pytest.raises(DomainError):
        region.classify(2.1, 0.0)


def test_uv_round_trip():
    spec = std(c_x=2.0, c_y=3.0)
    pair = planar.uv_from_xy(spec, 0.7, -0.4)
    x, y = planar.xy_from_uv(spec, pair)
    assert x == pytest.approx(0.7, abs=1e-15)
    assert y == pytest.approx(-0.4, abs=1e-15)


# ---------------------------------------------------------------------------
# masses


def test_singular_masses_standard_frozen():
    m = planar.singular_masses(std(), 1.0)
    assert m["vertex"] == pytest.approx(0.36787944117144232, rel=1e-14)
    assert m["side_total"] == pytest.approx(0.4773024370823822, rel=1e-14)
    assert m["diagonal_total"] == 0.0
    assert m["ac"] == pytest.approx(0.15481812174617547, rel=1e-13)
    assert sum(m.values()) == pytest.approx(1.0, abs=1e-15)


def test_singular_masses_reflecting_frozen():
    m = planar.singular_masses(refl(), 1.0)
    assert m["vertex"] == pytest.approx(0.36787944117144232, rel=1e-14)
    assert m["side_total"] == pytest.approx(0.29107535572229941, rel=1e-13)
    assert m["diagonal_total"] == pytest.approx(0.14553767786114971, rel=1e-13)
    assert m["ac"] == pytest.approx(0.19550752524510856, rel=1e-12)
    assert sum(m.values()) == pytest.approx(1.0, abs=1e-15)


def test_singular_masses_divergent_rate():
    spec = MotionSpec(variant="standard", rate=foong_van_kolck(1.0))
    m = planar.singular_masses(spec, 1.0)
    assert m["vertex"] == 0.0 and m["side_total"] == 0.0
    assert m["ac"] == 1.0


def test_q_thinning_shifts_masses():
    # qstandard(q, lam) carries the masses of standard(q lam)
    got = planar.singular_masses(
        MotionSpec(variant="qstandard", rate=constant(2.0), q=0.4), 1.0)
    want = planar.singular_masses(std(0.8), 1.0)
    for k in got:
        assert got[k] == pytest.approx(want[k], rel=1e-14)


# ---------------------------------------------------------------------------
# samplers


def test_sample_endpoints_exact_classes():
    rng = np.random.default_rng(2)
    spec = refl(c_x=2.0, c_y=0.5)
    x, y, codes = planar.sample_endpoints(spec, 1.0, 50_000, rng)
    assert np.all(np.abs(x) / 2.0 + np.abs(y) / 0.5 <= 1.0 + 1e-12)
    vert = np.isin(codes, planar.VERTEX_CODES)
    assert np.any(vert)
    # vertices are produced exactly, not within a tolerance
    on_axis_x = np.abs(x[vert]) == 2.0
    on_axis_y = np.abs(y[vert]) == 0.5
    assert np.all(on_axis_x | on_axis_y)
    diag = np.isin(codes, planar.DIAGONAL_CODES)
    assert np.any(diag)
    assert np.all((x[diag] == 0.0) | (y[diag] == 0.0))


def test_sample_endpoints_standard_has_no_diagonal_mass():
    rng = np.random.default_rng(3)
    _, _, codes = planar.sample_endpoints(std(), 1.0, 200_000, rng)
    assert not np.any(np.isin(codes, planar.DIAGONAL_CODES))


def test_sample_endpoints_chunk_boundary():
    from orthomotion.rates import CHUNK

    rng = np.random.default_rng(4)
    n = CHUNK + 7
    x, y, codes = planar.sample_endpoints(std(), 1.0, n, rng)
    assert x.shape == (n,) and y.shape == (n,) and codes.shape == (n,)


def test_sample_endpoints_return_counts():
    rng = np.random.default_rng(5)
    x, y, codes, counts = planar.sample_endpoints(std(), 1.0, 10_000, rng,
                                                  return_counts=True)
    assert counts.shape == x.shape
    still = counts == 0
    assert np.all(np.isin(codes[still], planar.VERTEX_CODES))


def test_sample_planar_path_consistency():
    rng = np.random.default_rng(6)
    spec = std(c_x=1.5, c_y=0.5)
    for _ in range(50):
        rec = planar.sample_planar(spec, 1.0, rng)
        assert rec.positions.shape == (rec.event_times.size + 2, 2)
        assert rec.directions.shape == (rec.event_times.size + 1,)
        # endpoint and label agree with the recorded trajectory
        assert rec.positions[-1, 0] == pytest.approx(rec.x, abs=1e-12)
        assert rec.positions[-1, 1] == pytest.approx(rec.y, abs=1e-12)
        # segment displacements follow the recorded directions
        bounds = np.concatenate([[0.0], rec.event_times, [rec.horizon]])
        for j, d in enumerate(rec.directions):
            seg = bounds[j + 1] - bounds[j]
            dx = planar._DX[d] * seg * 1.5
            dy = planar._DY[d] * seg * 0.5
            assert rec.positions[j + 1, 0] - rec.positions[j, 0] == pytest.approx(dx, abs=1e-12)
            assert rec.positions[j + 1, 1] - rec.positions[j, 1] == pytest.approx(dy, abs=1e-12)


def test_standard_kernel_always_turns():
    rng = np.random.default_rng(7)
    for _ in range(40):
        rec = planar.sample_planar(std(), 1.0, rng)
        d = rec.directions
        assert np.all((d[1:] - d[:-1]) % 2 == 1)  # always orthogonal turn


def test_decomposition_sampler_on_support():
    rng = np.random.default_rng(8)
    for variant in ("standard", "reflecting"):
        spec = MotionSpec(variant=variant, rate=constant(1.0))
        for _ in range(25):
            s = planar.sample_planar_via_decomposition(spec, 1.0, rng)
            assert abs(s.x) + abs(s.y) <= 1.0 + 1e-12
            assert s.direction in (0, 1, 2, 3)


def test_nonconstant_rate_sampling_works():
    rng = np.random.default_rng(9)
    spec = MotionSpec(variant="reflecting", rate=iacus_tanh(2.0))
    x, y, codes = planar.sample_endpoints(spec, 1.0, 5_000, rng)
    assert np.all(np.abs(x) + np.abs(y) <= 1.0 + 1e-12)


# ---------------------------------------------------------------------------
# joint density


def test_joint_density_frozen_origin():
    # e^{-1}/2 * ac(1/2,1/2 at 0)^2, mpmath to 17 digits
    got = planar.joint_density(std(), 0.0, 0.0, 1.0)
    assert got == pytest.approx(0.080291479745607815, rel=1e-13)


def test_joint_density_symmetries():
    spec = std()
    v = planar.joint_density(spec, 0.3, 0.2, 1.0)
    for xx, yy in ((-0.3, 0.2), (0.3, -0.2), (0.2, 0.3)):
        assert planar.joint_density(spec, xx, yy, 1.0) == pytest.approx(v, rel=1e-13)


def test_joint_density_domain():
    with pytest.raises(DomainError):
        planar.joint_density(std(), 0.7, 0.3, 1.0)  # on the border
    with pytest.raises(DomainError):
        planar.joint_density(std(), 2.0, 0.0, 1.0)


def test_joint_density_speed_scaling():
    v1 = planar.joint_density(std(), 0.1, 0.2, 1.0)
    v2 = planar.joint_density(std(c_x=2.0, c_y=2.0), 0.2, 0.4, 1.0)
    assert v2 == pytest.approx(v1 / 4.0, rel=1e-13)


def _gl_square_integral(fn, half, order=240):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    u = nodes * half
    w = weights * half
    vals = fn(u[:, None], u[None, :])
    return float(w @ vals @ w)


def test_standard_joint_integrates_to_ac_mass():
    # diagonal coordinates u = (x+y)/2, v = (x-y)/2 map the support rhombus
    # onto the square [-t/2, t/2]^2 with Jacobian dx dy = 2 du dv
    lam = 1.0
    total = _gl_square_integral(
        lambda u, v: planar._standard_joint_unit(lam, 1.0, u + v, u - v) * 2.0, 0.5)
    assert total == pytest.approx(planar.singular_masses(std(), 1.0)["ac"], abs=1e-9)


def test_reflecting_joint_integrates_to_ac_mass():
    # weights sum to the ac mass and the conditional factors normalize, so the
    # approximate interior law carries exactly the right total mass
    lam = 1.0
    total = _gl_square_integral(
        lambda u, v: planar._reflecting_joint_unit(lam, 1.0, u + v, u - v) * 2.0, 0.5)
    assert total == pytest.approx(planar.singular_masses(refl(), 1.0)["ac"], abs=1e-9)


def test_reflecting_joint_close_to_monte_carlo_cell():
    # 1e8-path Monte Carlo of the cell (0.3 +- 0.05) x (0.2 +- 0.05):
    # 1.046375e-3 (stderr ~ 3e-7).  The series is a close approximation, not
    # an exact law; here it overshoots the true cell mass by about one
    # percent, far beyond the Monte Carlo error.  Pin that level of agreement.
    nodes, weights = np.polynomial.legendre.leggauss(48)
    xs = 0.3 + 0.05 * nodes
    ys = 0.2 + 0.05 * nodes
    w = weights * 0.05
    vals = np.array([[planar.joint_density(refl(), float(x), float(y), 1.0)
                      for y in ys] for x in xs])
    cell = float(w @ vals @ w)
    assert cell == pytest.approx(1.046375e-3, rel=2e-2)
    assert abs(cell - 1.046375e-3) > 1e-5   # the mismatch itself is real


# ---------------------------------------------------------------------------
# boundary, diagonal, conditional laws


def test_boundary_density_frozen_values():
    assert planar.boundary_density(std(), 0.0, 1.0) == pytest.approx(
        0.060763460133992516, rel=1e-13)
    assert planar.boundary_density(refl(), 0.0, 1.0) == pytest.approx(
        0.036694855243613332, rel=1e-13)


def test_boundary_density_integrates_to_side_mass():
    for spec, want in ((std(), 0.11932560927059555),
                       (refl(), 0.072768838930574853)):
        got = specfun.integrate(lambda e: planar.boundary_density(spec, e, 1.0),
                                -1.0 + 1e-12, 1.0 - 1e-12, 1e-10)
        assert got == pytest.approx(want, abs=1e-10)
        assert want == pytest.approx(
            planar.singular_masses(spec, 1.0)["side_total"] / 4.0, rel=1e-13)


def test_boundary_density_domain():
    with pytest.raises(DomainError):
        planar.boundary_density(std(), 1.0, 1.0)
    with pytest.raises(UnsupportedRate):
        planar.boundary_density(MotionSpec(variant="standard", rate=iacus_tanh(1.0)),
                                0.0, 1.0)


def test_diagonal_density_reflecting_only():
    assert planar.diagonal_density(refl(), 0.0, 1.0) == pytest.approx(
        0.036694855243613332, rel=1e-13)
    with pytest.raises(UnsupportedVariant):
        planar.diagonal_density(std(), 0.0, 1.0)
    got = specfun.integrate(lambda x: planar.diagonal_density(refl(), x, 1.0),
                            -1.0 + 1e-12, 1.0 - 1e-12, 1e-10)
    want = planar.singular_masses(refl(), 1.0)["diagonal_total"] / 2.0
    assert got == pytest.approx(want, abs=1e-10)


def test_conditional_boundary_one_switch_is_flat():
    # one switch: uniform over the side, 1/(8ct) standard, 1/(12ct) reflecting
    for eta in (0.0, 0.4, -0.7):
        assert planar.boundary_density_conditional(std(), 1, eta, 1.0) == pytest.approx(
            1.0 / 8.0, rel=1e-14)
        assert planar.boundary_density_conditional(refl(), 1, eta, 1.0) == pytest.approx(
            1.0 / 12.0, rel=1e-14)


def test_conditional_boundary_even_vs_previous_odd():
    # standard: conditioned on n = 2k switches the shape matches n = 2k - 1 at
    # half the height; the reflecting laws carry an extra (2/3)^n, turning the
    # ratio into 1/3
    for spec, ratio in ((std(), 0.5), (refl(), 1.0 / 3.0)):
        for eta in (0.0, 0.3):
            a = planar.boundary_density_conditional(spec, 3, eta, 1.0)
            b = planar.boundary_density_conditional(spec, 4, eta, 1.0)
            assert b == pytest.approx(a * ratio, rel=1e-14)


@pytest.mark.parametrize("n,std_want,refl_want", [
    (1, 0.25, 1.0 / 6.0),
    (2, 0.125, 1.0 / 18.0),
    (3, 0.0625, 1.0 / 54.0),
])
def test_conditional_boundary_integrals(n, std_want, refl_want):
    for spec, want in ((std(), std_want), (refl(), refl_want)):
        got = specfun.integrate(
            lambda e: planar.boundary_density_conditional(spec, n, e, 1.0),
            -1.0 + 1e-13, 1.0 - 1e-13, 1e-12)
        assert got == pytest.approx(want, abs=1e-10)


def test_conditional_boundary_args():
    with pytest.raises(ValueError):
        planar.boundary_density_conditional(std(), 0, 0.0, 1.0)
    with pytest.raises(DomainError):
        planar.boundary_density_conditional(std(), 1, 1.5, 1.0)


# ---------------------------------------------------------------------------
# L1, marginal, conjecture, equilibrium


def test_l1_density_integrates_to_ac_mass():
    got = specfun.integrate(lambda z: planar.l1_distance_density(std(), z, 1.0),
                            0.0, 1.0 - 1e-12, 1e-10)
    assert got == pytest.approx(planar.singular_masses(std(), 1.0)["ac"], abs=1e-9)
    with pytest.raises(UnsupportedVariant):
        planar.l1_distance_density(refl(), 0.5, 1.0)


def test_l1_density_zero_at_origin():
    assert planar.l1_distance_density(std(), 0.0, 1.0) == 0.0


def test_marginal_density_total_mass():
    spec = std()
    ac = specfun.integrate(lambda w: planar.marginal_density(spec, w, 1.0),
                           -1.0 + 1e-12, 1.0 - 1e-12, 1e-10)
    atoms = planar.marginal_singular(spec, 1.0)
    assert ac + 2 * atoms["edge"] + atoms["zero"] == pytest.approx(1.0, abs=1e-9)
    assert atoms["edge"] == pytest.approx(math.exp(-1.0) / 4.0, rel=1e-14)
    assert atoms["zero"] == pytest.approx(math.exp(-1.0) / 2.0, rel=1e-14)


def test_marginal_half_line_mass():
    # P(0 < X < ct) = (1 - e^-Lambda)/2 exactly
    got = specfun.integrate(lambda w: planar.marginal_density(std(), w, 1.0),
                            0.0, 1.0 - 1e-12, 1e-10)
    assert got == pytest.approx(0.31606027941427884, abs=1e-9)


def test_marginal_reflecting_atoms():
    atoms = planar.marginal_singular(refl(), 1.0)
    assert atoms["edge"] == pytest.approx(math.exp(-1.0) / 4.0, rel=1e-14)
    assert atoms["zero"] == pytest.approx(math.exp(-2.0 / 3.0) / 2.0, rel=1e-14)
    with pytest.raises(UnsupportedVariant):
        planar.marginal_density(refl(), 0.0, 1.0)


def test_marginal_chain_sampler_exact_atoms():
    rng = np.random.default_rng(12)
    xs = planar.marginal_sample_batch(std(c_x=2.0), 1.0, 20_000, rng)
    assert np.all(np.abs(xs) <= 2.0)
    assert np.any(xs == 2.0) and np.any(xs == -2.0) and np.any(xs == 0.0)


def test_conjecture_endpoint_identity():
    spec = refl()
    res = planar.conjecture_l1_reflecting(spec, 1.0, 1.0, n_paths=1000,
                                          rng=np.random.default_rng(0))
    m = planar.singular_masses(spec, 1.0)
    assert res["conjectured"] == pytest.approx(m["ac"] + m["diagonal_total"], abs=1e-14)
    assert res["conjectured"] == pytest.approx(0.34104520310625827, rel=1e-13)


def test_conjecture_variant_guard():
    with pytest.raises(UnsupportedVariant):
        planar.conjecture_l1_reflecting(std(), 0.5, 1.0, n_paths=10)


def test_equilibrium_time_constant_rate():
    # Lambda(t) = t: the crossing sits at the level itself
    got = planar.equilibrium_time(std())
    assert got == pytest.approx(2.4558943545990314, rel=1e-12)
    m = planar.singular_masses(std(), got)
    assert m["ac"] == pytest.approx(m["side_total"] + m["vertex"], abs=1e-12)


def test_equilibrium_time_tanh_rate():
    spec = MotionSpec(variant="standard", rate=iacus_tanh(1.0))
    got = planar.equilibrium_time(spec)
    assert got == pytest.approx(3.1471966086269884, rel=1e-12)


def test_equilibrium_time_no_root():
    with pytest.raises(NoRoot):
        planar.equilibrium_time(MotionSpec(variant="standard",
                                           rate=foong_van_kolck(1.0)))
    with pytest.raises(UnsupportedVariant):
        planar.equilibrium_time(refl())
