"""Finite-difference verification of the governing equations.

Each PDEForm holds an operator that the corresponding closed-form density must
annihilate.  ``residual`` applies the operator with central differences on a
uniform grid; ``convergence_report`` refines the spacing over a fixed physical
region and fits the decay order of the maximum residual.  A field that truly
solves the equation shows second-order decay (the stencil truncation error); a
field that does not shows a residual plateau and a fitted order near zero.

Fields are evaluated in extended precision (np.longdouble) because the
fourth-order stencils divide by h^4: at h = 0.005 double-precision rounding of
the field alone would contribute ~1e-16 / h^4 ≈ 3e-7 of noise, which is enough
to corrupt the order fit of the planar forms.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, NonMonotone
from .rates import RateFunction

TELEGRAPH2 = "telegraph2"
STANDARD4 = "standard4"
REFLECTING4 = "reflecting4"
BOUNDARY = "boundary"
MARGINAL_STANDARD3 = "marginal-standard3"
MARGINAL_REFLECTING3 = "marginal-reflecting3"

FORM_KINDS = (TELEGRAPH2, STANDARD4, REFLECTING4, BOUNDARY,
              MARGINAL_STANDARD3, MARGINAL_REFLECTING3)

# Interior evaluation windows (time window, space half-widths / ranges) for the
# canonical parameter point t ≈ 1.  Space extents scale with the speed c and
# are multiples of 0.04 so that the h-refinement ladder 0.04/0.02/0.01/0.005
# lands nodes on identical physical points.  Everything stays inside
# |x| + |y| <= 0.8 c t.
_T_WINDOW = (0.92, 1.08)
_MARGIN_FRACTION = 0.8
_PAD_CELLS = 2


@dataclass(frozen=True)
class PDEForm:
    """One governing operator: kind, switching rate, speed, side variant."""

    kind: str
    rate: RateFunction
    c: float
    variant: str = "standard"   # only the boundary form distinguishes variants

    def __post_init__(self):
        if self.kind not in FORM_KINDS:
            raise ValueError(f"kind must be one of {FORM_KINDS}")
        if self.c <= 0:
            raise ValueError("speed must be positive")
        if self.variant not in ("standard", "reflecting"):
            raise ValueError("variant must be 'standard' or 'reflecting'")


@dataclass
class StencilGrid:
    """Uniform grid values with per-axis spacings; time is always axis 0."""

    spacings: tuple
    coords: tuple          # 1-d coordinate arrays, one per axis
    values: np.ndarray
    pad: int = _PAD_CELLS

    @property
    def dims(self):
        return self.values.ndim


def space_region(form):
    """Evaluation ranges ((t_lo, t_hi), (x_lo, x_hi)[, (y_lo, y_hi)])."""
    c = form.c
    if form.kind == TELEGRAPH2:
        return (_T_WINDOW, (-0.32 * c, 0.32 * c))
    if form.kind == BOUNDARY:
        return (_T_WINDOW, (-0.32 * c, 0.32 * c))
    if form.kind in (MARGINAL_STANDARD3, MARGINAL_REFLECTING3):
        # keep away from the kinks of the marginal density at x = 0 and x = ct
        return (_T_WINDOW, (0.16 * c, 0.72 * c))
    return (_T_WINDOW, (-0.28 * c, 0.28 * c), (-0.28 * c, 0.28 * c))


def sample_grid(form, field, h, region=None, dtype=np.longdouble):
    """Evaluate ``field`` on the padded uniform grid of spacing h."""
    if h <= 0:
        raise ValueError("spacing must be positive")
    region = space_region(form) if region is None else region
    coords = []
    for lo, hi in region:
        n_inner = max(int(round((hi - lo) / h)), 1)
        a = lo - _PAD_CELLS * h
        coords.append(a + h * np.arange(n_inner + 1 + 2 * _PAD_CELLS, dtype=dtype))
    mesh = np.meshgrid(*coords, indexing="ij", sparse=True)
    values = np.asarray(field(*mesh), dtype=dtype)
    values = np.broadcast_to(values, tuple(c.size for c in coords)).copy()
    return StencilGrid(spacings=tuple(float(h) for _ in coords), coords=tuple(coords),
                       values=values)


def _win(values, *offsets):
    pad = _PAD_CELLS
    sl = tuple(slice(pad + o, values.shape[i] - pad + o) for i, o in enumerate(offsets))
    return values[sl]


class _Diff:
    """Central-difference helpers on the interior window of a grid."""

    def __init__(self, grid):
        if any(n < 2 * _PAD_CELLS + 1 for n in grid.values.shape):
            raise GridTooCoarse("every axis needs at least 5 nodes")
        self.v = grid.values
        self.h = grid.spacings
        self.nd = grid.dims

    def _w(self, *off):
        off = off + (0,) * (self.nd - len(off))
        return _win(self.v, *off)

    # time derivatives (axis 0)
    def p(self):
        return self._w(0)

    def pt(self):
        return (self._w(1) - self._w(-1)) / (2.0 * self.h[0])

    def ptt(self):
        return (self._w(1) - 2.0 * self._w(0) + self._w(-1)) / self.h[0] ** 2

    def pttt(self):
        return (self._w(2) - 2.0 * self._w(1) + 2.0 * self._w(-1) - self._w(-2)) \
            / (2.0 * self.h[0] ** 3)

    def ptttt(self):
        return (self._w(2) - 4.0 * self._w(1) + 6.0 * self._w(0)
                - 4.0 * self._w(-1) + self._w(-2)) / self.h[0] ** 4

    def _second(self, axis):
        off = [0, 0, 0][: self.nd]

        def w(k):
            o = list(off)
            o[axis] = k
            return _win(self.v, *o)

        return (w(1) - 2.0 * w(0) + w(-1)) / self.h[axis] ** 2

    def pxx(self):
        return self._second(1)

    def pyy(self):
        return self._second(2)

    def lap(self):
        return self.pxx() + (self.pyy() if self.nd == 3 else 0.0)

    def _mixed_t(self, base_offsets_and_coefs, order_t):
        # apply a first or second central t-difference to a space stencil
        h_t = self.h[0]
        if order_t == 1:
            taps = ((1, 0.5 / h_t), (-1, -0.5 / h_t))
        else:
            taps = ((1, 1.0 / h_t ** 2), (0, -2.0 / h_t ** 2), (-1, 1.0 / h_t ** 2))
        out = 0.0
        for kt, ct in taps:
            for off, cs in base_offsets_and_coefs:
                out = out + ct * cs * _win(self.v, kt, *off)
        return out

    def _space_second_taps(self, axis):
        h = self.h[axis]
        taps = []
        for k, cf in ((1, 1.0), (0, -2.0), (-1, 1.0)):
            off = [0] * (self.nd - 1)
            off[axis - 1] = k
            taps.append((tuple(off), cf / h ** 2))
        return taps

    def lap_t(self):
        taps = self._space_second_taps(1)
        if self.nd == 3:
            taps = taps + self._space_second_taps(2)
        return self._mixed_t(taps, 1)

    def lap_tt(self):
        taps = self._space_second_taps(1)
        if self.nd == 3:
            taps = taps + self._space_second_taps(2)
        return self._mixed_t(taps, 2)

    def ptxx(self):
        return self._mixed_t(self._space_second_taps(1), 1)

    def pxxyy(self):
        hx2 = self.h[1] ** 2
        hy2 = self.h[2] ** 2
        out = 0.0
        for kx, cx in ((1, 1.0), (0, -2.0), (-1, 1.0)):
            for ky, cy in ((1, 1.0), (0, -2.0), (-1, 1.0)):
                out = out + (cx * cy) * _win(self.v, 0, kx, ky)
        return out / (hx2 * hy2)

    def t_interior(self, coords):
        return np.asarray(coords[0][_PAD_CELLS:-_PAD_CELLS], dtype=np.float64)


def _rate_coeffs(form, t_nodes, need_second):
    lam = np.asarray(form.rate(t_nodes), dtype=np.float64)
    d1 = np.asarray(form.rate.deriv1(t_nodes), dtype=np.float64)
    d2 = np.asarray(form.rate.deriv2(t_nodes), dtype=np.float64) if need_second else None
    return lam, d1, d2


def _check_margin(form, grid):
    pad = _PAD_CELLS
    t_min = float(grid.coords[0][pad])
    limit = _MARGIN_FRACTION * form.c * t_min * (1.0 + 1e-9)
    space = [np.asarray(c[pad:-pad], dtype=np.float64) for c in grid.coords[1:]]
    reach = sum(np.abs(s).max() for s in space)
    if reach > limit:
        raise GridTooCoarse(
            f"evaluation region reaches {reach:.4f}, beyond {_MARGIN_FRACTION} c t = {limit:.4f}")


def residual(form, grid):
    """Apply the operator; return {'max_abs', 'l2'} over the interior window."""
    expected_dims = 3 if form.kind in (STANDARD4, REFLECTING4) else 2
    if grid.dims != expected_dims:
        raise GridTooCoarse(f"{form.kind} needs a {expected_dims}-d grid")
    d = _Diff(grid)
    _check_margin(form, grid)
    t_nodes = d.t_interior(grid.coords)
    c = form.c
    kind = form.kind
    need2 = kind in (STANDARD4, REFLECTING4)
    lam, lp, lpp = _rate_coeffs(form, t_nodes, need2)
    shape = (-1,) + (1,) * (grid.dims - 1)
    lam = lam.reshape(shape)
    lp = lp.reshape(shape)
    if lpp is not None:
        lpp = lpp.reshape(shape)

    if kind == TELEGRAPH2:
        res = d.ptt() + 2.0 * lam * d.pt() - c * c * d.pxx()
    elif kind == BOUNDARY:
        if form.variant == "standard":
            kappa = 0.75 * lam * lam + 0.5 * lp
        else:
            kappa = (8.0 / 9.0) * lam * lam + (2.0 / 3.0) * lp
        res = d.ptt() + 2.0 * lam * d.pt() + kappa * d.p() - c * c * d.pxx()
    elif kind == MARGINAL_STANDARD3:
        res = d.pttt() + 3.0 * lam * d.ptt() + (2.0 * lam * lam + lp) * d.pt() \
            - c * c * d.ptxx() - c * c * lam * d.pxx()
    elif kind == MARGINAL_REFLECTING3:
        res = d.pttt() + (8.0 / 3.0) * lam * d.ptt() \
            + (4.0 / 3.0) * ((4.0 / 3.0) * lam * lam + lp) * d.pt() \
            - c * c * d.ptxx() - (2.0 / 3.0) * c * c * lam * d.pxx()
    elif kind == STANDARD4:
        res = d.ptttt() + 4.0 * lam * d.pttt() + (5.0 * lam ** 2 + 4.0 * lp) * d.ptt() \
            + (2.0 * lam ** 3 + 5.0 * lam * lp + lpp) * d.pt() + c ** 4 * d.pxxyy() \
            - c * c * (d.lap_tt() + 2.0 * lam * d.lap_t() + (lam ** 2 + lp) * d.lap())
    else:  # REFLECTING4
        res = d.ptttt() + 4.0 * lam * d.pttt() \
            + ((16.0 / 3.0) * lam ** 2 + 4.0 * lp) * d.ptt() \
            + ((64.0 / 27.0) * lam ** 3 + (16.0 / 3.0) * lam * lp + (4.0 / 3.0) * lpp) * d.pt() \
            + c ** 4 * d.pxxyy() \
            - c * c * (d.lap_tt() + 2.0 * lam * d.lap_t()
                       + ((8.0 / 9.0) * lam ** 2 + (2.0 / 3.0) * lp) * d.lap())

    res = np.asarray(res, dtype=np.float64)
    return {"max_abs": float(np.max(np.abs(res))),
            "l2": float(np.sqrt(np.mean(res * res)))}


def fit_order(h_list, residuals):
    """Least-squares slope of log(residual) against log(h).

    Raises NonMonotone when the residuals grow materially under refinement
    (more than 25% from the coarsest to the finest grid) -- a plateau from a
    field that does not solve the equation still yields a slope (near zero).
    """
    h = np.asarray(h_list, dtype=np.float64)
    r = np.asarray(residuals, dtype=np.float64)
    if h.size < 3:
        raise GridTooCoarse("need at least three spacings to fit an order")
    if np.any(r <= 0):
        r = np.maximum(r, 1e-300)
    if r[-1] > 1.25 * r[0] and h[-1] < h[0]:
        raise NonMonotone(f"residuals grow under refinement: {list(map(float, r))}")
    slope = np.polyfit(np.log(h), np.log(r), 1)[0]
    return float(slope)


def convergence_report(form, field, h_sequence, region=None):
    """Refine h over the fixed region; report residuals and the fitted order."""
    h_list = [float(h) for h in h_sequence]
    if len(h_list) < 3:
        raise GridTooCoarse("need at least three spacings")
    residuals = []
    for h in h_list:
        grid = sample_grid(form, field, h, region=region)
        residuals.append(residual(form, grid)["max_abs"])
    order = fit_order(h_list, residuals)
    return {"form": form.kind, "variant": form.variant, "h_list": h_list,
            "residuals": residuals, "fitted_order": order}


def convergence_order(form, field, h_sequence, region=None):
    """Fitted decay order of the max residual under grid refinement."""
    return convergence_report(form, field, h_sequence, region=region)["fitted_order"]


def perturb_field(field, eps=0.01):
    """Control field: adds eps * x^2, which no governing form annihilates."""
    def fld(t, x, *rest):
        return field(t, x, *rest) + eps * np.asarray(x) ** 2

    return fld
