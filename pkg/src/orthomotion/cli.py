"""Command line front end: samplers, density tables, PDE checks, validation.

Exit codes: 0 success (all checks passed), 1 runtime or validation failure,
2 usage error.  Every output starts with a version+config header and depends
only on the echoed config, so reruns reproduce the payload byte for byte.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, harness, pdecheck, planar, rates, telegraph
from .errors import ConfigError, OrthomotionError, UnsupportedRate, UnsupportedVariant
from .planar import CLASS_NAMES, MotionSpec


def _f(value):
    """Shortest round-trip decimal form of a float, for CSV cells."""
    return repr(float(value))

_PDE_FORMS = {"telegraph2": pdecheck.TELEGRAPH2,
              "standard4": pdecheck.STANDARD4,
              "reflecting4": pdecheck.REFLECTING4,
              "boundary": pdecheck.BOUNDARY,
              "marginal-standard3": pdecheck.MARGINAL_STANDARD3,
              "marginal-reflecting3": pdecheck.MARGINAL_REFLECTING3}

_LAWS = ("joint", "boundary", "diagonal", "l1", "marginal")


def _default_seed():
    return int(os.environ.get("ORTHOMOTION_SEED", "0"))


def _add_motion_args(sp):
    sp.add_argument("--variant", default="standard", choices=sorted(planar.VARIANTS))
    sp.add_argument("--rate", default="const:1",
                    help="rate spec, e.g. const:1, tanh:2, coth:1.5, foong:1")
    sp.add_argument("--q", type=float, default=1.0,
                    help="thinning probability for the q-variants")
    sp.add_argument("--c", type=float, default=None,
                    help="speed for both axes (overrides --c-x/--c-y)")
    sp.add_argument("--c-x", type=float, default=1.0, dest="c_x")
    sp.add_argument("--c-y", type=float, default=1.0, dest="c_y")
    sp.add_argument("--t", type=float, default=1.0, help="evaluation time")


def build_parser():
    p = argparse.ArgumentParser(
        prog="orthomotion",
        description="Planar orthogonal random motions: simulation, closed-form "
                    "laws, PDE convergence checks and a validation battery.")
    p.add_argument("--version", action="version", version=f"orthomotion {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="sample endpoint or full-path CSV")
    _add_motion_args(sim)
    sim.add_argument("--n", type=int, default=1000, help="number of paths")
    sim.add_argument("--seed", type=int, default=None,
                     help="RNG seed (default: ORTHOMOTION_SEED or 0)")
    sim.add_argument("--paths", action="store_true",
                     help="write one row per switch event instead of endpoints")
    sim.add_argument("--decomposition", action="store_true",
                     help="sample endpoints through the diagonal telegraph pair")
    sim.add_argument("--out", default=None, help="output file (default stdout)")

    den = sub.add_parser("density", help="tabulate a closed-form law on a grid")
    _add_motion_args(den)
    den.add_argument("--law", default="joint", choices=_LAWS)
    den.add_argument("--points", type=int, default=101,
                     help="grid points per axis (joint: inclusive of the border; "
                          "1-d laws: cell centers of that many equal cells)")
    den.add_argument("--format", default="csv", choices=("csv", "json"), dest="fmt")
    den.add_argument("--out", default=None)

    val = sub.add_parser("validate", help="run the validation battery")
    val.add_argument("--quick", action="store_true",
                     help="smaller path counts and coarser PDE grids")
    val.add_argument("--tests", default=None,
                     help="comma list of test names or prefixes (e.g. pde)")
    val.add_argument("--seed", type=int, default=None,
                     help="master seed (default: ORTHOMOTION_SEED or 0)")
    val.add_argument("--threads", type=int, default=1,
                     help="scheduling hint; never affects the report")
    val.add_argument("--out", default=None)

    pde = sub.add_parser("pde-check", help="grid-convergence check of one operator")
    pde.add_argument("--form", default="standard4", choices=sorted(_PDE_FORMS))
    pde.add_argument("--variant", default="standard", choices=("standard", "reflecting"),
                     help="family for the boundary form")
    pde.add_argument("--rate", default="const:1")
    pde.add_argument("--c", type=float, default=1.0)
    pde.add_argument("--h", default="0.02,0.01,0.005",
                     help="comma list of at least three grid spacings")
    pde.add_argument("--perturb", action="store_true",
                     help="control run: perturb the field and expect order ~ 0")
    pde.add_argument("--out", default=None)
    return p


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)


def _config_line(payload):
    return json.dumps(payload, sort_keys=True)


def _motion_spec(args):
    c_x = args.c if args.c is not None else args.c_x
    c_y = args.c if args.c is not None else args.c_y
    if args.t <= 0:
        raise ConfigError("--t must be positive")
    try:
        rate = rates.parse(args.rate)
        return MotionSpec(variant=args.variant, rate=rate, q=args.q, c_x=c_x, c_y=c_y)
    except ValueError as exc:
        raise ConfigError(str(exc))


def cmd_simulate(args):
    spec = _motion_spec(args)
    if args.n < 0:
        raise ConfigError("--n must be >= 0")
    seed = args.seed if args.seed is not None else _default_seed()
    config = {"command": "simulate", "spec": spec.describe(), "t": args.t,
              "n": args.n, "seed": seed, "paths": bool(args.paths),
              "decomposition": bool(args.decomposition)}
    rng = np.random.default_rng(seed)
    lines = [f"# orthomotion {__version__}", f"# config: {_config_line(config)}"]
    if args.paths:
        lines.append("path_id,t_event,direction,x,y,class")
        for i in range(args.n):
            rec = planar.sample_planar(spec, args.t, rng)
            times = [0.0] + [float(s) for s in rec.event_times] + [rec.horizon]
            dirs = list(rec.directions) + [int(rec.directions[-1])]
            for tt, dd, (px, py) in zip(times, dirs, rec.positions):
                lines.append(f"{i},{_f(tt)},{int(dd)},{_f(px)},{_f(py)},{rec.label}")
    else:
        lines.append("path_id,x,y,class")
        if args.n:
            if args.decomposition:
                x, y, codes = planar.sample_endpoints(spec, args.t, args.n, rng,
                                                      via_decomposition=True)
            else:
                x, y, codes = planar.sample_endpoints(spec, args.t, args.n, rng)
            for i in range(args.n):
                lines.append(f"{i},{_f(x[i])},{_f(y[i])},{CLASS_NAMES[int(codes[i])]}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _density_table(spec, law, t, points):
    if points < 2:
        raise ConfigError("--points must be at least 2")
    if law == "joint":
        xs = np.linspace(-spec.c_x * t, spec.c_x * t, points)
        ys = np.linspace(-spec.c_y * t, spec.c_y * t, points)
        vals = np.zeros((points, points))
        for i, xv in enumerate(xs):
            for j, yv in enumerate(ys):
                if abs(xv) / spec.c_x + abs(yv) / spec.c_y < t * (1.0 - 1e-12):
                    vals[i, j] = planar.joint_density(spec, float(xv), float(yv), t)
        return {"x": xs, "y": ys, "value": vals}
    c = spec.c
    if law == "l1":
        lo, hi = 0.0, c * t
    else:
        lo, hi = -c * t, c * t
    width = (hi - lo) / points
    grid = lo + (np.arange(points) + 0.5) * width
    fn = {"boundary": lambda w: planar.boundary_density(spec, w, t),
          "diagonal": lambda w: planar.diagonal_density(spec, w, t),
          "l1": lambda w: planar.l1_distance_density(spec, w, t),
          "marginal": lambda w: planar.marginal_density(spec, w, t)}[law]
    vals = np.array([fn(float(g)) for g in grid])
    axis = {"boundary": "eta", "diagonal": "x", "l1": "z", "marginal": "x"}[law]
    return {axis: grid, "value": vals}


def cmd_density(args):
    spec = _motion_spec(args)
    config = {"command": "density", "spec": spec.describe(), "t": args.t,
              "law": args.law, "points": args.points, "format": args.fmt}
    table = _density_table(spec, args.law, args.t, args.points)
    masses = planar.singular_masses(spec, args.t)
    if args.law == "marginal":
        masses = planar.marginal_singular(spec, args.t)
    if args.fmt == "json":
        payload = {"version": __version__, "config": config, "masses": masses,
                   "table": {k: np.asarray(v).tolist() for k, v in table.items()}}
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
        return 0
    lines = [f"# orthomotion {__version__}", f"# config: {_config_line(config)}",
             f"# masses: {_config_line(masses)}"]
    if args.law == "joint":
        lines.append("x,y,value")
        xs, ys, vals = table["x"], table["y"], table["value"]
        for i in range(len(xs)):
            for j in range(len(ys)):
                lines.append(f"{_f(xs[i])},{_f(ys[j])},{_f(vals[i, j])}")
    else:
        axis = next(k for k in table if k != "value")
        lines.append(f"{axis},value")
        for g, v in zip(table[axis], table["value"]):
            lines.append(f"{_f(g)},{_f(v)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _select_tests(tokens):
    available = harness.available_tests()
    chosen = []
    for token in tokens:
        token = token.strip()
        if not token:
            continue
        matches = [name for name in available
                   if name == token or name.startswith(token)]
        if not matches:
            raise ConfigError(f"unknown test {token!r}; available: {available}")
        chosen.extend(matches)
    if not chosen:
        raise ConfigError("no tests selected")
    return tuple(sorted(set(chosen)))


def cmd_validate(args):
    seed = args.seed if args.seed is not None else _default_seed()
    tests = _select_tests(args.tests.split(",")) if args.tests else None
    cfg = harness.SuiteConfig(master_seed=seed, quick=args.quick, tests=tests,
                              threads=args.threads)
    reports = harness.run_suite(cfg)
    _emit(harness.suite_to_json(reports, cfg) + "\n", args.out)
    return 0 if all(r.passed for r in reports) else 1


def _pde_field(args, spec_rate):
    form_kind = _PDE_FORMS[args.form]
    variant = args.variant if form_kind == pdecheck.BOUNDARY else "standard"
    form = pdecheck.PDEForm(kind=form_kind, rate=spec_rate, c=args.c, variant=variant)
    if form_kind == pdecheck.TELEGRAPH2:
        if not spec_rate.is_constant:
            raise UnsupportedRate("the telegraph closed form needs a constant rate")
        field = telegraph.density_field(spec_rate.param, args.c)
    elif form_kind == pdecheck.STANDARD4:
        field = planar.joint_density_field(
            MotionSpec(variant="standard", rate=spec_rate, c_x=args.c, c_y=args.c))
    elif form_kind == pdecheck.REFLECTING4:
        field = planar.joint_density_field(
            MotionSpec(variant="reflecting", rate=spec_rate, c_x=args.c, c_y=args.c))
    elif form_kind == pdecheck.BOUNDARY:
        field = planar.boundary_density_field(
            MotionSpec(variant=args.variant, rate=spec_rate, c_x=args.c, c_y=args.c))
    elif form_kind == pdecheck.MARGINAL_STANDARD3:
        field = planar.marginal_density_field(
            MotionSpec(variant="standard", rate=spec_rate, c_x=args.c, c_y=args.c))
    else:
        raise UnsupportedVariant(
            "no closed-form marginal is available for the reflecting family; "
            "use pdecheck.residual with your own field")
    return form, field


def cmd_pde_check(parser, args):
    h_list = []
    for tok in args.h.split(","):
        tok = tok.strip()
        if tok:
            h_list.append(float(tok))
    if len(h_list) < 3:
        parser.error("--h needs at least three spacings")
    try:
        rate = rates.parse(args.rate)
    except ValueError as exc:
        raise ConfigError(str(exc))
    form, field = _pde_field(args, rate)
    if args.perturb:
        field = pdecheck.perturb_field(field)
    report = pdecheck.convergence_report(form, field, h_list)
    config = {"command": "pde-check", "form": args.form, "variant": form.variant,
              "rate": rate.describe(), "c": args.c, "h": h_list,
              "perturb": bool(args.perturb)}
    order = report["fitted_order"]
    payload = {"version": __version__, "config": config,
               "form": report["form"], "variant": report["variant"],
               "h_list": report["h_list"], "residuals": report["residuals"],
               "fitted_order": order, "passed": bool(order >= 1.8)}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0 if order >= 1.8 else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "density":
            return cmd_density(args)
        if args.command == "validate":
            return cmd_validate(args)
        return cmd_pde_check(parser, args)
    except ConfigError as exc:
        print(f"orthomotion: error: {exc}", file=sys.stderr)
        return 2
    except OrthomotionError as exc:
        print(f"orthomotion: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"orthomotion: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
