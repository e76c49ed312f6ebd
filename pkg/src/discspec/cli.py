"""Command-line surface with machine-readable, reproducible output.

Subcommands: spectrum, eigenfunction, nodal, hotspot, crossing, heat,
verify.  All floats are serialized with 17 significant digits and fixed
field order so identical configurations produce byte-identical files.
Exit codes: 0 success, 1 violated bound (verify), 2 configuration error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from .analysis import hot_spot, nodal_report
from .errors import BracketError, QuadratureError, SolverError
from .heat import HeatProblem, evolve_cn, generic_initial_modes, hot_spot_trajectory
from .metric import CustomMetric, FlatDiscMetric, ConcentratedMetric
from .solver import BoundaryCondition, ModeProblem, solve_lowest
from .spectrum import assemble_spectrum, crossing_delta, dominance_threshold, verify_bounds

__all__ = ["main"]


class ConfigError(ValueError):
    pass


def _fmt(x):
    return format(float(x), ".17g")


def _to_json(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_to_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad}  {_to_json(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".discspec-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_metric(text):
    if text == "flat":
        return FlatDiscMetric()
    if text.startswith("concentrated:"):
        try:
            delta = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"malformed delta in {text!r}") from exc
        if delta <= 0:
            raise ConfigError("delta must be positive")
        return ConcentratedMetric(delta)
    if text.startswith("custom:"):
        path = text.split(":", 1)[1]
        if not os.path.exists(path):
            raise ConfigError(f"density table not found: {path}")
        return CustomMetric.from_csv(path)
    raise ConfigError(f"unknown metric {text!r} (use flat, concentrated:<delta>, custom:<csv>)")


def _parse_bc(text):
    try:
        return BoundaryCondition(text)
    except ValueError as exc:
        raise ConfigError(f"unknown boundary condition {text!r}") from exc


def _metric_label(args):
    return args.metric


def cmd_spectrum(args):
    spec = _parse_metric(args.metric)
    bc = _parse_bc(args.bc)
    table = assemble_spectrum(spec, bc, args.m, n=args.n, threads=args.threads)
    if args.format == "json":
        doc = {
            "metric": _metric_label(args),
            "bc": bc.value,
            "entries": [
                {
                    "value": e.value,
                    "k": e.k,
                    "j": e.j,
                    "multiplicity": e.multiplicity,
                    "invariant": e.invariant,
                }
                for e in table.entries
            ],
            "mode_cutoff": table.mode_cutoff,
            "grid": args.n,
        }
        _write(args.output, _to_json(doc) + "\n")
    else:
        lines = ["value,k,j,multiplicity,invariant"]
        for e in table.entries:
            lines.append(
                f"{_fmt(e.value)},{e.k},{e.j},{e.multiplicity},{str(e.invariant).lower()}"
            )
        _write(args.output, "\n".join(lines) + "\n")
    return 0


def _solve_pair(args):
    spec = _parse_metric(args.metric)
    bc = _parse_bc(args.bc)
    if args.j < 1:
        raise ConfigError("j must be >= 1")
    problem = ModeProblem(metric=spec, k=args.k, bc=bc, n=args.n)
    return spec, solve_lowest(problem, args.j)[args.j - 1]


def cmd_eigenfunction(args):
    spec, pair = _solve_pair(args)
    r = np.linspace(0.0, 1.0, args.n + 1)
    z = np.asarray(spec.z_of_r(r), dtype=float)
    lines = ["r,z,phi"]
    for ri, zi, pi in zip(r, z, pair.phi_r):
        lines.append(f"{_fmt(ri)},{_fmt(zi)},{_fmt(pi)}")
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_nodal(args):
    spec, pair = _solve_pair(args)
    rep = nodal_report(pair, spec)
    doc = {
        "radii": list(rep.radii),
        "domain_count": rep.domain_count,
        "touches_boundary": rep.touches_boundary,
    }
    _write(args.output, _to_json(doc) + "\n")
    return 0


def cmd_hotspot(args):
    spec, pair = _solve_pair(args)
    rep = hot_spot(pair, spec)
    doc = {
        "argmax_r": rep.argmax_r,
        "max_value": rep.max_value,
        "argmin_r": rep.argmin_r,
        "min_value": rep.min_value,
        "interior_max": rep.interior_max,
    }
    _write(args.output, _to_json(doc) + "\n")
    return 0


def cmd_crossing(args):
    bc = _parse_bc(args.bc)
    try:
        lo, hi = (float(x) for x in args.range.split(","))
    except ValueError as exc:
        raise ConfigError(f"malformed range {args.range!r}, expected lo,hi") from exc
    delta_star = crossing_delta(args.m, bc, delta_range=(lo, hi), n=args.n, tol=args.tol)
    thr = dominance_threshold(args.m)
    doc = {
        "delta_star": delta_star,
        "dominance_threshold": thr,
        "ratio": delta_star / thr,
    }
    _write(args.output, _to_json(doc) + "\n")
    return 0


def cmd_heat(args):
    spec = _parse_metric(args.metric)
    bc = _parse_bc(args.bc)
    times = list(np.linspace(0.0, args.t_end, args.times + 1))
    problem = HeatProblem(
        spec=spec,
        modes=generic_initial_modes(),
        bc=bc,
        t_end=args.t_end,
        output_times=times,
        n=args.n,
    )
    states = evolve_cn(problem, dt=args.dt)
    lines = ["t,r,theta,max_value"]
    for t, r, theta in hot_spot_trajectory(states):
        state = next(s for s in states if s.t == t)
        lines.append(f"{_fmt(t)},{_fmt(r)},{_fmt(theta)},{_fmt(np.max(state.field))}")
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args):
    spec = _parse_metric(args.metric)
    if not isinstance(spec, ConcentratedMetric):
        raise ConfigError("verify requires a concentrated:<delta> metric")
    report = verify_bounds(spec, jmax=args.jmax, kmax=args.kmax, n=args.n)
    doc = {
        "metric": _metric_label(args),
        "bounds": [
            {
                "name": r.name,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "satisfied": r.satisfied,
                "margin": r.margin,
            }
            for r in report.records
        ],
        "all_satisfied": report.all_satisfied,
    }
    _write(args.output, _to_json(doc) + "\n")
    return 0 if report.all_satisfied else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="discspec",
        description="Spectra, nodal circles and hot spots of radial conformal metrics on the disc",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker threads for per-mode solves")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bc_default="dirichlet", n_default=4096):
        p.add_argument("--metric", required=True, help="flat | concentrated:<delta> | custom:<csv>")
        p.add_argument("--bc", default=bc_default, help="dirichlet | neumann")
        p.add_argument("--n", type=int, default=n_default, help="grid intervals")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    p = sub.add_parser("spectrum", help="merged 2-D spectrum with labels")
    common(p)
    p.add_argument("--m", type=int, required=True, help="eigenvalues wanted (with multiplicity)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_spectrum)

    for name, fn, hlp in (
        ("eigenfunction", cmd_eigenfunction, "radial eigenfunction as CSV r,z,phi"),
        ("nodal", cmd_nodal, "nodal radii and domain count"),
        ("hotspot", cmd_hotspot, "extrema of the radial profile"),
    ):
        p = sub.add_parser(name, help=hlp)
        common(p)
        p.add_argument("--k", type=int, default=0, help="angular mode")
        p.add_argument("--j", type=int, default=1, help="index within the mode")
        p.set_defaults(func=fn)

    p = sub.add_parser("crossing", help="delta where invariant and non-invariant eigenvalues cross")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--bc", default="dirichlet")
    p.add_argument("--range", default="1e-6,1.0", help="delta bracket lo,hi")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--n", type=int, default=2048)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("heat", help="hot-spot trajectory of the generic datum")
    common(p, bc_default="neumann", n_default=2048)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--times", type=int, default=10, help="number of output intervals")
    p.set_defaults(func=cmd_heat)

    p = sub.add_parser("verify", help="check every closed-form bound; exit 1 on violation")
    common(p)
    p.add_argument("--jmax", type=int, default=5)
    p.add_argument("--kmax", type=int, default=5)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, BracketError, QuadratureError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
