"""Command line interface: ``raygeom <command> ...``.

Inputs that take JSON accept a file path, ``-`` for stdin, or the JSON text
itself.  Output is JSON (with a ``schema`` field) unless ``--format csv`` is
given; see each command's ``--help`` for its CSV columns.

Exit status: 0 success, 1 computational failure (including failed checks),
2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import RaygeomError, UnsupportedError
from .state_space import wrap_phase

SCHEMA = "raygeom/1"


class UsageError(Exception):
    pass


def load_json(text):
    if text == "-":
        return json.load(sys.stdin)
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a file and not valid JSON: {text[:60]!r} ({exc})") from None


def make_chart(text):
    from .charts import get_chart
    name, _, arg = text.partition(":")
    kw = {}
    if arg:
        if name != "realsphere":
            raise UsageError(f"chart {name!r} takes no argument")
        kw["d"] = int(arg)
    try:
        return get_chart(name, **kw)
    except UnsupportedError as exc:
        raise UsageError(str(exc)) from None


def load_curve(obj, nodes=None):
    """A sampled curve ({params, states}) or a chart path ({chart, path, nodes})."""
    from .charts import Path, chart_curve
    from .curves import SampledCurve
    if "states" in obj:
        return SampledCurve.from_json(obj)
    if "chart" in obj and "path" in obj:
        n = nodes or int(obj.get("nodes", 1001))
        return chart_curve(make_chart(obj["chart"]), Path.from_json(obj["path"]), n)
    raise UsageError("curve JSON needs either 'states' or 'chart' and 'path'")


def load_vertices(obj):
    """States list, {'states': [...]}, or {'chart': name, 'points': [[...], ...]}."""
    from .state_space import StateVector
    if isinstance(obj, dict) and "points" in obj:
        return np.asarray(obj["points"], dtype=float), make_chart(obj["chart"])
    states = obj["states"] if isinstance(obj, dict) else obj
    return [StateVector.from_json(s).amplitudes for s in states], None


def vec(text):
    try:
        v = json.loads(text)
    except json.JSONDecodeError:
        v = [float(t) for t in text.split(",")]
    return np.atleast_1d(np.asarray(v, dtype=float))


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


class Output:
    def __init__(self, args):
        self.fmt = args.format
        self.path = args.out

    def _write(self, text):
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def json(self, kind, payload):
        obj = {"schema": SCHEMA, "kind": kind}
        obj.update(_clean(payload))
        self._write(json.dumps(obj, indent=2, sort_keys=False) + "\n")

    def rows(self, rows):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in rows:
            w.writerow(r)
        self._write(buf.getvalue())

    def emit(self, kind, payload, rows=None):
        if self.fmt == "csv":
            if rows is None:
                raise UsageError(f"{kind} has no CSV form")
            self.rows(rows() if callable(rows) else rows)
        else:
            self.json(kind, payload)


def _g(x):
    return f"{x:.17g}" if isinstance(x, float) else str(x)


# commands --------------------------------------------------------------

def cmd_phase(args, out):
    from . import curves as cv
    c = load_curve(load_json(args.curve), args.nodes)
    res = {"total_phase": cv.total_phase(c),
           "dynamical_phase": cv.dynamical_phase(c, args.rule),
           "geometric_phase": cv.geometric_phase(c, args.rule),
           "length": cv.curve_length(c), "nodes": c.n_nodes, "rule": args.rule}

    def rows():
        tab = cv.phase_table(c)
        yield ["s", "phi_tot", "phi_dyn", "phi_g"]
        for r in zip(tab["s"], tab["phi_tot"], tab["phi_dyn"], tab["phi_g"]):
            yield [_g(float(v)) for v in r]
    out.emit("phase", res, rows)
    return 0


def cmd_bargmann(args, out):
    from . import bargmann as bg
    verts, chart = load_vertices(load_json(args.vertices))
    delta = bg.bargmann_invariant(verts, chart=chart)
    res = {"n": len(verts), "delta_re": delta.real, "delta_im": delta.imag,
           "modulus": abs(delta),
           "phase": wrap_phase(np.angle(delta)) if abs(delta) > bg.PHASE_THRESHOLD else None}
    if chart is None:
        d = bg.decompose_into_triangles(verts, anchor=args.anchor)
        res["reconstruction_error"] = abs(d.reconstructed - delta)
    rows = [["n", "delta_re", "delta_im", "modulus", "phase"],
            [str(res["n"]), _g(delta.real), _g(delta.imag), _g(abs(delta)),
             "" if res["phase"] is None else _g(res["phase"])]]
    out.emit("bargmann", res, rows)
    return 0


def cmd_polygon(args, out):
    from . import bargmann as bg
    verts, chart = load_vertices(load_json(args.vertices))
    if args.chart:
        chart = make_chart(args.chart)
    res = bg.polygon_phase_check(verts, args.connector, chart=chart, nodes=args.nodes,
                                 refine=args.refine, rule=args.rule)
    payload = res.to_json()
    payload["passed"] = abs(res.defect) < args.tol
    rows = [["phi_g", "minus_arg_delta", "defect", "nodes_per_side", "connector"],
            [_g(res.phi_g), _g(res.minus_arg_delta), _g(res.defect),
             str(res.nodes_per_side), res.connector]]
    out.emit("polygon", payload, rows)
    return 0 if payload["passed"] else 1


def _geo_payload(chart, sol):
    from . import riemann as rm
    res = {"chart": chart.id, "length": sol.length, "drift": sol.drift,
           "exited": sol.exited, "nodes": len(sol.s), "info": sol.info,
           "start": sol.xi[0], "end": sol.xi[-1]}
    if chart.id == "gaussian":
        c, R, r1 = rm.fit_semicircle(sol.xi)
        a, r2 = rm.fit_vertical(sol.xi)
        res["fit"] = ({"type": "vertical", "xi1": a, "residual": r2} if r2 <= r1
                      else {"type": "semicircle", "c": c, "R": R, "residual": r1})
    return res


def cmd_geodesic(args, out):
    from . import riemann as rm
    chart = make_chart(args.chart)
    if args.action == "shoot":
        sol = rm.geodesic_shoot(chart, vec(args.xi0), vec(args.v0), args.smax, args.steps,
                                method=args.method)
    else:
        sol = rm.geodesic_connect(chart, vec(args.a), vec(args.b), args.steps, tol=args.tol,
                                  method=args.method)
    out.emit("geodesic", _geo_payload(chart, sol), sol.to_csv_rows)
    return 0


def cmd_nullphase(args, out):
    from . import nullphase as nph
    c = load_curve(load_json(args.curve), args.nodes)
    rep = nph.check_null_phase(c)
    payload = rep.to_json()
    rows = [["verdict", "mixed_partial_max", "tol_sep", "bargmann_triple_max_imag",
             "bargmann_triple_min_real", "tol_im"],
            [rep.verdict, _g(rep.mixed_partial_max), _g(rep.tol_sep),
             _g(rep.bargmann_triple_max_imag), _g(rep.bargmann_triple_min_real),
             _g(rep.tol_im)]]
    out.emit("nullphase", payload, rows)
    return 0


def cmd_symplectic(args, out):
    from . import symplectic as sy
    if args.action == "area":
        obj = load_json(args.loop)
        area = sy.symplectic_area(obj["beta"], obj["gamma"], obj.get("t"),
                                  obj.get("beta_dot"), obj.get("gamma_dot"))
        out.emit("symplectic-area", {"area": area}, [["area"], [_g(area)]])
    elif args.action == "isotropy":
        chart = make_chart(args.chart)
        rng = np.random.default_rng(args.seed)
        pts = _sample_points(chart, rng, args.samples)
        rep = sy.isotropy_report(chart, pts, tol=args.tol)
        rep.update(chart=chart.id, samples=args.samples)
        out.emit("isotropy", rep, [["chart", "isotropic", "max_entry"],
                                   [chart.id, str(rep["isotropic"]), _g(rep["max_entry"])]])
    else:
        from .state_space import StateVector
        dc = sy.DarbouxChart(StateVector.from_json(load_json(args.base)).amplitudes)
        a, b, g = dc.to_coords(StateVector.from_json(load_json(args.state)).amplitudes)
        res = {"alpha": a, "beta": b, "gamma": g}
        rows = [["alpha"] + [f"beta{k + 1}" for k in range(b.size)]
                + [f"gamma{k + 1}" for k in range(g.size)],
                [_g(a)] + [_g(float(v)) for v in (*b, *g)]]
        out.emit("darboux-coords", res, rows)
    return 0


def _sample_points(chart, rng, n):
    boxes = {"coherent": ([-2, -2], [2, 2]), "gaussian": ([-2, 0.2], [2, 3]),
             "sphere2mode": ([0.2, 0], [2.9, 6.2])}
    if chart.id in boxes:
        lo, hi = boxes[chart.id]
        return rng.uniform(lo, hi, size=(n, len(lo)))
    return rng.uniform(0.2, 2.9, size=(n, chart.n_params))


def cmd_reproduce(args, out):
    from .cases import CASES
    if args.list or args.case is None:
        for k, c in CASES.items():
            head = c.description if len(c.description) < 56 else c.description[:53] + "..."
            print(f"{k:22s} {head}")
        return 0
    ids = list(CASES) if args.case == "all" else [args.case]
    for k in ids:
        if k not in CASES:
            raise UsageError(f"unknown case {k!r}; try --list")
    if args.describe:
        for k in ids:
            print(f"{k}: {CASES[k].description}")
            print(f"  parameters: {json.dumps(CASES[k].defaults)}")
        return 0
    params = load_json(args.params) if args.params else None
    try:
        reports = [CASES[k].run(params, seed=args.seed) for k in ids]
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None

    def rows():
        yield ["case", "check", "expected", "computed", "tol", "passed"]
        for r in reports:
            for c in r["checks"]:
                yield [r["case"], c["name"], c["expected"], c["computed"], c["tol"], c["passed"]]
    out.emit("reproduce", {"seed": args.seed, "cases": reports}, rows)
    return 0 if all(r["passed"] for r in reports) else 1


def cmd_acceptance(args, out):
    from .acceptance import run_all
    results = run_all(seed=args.seed, filter=args.filter, jobs=args.jobs)
    if not results:
        raise UsageError(f"no criteria match filter {args.filter!r}")
    if args.format == "json":
        out.json("acceptance", {"seed": args.seed,
                                "results": [r.to_json() for r in results],
                                "passed": all(r.passed for r in results)})
    elif args.format == "csv":
        out.rows([["id", "title", "passed"]]
                 + [[r.id, r.title, r.passed] for r in results])
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.id:2d}  {r.title}" for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} passed")
        out._write("\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


# parser ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    p = argparse.ArgumentParser(prog="raygeom", description=__doc__.split("\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("phase", parents=[common],
                       help="total, dynamical and geometric phase of a curve",
                       description="Curve JSON is either {params, states[, tangents]} or "
                                   "{chart, path, nodes}.  CSV columns: s, phi_tot, phi_dyn, "
                                   "phi_g (accumulated from the first node).")
    s.add_argument("curve")
    s.add_argument("--rule", choices=["trapezoid", "simpson"], default="trapezoid")
    s.add_argument("--nodes", type=int, help="override node count of a chart path")
    s.set_defaults(fn=cmd_phase)

    s = sub.add_parser("bargmann", parents=[common], help="Bargmann invariant of vertices",
                       description="Vertices: a list of state objects, {states: [...]}, or "
                                   "{chart, points}.  CSV columns: n, delta_re, delta_im, "
                                   "modulus, phase.")
    s.add_argument("vertices")
    s.add_argument("--anchor", type=int, default=0, help="triangle-fan anchor vertex")
    s.set_defaults(fn=cmd_bargmann)

    s = sub.add_parser("polygon", parents=[common],
                       help="compare polygon phase with -arg of the Bargmann invariant",
                       description="CSV columns: phi_g, minus_arg_delta, defect, "
                                   "nodes_per_side, connector.  Exit 1 if |defect| >= --tol.")
    s.add_argument("vertices")
    s.add_argument("--connector", choices=["free", "null", "geodesic"], default="free")
    s.add_argument("--chart", help="chart for null/geodesic sides (coherent, gaussian, "
                                   "sphere2mode, realsphere[:d])")
    s.add_argument("--nodes", type=int, default=512)
    s.add_argument("--rule", choices=["trapezoid", "simpson"], default="simpson")
    s.add_argument("--refine", action="store_true")
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(fn=cmd_polygon)

    s = sub.add_parser("geodesic", help="constrained geodesics in a chart")
    gs = s.add_subparsers(dest="action", required=True)
    geo_desc = ("CSV columns: s, xi1..xin, xidot1..xidotn, conserved_speed.")
    g = gs.add_parser("shoot", parents=[common], description=geo_desc)
    g.add_argument("--xi0", required=True, help="start point, JSON list or comma separated")
    g.add_argument("--v0", required=True, help="initial velocity")
    g.add_argument("--smax", type=float, default=1.0)
    g2 = gs.add_parser("connect", parents=[common], description=geo_desc)
    g2.add_argument("--a", required=True)
    g2.add_argument("--b", required=True)
    g2.add_argument("--tol", type=float, default=1e-8)
    for q in (g, g2):
        q.add_argument("--chart", required=True)
        q.add_argument("--steps", type=int, default=1000)
        q.add_argument("--method", choices=["fd", "analytic", "auto"], default="auto",
                       help="Christoffel evaluation")
        q.set_defaults(fn=cmd_geodesic)

    s = sub.add_parser("nullphase", help="null-phase tests")
    ns = s.add_subparsers(dest="action", required=True)
    n = ns.add_parser("check", parents=[common],
                      description="CSV columns: verdict, mixed_partial_max, tol_sep, "
                                  "bargmann_triple_max_imag, bargmann_triple_min_real, tol_im.")
    n.add_argument("curve")
    n.add_argument("--nodes", type=int)
    n.set_defaults(fn=cmd_nullphase)

    s = sub.add_parser("symplectic", help="Darboux coordinates and two-forms")
    ss = s.add_subparsers(dest="action", required=True)
    a = ss.add_parser("area", parents=[common],
                      description="Loop JSON {beta, gamma[, t, beta_dot, gamma_dot]}.  "
                                  "CSV column: area.")
    a.add_argument("loop")
    i = ss.add_parser("isotropy", parents=[common],
                      description="CSV columns: chart, isotropic, max_entry.")
    i.add_argument("--chart", required=True)
    i.add_argument("--samples", type=int, default=20)
    i.add_argument("--tol", type=float, default=1e-10)
    c = ss.add_parser("coords", parents=[common],
                      description="CSV columns: alpha, beta1.., gamma1...")
    c.add_argument("--base", required=True, help="base state JSON")
    c.add_argument("--state", required=True, help="state JSON")
    for q in (a, i, c):
        q.set_defaults(fn=cmd_symplectic)

    s = sub.add_parser("reproduce", parents=[common], help="run a named worked example",
                       description="CSV columns: case, check, expected, computed, tol, passed.")
    s.add_argument("case", nargs="?", help="case id or 'all'")
    s.add_argument("--list", action="store_true")
    s.add_argument("--describe", action="store_true", help="print what the case computes")
    s.add_argument("--params", help="JSON object overriding case parameters")
    s.set_defaults(fn=cmd_reproduce)

    s = sub.add_parser("acceptance", parents=[common], help="run the acceptance catalogue",
                       description="Default output is one PASS/FAIL line per criterion.  "
                                   "CSV columns: id, title, passed.")
    s.set_defaults(format=None)
    s.add_argument("--filter", help="only criteria with this tag or id")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=cmd_acceptance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args)
    try:
        return args.fn(args, out)
    except UsageError as exc:
        print(f"raygeom: error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"raygeom: bad input: {exc}", file=sys.stderr)
        return 2
    except (RaygeomError, ValueError, ArithmeticError) as exc:
        print(f"raygeom: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
