"""Command line experiment runner.

Every subcommand prints (or writes with ``--out``) one deterministic report.
Exit codes: 0 pass or certified, 2 refuted or violated (witness included),
3 inconclusive, 1 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from . import boundary as bd
from . import classical as cl
from . import julia as jl
from .core import Domain, p_metric
from .errors import (
    DegenerateError,
    FactorRefuted,
    Inconclusive,
    NoMatch,
    NotApproaching,
    RKBoundaryError,
    StalledError,
)
from .numerics import CONVERGENCE_TOL
from .sampling import quasi_random_sample
from .zoo import parse_complex, parse_kernel, parse_map, parse_vector

EXIT_OK, EXIT_USAGE, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# --------------------------------------------------------------------------
# serialization

def jsonable(obj):
    """Recursively convert reports into JSON-safe values (complex as [re, im])."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    return obj


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def dump_csv(rows: list, header: list) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: jsonable(r.get(k, "")) for k in header})
    return buf.getvalue()


def _flat_rows(report: dict) -> tuple:
    rows = [{"key": k, "value": json.dumps(jsonable(v), sort_keys=True)} for k, v in sorted(report.items())]
    return rows, ["key", "value"]


# --------------------------------------------------------------------------
# argument helpers

def parse_anchor(text: str, domain: Domain) -> tuple:
    """Anchor literal: ``1+0i``, ``0.6,0.8i`` on the sphere, ``inf`` for the ray and the naturals."""
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return (math.inf,)
    vals = parse_vector(text)
    if not domain.is_complex:
        return tuple(v.real for v in vals)
    return vals


def parse_point(text: str, domain: Domain):
    coords = parse_vector(text)
    if not domain.is_complex:
        coords = tuple(c.real for c in coords)
    return domain.point(coords)


def _floats(text: str) -> list:
    return [float(v) for v in text.split(",") if v]


def _seq_specs(items) -> list:
    specs = []
    for s in items or []:
        kind, _, param = s.partition(":")
        if kind not in (bd.RADIAL, bd.NONTANGENTIAL, bd.HOROCYCLIC, bd.TANGENTIAL):
            raise UsageError(f"unknown sequence kind {kind!r}")
        specs.append((kind, float(param) if param else None))
    return specs


def _require_radial_and_nt(specs, domain: Domain):
    if domain.kind in ("ray", "naturals"):
        return
    kinds = {k for k, _ in specs}
    if bd.RADIAL not in kinds or bd.NONTANGENTIAL not in kinds:
        raise UsageError("supply at least a radial and one nontangential sequence (--seq)")


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, report dict, csv rows, csv header, plot rows)

def cmd_certify_factor(a):
    k, t, phi = parse_kernel(a.k), parse_kernel(a.t), parse_map(a.map)
    extra = [] if a.no_grid else None
    fv = jl.certify_factor(k, t, phi, sizes=[int(v) for v in _floats(a.sizes)], seed=a.seed,
                           extra=extra, tol=a.tol, restarts=a.restarts)
    rep = fv.to_dict()
    rows = [{"n": r.n, "min_eig": r.min_eig, "tol": r.tol, "verdict": r.verdict} for r in fv.reports]
    plot = [{"series": "min_eig", "n": i, "value": r.min_eig} for i, r in enumerate(fv.reports)]
    return (EXIT_OK if fv.certified else EXIT_REFUTED), rep, rows, ["n", "min_eig", "tol", "verdict"], plot


def _sequences(k, xi, specs, N):
    return [bd.make_sequence(kind, xi, N, param) for kind, param in specs]


def cmd_estimate_c(a):
    k, t, phi = parse_kernel(a.k), parse_kernel(a.t), parse_map(a.map)
    specs = _seq_specs(a.seq) or [(bd.RADIAL, None), (bd.NONTANGENTIAL, 0.5)]
    _require_radial_and_nt(specs, k.domain)
    if k.domain.kind in ("ray", "naturals"):
        specs = [(bd.RADIAL, None)]
    xi = bd.boundary_point(k, parse_anchor(a.xi, k.domain))
    seqs = _sequences(k, xi, specs, a.N)
    est = jl.estimate_c(k, t, phi, seqs)
    rep = {"kernel": k.label, "t_kernel": t.label, "map": phi.label, "xi": xi.anchor, "c_hat": est.c_hat,
           "sequences": [{"kind": kd, "param": p, "tail_mean": m, "trace": tr}
                         for (kd, p), m, tr in zip(specs, est.tail_means, est.traces)]}
    rows, plot = [], []
    for (kd, p), tr in zip(specs, est.traces):
        name = kd if p is None else f"{kd}:{p:g}"
        for n, v in enumerate(tr, start=1):
            rows.append({"sequence": name, "n": n, "ratio": v})
            plot.append({"series": name, "n": n, "value": v})
    return EXIT_OK, rep, rows, ["sequence", "n", "ratio"], plot


def cmd_jc_report(a):
    k, t, phi = parse_kernel(a.k), parse_kernel(a.t), parse_map(a.map)
    specs = _seq_specs(a.seq) or [(bd.RADIAL, None), (bd.NONTANGENTIAL, 0.5)]
    _require_radial_and_nt(specs, k.domain)
    try:
        r = jl.jc_report(k, t, phi, parse_anchor(a.xi, k.domain), N=a.N, seqs=specs, seed=a.seed)
    except FactorRefuted as exc:
        return EXIT_REFUTED, {"error": str(exc), "factor": exc.verdict.to_dict()}, [], ["key"], []
    rep = r.to_dict()
    rows, header = _flat_rows(rep)
    plot = [{"series": "q_norm_sq_lb", "n": i, "value": v} for i, v in enumerate(r.q_norm_trace)]
    return (EXIT_OK if r.sandwich_ok else EXIT_REFUTED), rep, rows, header, plot


def cmd_julia_check(a):
    k, phi = parse_kernel(a.k), parse_map(a.map)
    if k.domain.kind != "disk":
        raise UsageError("julia-check samples horocycles of the disk only")
    xi = bd.boundary_point(k, parse_anchor(a.xi, k.domain))
    if a.lam:
        lam = bd.boundary_point(k, parse_anchor(a.lam, k.domain))
    else:
        lam = jl.detect_lambda(k, phi, bd.make_sequence(bd.RADIAL, xi, jl.DETECT_N))
    c = a.c
    if c is None:
        c = jl.estimate_c(k, k, phi, _sequences(k, xi, [(bd.RADIAL, None), (bd.NONTANGENTIAL, 0.5)], a.N)).c_hat
    Ms = _floats(a.M)
    per = max(1, a.n_points // len(Ms))
    pts = []
    for M in Ms:
        pts.extend(jl.horocycle_points(xi.anchor[0], M, per, shrink=(1.0, 0.5, 0.25, 0.1, 0.01)))
    rep_j = jl.julia_inclusion_check(k, phi, xi, lam, c, [max(Ms)], pts)
    rep = {"kernel": k.label, "map": phi.label, "xi": xi.anchor, "lambda": lam.anchor, "c": c, "M": Ms,
           **rep_j.to_dict()}
    rows, header = _flat_rows(rep)
    return (EXIT_OK if rep_j.ok else EXIT_REFUTED), rep, rows, header, []


def cmd_iterate(a):
    k, phi = parse_kernel(a.k), parse_map(a.map)
    xi = bd.boundary_point(k, parse_anchor(a.xi, k.domain))
    x0 = parse_point(a.x0, k.domain)
    c = a.c
    if c is None:
        specs = [(bd.RADIAL, None)] if k.domain.kind in ("ray", "naturals") else \
            [(bd.RADIAL, None), (bd.NONTANGENTIAL, 0.5)]
        c = jl.estimate_c(k, k, phi, _sequences(k, xi, specs, 30)).c_hat
    if not c < 1:
        raise UsageError(f"iteration needs c < 1 (got {c:g})")
    try:
        tr = jl.iterate_to_boundary(k, phi, x0, xi, c, N=a.N, tol=a.conv_tol)
    except StalledError as exc:
        return EXIT_INCONCLUSIVE, {"error": str(exc)}, [], ["key"], []
    rep = {"kernel": k.label, "map": phi.label, "xi": xi.anchor, "c": c, **tr.to_dict()}
    rows = tr.rows()
    plot = [{"series": s, "n": r["n"], "value": r[s]} for r in rows for s in ("E_level", "probe_residual")]
    code = {jl.CONVERGED: EXIT_OK, jl.NOT_CONVERGED: EXIT_INCONCLUSIVE, jl.FIXED_POINT: EXIT_REFUTED}[tr.verdict]
    return code, rep, rows, ["n", "re", "im", "diag", "E_level", "probe_residual"], plot


def cmd_boundary_scan(a):
    k = parse_kernel(a.k)
    kind, param, anchor = bd.parse_sequence_spec(a.seq)
    xi = bd.boundary_point(k, parse_anchor(anchor, k.domain))
    seq = bd.make_sequence(kind, xi, a.N, param)
    region = None
    if a.region:
        rkind, M, ranchor = bd.parse_region_spec(a.region)
        rxi = bd.boundary_point(k, parse_anchor(ranchor, k.domain))
        region = bd.ApproachRegion(rkind, M, rxi)
    rows = []
    prev = None
    for n, x in enumerate(seq, start=1):
        c0 = complex(x.coords[0])
        row = {"n": n, "re": c0.real, "im": c0.imag, "diag": bd.diagonal(k, x),
               "member": (x in region) if region is not None else ""}
        try:
            row["p_step"] = "" if prev is None else p_metric(k, prev, x, squared=a.pmetric_squared)
        except DegenerateError:
            # the literal formula leaves [0, 1] once the diagonal exceeds one
            row["p_step"] = "degenerate"
        rows.append(row)
        prev = x
    rep = {"kernel": k.label, "sequence": a.seq, "region": a.region or "", "rows": rows,
           "pmetric_squared": bool(a.pmetric_squared)}
    code = EXIT_OK
    if a.classify:
        try:
            tri = bd.classify_limit(k, seq, bd.nested_samples(k, seq), threshold=a.threshold,
                                    stable_rtol=a.stable_rtol)
            rep["trichotomy"] = {"verdict": tri.verdict, "evidence": tri.evidence,
                                 "limit_residual": tri.limit_residual,
                                 "match": list(tri.match.coords) if tri.match is not None else None,
                                 "match_residual": tri.match_residual}
        except Inconclusive as exc:
            rep["trichotomy"] = {"verdict": "Inconclusive", "reason": str(exc)}
            code = EXIT_INCONCLUSIVE
    plot = [{"series": "diag", "n": r["n"], "value": r["diag"]} for r in rows]
    return code, rep, rows, ["n", "re", "im", "diag", "member", "p_step"], plot


def cmd_regularity(a):
    t = parse_kernel(a.t)
    lam = bd.boundary_point(t, parse_anchor(a.lam, t.domain))
    S = quasi_random_sample(t.domain, a.n, seed=a.seed)
    seqs = []
    for s in a.seq or []:
        kind, param, anchor = bd.parse_sequence_spec(s)
        seqs.append(bd.make_sequence(kind, bd.boundary_point(t, parse_anchor(anchor, t.domain)), a.N, param))
    r = bd.regularity_check(t, lam, S, seqs)
    rep = {"t_kernel": t.label, "lambda": lam.anchor, "n": a.n, "a_hat": r.a_hat, "b_hat": r.b_hat,
           "c_checks": r.c_checks, "d_checks": r.d_checks}
    rows, header = _flat_rows(rep)
    return EXIT_OK, rep, rows, header, []


def cmd_weighted_derivative(a):
    phi = parse_map(a.map)
    zeta, lam = parse_complex(a.zeta), parse_complex(a.lam)
    reports = []
    rows, plot = [], []
    for th in _floats(a.theta):
        r = cl.weighted_derivative_check(phi, zeta, lam, a.alpha, cl.stolz_sequence(zeta, th, a.N),
                                         tol=a.conv_tol)
        d = r.to_dict()
        d["theta"] = th
        reports.append(d)
        for n, (q, w) in enumerate(zip(r.dq_trace, r.wd_trace), start=1):
            rows.append({"theta": th, "n": n, "dq_re": q.real, "dq_im": q.imag, "wd_re": w.real, "wd_im": w.imag})
            plot.append({"series": f"dq:{th:g}", "n": n, "value": abs(q)})
            plot.append({"series": f"wd:{th:g}", "n": n, "value": abs(w)})
    ok = all(d["passed"] for d in reports)
    rep = {"map": phi.label, "alpha": a.alpha, "zeta": zeta, "lambda": lam, "apertures": reports, "passed": ok}
    return (EXIT_OK if ok else EXIT_REFUTED), rep, rows, ["theta", "n", "dq_re", "dq_im", "wd_re", "wd_im"], plot


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rkboundary", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--emit-plot-data", metavar="PATH", help="also write long-format CSV (series, n, value)")
        sp.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
        return sp

    sp = common(sub.add_parser("certify-factor", help="sampled PSD check of k / (t o phi)"))
    sp.add_argument("--k", required=True)
    sp.add_argument("--t", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--sizes", default="8,16,32,64", help="escalating sample sizes (default 8,16,32,64)")
    sp.add_argument("--restarts", type=int, default=jl.WITNESS_RESTARTS,
                    help=f"witness search restarts (default {jl.WITNESS_RESTARTS})")
    sp.add_argument("--tol", type=float, default=None, help="PSD tolerance (default 1e-9 n max|G_ii|)")
    sp.add_argument("--no-grid", action="store_true", help="skip the fixed 16-point disk grid")
    sp.set_defaults(func=cmd_certify_factor)

    def jc_args(sp):
        sp.add_argument("--k", required=True)
        sp.add_argument("--t", required=True)
        sp.add_argument("--map", required=True)
        sp.add_argument("--xi", required=True, help="boundary anchor, e.g. 1+0i")
        sp.add_argument("-N", type=int, default=30, help="sequence length (default 30)")
        sp.add_argument("--seq", action="append",
                        help="sequence kind[:param], repeatable (default radial and nontangential:0.5)")

    sp = common(sub.add_parser("estimate-c", help="tail-mean estimate of c"))
    jc_args(sp)
    sp.set_defaults(func=cmd_estimate_c)

    sp = common(sub.add_parser("jc-report", help="full pipeline with the sandwich check"))
    jc_args(sp)
    sp.set_defaults(func=cmd_jc_report)

    sp = common(sub.add_parser("julia-check", help="Julia inclusion on sampled horocycle points"))
    sp.add_argument("--k", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--xi", required=True)
    sp.add_argument("--lam", help="anchor of phi(xi) (default: detected)")
    sp.add_argument("--c", type=float, help="constant (default: estimated)")
    sp.add_argument("--M", default="0.5,1,2,4", help="horocycle parameters (default 0.5,1,2,4)")
    sp.add_argument("--n-points", type=int, default=500, help="number of sampled points (default 500)")
    sp.add_argument("-N", type=int, default=30, help="length of the sequences used to estimate c")
    sp.set_defaults(func=cmd_julia_check)

    sp = common(sub.add_parser("iterate", help="iterate phi towards a boundary point"))
    sp.add_argument("--k", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--x0", required=True)
    sp.add_argument("--xi", required=True)
    sp.add_argument("--c", type=float, help="constant (default: estimated, must be < 1)")
    sp.add_argument("-N", type=int, default=40, help="number of steps (default 40)")
    sp.add_argument("--conv-tol", type=float, default=CONVERGENCE_TOL,
                    help=f"probe residual tolerance (default {CONVERGENCE_TOL:g})")
    sp.set_defaults(func=cmd_iterate)

    sp = common(sub.add_parser("boundary-scan", help="trace a sequence, regions and the trichotomy"))
    sp.add_argument("--k", required=True)
    sp.add_argument("--seq", required=True, help="kind[:param]@anchor, e.g. radial@1+0i")
    sp.add_argument("--region", help="gamma:M=2@1+0i or e:M=1@1+0i")
    sp.add_argument("-N", type=int, default=40, help="sequence length (default 40)")
    sp.add_argument("--classify", action="store_true", help="run the trichotomy classifier")
    sp.add_argument("--threshold", type=float, default=bd.DIVERGENCE_THRESHOLD,
                    help=f"divergence threshold (default {bd.DIVERGENCE_THRESHOLD:g})")
    sp.add_argument("--stable-rtol", type=float, default=bd.STABLE_RTOL,
                    help=f"stabilization tolerance (default {bd.STABLE_RTOL:g})")
    sp.add_argument("--pmetric-squared", action="store_true",
                    help="use k(x,x)k(y,y) in the p-metric denominator")
    sp.set_defaults(func=cmd_boundary_scan)

    sp = common(sub.add_parser("regularity", help="sampled constants for conditions (A)-(D)"))
    sp.add_argument("--t", required=True)
    sp.add_argument("--lam", required=True)
    sp.add_argument("--n", type=int, default=64, help="sample size (default 64)")
    sp.add_argument("--seq", action="append", help="kind[:param]@anchor sequences for (C) and (D)")
    sp.add_argument("-N", type=int, default=30)
    sp.set_defaults(func=cmd_regularity)

    sp = common(sub.add_parser("weighted-derivative", help="difference quotient vs weighted derivative"))
    sp.add_argument("--map", required=True)
    sp.add_argument("--zeta", default="1+0i")
    sp.add_argument("--lam", default="1+0i")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--theta", default="0,0.5,1", help="Stolz apertures in radians (default 0,0.5,1)")
    sp.add_argument("-N", type=int, default=30)
    sp.add_argument("--conv-tol", type=float, default=cl.CONVERGE_TOL,
                    help=f"convergence tolerance (default {cl.CONVERGE_TOL:g})")
    sp.set_defaults(func=cmd_weighted_derivative)
    return p


def _write(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        code, rep, rows, header, plot = args.func(args)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"rkboundary: {exc}\n")
        return EXIT_USAGE
    except (Inconclusive, NoMatch, NotApproaching) as exc:
        code, rep, rows, header, plot = EXIT_INCONCLUSIVE, {"error": type(exc).__name__, "reason": str(exc)}, [], [], []
    except RKBoundaryError as exc:
        code, rep, rows, header, plot = EXIT_INCONCLUSIVE, {"error": type(exc).__name__, "reason": str(exc)}, [], [], []
    rep = dict(rep)
    rep["command"] = args.command
    rep["exit_code"] = code
    if args.format == "csv" and rows:
        _write(dump_csv(rows, header), args.out)
    else:
        _write(dump_json(rep), args.out)
    if args.emit_plot_data:
        _write(dump_csv(plot, ["series", "n", "value"]), args.emit_plot_data)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
