"""Reproductive boundary: boundary points, approach regions, sequences and
the sampled trichotomy / regularity diagnostics.

A boundary point is represented by an *anchor*: a point of the closure of the
domain (a unimodular scalar, a unit vector, a point of the critical line, or
``inf`` for the ray and the naturals). Its kernel function is obtained by
evaluating the kernel's closed form with the anchor as second argument,
which is the pointwise limit along any sequence converging to the anchor for
every catalog kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .core import (
    BALL,
    DISK,
    HALFPLANE,
    NATURALS,
    POLYDISK,
    RAY,
    Domain,
    Kernel,
    Point,
    diagonal,
    eval_kernel,
    inner,
)
from .errors import DomainError, Inconclusive, NotApproaching
from .numerics import last_quarter, sample_norm_sq, weak_limit_probe
from .sampling import Sample, default_probes

MEMBER_SLACK = 1e-12


@dataclass(frozen=True)
class BoundaryPoint:
    """A candidate point of the reproductive boundary of ``kernel``."""

    kernel: Kernel = field(repr=False)
    anchor: tuple
    label: str
    limit_fn: Callable[[Point], complex] = field(repr=False, compare=False)

    @property
    def anchor_point(self) -> Point:
        return self.kernel.domain.boundary_point(self.anchor)

    def generator(self, n: int) -> Point:
        """The canonical (radial) sequence, ``n = 1, 2, ...``."""
        return radial_point(self.kernel.domain, self.anchor, n)


def boundary_point(k: Kernel, anchor, limit_fn: Optional[Callable[[Point], complex]] = None,
                   label: Optional[str] = None) -> BoundaryPoint:
    """Anchor a boundary point of ``k``.

    ``anchor`` is a scalar or a coordinate tuple of the closure of the domain.
    Without ``limit_fn`` the boundary kernel function is ``y -> k(y, anchor)``
    evaluated through the kernel's closed form.
    """
    dom = k.domain
    if not isinstance(anchor, (tuple, list)):
        anchor = (anchor,)
    anchor = dom.boundary_point(tuple(anchor)).coords
    if dom.contains(anchor):
        raise DomainError(f"anchor {anchor!r} lies inside {dom.label}")
    if limit_fn is None:
        apt = dom.boundary_point(anchor)
        ev = k.evaluator
        limit_fn = lambda y: complex(ev(y, apt))  # noqa: E731
    if label is None:
        label = f"{k.label}@" + ",".join(_fmt_coord(c) for c in anchor)
    return BoundaryPoint(k, tuple(anchor), label, limit_fn)


def _fmt_coord(c) -> str:
    if isinstance(c, complex):
        return f"{c.real:g}{c.imag:+g}i"
    return f"{c:g}"


# --------------------------------------------------------------------------
# approach regions

GAMMA = "Gamma"
E = "E"


@dataclass(frozen=True)
class ApproachRegion:
    kind: str
    M: float
    xi: BoundaryPoint

    def __post_init__(self):
        if self.kind not in (GAMMA, E):
            raise ValueError("kind must be 'Gamma' or 'E'")
        if not self.M > 0:
            raise ValueError("M must be positive")

    def __contains__(self, x: Point) -> bool:
        return gamma_member(self, x) if self.kind == GAMMA else e_member(self, x)


def region_level(xi: BoundaryPoint, x: Point, kind: str = E) -> float:
    """Smallest ``M`` with ``x`` in the region: ``k(x,x) / |k_xi(x)|`` (Gamma) or ``/|k_xi(x)|^2`` (E)."""
    kxx = diagonal(xi.kernel, x)
    v = abs(xi.limit_fn(x))
    if v == 0:
        return math.inf
    return kxx / (v if kind == GAMMA else v * v)


def gamma_member(R: ApproachRegion, x: Point) -> bool:
    """``k(x,x) <= M |k_xi(x)|``."""
    return diagonal(R.xi.kernel, x) <= R.M * abs(R.xi.limit_fn(x)) + MEMBER_SLACK


def e_member(R: ApproachRegion, x: Point) -> bool:
    """``k(x,x) <= M |k_xi(x)|^2``."""
    return diagonal(R.xi.kernel, x) <= R.M * abs(R.xi.limit_fn(x)) ** 2 + MEMBER_SLACK


# --------------------------------------------------------------------------
# sequences

RADIAL = "radial"
NONTANGENTIAL = "nontangential"
HOROCYCLIC = "horocyclic"
TANGENTIAL = "tangential"


def _along(domain: Domain, anchor: tuple, w: complex) -> tuple:
    """Point ``w * anchor`` for disk-like domains."""
    return tuple(w * complex(a) for a in anchor)


def radial_point(domain: Domain, anchor: tuple, n: int) -> Point:
    if domain.kind in (DISK, BALL, POLYDISK):
        return domain.point(_along(domain, anchor, 1 - 2.0 ** -n))
    if domain.kind == HALFPLANE:
        return domain.point(complex(anchor[0]) + 2.0 ** -n)
    if domain.kind in (RAY, NATURALS):
        return domain.point(n)
    raise DomainError(f"no radial generator on {domain.label}")


def _disk_factor(kind: str, n: int, param: Optional[float]) -> complex:
    if kind == RADIAL:
        return 1 - 2.0 ** -n
    if kind == NONTANGENTIAL:
        theta = 0.0 if param is None else param
        w = 1 - 2.0 ** -n * (1 + 1j * math.tan(theta))
        if abs(w) >= 1:
            w = w / abs(w) * (1 - 2.0 ** -n)
        return w
    if kind == HOROCYCLIC:
        M = 1.0 if param is None else param
        theta = math.pi * 2.0 ** (-n / 2)
        return (1 + M * complex(math.cos(theta), math.sin(theta))) / (1 + M)
    if kind == TANGENTIAL:
        beta = 0.5 if param is None else param
        return (1 - n ** (-1.0 / beta)) * complex(math.cos(1.0 / n), math.sin(1.0 / n))
    raise ValueError(f"unknown sequence kind {kind!r}")


def limit_residual(xi: BoundaryPoint, x: Point, probes: Sample) -> float:
    """``max_p |k(p, x) - k_xi(p)|`` over the probes."""
    k = xi.kernel
    return max(abs(eval_kernel(k, p, x) - xi.limit_fn(p)) for p in probes)


def make_sequence(kind: str, xi: BoundaryPoint, N: int, param: Optional[float] = None,
                  probes: Optional[Sample] = None) -> list:
    """Generate ``N`` points approaching ``xi``.

    ``radial``: ``(1 - 2^-n) anchor``; ``nontangential`` (param = angle):
    ``(1 - 2^-n (1 + i tan(angle))) anchor``; ``horocyclic`` (param = M): points
    on the boundary of the horocycle ``|1 - <z, anchor>|^2 = M (1 - |z|^2)``;
    ``tangential`` (param = beta): ``(1 - n^(-1/beta)) e^(i/n) anchor``. On the
    half-plane the offsets are added to the anchor; on the ray and the naturals
    only ``radial`` (``x_n = n``) exists. Before returning, the kernel functions
    along the sequence are checked to approach the boundary function on the
    probes; :class:`NotApproaching` is raised otherwise.
    """
    dom = xi.kernel.domain
    pts = []
    for n in range(1, N + 1):
        if dom.kind in (DISK, BALL, POLYDISK):
            pts.append(dom.point(_along(dom, xi.anchor, _disk_factor(kind, n, param))))
        elif dom.kind == HALFPLANE and kind in (RADIAL, NONTANGENTIAL):
            t = 0.0 if kind == RADIAL or param is None else math.tan(param)
            pts.append(dom.point(complex(xi.anchor[0]) + 2.0 ** -n * (1 + 1j * t)))
        elif dom.kind in (RAY, NATURALS) and kind == RADIAL:
            pts.append(dom.point(n))
        else:
            raise ValueError(f"{kind} sequences are not available on {dom.label}")
    if kind == HOROCYCLIC:
        M = 1.0 if param is None else param
        for p in pts:
            a = abs(1 - inner(p.coords, xi.anchor)) ** 2
            b = 1 - sum(abs(c) ** 2 for c in p.coords)
            if a > M * (1 + 1e-9) * b + 1e-15:
                raise NotApproaching(f"{p!r} left the horocycle of parameter {M}")
    if N >= 2:
        probes = default_probes(dom) if probes is None else probes
        res = [limit_residual(xi, p, probes) for p in pts]
        if not (res[-1] < res[0] or res[-1] < 1e-12):
            raise NotApproaching(f"{kind} sequence does not approach {xi.label}")
    return pts


def parse_sequence_spec(text: str) -> tuple:
    """Split ``kind[:param]@anchor`` (e.g. ``nontangential:0.5@1+0i``)."""
    head, sep, anchor = text.partition("@")
    if not sep:
        raise ValueError(f"sequence spec {text!r} needs '@anchor'")
    kind, _, param = head.partition(":")
    return kind, (float(param) if param else None), anchor


def parse_region_spec(text: str) -> tuple:
    """Split ``gamma:M=2@1+0i`` / ``e:M=1@1+0i`` into (kind, M, anchor)."""
    head, sep, anchor = text.partition("@")
    kind, _, m = head.partition(":")
    if not sep or not m.startswith("M="):
        raise ValueError(f"bad region spec {text!r}")
    kind = {"gamma": GAMMA, "e": E}.get(kind.lower())
    if kind is None:
        raise ValueError(f"bad region kind in {text!r}")
    return kind, float(m[2:]), anchor


# --------------------------------------------------------------------------
# trichotomy

INTERIOR_POINT = "InteriorPointMatch"
INTERIOR_FUNCTION = "InteriorFunction"
BOUNDARY = "Boundary"

DIVERGENCE_THRESHOLD = 1e4
STABLE_RTOL = 1e-3
MATCH_TOL = 1e-8
SEARCH_RMAX = 1 - 1e-4


@dataclass
class Trichotomy:
    verdict: str
    evidence: list
    limit_residual: float
    match: Optional[Point] = None
    match_residual: Optional[float] = None


def nested_samples(k: Kernel, seq: Sequence[Point], base: Optional[Sample] = None,
                   every: int = 4) -> list:
    """Nested samples ``base + {x_every, x_2every, ...}`` along a sequence.

    Only the first three quarters of the sequence are used, so the last term
    (the surrogate of the limit) stays well beyond every sample point.
    """
    base = default_probes(k.domain) if base is None else base
    seq = list(seq)
    picks = seq[: last_quarter(len(seq))][every - 1::every]
    out = []
    cur = base
    for p in picks:
        cur = cur.union([p])
        out.append(cur)
    return out


def _superlinear(trace: np.ndarray) -> bool:
    tail = trace[last_quarter(len(trace)) - 1:] if len(trace) > 2 else trace
    inc = np.diff(tail)
    return bool(inc.size and np.all(inc > 0) and np.all(np.diff(inc) >= 0))


def _candidate_points(domain: Domain, probes: Sample, extra) -> list:
    return list(probes) + list(extra)


def _match_point(k: Kernel, wl, search_from, window: int = 64):
    """Look for ``x`` with ``k_x`` equal to the probed limit; returns (point, residual)."""
    probes = wl.probes
    target = wl.limit_values
    dom = k.domain

    def resid(x):
        return float(max(abs(eval_kernel(k, p, x) - t) for p, t in zip(probes, target)))

    if dom.kind == NATURALS:
        best = min((dom.point(i) for i in range(1, window + 1)), key=resid)
        return best, resid(best)
    cands = sorted(search_from, key=resid)[:3]
    best, best_r = cands[0], resid(cands[0])
    if not dom.is_complex:
        def f(v):
            x = max(float(v[0]), 0.0)
            return resid(dom.point(x))
        for c in cands:
            r = minimize(f, [float(c.z)], method="Nelder-Mead",
                         options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000})
            x = dom.point(max(float(r.x[0]), 0.0))
            if resid(x) < best_r:
                best, best_r = x, resid(x)
        return best, best_r

    d = dom.dim

    def to_point(v):
        z = np.array(v[:d]) + 1j * np.array(v[d:])
        if dom.kind == HALFPLANE:
            z[0] = complex(max(z[0].real, dom.cut + 1e-9), z[0].imag)
        elif dom.kind == POLYDISK:
            z = np.array([c if abs(c) <= SEARCH_RMAX else c / abs(c) * SEARCH_RMAX for c in z])
        else:
            nz = np.linalg.norm(z)
            if nz > SEARCH_RMAX:
                z = z / nz * SEARCH_RMAX
        return dom.point(tuple(z))

    for c in cands:
        v0 = [complex(a).real for a in c.coords] + [complex(a).imag for a in c.coords]
        r = minimize(lambda v: resid(to_point(v)), v0, method="Nelder-Mead",
                     options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        x = to_point(r.x)
        rx = resid(x)
        if rx < best_r:
            best, best_r = x, rx
    return best, best_r


def classify_limit(k: Kernel, seq: Sequence[Point], samples: Sequence[Sample],
                   probes: Optional[Sample] = None,
                   threshold: float = DIVERGENCE_THRESHOLD,
                   stable_rtol: float = STABLE_RTOL,
                   match_tol: float = MATCH_TOL) -> Trichotomy:
    """Sampled trichotomy for the pointwise limit of ``k_{x_n}``.

    The limit is represented by the kernel function of the last sequence term.
    Its sample norms over the nested ``samples`` give the evidence trace:
    ``Boundary`` if the trace passes ``threshold`` while still growing
    superlinearly; ``InteriorFunction`` if the last relative increment is below
    ``stable_rtol``; ``InteriorPointMatch`` if moreover a local search finds an
    ``x`` whose kernel function matches the limit to ``match_tol`` on the probes.
    """
    seq = list(seq)
    wl = weak_limit_probe(k, seq, probes)
    if not wl.converged:
        raise Inconclusive(f"no pointwise convergence on probes (residual {wl.residual:.2e})")
    g = wl.limit
    trace = np.array([sample_norm_sq(k, g, S).value_sq for S in samples])
    if trace.size < 2:
        raise Inconclusive("need at least two nested samples")
    if trace[-1] > threshold and _superlinear(trace):
        return Trichotomy(BOUNDARY, trace.tolist(), wl.residual)
    rel = abs(trace[-1] - trace[-2]) / max(abs(trace[-1]), 1e-300)
    if rel < stable_rtol:
        search_from = _candidate_points(k.domain, wl.probes, samples[0])
        x, r = _match_point(k, wl, search_from)
        if r < match_tol:
            return Trichotomy(INTERIOR_POINT, trace.tolist(), wl.residual, x, r)
        return Trichotomy(INTERIOR_FUNCTION, trace.tolist(), wl.residual, None, r)
    raise Inconclusive(f"sample-norm trace neither diverges nor stabilizes: {trace.tolist()}")


@dataclass
class GrowthReport:
    trace: np.ndarray
    passed: bool


def growth_restriction_check(k: Kernel, f: Callable[[Point], complex], seq: Sequence[Point],
                             tol: float = 1e-3) -> GrowthReport:
    """Trace of ``f(x_n) / k(x_n, x_n)^(1/2)``.

    Passes when the last magnitude is below ``tol`` and the magnitudes are
    nonincreasing over the last quarter.
    """
    seq = list(seq)
    trace = np.array([complex(f(x)) / math.sqrt(diagonal(k, x)) for x in seq])
    mags = np.abs(trace)
    tail = mags[last_quarter(len(mags)):]
    ok = bool(mags[-1] < tol and np.all(np.diff(tail) <= 1e-15))
    return GrowthReport(trace, ok)


def normalized_nullity_trace(k: Kernel, seq: Sequence[Point], probes: Optional[Sample] = None):
    """``max_p |k(p, x_n)| / ||k_{x_n}||``; tends to 0 when ``||k_{x_n}|| -> inf`` and the limit exists."""
    probes = default_probes(k.domain) if probes is None else probes
    return np.array([max(abs(eval_kernel(k, p, x)) for p in probes) / math.sqrt(diagonal(k, x))
                     for x in seq])


def norm_distance_trace(k: Kernel, seq: Sequence[Point], x: Point):
    """``||k_{x_n} - k_x||^2 = k(x_n,x_n) - 2 Re k(x, x_n) + k(x,x)``."""
    kxx = diagonal(k, x)
    return np.array([max(diagonal(k, y) - 2 * eval_kernel(k, x, y).real + kxx, 0.0) for y in seq])


# --------------------------------------------------------------------------
# regularity conditions

@dataclass
class RegularityReport:
    """Sampled evidence on the four regularity conditions (never proofs).

    ``a_hat``: ``max |t_lambda(y)| / t(y,y)`` over the sample.
    ``b_hat``: ``min |t(x,y)|`` over sample pairs.
    ``c_checks``: for sequences along which ``|t_lambda|`` blows up, whether the
    kernel functions converge to ``t_lambda`` on the probes.
    ``d_checks``: for sequences with exploding diagonal, the best catalog
    anchor for the tail and its probe residual.
    """

    a_hat: float
    b_hat: float
    c_checks: list
    d_checks: list


def default_anchor_for(domain: Domain, y: Point):
    """Nearest boundary anchor to an interior point (catalog anchor families)."""
    c = y.coords
    if domain.kind == DISK:
        return (c[0] / abs(c[0]),)
    if domain.kind == BALL:
        nrm = math.sqrt(sum(abs(v) ** 2 for v in c))
        return tuple(v / nrm for v in c)
    if domain.kind == POLYDISK:
        j = int(np.argmax([abs(v) for v in c]))
        return tuple(v / abs(v) if i == j else v for i, v in enumerate(c))
    if domain.kind == HALFPLANE:
        return (complex(domain.cut, complex(c[0]).imag),)
    return (math.inf,)


def regularity_check(t: Kernel, lam: BoundaryPoint, S: Sample, seqs: Sequence = (),
                     candidates: Optional[Sequence[BoundaryPoint]] = None,
                     probes: Optional[Sample] = None, tol: float = 1e-6) -> RegularityReport:
    probes = default_probes(t.domain) if probes is None else probes
    pts = list(S)
    a_hat = max(abs(lam.limit_fn(y)) / diagonal(t, y) for y in pts)
    b_hat = min(abs(eval_kernel(t, x, y)) for x in pts for y in pts)
    c_checks, d_checks = [], []
    for i, seq in enumerate(seqs):
        seq = list(seq)
        v0, v1 = abs(lam.limit_fn(seq[0])), abs(lam.limit_fn(seq[-1]))
        if v1 > 1e3 * max(v0, 1e-300):
            r = limit_residual(lam, seq[-1], probes)
            c_checks.append({"sequence": i, "boundary_value": v1, "residual": r,
                             "converges": bool(r < tol)})
        d0, d1 = diagonal(t, seq[0]), diagonal(t, seq[-1])
        if d1 > 1e6 and d1 > d0:
            cands = list(candidates) if candidates is not None else []
            cands.append(boundary_point(t, default_anchor_for(t.domain, seq[-1])))
            scored = [(limit_residual(c, seq[-1], probes), c) for c in cands]
            r, best = min(scored, key=lambda s: s[0])
            d_checks.append({"sequence": i, "anchor": best.anchor, "label": best.label,
                             "residual": r, "matched": bool(r < tol)})
    return RegularityReport(float(a_hat), float(b_hat), c_checks, d_checks)
