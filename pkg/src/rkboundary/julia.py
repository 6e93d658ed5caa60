"""Julia-Caratheodory quantities for composition factors.

The pipeline is: certify that ``phi`` is a composition factor on samples,
estimate ``c = liminf k(x,x) / t(phi x, phi x)`` along sequences approaching a
boundary point ``xi``, detect the boundary limit ``lambda`` of ``phi(x_n)``,
build ``q_xi = k_xi / (t_lambda o phi)`` and check the sandwich

    0 < ||q_xi||^2 <= c <= (M a_lambda ||q_xi||)^2

with sampled surrogates. Julia's inclusion and the iteration towards a
Denjoy-Wolff type point are checked on top of that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar, minimize

from .boundary import (
    GAMMA,
    NONTANGENTIAL,
    RADIAL,
    BoundaryPoint,
    boundary_point,
    default_anchor_for,
    limit_residual,
    make_sequence,
    region_level,
)
from .core import (
    BALL,
    DISK,
    DIVISION_FLOOR,
    HALFPLANE,
    Kernel,
    Point,
    SelfMap,
    compose_kernel,
    compose_maps,
    diagonal,
    eval_kernel,
    quotient_kernel,
)
from .errors import DivisionError, DomainError, FactorRefuted, NoMatch, StalledError
from .numerics import (
    NOT_PSD,
    GramReport,
    gram,
    gram_matrix,
    last_quarter,
    pivoted_sample_norm_sq,
    psd_report,
    sample_norm_sq,
    weak_limit_probe,
)
from .sampling import Sample, default_probes, grid_g16, quasi_random_sample

CERTIFIED = "CertifiedOnSamples"
REFUTED = "Refuted"

DEFAULT_SIZES = (8, 16, 32, 64)
WITNESS_RESTARTS = 200
NEAR_ZERO = 1e-6
LAMBDA_TOL = 1e-4
SANDWICH_SLACK = 1e-6
JULIA_RTOL = 1e-9
DETECT_N = 50


# --------------------------------------------------------------------------
# composition factors

@dataclass
class FactorVerdict:
    """Outcome of :func:`certify_factor`.

    ``witness`` is the refuting Gram report (its points and eigenvector), or
    ``None`` when every sample passed.
    """

    quotient: Kernel = field(repr=False)
    reports: list
    verdict: str
    witness: Optional[GramReport] = None
    searched: int = 0

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_dict(self) -> dict:
        out = {"quotient": self.quotient.label, "verdict": self.verdict,
               "reports": [r.to_dict() for r in self.reports], "witness_search_restarts": self.searched}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict(with_points=True)
        return out


def factor_quotient(k: Kernel, t: Kernel, phi: SelfMap) -> Kernel:
    """``k / (t o phi)``."""
    return quotient_kernel(k, compose_kernel(t, phi))


def _perturb(point: Point, rng: np.random.Generator, scale: float) -> Point:
    dom = point.domain
    if dom.kind == "naturals":
        return dom.point(max(1, point.z + int(rng.integers(-2, 3))))
    if not dom.is_complex:
        return dom.point(abs(point.z * (1 + scale * rng.standard_normal())) + 1e-6)
    c = np.array([complex(v) for v in point.coords])
    for _ in range(20):
        step = scale * (rng.standard_normal(c.size) + 1j * rng.standard_normal(c.size))
        if dom.kind in (DISK, BALL, "polydisk"):
            step *= max(1e-6, 1 - float(np.max(np.abs(c))))
        cand = tuple(c + step)
        if dom.contains(cand):
            return dom.point(cand)
    return point


def _scaled_min_eig(rep: GramReport) -> float:
    scale = float(np.max(np.abs(np.diag(rep.matrix)))) or 1.0
    return rep.min_eig / scale


def witness_search(q: Kernel, start: Sample, rng: np.random.Generator, restarts: int = WITNESS_RESTARTS,
                   size: int = 6, tol: Optional[float] = None) -> tuple:
    """Randomized local search for a small non-PSD Gram submatrix.

    Each restart picks ``size`` points of ``start`` (biased towards the
    smallest-eigenvector's support) and perturbs them; the lowest scaled
    eigenvalue seen is kept and reused as the next starting configuration.
    Returns ``(report, restarts_used)``; the report is ``None`` if no
    refutation was found.
    """
    pts = list(start)
    rep = gram(q, start, tol)
    weights = np.abs(rep.witness) ** 2 + 1e-3 if rep.witness is not None else np.ones(len(pts))
    weights = weights / weights.sum()
    size = min(size, len(pts))
    best_pts = [pts[i] for i in rng.choice(len(pts), size, replace=False, p=weights)]
    best_val = _scaled_min_eig(gram(q, Sample(tuple(best_pts), start.domain), tol))
    for r in range(restarts):
        cand = [_perturb(p, rng, 0.3) for p in best_pts]
        try:
            S = Sample(tuple(cand), start.domain)
        except ValueError:
            continue
        cur = gram(q, S, tol)
        if cur.verdict == NOT_PSD:
            return cur, r + 1
        val = _scaled_min_eig(cur)
        if val < best_val:
            best_pts, best_val = cand, val
    return None, restarts


def certify_factor(k: Kernel, t: Kernel, phi: SelfMap, sizes: Sequence[int] = DEFAULT_SIZES,
                   seed: int = 0, extra: Optional[Sequence[Sample]] = None, tol: Optional[float] = None,
                   restarts: int = WITNESS_RESTARTS) -> FactorVerdict:
    """Sampled certification (or refutation) of ``k / (t o phi) >= 0``.

    Gram matrices of the quotient are checked on quasi-random samples of the
    given sizes, then on ``extra`` samples (the 16-point grid on the disk by
    default). When some smallest eigenvalue is close to zero a randomized
    witness search runs ``restarts`` perturbation rounds.
    """
    q = factor_quotient(k, t, phi)
    dom = k.domain
    samples = [quasi_random_sample(dom, n, seed=seed) for n in sizes]
    if extra is None:
        extra = [grid_g16()] if dom.kind == DISK else []
    samples.extend(extra)
    reports = []
    for S in samples:
        rep = gram(q, S, tol)
        reports.append(rep)
        if rep.verdict == NOT_PSD:
            return FactorVerdict(q, reports, REFUTED, rep)
    near = [r for r in reports if abs(_scaled_min_eig(r)) < NEAR_ZERO]
    used = 0
    if near and restarts > 0:
        rng = np.random.default_rng(seed)
        start = Sample(near[0].points, dom)
        found, used = witness_search(q, start, rng, restarts, tol=tol)
        if found is not None:
            reports.append(found)
            return FactorVerdict(q, reports, REFUTED, found, used)
    return FactorVerdict(q, reports, CERTIFIED, None, used)


def transitivity_check(k: Kernel, t: Kernel, r: Kernel, phi: SelfMap, psi: SelfMap, S: Sample,
                       tol: Optional[float] = None) -> bool:
    """PSD verdict of ``k / (r o psi o phi)`` on ``S``."""
    q = factor_quotient(k, r, compose_maps(psi, phi))
    return gram(q, S, tol).verdict != NOT_PSD


# --------------------------------------------------------------------------
# c estimation

@dataclass
class CEstimate:
    """Ratio traces ``k(x_n,x_n) / t(phi x_n, phi x_n)`` and their tail means."""

    c_hat: float
    traces: list
    tail_means: list
    running_min: np.ndarray


def c_ratio(k: Kernel, t: Kernel, phi: SelfMap, x: Point) -> float:
    return diagonal(k, x) / diagonal(t, phi(x))


def estimate_c(k: Kernel, t: Kernel, phi: SelfMap, seqs: Sequence[Sequence[Point]]) -> CEstimate:
    """Tail-mean estimate of the liminf of ``k(x,x) / t o phi(x,x)``.

    ``c_hat`` is the smallest last-quarter mean over the supplied sequences;
    in exact arithmetic it sits above the true liminf restricted to them.
    """
    if not seqs:
        raise ValueError("need at least one sequence")
    traces = [np.array([c_ratio(k, t, phi, x) for x in seq]) for seq in seqs]
    tails = [float(np.mean(tr[last_quarter(len(tr)):])) for tr in traces]
    running = np.minimum.accumulate(np.concatenate(traces))
    return CEstimate(min(tails), traces, tails, running)


# --------------------------------------------------------------------------
# q_xi and lambda

def build_q_xi(k: Kernel, t: Kernel, phi: SelfMap, xi: BoundaryPoint,
               lam: BoundaryPoint) -> Callable[[Point], complex]:
    """``x -> k_xi(x) / t_lambda(phi(x))``."""

    def q(x: Point) -> complex:
        den = lam.limit_fn(phi(x))
        if abs(den) < DIVISION_FLOOR:
            raise DivisionError(f"t_lambda(phi(x)) vanishes at {x!r}")
        return xi.limit_fn(x) / den

    return q


def _fit_anchor(t: Kernel, target: np.ndarray, probes: Sample, guess: tuple) -> tuple:
    dom = t.domain

    def resid(anchor):
        apt = dom.boundary_point(anchor)
        try:
            vals = np.array([complex(t.evaluator(p, apt)) for p in probes])
        except (ArithmeticError, ValueError):
            return math.inf
        return float(np.max(np.abs(vals - target)))

    if dom.kind == DISK:
        th0 = math.atan2(complex(guess[0]).imag, complex(guess[0]).real)
        r = minimize_scalar(lambda th: resid((complex(math.cos(th), math.sin(th)),)),
                            bounds=(th0 - 0.5, th0 + 0.5), method="bounded",
                            options={"xatol": 1e-12})
        best = (complex(math.cos(r.x), math.sin(r.x)),)
    elif dom.kind == BALL:
        g = np.array([complex(v) for v in guess])
        v0 = np.concatenate([g.real, g.imag])

        def unit(v):
            z = v[: dom.dim] + 1j * v[dom.dim:]
            return tuple(z / np.linalg.norm(z))

        r = minimize(lambda v: resid(unit(v)), v0, method="Nelder-Mead",
                     options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = unit(r.x)
    elif dom.kind == HALFPLANE:
        y0 = complex(guess[0]).imag
        r = minimize_scalar(lambda y: resid((complex(dom.cut, y),)), bounds=(y0 - 1, y0 + 1),
                            method="bounded", options={"xatol": 1e-12})
        best = (complex(dom.cut, r.x),)
    else:
        best = tuple(guess)
    if resid(tuple(guess)) < resid(best):
        best = tuple(guess)
    return best, resid(best)


def detect_lambda(t: Kernel, phi: SelfMap, seq: Sequence[Point], probes: Optional[Sample] = None,
                  tol: float = LAMBDA_TOL) -> BoundaryPoint:
    """Anchor of the boundary limit of ``phi(x_n)`` in the ``t``-sense.

    The probe values of ``t_{phi(x_N)}`` are fitted by an anchored boundary
    function of the same family (unimodular scalar, unit vector, critical line
    point or ``inf``). Raises :class:`NoMatch` if the best fit misses ``tol``.
    """
    images = [phi(x) for x in seq]
    probes = default_probes(t.domain) if probes is None else probes
    wl = weak_limit_probe(t, images, probes)
    guess = default_anchor_for(t.domain, images[-1])
    anchor, res = _fit_anchor(t, wl.limit_values, probes, guess)
    if not res < tol:
        raise NoMatch(f"no anchored boundary point matches phi(x_n) (residual {res:.2e})")
    return boundary_point(t, anchor)


# --------------------------------------------------------------------------
# the main report

@dataclass
class JCReport:
    kernel: str
    t_kernel: str
    map: str
    xi: tuple
    lambda_hat: tuple
    c_hat: float
    q_norm_sq_lb: float
    M_used: float
    a_lambda_hat: float
    sandwich_ok: bool
    sequences: list
    q_norm_trace: list = field(default_factory=list)
    section_limit_residual: float = 0.0

    def to_dict(self) -> dict:
        def enc(anchor):
            return [[float(complex(c).real), float(complex(c).imag)] if not _is_inf(c) else "inf"
                    for c in anchor]
        return {"kernel": self.kernel, "t_kernel": self.t_kernel, "map": self.map,
                "xi": enc(self.xi), "lambda": enc(self.lambda_hat), "c_hat": self.c_hat,
                "q_norm_sq_lb": self.q_norm_sq_lb, "M_used": self.M_used,
                "a_lambda_hat": self.a_lambda_hat, "sandwich_ok": self.sandwich_ok,
                "q_norm_trace": self.q_norm_trace,
                "section_limit_residual": self.section_limit_residual,
                "sequences": self.sequences}


def _is_inf(c) -> bool:
    return isinstance(c, float) and math.isinf(c)


def sandwich_check(report: JCReport, slack: float = SANDWICH_SLACK) -> bool:
    """``q_lb <= c_hat`` and ``c_hat <= (M a)^2 q_lb``, each with ``slack``."""
    r = report
    lower = 0 < r.q_norm_sq_lb <= r.c_hat + slack
    upper = r.c_hat <= (r.M_used * r.a_lambda_hat) ** 2 * r.q_norm_sq_lb + slack
    return bool(lower and upper)


def a_lambda_hat(t: Kernel, lam: BoundaryPoint, points: Sequence[Point]) -> float:
    """``max |t_lambda(y)| / t(y,y)`` over ``points``."""
    return float(max(abs(lam.limit_fn(y)) / diagonal(t, y) for y in points))


def m_used(xi: BoundaryPoint, seq: Sequence[Point]) -> float:
    """Smallest ``M`` with the last quarter of ``seq`` inside ``Gamma_k(M, xi)``."""
    seq = list(seq)
    return float(max(region_level(xi, x, GAMMA) for x in seq[last_quarter(len(seq)):]))


def q_norm_samples(k: Kernel, seq: Sequence[Point], n_base: int = 16, seed: int = 0,
                   every: int = 2) -> list:
    """Nested samples for the ``q_xi`` norm: quasi-random base plus the sequence head."""
    seq = list(seq)
    base = quasi_random_sample(k.domain, n_base, seed=seed)
    out = [base]
    for x in seq[: last_quarter(len(seq))][every - 1::every]:
        out.append(out[-1].union([x]))
    return out


def section_limit_residual(q: Kernel, seq: Sequence[Point], probes: Sample) -> float:
    """Largest last-quarter oscillation of ``q_p(x_n)`` over the probes.

    Sampled stand-in for the existence of boundary limits of functions in
    ``H(q)``, restricted to the spanning set of kernel sections.
    """
    seq = list(seq)
    vals = np.array([[eval_kernel(q, x, p) for p in probes] for x in seq])
    start = last_quarter(len(seq))
    return float(np.max(np.abs(vals[start:] - vals[-1])))


def jc_report(k: Kernel, t: Kernel, phi: SelfMap, xi_anchor, N: int = 30,
              seqs: Optional[Sequence[tuple]] = None, seed: int = 0, certify: bool = True,
              probes: Optional[Sample] = None, n_base: int = 16) -> JCReport:
    """Run the whole pipeline for ``(k, t, phi)`` at the boundary point anchored at ``xi_anchor``.

    ``seqs`` is a list of ``(kind, param)`` pairs for :func:`make_sequence`;
    the default is a radial and a nontangential (angle 0.5) sequence. The
    first sequence drives ``lambda`` detection, ``M_used`` and the norm
    samples. Raises :class:`FactorRefuted` if certification fails.
    """
    if certify:
        fv = certify_factor(k, t, phi, seed=seed)
        if not fv.certified:
            raise FactorRefuted(f"{phi.label} is not a composition factor for ({k.label}, {t.label})", fv)
    q_kernel = factor_quotient(k, t, phi)
    xi = boundary_point(k, xi_anchor)
    specs = list(seqs) if seqs is not None else [(RADIAL, None), (NONTANGENTIAL, 0.5)]
    if k.domain.kind not in (DISK, BALL, "polydisk", HALFPLANE):
        specs = [(RADIAL, None)]
    sequences = [make_sequence(kind, xi, N, param) for kind, param in specs]
    est = estimate_c(k, t, phi, sequences)
    lam = detect_lambda(t, phi, make_sequence(RADIAL, xi, DETECT_N))
    q = build_q_xi(k, t, phi, xi, lam)
    samples = q_norm_samples(k, sequences[0], n_base=n_base, seed=seed)
    trace = [pivoted_sample_norm_sq(q_kernel, q, S).value_sq for S in samples]
    q_lb = float(max(trace))
    a_points = list(quasi_random_sample(t.domain, 64, seed=seed))
    for seq in sequences:
        a_points.extend(phi(x) for x in seq)
    a_hat = a_lambda_hat(t, lam, a_points)
    M = m_used(xi, sequences[0])
    probes = default_probes(k.domain) if probes is None else probes
    sec = max(section_limit_residual(q_kernel, s, probes) for s in sequences)
    seq_info = [{"kind": kind, "param": param, "N": N, "tail_mean": tm, "last_ratio": float(tr[-1])}
                for (kind, param), tm, tr in zip(specs, est.tail_means, est.traces)]
    rep = JCReport(k.label, t.label, phi.label, xi.anchor, lam.anchor, est.c_hat, q_lb, M, a_hat,
                   False, seq_info, trace, sec)
    rep.sandwich_ok = sandwich_check(rep)
    return rep


# --------------------------------------------------------------------------
# Julia's lemma and iteration

@dataclass
class JuliaReport:
    """Per-point check of ``level(phi x) <= c level(x)`` for ``x`` in ``E(M, xi)``.

    ``level(x) = k(x,x) / |k_xi(x)|^2``; a violation is a relative excess
    beyond ``rtol`` and an equality is a relative gap within ``rtol``.
    """

    checked: int
    violations: list
    equalities: list
    max_ratio: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"checked": self.checked, "violations": self.violations,
                "equalities": len(self.equalities), "max_ratio": self.max_ratio, "ok": self.ok}


def julia_inclusion_check(k: Kernel, phi: SelfMap, xi: BoundaryPoint, lam: BoundaryPoint, c: float,
                          Ms: Sequence[float], S: Sequence[Point], rtol: float = JULIA_RTOL) -> JuliaReport:
    from .boundary import E
    checked, viol, eq = 0, [], []
    worst = 0.0
    for M in Ms:
        for x in S:
            lx = region_level(xi, x, E)
            if not lx <= M * (1 + 1e-12):
                continue
            y = phi(x)
            lhs = region_level(lam, y, E)
            rhs = c * lx
            checked += 1
            ratio = lhs / rhs if rhs > 0 else math.inf
            worst = max(worst, ratio)
            entry = {"M": M, "x": [[float(complex(v).real), float(complex(v).imag)] for v in x.coords],
                     "lhs": lhs, "rhs": rhs}
            if lhs > rhs * (1 + rtol):
                viol.append(entry)
            elif abs(lhs - rhs) <= rtol * rhs:
                eq.append(entry)
    return JuliaReport(checked, viol, eq, float(worst))


def horocycle_points(xi_anchor: complex, M: float, n: int, shrink: Sequence[float] = (1.0,)) -> list:
    """``n`` points on the disk horocycles ``|1 - z conj(xi)|^2 = s M (1 - |z|^2)``, ``s`` in ``shrink``.

    The horocycle of parameter ``M`` is the circle of center ``xi/(1+M)`` and
    radius ``M/(1+M)``; the tangency point itself is skipped.
    """
    from .core import Domain
    dom = Domain.unit_disk()
    xi_anchor = complex(xi_anchor)
    pts = []
    per = max(1, n // len(shrink))
    for s in shrink:
        m = s * M
        for j in range(per):
            th = 2 * math.pi * (j + 0.5) / per
            w = (1 + m * complex(math.cos(th), math.sin(th))) / (1 + m)
            z = w * xi_anchor
            if dom.contains((z,)):
                pts.append(dom.point(z))
    return pts


CONVERGED = "Converged"
NOT_CONVERGED = "NotConverged"
FIXED_POINT = "FixedPoint"


@dataclass
class Trajectory:
    points: list
    diag: np.ndarray
    e_level: np.ndarray
    probe_residual: np.ndarray
    verdict: str
    converged_at: Optional[int]
    stopped_early: bool = False

    def ratios(self) -> np.ndarray:
        return self.e_level[1:] / self.e_level[:-1]

    def rows(self) -> list:
        return [{"n": i, "re": float(complex(p.coords[0]).real), "im": float(complex(p.coords[0]).imag),
                 "diag": float(self.diag[i]), "E_level": float(self.e_level[i]),
                 "probe_residual": float(self.probe_residual[i])} for i, p in enumerate(self.points)]

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "converged_at": self.converged_at,
                "stopped_early": self.stopped_early, "steps": len(self.points) - 1,
                "trajectory": self.rows()}


def iterate_to_boundary(k: Kernel, phi: SelfMap, x0: Point, xi: BoundaryPoint, c: float, N: int = 40,
                        probes: Optional[Sample] = None, tol: float = 1e-6, stall: int = 10,
                        fixed_tol: float = 1e-12) -> Trajectory:
    """Iterate ``phi`` from ``x0`` and watch ``phi^n(x0)`` approach ``xi``.

    Records the diagonal, the E-level ``k(x,x)/|k_xi(x)|^2`` and the probe
    residual against ``k_xi`` at every step. The verdict is ``Converged`` once
    a probe residual drops below ``tol``; ``FixedPoint`` if an iterate moves by
    at most ``fixed_tol`` without any growth of the diagonal. Iteration stops
    early (flagged) if the next iterate is no longer representable inside the
    domain.
    """
    from .boundary import E
    if not c < 1:
        raise ValueError("iteration towards the boundary needs c < 1")
    probes = default_probes(k.domain) if probes is None else probes
    pts = [x0]
    diag, lev, res = [diagonal(k, x0)], [region_level(xi, x0, E)], [limit_residual(xi, x0, probes)]
    verdict, conv_at, early, flat = NOT_CONVERGED, None, False, 0
    if res[0] < tol:
        verdict, conv_at = CONVERGED, 0
    x = x0
    for n in range(1, N + 1):
        try:
            y = phi(x)
            diag_y = diagonal(k, y)
        except DomainError:
            early = True
            break
        gap = max(abs(complex(a) - complex(b)) for a, b in zip(y.coords, x.coords))
        # near the boundary successive iterates get closer than fixed_tol while
        # the diagonal keeps growing; only a stalled diagonal means a fixed point
        if gap <= fixed_tol and diag_y <= diag[-1] * (1 + 1e-9):
            verdict = FIXED_POINT
            pts.append(y)
            diag.append(diag_y)
            lev.append(region_level(xi, y, E))
            res.append(limit_residual(xi, y, probes))
            break
        x = y
        pts.append(x)
        diag.append(diag_y)
        lev.append(region_level(xi, x, E))
        res.append(limit_residual(xi, x, probes))
        flat = flat + 1 if lev[-1] >= lev[-2] else 0
        if flat >= stall:
            raise StalledError(f"E-level stopped shrinking after step {n}")
        if conv_at is None and res[-1] < tol:
            verdict, conv_at = CONVERGED, n
    return Trajectory(pts, np.array(diag), np.array(lev), np.array(res), verdict, conv_at, early)


# --------------------------------------------------------------------------
# weighted composition

@dataclass
class WeightedCompositionCheck:
    lhs: float
    f_norm: float
    g_norm: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.f_norm * self.g_norm + 1e-6


def weighted_composition_check(k: Kernel, t: Kernel, phi: SelfMap, S: Sample, Sf: Sample, Sg: Sample,
                               rng: np.random.Generator) -> WeightedCompositionCheck:
    """Sampled check of ``||f (g o phi)||_k <= ||f||_q ||g||_t``.

    ``f`` is a random combination of quotient-kernel sections at ``Sf`` and
    ``g`` a random combination of ``t``-sections at ``Sg``, so the right side
    is exact; the left side is the sample-norm lower bound over ``S``.
    """
    q = factor_quotient(k, t, phi)
    a = rng.standard_normal(len(Sf)) + 1j * rng.standard_normal(len(Sf))
    b = rng.standard_normal(len(Sg)) + 1j * rng.standard_normal(len(Sg))
    Q = gram_matrix(q, Sf.points)
    T = gram_matrix(t, Sg.points)
    f_norm = math.sqrt(max(float(np.real(a.conj() @ Q @ a)), 0.0))
    g_norm = math.sqrt(max(float(np.real(b.conj() @ T @ b)), 0.0))

    def h(x):
        fx = sum(ai * eval_kernel(q, x, s) for ai, s in zip(a, Sf))
        y = phi(x)
        gy = sum(bj * eval_kernel(t, y, u) for bj, u in zip(b, Sg))
        return fx * gy

    lhs = math.sqrt(sample_norm_sq(k, h, S).value_sq)
    return WeightedCompositionCheck(lhs, f_norm, g_norm)


def refuted_witness_check(rep: GramReport, q: Kernel) -> bool:
    """Recompute a serialized witness: Gram on its points still has ``min_eig < -tol``."""
    G = gram_matrix(q, rep.points)
    return psd_report(G, rep.tol).min_eig < -rep.tol
