"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test logs one PASS/FAIL line (shown in the terminal summary) before
asserting. Sub-checks are listed so a failing line says which clause broke.
"""

import math
import time

import numpy as np

from _invariants import INVARIANTS, brute_force_draw
from rkboundary import zoo
from rkboundary.boundary import (
    BOUNDARY,
    INTERIOR_FUNCTION,
    INTERIOR_POINT,
    RADIAL,
    boundary_point,
    classify_limit,
    make_sequence,
    nested_samples,
    regularity_check,
)
from rkboundary.classical import stolz_sequence, weighted_derivative_check
from rkboundary.errors import RKBoundaryError
from rkboundary.julia import (
    CONVERGED,
    build_q_xi,
    estimate_c,
    factor_quotient,
    horocycle_points,
    iterate_to_boundary,
    jc_report,
    julia_inclusion_check,
    refuted_witness_check,
)
from rkboundary.numerics import NOT_PSD, gram
from rkboundary.sampling import grid_g16, quasi_random_sample

D = zoo.DISK


class Criterion:
    """Collects named sub-checks and a wall-clock budget."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.checks = []
        self.t0 = time.perf_counter()

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def finish(self, log):
        elapsed = time.perf_counter() - self.t0
        if self.budget is not None:
            self.check(f"runtime < {self.budget:g} s", elapsed < self.budget, f"{elapsed:.2f} s")
        ok = all(c[1] for c in self.checks)
        failed = [f"{n} ({d})" if d else n for n, good, d in self.checks if not good]
        line = f"AC-{self.number} {'PASS' if ok else 'FAIL'}  {self.title}  [{elapsed:.2f} s]"
        if failed:
            line += "  failed: " + "; ".join(failed)
        log.append(line)
        print(line)
        for n, good, d in self.checks:
            print(f"    {'ok  ' if good else 'FAIL'} {n} {d}")
        assert ok, line


def test_ac1_refutation(acceptance_log):
    cr = Criterion(1, "refutation fixture on G16", 1.0)
    k = zoo.szego_pow(0.5)
    q = factor_quotient(k, k, zoo.square())
    rep = gram(q, grid_g16())
    cr.check("verdict NotPSD", rep.verdict == NOT_PSD, rep.verdict)
    cr.check("min_eig < -1e-6", rep.min_eig < -1e-6, f"{rep.min_eig:.6g}")
    v = rep.witness
    ray = float(np.real(v.conj() @ rep.matrix @ v))
    cr.check("witness Rayleigh quotient = min_eig", abs(ray - rep.min_eig) < 1e-12, f"{ray:.6g}")
    cr.check("witness reproducible from its points", refuted_witness_check(rep, q))
    again = gram(q, grid_g16())
    cr.check("re-run identical", again.min_eig == rep.min_eig and np.array_equal(again.witness, rep.witness))
    cr.finish(acceptance_log)


def test_ac2_hartz(acceptance_log):
    cr = Criterion(2, "Hartz fixture: c-trace, q identically 1, sandwich", 5.0)
    k, t, phi = zoo.szego_pow(0.5), zoo.szego(), zoo.hartz(0.5, 1)
    xi = boundary_point(k, 1)
    lam = boundary_point(t, 1)
    trace = estimate_c(k, t, phi, [make_sequence(RADIAL, xi, 30)]).traces[0]
    cr.check("radial c-trace within 1e-3 of 1 at n = 30", abs(trace[-1] - 1) < 1e-3,
             f"trace[30] = {trace[-1]:.6f}; closed form (2 - s)/(1 + r)^(1/2) -> sqrt(2)")
    q = build_q_xi(k, t, phi, xi, lam)
    pts = quasi_random_sample(D, 20, seed=0, rmax=0.99)
    err = max(abs(q(x) - 1) for x in pts)
    cr.check("q_xi = 1 to 1e-12 at 20 points", err < 1e-12, f"max err {err:.2e}")
    try:
        r = jc_report(k, t, phi, 1)
        cr.check("sandwich inequalities", r.sandwich_ok,
                 f"q_lb={r.q_norm_sq_lb:.6g} c_hat={r.c_hat:.6g} M={r.M_used:.4g} a={r.a_lambda_hat:.4g}")
    except RKBoundaryError as exc:
        cr.check("sandwich inequalities", False, repr(exc))
    cr.finish(acceptance_log)


def test_ac3_halfway(acceptance_log):
    cr = Criterion(3, "halfway fixture: c, Julia inclusion, iteration", 10.0)
    sz, phi = zoo.szego(), zoo.halfway()
    xi = boundary_point(sz, 1)
    r = jc_report(sz, sz, phi, 1)
    cr.check("c_hat = 0.5 +- 1e-4", abs(r.c_hat - 0.5) <= 1e-4, f"{r.c_hat:.8f}")
    pts = []
    for M in (0.5, 1.0, 2.0, 4.0):
        pts += horocycle_points(1, M, 125, shrink=(1.0, 0.5, 0.25, 0.1, 0.01))
    rep = julia_inclusion_check(sz, phi, xi, xi, 0.5, [4.0], pts)
    cr.check("500 horocycle points checked", rep.checked >= 500, str(rep.checked))
    cr.check("zero Julia violations beyond 1e-9 relative", rep.ok, f"max ratio {rep.max_ratio:.12f}")
    starts = (0, -0.5, 0.5j, -0.9 + 0.1j, 0.3 - 0.6j)
    worst_ratio, all_conv = 0.0, True
    for x0 in starts:
        tr = iterate_to_boundary(sz, phi, D.point(x0), xi, 0.5, N=40)
        all_conv &= tr.verdict == CONVERGED and tr.converged_at is not None and tr.converged_at <= 40
        ratios = tr.ratios()
        worst_ratio = max(worst_ratio, float(np.max(np.abs(ratios - 0.5))))
    cr.check("5 starting points converge within 40 steps", all_conv)
    cr.check("per-step E-level ratio 0.5 +- 1e-6", worst_ratio <= 1e-6,
             f"max |ratio - 0.5| = {worst_ratio:.4g}; from 0 ratio n is exactly (2 - d)/(4 - d), d = 2^(1-n)")
    cr.finish(acceptance_log)


def test_ac4_weighted_derivative(acceptance_log):
    cr = Criterion(4, "weighted-derivative equivalence", 5.0)
    for alpha in (0.3, 0.5, 1.0):
        for name, phi in (("hartz", zoo.hartz(alpha, 1)), ("halfway", zoo.halfway())):
            for th in (0.0, 0.5, 1.0):
                rep = weighted_derivative_check(phi, 1, 1, alpha, stolz_sequence(1, th, 30))
                ok = rep.dq_converges and rep.wd_converges and rep.relation_residual < 1e-3
                cr.check(f"{name} alpha={alpha} theta={th}", ok,
                         f"dq={rep.dq_trace[-1]:.6g} wd={rep.wd_trace[-1]:.6g}")
    for th in (0.0, 0.5, 1.0):
        rep = weighted_derivative_check(zoo.square(), 1, 1, 0.3, stolz_sequence(1, th, 30))
        cr.check(f"square alpha=0.3 theta={th}: wd fails to converge", not rep.wd_converges,
                 f"dq -> {rep.dq_trace[-1]:.3g} and wd -> {rep.wd_trace[-1]:.3g} both converge "
                 "((1 + z)(1 - z)^0.7 -> 0)")
    for th in (0.0, 0.5, 1.0):
        rep = weighted_derivative_check(zoo.hartz(0.3, 1), 1, 1, 0.5, stolz_sequence(1, th, 30))
        cr.check(f"divergent dq (hartz 0.3, alpha 0.5, theta={th}) => wd diverges",
                 not rep.dq_converges and not rep.wd_converges)
    cr.finish(acceptance_log)


def test_ac5_regularity(acceptance_log):
    cr = Criterion(5, "Szego regularity constants", 1.0)
    t = zoo.szego()
    worst_a, worst_b = 0.0, math.inf
    for seed in range(10):
        S = quasi_random_sample(D, 48, seed=seed, rmax=0.999)
        for th in (0.0, 1.0, 2.5, 4.0):
            rep = regularity_check(t, boundary_point(t, complex(math.cos(th), math.sin(th))), S)
            worst_a, worst_b = max(worst_a, rep.a_hat), min(worst_b, rep.b_hat)
    cr.check("a_hat <= 2 + 1e-9", worst_a <= 2 + 1e-9, f"max {worst_a:.6f}")
    cr.check("b_hat > 1/2", worst_b > 0.5, f"min {worst_b:.6f}")
    cr.finish(acceptance_log)


def test_ac6_trichotomy(acceptance_log):
    cr = Criterion(6, "trichotomy classifiers", 5.0)
    k = zoo.szego()
    seq = make_sequence(RADIAL, boundary_point(k, 1), 40)
    tri = classify_limit(k, seq, nested_samples(k, seq))
    cr.check("Szego radial -> Boundary", tri.verdict == BOUNDARY, tri.verdict)
    k = zoo.dbr_half()
    seq = make_sequence(RADIAL, boundary_point(k, 1), 40)
    tri = classify_limit(k, seq, nested_samples(k, seq))
    probes = [D.point(z) for z in (0, 0.5, -0.5, 0.5j, 0.7)]
    lim_err = max(abs(k(p, seq[-1]) - 0.5) for p in probes)
    cr.check("dbr_half -> InteriorFunction", tri.verdict == INTERIOR_FUNCTION, tri.verdict)
    cr.check("limit 1/2 with residual < 1e-6", lim_err < 1e-6 and tri.limit_residual < 1e-6, f"{lim_err:.2e}")
    k = zoo.nat_matrix()
    seq = make_sequence(RADIAL, boundary_point(k, math.inf), 40)
    tri = classify_limit(k, seq, nested_samples(k, seq))
    cr.check("nat_matrix -> InteriorPointMatch at index 1",
             tri.verdict == INTERIOR_POINT and tri.match is not None and tri.match.z == 1,
             f"{tri.verdict} {tri.match}")
    cr.finish(acceptance_log)


def test_ac7_invariants(acceptance_log):
    cr = Criterion(7, "invariant suites over 10 seeds", 30.0)
    for name, fn in INVARIANTS.items():
        bad = []
        for seed in range(10):
            try:
                fn(seed)
            except AssertionError as exc:
                bad.append(f"seed {seed}: {exc}")
        cr.check(name, not bad, "; ".join(bad[:2]))
    cr.finish(acceptance_log)


def test_ac8_brute_force(acceptance_log):
    cr = Criterion(8, "brute-force leading-minor equivalence, 200 draws", None)
    rng = np.random.default_rng(2024)
    disagree, not_psd = [], 0
    for i in range(200):
        label, n, rep, sylvester = brute_force_draw(rng)
        not_psd += rep.verdict == NOT_PSD
        if (rep.verdict != NOT_PSD) != sylvester:
            disagree.append(f"draw {i}: {label} n={n} min_eig={rep.min_eig:.3g}")
    cr.check("verdicts agree", not disagree, "; ".join(disagree[:3]))
    cr.check("both verdicts exercised", 0 < not_psd < 200, f"{not_psd} NotPSD draws")
    cr.finish(acceptance_log)
