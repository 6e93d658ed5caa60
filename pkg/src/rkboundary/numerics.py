"""Finite-sample Gram analysis.

Everything here is a statement about a *finite* sample: PSD verdicts,
sample norms and operator-norm estimates are lower-bound surrogates of the
corresponding Hilbert-space quantities, never proofs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import Kernel, Point, SelfMap, compose_kernel, eval_kernel
from .errors import IllConditioned
from .sampling import Sample, default_probes

PSD = "PSD"
NOT_PSD = "NotPSD"
BORDERLINE = "Borderline"

PINV_RTOL = 1e-10
ROUNDOFF = 8 * np.finfo(float).eps


def gram_matrix(k: Kernel, points) -> np.ndarray:
    """``G[i, j] = k(x_i, x_j)``."""
    pts = list(points)
    n = len(pts)
    G = np.empty((n, n), dtype=complex)
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            G[i, j] = eval_kernel(k, x, y)
    return G


def hermitian_part(G: np.ndarray) -> np.ndarray:
    return (G + G.conj().T) / 2


def default_tol(G: np.ndarray) -> float:
    n = G.shape[0]
    return 1e-9 * n * float(np.max(np.abs(np.diag(G)))) if n else 0.0


@dataclass
class GramReport:
    """Gram matrix of a sample together with its positivity verdict.

    ``verdict`` is ``NotPSD`` when the smallest eigenvalue is below ``-tol``,
    ``Borderline`` when it is negative but between ``-tol`` and the eigensolver
    roundoff floor, and ``PSD`` otherwise. ``witness`` is the unit eigenvector
    of the smallest eigenvalue, so ``witness^* G witness == min_eig``.
    """

    matrix: np.ndarray
    min_eig: float
    tol: float
    verdict: str
    witness: Optional[np.ndarray] = None
    label: str = ""
    points: tuple = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def ok(self) -> bool:
        return self.verdict != NOT_PSD

    def to_dict(self, with_points: bool = False) -> dict:
        out = {"label": self.label, "n": self.n, "min_eig": float(self.min_eig),
               "tol": float(self.tol), "verdict": self.verdict}
        if self.witness is not None and self.verdict != PSD:
            out["witness"] = [[float(v.real), float(v.imag)] for v in self.witness]
        if with_points:
            out["points"] = [[[float(complex(c).real), float(complex(c).imag)] for c in p.coords]
                             for p in self.points]
        return out


def psd_report(G: np.ndarray, tol: Optional[float] = None, label: str = "", points=()) -> GramReport:
    """Verdict for an already assembled Gram matrix."""
    H = hermitian_part(G)
    tol = default_tol(H) if tol is None else tol
    if H.shape[0] == 0:
        return GramReport(G, 0.0, tol, PSD, None, label, tuple(points))
    w, V = np.linalg.eigh(H)
    min_eig = float(w[0])
    floor = ROUNDOFF * H.shape[0] * float(np.max(np.abs(w)))
    if min_eig < -tol:
        verdict = NOT_PSD
    elif min_eig < -floor:
        verdict = BORDERLINE
    else:
        verdict = PSD
    return GramReport(G, min_eig, tol, verdict, V[:, 0], label, tuple(points))


def gram(k: Kernel, S: Sample, tol: Optional[float] = None) -> GramReport:
    """Assemble the Gram matrix of ``k`` on ``S`` and certify positivity."""
    G = gram_matrix(k, S.points)
    return psd_report(G, tol, k.label, S.points)


def _eig_kept(G: np.ndarray):
    H = hermitian_part(G)
    w, V = np.linalg.eigh(H)
    n = len(w)
    top = float(w[-1]) if n else 0.0
    if top <= 0:
        return w[:0], V[:, :0], n
    keep = w > PINV_RTOL * top
    dropped = int(n - keep.sum())
    if dropped > n / 2:
        raise IllConditioned(f"{dropped} of {n} Gram eigenvalues fall below the cutoff")
    return w[keep], V[:, keep], dropped


@dataclass
class SampleNorm:
    """Sample lower bound of ``||f||^2`` in ``H(k)``."""

    value_sq: float
    sample_size: int
    conditioning: float
    dropped: int = 0


def sample_norm_sq(k: Kernel, f: Callable[[Point], complex], S: Sample) -> SampleNorm:
    """Smallest ``c^2`` with ``c^2 G - f f^*`` PSD on ``S``, i.e. ``f^* G^+ f``.

    ``G^+`` is the eigen-thresholded pseudoinverse; eigenvalues below
    ``1e-10 * max_eig`` are dropped. The result is a lower bound for the norm
    of ``f`` and is exact when ``f`` lies in the span of the sample's kernel
    functions.
    """
    G = gram_matrix(k, S.points)
    fv = np.array([complex(f(x)) for x in S.points])
    w, V, dropped = _eig_kept(G)
    if w.size == 0:
        return SampleNorm(0.0 if not np.any(fv) else float("inf"), len(S), 0.0, dropped)
    c = V.conj().T @ fv
    value = float(np.sum(np.abs(c) ** 2 / w))
    return SampleNorm(value, len(S), float(w[0]), dropped)


def _top_generalized(A: np.ndarray, B: np.ndarray) -> float:
    """Largest ``mu`` with ``mu B - A`` PSD, restricted to B's numerical range."""
    w, V, _ = _eig_kept(B)
    if w.size == 0:
        return 0.0
    R = V / np.sqrt(w)
    M = hermitian_part(R.conj().T @ A @ R)
    return max(float(np.linalg.eigvalsh(M)[-1]), 0.0)


def multiplier_norm_est(k: Kernel, phi: Callable[[Point], complex], S: Sample) -> float:
    """Sample lower bound for the multiplier norm of ``phi`` on ``H(k)``."""
    G = gram_matrix(k, S.points)
    d = np.array([complex(phi(x)) for x in S.points])
    A = (d[:, None] * G) * d.conj()[None, :]
    return float(np.sqrt(_top_generalized(A, G)))


def comp_symbol_norm_est(k: Kernel, phi: SelfMap, S: Sample) -> float:
    """Sample lower bound for ``||C_phi||`` on ``H(k)``."""
    G = gram_matrix(k, S.points)
    A = gram_matrix(compose_kernel(k, phi), S.points)
    return float(np.sqrt(_top_generalized(A, G)))


@dataclass
class WeakLimitReport:
    """Tabulated kernel functions ``k_{x_n}`` at probe points.

    ``values[n, p] = k(p, x_n)``; ``residuals[p]`` is the largest deviation of
    the last quarter of column ``p`` from its final value.
    """

    values: np.ndarray
    residuals: np.ndarray
    diagonal: np.ndarray
    probes: Sample
    converged: bool
    kernel: Kernel = field(repr=False)
    last: Point = field(repr=False)

    @property
    def limit_values(self) -> np.ndarray:
        return self.values[-1]

    @property
    def residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    def limit(self, y: Point) -> complex:
        """Surrogate of the pointwise limit: the kernel function of the last term."""
        return complex(self.kernel.evaluator(y, self.last))


CONVERGENCE_TOL = 1e-6


def last_quarter(n: int) -> int:
    """Start index of the last quarter of a length-``n`` trace (at least two entries)."""
    return max(0, min(n - 2, n - max(2, n // 4)))


def weak_limit_probe(k: Kernel, seq, probes: Optional[Sample] = None,
                     tol: float = CONVERGENCE_TOL) -> WeakLimitReport:
    """Check numerically whether ``k_{x_n}`` converges pointwise on the probes."""
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    probes = default_probes(k.domain) if probes is None else probes
    T = np.array([[eval_kernel(k, p, x) for p in probes] for x in seq])
    diag = np.array([eval_kernel(k, x, x).real for x in seq])
    start = last_quarter(len(seq))
    res = np.max(np.abs(T[start:] - T[-1]), axis=0)
    return WeakLimitReport(T, res, diag, probes, bool(np.max(res) < tol), k, seq[-1])


def pivoted_subset(G: np.ndarray, rtol: float = 1e-8) -> list:
    """Indices picked by diagonally pivoted Cholesky until the residual diagonal
    falls below ``rtol * max(diag(G))``.

    The selected principal submatrix is numerically nonsingular, so sample
    norms over it are stable even when ``G`` itself has low numerical rank.
    """
    H = hermitian_part(G)
    n = H.shape[0]
    d = np.real(np.diag(H)).astype(float).copy()
    if n == 0 or d.max() <= 0:
        return []
    floor = rtol * d.max()
    L = np.zeros((n, n), dtype=complex)
    picked = []
    for m in range(n):
        i = int(np.argmax(d))
        if d[i] <= floor:
            break
        picked.append(i)
        col = (H[:, i] - L[:, :m] @ L[i, :m].conj()) / np.sqrt(d[i])
        L[:, m] = col
        d = d - np.abs(col) ** 2
        d[picked] = -np.inf
    return sorted(picked)


def pivoted_sample_norm_sq(k: Kernel, f: Callable[[Point], complex], S: Sample,
                           rtol: float = 1e-8) -> SampleNorm:
    """:func:`sample_norm_sq` over the pivoted well-conditioned subset of ``S``.

    Still a lower bound for ``||f||^2``; used where low-rank kernels (constant
    or rank-one quotients) would make the plain version raise.
    """
    idx = pivoted_subset(gram_matrix(k, S.points), rtol)
    sub = Sample(tuple(S.points[i] for i in idx), S.domain, S.seed)
    return sample_norm_sq(k, f, sub)
