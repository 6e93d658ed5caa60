"""Disk and ball corollaries: weighted difference quotients and weighted
angular derivatives.

For ``0 < alpha <= 1`` the two traces

    dq(z) = (1 - phi(z) conj(lam)) / (1 - z conj(zeta))^alpha
    wd(z) = phi'(z) (1 - z conj(zeta))^(1 - alpha)

either both converge along Stolz sequences, with ``lim wd = alpha conj(zeta)
lam lim dq``, or neither does. Derivatives are central complex differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import Domain, Point, SelfMap, _principal_power, inner
from .errors import NotApproaching, StencilError
from .numerics import last_quarter

DEFAULT_H_REL = 1e-5
CHECK_H_REL = 1e-3
CONVERGE_TOL = 1e-3


def _as_scalar_fn(phi) -> Callable[[complex], complex]:
    if isinstance(phi, SelfMap):
        dom = phi.source
        return lambda z: phi.raw(dom.boundary_point(z))[0]
    return phi


def _as_vector_fn(phi) -> Callable[[tuple], object]:
    if isinstance(phi, SelfMap):
        dom = phi.source
        return lambda z: phi.raw(dom.boundary_point(tuple(z)))
    return phi


def _coords(z) -> tuple:
    if isinstance(z, Point):
        return tuple(complex(c) for c in z.coords)
    if isinstance(z, (tuple, list, np.ndarray)):
        return tuple(complex(c) for c in z)
    return (complex(z),)


def principal_power(v: complex, alpha: float) -> complex:
    """``v ** alpha`` on the principal branch, refusing points near the cut."""
    return _principal_power(complex(v), alpha, "power")


def weighted_difference_quotient(phi, lam: complex, zeta: complex, alpha: float, z) -> complex:
    """``(1 - phi(z) conj(lam)) / (1 - z conj(zeta))^alpha``."""
    f = _as_scalar_fn(phi)
    z = _coords(z)[0]
    lam, zeta = complex(lam), complex(zeta)
    return (1 - complex(f(z)) * lam.conjugate()) / principal_power(1 - z * zeta.conjugate(), alpha)


def _stencil(f, z: complex, h: float, inside: Callable[[complex], bool]) -> complex:
    pts = (z + h, z - h, z + 1j * h, z - 1j * h)
    if not all(inside(p) for p in pts):
        raise StencilError(f"stencil of width {h:g} around {z!r} leaves the domain")
    hr = (z + h) - z
    hi = ((z + 1j * h) - z).imag
    d_re = (f(z + hr) - f(z - hr)) / (2 * hr)
    d_im = (f(z + 1j * hi) - f(z - 1j * hi)) / (2j * hi)
    return complex((d_re + d_im) / 2)


def numeric_derivative(phi, z, h: Optional[float] = None) -> complex:
    """4-point central complex derivative of a disk function.

    Averages the real-direction and imaginary-direction central differences.
    ``h`` defaults to ``1e-5 (1 - |z|)``; the effective steps are the exactly
    representable ``(z + h) - z``.
    """
    f = _as_scalar_fn(phi)
    z = _coords(z)[0]
    if h is None:
        h = DEFAULT_H_REL * (1 - abs(z))
    if not h > 0:
        raise StencilError("step must be positive")
    return _stencil(f, z, h, lambda p: abs(p) < 1)


def numeric_gradient(phi, z, h: Optional[float] = None) -> np.ndarray:
    """Componentwise :func:`numeric_derivative` of a scalar function on the ball."""
    f = _as_vector_fn(phi)
    z = _coords(z)
    nz = math.sqrt(sum(abs(c) ** 2 for c in z))
    if h is None:
        h = DEFAULT_H_REL * (1 - nz)
    out = np.empty(len(z), dtype=complex)
    for j in range(len(z)):
        def fj(w, j=j):
            v = list(z)
            v[j] = w
            r = f(tuple(v))
            return complex(r[0] if isinstance(r, (tuple, list)) else r)

        def inside(w, j=j):
            v = list(z)
            v[j] = w
            return sum(abs(c) ** 2 for c in v) < 1

        out[j] = _stencil(fj, z[j], h, inside)
    return out


def stolz_sequence(zeta: complex, theta: float, N: int) -> list:
    """``z_n = (1 - 2^-n (1 + i tan(theta))) zeta`` for ``n = 1..N``; ``theta = 0`` is radial."""
    zeta = complex(zeta)
    t = math.tan(theta)
    out = []
    for n in range(1, N + 1):
        w = 1 - 2.0 ** -n * (1 + 1j * t)
        if abs(w) >= 1:
            raise NotApproaching(f"aperture {theta} leaves the disk at n = {n}")
        out.append(w * zeta)
    return out


def stolz_level(zeta: complex, z: complex) -> float:
    """Smallest ``M`` with ``|zeta - z| <= M (1 - |z|)``."""
    return abs(complex(zeta) - z) / (1 - abs(z))


@dataclass
class WeightedDerivativeReport:
    alpha: float
    zeta: complex
    lam: complex
    c: complex
    dq_trace: np.ndarray = field(repr=False)
    wd_trace: np.ndarray = field(repr=False)
    target: complex
    dq_oscillation: float
    wd_oscillation: float
    dq_residual: float
    wd_residual: float
    tol: float = CONVERGE_TOL

    @property
    def dq_converges(self) -> bool:
        return self.dq_oscillation < self.tol

    @property
    def wd_converges(self) -> bool:
        return self.wd_oscillation < self.tol

    @property
    def relation_residual(self) -> float:
        """``|lim wd - alpha conj(zeta) lam lim dq|`` using the last entries."""
        return abs(self.wd_trace[-1] - self.alpha * self.zeta.conjugate() * self.lam * self.dq_trace[-1])

    @property
    def equivalent(self) -> bool:
        return self.dq_converges == self.wd_converges

    @property
    def passed(self) -> bool:
        if self.dq_converges and self.wd_converges:
            return self.dq_residual < self.tol and self.wd_residual < self.tol
        return not self.dq_converges and not self.wd_converges

    def to_dict(self) -> dict:
        def c2(v):
            return [float(complex(v).real), float(complex(v).imag)]
        return {"alpha": self.alpha, "zeta": c2(self.zeta), "lambda": c2(self.lam), "c": c2(self.c),
                "target": c2(self.target), "dq_converges": self.dq_converges,
                "wd_converges": self.wd_converges, "dq_residual": self.dq_residual,
                "wd_residual": self.wd_residual, "relation_residual": self.relation_residual,
                "passed": self.passed,
                "dq_trace": [c2(v) for v in self.dq_trace], "wd_trace": [c2(v) for v in self.wd_trace]}


def _oscillation(trace: np.ndarray) -> float:
    tail = trace[last_quarter(len(trace)):]
    return float(np.max(np.abs(tail - trace[-1])))


def weighted_derivative_check(phi, zeta: complex, lam: complex, alpha: float, seq: Sequence,
                              c: Optional[complex] = None, h_rel: float = CHECK_H_REL,
                              tol: float = CONVERGE_TOL) -> WeightedDerivativeReport:
    """Both traces along ``seq`` with their residuals.

    ``c`` defaults to the last difference-quotient value. A trace converges
    when its last-quarter oscillation is below ``tol``. The derivative uses
    the step ``h_rel (1 - |z|)``, coarser than the :func:`numeric_derivative`
    default so that it survives points within ``1e-9`` of the circle.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    f = _as_scalar_fn(phi)
    zeta, lam = complex(zeta), complex(lam)
    zs = [_coords(z)[0] for z in seq]
    dq = np.array([weighted_difference_quotient(f, lam, zeta, alpha, z) for z in zs])
    wd = np.array([numeric_derivative(f, z, h_rel * (1 - abs(z))) *
                   principal_power(1 - z * zeta.conjugate(), 1 - alpha) for z in zs])
    c = dq[-1] if c is None else complex(c)
    target = c * lam * zeta.conjugate() * alpha
    return WeightedDerivativeReport(alpha, zeta, lam, c, dq, wd, target, _oscillation(dq), _oscillation(wd),
                                    float(abs(dq[-1] - c)), float(abs(wd[-1] - target)), tol)


# --------------------------------------------------------------------------
# the ball

def ball_quotient(phi, lam, zeta, alpha: float, z) -> complex:
    """``(1 - <phi(z), lam>) / (1 - <z, zeta>)^alpha``.

    ``phi`` may be scalar valued (``lam`` unimodular) or row valued (``lam`` a
    unit vector of the same length); the inner product is conjugate linear in
    its second slot.
    """
    f = _as_vector_fn(phi)
    z = _coords(z)
    zeta = _coords(zeta)
    val = f(z)
    val = tuple(val) if isinstance(val, (tuple, list, np.ndarray)) else (complex(val),)
    lam = _coords(lam)
    if len(val) != len(lam):
        raise ValueError("phi(z) and lambda have different lengths")
    return (1 - inner(val, lam)) / principal_power(1 - inner(z, zeta), alpha)


RESTRICTED_RADIAL = "restricted-radial"
KORANYI = "koranyi"
TANGENTIAL_IN_SPHERE = "tangential-in-sphere"


def koranyi_level(zeta, z) -> float:
    """Smallest ``M`` with ``|1 - <z, zeta>| <= M (1 - |z|^2)``."""
    z, zeta = _coords(z), _coords(zeta)
    return abs(1 - inner(z, zeta)) / (1 - sum(abs(c) ** 2 for c in z))


def _orthogonal_unit(zeta: tuple) -> tuple:
    d = len(zeta)
    for j in range(d):
        e = np.zeros(d, dtype=complex)
        e[j] = 1
        v = e - inner(tuple(e), zeta) * np.array(zeta)
        n = np.linalg.norm(v)
        if n > 1e-6:
            return tuple(v / n)
    raise ValueError("no orthogonal direction in dimension 1")


def koranyi_sequence(zeta, kind: str, N: int, M: float = 2.0) -> list:
    """Points of the ball approaching the unit vector ``zeta``.

    ``restricted-radial``: ``(1 - 2^-n) zeta``. ``koranyi``: points with
    ``|1 - <z, zeta>| <= M (1 - |z|^2)``; in dimension at least 2 they drift
    in a complex-tangential direction by ``~ sqrt(delta)``, in dimension 1 they
    come in along a Stolz ray. ``tangential-in-sphere``: complex-tangential
    drift so strong that every Koranyi region is eventually left (``d >= 2``).
    All points are checked to lie in the ball; Koranyi points are checked
    against the region inequality.
    """
    zeta = _coords(zeta)
    d = len(zeta)
    if abs(math.sqrt(sum(abs(c) ** 2 for c in zeta)) - 1) > 1e-12:
        raise ValueError("zeta must be a unit vector")
    ball = Domain.unit_ball(d)
    zv = np.array(zeta)
    pts = []
    for n in range(1, N + 1):
        if kind == RESTRICTED_RADIAL:
            z = (1 - 2.0 ** -n) * zv
        elif kind == KORANYI:
            delta = 2.0 ** (-n - 1)
            if d >= 2:
                s2 = 0.5 * (2 * delta - delta ** 2 - delta / M)
                s = math.sqrt(max(s2, 0.0))
                z = (1 - delta) * zv + s * np.array(_orthogonal_unit(zeta))
            else:
                t = math.sqrt(max((0.9 * M) ** 2 - 1, 0.0))
                z = (1 - delta * (1 + 1j * t)) * zv
        elif kind == TANGENTIAL_IN_SPHERE:
            if d < 2:
                raise ValueError("tangential-in-sphere needs d >= 2")
            delta = 2.0 ** (-n - 1)
            s = math.sqrt(2 * delta - delta ** 2 - delta ** 1.5)
            z = (1 - delta) * zv + s * np.array(_orthogonal_unit(zeta))
        else:
            raise ValueError(f"unknown sequence kind {kind!r}")
        p = ball.point(tuple(z))
        if kind == KORANYI and koranyi_level(zeta, p) > M * (1 + 1e-12):
            raise NotApproaching(f"Koranyi point {n} violates the region inequality for M = {M}")
        pts.append(p)
    return pts
