"""Domains, points, kernels, self-maps and the kernel combinators.

Kernels are immutable value objects holding a two-argument evaluator. The
combinators (:func:`product_kernel`, :func:`power_kernel`, ...) build new
kernels from old ones; none of them mutates its inputs.

Evaluators receive :class:`Point` objects and return a complex number. The
public entry point :func:`eval_kernel` checks domain membership and cleans up
the diagonal; combinators call the raw ``evaluator`` of their children so the
membership test happens once per evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import (
    BranchError,
    DegenerateError,
    DivisionError,
    DomainError,
    HermitianError,
    KernelOverflowError,
)

DISK = "disk"
BALL = "ball"
POLYDISK = "polydisk"
HALFPLANE = "halfplane"
RAY = "ray"
NATURALS = "naturals"

_KINDS = (DISK, BALL, POLYDISK, HALFPLANE, RAY, NATURALS)

DIAG_IMAG_TOL = 1e-12
BRANCH_MARGIN = 1e-9
DIVISION_FLOOR = 1e-14
EXP_MAX = 700.0


@dataclass(frozen=True)
class Domain:
    """A set ``X`` on which kernels live.

    Use the constructors :meth:`unit_disk`, :meth:`unit_ball`,
    :meth:`polydisk`, :meth:`half_plane`, :meth:`ray` and :meth:`naturals`.
    """

    kind: str
    dim: int = 1
    cut: float = 0.5
    tolerance: float = 1e-12

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.kind in (DISK, HALFPLANE, RAY, NATURALS) and self.dim != 1:
            raise ValueError(f"{self.kind} is one-dimensional")

    @classmethod
    def unit_disk(cls) -> "Domain":
        return cls(DISK)

    @classmethod
    def unit_ball(cls, d: int) -> "Domain":
        return cls(BALL, dim=d)

    @classmethod
    def polydisk(cls, d: int) -> "Domain":
        return cls(POLYDISK, dim=d)

    @classmethod
    def half_plane(cls, cut: float = 0.5) -> "Domain":
        return cls(HALFPLANE, cut=cut)

    @classmethod
    def ray(cls) -> "Domain":
        return cls(RAY)

    @classmethod
    def naturals(cls) -> "Domain":
        return cls(NATURALS)

    @property
    def is_complex(self) -> bool:
        return self.kind in (DISK, BALL, POLYDISK, HALFPLANE)

    @property
    def label(self) -> str:
        if self.kind in (BALL, POLYDISK):
            return f"{self.kind}({self.dim})"
        if self.kind == HALFPLANE:
            return f"halfplane(Re>{self.cut:g})"
        return self.kind

    def contains(self, coords: Sequence) -> bool:
        """Strict membership test for a coordinate tuple."""
        if len(coords) != self.dim:
            return False
        tol = self.tolerance
        if self.kind == DISK:
            return abs(coords[0]) < 1.0
        if self.kind == BALL:
            return sum(abs(c) ** 2 for c in coords) < 1.0
        if self.kind == POLYDISK:
            return all(abs(c) < 1.0 for c in coords)
        if self.kind == HALFPLANE:
            return complex(coords[0]).real > self.cut
        x = complex(coords[0])
        if abs(x.imag) > tol or not math.isfinite(x.real):
            return False
        if self.kind == RAY:
            return x.real >= 0.0
        return x.real >= 1.0 and abs(x.real - round(x.real)) <= tol

    def _normalize(self, coords) -> tuple:
        if not isinstance(coords, (tuple, list)):
            coords = (coords,)
        if self.kind == RAY:
            return tuple(complex(c).real if isinstance(c, complex) else float(c) for c in coords)
        if self.kind == NATURALS:
            out = []
            for c in coords:
                v = complex(c).real
                out.append(v if math.isinf(v) else int(round(v)))
            return tuple(out)
        return tuple(complex(c) for c in coords)

    def point(self, *coords) -> "Point":
        """Build a point of this domain, raising :class:`DomainError` if outside."""
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.dim:
            raise DomainError(f"{self.label} needs {self.dim} coordinates, got {len(coords)}")
        if not self.contains(coords):
            raise DomainError(f"{coords!r} is not in {self.label}")
        return Point(self._normalize(coords), self)

    def boundary_point(self, *coords) -> "Point":
        """Build a point of the closure (used for boundary anchors); no strict test."""
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.dim:
            raise DomainError(f"{self.label} needs {self.dim} coordinates, got {len(coords)}")
        return Point(self._normalize(coords), self)


@dataclass(frozen=True)
class Point:
    """A coordinate tuple tagged with its domain."""

    coords: tuple
    domain: Domain = field(compare=False)

    def __post_init__(self):
        if len(self.coords) != self.domain.dim:
            raise DomainError("coordinate count does not match the domain dimension")

    @property
    def z(self):
        """The single coordinate of a one-dimensional point."""
        return self.coords[0]

    def __repr__(self):
        c = self.coords[0] if len(self.coords) == 1 else self.coords
        return f"Point({c!r}, {self.domain.label})"


def inner(z: Sequence, w: Sequence) -> complex:
    """Hermitian inner product ``sum z_j conj(w_j)``."""
    return sum(complex(a) * complex(b).conjugate() for a, b in zip(z, w))


Evaluator = Callable[[Point, Point], complex]


@dataclass(frozen=True)
class Kernel:
    """A two-argument complex function on a domain.

    Positivity is never assumed by construction; it is what
    :func:`rkboundary.numerics.gram` checks on samples.
    """

    evaluator: Evaluator
    domain: Domain
    label: str
    normalization_point: Optional[Point] = None

    def __call__(self, x: Point, y: Point) -> complex:
        return eval_kernel(self, x, y)

    def section(self, y: Point) -> Callable[[Point], complex]:
        """The kernel function ``k_y = k(., y)``."""
        return lambda x: eval_kernel(self, x, y)


@dataclass(frozen=True)
class SelfMap:
    """A map ``phi: source -> target`` acting on coordinate tuples.

    ``fn`` receives the coordinate tuple of a point and returns either a
    tuple or, for one-dimensional targets, a scalar.
    """

    fn: Callable
    source: Domain
    target: Domain
    label: str

    def raw(self, x: Point) -> tuple:
        out = self.fn(x.coords)
        if not isinstance(out, (tuple, list)):
            out = (out,)
        return tuple(out)

    def __call__(self, x: Point) -> Point:
        out = self.raw(x)
        if not self.target.contains(out):
            raise DomainError(f"{self.label} maps {x!r} outside {self.target.label}: {out!r}")
        return Point(self.target._normalize(out), self.target)

    def boundary_image(self, x: Point) -> Point:
        """Image of a closure point, without the strict membership test."""
        return self.target.boundary_point(self.raw(x))


def compose_maps(psi: SelfMap, phi: SelfMap) -> SelfMap:
    """Return ``psi o phi``."""
    if phi.target != psi.source:
        raise DomainError(f"cannot compose {psi.label} after {phi.label}")

    def fn(c):
        mid = phi(Point(phi.source._normalize(c), phi.source))
        return psi.raw(mid)

    return SelfMap(fn, phi.source, psi.target, f"{psi.label}∘{phi.label}")


def _check_member(domain: Domain, x: Point):
    if not domain.contains(x.coords):
        raise DomainError(f"{x!r} is not in {domain.label}")


def eval_kernel(k: Kernel, x: Point, y: Point) -> complex:
    """Evaluate ``k(x, y)`` with membership checks and diagonal cleanup."""
    _check_member(k.domain, x)
    _check_member(k.domain, y)
    v = complex(k.evaluator(x, y))
    if x.coords == y.coords:
        if abs(v.imag) > DIAG_IMAG_TOL * max(1.0, abs(v.real)):
            raise HermitianError(f"{k.label}: k(x,x) has imaginary part {v.imag!r}")
        v = complex(v.real, 0.0)
    return v


def _same_domain(k: Kernel, t: Kernel):
    if k.domain != t.domain:
        raise DomainError(f"{k.label} lives on {k.domain.label}, {t.label} on {t.domain.label}")


def ones_kernel(domain: Domain) -> Kernel:
    return Kernel(lambda x, y: 1.0 + 0j, domain, "ones")


def zero_kernel(domain: Domain) -> Kernel:
    return Kernel(lambda x, y: 0j, domain, "zero")


def product_kernel(k: Kernel, t: Kernel) -> Kernel:
    """Pointwise (Schur) product."""
    _same_domain(k, t)
    kev, tev = k.evaluator, t.evaluator
    norm = k.normalization_point if k.normalization_point == t.normalization_point else None
    return Kernel(lambda x, y: kev(x, y) * tev(x, y), k.domain, f"({k.label})*({t.label})", norm)


def _principal_power(v: complex, alpha: float, label: str) -> complex:
    if v == 0:
        raise BranchError(f"{label}: cannot raise 0 to a real power")
    if abs(cmath.phase(v)) >= math.pi - BRANCH_MARGIN:
        raise BranchError(f"{label}: value {v!r} sits on the principal branch cut")
    return cmath.exp(alpha * cmath.log(v))


def power_kernel(k: Kernel, alpha: float) -> Kernel:
    """``k(x, y) ** alpha`` on the principal branch."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    kev = k.evaluator
    label = f"({k.label})^{alpha:g}"
    if alpha == 1:
        return Kernel(kev, k.domain, label, k.normalization_point)
    return Kernel(lambda x, y: _principal_power(kev(x, y), alpha, label), k.domain, label,
                  k.normalization_point)


def compose_kernel(k: Kernel, phi: SelfMap) -> Kernel:
    """``(x, y) -> k(phi(x), phi(y))`` on ``phi.source``."""
    if phi.target != k.domain:
        raise DomainError(f"{phi.label} targets {phi.target.label}, kernel lives on {k.domain.label}")
    kev = k.evaluator
    return Kernel(lambda x, y: kev(phi(x), phi(y)), phi.source, f"({k.label})∘{phi.label}")


def quotient_kernel(k: Kernel, t_comp: Kernel) -> Kernel:
    """Pointwise quotient ``k / t_comp``; positivity is not asserted."""
    _same_domain(k, t_comp)
    kev, tev = k.evaluator, t_comp.evaluator
    label = f"({k.label})/({t_comp.label})"

    def ev(x, y):
        d = tev(x, y)
        if abs(d) < DIVISION_FLOOR:
            raise DivisionError(f"{label}: denominator {d!r} vanishes")
        return kev(x, y) / d

    return Kernel(ev, k.domain, label)


def exp_kernel(k: Kernel) -> Kernel:
    """``exp(k(x, y))``."""
    kev = k.evaluator
    label = f"exp({k.label})"

    def ev(x, y):
        v = complex(kev(x, y))
        if v.real > EXP_MAX:
            raise KernelOverflowError(f"{label}: Re k = {v.real:g} exceeds {EXP_MAX:g}")
        return cmath.exp(v)

    return Kernel(ev, k.domain, label)


def diagonal(k: Kernel, x: Point) -> float:
    """``k(x, x)`` as a real number."""
    return eval_kernel(k, x, x).real


def normalized_section(k: Kernel, x: Point) -> Callable[[Point], complex]:
    """``y -> k(y, x) / k(x, x) ** 0.5``; its value at ``x`` is ``||k_x||``."""
    kxx = diagonal(k, x)
    if kxx <= 1e-14:
        raise DegenerateError(f"{k.label}: k(x,x) = {kxx!r} is not positive")
    s = math.sqrt(kxx)
    return lambda y: eval_kernel(k, y, x) / s


def p_metric(k: Kernel, x: Point, y: Point, squared: bool = False) -> float:
    """Kernel distance between ``x`` and ``y``.

    With ``squared=False`` this evaluates
    ``sqrt(1 - |k(x,y)|^2 / (k(x,x)^(1/2) k(y,y)^(1/2)))`` literally; the
    radicand is only guaranteed to be in [0, 1] when the diagonal is at most
    one, and a negative radicand beyond -1e-12 raises :class:`DegenerateError`.
    With ``squared=True`` the denominator is ``k(x,x) k(y,y)``, which is the
    usual scale-invariant form and always lies in [0, 1] for a positive kernel.
    """
    kxx, kyy = diagonal(k, x), diagonal(k, y)
    if kxx <= 1e-14 or kyy <= 1e-14:
        raise DegenerateError(f"{k.label}: vanishing diagonal")
    num = abs(eval_kernel(k, x, y)) ** 2
    den = kxx * kyy if squared else math.sqrt(kxx) * math.sqrt(kyy)
    rad = 1.0 - num / den
    if rad < 0:
        if rad < -1e-12:
            raise DegenerateError(f"p_metric radicand {rad:.3e} is negative")
        rad = 0.0
    return math.sqrt(rad)
