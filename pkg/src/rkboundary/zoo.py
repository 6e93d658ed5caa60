"""Ready-made kernels and self-maps, plus the label grammar used by the CLI.

Kernel labels::

    szego                     1 / (1 - z conj(w)) on the disk
    szego_pow:A               (1 - z conj(w)) ** -A
    dirichlet_log             log(1 / (1 - z conj(w))) / (z conj(w))
    min_ray                   min(x, y) on [0, inf)
    dbr_half                  (1 - b(z) conj(b(w))) / (1 - z conj(w)),  b(z) = (z + 1) / 2
    zeta_halfplane            zeta(z + conj(w)) on Re z > 1/2
    drury_arveson:D           1 / (1 - <z, w>) on the ball of C^D
    da_pow:D:A                (1 - <z, w>) ** -A
    polydisk_hardy:D          prod_j 1 / (1 - z_j conj(w_j))
    nat_matrix                i if i == j else 1, on {1, 2, ...}
    exp_of:<label>            exp of another catalog kernel

Map labels::

    identity[:<domain>]       domain is disk (default), ball:D or polydisk:D
    square                    z -> z ** 2
    mobius:A                  z -> (A - z) / (1 - z conj(A))
    halfway                   z -> (1 + z) / 2
    hartz:A:ZETA              z -> 1 - (1 - z conj(ZETA)) ** A
    ball_hartz:D:A:ZETA       z -> 1 - (1 - <z, ZETA>) ** A, ball of C^D into the disk
    coord_dup                 (z1, z2) -> (z1, z1) on the bidisk
    polydisk_product:M1|M2|...:S   (z_j) -> permuted (M_j(z_j)); S is a comma list

Complex literals are written ``a+bi`` without spaces (``1+0i``, ``-0.5i``,
``0.3``); points of C^d are comma separated (``1,0`` or ``0.6+0i,0.8i``).
"""

from __future__ import annotations

import cmath
import dataclasses
import math

import numpy as np

from .core import (
    Domain,
    Kernel,
    Point,
    SelfMap,
    _principal_power,
    exp_kernel,
    inner,
)
from .errors import ConvergenceError, DomainError, PoleError

DISK = Domain.unit_disk()

ZETA_TOL = 1e-10
ZETA_MAX_TERMS = 10_000
ZETA_MIN_REAL = 0.5 + 1e-3


# --------------------------------------------------------------------------
# special functions

def _eta_euler(s: complex, n_terms: int) -> tuple[complex, float]:
    """Euler-transformed alternating series for the Dirichlet eta function.

    Returns the partial sum over ``n_terms`` transformed terms and the size of
    the last two terms.
    """
    a = np.power(np.arange(1, n_terms + 1, dtype=complex), -s)
    total = 0j
    last = []
    d = a
    scale = 0.5
    sign = 1.0
    for _ in range(n_terms):
        term = sign * scale * d[0]
        total += term
        last.append(abs(term))
        d = d[1:] - d[:-1]
        scale *= 0.5
        sign = -sign
        if len(last) >= 3 and last[-1] < ZETA_TOL * 1e-2 and last[-2] < ZETA_TOL * 1e-2:
            break
        if d.size == 0:
            break
    return total, max(last[-2:])


# B_2, B_4, ..., B_14
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)
EM_SWITCH = 0.05


def _zeta_euler_maclaurin(s: complex) -> complex:
    """Euler-Maclaurin summation, used where ``1 - 2^(1-s)`` is small."""
    n = 20 + int(2 * abs(s))
    head = np.sum(np.power(np.arange(1, n, dtype=complex), -s))
    total = head + n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    rising = s  # s (s+1) ... (s+2j-2)
    fact = 2.0  # (2j)!
    for j, b in enumerate(_BERNOULLI, start=1):
        total += b / fact * rising * n ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return complex(total)


def zeta_eval(s: complex) -> complex:
    """Riemann zeta for ``Re s > 1/2`` via the accelerated eta series.

    ``zeta(s) = eta(s) / (1 - 2 ** (1 - s))``; the eta series is summed with
    the Euler (van Wijngaarden) transform, which converges geometrically.
    Where ``|1 - 2^(1-s)| < 0.05`` (near the pole and the other zeros of that
    factor) the division would amplify roundoff, so Euler-Maclaurin summation
    is used instead.
    """
    s = complex(s)
    if s.real <= ZETA_MIN_REAL:
        raise DomainError(f"zeta_eval needs Re s > {ZETA_MIN_REAL}, got {s!r}")
    if abs(s - 1) < 1e-6:
        raise PoleError(f"zeta has a pole at s = 1 (s = {s!r})")
    den = 1 - 2 ** (1 - s)
    if abs(den) < EM_SWITCH:
        return _zeta_euler_maclaurin(s)
    n = 64
    while True:
        eta, tail = _eta_euler(s, n)
        if tail < ZETA_TOL * 1e-2:
            break
        if n >= ZETA_MAX_TERMS:
            raise ConvergenceError(f"eta series did not converge for s = {s!r}")
        n = min(2 * n, ZETA_MAX_TERMS)
    return eta / den


def nat_matrix_eval(i, j) -> float:
    """Entry ``(i, j)`` of the matrix with diagonal 1, 2, 3, ... and ones elsewhere."""
    if i < 1 or j < 1:
        raise DomainError("indices start at 1")
    return float(i) if i == j else 1.0


def _b_half(z):
    return (z + 1) / 2


def db_rovnyak_eval(z: complex, w: complex) -> complex:
    """de Branges-Rovnyak kernel for ``b(z) = (z + 1) / 2``."""
    return (1 - _b_half(z) * _b_half(w).conjugate()) / (1 - z * w.conjugate())


# --------------------------------------------------------------------------
# kernels

def szego() -> Kernel:
    return Kernel(lambda x, y: 1 / (1 - x.z * y.z.conjugate()), DISK, "szego", DISK.point(0))


def szego_pow(alpha: float) -> Kernel:
    """Weighted Dirichlet (alpha < 1), Hardy (1) or Bergman-type (alpha > 1) kernel."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    label = f"szego_pow:{alpha:g}"
    return Kernel(lambda x, y: _principal_power(1 - x.z * y.z.conjugate(), -alpha, label),
                  DISK, label, DISK.point(0))


def _dirichlet_log_eval(x, y):
    u = x.z * y.z.conjugate()
    if abs(u) < 1e-4:
        return 1 + u / 2 + u * u / 3 + u ** 3 / 4 + u ** 4 / 5
    return -cmath.log(1 - u) / u


def dirichlet_log() -> Kernel:
    return Kernel(_dirichlet_log_eval, DISK, "dirichlet_log", DISK.point(0))


def min_ray() -> Kernel:
    return Kernel(lambda x, y: complex(min(x.z, y.z)), Domain.ray(), "min_ray")


def dbr_half() -> Kernel:
    return Kernel(lambda x, y: db_rovnyak_eval(x.z, y.z), DISK, "dbr_half")


def zeta_halfplane() -> Kernel:
    return Kernel(lambda x, y: zeta_eval(x.z + y.z.conjugate()), Domain.half_plane(0.5),
                  "zeta_halfplane")


def drury_arveson(d: int) -> Kernel:
    dom = Domain.unit_ball(d)
    return Kernel(lambda x, y: 1 / (1 - inner(x.coords, y.coords)), dom, f"drury_arveson:{d}",
                  dom.point(*([0] * d)))


def da_pow(d: int, alpha: float) -> Kernel:
    dom = Domain.unit_ball(d)
    label = f"da_pow:{d}:{alpha:g}"
    return Kernel(lambda x, y: _principal_power(1 - inner(x.coords, y.coords), -alpha, label),
                  dom, label, dom.point(*([0] * d)))


def polydisk_hardy(d: int) -> Kernel:
    dom = Domain.polydisk(d)

    def ev(x, y):
        v = 1 + 0j
        for a, b in zip(x.coords, y.coords):
            v /= 1 - a * b.conjugate()
        return v

    return Kernel(ev, dom, f"polydisk_hardy:{d}", dom.point(*([0] * d)))


def nat_matrix() -> Kernel:
    return Kernel(lambda x, y: complex(nat_matrix_eval(x.z, y.z)), Domain.naturals(), "nat_matrix")


def exp_of(k: Kernel) -> Kernel:
    return dataclasses.replace(exp_kernel(k), label=f"exp_of:{k.label}")


# --------------------------------------------------------------------------
# self-maps

def identity(domain: Domain = DISK) -> SelfMap:
    return SelfMap(lambda c: tuple(c), domain, domain, "identity")


def constant_map(value, source: Domain = DISK, target: Domain = DISK) -> SelfMap:
    value = value if isinstance(value, (tuple, list)) else (value,)
    target.point(*value)
    return SelfMap(lambda c: tuple(value), source, target, f"const:{_fmt(value)}")


def square() -> SelfMap:
    return SelfMap(lambda c: c[0] ** 2, DISK, DISK, "square")


def mobius(a: complex) -> SelfMap:
    """The disk automorphism exchanging ``a`` and 0."""
    a = complex(a)
    if abs(a) >= 1:
        raise DomainError("mobius parameter must lie in the open disk")
    return SelfMap(lambda c: (a - c[0]) / (1 - c[0] * a.conjugate()), DISK, DISK,
                   f"mobius:{_fmt_c(a)}")


def halfway() -> SelfMap:
    return SelfMap(lambda c: (1 + c[0]) / 2, DISK, DISK, "halfway")


def hartz(alpha: float, zeta: complex = 1) -> SelfMap:
    """``z -> 1 - (1 - z conj(zeta)) ** alpha``, a contractive multiplier of D_alpha."""
    zeta = complex(zeta)
    if abs(abs(zeta) - 1) > 1e-12:
        raise DomainError("hartz anchor must be unimodular")
    zc = zeta.conjugate()
    return SelfMap(lambda c: 1 - (1 - c[0] * zc) ** alpha, DISK, DISK,
                   f"hartz:{alpha:g}:{_fmt_c(zeta)}")


def ball_hartz(d: int, alpha: float, zeta) -> SelfMap:
    """``z -> 1 - (1 - <z, zeta>) ** alpha`` from the ball of C^d into the disk."""
    zeta = tuple(complex(v) for v in zeta)
    if len(zeta) != d or abs(math.sqrt(sum(abs(v) ** 2 for v in zeta)) - 1) > 1e-12:
        raise DomainError("ball_hartz anchor must be a unit vector of the right length")
    return SelfMap(lambda c: 1 - (1 - inner(c, zeta)) ** alpha, Domain.unit_ball(d), DISK,
                   f"ball_hartz:{d}:{alpha:g}:{_fmt(zeta)}")


def coord_dup() -> SelfMap:
    bidisk = Domain.polydisk(2)
    return SelfMap(lambda c: (c[0], c[0]), bidisk, bidisk, "coord_dup")


def polydisk_product(maps, sigma=None) -> SelfMap:
    """``z -> sigma(phi_1(z_1), ..., phi_d(z_d))`` with ``out[j] = w[sigma[j]]``."""
    d = len(maps)
    sigma = tuple(range(d)) if sigma is None else tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(d)):
        raise ValueError(f"{sigma} is not a permutation of 0..{d - 1}")
    for m in maps:
        if m.source != DISK or m.target != DISK:
            raise DomainError("polydisk_product factors must be disk self-maps")
    dom = Domain.polydisk(d)

    def fn(c):
        w = [m.raw(DISK.boundary_point(cj))[0] for m, cj in zip(maps, c)]
        return tuple(w[s] for s in sigma)

    label = "polydisk_product:" + "|".join(m.label for m in maps) + ":" + ",".join(map(str, sigma))
    return SelfMap(fn, dom, dom, label)


# --------------------------------------------------------------------------
# label grammar

def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style literals (also plain reals and ``j`` suffixes)."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty complex literal")
    t = t.replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ValueError(f"bad complex literal {text!r}") from exc


def parse_vector(text: str) -> tuple:
    """Parse a comma separated complex tuple."""
    return tuple(parse_complex(p) for p in text.split(","))


def _fmt_c(z: complex) -> str:
    z = complex(z)
    return f"{z.real:g}{z.imag:+g}i"


def _fmt(values) -> str:
    return ",".join(_fmt_c(v) for v in values)


def parse_kernel(label: str) -> Kernel:
    """Resolve a kernel label from the catalog grammar."""
    name, _, rest = label.partition(":")
    args = rest.split(":") if rest else []
    try:
        if name == "szego" and not args:
            return szego()
        if name == "szego_pow" and len(args) == 1:
            return szego_pow(float(args[0]))
        if name == "dirichlet_log" and not args:
            return dirichlet_log()
        if name == "min_ray" and not args:
            return min_ray()
        if name == "dbr_half" and not args:
            return dbr_half()
        if name == "zeta_halfplane" and not args:
            return zeta_halfplane()
        if name == "drury_arveson" and len(args) == 1:
            return drury_arveson(int(args[0]))
        if name == "da_pow" and len(args) == 2:
            return da_pow(int(args[0]), float(args[1]))
        if name == "polydisk_hardy" and len(args) == 1:
            return polydisk_hardy(int(args[0]))
        if name == "nat_matrix" and not args:
            return nat_matrix()
        if name == "exp_of" and rest:
            return exp_of(parse_kernel(rest))
    except (ValueError, DomainError) as exc:
        raise ValueError(f"bad kernel label {label!r}: {exc}") from exc
    raise ValueError(f"unknown kernel label {label!r}")


def parse_domain(text: str) -> Domain:
    name, _, arg = text.partition(":")
    if name == "disk":
        return DISK
    if name == "ball":
        return Domain.unit_ball(int(arg))
    if name == "polydisk":
        return Domain.polydisk(int(arg))
    if name == "halfplane":
        return Domain.half_plane(float(arg) if arg else 0.5)
    if name == "ray":
        return Domain.ray()
    if name == "naturals":
        return Domain.naturals()
    raise ValueError(f"unknown domain {text!r}")


def parse_map(label: str) -> SelfMap:
    """Resolve a self-map label from the catalog grammar."""
    name, _, rest = label.partition(":")
    args = rest.split(":") if rest else []
    try:
        if name == "identity":
            return identity(parse_domain(rest) if rest else DISK)
        if name == "square" and not args:
            return square()
        if name == "mobius" and len(args) == 1:
            return mobius(parse_complex(args[0]))
        if name == "halfway" and not args:
            return halfway()
        if name == "hartz" and len(args) in (1, 2):
            return hartz(float(args[0]), parse_complex(args[1]) if len(args) == 2 else 1)
        if name == "ball_hartz" and len(args) == 3:
            return ball_hartz(int(args[0]), float(args[1]), parse_vector(args[2]))
        if name == "coord_dup" and not args:
            return coord_dup()
        if name == "polydisk_product" and len(args) >= 1:
            factors = [parse_map(m) for m in args[0].split("|")]
            sigma = [int(s) for s in args[1].split(",")] if len(args) > 1 else None
            return polydisk_product(factors, sigma)
    except (ValueError, DomainError) as exc:
        raise ValueError(f"bad map label {label!r}: {exc}") from exc
    raise ValueError(f"unknown map label {label!r}")


KERNEL_LABELS = ("szego", "szego_pow:0.5", "dirichlet_log", "min_ray", "dbr_half",
                 "zeta_halfplane", "drury_arveson:2", "da_pow:2:0.5", "polydisk_hardy:2",
                 "nat_matrix", "exp_of:szego")
MAP_LABELS = ("identity", "square", "mobius:0.5", "halfway", "hartz:0.5:1+0i", "coord_dup",
              "polydisk_product:square|halfway:1,0")


def catalog_kernels() -> dict[str, Kernel]:
    return {lab: parse_kernel(lab) for lab in KERNEL_LABELS}


def catalog_maps() -> dict[str, SelfMap]:
    return {lab: parse_map(lab) for lab in MAP_LABELS}
