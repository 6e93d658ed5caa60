"""Finite samples of a domain.

Quasi-random samples come from a scrambled Halton sequence with a fixed seed,
so every Gram test is reproducible. Disk points use the area-uniform radius
law ``r = rmax * sqrt(u)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, qmc

from .core import BALL, DISK, HALFPLANE, NATURALS, POLYDISK, RAY, Domain, Point

DISTINCT_TOL = 1e-10
DEFAULT_RMAX = 0.98


@dataclass(frozen=True)
class Sample:
    """An ordered list of pairwise distinct points of one domain."""

    points: tuple
    domain: Domain
    seed: int = 0

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        coords = np.array([[complex(c) for c in p.coords] for p in pts]) if pts else np.zeros((0, 1))
        for i in range(1, len(pts)):
            gaps = np.max(np.abs(coords[:i] - coords[i]), axis=1)
            if np.min(gaps) <= DISTINCT_TOL:
                raise ValueError(f"sample points {i} and {int(np.argmin(gaps))} coincide")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def union(self, other) -> "Sample":
        """Append points of ``other`` that are not already present."""
        pts = list(self.points)
        have = [np.array([complex(c) for c in p.coords]) for p in pts]
        for p in other:
            c = np.array([complex(v) for v in p.coords])
            if all(np.max(np.abs(c - h)) > DISTINCT_TOL for h in have):
                pts.append(p)
                have.append(c)
        return Sample(tuple(pts), self.domain, self.seed)


def make_sample(domain: Domain, coords, seed: int = 0) -> Sample:
    """Build a sample from raw coordinates."""
    return Sample(tuple(domain.point(c) for c in coords), domain, seed)


def _disk_from_unit(u, v, rmax):
    return rmax * np.sqrt(u) * np.exp(2j * np.pi * v)


def quasi_random_sample(domain: Domain, n: int, seed: int = 0, rmax: float = DEFAULT_RMAX) -> Sample:
    """``n`` low-discrepancy points of ``domain``.

    ``rmax`` caps the Euclidean radius for disk, ball and polydisk samples;
    half-plane points are images of disk points under ``w -> cut + (1+w)/(1-w)``
    (so real parts stay above ``cut + (1 - rmax)/(1 + rmax)``); ray points are
    ``-log(1 - u) * 4``; naturals are simply ``1..n``.
    """
    if domain.kind == NATURALS:
        return Sample(tuple(domain.point(i) for i in range(1, n + 1)), domain, seed)
    width = {DISK: 2, HALFPLANE: 2, RAY: 1, BALL: 2 * domain.dim + 1, POLYDISK: 2 * domain.dim}
    engine = qmc.Halton(d=width[domain.kind], scramble=True, seed=seed)
    u = engine.random(n)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    pts = []
    if domain.kind == DISK:
        zs = _disk_from_unit(u[:, 0], u[:, 1], rmax)
        pts = [domain.point(z) for z in zs]
    elif domain.kind == HALFPLANE:
        ws = _disk_from_unit(u[:, 0], u[:, 1], rmax)
        pts = [domain.point(domain.cut + (1 + w) / (1 - w)) for w in ws]
    elif domain.kind == RAY:
        pts = [domain.point(float(-math.log(1 - x) * 4)) for x in u[:, 0]]
    elif domain.kind == POLYDISK:
        d = domain.dim
        for row in u:
            zs = _disk_from_unit(row[0::2], row[1::2], rmax)
            pts.append(domain.point(*zs))
    elif domain.kind == BALL:
        d = domain.dim
        for row in u:
            g = norm.ppf(row[: 2 * d])
            vec = g[0::2] + 1j * g[1::2]
            vec /= np.linalg.norm(vec)
            r = rmax * row[2 * d] ** (1.0 / (2 * d))
            pts.append(domain.point(*(r * vec)))
    return Sample(tuple(pts), domain, seed)


def random_sample(domain: Domain, n: int, rng: np.random.Generator, rmax: float = DEFAULT_RMAX) -> Sample:
    """Pseudo-random sample, for property tests over many seeds."""
    seed = int(rng.integers(0, 2**31 - 1))
    return quasi_random_sample(domain, n, seed=seed, rmax=rmax)


def grid_g16() -> Sample:
    """The fixed 16-point disk grid: radii {0.2, 0.5, 0.8, 0.95} x angles {0, pi/2, pi, 3pi/2}."""
    dom = Domain.unit_disk()
    pts = []
    for r in (0.2, 0.5, 0.8, 0.95):
        for k in range(4):
            pts.append(dom.point(r * complex(round(math.cos(k * math.pi / 2)), round(math.sin(k * math.pi / 2)))))
    return Sample(tuple(pts), dom, 0)


DISK_PROBES = (0, 0.5, -0.5, 0.5j, -0.5j, 0.3 + 0.3j, -0.3 + 0.6j, 0.7)
RAY_PROBES = (0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0)
NATURAL_PROBES = (1, 2, 3, 4, 5, 6, 7, 8)


def default_probes(domain: Domain) -> Sample:
    """Eight fixed interior points per domain, used to test pointwise convergence."""
    if domain.kind == DISK:
        coords = DISK_PROBES
    elif domain.kind == RAY:
        coords = RAY_PROBES
    elif domain.kind == NATURALS:
        coords = NATURAL_PROBES
    elif domain.kind == HALFPLANE:
        c = domain.cut
        coords = (c + 0.5, c + 1, c + 2, c + 0.5 + 1j, c + 0.5 - 1j, c + 1 + 2j, c + 3 - 0.5j, c + 0.75)
    else:
        d = domain.dim
        base = []
        for z in DISK_PROBES:
            v = [0j] * d
            v[0] = z * 0.9
            if d > 1:
                v[1] = 0.3 * z * 1j if z else 0.2
            base.append(tuple(v))
        coords = base
        if domain.kind == POLYDISK:
            coords = [tuple(0.9 * complex(c) for c in v) for v in base]
    return Sample(tuple(domain.point(c) for c in coords), domain, 0)
