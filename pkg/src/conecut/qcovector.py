"""Pairs of parallel planes ("q-covectors") and their pasting composition.

A covector is an axial unit direction, a support offset locating the first
plane along that direction, and a modulus giving the distance to the second
plane.  Two covectors compose only when the second starts where the first
ends; the result is one thicker cutter.  A zero modulus still means two
planes: nothing here collapses the pair.

Covectors along the solid's axis (``axial == ZHAT``) double as the
one-dimensional "pairs of points" that describe slabs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._io import dumps_json
from .errors import ConecutError, DirectionMismatchError, DomainError, PastingError
from .profiles import Profile, area, bin_volume
from .ziggurat import Slab, Ziggurat

ZHAT = (0.0, 0.0, 1.0)
UNIT_TOL = 1e-12
#: default pasting tolerance, relative to the largest support involved
PASTE_RTOL = 1e-12


@dataclass(frozen=True)
class QCovector:
    axial: tuple[float, float, float]
    support: float
    modulus: float

    def __post_init__(self):
        axial = tuple(float(c) for c in self.axial)
        if len(axial) != 3:
            raise ConecutError("axial direction must have three components")
        norm = math.sqrt(math.fsum(c * c for c in axial))
        if abs(norm - 1.0) > UNIT_TOL:
            raise ConecutError(f"axial direction must be a unit vector, |axial| = {norm!r}")
        if not self.modulus >= 0:
            raise ConecutError(f"modulus must be non-negative, got {self.modulus}")
        object.__setattr__(self, "axial", axial)
        object.__setattr__(self, "support", float(self.support))
        object.__setattr__(self, "modulus", float(self.modulus))

    @property
    def end(self) -> float:
        """Offset of the second plane."""
        return self.support + self.modulus

    @property
    def planes(self) -> tuple[float, float]:
        return self.support, self.end

    def to_dict(self) -> dict:
        return {"axial": list(self.axial), "support": self.support, "modulus": self.modulus}

    def to_json(self) -> str:
        return dumps_json(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "QCovector":
        return cls(tuple(d["axial"]), d["support"], d["modulus"])

    def __matmul__(self, other: "QCovector") -> "QCovector":
        return compose(self, other)


def _dot(u: Sequence[float], v: Sequence[float]) -> float:
    return math.fsum(a * b for a, b in zip(u, v))


def compose(a: QCovector, b: QCovector, tol: float | None = None) -> QCovector:
    """Fuse ``b`` onto the end of ``a``.

    Needs the same axial direction and ``b.support == a.end`` to within
    ``tol`` (default: 1e-12 times the largest support magnitude involved).
    """
    if _dot(a.axial, b.axial) < 1.0 - UNIT_TOL:
        raise DirectionMismatchError(f"axial directions differ: {a.axial} vs {b.axial}")
    if tol is None:
        tol = PASTE_RTOL * max(abs(a.support), abs(a.end), abs(b.support))
    gap = abs(b.support - a.end)
    if gap > tol:
        raise PastingError(gap, tol)
    return QCovector(a.axial, a.support, a.modulus + b.modulus)


def compose_all(covectors: Iterable[QCovector], tol: float | None = None) -> QCovector:
    it = iter(covectors)
    try:
        acc = next(it)
    except StopIteration:
        raise ConecutError("nothing to compose") from None
    for c in it:
        acc = compose(acc, c, tol)
    return acc


def slab_covector(slab: Slab) -> QCovector:
    return QCovector(ZHAT, slab.z_start, slab.thickness)


def slab_covectors(zg: Ziggurat) -> list[QCovector]:
    return [QCovector(ZHAT, z, t) for z, t in zip(zg.z_starts.tolist(), zg.thicknesses.tolist())]


def _axis_window(p: Profile, c: QCovector) -> tuple[float, float]:
    if _dot(c.axial, ZHAT) < 1.0 - UNIT_TOL:
        raise DomainError("only cutters along the solid's axis can slice a profile")
    lo, hi = c.planes
    slack = 1e-12 * p.height
    if lo < -slack or hi > p.height + slack:
        raise DomainError(f"cutter [{lo}, {hi}] leaves [0, {p.height}]")
    return max(lo, 0.0), min(hi, p.height)


def slice_volume(p: Profile, c: QCovector) -> float:
    """Volume of the solid held between the cutter's two planes."""
    lo, hi = _axis_window(p, c)
    if c.modulus == 0:
        return 0.0
    return bin_volume(p, lo, hi)


def plane_areas(p: Profile, c: QCovector) -> tuple[float, float]:
    """Cross-section areas under the first and second plane; equal when modulus is 0."""
    lo, hi = _axis_window(p, c)
    return area(p, lo), area(p, hi)


def density_limit(p: Profile, z: float, eps_sequence: Sequence[float]) -> list[float]:
    """slice_volume / eps for cutters [z, z + eps]; tends to area(p, z)."""
    eps = [float(e) for e in eps_sequence]
    if not eps:
        raise DomainError("empty eps sequence")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("eps sequence must be strictly decreasing")
    if eps[-1] < 1e-8 * p.height:
        raise DomainError(f"eps {eps[-1]} is below 1e-8 * H")
    return [slice_volume(p, QCovector(ZHAT, z, e)) / e for e in eps]
