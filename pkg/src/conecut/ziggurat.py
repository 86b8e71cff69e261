"""Inscribed and circumscribed cylinder stacks ("ziggurats").

A stack is stored column-wise (z_start, thickness, volume arrays) so that
figures with tens of thousands of slabs stay cheap; :class:`Slab` objects
are produced on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from ._io import dumps_csv, dumps_json
from .errors import ConecutError, DomainError, NonMonotoneError
from .profiles import Profile, area

MODES = ("inscribed", "circumscribed")

# pasting tolerance, relative to the stack height
PASTE_RTOL = 1e-12


@dataclass(frozen=True)
class Slab:
    z_start: float
    thickness: float
    volume: float

    def __post_init__(self):
        if not self.thickness > 0:
            raise ConecutError(f"slab thickness must be positive, got {self.thickness}")
        if not self.volume >= 0:
            raise ConecutError(f"slab volume must be non-negative, got {self.volume}")

    @property
    def z_end(self) -> float:
        return self.z_start + self.thickness

    @property
    def effective_radius(self) -> float:
        return math.sqrt(self.volume / (math.pi * self.thickness))


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class Ziggurat:
    """Contiguous stack of slabs, bottom to top.

    ``rigorous`` is False when the stack came from a non-monotone profile,
    where endpoint radii need not bound the solid on every slab.
    """

    __slots__ = ("z_starts", "thicknesses", "volumes", "rigorous")

    def __init__(self, z_starts, thicknesses, volumes, rigorous: bool = True):
        z_starts = _readonly(z_starts)
        thicknesses = _readonly(thicknesses)
        volumes = _readonly(volumes)
        if not (z_starts.shape == thicknesses.shape == volumes.shape) or z_starts.ndim != 1:
            raise ConecutError("z_starts, thicknesses and volumes must be 1-D arrays of equal length")
        if np.any(~(thicknesses > 0)):
            raise ConecutError("every slab thickness must be positive")
        if np.any(~(volumes >= 0)):
            raise ConecutError("every slab volume must be non-negative")
        if len(z_starts) > 1:
            height = float(np.sum(thicknesses))
            mismatch = np.abs(z_starts[1:] - (z_starts[:-1] + thicknesses[:-1]))
            worst = float(mismatch.max())
            if worst > PASTE_RTOL * height:
                i = int(mismatch.argmax())
                raise ConecutError(
                    f"slabs {i} and {i + 1} are not pasted: gap {worst:.3g}")
        self.z_starts = z_starts
        self.thicknesses = thicknesses
        self.volumes = volumes
        self.rigorous = bool(rigorous)

    @classmethod
    def from_slabs(cls, slabs: Sequence[Slab], rigorous: bool = True) -> "Ziggurat":
        return cls([s.z_start for s in slabs], [s.thickness for s in slabs],
                   [s.volume for s in slabs], rigorous)

    @classmethod
    def constant(cls, rho: float, n: int, height: float = 1.0, origin: float = 0.0) -> "Ziggurat":
        """``n`` equal slabs of radius ``rho``: a member of the invariant family."""
        h = height / n
        return cls(origin + np.arange(n) * h, np.full(n, h),
                   np.full(n, math.pi * rho * rho * h))

    def __len__(self) -> int:
        return len(self.volumes)

    def __getitem__(self, i: int) -> Slab:
        return Slab(float(self.z_starts[i]), float(self.thicknesses[i]), float(self.volumes[i]))

    def __iter__(self) -> Iterator[Slab]:
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"Ziggurat(slabs={len(self)}, origin={self.origin!r}, height={self.height!r})"

    @property
    def slabs(self) -> list[Slab]:
        return list(self)

    @property
    def origin(self) -> float:
        return float(self.z_starts[0]) if len(self) else 0.0

    @property
    def height(self) -> float:
        return math.fsum(self.thicknesses.tolist())

    @property
    def effective_radii(self) -> np.ndarray:
        return np.sqrt(self.volumes / (math.pi * self.thicknesses))

    def uniform_thickness(self, rtol: float = PASTE_RTOL) -> float | None:
        """Common slab thickness, or None if the slabs differ by more than ``rtol * height``."""
        if not len(self):
            return None
        h = float(self.thicknesses[0])
        if np.max(np.abs(self.thicknesses - h)) > rtol * self.height:
            return None
        return h

    def to_dict(self) -> dict:
        return {
            "origin": self.origin,
            "slabs": [{"z_start": s.z_start, "thickness": s.thickness, "volume": s.volume}
                      for s in self],
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        return dumps_csv(("z_start", "thickness", "volume"),
                         list(zip(self.z_starts.tolist(), self.thicknesses.tolist(),
                                  self.volumes.tolist())))

    @classmethod
    def from_dict(cls, d: dict) -> "Ziggurat":
        slabs = d["slabs"]
        return cls([s["z_start"] for s in slabs], [s["thickness"] for s in slabs],
                   [s["volume"] for s in slabs])


def _nodes(p: Profile, n: int) -> np.ndarray:
    h = p.height / n
    z = np.arange(n + 1) * h
    z[-1] = p.height
    return z


def build_ziggurat(p: Profile, n: int, mode: str) -> Ziggurat:
    """Stack of ``n`` equal slabs inscribed in or circumscribed about ``p``.

    Each slab of thickness h = H/n takes the smaller (inscribed) or larger
    (circumscribed) of the two endpoint radii. Consecutive slabs share the
    node evaluation, which is what makes :func:`gap` telescope exactly.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ConecutError(f"slab count must be a positive integer, got {n!r}")
    if mode not in MODES:
        raise ConecutError(f"mode must be one of {MODES}, got {mode!r}")
    n = int(n)
    h = p.height / n
    z = _nodes(p, n)
    r = p.r(z)
    lo, hi = np.minimum(r[:-1], r[1:]), np.maximum(r[:-1], r[1:])
    rad = lo if mode == "inscribed" else hi
    return Ziggurat(z[:-1], np.full(n, h), math.pi * rad * rad * h, rigorous=p.monotone)


def total_volume(zg: Ziggurat) -> float:
    # fsum is exactly rounded, so the result does not depend on summation order
    return math.fsum(zg.volumes.tolist())


class Gap(NamedTuple):
    by_subtraction: float
    closed_form: float


def gap(p: Profile, n: int) -> Gap:
    """Circumscribed minus inscribed volume, with the telescoped closed form.

    For a monotone profile every inscribed slab equals the next circumscribed
    one, so the difference collapses to pi * h * |r(0)^2 - r(H)^2|.
    """
    if not p.monotone:
        raise NonMonotoneError("gap telescopes only for monotone profiles")
    outer = build_ziggurat(p, n, "circumscribed")
    inner = build_ziggurat(p, n, "inscribed")
    # one exactly-rounded sum over both stacks instead of two rounded totals
    diff = math.fsum(outer.volumes.tolist() + (-inner.volumes).tolist())
    h = p.height / n
    r0, rH = p.r(0.0), p.r(p.height)
    return Gap(diff, math.pi * h * abs(r0 * r0 - rH * rH))


def democritus_gap(p: Profile, z: float, eps: float) -> float:
    """Signed area mismatch between the two faces of a cutter of thickness ``eps`` at ``z``."""
    if not eps > 0:
        raise DomainError(f"cutter thickness must be positive, got {eps}")
    if z < 0 or z + eps > p.height * (1 + 1e-15):
        raise DomainError(f"cutter [{z}, {z + eps}] leaves [0, {p.height}]")
    lower = p.r(z)
    upper = p.r(min(z + eps, p.height))
    return math.pi * (lower - upper) * (lower + upper)


def faces(p: Profile, z: float, eps: float) -> tuple[float, float]:
    """Areas of the lower and upper faces exposed by the cutter; kept as two values for every eps."""
    return area(p, z), area(p, z + eps)
