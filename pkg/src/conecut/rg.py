"""Wilson averaging of cylinder stacks, renormalized series and fixed points.

One averaging step merges slabs (0, 1), (2, 3), ... counted from the base:
the merged slab keeps the lower z_start, doubles the thickness and carries
the summed volume.  Repeating the step until a chosen thickness is reached
gives figures that all share one slab count, so a refinement sequence can be
compared bin by bin at a fixed scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._io import dumps_csv, dumps_json
from .errors import CoarseGrainError
from .profiles import Profile, bin_volume
from .ziggurat import Ziggurat, build_ziggurat, total_volume

# relative tolerance when matching a target thickness to h * 2**k
SCALE_RTOL = 1e-9


def _uniform(zg: Ziggurat) -> float:
    if not len(zg):
        raise CoarseGrainError("cannot coarse-grain an empty stack")
    h = zg.uniform_thickness()
    if h is None:
        raise CoarseGrainError("slab thicknesses are not uniform")
    return h


def coarse_grain(zg: Ziggurat) -> Ziggurat:
    """Merge consecutive slab pairs into single slabs of doubled thickness."""
    _uniform(zg)
    if len(zg) % 2:
        raise CoarseGrainError(f"odd slab count {len(zg)} cannot be paired")
    return Ziggurat(
        zg.z_starts[0::2],
        zg.thicknesses[0::2] + zg.thicknesses[1::2],
        zg.volumes[0::2] + zg.volumes[1::2],
        rigorous=zg.rigorous,
    )


def renormalize_to_scale(zg: Ziggurat, target_thickness: float) -> Ziggurat:
    """Coarse-grain until the slabs are ``target_thickness`` thick.

    The target must equal h * 2**k for the stack's thickness h and some k >= 0.
    """
    h = _uniform(zg)
    ratio = target_thickness / h
    if not ratio > 0:
        raise CoarseGrainError(f"target thickness must be positive, got {target_thickness}")
    k = round(math.log2(ratio))
    if k < 0 or abs(h * 2.0**k - target_thickness) > SCALE_RTOL * target_thickness:
        raise CoarseGrainError(
            f"target thickness {target_thickness!r} is not {h!r} times a power of two")
    for _ in range(k):
        zg = coarse_grain(zg)
    return zg


@dataclass
class Level:
    k: int
    figure: Ziggurat
    errors: np.ndarray
    fine_volume: float


@dataclass
class RenormalizedSeries:
    base_slab_count: int
    base_thickness: float
    mode: str
    limit_figure: Ziggurat
    levels: list[Level] = field(default_factory=list)

    @property
    def errors(self) -> np.ndarray:
        """Per-bin absolute errors, shape (levels, bins)."""
        return np.array([lv.errors for lv in self.levels])

    def ratios(self) -> np.ndarray:
        """errors[k-1] / errors[k] per bin; NaN where the finer error is zero."""
        e = self.errors
        with np.errstate(divide="ignore", invalid="ignore"):
            out = e[:-1] / e[1:]
        out[e[1:] == 0] = np.nan
        return out

    def to_dict(self) -> dict:
        return {
            "base_slab_count": self.base_slab_count,
            "base_thickness": self.base_thickness,
            "mode": self.mode,
            "levels": [
                {
                    "level": lv.k,
                    "fine_slab_count": self.base_slab_count * 2**lv.k,
                    "fine_volume": lv.fine_volume,
                    "figure": lv.figure.to_dict(),
                    "errors": lv.errors.tolist(),
                }
                for lv in self.levels
            ],
            "limit_figure": self.limit_figure.to_dict(),
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict()) + "\n"

    def rows(self) -> list[tuple]:
        return [(lv.k, i, float(v), float(e))
                for lv in self.levels
                for i, (v, e) in enumerate(zip(lv.figure.volumes, lv.errors))]

    def to_csv(self) -> str:
        return dumps_csv(("level", "bin", "volume", "error"), self.rows())


def limit_figure(p: Profile, n0: int) -> Ziggurat:
    """Stack whose slab i holds the exact solid volume over bin i of an n0-bin split."""
    h = p.height / n0
    edges = np.arange(n0 + 1) * h
    edges[-1] = p.height
    vols = [bin_volume(p, edges[i], edges[i + 1]) for i in range(n0)]
    return Ziggurat(edges[:-1], np.full(n0, h), vols)


def renormalized_series(p: Profile, n0: int = 2, k_max: int = 10,
                        mode: str = "inscribed") -> RenormalizedSeries:
    """Build the n0 * 2**k stacks for k = 0..k_max, each averaged back to H/n0."""
    if int(n0) != n0 or n0 < 1:
        raise CoarseGrainError(f"base slab count must be a positive integer, got {n0!r}")
    if int(k_max) != k_max or k_max < 0:
        raise CoarseGrainError(f"k_max must be a non-negative integer, got {k_max!r}")
    n0, k_max = int(n0), int(k_max)
    h0 = p.height / n0
    limit = limit_figure(p, n0)
    series = RenormalizedSeries(n0, h0, mode, limit)
    for k in range(k_max + 1):
        fine = build_ziggurat(p, n0 * 2**k, mode)
        coarse = renormalize_to_scale(fine, h0)
        series.levels.append(
            Level(k, coarse, np.abs(coarse.volumes - limit.volumes), total_volume(fine)))
    return series


def invariance_distance(zg: Ziggurat) -> float | None:
    """Relative sup-distance of the effective radii from the equal-volume cylinder.

    Returns None for a zero-volume figure, where no reference radius exists.
    Zero exactly characterizes constant-radius stacks.
    """
    _uniform(zg)
    v = total_volume(zg)
    if v == 0:
        return None
    rho = math.sqrt(v / (math.pi * zg.height))
    return float(np.max(np.abs(zg.effective_radii - rho))) / rho


@dataclass
class FixedPointReport:
    iterates: list[Ziggurat]
    distances: list[float | None]

    @property
    def terminal(self) -> Ziggurat:
        return self.iterates[-1]

    @property
    def terminal_radius(self) -> float:
        return self.terminal[0].effective_radius

    @property
    def steps(self) -> int:
        return len(self.iterates) - 1

    def rows(self) -> list[tuple]:
        return [(i, len(zg), float(zg.thicknesses[0]), d)
                for i, (zg, d) in enumerate(zip(self.iterates, self.distances))]

    def to_dict(self) -> dict:
        return {
            "iterates": [{"iterate": i, "slab_count": len(zg), "figure": zg.to_dict()}
                         for i, zg in enumerate(self.iterates)],
            "terminal_radius": self.terminal_radius,
            "invariance_distance": list(self.distances),
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        return dumps_csv(("iterate", "slabs", "thickness", "invariance_distance"), self.rows())


def iterate_to_fixed_point(zg: Ziggurat) -> FixedPointReport:
    """Coarse-grain down to a single slab, recording each figure and its distance.

    The input is the first iterate, so a stack of 2**k slabs yields k + 1
    iterates.
    """
    n = len(zg)
    if n < 1 or n & (n - 1):
        raise CoarseGrainError(f"slab count {n} is not a power of two")
    _uniform(zg)
    iterates = [zg]
    while len(iterates[-1]) > 1:
        iterates.append(coarse_grain(iterates[-1]))
    return FixedPointReport(iterates, [invariance_distance(z) for z in iterates])
