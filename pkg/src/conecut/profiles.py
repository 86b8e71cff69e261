"""Radius profiles r(z) of solids of revolution and their volume oracles.

The base circle sits at z = 0 and the apex (or top) at z = H.  Analytic
kinds carry closed-form volumes; tabulated profiles are piecewise linear
between samples and fall back on a fine midpoint rule.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ProfileError

KINDS = ("cone", "cylinder", "paraboloid", "tabulated")

#: midpoint panels used by the quadrature oracle over the full height
ORACLE_PANELS = 2**20
#: floor on panel count when the oracle is restricted to a short window
MIN_WINDOW_PANELS = 2**10

# slack on the [0, H] domain check, relative to H
_DOMAIN_RTOL = 1e-12


@dataclass(frozen=True)
class Profile:
    kind: str
    radius: float
    height: float
    samples: tuple[tuple[float, float], ...] | None = None
    monotone: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ProfileError(f"unknown profile kind {self.kind!r}")

    @property
    def R(self) -> float:
        return self.radius

    @property
    def H(self) -> float:
        return self.height

    def r(self, z):
        """Radius at ``z`` (scalar or array), without domain checks.

        Values are clipped to [0, H] first so that a node computed as
        ``n * (H / n)`` one ulp above H still evaluates cleanly.
        """
        z = np.clip(np.asarray(z, dtype=float), 0.0, self.height)
        if self.kind == "cone":
            out = self.radius * (1.0 - z / self.height)
        elif self.kind == "cylinder":
            out = np.full_like(z, self.radius)
        elif self.kind == "paraboloid":
            out = self.radius * np.sqrt(np.maximum(1.0 - z / self.height, 0.0))
        else:
            zs, rs = self._table
            out = np.interp(z, zs, rs)
        return float(out) if out.ndim == 0 else out

    def A(self, z):
        r = self.r(z)
        return math.pi * r * r

    @property
    def _table(self) -> tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(self.samples, dtype=float)
        return arr[:, 0], arr[:, 1]

    def lipschitz(self) -> float:
        """Bound on |dr/dz|; infinite for the paraboloid (square-root apex)."""
        if self.kind == "cone":
            return self.radius / self.height
        if self.kind == "cylinder":
            return 0.0
        if self.kind == "paraboloid":
            return math.inf
        zs, rs = self._table
        return float(np.max(np.abs(np.diff(rs) / np.diff(zs))))


def make_profile(
    kind: str,
    radius: float | None = None,
    height: float | None = None,
    samples: Iterable[Sequence[float]] | None = None,
) -> Profile:
    """Build and validate a profile.

    Analytic kinds (``cone``, ``cylinder``, ``paraboloid``) need ``radius``
    and ``height``.  ``tabulated`` needs ``samples``: (z, r) pairs with z
    strictly increasing from 0 to H; ``height`` may be given to double-check
    the last abscissa.
    """
    if kind not in KINDS:
        raise ProfileError(f"unknown profile kind {kind!r}; expected one of {', '.join(KINDS)}")

    if kind != "tabulated":
        if radius is None or height is None:
            raise ProfileError(f"{kind} profile needs both radius and height")
        radius, height = float(radius), float(height)
        if not (math.isfinite(height) and height > 0):
            raise ProfileError(f"height must be positive, got {height}")
        if not (math.isfinite(radius) and radius > 0):
            raise ProfileError(f"radius must be positive, got {radius}")
        # every analytic kind is monotone on [0, H]
        return Profile(kind, radius, height, None, True)

    if samples is None:
        raise ProfileError("tabulated profile needs samples")
    pts = tuple((float(z), float(r)) for z, r in samples)
    if len(pts) < 2:
        raise ProfileError("tabulated profile needs at least two samples")
    zs = np.array([p[0] for p in pts])
    rs = np.array([p[1] for p in pts])
    if not np.all(np.isfinite(zs)) or not np.all(np.isfinite(rs)):
        raise ProfileError("samples must be finite")
    if zs[0] != 0.0:
        raise ProfileError(f"first sample must sit at z = 0, got {zs[0]}")
    if np.any(np.diff(zs) <= 0):
        raise ProfileError("sample abscissae must be strictly increasing")
    if np.any(rs < 0):
        raise ProfileError("sample radii must be non-negative")
    H = float(zs[-1])
    if height is not None and float(height) != H:
        raise ProfileError(f"last sample z = {H} does not match height {height}")
    dr = np.diff(rs)
    monotone = bool(np.all(dr <= 0) or np.all(dr >= 0))
    return Profile("tabulated", float(rs.max()), H, pts, monotone)


def load_table(path: str | Path) -> Profile:
    """Read a tabulated profile from a ``z,r`` CSV file."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ProfileError(f"{path}: empty profile table") from None
        if header != ["z", "r"]:
            raise ProfileError(f"{path}: expected header 'z,r', got {','.join(header)!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ProfileError(f"{path}:{lineno}: expected two columns")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                raise ProfileError(f"{path}:{lineno}: unparsable number") from None
    return make_profile("tabulated", samples=rows)


def _check_z(p: Profile, z: float) -> float:
    slack = _DOMAIN_RTOL * p.height
    if not (-slack <= z <= p.height + slack):
        raise DomainError(f"z = {z} outside [0, {p.height}]")
    return min(max(z, 0.0), p.height)


def radius(p: Profile, z: float) -> float:
    return p.r(_check_z(p, float(z)))


def area(p: Profile, z: float) -> float:
    """Cross-section area pi * r(z)**2."""
    return p.A(_check_z(p, float(z)))


def midpoint_volume(p: Profile, a: float = 0.0, b: float | None = None,
                    panels: int = ORACLE_PANELS) -> float:
    """Brute-force midpoint rule for the integral of pi*r(z)^2 over [a, b]."""
    if b is None:
        b = p.height
    if panels < 1:
        raise ValueError("panels must be >= 1")
    h = (b - a) / panels
    mids = a + (np.arange(panels) + 0.5) * h
    r = p.r(mids)
    return math.pi * math.fsum((r * r).tolist()) * h


def _cumulative(p: Profile, z: float) -> float:
    R, H = p.radius, p.height
    if p.kind == "cone":
        return math.pi * R * R * H / 3.0 * (1.0 - (1.0 - z / H) ** 3)
    if p.kind == "cylinder":
        return math.pi * R * R * z
    return math.pi * R * R * (z - z * z / (2.0 * H))


def bin_volume(p: Profile, a: float, b: float) -> float:
    """Oracle volume of the solid between heights ``a`` and ``b``.

    Analytic kinds use their antiderivative, arranged to avoid cancellation
    on short windows.  Tabulated profiles use the midpoint rule at the oracle
    panel density (never fewer than ``MIN_WINDOW_PANELS``).
    """
    a = _check_z(p, float(a))
    b = _check_z(p, float(b))
    if b < a:
        raise DomainError(f"window [{a}, {b}] is reversed")
    if a == b:
        return 0.0
    R, H = p.radius, p.height
    w = b - a
    if p.kind == "cone":
        u, v = 1.0 - a / H, 1.0 - b / H
        return math.pi * R * R * w * (u * u + u * v + v * v) / 3.0
    if p.kind == "cylinder":
        return math.pi * R * R * w
    if p.kind == "paraboloid":
        return math.pi * R * R * w * (1.0 - (a + b) / (2.0 * H))
    panels = max(MIN_WINDOW_PANELS, round(ORACLE_PANELS * w / H))
    return midpoint_volume(p, a, b, panels)


def oracle_volume(p: Profile) -> float:
    """Ground-truth volume: closed form for analytic kinds, fine quadrature otherwise."""
    if p.kind == "tabulated":
        return midpoint_volume(p)
    return _cumulative(p, p.height)
