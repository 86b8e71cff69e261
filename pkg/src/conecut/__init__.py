"""Cylinder-stack bounds, Wilson averaging and pair-of-planes cutters for solids of revolution."""

from .errors import (
    CoarseGrainError,
    ConecutError,
    DirectionMismatchError,
    DomainError,
    NonMonotoneError,
    PastingError,
    ProfileError,
)
from .profiles import Profile, area, bin_volume, load_table, make_profile, oracle_volume, radius
from .qcovector import QCovector, compose, density_limit, plane_areas, slice_volume
from .rg import (
    FixedPointReport,
    RenormalizedSeries,
    coarse_grain,
    invariance_distance,
    iterate_to_fixed_point,
    renormalize_to_scale,
    renormalized_series,
)
from .ziggurat import Slab, Ziggurat, build_ziggurat, democritus_gap, gap, total_volume

__version__ = "0.1.0"
