"""Uniformly sampled trajectories and numerical differentiation.

Everything downstream consumes :class:`KinematicTrack`: a position /
velocity / acceleration series on a shared :class:`TimeGrid`. Units are
SI (meters, seconds, radians) throughout; no unit parameterization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InputShapeError, InsufficientDataError
from . import kernels


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid: sample k lies at ``t0 + k / sample_rate``."""

    sample_rate: float
    n_samples: int
    t0: float = 0.0

    def __post_init__(self):
        if not (self.sample_rate > 0):
            raise InputShapeError(f"sample_rate must be > 0, got {self.sample_rate}")
        if self.n_samples < 2:
            raise InsufficientDataError(f"need at least 2 samples, got {self.n_samples}")

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def duration(self) -> float:
        """Time spanned from the first to the last sample."""
        return (self.n_samples - 1) / self.sample_rate

    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n_samples) / self.sample_rate

    def matches(self, other: "TimeGrid") -> bool:
        return (self.sample_rate == other.sample_rate
                and self.n_samples == other.n_samples
                and self.t0 == other.t0)


@dataclass(frozen=True)
class ScenePoint:
    """A fixed point in the scene whose distance is to be recovered."""

    position: np.ndarray
    label: str = "object"

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=np.float64).reshape(3)
        if not np.all(np.isfinite(pos)):
            raise InputShapeError(f"scene point coordinates must be finite, got {pos}")
        object.__setattr__(self, "position", pos)


# provenance values for KinematicTrack
ANALYTIC = "analytic"
DIFFERENTIATED = "differentiated"
INGESTED = "ingested"


@dataclass(frozen=True)
class KinematicTrack:
    """Trajectory of the moving point of observation.

    ``provenance`` records where the derivative series came from:
    "analytic" for closed-form velocity/acceleration, "differentiated"
    when they were finite-differenced from position, "ingested" for
    externally supplied series.
    """

    grid: TimeGrid
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    provenance: str = ANALYTIC

    def __post_init__(self):
        for name in ("position", "velocity", "acceleration"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (self.grid.n_samples, 3):
                raise InputShapeError(
                    f"{name} has shape {arr.shape}, expected ({self.grid.n_samples}, 3)")
            object.__setattr__(self, name, arr)
        if self.provenance not in (ANALYTIC, DIFFERENTIATED, INGESTED):
            raise InputShapeError(f"unknown provenance {self.provenance!r}")

    def scaled(self, k: float) -> "KinematicTrack":
        """Track with all lengths multiplied by ``k`` (same time grid)."""
        return replace(self, position=self.position * k,
                       velocity=self.velocity * k,
                       acceleration=self.acceleration * k)


def differentiate(series: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """Numerically differentiate a sampled series with respect to time.

    2nd-order central differences at interior samples, 2nd-order
    one-sided stencils at the two endpoints, so the output has the same
    length as the input. Exact for polynomials of degree <= 2; error is
    O(dt^2) otherwise.

    Parameters
    ----------
    series : (n,) or (n, m) array sampled on ``grid``
    grid : TimeGrid with ``n_samples == n`` and ``n >= 3``
    """
    arr = np.asarray(series, dtype=np.float64)
    if arr.shape[0] != grid.n_samples:
        raise InputShapeError(
            f"series length {arr.shape[0]} does not match grid ({grid.n_samples} samples)")
    if grid.n_samples < 3:
        raise InsufficientDataError("differentiation needs at least 3 samples")
    return kernels.diff_central(arr, grid.dt)


def from_positions(grid: TimeGrid, position: np.ndarray,
                   provenance: str = DIFFERENTIATED) -> KinematicTrack:
    """Build a track from positions alone, finite-differencing the rest."""
    position = np.asarray(position, dtype=np.float64)
    velocity = differentiate(position, grid)
    acceleration = differentiate(velocity, grid)
    return KinematicTrack(grid=grid, position=position, velocity=velocity,
                          acceleration=acceleration, provenance=provenance)


def as_differentiated(track: KinematicTrack) -> KinematicTrack:
    """Rebuild a track with finite-differenced derivatives.

    Models data that arrived as raw position samples (e.g. motion
    capture) instead of closed-form kinematics.
    """
    return from_positions(track.grid, track.position)


def resample(track: KinematicTrack, new_rate: float) -> KinematicTrack:
    """Resample a track onto a new rate by linear interpolation of position.

    Velocity and acceleration are re-derived with :func:`differentiate`
    (provenance becomes "differentiated"). The new grid never
    extrapolates past the original final sample.
    """
    if not (new_rate > 0):
        raise InputShapeError(f"new_rate must be > 0, got {new_rate}")
    grid = track.grid
    if grid.n_samples < 2:
        raise InsufficientDataError("resampling needs at least 2 samples")
    # largest grid at new_rate that stays within the original time span
    span_ratio = (grid.n_samples - 1) * new_rate / grid.sample_rate
    n_new = int(np.floor(span_ratio + 1e-9)) + 1
    if n_new < 3:
        raise InsufficientDataError(
            f"resampling to {new_rate} Hz leaves only {n_new} samples")
    new_grid = TimeGrid(sample_rate=new_rate, n_samples=n_new, t0=grid.t0)
    t_old = grid.times()
    t_new = new_grid.times()
    position = np.column_stack([np.interp(t_new, t_old, track.position[:, j])
                                for j in range(3)])
    return from_positions(new_grid, position)
