"""Per-sense observable streams derived from a trajectory and a scene.

A trajectory projects into three independent streams:

- :class:`OpticalStream` — what vision alone can measure about a fixed
  object: the unit bearing direction, the angle ``alpha`` between the
  object direction and the heading, its rate, the signed planar bearing
  rate ``theta_dot`` and the 3D rotation norm ``q_norm``. All of these
  are invariant under uniform scaling of the scene.
- :class:`InertialStream` — what the moving body measures about itself:
  velocity, speed and the specific force (gravity minus acceleration).
- :class:`SupportStream` — the contact normal of the surface of support.

Angular conventions: the bearing unit vector points from the object
toward the point of observation; ``alpha`` is in [0, pi]; ``theta_dot``
is signed about the motion plane's oriented normal and only defined for
planar trajectories, while ``q_norm`` covers full 3D motion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .errors import DegenerateGeometryError, GridAlignmentError, InputShapeError
from .generators import PlaybackPair
from .kinematics import (ANALYTIC, KinematicTrack, ScenePoint, TimeGrid,
                         differentiate)

# validity thresholds; overridable per call
EPS_SPEED = 1e-6     # m/s below which the heading (and alpha) is undefined
EPS_RATE = 1e-6      # rad/s below which angular rates cannot be inverted
MIN_SEPARATION = 1e-9  # m; object closer than this to the track is degenerate

DEFAULT_GRAVITY = np.array([0.0, 0.0, -9.81])


@dataclass(frozen=True)
class OpticalStream:
    """Optical bearing kinematics of a fixed object seen from a track."""

    grid: TimeGrid
    bearing: np.ndarray        # (n, 3) unit vectors, object -> observer
    alpha: np.ndarray          # (n,) rad, NaN where the heading is undefined
    alpha_dot: np.ndarray      # (n,) rad/s, finite-differenced from alpha
    theta_dot: np.ndarray      # (n,) rad/s signed, NaN unless motion is planar
    q_norm: np.ndarray         # (n,) rad/s, norm of bearing x d(bearing)/dt
    alpha_valid: np.ndarray
    alpha_dot_valid: np.ndarray
    theta_dot_valid: np.ndarray
    is_planar: bool
    plane_normal: Optional[np.ndarray]
    eps_speed: float = EPS_SPEED
    eps_rate: float = EPS_RATE


@dataclass(frozen=True)
class InertialStream:
    """Non-optical kinematics of the moving body."""

    grid: TimeGrid
    velocity: np.ndarray         # (n, 3) m/s
    speed: np.ndarray            # (n,) m/s
    specific_force: np.ndarray   # (n, 3) m/s^2, gravity - acceleration
    gravity: np.ndarray          # (3,) m/s^2


@dataclass(frozen=True)
class SupportStream:
    """Unit normal of the surface of support, per sample."""

    grid: TimeGrid
    normal: np.ndarray  # (n, 3) unit vectors

    def __post_init__(self):
        normal = np.asarray(self.normal, dtype=np.float64)
        if normal.shape != (self.grid.n_samples, 3):
            raise InputShapeError(
                f"normal has shape {normal.shape}, expected ({self.grid.n_samples}, 3)")
        norms = np.linalg.norm(normal, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise InputShapeError("support normals must have unit norm (tol 1e-9)")
        object.__setattr__(self, "normal", normal)


def require_same_grid(*grids: TimeGrid) -> None:
    first = grids[0]
    for g in grids[1:]:
        if not first.matches(g):
            raise GridAlignmentError(
                f"time grids differ: {first} vs {g}")


def _fit_plane(points: np.ndarray) -> Tuple[bool, np.ndarray]:
    """Least-squares plane through the points; planar iff the residual is tiny.

    Returns (is_planar, unit normal). The normal sign is fixed so its
    largest-magnitude component is positive, which keeps the theta_dot
    sign convention deterministic.
    """
    centered = points - points.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    extent = s[0]
    residual = s[-1]
    normal = vt[-1]
    pivot = np.argmax(np.abs(normal))
    if normal[pivot] < 0:
        normal = -normal
    if extent == 0.0:
        return True, normal
    return bool(residual <= 1e-9 * extent), normal


def project_optics(track: KinematicTrack, scene_object: ScenePoint,
                   eps_speed: float = EPS_SPEED,
                   eps_rate: float = EPS_RATE) -> OpticalStream:
    """Project a trajectory into the optical stream of a fixed object.

    For analytic tracks the bearing derivative comes from the chain
    rule ``d(i)/dt = (v - i (i.v)) / |r|`` on the closed-form velocity,
    giving machine-precision angular kinematics. For differentiated or
    ingested tracks only samples exist, so the bearing series itself is
    finite-differenced and the angular rates carry O(dt^2) error.
    ``alpha_dot`` is always finite-differenced from the alpha series:
    it models what an observer of the sampled angle could measure.
    """
    rel = track.position - scene_object.position[None, :]
    dist_sq = np.einsum("ij,ij->i", rel, rel)
    if np.any(dist_sq <= MIN_SEPARATION ** 2):
        raise DegenerateGeometryError(
            f"object {scene_object.label!r} coincides with the trajectory "
            f"(min separation {np.sqrt(dist_sq.min()):.3g} m)")

    dist, bearing, didt, omega, q_norm, speed, alpha = kernels.bearing_kinematics(
        rel, track.velocity, eps_speed)
    if track.provenance != ANALYTIC:
        didt = differentiate(bearing, track.grid)
        omega = np.cross(bearing, didt)
        q_norm = np.linalg.norm(omega, axis=1)

    alpha_valid = speed > eps_speed
    alpha_dot = differentiate(alpha, track.grid)
    alpha_dot_valid = np.isfinite(alpha_dot) & alpha_valid

    points = np.vstack([track.position, scene_object.position[None, :]])
    is_planar, normal = _fit_plane(points)
    if is_planar:
        theta_dot = omega @ normal
        theta_dot_valid = np.ones(track.grid.n_samples, dtype=bool)
        plane_normal = normal
    else:
        theta_dot = np.full(track.grid.n_samples, np.nan)
        theta_dot_valid = np.zeros(track.grid.n_samples, dtype=bool)
        plane_normal = None

    return OpticalStream(
        grid=track.grid, bearing=bearing, alpha=alpha, alpha_dot=alpha_dot,
        theta_dot=theta_dot, q_norm=q_norm, alpha_valid=alpha_valid,
        alpha_dot_valid=alpha_dot_valid, theta_dot_valid=theta_dot_valid,
        is_planar=is_planar, plane_normal=plane_normal,
        eps_speed=eps_speed, eps_rate=eps_rate)


def project_inertial(track: KinematicTrack,
                     gravity: np.ndarray = DEFAULT_GRAVITY) -> InertialStream:
    """Project a trajectory into the body's inertial stream."""
    gravity = np.asarray(gravity, dtype=np.float64).reshape(3)
    speed = np.linalg.norm(track.velocity, axis=1)
    specific_force = gravity[None, :] - track.acceleration
    return InertialStream(grid=track.grid, velocity=track.velocity,
                          speed=speed, specific_force=specific_force,
                          gravity=gravity)


def replay_optics(pair: PlaybackPair, scene_object: ScenePoint,
                  gravity: np.ndarray = DEFAULT_GRAVITY,
                  eps_speed: float = EPS_SPEED,
                  eps_rate: float = EPS_RATE) -> Tuple[OpticalStream, InertialStream]:
    """Observable streams of a body watching a replay of recorded motion.

    Optics come from the recorded (live) track; inertial quantities come
    from the stationary body. This is the mismatched pairing that
    destroys the cross-sense distance parameter.
    """
    optics = project_optics(pair.live, scene_object,
                            eps_speed=eps_speed, eps_rate=eps_rate)
    inertial = project_inertial(pair.stationary, gravity=gravity)
    return optics, inertial


def constant_support(grid: TimeGrid, normal=(0.0, 0.0, 1.0)) -> SupportStream:
    """Support stream with one fixed surface normal (normalized here)."""
    n = np.asarray(normal, dtype=np.float64).reshape(3)
    length = np.linalg.norm(n)
    if length == 0:
        raise InputShapeError("support normal must be nonzero")
    return SupportStream(grid=grid, normal=np.tile(n / length, (grid.n_samples, 1)))


def tilted_support(grid: TimeGrid, tilt_rad: float, axis=(0.0, 1.0, 0.0)) -> SupportStream:
    """Level support normal tilted by ``tilt_rad`` about ``axis`` (Rodrigues)."""
    k = np.asarray(axis, dtype=np.float64).reshape(3)
    k = k / np.linalg.norm(k)
    v = np.array([0.0, 0.0, 1.0])
    c, s = np.cos(tilt_rad), np.sin(tilt_rad)
    rotated = v * c + np.cross(k, v) * s + k * np.dot(k, v) * (1.0 - c)
    return constant_support(grid, rotated)
