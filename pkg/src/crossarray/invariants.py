"""Cross-sense invariants: distance estimators and the slope of the ground.

Distance to a fixed object is not recoverable from optics alone: every
optical angle is unchanged when the whole scene is scaled. Combining
optical angles with the body's own speed V closes the gap. Four
estimators are implemented, named for the motion regime they assume:

- ``estimate_distance_1d``:  D = V sin(alpha) / |alpha_dot|
  (heading fixed; alpha_dot is the rate of the angle between object
  direction and heading)
- ``estimate_distance_2d``:  D = V sin(alpha) / |theta_dot|
  (planar motion; theta_dot is the signed bearing rate in the plane)
- ``estimate_distance_3d``:  D = V |sin(alpha)| / q_norm
  (general 3D motion; q_norm is the norm of the bearing rotation)
- ``estimate_distance_tangential``:  D = V / q_norm
  (exact when motion is tangential to an object-centered sphere, i.e.
  alpha = pi/2; elsewhere it overestimates by 1/|sin(alpha)|)

``optics_only_ratio`` is the scale-blind remainder |sin(alpha)|/q_norm:
it equals D/V, a time, and demonstrates that no distance in meters
exists in the optical stream by itself.

``slope_invariant`` is the orientation counterpart: the angle between
the direction of balance (contraparallel to the specific force) and the
support surface normal. On level ground at rest it is zero; it reports
ground slope, and it tilts under horizontal acceleration even when the
ground does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegimeError
from .kinematics import KinematicTrack, ScenePoint, TimeGrid
from .observables import (DEFAULT_GRAVITY, InertialStream, OpticalStream,
                          SupportStream, project_inertial, project_optics,
                          require_same_grid)

EPS_FORCE = 1e-6  # m/s^2; below this the specific force has no direction


@dataclass(frozen=True)
class DistanceEstimateSeries:
    """Per-sample distance estimates from each model, with validity flags."""

    grid: TimeGrid
    d_1d: np.ndarray
    d_2d: np.ndarray
    d_3d: np.ndarray
    d_tan: np.ndarray
    valid_1d: np.ndarray
    valid_2d: np.ndarray
    valid_3d: np.ndarray
    valid_tan: np.ndarray
    d_true: np.ndarray
    scene_object: ScenePoint

    def by_name(self):
        """(value, validity) pairs keyed by estimator column name."""
        return {
            "d_1d": (self.d_1d, self.valid_1d),
            "d_2d": (self.d_2d, self.valid_2d),
            "d_3d": (self.d_3d, self.valid_3d),
            "d_tan": (self.d_tan, self.valid_tan),
        }


@dataclass(frozen=True)
class SlopeEstimate:
    """Angle between the direction of balance and the support normal."""

    grid: TimeGrid
    slope_angle: np.ndarray            # (n,) rad in [0, pi], NaN where degenerate
    direction_of_balance: np.ndarray   # (n, 3) unit vectors, NaN where degenerate
    degenerate: np.ndarray             # (n,) bool, True in free fall


def _base_validity(optics: OpticalStream, inertial: InertialStream) -> np.ndarray:
    return inertial.speed > optics.eps_speed


def estimate_distance_1d(optics: OpticalStream, inertial: InertialStream) -> np.ndarray:
    """Distance from the alpha-rate model; NaN where invalid."""
    require_same_grid(optics.grid, inertial.grid)
    valid = estimator_validity(optics, inertial)["d_1d"]
    with np.errstate(invalid="ignore", divide="ignore"):
        d = inertial.speed * np.sin(optics.alpha) / np.abs(optics.alpha_dot)
    return np.where(valid, d, np.nan)


def estimate_distance_2d(optics: OpticalStream, inertial: InertialStream) -> np.ndarray:
    """Distance from the signed planar bearing rate; planar motion only."""
    require_same_grid(optics.grid, inertial.grid)
    if not optics.is_planar:
        raise RegimeError("the planar distance model needs planar motion; "
                          "use the 3D model for general trajectories")
    valid = estimator_validity(optics, inertial)["d_2d"]
    with np.errstate(invalid="ignore", divide="ignore"):
        d = inertial.speed * np.sin(optics.alpha) / np.abs(optics.theta_dot)
    return np.where(valid, d, np.nan)


def estimate_distance_3d(optics: OpticalStream, inertial: InertialStream) -> np.ndarray:
    """Distance from the 3D bearing rotation norm; NaN where invalid.

    Where the body is still but the bearing rotates anyway (a replayed
    recording), the numerator V |sin alpha| is zero regardless of the
    undefined alpha, so the value is reported as 0 with the validity
    flag off: flow without motion is consistent with no positive
    distance at all.
    """
    require_same_grid(optics.grid, inertial.grid)
    moving = _base_validity(optics, inertial)
    resolvable = optics.q_norm >= optics.eps_rate
    valid = moving & resolvable
    with np.errstate(invalid="ignore", divide="ignore"):
        d = inertial.speed * np.abs(np.sin(optics.alpha)) / optics.q_norm
    d = np.where(~moving & resolvable, 0.0, d)
    return np.where(valid | (~moving & resolvable), d, np.nan)


def estimate_distance_tangential(optics: OpticalStream,
                                 inertial: InertialStream) -> np.ndarray:
    """Distance from speed over rotation norm; exact for tangential motion."""
    require_same_grid(optics.grid, inertial.grid)
    valid = estimator_validity(optics, inertial)["d_tan"]
    with np.errstate(invalid="ignore", divide="ignore"):
        d = inertial.speed / optics.q_norm
    return np.where(valid, d, np.nan)


def estimator_validity(optics: OpticalStream, inertial: InertialStream):
    """Validity masks for all four estimators, keyed like ``by_name``."""
    moving = _base_validity(optics, inertial)
    resolvable = optics.q_norm >= optics.eps_rate
    # NaN rates compare False against the threshold, masking themselves out
    with np.errstate(invalid="ignore"):
        rate_1d = np.abs(optics.alpha_dot) >= optics.eps_rate
        rate_2d = np.abs(optics.theta_dot) >= optics.eps_rate
    return {
        "d_1d": moving & optics.alpha_dot_valid & rate_1d,
        "d_2d": moving & optics.theta_dot_valid & rate_2d,
        "d_3d": moving & resolvable,
        "d_tan": moving & resolvable,
    }


def estimate_all(optics: OpticalStream, inertial: InertialStream,
                 track: KinematicTrack,
                 scene_object: ScenePoint) -> DistanceEstimateSeries:
    """Run every estimator and attach the ground-truth distance series.

    For non-planar motion the planar model is not applicable; its
    column is all-NaN with validity off rather than an error, so one
    series can describe any scenario.
    """
    require_same_grid(optics.grid, inertial.grid, track.grid)
    n = track.grid.n_samples
    validity = estimator_validity(optics, inertial)
    d_1d = estimate_distance_1d(optics, inertial)
    if optics.is_planar:
        d_2d = estimate_distance_2d(optics, inertial)
    else:
        d_2d = np.full(n, np.nan)
    d_3d = estimate_distance_3d(optics, inertial)
    d_tan = estimate_distance_tangential(optics, inertial)
    d_true = np.linalg.norm(track.position - scene_object.position[None, :], axis=1)
    return DistanceEstimateSeries(
        grid=track.grid, d_1d=d_1d, d_2d=d_2d, d_3d=d_3d, d_tan=d_tan,
        valid_1d=validity["d_1d"], valid_2d=validity["d_2d"],
        valid_3d=validity["d_3d"], valid_tan=validity["d_tan"],
        d_true=d_true, scene_object=scene_object)


def project_and_estimate(track: KinematicTrack, scene_object: ScenePoint,
                         gravity: np.ndarray = DEFAULT_GRAVITY):
    """Full pipeline for one scenario: (optics, inertial, estimates)."""
    optics = project_optics(track, scene_object)
    inertial = project_inertial(track, gravity)
    return optics, inertial, estimate_all(optics, inertial, track, scene_object)


def optics_only_ratio(optics: OpticalStream) -> np.ndarray:
    """The scale-blind optical remainder |sin alpha| / q_norm, in seconds.

    Equals D/V wherever defined. Dimensionally a time, not a length:
    whatever is done with optical angles alone, the meters never appear.
    NaN where alpha is undefined or the rotation is below threshold.
    """
    valid = optics.alpha_valid & (optics.q_norm >= optics.eps_rate)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.abs(np.sin(optics.alpha)) / optics.q_norm
    return np.where(valid, ratio, np.nan)


def slope_invariant(inertial: InertialStream, support: SupportStream) -> SlopeEstimate:
    """Angle between the direction of balance and the support normal.

    The direction of balance is contraparallel to the specific force.
    Samples in free fall (|specific force| below ``EPS_FORCE``) have no
    defined direction and are flagged degenerate.
    """
    require_same_grid(inertial.grid, support.grid)
    force = inertial.specific_force
    magnitude = np.linalg.norm(force, axis=1)
    degenerate = magnitude < EPS_FORCE
    with np.errstate(invalid="ignore", divide="ignore"):
        dob = -force / magnitude[:, None]
    dob = np.where(degenerate[:, None], np.nan, dob)
    # atan2 of cross/dot is well conditioned at both small and large angles
    cross = np.cross(dob, support.normal)
    dot = np.einsum("ij,ij->i", dob, support.normal)
    angle = np.arctan2(np.linalg.norm(cross, axis=1), dot)
    angle = np.where(degenerate, np.nan, angle)
    return SlopeEstimate(grid=inertial.grid, slope_angle=angle,
                         direction_of_balance=dob, degenerate=degenerate)
