"""Live-versus-replay decision from optical/inertial cross-consistency.

For a body moving in a rigid scene, bearing rotation and body speed are
locked together: q_norm = V |sin alpha| / D. Two residuals test that
lock without knowing D.

- flow-without-motion: any bearing rotation while the body's speed is
  zero is impossible at finite distance, so the residual is simply
  q_norm wherever V is below threshold.
- scale-inconsistency: for a fixed object the recovered 3D distance
  must stay coherent over short horizons; its sliding-window spread,
  normalized by the window mean, blows up when the optics were not
  produced by this body's motion.

Either residual exceeding its threshold on enough samples yields the
verdict "simulated"; matched streams yield "live"; "indeterminate" is
reserved for streams too short or too empty to decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .invariants import estimate_distance_3d
from .observables import InertialStream, OpticalStream, require_same_grid

VERDICT_LIVE = "live"
VERDICT_SIMULATED = "simulated"
VERDICT_INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class DetectorConfig:
    """Thresholds for both residual rules; defaults are tuned so that
    noise-free matched streams sit exactly at zero residual."""

    flow_q_max: float = 1e-3        # rad/s of rotation tolerated at zero speed
    scale_rel_std_max: float = 0.05  # windowed std/mean of recovered distance
    window_s: float = 0.5
    fire_fraction: float = 0.10      # fraction of samples a rule must claim
    min_samples: int = 10
    min_window_valid: int = 5


@dataclass(frozen=True)
class DetectionReport:
    verdict: str
    rule_fired: str                  # "", "flow-without-motion", "scale-inconsistency"
    residual: np.ndarray             # max of both rules' residuals over thresholds
    residual_flow: np.ndarray        # rad/s; q_norm where the body is still
    residual_scale: np.ndarray       # dimensionless; NaN where unevaluable
    flow_fire_fraction: float
    scale_fire_fraction: Optional[float]  # None when no window was evaluable
    config: DetectorConfig


def detect(optics: OpticalStream, inertial: InertialStream,
           config: DetectorConfig = DetectorConfig()) -> DetectionReport:
    """Decide whether an optical stream was produced by this body's motion."""
    require_same_grid(optics.grid, inertial.grid)
    n = optics.grid.n_samples

    still = inertial.speed < optics.eps_speed
    quiet = optics.q_norm < optics.eps_rate
    residual_flow = np.where(still & ~quiet, optics.q_norm, 0.0)

    d_3d = estimate_distance_3d(optics, inertial)
    valid = ~still & (optics.q_norm >= optics.eps_rate) & np.isfinite(d_3d)
    half_width = max(int(round(config.window_s * optics.grid.sample_rate / 2.0)), 1)
    residual_scale = kernels.windowed_rel_std(
        np.where(valid, d_3d, 0.0), valid, half_width, config.min_window_valid)

    if n < config.min_samples:
        return _report(VERDICT_INDETERMINATE, "", residual_flow, residual_scale,
                       0.0, None, config)

    flow_fire = float(np.count_nonzero(residual_flow > config.flow_q_max)) / n
    evaluable = np.isfinite(residual_scale)
    if np.any(evaluable):
        scale_fire = (float(np.count_nonzero(
            residual_scale[evaluable] > config.scale_rel_std_max))
            / int(np.count_nonzero(evaluable)))
    else:
        scale_fire = None

    if flow_fire >= config.fire_fraction:
        verdict, rule = VERDICT_SIMULATED, "flow-without-motion"
    elif scale_fire is not None and scale_fire >= config.fire_fraction:
        verdict, rule = VERDICT_SIMULATED, "scale-inconsistency"
    elif scale_fire is None and flow_fire == 0.0 and np.all(still | quiet):
        # nothing moved and nothing flowed: a still scene cannot be classified
        verdict, rule = VERDICT_INDETERMINATE, ""
    else:
        verdict, rule = VERDICT_LIVE, ""
    return _report(verdict, rule, residual_flow, residual_scale,
                   flow_fire, scale_fire, config)


def _report(verdict, rule, residual_flow, residual_scale, flow_fire,
            scale_fire, config) -> DetectionReport:
    with np.errstate(invalid="ignore"):
        combined = np.fmax(residual_flow / config.flow_q_max,
                           np.nan_to_num(residual_scale, nan=0.0)
                           / config.scale_rel_std_max)
    return DetectionReport(
        verdict=verdict, rule_fired=rule, residual=combined,
        residual_flow=residual_flow, residual_scale=residual_scale,
        flow_fire_fraction=flow_fire, scale_fire_fraction=scale_fire,
        config=config)


def report_to_json_dict(report: DetectionReport) -> dict:
    """JSON-safe dict of a detection report (NaN residuals become null)."""
    def series(x):
        return [None if not np.isfinite(v) else float(v) for v in x]

    return {
        "verdict": report.verdict,
        "rule_fired": report.rule_fired,
        "flow_fire_fraction": report.flow_fire_fraction,
        "scale_fire_fraction": report.scale_fire_fraction,
        "thresholds": {
            "flow_q_max": report.config.flow_q_max,
            "scale_rel_std_max": report.config.scale_rel_std_max,
            "window_s": report.config.window_s,
            "fire_fraction": report.config.fire_fraction,
        },
        "residual_flow": series(report.residual_flow),
        "residual_scale": series(report.residual_scale),
    }
