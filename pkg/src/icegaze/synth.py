"""Synthetic dyadic gaze scenarios with known ground truth.

The generator plants a dominant "partner" gaze cluster, optional
secondary clusters (props, notes, looking away), and uniform background
noise, then walks through them in dwell runs: the active component is
held for a geometrically distributed number of frames (mean
``dwell_mean_seconds``) before redrawing, which mimics fixation behavior
instead of frame-i.i.d. jumping. Because run lengths are independent of
the component, long-run frame fractions converge to the (normalized)
component weights.

Randomness comes from ``numpy.random.default_rng`` (the PCG64 generator,
stable across platforms for a fixed seed). Draw order is fixed:
component runs, then raw positions, then measurement noise, then
confidence values, then the tracker pre-roll and tracker noise; scripts
that replay a seed therefore reproduce traces bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np

from .encoder import RveBox, region_codes
from .errors import InvalidSpec
from .signal_io import GazeTrace, GroundTruthTrace

#: Planted engagement box half-width, in units of the partner spread.
PLANTED_BOX_SIGMAS = 3.0


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of one synthetic recording.

    Component fractions (partner, each secondary, uniform noise) are
    normalized by their total, so specs that sum to 1 are taken at face
    value. ``planted_lag_seconds`` shifts the paired tracker recording:
    the tracker starts that much earlier than the gaze recording.
    """

    duration_seconds: float = 360.0
    fps: float = 15.0
    partner_fraction: float = 0.8
    partner_center: tuple = (0.0, 0.0)
    partner_spread: float = 0.05
    secondary_clusters: tuple = (((0.4, 0.4), 0.05, 0.15),)
    uniform_noise_fraction: float = 0.05
    noise_half_width: float = 0.7
    measurement_noise_sigma: float = 0.01
    low_confidence_fraction: float = 0.05
    dwell_mean_seconds: float = 0.5
    planted_lag_seconds: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not self.duration_seconds > 0:
            raise InvalidSpec("duration_seconds must be positive")
        if not self.fps > 0:
            raise InvalidSpec("fps must be positive")
        fractions = [self.partner_fraction, self.uniform_noise_fraction]
        fractions += [f for _, _, f in self.secondary_clusters]
        if any(f < 0 for f in fractions):
            raise InvalidSpec("component fractions must be non-negative")
        total = sum(fractions)
        if total <= 0:
            raise InvalidSpec("at least one component fraction must be positive")
        if total > 1.0 + 1e-9:
            raise InvalidSpec("component fractions must sum to at most 1")
        if self.partner_spread < 0 or any(s < 0 for _, s, _ in self.secondary_clusters):
            raise InvalidSpec("spreads must be non-negative")
        if not self.noise_half_width > 0:
            raise InvalidSpec("noise_half_width must be positive")
        if not 0 <= self.measurement_noise_sigma:
            raise InvalidSpec("measurement_noise_sigma must be non-negative")
        if not 0 <= self.low_confidence_fraction < 1:
            raise InvalidSpec("low_confidence_fraction must lie in [0, 1)")
        if not self.dwell_mean_seconds > 0:
            raise InvalidSpec("dwell_mean_seconds must be positive")
        if self.planted_lag_seconds < 0:
            raise InvalidSpec("planted_lag_seconds must be non-negative")

    @property
    def n_frames(self) -> int:
        return max(1, round(self.duration_seconds * self.fps))

    def component_weights(self) -> np.ndarray:
        """Normalized weights: partner, secondaries..., uniform noise."""
        raw = [self.partner_fraction]
        raw += [f for _, _, f in self.secondary_clusters]
        raw.append(self.uniform_noise_fraction)
        raw = np.array(raw, dtype=float)
        return raw / raw.sum()

    def planted_rve(self) -> RveBox:
        """The engagement box the generator considers true: center +/- 3 sigma."""
        cx, cy = self.partner_center
        half = PLANTED_BOX_SIGMAS * self.partner_spread
        return RveBox(x_min=cx - half, x_max=cx + half,
                      y_min=cy - half, y_max=cy + half)

    def to_dict(self) -> dict:
        return {
            "duration_seconds": self.duration_seconds,
            "fps": self.fps,
            "partner_fraction": self.partner_fraction,
            "partner_center": list(self.partner_center),
            "partner_spread": self.partner_spread,
            "secondary_clusters": [
                [list(center), spread, fraction]
                for center, spread, fraction in self.secondary_clusters
            ],
            "uniform_noise_fraction": self.uniform_noise_fraction,
            "noise_half_width": self.noise_half_width,
            "measurement_noise_sigma": self.measurement_noise_sigma,
            "low_confidence_fraction": self.low_confidence_fraction,
            "dwell_mean_seconds": self.dwell_mean_seconds,
            "planted_lag_seconds": self.planted_lag_seconds,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioSpec":
        data = dict(data)
        data["partner_center"] = tuple(data.get("partner_center", (0.0, 0.0)))
        data["secondary_clusters"] = tuple(
            (tuple(center), spread, fraction)
            for center, spread, fraction in data.get("secondary_clusters", ())
        )
        return cls(**data)


@dataclass(eq=False)
class LabeledTrace:
    """A generated trace plus everything the generator knows about it.

    ``truth_component`` holds 0 for partner frames, 1..m for the m
    secondary clusters, and m+1 for uniform noise. ``truth_region`` is
    the 1..9 code of the frame's noiseless position under the planted
    engagement box (y_down convention).
    """

    trace: GazeTrace
    truth_component: np.ndarray
    truth_region: np.ndarray
    low_confidence_mask: np.ndarray
    planted_rve: RveBox
    spec: ScenarioSpec

    @property
    def on_target(self) -> np.ndarray:
        """Boolean truth: the noiseless gaze sits inside the planted box."""
        return self.truth_region == 5


def _dwell_components(rng, spec: ScenarioSpec, n: int) -> np.ndarray:
    weights = spec.component_weights()
    p_switch = min(1.0, 1.0 / (spec.dwell_mean_seconds * spec.fps))
    out = np.empty(n, dtype=int)
    filled = 0
    while filled < n:
        component = rng.choice(weights.size, p=weights)
        run = rng.geometric(p_switch)
        stop = min(filled + run, n)
        out[filled:stop] = component
        filled = stop
    return out


def _component_positions(rng, spec: ScenarioSpec,
                         components: np.ndarray) -> np.ndarray:
    n = components.size
    centers = [np.asarray(spec.partner_center, dtype=float)]
    spreads = [spec.partner_spread]
    for center, spread, _ in spec.secondary_clusters:
        centers.append(np.asarray(center, dtype=float))
        spreads.append(spread)
    noise_id = len(centers)

    normals = rng.standard_normal((n, 2))
    uniforms = rng.uniform(-spec.noise_half_width, spec.noise_half_width, (n, 2))

    positions = np.empty((n, 2), dtype=float)
    for cid in range(noise_id):
        sel = components == cid
        positions[sel] = centers[cid] + spreads[cid] * normals[sel]
    sel = components == noise_id
    positions[sel] = np.asarray(spec.partner_center) + uniforms[sel]
    return positions


def generate_paired(spec: ScenarioSpec):
    """Generate a gaze trace and its lag-shifted tracker recording.

    Returns:
        (LabeledTrace, GroundTruthTrace): the gaze side carries the
        per-frame truth; the tracker side holds xy coordinates of the
        same behavior, prepended with ``planted_lag_seconds`` of
        pre-roll, so tracker sample i + lag*fps matches gaze sample i.
    """
    rng = np.random.default_rng(spec.rng_seed)
    n = spec.n_frames

    components = _dwell_components(rng, spec, n)
    clean = _component_positions(rng, spec, components)
    gaze_noise = rng.standard_normal((n, 2)) * spec.measurement_noise_sigma
    observed = clean + gaze_noise

    confidence_high = rng.uniform(0.95, 1.0, n)
    low_mask = rng.random(n) < spec.low_confidence_fraction
    confidence_low = rng.uniform(0.0, 0.9, n)
    confidence = np.where(low_mask, confidence_low, confidence_high)

    n_pre = round(spec.planted_lag_seconds * spec.fps)
    preroll = (np.asarray(spec.partner_center)
               + rng.uniform(-spec.noise_half_width, spec.noise_half_width,
                             (n_pre, 2)))
    tracker_noise = (rng.standard_normal((n_pre + n, 2))
                     * spec.measurement_noise_sigma)
    tracker_values = np.vstack([preroll, clean]) + tracker_noise

    box = spec.planted_rve()
    trace = GazeTrace(
        timestamps=np.arange(n) / spec.fps,
        gaze_x=observed[:, 0],
        gaze_y=observed[:, 1],
        confidence=confidence,
        nominal_fps=spec.fps,
    )
    labeled = LabeledTrace(
        trace=trace,
        truth_component=components,
        truth_region=region_codes(clean[:, 0], clean[:, 1], box),
        low_confidence_mask=low_mask,
        planted_rve=box,
        spec=spec,
    )
    tracker = GroundTruthTrace(
        timestamps=np.arange(n_pre + n) / spec.fps,
        values=tracker_values,
        kind="xy",
    )
    return labeled, tracker


def generate(spec: ScenarioSpec) -> LabeledTrace:
    """Generate just the labeled gaze trace for ``spec``.

    Identical to the gaze half of :func:`generate_paired` under the
    same seed.
    """
    return generate_paired(spec)[0]
