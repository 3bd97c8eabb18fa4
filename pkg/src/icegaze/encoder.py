"""Interpersonal calibration and 9-region encoding.

Calibration finds the dominant gaze cluster of a recording without any
per-person geometry: a density clustering sweep lowers the neighborhood
radius from a fixed start value until the trace separates into at least
two labels whose size ratio is acceptable. The axis-aligned bounding box
of the largest real cluster becomes the region of primary visual
engagement (RVE); the remaining eight regions tile the plane around it.

Region codes are row-major over the 3x3 grid::

    1 2 3
    4 5 6
    7 8 9

with 5 the RVE itself. Under the default ``y_down`` axis convention
(vertical gaze angle grows downward, as in image coordinates) region 8
is "below the engagement region", i.e. looking down.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import NOISE, ClusterLabeling, DbscanParams, dbscan, pairwise_sq_dists
from .errors import AllMissing, EmptyPrefix, LengthMismatch, SingleClusterFail
from .signal_io import MISSING, EncodedTrace, GazeTrace

#: Largest point count for which the search caches the full squared
#: distance matrix between sweep steps (memory: 8 * n^2 bytes).
DIST_CACHE_MAX = 6000

AXIS_CONVENTIONS = ("y_down", "y_up")


@dataclass(frozen=True)
class IceConfig:
    """Knobs of the calibration sweep and encoding.

    The defaults implement the standard sweep: radius from 1.0 down in
    steps of 0.01, a 0.001 fallback when the grid is exhausted, a 10x
    dominance cap between the two largest labels, and a core-point
    threshold of 1% of the calibration frames.
    """

    confidence_threshold: float = 0.9
    epsilon_start: float = 1.0
    epsilon_step: float = 0.01
    epsilon_floor_fallback: float = 0.001
    dominance_ratio: float = 10.0
    min_pts_fraction: float = 0.01
    axis_convention: str = "y_down"

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold < 1.0:
            raise ValueError("confidence_threshold must lie in [0, 1)")
        if not 0 < self.epsilon_step <= self.epsilon_start:
            raise ValueError("need 0 < epsilon_step <= epsilon_start")
        if not 0 < self.epsilon_floor_fallback < self.epsilon_step:
            raise ValueError("fallback radius must sit below the grid")
        if not self.dominance_ratio >= 1:
            raise ValueError("dominance_ratio must be >= 1")
        if not 0 < self.min_pts_fraction <= 1:
            raise ValueError("min_pts_fraction must lie in (0, 1]")
        if self.axis_convention not in AXIS_CONVENTIONS:
            raise ValueError(f"axis_convention must be one of {AXIS_CONVENTIONS}")

    def to_dict(self) -> dict:
        return {
            "confidence_threshold": self.confidence_threshold,
            "epsilon_start": self.epsilon_start,
            "epsilon_step": self.epsilon_step,
            "epsilon_floor_fallback": self.epsilon_floor_fallback,
            "dominance_ratio": self.dominance_ratio,
            "min_pts_fraction": self.min_pts_fraction,
            "axis_convention": self.axis_convention,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IceConfig":
        return cls(**data)


@dataclass(frozen=True)
class RveBox:
    """Axis-aligned region of primary visual engagement, in radians."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("box must have min <= max on both axes")

    def to_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max,
                "y_min": self.y_min, "y_max": self.y_max}

    @classmethod
    def from_dict(cls, data: dict) -> "RveBox":
        return cls(**data)


@dataclass(frozen=True)
class IceEncoder:
    """A fitted per-recording encoder: the RVE plus fit provenance."""

    rve: RveBox
    epsilon: float
    min_pts: int
    config: IceConfig
    calibration_frame_count: int

    def to_dict(self) -> dict:
        return {
            "rve": self.rve.to_dict(),
            "epsilon": self.epsilon,
            "min_pts": self.min_pts,
            "config": self.config.to_dict(),
            "calibration_frame_count": self.calibration_frame_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IceEncoder":
        return cls(
            rve=RveBox.from_dict(data["rve"]),
            epsilon=data["epsilon"],
            min_pts=data["min_pts"],
            config=IceConfig.from_dict(data["config"]),
            calibration_frame_count=data["calibration_frame_count"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "IceEncoder":
        return cls.from_dict(json.loads(text))


def select_min_pts(n_frames: int, fraction: float = 0.01) -> int:
    """Core-point threshold: floor(n * fraction), never below 1."""
    return max(math.floor(n_frames * fraction), 1)


def _ranked_sizes(labeling: ClusterLabeling):
    """Labels sorted by (size desc, label asc); noise ranks like any label."""
    counts = labeling.label_counts()
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def _acceptable(labeling: ClusterLabeling, dominance_ratio: float) -> bool:
    ranked = _ranked_sizes(labeling)
    if len(ranked) < 2:
        return False
    (top_label, top_size), (_, second_size) = ranked[0], ranked[1]
    if top_size > dominance_ratio * second_size:
        return False
    return top_label != NOISE


def search_epsilon(points: np.ndarray, config: IceConfig = IceConfig()):
    """Find the largest workable neighborhood radius for ``points``.

    Walks the radius grid {epsilon_start - k * epsilon_step} downward
    (the grid is generated by integer step counts, so no float drift
    accumulates) and accepts the first radius whose labeling has at
    least two distinct labels, a top-two size ratio at most
    ``dominance_ratio``, and a non-noise largest label. If the whole
    grid is rejected, one retry runs at ``epsilon_floor_fallback``; a
    labeling with two or more distinct labels is then accepted as-is.

    Returns:
        (epsilon, ClusterLabeling) for the accepted radius.

    Raises:
        SingleClusterFail: No radius produced more than one label.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    min_pts = select_min_pts(n, config.min_pts_fraction)
    sq = pairwise_sq_dists(pts) if n <= DIST_CACHE_MAX else None

    steps = round(config.epsilon_start / config.epsilon_step)
    for k in range(steps):
        eps = (steps - k) * config.epsilon_step
        labeling = dbscan(pts, DbscanParams(eps, min_pts), _sq_dists=sq)
        if _acceptable(labeling, config.dominance_ratio):
            return eps, labeling

    eps = config.epsilon_floor_fallback
    labeling = dbscan(pts, DbscanParams(eps, min_pts), _sq_dists=sq)
    if labeling.distinct_labels() > 1:
        return eps, labeling
    raise SingleClusterFail("cannot find more than 1 cluster")


def _largest_cluster_box(points: np.ndarray, labeling: ClusterLabeling) -> RveBox:
    sizes = labeling.cluster_sizes()
    largest = int(np.argmax(sizes))  # ties: earliest-discovered cluster
    members = points[labeling.labels == largest]
    return RveBox(
        x_min=float(members[:, 0].min()),
        x_max=float(members[:, 0].max()),
        y_min=float(members[:, 1].min()),
        y_max=float(members[:, 1].max()),
    )


def fit_encoder(trace: GazeTrace, config: IceConfig = IceConfig()) -> IceEncoder:
    """Calibrate an encoder on a confidence-filtered trace.

    The trace is expected to contain only frames that survived the
    confidence filter; every frame participates in clustering. The RVE
    is the bounding box (min/max raw gaze per axis) of the members of
    the largest non-noise cluster at the accepted radius.

    Raises:
        SingleClusterFail: The radius search found no second label.
    """
    points = trace.points()
    epsilon, labeling = search_epsilon(points, config)
    return IceEncoder(
        rve=_largest_cluster_box(points, labeling),
        epsilon=epsilon,
        min_pts=select_min_pts(len(trace), config.min_pts_fraction),
        config=config,
        calibration_frame_count=len(trace),
    )


def fit_encoder_prefix(trace: GazeTrace, prefix_seconds: float,
                       config: IceConfig = IceConfig()) -> IceEncoder:
    """Calibrate on the leading ``prefix_seconds`` of the trace only.

    Clustering sees frames whose timestamp falls within the first
    ``prefix_seconds`` after the trace start; the returned encoder is
    then applicable to the whole trace (or any other trace from the
    same pairing).

    Raises:
        EmptyPrefix: No frames fall inside the prefix window.
        SingleClusterFail: The prefix has no second label at any radius.
    """
    if not prefix_seconds > 0:
        raise EmptyPrefix("prefix_seconds must be positive")
    inside = trace.timestamps < trace.timestamps[0] + prefix_seconds
    if not np.any(inside):
        raise EmptyPrefix("no frames inside the calibration prefix")
    prefix = GazeTrace(
        timestamps=trace.timestamps[inside],
        gaze_x=trace.gaze_x[inside],
        gaze_y=trace.gaze_y[inside],
        confidence=trace.confidence[inside],
        nominal_fps=trace.nominal_fps,
        index=trace.index[inside],
    )
    return fit_encoder(prefix, config)


def region_codes(gaze_x: np.ndarray, gaze_y: np.ndarray, box: RveBox,
                 axis_convention: str = "y_down") -> np.ndarray:
    """Region code 1..9 of each (x, y) pair relative to ``box``.

    Column index: 0 left of the box, 1 inside [x_min, x_max] (closed on
    both edges), 2 right of it. Row index follows the axis convention;
    under ``y_down`` row 0 is y < y_min (up) and row 2 is y > y_max
    (down), under ``y_up`` the comparisons flip so code 8 still means
    "below the engagement region". Code = 3 * row + column + 1.
    """
    if axis_convention not in AXIS_CONVENTIONS:
        raise ValueError(f"axis_convention must be one of {AXIS_CONVENTIONS}")
    x = np.asarray(gaze_x, dtype=float)
    y = np.asarray(gaze_y, dtype=float)
    col = np.where(x < box.x_min, 0, np.where(x <= box.x_max, 1, 2))
    if axis_convention == "y_down":
        row = np.where(y < box.y_min, 0, np.where(y <= box.y_max, 1, 2))
    else:
        row = np.where(y > box.y_max, 0, np.where(y >= box.y_min, 1, 2))
    return 3 * row + col + 1


def encode(encoder: IceEncoder, trace: GazeTrace,
           missing_mask: np.ndarray | None = None) -> EncodedTrace:
    """Map every frame of ``trace`` to a region code 1..9 (or missing).

    Frames flagged in ``missing_mask`` (aligned with ``trace``, True
    where the confidence filter removed a frame) come out as missing;
    everything else goes through :func:`region_codes` against the
    fitted engagement box.
    """
    if missing_mask is None:
        missing_mask = np.zeros(len(trace), dtype=bool)
    else:
        missing_mask = np.asarray(missing_mask, dtype=bool)
        if missing_mask.shape != (len(trace),):
            raise LengthMismatch("missing_mask must align with the trace")

    regions = region_codes(trace.gaze_x, trace.gaze_y, encoder.rve,
                           encoder.config.axis_convention)
    regions[missing_mask] = MISSING
    return EncodedTrace(timestamps=trace.timestamps.copy(), regions=regions)


@dataclass(frozen=True)
class RegionHistogram:
    """Distribution of an encoded trace over the nine regions.

    ``counts[i]`` holds the frame count of region i+1; fractions are
    taken over non-missing frames only.
    """

    counts: np.ndarray
    n_missing: int
    fractions: np.ndarray = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=int)
        if counts.shape != (9,):
            raise ValueError("counts must cover regions 1..9")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "fractions", counts / counts.sum())

    def fraction_of(self, region: int) -> float:
        if not 1 <= region <= 9:
            raise ValueError("region must lie in 1..9")
        return float(self.fractions[region - 1])

    @property
    def on_rve_fraction(self) -> float:
        """Share of non-missing frames inside the engagement region."""
        return self.fraction_of(5)


def region_histogram(encoded: EncodedTrace) -> RegionHistogram:
    """Count regions 1..9 over the non-missing frames of ``encoded``.

    Raises:
        AllMissing: Every frame is missing.
    """
    present = encoded.regions[encoded.regions != MISSING]
    if present.size == 0:
        raise AllMissing("encoded trace has no non-missing frames")
    counts = np.bincount(present, minlength=10)[1:]
    return RegionHistogram(counts=counts,
                           n_missing=int(len(encoded) - present.size))
