"""Gaze trace types and file formats.

This module owns the on-disk formats (gaze CSV, ground-truth CSV, encoded
CSV) and the rate/quality preprocessing that happens before calibration:
confidence filtering and downsampling. Column defaults follow the output
of common video-based gaze extractors (``timestamp``, ``confidence``,
``gaze_angle_x``, ``gaze_angle_y``), with gaze angles in radians relative
to the camera axis.

All trace types are array-backed; per-frame records are materialized on
demand through :meth:`GazeTrace.frames`.
"""

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyTrace, MissingColumn

#: Region code reserved for frames removed by the confidence filter (real
#: regions are 1..9).
MISSING = 0

#: Default mapping from semantic field -> CSV column name.
DEFAULT_COLUMNS = {
    "timestamp": "timestamp",
    "confidence": "confidence",
    "gaze_x": "gaze_angle_x",
    "gaze_y": "gaze_angle_y",
}

#: Relative tolerance for the median frame spacing vs. 1/nominal_fps.
SPACING_TOLERANCE = 0.20


@dataclass(frozen=True)
class GazeFrame:
    """One gaze sample.

    Attributes:
        index: Position of the frame in its source recording.
        timestamp: Seconds from the recording clock.
        gaze_x: Horizontal gaze angle in radians, camera-relative.
        gaze_y: Vertical gaze angle in radians, camera-relative.
        confidence: Extractor confidence in [0, 1].
    """

    index: int
    timestamp: float
    gaze_x: float
    gaze_y: float
    confidence: float


@dataclass(eq=False)
class GazeTrace:
    """A sequence of gaze samples with a nominal frame rate.

    Timestamps must be strictly increasing. A median frame spacing that
    deviates from ``1 / nominal_fps`` by more than 20% triggers a warning
    but is accepted; irregular recordings are common and still usable.
    """

    timestamps: np.ndarray
    gaze_x: np.ndarray
    gaze_y: np.ndarray
    confidence: np.ndarray
    nominal_fps: float
    index: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.gaze_x = np.asarray(self.gaze_x, dtype=float)
        self.gaze_y = np.asarray(self.gaze_y, dtype=float)
        self.confidence = np.asarray(self.confidence, dtype=float)
        n = self.timestamps.size
        if n == 0:
            raise EmptyTrace("gaze trace has no frames")
        for arr in (self.gaze_x, self.gaze_y, self.confidence):
            if arr.shape != (n,):
                raise ValueError("trace arrays must be 1-D and equally long")
        if self.index is None:
            self.index = np.arange(n)
        else:
            self.index = np.asarray(self.index, dtype=int)
            if self.index.shape != (n,):
                raise ValueError("index array must match the frame count")
        if n > 1 and not np.all(np.diff(self.timestamps) > 0):
            raise ValueError("timestamps must be strictly increasing")
        if np.any((self.confidence < 0.0) | (self.confidence > 1.0)):
            raise ValueError("confidence values must lie in [0, 1]")
        if not self.nominal_fps > 0:
            raise ValueError("nominal_fps must be positive")
        if n > 1:
            median_dt = float(np.median(np.diff(self.timestamps)))
            expected = 1.0 / self.nominal_fps
            if abs(median_dt - expected) > SPACING_TOLERANCE * expected:
                warnings.warn(
                    f"median frame spacing {median_dt:.6g}s deviates more than "
                    f"{SPACING_TOLERANCE:.0%} from 1/nominal_fps={expected:.6g}s",
                    stacklevel=3,
                )

    def __len__(self) -> int:
        return int(self.timestamps.size)

    @property
    def duration_seconds(self) -> float:
        return float(self.timestamps[-1] - self.timestamps[0])

    def points(self) -> np.ndarray:
        """Gaze coordinates as an (n, 2) array of (x, y) radians."""
        return np.column_stack([self.gaze_x, self.gaze_y])

    def frame(self, i: int) -> GazeFrame:
        return GazeFrame(
            index=int(self.index[i]),
            timestamp=float(self.timestamps[i]),
            gaze_x=float(self.gaze_x[i]),
            gaze_y=float(self.gaze_y[i]),
            confidence=float(self.confidence[i]),
        )

    def frames(self):
        """Iterate over frames as :class:`GazeFrame` records."""
        for i in range(len(self)):
            yield self.frame(i)

    @classmethod
    def from_frames(cls, frames, nominal_fps: float) -> "GazeTrace":
        frames = list(frames)
        if not frames:
            raise EmptyTrace("gaze trace has no frames")
        return cls(
            timestamps=np.array([f.timestamp for f in frames], dtype=float),
            gaze_x=np.array([f.gaze_x for f in frames], dtype=float),
            gaze_y=np.array([f.gaze_y for f in frames], dtype=float),
            confidence=np.array([f.confidence for f in frames], dtype=float),
            nominal_fps=nominal_fps,
            index=np.array([f.index for f in frames], dtype=int),
        )


@dataclass(eq=False)
class GroundTruthTrace:
    """Reference signal from an independent tracker.

    ``values`` is either an (n, 2) array of coordinates in the source
    tracker's units (``kind == "xy"``) or an (n,) array of 0/1 on-target
    flags (``kind == "on_target"``).
    """

    timestamps: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        n = self.timestamps.size
        if n == 0:
            raise EmptyTrace("ground-truth trace has no samples")
        if self.kind == "xy":
            if self.values.shape != (n, 2):
                raise ValueError("xy ground truth must be an (n, 2) array")
        elif self.kind == "on_target":
            if self.values.shape != (n,):
                raise ValueError("on_target ground truth must be 1-D")
            if not np.all(np.isin(self.values, (0.0, 1.0))):
                raise ValueError("on_target values must be 0 or 1")
        else:
            raise ValueError(f"unknown ground-truth kind: {self.kind!r}")
        if n > 1 and not np.all(np.diff(self.timestamps) > 0):
            raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return int(self.timestamps.size)


@dataclass(eq=False)
class EncodedTrace:
    """Per-frame region codes aligned with source timestamps.

    Codes are integers 1..9 (3x3 grid, row-major from the top-left) or
    :data:`MISSING` for frames removed upstream.
    """

    timestamps: np.ndarray
    regions: np.ndarray

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.regions = np.asarray(self.regions, dtype=int)
        n = self.timestamps.size
        if n == 0:
            raise EmptyTrace("encoded trace has no frames")
        if self.regions.shape != (n,):
            raise ValueError("regions must match timestamps in length")
        if np.any((self.regions < 0) | (self.regions > 9)):
            raise ValueError("region codes must be MISSING (0) or 1..9")
        if n > 1 and not np.all(np.diff(self.timestamps) > 0):
            raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return int(self.timestamps.size)

    @property
    def missing_mask(self) -> np.ndarray:
        return self.regions == MISSING


# --- CSV I/O -------------------------------------------------------------


def _parse_float(text: str) -> float:
    value = float(text)
    if not np.isfinite(value):
        raise ValueError(f"non-finite value: {text!r}")
    return value


def load_gaze_csv(path, column_map=None, nominal_fps: float | None = None) -> GazeTrace:
    """Read a gaze CSV into a :class:`GazeTrace`.

    Rows whose numeric fields fail to parse (or parse to non-finite
    values, or carry a confidence outside [0, 1]) are dropped with a
    single counted warning. Rows are re-sorted by timestamp; duplicate
    timestamps keep the first occurrence and count as dropped.

    Args:
        path: CSV file with a header row, comma separated, UTF-8.
        column_map: Optional override of :data:`DEFAULT_COLUMNS`; partial
            maps are merged over the defaults.
        nominal_fps: Declared frame rate. When omitted it is inferred
            from the median timestamp spacing.

    Raises:
        MissingColumn: A mapped column is absent from the header.
        EmptyTrace: No parseable rows remain.
    """
    columns = dict(DEFAULT_COLUMNS)
    if column_map:
        columns.update(column_map)

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyTrace(f"{path}: file has no header row") from None
        names = [h.strip() for h in header]
        try:
            pos = {key: names.index(col) for key, col in columns.items()}
        except ValueError:
            missing = [col for col in columns.values() if col not in names]
            raise MissingColumn(f"{path}: missing column(s) {missing}") from None
        needed = max(pos.values())

        rows = []
        dropped = 0
        for raw in reader:
            if len(raw) <= needed:
                dropped += 1
                continue
            try:
                t = _parse_float(raw[pos["timestamp"]])
                c = _parse_float(raw[pos["confidence"]])
                x = _parse_float(raw[pos["gaze_x"]])
                y = _parse_float(raw[pos["gaze_y"]])
            except ValueError:
                dropped += 1
                continue
            if not 0.0 <= c <= 1.0:
                dropped += 1
                continue
            rows.append((t, c, x, y))

    rows.sort(key=lambda r: r[0])
    deduped = []
    last_t = None
    for row in rows:
        if last_t is not None and row[0] == last_t:
            dropped += 1
            continue
        deduped.append(row)
        last_t = row[0]

    if dropped:
        warnings.warn(f"{path}: dropped {dropped} unusable row(s)", stacklevel=2)
    if not deduped:
        raise EmptyTrace(f"{path}: no usable gaze rows")

    data = np.array(deduped, dtype=float)
    timestamps = data[:, 0]
    if nominal_fps is None:
        if len(deduped) > 1:
            nominal_fps = 1.0 / float(np.median(np.diff(timestamps)))
        else:
            nominal_fps = 1.0
    return GazeTrace(
        timestamps=timestamps,
        gaze_x=data[:, 2],
        gaze_y=data[:, 3],
        confidence=data[:, 1],
        nominal_fps=nominal_fps,
    )


def write_gaze_csv(trace: GazeTrace, path, column_map=None) -> None:
    """Write a gaze CSV that :func:`load_gaze_csv` reads back exactly.

    Floats are written with ``repr`` so the round trip is lossless.
    """
    columns = dict(DEFAULT_COLUMNS)
    if column_map:
        columns.update(column_map)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([columns["timestamp"], columns["confidence"],
                         columns["gaze_x"], columns["gaze_y"]])
        for i in range(len(trace)):
            writer.writerow([
                repr(float(trace.timestamps[i])),
                repr(float(trace.confidence[i])),
                repr(float(trace.gaze_x[i])),
                repr(float(trace.gaze_y[i])),
            ])


def load_truth_csv(path) -> GroundTruthTrace:
    """Read a ground-truth CSV (``timestamp,x,y`` or ``timestamp,on_target``)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyTrace(f"{path}: file has no header row") from None
        if "timestamp" not in header:
            raise MissingColumn(f"{path}: missing column(s) ['timestamp']")
        t_pos = header.index("timestamp")
        if "x" in header and "y" in header:
            kind = "xy"
            value_pos = (header.index("x"), header.index("y"))
        elif "on_target" in header:
            kind = "on_target"
            value_pos = (header.index("on_target"),)
        else:
            raise MissingColumn(
                f"{path}: expected either x,y or on_target columns")

        rows = []
        dropped = 0
        needed = max((t_pos,) + value_pos)
        for raw in reader:
            if len(raw) <= needed:
                dropped += 1
                continue
            try:
                t = _parse_float(raw[t_pos])
                vals = [_parse_float(raw[p]) for p in value_pos]
            except ValueError:
                dropped += 1
                continue
            if kind == "on_target" and vals[0] not in (0.0, 1.0):
                dropped += 1
                continue
            rows.append((t, vals))

    rows.sort(key=lambda r: r[0])
    deduped = []
    last_t = None
    for row in rows:
        if last_t is not None and row[0] == last_t:
            dropped += 1
            continue
        deduped.append(row)
        last_t = row[0]

    if dropped:
        warnings.warn(f"{path}: dropped {dropped} unusable row(s)", stacklevel=2)
    if not deduped:
        raise EmptyTrace(f"{path}: no usable ground-truth rows")

    timestamps = np.array([r[0] for r in deduped], dtype=float)
    if kind == "xy":
        values = np.array([r[1] for r in deduped], dtype=float)
    else:
        values = np.array([r[1][0] for r in deduped], dtype=float)
    return GroundTruthTrace(timestamps=timestamps, values=values, kind=kind)


def write_truth_csv(truth: GroundTruthTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if truth.kind == "xy":
            writer.writerow(["timestamp", "x", "y"])
            for i in range(len(truth)):
                writer.writerow([repr(float(truth.timestamps[i])),
                                 repr(float(truth.values[i, 0])),
                                 repr(float(truth.values[i, 1]))])
        else:
            writer.writerow(["timestamp", "on_target"])
            for i in range(len(truth)):
                writer.writerow([repr(float(truth.timestamps[i])),
                                 int(truth.values[i])])


def read_encoded_csv(path) -> EncodedTrace:
    """Read ``timestamp,region`` rows; ``NA`` denotes a missing frame."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyTrace(f"{path}: file has no header row") from None
        for col in ("timestamp", "region"):
            if col not in header:
                raise MissingColumn(f"{path}: missing column(s) ['{col}']")
        t_pos, r_pos = header.index("timestamp"), header.index("region")
        timestamps = []
        regions = []
        for raw in reader:
            t = _parse_float(raw[t_pos])
            token = raw[r_pos].strip()
            regions.append(MISSING if token == "NA" else int(token))
            timestamps.append(t)
    if not timestamps:
        raise EmptyTrace(f"{path}: no encoded rows")
    return EncodedTrace(timestamps=np.array(timestamps), regions=np.array(regions))


def write_encoded_csv(encoded: EncodedTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "region"])
        for i in range(len(encoded)):
            code = int(encoded.regions[i])
            writer.writerow([repr(float(encoded.timestamps[i])),
                             "NA" if code == MISSING else code])


# --- preprocessing -------------------------------------------------------


def filter_confidence(trace: GazeTrace, threshold: float = 0.9):
    """Drop frames whose confidence is not strictly above ``threshold``.

    Returns:
        (filtered_trace, missing_mask): the surviving trace plus a boolean
        mask aligned with the *input* trace, True where a frame was
        removed. Removed frames later surface as missing region codes.

    Raises:
        EmptyTrace: Every frame fell at or below the threshold.
    """
    keep = trace.confidence > threshold
    if not np.any(keep):
        raise EmptyTrace("no frames above the confidence threshold")
    filtered = GazeTrace(
        timestamps=trace.timestamps[keep],
        gaze_x=trace.gaze_x[keep],
        gaze_y=trace.gaze_y[keep],
        confidence=trace.confidence[keep],
        nominal_fps=trace.nominal_fps,
        index=trace.index[keep],
    )
    return filtered, ~keep


def _window_index(timestamps: np.ndarray, target_fps: float):
    """Assign each timestamp to a window of width 1/target_fps.

    Windows are anchored at the first timestamp. A sample landing exactly
    on the trailing boundary is clamped into the final window so the
    window count never exceeds ceil(duration * target_fps).
    """
    if not target_fps > 0:
        raise ValueError("target_fps must be positive")
    t0 = timestamps[0]
    duration = float(timestamps[-1] - t0)
    n_windows = max(1, int(np.ceil(duration * target_fps)))
    idx = np.floor((timestamps - t0) * target_fps).astype(int)
    idx = np.clip(idx, 0, n_windows - 1)
    return idx, t0, n_windows


def window_mean(timestamps: np.ndarray, values: np.ndarray, target_fps: float):
    """Windowed mean of ``values`` (1-D or (n, k)) over 1/target_fps bins.

    Returns (window_start_times, means) with empty windows omitted.
    """
    timestamps = np.asarray(timestamps, dtype=float)
    values = np.asarray(values, dtype=float)
    idx, t0, n_windows = _window_index(timestamps, target_fps)
    counts = np.bincount(idx, minlength=n_windows)
    occupied = np.flatnonzero(counts)
    cols = values if values.ndim > 1 else values[:, None]
    sums = np.zeros((n_windows, cols.shape[1]))
    for j in range(cols.shape[1]):
        sums[:, j] = np.bincount(idx, weights=cols[:, j], minlength=n_windows)
    means = sums[occupied] / counts[occupied, None]
    if values.ndim == 1:
        means = means[:, 0]
    starts = t0 + occupied / target_fps
    return starts, means


def window_majority(timestamps: np.ndarray, labels: np.ndarray,
                    target_fps: float, n_labels: int):
    """Windowed majority vote over integer labels in [0, n_labels).

    Label 0 is treated as "missing": it is excluded from the vote and wins
    a window only when no other label is present. Ties between real
    labels resolve to the smallest label. Empty windows are omitted.

    Returns (window_start_times, winners).
    """
    timestamps = np.asarray(timestamps, dtype=float)
    labels = np.asarray(labels, dtype=int)
    idx, t0, n_windows = _window_index(timestamps, target_fps)
    table = np.zeros((n_windows, n_labels), dtype=int)
    np.add.at(table, (idx, labels), 1)
    occupied = np.flatnonzero(table.sum(axis=1))
    votes = table[occupied][:, 1:]  # drop the missing column from the vote
    winners = np.argmax(votes, axis=1) + 1  # ties: first max = smallest label
    winners[votes.sum(axis=1) == 0] = 0
    starts = t0 + occupied / target_fps
    return starts, winners


def downsample_raw(trace: GazeTrace, target_fps: float) -> GazeTrace:
    """Reduce a raw trace to ``target_fps`` by windowed averaging.

    Each non-overlapping window of duration 1/target_fps contributes one
    output frame holding the mean gaze and mean confidence of its
    members, stamped with the window start time. Empty windows produce
    no output frame.
    """
    starts, means = window_mean(
        trace.timestamps,
        np.column_stack([trace.gaze_x, trace.gaze_y, trace.confidence]),
        target_fps,
    )
    return GazeTrace(
        timestamps=starts,
        gaze_x=means[:, 0],
        gaze_y=means[:, 1],
        confidence=means[:, 2],
        nominal_fps=target_fps,
    )


def downsample_encoded(encoded: EncodedTrace, target_fps: float) -> EncodedTrace:
    """Reduce an encoded trace to ``target_fps`` by majority vote.

    The vote runs over non-missing codes in each window; ties resolve to
    the smallest region index, and a window whose members are all missing
    stays missing.
    """
    starts, winners = window_majority(
        encoded.timestamps, encoded.regions, target_fps, n_labels=10)
    return EncodedTrace(timestamps=starts, regions=winners)
