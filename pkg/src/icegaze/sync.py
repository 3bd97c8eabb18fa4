"""Lag recovery between a gaze signal and an independent tracker signal.

Both recordings observe the same behavior but start at different clock
origins. The reference recording is assumed to start at or before the
other one, so the default lag range is one-sided: sample i of ``a``
aligns with sample i + lag of ``b``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DegenerateSignal
from .signal_io import GazeTrace

#: Lags whose overlap falls below this many samples are skipped.
MIN_OVERLAP = 10


@dataclass(eq=False)
class SyncResult:
    lag_seconds: float
    lag_samples: int
    correlation_at_lag: float
    lags_seconds: np.ndarray
    correlations: np.ndarray


def select_sync_dimension(trace: GazeTrace) -> str:
    """Pick the gaze axis with more variance ("x" or "y"; ties pick y)."""
    return "x" if np.var(trace.gaze_x) > np.var(trace.gaze_y) else "y"


def _overlap(a: np.ndarray, b: np.ndarray, lag: int):
    if lag >= 0:
        m = min(a.size, b.size - lag)
        if m <= 0:
            return None
        return a[:m], b[lag:lag + m]
    m = min(a.size + lag, b.size)
    if m <= 0:
        return None
    return a[-lag:-lag + m], b[:m]


def _pearson(u: np.ndarray, v: np.ndarray):
    du = u - u.mean()
    dv = v - v.mean()
    denom = np.sqrt((du * du).sum() * (dv * dv).sum())
    if denom == 0.0:
        return None
    return float((du * dv).sum() / denom)


def synchronize(a, b, fps: float, max_lag_seconds: float = 300.0,
                symmetric: bool = False,
                min_overlap: int = MIN_OVERLAP) -> SyncResult:
    """Find the integer-sample lag aligning ``a`` against ``b``.

    Both signals must be sampled at the common rate ``fps``. Each lag in
    [0, max_lag_seconds] (or +/- that range with ``symmetric``) scores
    the Pearson correlation over the overlapping stretch only; nothing
    is zero-padded. Lags whose overlap is shorter than ``min_overlap``
    samples, or degenerate (constant) on either side, are skipped. The
    best lag is the correlation argmax; ties go to the smallest lag.

    Raises:
        DegenerateSignal: Either full signal has zero variance.
        DegenerateInput: No lag produced a usable overlap.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise DegenerateInput("signals must hold at least two samples")
    if not fps > 0:
        raise ValueError("fps must be positive")
    if a.std() == 0.0 or b.std() == 0.0:
        raise DegenerateSignal("cannot correlate a zero-variance signal")
    a = (a - a.mean()) / a.std()
    b = (b - b.mean()) / b.std()

    max_lag = int(round(max_lag_seconds * fps))
    lags = range(-max_lag, max_lag + 1) if symmetric else range(max_lag + 1)

    kept_lags = []
    kept_corr = []
    best_lag = None
    best_corr = -np.inf
    for lag in lags:
        seg = _overlap(a, b, lag)
        if seg is None or seg[0].size < min_overlap:
            continue
        r = _pearson(*seg)
        if r is None:
            continue
        kept_lags.append(lag)
        kept_corr.append(r)
        if r > best_corr:  # strict: ties keep the smallest lag
            best_corr = r
            best_lag = lag
    if best_lag is None:
        raise DegenerateInput("no lag leaves enough overlap to correlate")
    return SyncResult(
        lag_seconds=best_lag / fps,
        lag_samples=best_lag,
        correlation_at_lag=best_corr,
        lags_seconds=np.array(kept_lags, dtype=float) / fps,
        correlations=np.array(kept_corr, dtype=float),
    )
