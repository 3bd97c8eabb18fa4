"""Frame-level agreement metrics and rating correlations.

The positive class throughout is "gaze inside the engagement region",
i.e. region code 5; every other region (and only real codes, never
missing frames) counts as negative.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, LengthMismatch
from .signal_io import MISSING, EncodedTrace

POSITIVE_REGION = 5


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int
    n_excluded: int

    @property
    def n_pairs(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    mcc: float
    n_pairs: int
    n_excluded: int
    degenerate: tuple

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "mcc": self.mcc,
            "n_pairs": self.n_pairs,
            "n_excluded": self.n_excluded,
            "degenerate": list(self.degenerate),
        }


def confusion(pred: EncodedTrace, truth,
              positive_region: int = POSITIVE_REGION) -> ConfusionCounts:
    """Tally the 2x2 confusion between an encoding and on-target truth.

    ``truth`` is a 0/1 (or boolean) sequence aligned frame by frame with
    ``pred``. Frames whose prediction is missing are excluded pairwise.

    Raises:
        LengthMismatch: The sequences differ in length.
        DegenerateInput: No non-missing pair remains.
    """
    truth = np.asarray(truth)
    if truth.shape != (len(pred),):
        raise LengthMismatch(
            f"truth has {truth.shape} entries for {len(pred)} frames")
    truth = truth.astype(bool)
    keep = pred.regions != MISSING
    if not np.any(keep):
        raise DegenerateInput("every prediction is missing")
    predicted = pred.regions[keep] == positive_region
    actual = truth[keep]
    return ConfusionCounts(
        tp=int(np.sum(predicted & actual)),
        fp=int(np.sum(predicted & ~actual)),
        fn=int(np.sum(~predicted & actual)),
        tn=int(np.sum(~predicted & ~actual)),
        n_excluded=int(np.sum(~keep)),
    )


def _ratio(num: float, den: float, name: str, degenerate: list) -> float:
    if den == 0:
        degenerate.append(name)
        return 0.0
    return num / den


def metrics(counts: ConfusionCounts) -> EvalReport:
    """Standard binary metrics; zero-denominator metrics report 0.

    Each metric whose denominator vanishes is listed in the report's
    ``degenerate`` field rather than silently producing NaN.
    """
    tp, fp, fn, tn = counts.tp, counts.fp, counts.fn, counts.tn
    degenerate: list = []
    accuracy = _ratio(tp + tn, counts.n_pairs, "accuracy", degenerate)
    precision = _ratio(tp, tp + fp, "precision", degenerate)
    recall = _ratio(tp, tp + fn, "recall", degenerate)
    f1 = _ratio(2 * tp, 2 * tp + fp + fn, "f1", degenerate)
    mcc_den = float(np.sqrt(float(tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)))
    mcc = _ratio(tp * tn - fp * fn, mcc_den, "mcc", degenerate)
    return EvalReport(
        accuracy=accuracy, precision=precision, recall=recall, f1=f1,
        mcc=mcc, n_pairs=counts.n_pairs, n_excluded=counts.n_excluded,
        degenerate=tuple(degenerate),
    )


def _pearson(u: np.ndarray, v: np.ndarray) -> float:
    du = u - u.mean()
    dv = v - v.mean()
    denom = np.sqrt((du * du).sum() * (dv * dv).sum())
    if denom == 0.0:
        raise DegenerateInput("correlation undefined for constant input")
    return float((du * dv).sum() / denom)


@dataclass(eq=False)
class RatingCorrelation:
    """Engagement fraction vs. an ordinal rating, two ways.

    ``per_recording_r`` correlates raw (rating, fraction) pairs across
    recordings; ``per_rating_mean_r`` correlates each distinct rating
    with the mean fraction of its recordings, which is the summary-table
    view of the same data.
    """

    per_recording_r: float
    per_rating_mean_r: float
    ratings: np.ndarray
    counts: np.ndarray
    mean_fractions: np.ndarray

    def to_dict(self) -> dict:
        return {
            "per_recording_r": self.per_recording_r,
            "per_rating_mean_r": self.per_rating_mean_r,
            "table": [
                {"rating": float(r), "count": int(c), "mean_fraction": float(m)}
                for r, c, m in zip(self.ratings, self.counts,
                                   self.mean_fractions)
            ],
        }


def rating_correlation(ratings, rve_fractions) -> RatingCorrelation:
    """Correlate per-recording engagement fractions with ratings.

    Args:
        ratings: One ordinal rating per recording.
        rve_fractions: Matching fraction of frames spent in region 5.

    Raises:
        LengthMismatch: Input lengths differ.
        DegenerateInput: Fewer than two recordings, fewer than two
            distinct ratings, or constant inputs.
    """
    ratings = np.asarray(ratings, dtype=float)
    fractions = np.asarray(rve_fractions, dtype=float)
    if ratings.shape != fractions.shape or ratings.ndim != 1:
        raise LengthMismatch("ratings and fractions must align 1:1")
    if ratings.size < 2:
        raise DegenerateInput("need at least two recordings")
    distinct = np.unique(ratings)
    if distinct.size < 2:
        raise DegenerateInput("need at least two distinct ratings")
    counts = np.array([np.sum(ratings == r) for r in distinct])
    means = np.array([fractions[ratings == r].mean() for r in distinct])
    return RatingCorrelation(
        per_recording_r=_pearson(ratings, fractions),
        per_rating_mean_r=_pearson(distinct, means),
        ratings=distinct,
        counts=counts,
        mean_fractions=means,
    )
