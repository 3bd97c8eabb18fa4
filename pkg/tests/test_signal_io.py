"""Trace containers, CSV round trips, and window downsampling.

Window expectations are recomputed inline with the documented rule
(windows of width 1/fps anchored at the first timestamp, last frame
clamped into the final window) rather than trusting the implementation
under test.
"""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icegaze import (
    MISSING,
    EncodedTrace,
    GazeTrace,
    GroundTruthTrace,
    downsample_encoded,
    downsample_raw,
    filter_confidence,
    load_gaze_csv,
    load_truth_csv,
    read_encoded_csv,
    window_majority,
    window_mean,
    write_encoded_csv,
    write_gaze_csv,
    write_truth_csv,
)
from icegaze.errors import EmptyTrace, MissingColumn


def _trace(n=20, fps=10.0, seed=0):
    rng = np.random.default_rng(seed)
    return GazeTrace(
        timestamps=np.arange(n) / fps,
        gaze_x=rng.normal(size=n),
        gaze_y=rng.normal(size=n),
        confidence=rng.uniform(0.5, 1.0, size=n),
        nominal_fps=fps,
    )


# --- containers ------------------------------------------------------


def test_trace_rejects_unsorted_timestamps():
    with pytest.raises(ValueError, match="strictly increasing"):
        GazeTrace(timestamps=np.array([1.0, 0.5]), gaze_x=np.zeros(2),
                  gaze_y=np.zeros(2), confidence=np.ones(2), nominal_fps=1.0)


def test_trace_rejects_ragged_arrays():
    with pytest.raises(ValueError, match="equally long"):
        GazeTrace(timestamps=np.array([0.0, 1.0]), gaze_x=np.zeros(3),
                  gaze_y=np.zeros(2), confidence=np.ones(2), nominal_fps=1.0)


def test_trace_warns_on_spacing_mismatch():
    with pytest.warns(UserWarning, match="deviates more than 20%"):
        GazeTrace(timestamps=np.array([0.0, 0.1, 0.5]), gaze_x=np.zeros(3),
                  gaze_y=np.zeros(3), confidence=np.ones(3), nominal_fps=10.0)


def test_trace_frame_accessors():
    tr = _trace(5)
    frame = tr.frame(2)
    assert frame.index == 2
    assert frame.gaze_x == tr.gaze_x[2]
    rebuilt = GazeTrace.from_frames(list(tr.frames()), nominal_fps=tr.nominal_fps)
    assert np.array_equal(rebuilt.timestamps, tr.timestamps)
    assert np.array_equal(rebuilt.gaze_x, tr.gaze_x)


def test_points_stacks_x_then_y():
    tr = _trace(4)
    pts = tr.points()
    assert pts.shape == (4, 2)
    assert np.array_equal(pts[:, 0], tr.gaze_x)
    assert np.array_equal(pts[:, 1], tr.gaze_y)


def test_duration_is_last_minus_first():
    tr = _trace(20, fps=10.0)
    assert tr.duration_seconds == pytest.approx(1.9)


# --- confidence filter -----------------------------------------------


def test_filter_threshold_is_strict():
    tr = GazeTrace(timestamps=np.arange(3) / 10.0, gaze_x=np.zeros(3),
                   gaze_y=np.zeros(3),
                   confidence=np.array([0.9, 0.9001, 0.89]),
                   nominal_fps=10.0)
    kept, low_mask = filter_confidence(tr)
    assert low_mask.tolist() == [True, False, True]
    assert kept.timestamps.tolist() == [0.1]


def test_filter_custom_threshold():
    tr = GazeTrace(timestamps=np.arange(3) / 10.0, gaze_x=np.zeros(3),
                   gaze_y=np.zeros(3),
                   confidence=np.array([0.5, 0.7, 0.9]),
                   nominal_fps=10.0)
    kept, low_mask = filter_confidence(tr, threshold=0.6)
    assert low_mask.tolist() == [True, False, False]
    assert len(kept.timestamps) == 2


def test_filter_keeps_original_indices():
    tr = _trace(10)
    tr.confidence[3] = 0.1
    kept, _ = filter_confidence(tr, threshold=0.4)
    assert 3 not in kept.index.tolist()
    assert kept.index.tolist() == [i for i in range(10) if i != 3]


# --- gaze CSV --------------------------------------------------------


def test_gaze_csv_round_trip_is_exact(tmp_path):
    tr = _trace(25, seed=7)
    path = tmp_path / "gaze.csv"
    write_gaze_csv(tr, path)
    back = load_gaze_csv(path, nominal_fps=tr.nominal_fps)
    for field in ("timestamps", "gaze_x", "gaze_y", "confidence"):
        assert np.array_equal(getattr(back, field), getattr(tr, field)), field


def test_gaze_csv_column_map(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("t,cx,cy,q\n0.0,1.0,2.0,0.95\n0.5,3.0,4.0,0.99\n")
    tr = load_gaze_csv(path, column_map={"timestamp": "t", "gaze_x": "cx",
                                         "gaze_y": "cy", "confidence": "q"})
    assert tr.gaze_x.tolist() == [1.0, 3.0]
    assert tr.gaze_y.tolist() == [2.0, 4.0]
    assert tr.nominal_fps == pytest.approx(2.0)  # inferred from spacing


def test_gaze_csv_drops_bad_rows_with_counted_warning(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text(
        "timestamp,gaze_angle_x,gaze_angle_y,confidence\n"
        "0.0,0.1,0.2,0.9\n"
        "oops,1,2,3\n"
        "0.1,0.2,0.3,1.5\n"       # confidence outside [0, 1]
        "0.2,0.3,0.4,0.95\n")
    with pytest.warns(UserWarning, match="dropped 2 unusable row"):
        tr = load_gaze_csv(path)
    assert len(tr.timestamps) == 2


def test_gaze_csv_keeps_first_of_duplicate_timestamps(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text(
        "timestamp,gaze_angle_x,gaze_angle_y,confidence\n"
        "0.0,1.0,1.0,0.95\n"
        "0.0,2.0,2.0,0.95\n"
        "0.1,3.0,3.0,0.95\n")
    with pytest.warns(UserWarning, match="dropped 1 unusable row"):
        tr = load_gaze_csv(path)
    assert tr.gaze_x.tolist() == [1.0, 3.0]


def test_gaze_csv_missing_column(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("timestamp,gaze_angle_x\n0.0,0.1\n")
    with pytest.raises(MissingColumn, match="gaze_angle_y"):
        load_gaze_csv(path)


def test_gaze_csv_empty_after_drops(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("timestamp,gaze_angle_x,gaze_angle_y,confidence\nx,1,2,3\n")
    with pytest.raises(EmptyTrace):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            load_gaze_csv(path)


# --- encoded and truth CSV -------------------------------------------


def test_encoded_csv_round_trip_with_missing(tmp_path):
    coded = EncodedTrace(timestamps=np.array([0.0, 0.5, 1.0]),
                         regions=np.array([5, MISSING, 9]))
    path = tmp_path / "enc.csv"
    write_encoded_csv(coded, path)
    text = path.read_text()
    assert "NA" in text
    back = read_encoded_csv(path)
    assert np.array_equal(back.regions, coded.regions)
    assert back.missing_mask.tolist() == [False, True, False]


def test_truth_csv_round_trip_both_kinds(tmp_path):
    xy = GroundTruthTrace(timestamps=np.array([0.0, 0.5]),
                          values=np.array([[0.1, 0.2], [0.3, 0.4]]),
                          kind="xy")
    flag = GroundTruthTrace(timestamps=np.array([0.0, 0.5]),
                            values=np.array([1.0, 0.0]),
                            kind="on_target")
    for truth, name in ((xy, "xy.csv"), (flag, "flag.csv")):
        path = tmp_path / name
        write_truth_csv(truth, path)
        back = load_truth_csv(path)
        assert back.kind == truth.kind
        assert np.array_equal(back.values, truth.values)


# --- windowing -------------------------------------------------------


def _window_oracle(timestamps, target_fps):
    """Window index per frame, per the documented anchoring rule."""
    t0 = timestamps[0]
    duration = timestamps[-1] - t0
    n_windows = max(1, math.ceil(duration * target_fps))
    idx = np.floor((timestamps - t0) * target_fps).astype(int)
    return np.minimum(idx, n_windows - 1), n_windows


def test_window_mean_matches_per_window_recompute():
    rng = np.random.default_rng(31)
    timestamps = np.sort(rng.uniform(0, 13, 160))
    timestamps += np.arange(160) * 1e-9  # enforce strict ordering
    values = rng.normal(size=160)
    target_fps = 1.5
    wt, wm = window_mean(timestamps, values, target_fps)
    idx, n_windows = _window_oracle(timestamps, target_fps)
    expected_t, expected_m = [], []
    for w in range(n_windows):
        inside = idx == w
        if inside.any():
            expected_t.append(timestamps[0] + w / target_fps)
            expected_m.append(values[inside].mean())
    assert np.allclose(wt, expected_t)
    assert np.allclose(wm, expected_m)


def test_window_mean_drops_empty_windows():
    timestamps = np.array([0.0, 0.1, 2.1, 2.2])
    values = np.array([1.0, 3.0, 10.0, 20.0])
    wt, wm = window_mean(timestamps, values, 1.0)
    assert wt.tolist() == [0.0, 2.0]
    assert wm.tolist() == [2.0, 15.0]


def test_window_mean_clamps_final_edge():
    # a frame exactly on the trailing edge belongs to the last window
    wt, wm = window_mean(np.array([0.0, 0.5, 1.0, 1.5, 2.0]),
                         np.arange(5.0), 1.0)
    assert wt.tolist() == [0.0, 1.0]
    assert wm.tolist() == [0.5, 3.0]


def test_window_mean_handles_2d_values():
    timestamps = np.array([0.0, 0.2, 1.0, 1.2])
    values = np.array([[1.0, 10.0], [3.0, 30.0], [5.0, 50.0], [7.0, 70.0]])
    wt, wm = window_mean(timestamps, values, 1.0)
    assert wm.shape == (2, 2)
    assert wm[0].tolist() == [2.0, 20.0]
    assert wm[1].tolist() == [6.0, 60.0]


def test_window_majority_excludes_missing_votes():
    timestamps = np.array([0.0, 0.1, 0.2, 1.0, 1.1, 1.2])
    labels = np.array([MISSING, 2, MISSING, 1, 1, 2])
    _, winners = window_majority(timestamps, labels, 1.0, n_labels=3)
    assert winners.tolist() == [2, 1]


def test_window_majority_tie_takes_smallest_label():
    winners = window_majority(np.array([0.0, 0.1]), np.array([2, 1]),
                              1.0, n_labels=3)[1]
    assert winners.tolist() == [1]


def test_window_majority_all_missing_window_stays_missing():
    timestamps = np.array([0.0, 0.1, 1.0, 1.1])
    labels = np.array([MISSING, MISSING, 2, 2])
    _, winners = window_majority(timestamps, labels, 1.0, n_labels=3)
    assert winners.tolist() == [MISSING, 2]


def test_downsample_raw_averages_each_channel():
    tr = GazeTrace(timestamps=np.arange(20) / 10.0,
                   gaze_x=np.arange(20.0), gaze_y=np.arange(20.0) * 2,
                   confidence=np.linspace(0.5, 1.0, 20), nominal_fps=10.0)
    ds = downsample_raw(tr, 2.0)
    idx, n_windows = _window_oracle(tr.timestamps, 2.0)
    assert len(ds.timestamps) == len(np.unique(idx))
    first = idx == 0
    assert ds.gaze_x[0] == pytest.approx(tr.gaze_x[first].mean())
    assert ds.gaze_y[0] == pytest.approx(tr.gaze_y[first].mean())
    assert ds.confidence[0] == pytest.approx(tr.confidence[first].mean())
    assert ds.nominal_fps == 2.0


def test_downsample_encoded_majority_votes_regions():
    coded = EncodedTrace(
        timestamps=np.arange(6) / 3.0,
        regions=np.array([5, 5, 1, MISSING, 2, 2]))
    ds = downsample_encoded(coded, 1.0)
    assert ds.regions.tolist() == [5, 2]
    assert np.allclose(ds.timestamps, [0.0, 1.0])


def test_downsample_count_respects_ceiling():
    rng = np.random.default_rng(32)
    tr = _trace(200, fps=30.0, seed=3)
    for fps in (1.0, 3.0, 7.5):
        ds = downsample_raw(tr, fps)
        assert len(ds.timestamps) <= math.ceil(tr.duration_seconds * fps)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_window_mean_weighted_total_is_preserved(seed, target_fps):
    # window means weighted by window population recover the grand sum
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 120))
    timestamps = np.sort(rng.uniform(0, 10, n))
    timestamps += np.arange(n) * 1e-9
    values = rng.normal(size=n)
    _, wm = window_mean(timestamps, values, target_fps)
    idx, n_windows = _window_oracle(timestamps, target_fps)
    counts = np.bincount(idx, minlength=n_windows)
    assert np.isclose((wm * counts[counts > 0]).sum(), values.sum())
