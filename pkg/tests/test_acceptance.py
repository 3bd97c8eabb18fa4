"""Acceptance suite: one test per shipping gate, run with pytest -v.

Each test states its bound inline and fails with the measured value, so
a red line here is directly actionable. The heavyweight ten-seed fleet
is shared through the session fixture in conftest.
"""

import filecmp
import json
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import (
    central_difference_gradient,
    dbscan_graph_reference,
    moment_matched_sample,
    ols_reference,
    search_epsilon_reference,
    t_test_reference,
)

from icegaze import (
    DbscanParams,
    GroupedDataset,
    IceConfig,
    ScenarioSpec,
    cross_entropy_value_grad,
    dbscan,
    downsample_raw,
    filter_confidence,
    generate,
    generate_paired,
    group_k_fold,
    lasso_kkt_residual,
    rating_correlation,
    search_epsilon,
    select_sync_dimension,
    solve_lasso,
    synchronize,
    t_test_cohens_d,
    window_mean,
)
from icegaze.cli import main as cli_main
from icegaze.errors import SingleClusterFail


# ---------------------------------------------------------------- c01

def _random_cluster_instance(rng):
    n = int(rng.integers(5, 501))
    kind = rng.integers(0, 3)
    if kind == 0:
        pts = rng.uniform(-1, 1, (n, 2))
    else:
        k = int(rng.integers(1, 5))
        centers = rng.uniform(-1, 1, (k, 2))
        spread = rng.uniform(0.02, 0.3)
        which = rng.integers(0, k, n)
        pts = centers[which] + rng.standard_normal((n, 2)) * spread
        if kind == 2:
            m = max(1, n // 10)
            pts[:m] = rng.uniform(-1.5, 1.5, (m, 2))
    eps = float(np.exp(rng.uniform(np.log(0.02), np.log(1.2))))
    min_pts = int(rng.integers(1, max(2, n // 10) + 1))
    return pts, eps, min_pts


def test_c01_dbscan_matches_density_reachability_oracle():
    rng = np.random.default_rng(20260816)
    start = time.monotonic()
    for trial in range(200):
        pts, eps, min_pts = _random_cluster_instance(rng)
        got = dbscan(pts, DbscanParams(eps, min_pts))
        ref_labels, ref_core = dbscan_graph_reference(pts, eps, min_pts)
        assert np.array_equal(got.labels, ref_labels), (
            f"trial {trial}: labels diverge (n={len(pts)}, eps={eps:.4f}, "
            f"min_pts={min_pts})")
        assert np.array_equal(got.core_mask, ref_core), (
            f"trial {trial}: core flags diverge")
    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"200 oracle comparisons took {elapsed:.1f}s"


# ---------------------------------------------------------------- c02

def _random_scenario_points(seed, rng):
    """A plausible gaze cloud: partner blob, 0-2 extras, uniform scatter.

    Component fractions are drawn independently and renormalized so the
    spec validator always accepts them.
    """
    sec_n = int(rng.integers(0, 3))
    parts = [float(rng.uniform(0.5, 0.85))]
    secs_geom = []
    for _ in range(sec_n):
        center = tuple(rng.uniform(-0.6, 0.6, 2).round(3))
        secs_geom.append((center, float(rng.uniform(0.02, 0.1))))
        parts.append(float(rng.uniform(0.05, 0.25)))
    parts.append(float(rng.uniform(0.02, 0.15)))
    total = sum(parts)
    parts = [p / total for p in parts]
    spec = ScenarioSpec(
        duration_seconds=float(rng.uniform(12, 25)),
        fps=10.0,
        partner_fraction=parts[0],
        partner_center=tuple(rng.uniform(-0.2, 0.2, 2).round(3)),
        partner_spread=float(rng.uniform(0.03, 0.08)),
        secondary_clusters=tuple(
            (g[0], g[1], parts[i + 1]) for i, g in enumerate(secs_geom)),
        uniform_noise_fraction=parts[-1],
        measurement_noise_sigma=0.01,
        rng_seed=seed,
    )
    filtered, _ = filter_confidence(generate(spec).trace)
    return filtered.points()


def test_c02_epsilon_search_returns_grid_maximum():
    rng = np.random.default_rng(424242)
    config = IceConfig()
    for trial in range(50):
        pts = _random_scenario_points(trial + 1000, rng)
        ref_eps, ref_labels = search_epsilon_reference(pts)
        try:
            eps, labeling = search_epsilon(pts, config)
        except SingleClusterFail:
            eps, labeling = None, None
        if ref_eps is None:
            assert eps is None, (
                f"trial {trial}: oracle fails but search accepted {eps}")
        else:
            assert eps == ref_eps, (
                f"trial {trial}: search chose {eps}, oracle max is {ref_eps} "
                f"(n={len(pts)})")
            assert np.array_equal(labeling.labels, ref_labels)


def test_c02_single_cluster_scenarios_fail():
    config = IceConfig()
    for seed in range(4):
        spec = ScenarioSpec(
            duration_seconds=20.0, fps=10.0, partner_fraction=0.95,
            partner_spread=0.0, secondary_clusters=(),
            uniform_noise_fraction=0.0, measurement_noise_sigma=0.0,
            rng_seed=seed)
        filtered, _ = filter_confidence(generate(spec).trace)
        with pytest.raises(SingleClusterFail) as info:
            search_epsilon(filtered.points(), config)
        assert str(info.value) == "cannot find more than 1 cluster"


# ---------------------------------------------------------------- c03

def test_c03_default_scenario_f1(default_scenario_fleet):
    full = np.array([r.f1_full for r in default_scenario_fleet])
    assert full.mean() >= 0.95, f"mean on-target F1 {full.mean():.4f} < 0.95"
    assert full.min() >= 0.90, f"worst seed F1 {full.min():.4f} < 0.90"


# ---------------------------------------------------------------- c04

def test_c04_calibration_prefix_curve(default_scenario_fleet):
    one = np.array([r.f1_one_minute for r in default_scenario_fleet])
    four = np.array([r.f1_four_minutes for r in default_scenario_fleet])
    full = np.array([r.f1_full for r in default_scenario_fleet])
    assert four.mean() >= one.mean(), (
        f"mean F1 at 4 min {four.mean():.4f} below 1 min {one.mean():.4f}")
    assert four.mean() >= 0.95 * full.mean(), (
        f"mean F1 at 4 min {four.mean():.4f} below 95% of full "
        f"{full.mean():.4f}")


# ---------------------------------------------------------------- c05

def _recover_lag(lag_seconds, sigma, seed=0):
    spec = ScenarioSpec.from_dict({
        **ScenarioSpec().to_dict(),
        "duration_seconds": 120.0,
        "measurement_noise_sigma": sigma,
        "planted_lag_seconds": lag_seconds,
        "rng_seed": seed,
    })
    labeled, tracker = generate_paired(spec)
    fps = 3.0
    gaze = downsample_raw(labeled.trace, fps)
    axis = select_sync_dimension(gaze)
    own = gaze.gaze_x if axis == "x" else gaze.gaze_y
    _, tracker_means = window_mean(tracker.timestamps, tracker.values, fps)
    partner = tracker_means[:, 0 if axis == "x" else 1]
    return synchronize(own, partner, fps)


@pytest.mark.parametrize("lag", [0.0, 5.0, 60.0, 299.0])
def test_c05_sync_recovers_planted_lag(lag):
    clean = _recover_lag(lag, sigma=0.0)
    assert clean.lag_seconds == lag, (
        f"noiseless recovery got {clean.lag_seconds}, planted {lag}")
    for seed in range(3):
        noisy = _recover_lag(lag, sigma=0.05, seed=seed)
        off = abs(noisy.lag_samples - round(lag * 3.0))
        assert off <= 1, (
            f"seed {seed}: noisy recovery off by {off} samples at lag {lag}")


# ---------------------------------------------------------------- c06

def test_c06_t_test_matches_high_precision_reference():
    rng = np.random.default_rng(20260816)
    for trial in range(100):
        n1 = int(rng.integers(5, 80))
        n2 = int(rng.integers(5, 80))
        loc = rng.normal(0, 2, size=2)
        scale = rng.uniform(0.2, 3.0, size=2)
        a = rng.normal(loc[0], scale[0], size=n1)
        b = rng.normal(loc[1], scale[1], size=n2)
        welch = bool(trial % 2)
        got = t_test_cohens_d(a, b, welch=welch)
        t_ref, df_ref, p_ref, d_ref = t_test_reference(a, b, welch=welch)
        assert abs(got.t_stat - t_ref) <= 1e-9, f"trial {trial}: t diverges"
        assert abs(got.df - df_ref) <= 1e-9, f"trial {trial}: df diverges"
        assert abs(got.p_two_tailed - p_ref) <= 1e-9, (
            f"trial {trial}: p diverges by {abs(got.p_two_tailed - p_ref):.2e}")
        assert abs(got.cohens_d - d_ref) <= 1e-9, f"trial {trial}: d diverges"


def test_c06_bonferroni_threshold_exact():
    res = t_test_cohens_d(np.arange(8.0), np.arange(8.0) + 0.5)
    assert res.corrected_alpha == 0.05 / 9


def test_c06_region8_downward_gaze_fixture():
    # Group summaries (n, mean, sd) for the fraction of frames coded in
    # the bottom-center region, deceptive vs sincere recordings:
    # (47, 0.020, 0.018) and (38, 0.047, 0.047). Samples are built to
    # match those moments exactly, so the effect size is pinned.
    rng = np.random.default_rng(8)
    deceptive = moment_matched_sample(rng, 47, 0.020, 0.018)
    sincere = moment_matched_sample(rng, 38, 0.047, 0.047)
    res = t_test_cohens_d(deceptive, sincere)
    assert abs(abs(res.cohens_d) - 0.79) <= 0.05, (
        f"|d| = {abs(res.cohens_d):.4f}, expected 0.79 +/- 0.05")
    assert res.significant_bonferroni, (
        f"p = {res.p_two_tailed:.5f} should clear 0.05/9")


# ---------------------------------------------------------------- c07

def test_c07_logistic_gradient_vs_central_differences():
    rng = np.random.default_rng(77)
    worst = 0.0
    for trial in range(20):
        n = int(rng.integers(20, 60))
        d = int(rng.integers(2, 8))
        x = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n).astype(float)
        w = rng.normal(scale=0.5, size=d)
        b = float(rng.normal())
        l2 = 0.0 if trial % 2 else 0.3
        _, grad_w, grad_b = cross_entropy_value_grad(w, b, x, y, l2=l2)
        fd_w, fd_b = central_difference_gradient(
            lambda wv, bv: cross_entropy_value_grad(wv, bv, x, y, l2=l2)[0],
            w, b)
        analytic = np.concatenate([grad_w, [grad_b]])
        numeric = np.concatenate([fd_w, [fd_b]])
        rel = np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1e-12)
        worst = max(worst, float(rel.max()))
    assert worst < 1e-5, f"max relative gradient error {worst:.2e}"


def test_c07_lasso_kkt_residual_at_convergence():
    rng = np.random.default_rng(78)
    for trial in range(10):
        x = rng.normal(size=(80, 6))
        w_true = np.array([2.0, -1.5, 0.0, 0.0, 0.8, 0.0])
        y = x @ w_true + 1.2 + rng.normal(scale=0.3, size=80)
        w, b = solve_lasso(x, y, lam=0.1, tol=1e-12, max_iter=50_000)
        resid = lasso_kkt_residual(x, y, w, b, 0.1)
        assert resid < 1e-6, f"trial {trial}: KKT residual {resid:.2e}"


def test_c07_lasso_at_zero_penalty_equals_least_squares():
    # The coordinate solver pins the intercept at the target mean, which
    # is the least-squares intercept only for mean-centered columns, so
    # the equivalence is checked in that regime (fit_lasso standardizes
    # features before calling it).
    rng = np.random.default_rng(79)
    for trial in range(10):
        raw = rng.normal(loc=rng.normal(size=5), size=(60, 5))
        x = raw - raw.mean(axis=0)
        y = x @ rng.normal(size=5) + rng.normal() + rng.normal(
            scale=0.2, size=60)
        w, b = solve_lasso(x, y, lam=0.0, tol=1e-14, max_iter=200_000)
        w_ref, b_ref = ols_reference(x, y)
        gap = max(float(np.abs(w - w_ref).max()), abs(b - b_ref))
        assert gap < 1e-8, f"trial {trial}: gap to least squares {gap:.2e}"


# ---------------------------------------------------------------- c08

def test_c08_rating_table_fixture():
    counts = [2, 7, 38, 45, 54, 20]
    means = [76.4, 82.0, 88.6, 87.9, 90.1, 91.3]
    ratings, fractions = [], []
    for rating, count, mean in zip(range(1, 7), counts, means):
        ratings.extend([rating] * count)
        fractions.extend([mean] * count)
    result = rating_correlation(
        np.array(ratings, dtype=float), np.array(fractions, dtype=float))
    assert abs(result.per_rating_mean_r - 0.917) <= 0.005, (
        f"per-rating-mean r = {result.per_rating_mean_r:.4f}")


# ---------------------------------------------------------------- c09

def test_c09_group_folds_never_leak():
    rng = np.random.default_rng(99)
    draws = 0
    while draws < 1000:
        n_groups = int(rng.integers(7, 26))
        k = int(rng.integers(3, 8))
        if k > n_groups:
            continue
        rows_per = rng.integers(1, 5, size=n_groups)
        groups = np.repeat([f"g{i}" for i in range(n_groups)], rows_per)
        n = len(groups)
        data = GroupedDataset(
            x=np.zeros((n, 1)), y=np.zeros(n), groups=groups,
            feature_names=("f0",))
        for split in group_k_fold(data, k=k, seed=int(rng.integers(1 << 30))):
            parts = [set(groups[split.train_idx]),
                     set(groups[split.dev_idx]),
                     set(groups[split.test_idx])]
            assert not (parts[0] & parts[1]), "group in train and dev"
            assert not (parts[0] & parts[2]), "group in train and test"
            assert not (parts[1] & parts[2]), "group in dev and test"
            assert parts[0] | parts[1] | parts[2] == set(groups)
            draws += 1


# ---------------------------------------------------------------- c10

_C10_SCENARIO = {
    "duration_seconds": 30.0,
    "fps": 10.0,
    "rng_seed": 7,
}


def _write_c10_inputs(root: Path):
    (root / "scenario.json").write_text(
        json.dumps(_C10_SCENARIO, indent=2) + "\n")
    rng = np.random.default_rng(1234)
    lines = ["group,frac_a,frac_b"]
    for i in range(20):
        grp = "calm" if i < 10 else "tense"
        shift = 0.0 if i < 10 else 0.3
        lines.append(f"{grp},{float(rng.normal(0.5 + shift, 0.1))!r},"
                     f"{float(rng.normal(0.2, 0.05))!r}")
    (root / "table.csv").write_text("\n".join(lines) + "\n")
    lines = ["group_id,label,feat_a,feat_b,feat_c,feat_d"]
    for g in range(12):
        for _ in range(6):
            label = g % 2
            row = rng.normal(size=4) + (0.8 * label if g % 2 else 0.0)
            cells = ",".join(repr(float(v)) for v in row)
            lines.append(f"p{g:02d},{label},{cells}")
    (root / "features.csv").write_text("\n".join(lines) + "\n")


def _run_c10_commands(root: Path, monkeypatch):
    monkeypatch.chdir(root)
    commands = [
        ["simulate", "--out-dir", "sim", "--scenario", "scenario.json",
         "--seed", "5"],
        ["encode", "sim/gaze.csv", "--out-dir", "enc"],
        ["sync", "sim/gaze.csv", "sim/truth.csv", "--out-dir", "syn",
         "--max-lag-seconds", "10"],
        ["eval", "enc/regions.csv", "sim/truth.csv", "--out-dir", "ev",
         "--truth-box-json", "sim/scenario.json"],
        ["stats", "table.csv", "--out-dir", "st"],
        ["fit", "features.csv", "--task", "logit", "--out-dir", "fit_logit",
         "--seed", "3"],
        ["fit", "features.csv", "--task", "lasso", "--out-dir", "fit_lasso",
         "--seed", "3"],
        ["sweep", "--kind", "prefix", "--values", "10,20", "--scenario",
         "scenario.json", "--seed", "5", "--out-dir", "sw"],
    ]
    for argv in commands:
        assert cli_main(argv) == 0, f"command failed: {' '.join(argv)}"


def test_c10_cli_outputs_are_byte_identical(tmp_path, monkeypatch):
    roots = []
    for name in ("first", "second"):
        root = tmp_path / name
        root.mkdir()
        _write_c10_inputs(root)
        _run_c10_commands(root, monkeypatch)
        roots.append(root)

    first_files = sorted(
        p.relative_to(roots[0]) for p in roots[0].rglob("*") if p.is_file())
    second_files = sorted(
        p.relative_to(roots[1]) for p in roots[1].rglob("*") if p.is_file())
    assert first_files == second_files
    for rel in first_files:
        assert filecmp.cmp(roots[0] / rel, roots[1] / rel, shallow=False), (
            f"{rel} differs between identical runs")
