"""Command line front end.

Every run writes its outputs plus exactly one ``<command>_manifest.json``
recording the command, tool version, resolved parameters, input file
hashes and output names. Manifests carry no timestamps, so rerunning a
command with identical inputs reproduces every output byte for byte.

Exit codes:
    0  success
    1  input problems (unreadable files, malformed or empty CSVs)
    2  degenerate or failed computation (e.g. calibration cannot find
       more than one cluster); a machine-readable JSON error goes to
       stdout
    3  bad flags or usage

A ``--config FILE`` of ``key = value`` lines (# starts a comment line)
supplies defaults for any flag of any subcommand; explicitly passed
flags always win. The ``ICE_SEED`` environment variable overrides the
default random seed of ``simulate``, ``sweep`` and ``fit``.
"""

import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .encoder import (
    IceConfig,
    RveBox,
    encode,
    fit_encoder,
    fit_encoder_prefix,
    region_histogram,
)
from .errors import EmptyTrace, IcegazeError, MissingColumn
from .evaluation import confusion, metrics
from .signal_io import (
    EncodedTrace,
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
from .stats import (
    fit_lasso,
    fit_logistic,
    group_k_fold,
    load_feature_csv,
    t_test_cohens_d,
)
from .sync import select_sync_dimension, synchronize
from .synth import ScenarioSpec, generate, generate_paired

_INPUT_ERRORS = (OSError, MissingColumn, EmptyTrace)


# --- config file and manifest helpers -------------------------------------


def _coerce(text: str):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _load_config(path) -> dict:
    values = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = _coerce(value)
    return values


def _merged(**values) -> dict:
    """Overlay config-file values onto parameters left at their defaults."""
    ctx = click.get_current_context()
    cfg = ctx.obj or {}
    out = {}
    for name, value in values.items():
        source = ctx.get_parameter_source(name)
        if source == click.core.ParameterSource.DEFAULT and name in cfg:
            out[name] = cfg[name]
        else:
            out[name] = value
    return out


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def _write_manifest(out_dir: Path, command: str, params: dict,
                    inputs, outputs) -> None:
    manifest = {
        "command": command,
        "version": __version__,
        "parameters": _json_safe(params),
        "inputs": {Path(p).name: _sha256(p) for p in inputs},
        "outputs": sorted(outputs),
    }
    path = out_dir / f"{command}_manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")


def _ensure_out_dir(out_dir) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_json_safe(payload), sort_keys=True, indent=2)
                    + "\n", encoding="utf-8")


def _parse_floats(text: str, flag: str):
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated numbers")


# --- scenario plumbing -----------------------------------------------------


def _load_scenario(scenario_path, seed) -> ScenarioSpec:
    if scenario_path:
        data = json.loads(Path(scenario_path).read_text(encoding="utf-8"))
        if "spec" in data:
            data = data["spec"]
        spec = ScenarioSpec.from_dict(data)
    else:
        spec = ScenarioSpec()
    if seed is not None:
        spec = ScenarioSpec.from_dict({**spec.to_dict(), "rng_seed": seed})
    return spec


def _load_truth_box(truth_box, truth_box_json) -> RveBox | None:
    if truth_box:
        vals = _parse_floats(truth_box, "--truth-box")
        if len(vals) != 4:
            raise click.UsageError("--truth-box expects x_min,x_max,y_min,y_max")
        return RveBox(*vals)
    if truth_box_json:
        data = json.loads(Path(truth_box_json).read_text(encoding="utf-8"))
        for key in ("planted_rve", "rve"):
            if key in data:
                data = data[key]
                break
        return RveBox.from_dict(data)
    return None


# --- command group ---------------------------------------------------------


@click.group()
@click.version_option(version=__version__)
@click.option("--config", "config_path",
              type=click.Path(dir_okay=False), default=None,
              help="key=value file supplying defaults for any flag.")
@click.pass_context
def cli(ctx, config_path):
    """Interpersonally calibrated gaze encoding and analysis."""
    ctx.obj = _load_config(config_path) if config_path else {}


@cli.command()
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--scenario", "scenario_path",
              type=click.Path(dir_okay=False), default=None,
              help="Scenario spec JSON (as written by a previous run).")
@click.option("--seed", type=int, default=None, envvar="ICE_SEED",
              help="Override the scenario RNG seed.")
def simulate(out_dir, scenario_path, seed):
    """Write a synthetic gaze recording plus its tracker ground truth."""
    params = _merged(scenario_path=scenario_path, seed=seed)
    spec = _load_scenario(params["scenario_path"], params["seed"])
    labeled, tracker = generate_paired(spec)

    out = _ensure_out_dir(out_dir)
    write_gaze_csv(labeled.trace, out / "gaze.csv")
    write_truth_csv(tracker, out / "truth.csv")
    _write_json(out / "scenario.json", {
        "spec": spec.to_dict(),
        "planted_rve": labeled.planted_rve.to_dict(),
        "planted_lag_seconds": spec.planted_lag_seconds,
        "n_frames": len(labeled.trace),
    })
    inputs = [params["scenario_path"]] if params["scenario_path"] else []
    _write_manifest(out, "simulate", {**params, "spec": spec.to_dict()},
                    inputs, ["gaze.csv", "truth.csv", "scenario.json"])


def _ice_config(params) -> IceConfig:
    return IceConfig(
        confidence_threshold=params["confidence_threshold"],
        epsilon_start=params["epsilon_start"],
        epsilon_step=params["epsilon_step"],
        epsilon_floor_fallback=params["epsilon_floor"],
        dominance_ratio=params["dominance_ratio"],
        min_pts_fraction=params["min_pts_fraction"],
        axis_convention=params["axis_convention"],
    )


@cli.command(name="encode")
@click.argument("gaze_csv", type=click.Path(dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--confidence-threshold", type=float, default=0.9,
              show_default=True)
@click.option("--fps", type=float, default=None,
              help="Nominal input rate; inferred from spacing when omitted.")
@click.option("--target-fps", type=float, default=None,
              help="Majority-vote the codes down to this rate before writing.")
@click.option("--prefix-seconds", type=float, default=None,
              help="Calibrate on the leading prefix only.")
@click.option("--epsilon-start", type=float, default=1.0, show_default=True)
@click.option("--epsilon-step", type=float, default=0.01, show_default=True)
@click.option("--epsilon-floor", type=float, default=0.001, show_default=True)
@click.option("--dominance-ratio", type=float, default=10.0, show_default=True)
@click.option("--min-pts-fraction", type=float, default=0.01, show_default=True)
@click.option("--axis-convention", type=click.Choice(["y_down", "y_up"]),
              default="y_down", show_default=True)
@click.option("--timestamp-col", default="timestamp", show_default=True)
@click.option("--confidence-col", default="confidence", show_default=True)
@click.option("--gaze-x-col", default="gaze_angle_x", show_default=True)
@click.option("--gaze-y-col", default="gaze_angle_y", show_default=True)
def encode_cmd(gaze_csv, out_dir, confidence_threshold, fps, target_fps,
               prefix_seconds, epsilon_start, epsilon_step, epsilon_floor,
               dominance_ratio, min_pts_fraction, axis_convention,
               timestamp_col, confidence_col, gaze_x_col, gaze_y_col):
    """Calibrate on a gaze CSV and write its 9-region encoding."""
    params = _merged(
        confidence_threshold=confidence_threshold, fps=fps,
        target_fps=target_fps, prefix_seconds=prefix_seconds,
        epsilon_start=epsilon_start, epsilon_step=epsilon_step,
        epsilon_floor=epsilon_floor, dominance_ratio=dominance_ratio,
        min_pts_fraction=min_pts_fraction, axis_convention=axis_convention,
        timestamp_col=timestamp_col, confidence_col=confidence_col,
        gaze_x_col=gaze_x_col, gaze_y_col=gaze_y_col,
    )
    config = _ice_config(params)
    columns = {
        "timestamp": params["timestamp_col"],
        "confidence": params["confidence_col"],
        "gaze_x": params["gaze_x_col"],
        "gaze_y": params["gaze_y_col"],
    }
    trace = load_gaze_csv(gaze_csv, column_map=columns,
                          nominal_fps=params["fps"])
    filtered, missing = filter_confidence(trace, config.confidence_threshold)
    if params["prefix_seconds"] is not None:
        encoder = fit_encoder_prefix(filtered, params["prefix_seconds"], config)
    else:
        encoder = fit_encoder(filtered, config)
    encoded = encode(encoder, trace, missing)
    if params["target_fps"] is not None:
        encoded = downsample_encoded(encoded, params["target_fps"])
    histogram = region_histogram(encoded)

    out = _ensure_out_dir(out_dir)
    write_encoded_csv(encoded, out / "regions.csv")
    (out / "encoder.json").write_text(encoder.to_json() + "\n",
                                      encoding="utf-8")
    with open(out / "histogram.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("region,count,fraction\n")
        for region in range(1, 10):
            fh.write(f"{region},{int(histogram.counts[region - 1])},"
                     f"{float(histogram.fractions[region - 1])!r}\n")
    _write_manifest(out, "encode", params, [gaze_csv],
                    ["regions.csv", "encoder.json", "histogram.csv"])


@cli.command(name="sync")
@click.argument("gaze_csv", type=click.Path(dir_okay=False))
@click.argument("truth_csv", type=click.Path(dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--fps", type=float, default=3.0, show_default=True,
              help="Common rate both signals are reduced to.")
@click.option("--max-lag-seconds", type=float, default=300.0, show_default=True)
@click.option("--symmetric", is_flag=True, default=False,
              help="Search negative lags too.")
@click.option("--dimension", type=click.Choice(["auto", "x", "y"]),
              default="auto", show_default=True)
def sync_cmd(gaze_csv, truth_csv, out_dir, fps, max_lag_seconds, symmetric,
             dimension):
    """Recover the clock offset between a gaze CSV and a tracker CSV."""
    params = _merged(fps=fps, max_lag_seconds=max_lag_seconds,
                     symmetric=symmetric, dimension=dimension)
    gaze = downsample_raw(load_gaze_csv(gaze_csv), params["fps"])
    axis = (select_sync_dimension(gaze) if params["dimension"] == "auto"
            else params["dimension"])
    gaze_signal = gaze.gaze_x if axis == "x" else gaze.gaze_y

    truth = load_truth_csv(truth_csv)
    if truth.kind == "xy":
        _, means = window_mean(truth.timestamps, truth.values, params["fps"])
        truth_signal = means[:, 0] if axis == "x" else means[:, 1]
    else:
        # 0/1 flags average into a per-window on-target fraction
        _, truth_signal = window_mean(truth.timestamps, truth.values,
                                      params["fps"])

    result = synchronize(gaze_signal, truth_signal, params["fps"],
                         max_lag_seconds=params["max_lag_seconds"],
                         symmetric=params["symmetric"])

    out = _ensure_out_dir(out_dir)
    _write_json(out / "sync.json", {
        "lag_seconds": result.lag_seconds,
        "lag_samples": result.lag_samples,
        "correlation_at_lag": result.correlation_at_lag,
        "dimension": axis,
        "fps": params["fps"],
    })
    with open(out / "correlation_curve.csv", "w", encoding="utf-8",
              newline="") as fh:
        fh.write("lag_seconds,correlation\n")
        for lag, corr in zip(result.lags_seconds, result.correlations):
            fh.write(f"{float(lag)!r},{float(corr)!r}\n")
    _write_manifest(out, "sync", params, [gaze_csv, truth_csv],
                    ["sync.json", "correlation_curve.csv"])


@cli.command(name="eval")
@click.argument("encoded_csv", type=click.Path(dir_okay=False))
@click.argument("truth_csv", type=click.Path(dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--fps", type=float, default=3.0, show_default=True,
              help="Comparison rate for both sequences.")
@click.option("--sync-json", type=click.Path(dir_okay=False),
              default=None, help="Apply the lag found by a sync run.")
@click.option("--truth-box", default=None,
              help="x_min,x_max,y_min,y_max defining on-target for xy truth.")
@click.option("--truth-box-json",
              type=click.Path(dir_okay=False), default=None,
              help="JSON holding the on-target box (scenario or encoder file).")
def eval_cmd(encoded_csv, truth_csv, out_dir, fps, sync_json, truth_box,
             truth_box_json):
    """Score an encoding against tracker ground truth, frame by frame."""
    params = _merged(fps=fps, sync_json=sync_json, truth_box=truth_box,
                     truth_box_json=truth_box_json)
    encoded = downsample_encoded(read_encoded_csv(encoded_csv), params["fps"])

    truth = load_truth_csv(truth_csv)
    if truth.kind == "xy":
        box = _load_truth_box(params["truth_box"], params["truth_box_json"])
        if box is None:
            raise click.UsageError(
                "xy ground truth needs --truth-box or --truth-box-json")
        _, means = window_mean(truth.timestamps, truth.values, params["fps"])
        flags = ((means[:, 0] >= box.x_min) & (means[:, 0] <= box.x_max)
                 & (means[:, 1] >= box.y_min) & (means[:, 1] <= box.y_max))
    else:
        _, winners = window_majority(truth.timestamps,
                                     truth.values.astype(int) + 1,
                                     params["fps"], n_labels=3)
        flags = winners - 1 == 1

    lag_samples = 0
    if params["sync_json"]:
        sync_data = json.loads(Path(params["sync_json"]).read_text(
            encoding="utf-8"))
        lag_samples = round(sync_data["lag_seconds"] * params["fps"])

    usable = min(len(encoded), flags.size - lag_samples)
    if usable < 1:
        raise EmptyTrace("no overlap between encoding and shifted truth")
    pred = EncodedTrace(timestamps=encoded.timestamps[:usable],
                        regions=encoded.regions[:usable])
    report = metrics(confusion(pred, flags[lag_samples:lag_samples + usable]))

    out = _ensure_out_dir(out_dir)
    _write_json(out / "eval.json", report.to_dict())
    inputs = [encoded_csv, truth_csv]
    if params["sync_json"]:
        inputs.append(params["sync_json"])
    if params["truth_box_json"]:
        inputs.append(params["truth_box_json"])
    _write_manifest(out, "eval", params, inputs, ["eval.json"])


@cli.command(name="stats")
@click.argument("table_csv", type=click.Path(dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--group-col", default="group", show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--comparisons", type=int, default=9, show_default=True,
              help="Bonferroni divisor.")
@click.option("--welch", is_flag=True, default=False)
def stats_cmd(table_csv, out_dir, group_col, alpha, comparisons, welch):
    """Per-column two-sample t-tests between the two groups of a table."""
    params = _merged(group_col=group_col, alpha=alpha,
                     comparisons=comparisons, welch=welch)
    import csv as _csv
    import warnings

    with open(table_csv, newline="", encoding="utf-8") as fh:
        reader = _csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyTrace(f"{table_csv}: file has no header row") from None
        if params["group_col"] not in header:
            raise MissingColumn(
                f"{table_csv}: missing column(s) ['{params['group_col']}']")
        g_pos = header.index(params["group_col"])
        value_cols = [i for i in range(len(header)) if i != g_pos]
        rows, dropped = [], 0
        for row in reader:
            if len(row) != len(header):
                dropped += 1
                continue
            try:
                [float(row[i]) for i in value_cols]
            except ValueError:
                dropped += 1
                continue
            rows.append(row)
    if dropped:
        warnings.warn(f"{table_csv}: dropped {dropped} unusable row(s)")
    if not rows:
        raise EmptyTrace(f"{table_csv}: no data rows")
    groups = sorted({row[g_pos].strip() for row in rows})
    if len(groups) != 2:
        raise MissingColumn(
            f"{table_csv}: need exactly 2 groups, found {len(groups)}")

    out = _ensure_out_dir(out_dir)
    with open(out / "stats.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("column,group_a,group_b,mean_a,mean_b,t_stat,df,"
                 "p_two_tailed,cohens_d,corrected_alpha,"
                 "significant_bonferroni\n")
        for col in value_cols:
            sample_a = [float(r[col]) for r in rows if r[g_pos].strip() == groups[0]]
            sample_b = [float(r[col]) for r in rows if r[g_pos].strip() == groups[1]]
            res = t_test_cohens_d(sample_a, sample_b, alpha=params["alpha"],
                                  num_comparisons=params["comparisons"],
                                  welch=params["welch"])
            fh.write(f"{header[col]},{groups[0]},{groups[1]},"
                     f"{res.mean_a!r},{res.mean_b!r},{res.t_stat!r},"
                     f"{res.df!r},{res.p_two_tailed!r},{res.cohens_d!r},"
                     f"{res.corrected_alpha!r},"
                     f"{str(res.significant_bonferroni).lower()}\n")
    _write_manifest(out, "stats", params, [table_csv], ["stats.csv"])


@cli.command(name="fit")
@click.argument("features_csv", type=click.Path(dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--task", type=click.Choice(["logit", "lasso"]), required=True)
@click.option("--reg", type=click.Choice(["l1", "l2"]), default="l1",
              show_default=True, help="Penalty for the logit task.")
@click.option("--lambda-grid", default=None,
              help="Comma-separated penalty grid (default: 20 log-spaced "
                   "values in [1e-4, 10]).")
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--fold-index", type=int, default=0, show_default=True,
              help="Which grouped split the logit task reports on.")
@click.option("--seed", type=int, default=0, show_default=True,
              envvar="ICE_SEED")
def fit_cmd(features_csv, out_dir, task, reg, lambda_grid, folds, fold_index,
            seed):
    """Fit a regularized model on a group_id,label,features CSV."""
    params = _merged(task=task, reg=reg, lambda_grid=lambda_grid,
                     folds=folds, fold_index=fold_index, seed=seed)
    data = load_feature_csv(features_csv)
    grid = (_parse_floats(params["lambda_grid"], "--lambda-grid")
            if params["lambda_grid"] else None)

    if params["task"] == "logit":
        splits = group_k_fold(data, k=params["folds"], seed=params["seed"])
        if not 0 <= params["fold_index"] < len(splits):
            raise click.UsageError("--fold-index out of range")
        result = fit_logistic(data, splits[params["fold_index"]],
                              reg=params["reg"], lambda_grid=grid)
        payload = {
            "model": result.model.to_dict(),
            "lambda_chosen": result.lambda_chosen,
            "dev_cross_entropy": result.dev_cross_entropy,
            "test_accuracy": result.test_accuracy,
            "test_log_loss": result.test_log_loss,
        }
        model = result.model
    else:
        result = fit_lasso(data, lambda_grid=grid, folds=params["folds"],
                           seed=params["seed"])
        payload = {
            "model": result.model.to_dict(),
            "test_mse": result.test_mse,
            "fold_test_mses": list(result.fold_test_mses),
            "fold_lambdas": list(result.fold_lambdas),
        }
        model = result.model

    out = _ensure_out_dir(out_dir)
    _write_json(out / "model.json", payload)
    with open(out / "weights.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("feature,beta\n")
        for name, beta in model.weight_report():
            fh.write(f"{name},{beta!r}\n")
    _write_manifest(out, "fit", params, [features_csv],
                    ["model.json", "weights.csv"])


@cli.command(name="sweep")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--kind", type=click.Choice(["fps", "prefix"]), required=True)
@click.option("--values", required=True,
              help="Comma-separated sweep points (fps values or prefix "
                   "seconds).")
@click.option("--scenario", "scenario_path",
              type=click.Path(dir_okay=False), default=None)
@click.option("--seed", type=int, default=None, envvar="ICE_SEED")
def sweep_cmd(out_dir, kind, values, scenario_path, seed):
    """Sweep frame rate or calibration prefix on a synthetic scenario."""
    params = _merged(kind=kind, values=values, scenario_path=scenario_path,
                     seed=seed)
    points = _parse_floats(params["values"], "--values")
    if not points:
        raise click.UsageError("--values must hold at least one number")
    spec = _load_scenario(params["scenario_path"], params["seed"])
    labeled = generate(spec)
    config = IceConfig()
    filtered, missing = filter_confidence(labeled.trace,
                                          config.confidence_threshold)
    truth = labeled.on_target.astype(int)

    rows = []
    if params["kind"] == "fps":
        encoder = fit_encoder(filtered, config)
        encoded = encode(encoder, labeled.trace, missing)
        for fps in points:
            pred = downsample_encoded(encoded, fps)
            _, winners = window_majority(labeled.trace.timestamps, truth + 1,
                                         fps, n_labels=3)
            report = metrics(confusion(pred, winners - 1 == 1))
            rows.append((fps, report.accuracy, report.f1))
    else:
        for prefix in points:
            encoder = fit_encoder_prefix(filtered, prefix, config)
            encoded = encode(encoder, labeled.trace, missing)
            report = metrics(confusion(encoded, truth))
            rows.append((prefix, report.accuracy, report.f1))

    out = _ensure_out_dir(out_dir)
    with open(out / "curve.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("parameter,accuracy,f1\n")
        for value, accuracy, f1 in rows:
            fh.write(f"{value!r},{accuracy!r},{f1!r}\n")
    inputs = [params["scenario_path"]] if params["scenario_path"] else []
    _write_manifest(out, "sweep", {**params, "spec": spec.to_dict()},
                    inputs, ["curve.csv"])


# --- exit-code mapping ------------------------------------------------------


def main(argv=None) -> int:
    """Run the CLI and map outcomes onto the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 3
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 3
    except _INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except IcegazeError as exc:
        click.echo(json.dumps({"error": type(exc).__name__,
                               "message": str(exc)}))
        return 2


def entry() -> None:
    sys.exit(main(None))


if __name__ == "__main__":
    entry()
