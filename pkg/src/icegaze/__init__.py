"""Interpersonally calibrated gaze encoding.

The package turns camera-relative gaze angle series into coarse 9-region
codes that are comparable across people: a density-based calibration
finds each recording's dominant fixation cluster, a box around that
cluster anchors the region grid, and downstream helpers cover
synchronization against reference trackers, frame-level scoring,
two-sample statistics and regularized models over the resulting region
histograms. A synthetic scenario generator with known ground truth backs
the test suite and the experiment scripts.
"""

__version__ = "0.1.0"

from . import errors
from .clustering import NOISE, ClusterLabeling, DbscanParams, dbscan, pairwise_sq_dists
from .encoder import (
    IceConfig,
    IceEncoder,
    RegionHistogram,
    RveBox,
    encode,
    fit_encoder,
    fit_encoder_prefix,
    region_codes,
    region_histogram,
    search_epsilon,
    select_min_pts,
)
from .evaluation import (
    POSITIVE_REGION,
    ConfusionCounts,
    EvalReport,
    RatingCorrelation,
    confusion,
    metrics,
    rating_correlation,
)
from .signal_io import (
    MISSING,
    EncodedTrace,
    GazeFrame,
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
from .stats import (
    DEFAULT_LAMBDA_GRID,
    GroupedDataset,
    GroupSplit,
    LassoFit,
    LinearModel,
    LogisticFit,
    TTestResult,
    cross_entropy_value_grad,
    fit_lasso,
    fit_logistic,
    group_k_fold,
    lasso_kkt_residual,
    load_feature_csv,
    solve_lasso,
    solve_logistic,
    student_t_two_tailed_p,
    t_test_cohens_d,
)
from .sync import SyncResult, select_sync_dimension, synchronize
from .synth import LabeledTrace, ScenarioSpec, generate, generate_paired

__all__ = [
    "__version__",
    "errors",
    "NOISE",
    "ClusterLabeling",
    "DbscanParams",
    "dbscan",
    "pairwise_sq_dists",
    "IceConfig",
    "IceEncoder",
    "RegionHistogram",
    "RveBox",
    "encode",
    "fit_encoder",
    "fit_encoder_prefix",
    "region_codes",
    "region_histogram",
    "search_epsilon",
    "select_min_pts",
    "POSITIVE_REGION",
    "ConfusionCounts",
    "EvalReport",
    "RatingCorrelation",
    "confusion",
    "metrics",
    "rating_correlation",
    "MISSING",
    "EncodedTrace",
    "GazeFrame",
    "GazeTrace",
    "GroundTruthTrace",
    "downsample_encoded",
    "downsample_raw",
    "filter_confidence",
    "load_gaze_csv",
    "load_truth_csv",
    "read_encoded_csv",
    "window_majority",
    "window_mean",
    "write_encoded_csv",
    "write_gaze_csv",
    "write_truth_csv",
    "DEFAULT_LAMBDA_GRID",
    "GroupedDataset",
    "GroupSplit",
    "LassoFit",
    "LinearModel",
    "LogisticFit",
    "TTestResult",
    "cross_entropy_value_grad",
    "fit_lasso",
    "fit_logistic",
    "group_k_fold",
    "lasso_kkt_residual",
    "load_feature_csv",
    "solve_lasso",
    "solve_logistic",
    "student_t_two_tailed_p",
    "t_test_cohens_d",
    "SyncResult",
    "select_sync_dimension",
    "synchronize",
    "LabeledTrace",
    "ScenarioSpec",
    "generate",
    "generate_paired",
]
