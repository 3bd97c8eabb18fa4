"""Statistical tests and regularized linear models.

Self-contained on purpose: the two-tailed p-value comes from a
continued-fraction evaluation of the regularized incomplete beta
function, the L1 logistic path runs proximal gradient steps with
soft-thresholding, the L2 path plain gradient descent with backtracking,
and the lasso runs cyclic coordinate descent. Group structure (one group
per dyad/recording pairing) is respected everywhere a split happens.
"""

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    DegenerateSample,
    MissingColumn,
    NoConvergence,
    NonBinaryLabels,
    SingleGroup,
    TooFewGroups,
)

#: Default regularization grid: 20 log-spaced values spanning [1e-4, 10].
DEFAULT_LAMBDA_GRID = tuple(np.logspace(-4.0, 1.0, 20))

_FPMIN = 1e-300


# --- regularized incomplete beta and the t-test ---------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 3e-16:
            return h
    raise NoConvergence("incomplete beta continued fraction stalled")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0, 0 <= x <= 1."""
    if not (a > 0 and b > 0):
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_bt = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
             + a * math.log(x) + b * math.log1p(-x))
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t_stat: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if not df > 0:
        raise ValueError("degrees of freedom must be positive")
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t_stat * t_stat))


@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    df: float
    p_two_tailed: float
    cohens_d: float
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int
    corrected_alpha: float
    significant_bonferroni: bool

    def to_dict(self) -> dict:
        return {
            "t_stat": self.t_stat,
            "df": self.df,
            "p_two_tailed": self.p_two_tailed,
            "cohens_d": self.cohens_d,
            "mean_a": self.mean_a,
            "mean_b": self.mean_b,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "corrected_alpha": self.corrected_alpha,
            "significant_bonferroni": self.significant_bonferroni,
        }


def t_test_cohens_d(a, b, alpha: float = 0.05, num_comparisons: int = 9,
                    welch: bool = False) -> TTestResult:
    """Two-sample t-test plus Cohen's d, Bonferroni-flagged.

    The default is the pooled-variance (equal-variance) test with
    df = n_a + n_b - 2; ``welch`` switches to the unequal-variance
    statistic with Welch-Satterthwaite df. Cohen's d always uses the
    pooled standard deviation, and significance compares the two-tailed
    p against alpha / num_comparisons.

    Raises:
        DegenerateSample: A sample has fewer than two values, or the
            pooled variance is zero.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n_a, n_b = a.size, b.size
    if n_a < 2 or n_b < 2:
        raise DegenerateSample("each sample needs at least two values")
    mean_a, mean_b = float(a.mean()), float(b.mean())
    var_a = float(a.var(ddof=1))
    var_b = float(b.var(ddof=1))
    pooled_var = ((n_a - 1) * var_a + (n_b - 1) * var_b) / (n_a + n_b - 2)
    if pooled_var == 0.0:
        raise DegenerateSample("pooled variance is zero")
    pooled_sd = math.sqrt(pooled_var)

    if welch:
        se2 = var_a / n_a + var_b / n_b
        if se2 == 0.0:
            raise DegenerateSample("zero standard error")
        t_stat = (mean_a - mean_b) / math.sqrt(se2)
        df = se2 ** 2 / ((var_a / n_a) ** 2 / (n_a - 1)
                         + (var_b / n_b) ** 2 / (n_b - 1))
    else:
        t_stat = (mean_a - mean_b) / (pooled_sd * math.sqrt(1.0 / n_a + 1.0 / n_b))
        df = float(n_a + n_b - 2)

    p = student_t_two_tailed_p(t_stat, df)
    corrected = alpha / num_comparisons
    return TTestResult(
        t_stat=t_stat,
        df=df,
        p_two_tailed=p,
        cohens_d=(mean_a - mean_b) / pooled_sd,
        mean_a=mean_a,
        mean_b=mean_b,
        n_a=n_a,
        n_b=n_b,
        corrected_alpha=corrected,
        significant_bonferroni=bool(p < corrected),
    )


# --- grouped data and splits ----------------------------------------------


@dataclass(eq=False)
class GroupedDataset:
    """Feature rows with a target and a group id per row."""

    x: np.ndarray
    y: np.ndarray
    groups: np.ndarray
    feature_names: list

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.groups = np.asarray(self.groups)
        n = self.x.shape[0]
        if self.x.ndim != 2 or n == 0:
            raise DegenerateInput("x must be a non-empty (n, d) matrix")
        if self.y.shape != (n,) or self.groups.shape != (n,):
            raise DegenerateInput("y and groups must have one entry per row")
        if len(self.feature_names) != self.x.shape[1]:
            raise DegenerateInput("feature_names must match the column count")

    def __len__(self) -> int:
        return int(self.x.shape[0])


@dataclass(frozen=True)
class GroupSplit:
    train_idx: np.ndarray
    dev_idx: np.ndarray
    test_idx: np.ndarray


def group_k_fold(data: GroupedDataset, k: int = 5, seed: int = 0):
    """Split rows into k folds by group, with a rotating dev fold.

    Distinct group ids are shuffled with a seeded generator and dealt
    round-robin into k folds. Split i uses fold i as test, fold
    (i + 1) mod k as dev, and the remaining folds as train, so no group
    ever appears in two partitions of the same split.

    Raises:
        SingleGroup: Only one distinct group id exists.
        TooFewGroups: Fewer distinct groups than folds.
        ValueError: ``k`` below 3 (train would be empty).
    """
    if k < 3:
        raise ValueError("k must be at least 3 so train, dev and test exist")
    unique = np.unique(data.groups)
    if unique.size == 1:
        raise SingleGroup("all rows share one group id")
    if unique.size < k:
        raise TooFewGroups(f"{unique.size} group(s) for {k} folds")
    rng = np.random.default_rng(seed)
    order = rng.permutation(unique.size)
    folds = [unique[order[j::k]] for j in range(k)]

    splits = []
    for i in range(k):
        test_groups = folds[i]
        dev_groups = folds[(i + 1) % k]
        test = np.isin(data.groups, test_groups)
        dev = np.isin(data.groups, dev_groups)
        train = ~(test | dev)
        splits.append(GroupSplit(
            train_idx=np.flatnonzero(train),
            dev_idx=np.flatnonzero(dev),
            test_idx=np.flatnonzero(test),
        ))
    return splits


def load_feature_csv(path) -> GroupedDataset:
    """Read a ``group_id,label,feat...`` CSV into a GroupedDataset."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DegenerateInput(f"{path}: file has no header row") from None
        for col in ("group_id", "label"):
            if col not in header:
                raise MissingColumn(f"{path}: missing column(s) ['{col}']")
        g_pos, y_pos = header.index("group_id"), header.index("label")
        feat_pos = [i for i in range(len(header)) if i not in (g_pos, y_pos)]
        feature_names = [header[i] for i in feat_pos]
        if not feature_names:
            raise MissingColumn(f"{path}: no feature columns")
        rows = []
        dropped = 0
        for raw in reader:
            if len(raw) < len(header):
                dropped += 1
                continue
            try:
                y = float(raw[y_pos])
                feats = [float(raw[i]) for i in feat_pos]
            except ValueError:
                dropped += 1
                continue
            if not np.all(np.isfinite([y] + feats)):
                dropped += 1
                continue
            rows.append((raw[g_pos].strip(), y, feats))
    if dropped:
        warnings.warn(f"{path}: dropped {dropped} unusable row(s)", stacklevel=2)
    if not rows:
        raise DegenerateInput(f"{path}: no usable feature rows")
    return GroupedDataset(
        x=np.array([r[2] for r in rows], dtype=float),
        y=np.array([r[1] for r in rows], dtype=float),
        groups=np.array([r[0] for r in rows], dtype=object),
        feature_names=feature_names,
    )


# --- shared model plumbing -------------------------------------------------


def standardization_stats(x: np.ndarray):
    """Per-column mean and standard deviation for standardizing.

    Zero-variance columns get a unit scale; after centering they are
    identically zero, so their weights stay at zero under any penalty.
    """
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    stds = np.where(stds == 0.0, 1.0, stds)
    return means, stds


@dataclass(eq=False)
class LinearModel:
    """A fitted linear predictor on standardized features.

    ``weights`` and ``bias`` live on the standardized scale;
    :meth:`destandardized_coefficients` maps them back to raw feature
    units. ``kind`` is "logistic" or "linear"; for logistic models
    ``classes`` records the (negative, positive) original labels.
    """

    kind: str
    regularization: str
    lam: float
    weights: np.ndarray
    bias: float
    feature_names: list
    feature_means: np.ndarray
    feature_stds: np.ndarray
    classes: tuple | None = None

    def _standardize(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.feature_means) / self.feature_stds

    def decision_values(self, x: np.ndarray) -> np.ndarray:
        return self._standardize(x) @ self.weights + self.bias

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        if self.kind != "logistic":
            raise DegenerateInput("probabilities need a logistic model")
        return _sigmoid(self.decision_values(x))

    def predict(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "logistic":
            return (self.predict_proba(x) >= 0.5).astype(int)
        return self.decision_values(x)

    def destandardized_coefficients(self):
        """(raw_weights, raw_bias) acting on unstandardized features."""
        raw_w = self.weights / self.feature_stds
        raw_b = self.bias - float(np.sum(self.weights * self.feature_means
                                         / self.feature_stds))
        return raw_w, raw_b

    def weight_report(self):
        """(feature, beta) pairs sorted by |beta| descending."""
        order = np.argsort(-np.abs(self.weights), kind="stable")
        return [(self.feature_names[i], float(self.weights[i])) for i in order]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "regularization": self.regularization,
            "lambda": self.lam,
            "weights": [float(w) for w in self.weights],
            "bias": self.bias,
            "feature_names": list(self.feature_names),
            "feature_means": [float(m) for m in self.feature_means],
            "feature_stds": [float(s) for s in self.feature_stds],
            "classes": list(self.classes) if self.classes is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearModel":
        return cls(
            kind=data["kind"],
            regularization=data["regularization"],
            lam=data["lambda"],
            weights=np.array(data["weights"], dtype=float),
            bias=data["bias"],
            feature_names=list(data["feature_names"]),
            feature_means=np.array(data["feature_means"], dtype=float),
            feature_stds=np.array(data["feature_stds"], dtype=float),
            classes=tuple(data["classes"]) if data.get("classes") else None,
        )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def cross_entropy_value_grad(w: np.ndarray, b: float, x: np.ndarray,
                             y: np.ndarray, l2: float = 0.0):
    """Mean cross-entropy (plus optional L2 term) and its gradient.

    Returns (value, grad_w, grad_b). The L2 term is l2/2 * ||w||^2 and
    never touches the bias.
    """
    z = x @ w + b
    value = float(np.mean(np.logaddexp(0.0, z) - y * z))
    residual = _sigmoid(z) - y
    grad_w = x.T @ residual / x.shape[0]
    grad_b = float(residual.mean())
    if l2:
        value += 0.5 * l2 * float(w @ w)
        grad_w = grad_w + l2 * w
    return value, grad_w, grad_b


def _soft_threshold(v, amount):
    return np.sign(v) * np.maximum(np.abs(v) - amount, 0.0)


# --- logistic regression ----------------------------------------------------


def solve_logistic(x: np.ndarray, y: np.ndarray, reg: str, lam: float,
                   tol: float = 1e-7, max_iter: int = 2000,
                   w0: np.ndarray | None = None, b0: float = 0.0):
    """Minimize mean cross-entropy plus an L1 or L2 penalty on ``x``.

    L1 runs proximal gradient (soft-thresholding after each smooth
    step); L2 runs plain gradient descent. Both backtrack the step size
    until the local quadratic model holds, which keeps the penalized
    objective non-increasing. The bias is never penalized.

    Returns (w, b, objective_trajectory).
    """
    if reg not in ("l1", "l2"):
        raise ValueError("reg must be 'l1' or 'l2'")
    n, d = x.shape
    w = np.zeros(d) if w0 is None else w0.astype(float).copy()
    b = float(b0)
    l2 = lam if reg == "l2" else 0.0

    def objective(wv, smooth):
        # the L2 term already lives inside the smooth part
        return smooth + lam * float(np.abs(wv).sum()) if reg == "l1" else smooth

    smooth, grad_w, grad_b = cross_entropy_value_grad(w, b, x, y, l2=l2)
    trajectory = [objective(w, smooth)]
    step = 1.0
    for _ in range(max_iter):
        stalled = False
        while True:
            if reg == "l1":
                w_new = _soft_threshold(w - step * grad_w, step * lam)
            else:
                w_new = w - step * grad_w
            b_new = b - step * grad_b
            dw = w_new - w
            db = b_new - b
            smooth_new = cross_entropy_value_grad(w_new, b_new, x, y, l2=l2)[0]
            model = (smooth + grad_w @ dw + grad_b * db
                     + (dw @ dw + db * db) / (2.0 * step))
            if smooth_new <= model + 1e-12:
                break
            step *= 0.5
            if step < 1e-12:
                stalled = True
                break
        if stalled:
            break
        delta = max(float(np.max(np.abs(dw), initial=0.0)), abs(db))
        w, b = w_new, b_new
        smooth, grad_w, grad_b = cross_entropy_value_grad(w, b, x, y, l2=l2)
        trajectory.append(objective(w, smooth))
        if delta < tol:
            break
        step = min(step * 1.25, 1e6)
    return w, b, trajectory


@dataclass(eq=False)
class LogisticFit:
    model: LinearModel
    dev_cross_entropy: float
    test_accuracy: float
    test_log_loss: float
    lambda_chosen: float


def _binary_targets(y: np.ndarray):
    classes = np.unique(y)
    if classes.size != 2:
        raise NonBinaryLabels(f"expected 2 distinct labels, got {classes.size}")
    return (y == classes[1]).astype(float), (float(classes[0]), float(classes[1]))


def _mean_ce(w, b, x, y) -> float:
    return cross_entropy_value_grad(w, b, x, y)[0]


def fit_logistic(data: GroupedDataset, split: GroupSplit, reg: str = "l1",
                 lambda_grid=None) -> LogisticFit:
    """Fit a regularized logistic classifier on one grouped split.

    Features are standardized with train-split statistics. The penalty
    weight is chosen by dev-split cross-entropy over ``lambda_grid``
    (descending; ties keep the stronger penalty), then test accuracy at
    the 0.5 threshold and test log-loss are reported for the winner.
    """
    grid = sorted(lambda_grid or DEFAULT_LAMBDA_GRID, reverse=True)
    y01, classes = _binary_targets(data.y)
    means, stds = standardization_stats(data.x[split.train_idx])
    xs = (data.x - means) / stds

    x_train, y_train = xs[split.train_idx], y01[split.train_idx]
    x_dev, y_dev = xs[split.dev_idx], y01[split.dev_idx]
    x_test, y_test = xs[split.test_idx], y01[split.test_idx]

    best = None
    w, b = None, 0.0
    for lam in grid:
        w, b, _ = solve_logistic(x_train, y_train, reg, lam, w0=w, b0=b)
        dev_ce = _mean_ce(w, b, x_dev, y_dev)
        if best is None or dev_ce < best[0]:
            best = (dev_ce, lam, w.copy(), b)
    dev_ce, lam, w, b = best

    model = LinearModel(
        kind="logistic", regularization=reg, lam=lam, weights=w, bias=b,
        feature_names=list(data.feature_names), feature_means=means,
        feature_stds=stds, classes=classes,
    )
    proba = _sigmoid(x_test @ w + b)
    accuracy = float(np.mean((proba >= 0.5) == (y_test == 1.0)))
    return LogisticFit(
        model=model,
        dev_cross_entropy=float(dev_ce),
        test_accuracy=accuracy,
        test_log_loss=_mean_ce(w, b, x_test, y_test),
        lambda_chosen=float(lam),
    )


# --- lasso -------------------------------------------------------------------


def solve_lasso(x: np.ndarray, y: np.ndarray, lam: float, tol: float = 1e-8,
                max_iter: int = 10_000, w0: np.ndarray | None = None):
    """Cyclic coordinate descent for 1/(2n)||y - b - Xw||^2 + lam*||w||_1.

    The intercept is the target mean (columns are expected centered;
    with standardized features this is exact). Convergence is declared
    when the largest coordinate change in a full sweep drops below
    ``tol``.

    Returns (w, b).

    Raises:
        NoConvergence: The sweep cap was reached first.
    """
    n, d = x.shape
    w = np.zeros(d) if w0 is None else w0.astype(float).copy()
    b = float(y.mean())
    col_scale = (x * x).sum(axis=0) / n
    residual = y - b - x @ w
    for _ in range(max_iter):
        max_delta = 0.0
        for j in range(d):
            if col_scale[j] == 0.0:
                w[j] = 0.0
                continue
            old = w[j]
            if old != 0.0:
                residual += x[:, j] * old
            rho = float(x[:, j] @ residual) / n
            new = _soft_threshold(rho, lam) / col_scale[j]
            if new != 0.0:
                residual -= x[:, j] * new
            w[j] = new
            max_delta = max(max_delta, abs(new - old))
        if max_delta < tol:
            return w, b
    raise NoConvergence(f"lasso did not converge in {max_iter} sweeps")


def lasso_kkt_residual(x: np.ndarray, y: np.ndarray, w: np.ndarray, b: float,
                       lam: float) -> float:
    """Largest violation of the lasso stationarity conditions.

    For zero coordinates the smooth gradient must stay within [-lam, lam];
    for active ones it must equal -lam * sign(w_j).
    """
    n = x.shape[0]
    grad = -(x.T @ (y - b - x @ w)) / n
    active = w != 0.0
    viol_zero = np.maximum(np.abs(grad[~active]) - lam, 0.0)
    viol_active = np.abs(grad[active] + lam * np.sign(w[active]))
    pieces = np.concatenate([viol_zero, viol_active])
    return float(pieces.max()) if pieces.size else 0.0


@dataclass(eq=False)
class LassoFit:
    model: LinearModel
    test_mse: float
    weight_report: list
    fold_test_mses: np.ndarray
    fold_lambdas: np.ndarray


def fit_lasso(data: GroupedDataset, lambda_grid=None, folds: int = 5,
              seed: int = 0, tol: float = 1e-8,
              max_iter: int = 10_000) -> LassoFit:
    """Group-aware cross-validated lasso regression.

    Within each of ``folds`` grouped splits, the penalty is chosen on
    the dev fold (lowest dev MSE; ties keep the stronger penalty) and
    scored on the test fold; ``test_mse`` is the mean across folds. The
    reported model is refit on all rows at the penalty chosen most
    often (ties toward the stronger one), and the weight report ranks
    its standardized coefficients by magnitude.
    """
    grid = sorted(lambda_grid or DEFAULT_LAMBDA_GRID, reverse=True)
    splits = group_k_fold(data, k=folds, seed=seed)

    fold_mses = []
    fold_lams = []
    for split in splits:
        means, stds = standardization_stats(data.x[split.train_idx])
        xs = (data.x - means) / stds
        x_train, y_train = xs[split.train_idx], data.y[split.train_idx]
        x_dev, y_dev = xs[split.dev_idx], data.y[split.dev_idx]
        x_test, y_test = xs[split.test_idx], data.y[split.test_idx]

        best = None
        w = None
        for lam in grid:
            w, b = solve_lasso(x_train, y_train, lam, tol=tol,
                               max_iter=max_iter, w0=w)
            dev_mse = float(np.mean((y_dev - (x_dev @ w + b)) ** 2))
            if best is None or dev_mse < best[0]:
                best = (dev_mse, lam)
        lam = best[1]
        w, b = solve_lasso(x_train, y_train, lam, tol=tol, max_iter=max_iter)
        fold_mses.append(float(np.mean((y_test - (x_test @ w + b)) ** 2)))
        fold_lams.append(lam)

    # Most frequently chosen penalty wins; ties resolve to the stronger one.
    values, counts = np.unique(fold_lams, return_counts=True)
    order = np.lexsort((-values, -counts))
    final_lam = float(values[order[0]])

    means, stds = standardization_stats(data.x)
    xs = (data.x - means) / stds
    w, b = solve_lasso(xs, data.y, final_lam, tol=tol, max_iter=max_iter)
    model = LinearModel(
        kind="linear", regularization="l1", lam=final_lam, weights=w, bias=b,
        feature_names=list(data.feature_names), feature_means=means,
        feature_stds=stds,
    )
    return LassoFit(
        model=model,
        test_mse=float(np.mean(fold_mses)),
        weight_report=model.weight_report(),
        fold_test_mses=np.array(fold_mses),
        fold_lambdas=np.array(fold_lams),
    )
