"""Exact density-based clustering over 2-D gaze points.

Semantics are deliberately pinned down so runs are reproducible and
comparable against a brute-force reference:

* Euclidean metric, closed ball: j is a neighbor of i iff d(i, j) <= eps.
* Neighborhoods are self-inclusive, so a point counts toward its own
  core test.
* A point is core iff its neighborhood holds at least min_pts points.
* Clusters are discovered by scanning points in index order; each
  cluster is fully expanded (breadth-first over core neighborhoods)
  before the scan continues, so a border point reachable from several
  clusters always joins the earliest-discovered one.
* Cluster labels count up from 0 in discovery order; noise is -1.

Neighbor search is a blocked O(n^2) pairwise scan by default. Above
:data:`GRID_THRESHOLD` points a uniform grid (cell side = eps) prunes the
candidate set; the arithmetic per surviving pair is identical, so both
paths label identically.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput

NOISE = -1

#: Point count above which the uniform-grid index is used automatically.
GRID_THRESHOLD = 20_000

_BLOCK = 512


@dataclass(frozen=True)
class DbscanParams:
    epsilon: float
    min_pts: int

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.min_pts < 1:
            raise ValueError("min_pts must be at least 1")


@dataclass(eq=False)
class ClusterLabeling:
    """Result of one clustering pass.

    labels[i] is the cluster id of point i (0-based, discovery order) or
    NOISE. core_mask marks points that met the min_pts density test.
    """

    labels: np.ndarray
    n_clusters: int
    core_mask: np.ndarray

    def label_counts(self) -> dict[int, int]:
        """Size of every label, counting noise as a label of its own."""
        uniq, counts = np.unique(self.labels, return_counts=True)
        return {int(u): int(c) for u, c in zip(uniq, counts)}

    def distinct_labels(self) -> int:
        return len(np.unique(self.labels))

    def cluster_sizes(self) -> np.ndarray:
        """Sizes of real clusters only, indexed by cluster id."""
        return np.bincount(self.labels[self.labels >= 0],
                           minlength=self.n_clusters)


def pairwise_sq_dists(points: np.ndarray) -> np.ndarray:
    """Full (n, n) squared-distance matrix, computed blockwise.

    Uses the same per-pair expression as the internal scan, so feeding
    the result back through ``_sq_dists`` changes nothing but speed.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    out = np.empty((n, n), dtype=float)
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        diff = pts[lo:hi, None, :] - pts[None, :, :]
        out[lo:hi] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


class _BruteNeighbors:
    def __init__(self, pts: np.ndarray, eps2: float, sq_dists=None):
        self.pts = pts
        self.eps2 = eps2
        self.sq = sq_dists

    def _block_mask(self, rows: np.ndarray) -> np.ndarray:
        if self.sq is not None:
            return self.sq[rows] <= self.eps2
        diff = self.pts[rows, None, :] - self.pts[None, :, :]
        return np.einsum("ijk,ijk->ij", diff, diff) <= self.eps2

    def counts(self) -> np.ndarray:
        n = self.pts.shape[0]
        counts = np.empty(n, dtype=np.int64)
        for lo in range(0, n, _BLOCK):
            rows = np.arange(lo, min(lo + _BLOCK, n))
            counts[rows] = self._block_mask(rows).sum(axis=1)
        return counts

    def any_neighbor_of(self, rows: np.ndarray) -> np.ndarray:
        """Boolean mask of points within eps of any of ``rows``."""
        n = self.pts.shape[0]
        hit = np.zeros(n, dtype=bool)
        for lo in range(0, rows.size, _BLOCK):
            hit |= self._block_mask(rows[lo:lo + _BLOCK]).any(axis=0)
        return hit


class _GridNeighbors:
    """Uniform grid with cell side eps; candidates come from 3x3 cells."""

    def __init__(self, pts: np.ndarray, eps: float):
        self.pts = pts
        self.eps2 = eps * eps
        mins = pts.min(axis=0)
        cells = np.floor((pts - mins) / eps).astype(np.int64)
        self.n_cols = int(cells[:, 1].max()) + 3
        keys = (cells[:, 0] + 1) * self.n_cols + (cells[:, 1] + 1)
        order = np.argsort(keys, kind="stable")
        self.order = order
        self.sorted_keys = keys[order]
        self.keys = keys

    def _candidates(self, key: int) -> np.ndarray:
        cand = []
        for dr in (-self.n_cols, 0, self.n_cols):
            for dc in (-1, 0, 1):
                k = key + dr + dc
                lo = np.searchsorted(self.sorted_keys, k, side="left")
                hi = np.searchsorted(self.sorted_keys, k, side="right")
                if hi > lo:
                    cand.append(self.order[lo:hi])
        return np.concatenate(cand) if cand else np.empty(0, dtype=np.int64)

    def counts(self) -> np.ndarray:
        n = self.pts.shape[0]
        counts = np.empty(n, dtype=np.int64)
        for key in np.unique(self.sorted_keys):
            members = self._members(key)
            cand = self._candidates(int(key))
            diff = self.pts[members, None, :] - self.pts[cand][None, :, :]
            d2 = np.einsum("ijk,ijk->ij", diff, diff)
            counts[members] = (d2 <= self.eps2).sum(axis=1)
        return counts

    def _members(self, key) -> np.ndarray:
        lo = np.searchsorted(self.sorted_keys, key, side="left")
        hi = np.searchsorted(self.sorted_keys, key, side="right")
        return self.order[lo:hi]

    def any_neighbor_of(self, rows: np.ndarray) -> np.ndarray:
        n = self.pts.shape[0]
        hit = np.zeros(n, dtype=bool)
        for key in np.unique(self.keys[rows]):
            members = rows[self.keys[rows] == key]
            cand = self._candidates(int(key))
            diff = self.pts[cand, None, :] - self.pts[members][None, :, :]
            d2 = np.einsum("ijk,ijk->ij", diff, diff)
            hit[cand] |= (d2 <= self.eps2).any(axis=1)
        return hit


def dbscan(points, params: DbscanParams, use_grid: bool | None = None,
           _sq_dists=None) -> ClusterLabeling:
    """Cluster ``points`` (an (n, d) array) under ``params``.

    ``use_grid`` forces or forbids the grid index (2-D points only);
    by default it engages above :data:`GRID_THRESHOLD` points.
    ``_sq_dists`` optionally supplies a precomputed squared-distance
    matrix from :func:`pairwise_sq_dists`; results are identical.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DegenerateInput("points must be a non-empty (n, d) array")
    n = pts.shape[0]
    eps2 = params.epsilon * params.epsilon

    if use_grid is None:
        use_grid = n > GRID_THRESHOLD and pts.shape[1] == 2 and _sq_dists is None
    if use_grid:
        if pts.shape[1] != 2:
            raise DegenerateInput("grid index supports 2-D points only")
        index = _GridNeighbors(pts, params.epsilon)
    else:
        index = _BruteNeighbors(pts, eps2, sq_dists=_sq_dists)

    core = index.counts() >= params.min_pts
    labels = np.full(n, NOISE, dtype=np.int64)
    cluster = 0
    for seed in range(n):
        if labels[seed] != NOISE or not core[seed]:
            continue
        labels[seed] = cluster
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            expanders = frontier[core[frontier]]
            if expanders.size == 0:
                break
            reached = index.any_neighbor_of(expanders)
            fresh = np.flatnonzero(reached & (labels == NOISE))
            labels[fresh] = cluster
            frontier = fresh
        cluster += 1
    return ClusterLabeling(labels=labels, n_clusters=cluster, core_mask=core)
