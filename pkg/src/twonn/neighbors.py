"""First/second nearest-neighbor search.

Three entry points produce identical results on their common domain:
brute force (any metric), an exact tree-backed search (euclidean), and a
precomputed-matrix reader. Ties are always broken by lowest index, so
outputs are deterministic and independent of thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import (
    EUCLIDEAN,
    PERIODIC,
    PRECOMPUTED,
    DistanceMatrix,
    Metric,
    PointSet,
    check_in_box,
)
from .errors import (
    DuplicatePoints,
    TooFewPoints,
    UnsupportedCombination,
    ValidationError,
)

# auto strategy: the tree only beats the SIMD brute kernel when queries prune
# well, i.e. low ambient dimension and enough points to amortize construction
ACCEL_MIN_POINTS = 2048
ACCEL_MAX_DIM = 3


@dataclass(frozen=True)
class NeighborInfo:
    """Two nearest neighbors of one point; indices refer to the original
    row numbering even when duplicates were dropped."""

    index: int
    r1: float
    r2: float
    idx1: int
    idx2: int


def _dedup_rows(points: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of each distinct row, ascending."""
    _, first = np.unique(points, axis=0, return_index=True)
    return np.sort(first)


def _finalize(
    r1sq: np.ndarray,
    r2sq: np.ndarray,
    idx1: np.ndarray,
    idx2: np.ndarray,
    orig: np.ndarray,
) -> list[NeighborInfo]:
    zero = np.flatnonzero(r1sq == 0.0)
    if zero.size:
        pairs = set()
        for i in zero:
            a, b = int(orig[i]), int(orig[idx1[i]])
            pairs.add((min(a, b), max(a, b)))
        raise DuplicatePoints(sorted(pairs))
    r1 = np.sqrt(r1sq)
    r2 = np.sqrt(r2sq)
    return [
        NeighborInfo(int(orig[i]), float(r1[i]), float(r2[i]), int(orig[idx1[i]]), int(orig[idx2[i]]))
        for i in range(len(orig))
    ]


def _prepare(ps: PointSet, metric: Metric, drop_duplicates: bool):
    if metric.kind == PRECOMPUTED:
        raise ValidationError("coordinate search needs a euclidean or periodic metric")
    check_in_box(ps, metric)
    if ps.n < 3:
        raise TooFewPoints(ps.n)
    if drop_duplicates:
        orig = _dedup_rows(ps.points)
        pts = ps.points[orig]
        if pts.shape[0] < 3:
            raise TooFewPoints(pts.shape[0])
    else:
        orig = np.arange(ps.n)
        pts = ps.points
    return pts, orig


def two_nearest_brute(
    ps: PointSet,
    metric: Metric = Metric(EUCLIDEAN),
    *,
    drop_duplicates: bool = False,
) -> list[NeighborInfo]:
    """Exact O(n^2) two-nearest-neighbor search under a euclidean or
    periodic metric."""
    pts, orig = _prepare(ps, metric, drop_duplicates)
    pts_t = np.ascontiguousarray(pts.T)
    r1sq, r2sq, idx1, idx2 = _kernels.two_nearest_dense(
        pts_t, metric.kind == PERIODIC, metric.box_array()
    )
    return _finalize(r1sq, r2sq, idx1, idx2, orig)


def two_nearest_accelerated(
    ps: PointSet,
    metric: Metric = Metric(EUCLIDEAN),
    *,
    drop_duplicates: bool = False,
    workers: int = -1,
) -> list[NeighborInfo]:
    """Tree-accelerated exact search, euclidean metric only.

    A kd-tree supplies candidate neighborhoods (rank-3 distances inflated
    by 1e-9 relative to absorb its independent rounding); final distances
    and tie-breaks are recomputed with the same kernel as the brute path,
    so results are bitwise identical to two_nearest_brute.
    """
    if metric.kind != EUCLIDEAN:
        raise UnsupportedCombination("accelerated search supports the euclidean metric only")
    pts, orig = _prepare(ps, metric, drop_duplicates)

    from scipy.spatial import cKDTree

    tree = cKDTree(pts)
    dist3, _ = tree.query(pts, k=3, workers=workers)
    radius = dist3[:, 2] * (1.0 + 1e-9)
    cands = tree.query_ball_point(pts, radius, workers=workers, return_sorted=False)
    offsets = np.zeros(len(cands) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(c) for c in cands])
    flat = np.fromiter(
        (j for c in cands for j in c), dtype=np.int64, count=offsets[-1]
    )
    pts_t = np.ascontiguousarray(pts.T)
    r1sq, r2sq, idx1, idx2 = _kernels.two_nearest_subsets(
        pts_t, flat, offsets, False, metric.box_array()
    )
    return _finalize(r1sq, r2sq, idx1, idx2, orig)


def two_nearest_from_matrix(
    dm: DistanceMatrix | np.ndarray,
    *,
    drop_duplicates: bool = False,
) -> list[NeighborInfo]:
    """Two smallest off-diagonal entries per row of a distance matrix."""
    if not isinstance(dm, DistanceMatrix):
        dm = DistanceMatrix(np.asarray(dm, dtype=np.float64))
    if dm.n < 3:
        raise TooFewPoints(dm.n)
    d = dm.d
    orig = np.arange(dm.n)
    if drop_duplicates:
        keep = _matrix_dedup(d)
        if keep.size < 3:
            raise TooFewPoints(int(keep.size))
        d = d[np.ix_(keep, keep)]
        orig = keep
    n = d.shape[0]
    r1 = np.empty(n)
    r2 = np.empty(n)
    idx1 = np.empty(n, dtype=np.int64)
    idx2 = np.empty(n, dtype=np.int64)
    # chunked so the masked copy never exceeds a few MB
    step = max(1, int(4e6) // max(n, 1))
    for lo in range(0, n, step):
        hi = min(lo + step, n)
        block = d[lo:hi].copy()
        rows = np.arange(hi - lo)
        block[rows, np.arange(lo, hi)] = np.inf
        j1 = np.argmin(block, axis=1)  # first occurrence = lowest index
        v1 = block[rows, j1]
        block[rows, j1] = np.inf
        j2 = np.argmin(block, axis=1)
        v2 = block[rows, j2]
        r1[lo:hi] = v1
        r2[lo:hi] = v2
        idx1[lo:hi] = j1
        idx2[lo:hi] = j2
    zero = np.flatnonzero(r1 == 0.0)
    if zero.size:
        pairs = set()
        for i in zero:
            a, b = int(orig[i]), int(orig[idx1[i]])
            pairs.add((min(a, b), max(a, b)))
        raise DuplicatePoints(sorted(pairs))
    return [
        NeighborInfo(int(orig[i]), float(r1[i]), float(r2[i]), int(orig[idx1[i]]), int(orig[idx2[i]]))
        for i in range(n)
    ]


def _matrix_dedup(d: np.ndarray) -> np.ndarray:
    """Keep the lowest index of every group linked by zero distances."""
    n = d.shape[0]
    parent = np.arange(n)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    zi, zj = np.nonzero(d == 0.0)
    for a, b in zip(zi, zj):
        if a >= b:
            continue
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(i) for i in range(n)])
    return np.flatnonzero(roots == np.arange(n))


def two_nearest(
    ps: PointSet,
    metric: Metric = Metric(EUCLIDEAN),
    *,
    strategy: str = "auto",
    drop_duplicates: bool = False,
    workers: int = -1,
) -> list[NeighborInfo]:
    """Dispatch between the brute and accelerated searches.

    'auto' picks the tree only where it reliably wins (euclidean, low
    ambient dimension, enough points); both give identical results.
    """
    if strategy == "brute":
        return two_nearest_brute(ps, metric, drop_duplicates=drop_duplicates)
    if strategy == "accelerated":
        return two_nearest_accelerated(
            ps, metric, drop_duplicates=drop_duplicates, workers=workers
        )
    if strategy != "auto":
        raise ValidationError(f"unknown strategy {strategy!r}")
    if (
        metric.kind == EUCLIDEAN
        and ps.n >= ACCEL_MIN_POINTS
        and ps.dim_embed <= ACCEL_MAX_DIM
    ):
        return two_nearest_accelerated(
            ps, metric, drop_duplicates=drop_duplicates, workers=workers
        )
    return two_nearest_brute(ps, metric, drop_duplicates=drop_duplicates)
