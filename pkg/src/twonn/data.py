"""Core data containers: point sets, metrics, and distance matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    NegativeDistance,
    NonFinite,
    NonzeroDiagonal,
    NotSquare,
    OutsideBox,
    RaggedRows,
    TooFewPoints,
    ValidationError,
)

SYMMETRY_RTOL = 1e-9

EUCLIDEAN = "euclidean"
PERIODIC = "periodic"
PRECOMPUTED = "precomputed"


@dataclass(frozen=True)
class Metric:
    """Distance definition: plain euclidean, minimum-image periodic with the
    given box lengths, or precomputed (distances arrive as a matrix)."""

    kind: str
    box_lengths: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, PERIODIC, PRECOMPUTED):
            raise ValidationError(f"unknown metric kind {self.kind!r}")
        if self.kind == PERIODIC:
            if not self.box_lengths:
                raise ValidationError("periodic metric requires box lengths")
            lengths = tuple(float(x) for x in self.box_lengths)
            if any(not np.isfinite(x) or x <= 0 for x in lengths):
                raise ValidationError("periodic box lengths must be positive")
            object.__setattr__(self, "box_lengths", lengths)
        elif self.box_lengths is not None:
            raise ValidationError(f"{self.kind} metric takes no box lengths")

    @staticmethod
    def euclidean() -> "Metric":
        return Metric(EUCLIDEAN)

    @staticmethod
    def periodic(box_lengths) -> "Metric":
        return Metric(PERIODIC, tuple(float(x) for x in box_lengths))

    @staticmethod
    def precomputed() -> "Metric":
        return Metric(PRECOMPUTED)

    def box_array(self) -> np.ndarray:
        if self.kind == PERIODIC:
            return np.asarray(self.box_lengths, dtype=np.float64)
        return np.empty(0, dtype=np.float64)


def _as_table(raw) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (ValueError, TypeError) as exc:
        raise RaggedRows(str(exc)) from exc
    if arr.ndim != 2:
        raise RaggedRows(f"expected a 2-D table, got {arr.ndim} dimension(s)")
    return arr


def _first_nonfinite(arr: np.ndarray) -> tuple[int, int] | None:
    finite = np.isfinite(arr)
    if finite.all():
        return None
    row, col = np.argwhere(~finite)[0]
    return int(row), int(col)


@dataclass(frozen=True, eq=False)
class PointSet:
    """N points in a D-dimensional embedding, immutable, all coordinates
    finite. n >= 3 is required by the estimation entry points, not here,
    so generators may emit smaller sets."""

    points: np.ndarray

    def __post_init__(self):
        arr = _as_table(self.points)
        bad = _first_nonfinite(arr)
        if bad is not None:
            raise NonFinite(*bad)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim_embed(self) -> int:
        return self.points.shape[1]


def validate_pointset(raw) -> PointSet:
    """Validate a rectangular table of coordinates for estimation use."""
    arr = _as_table(raw)
    if arr.shape[0] < 3:
        raise TooFewPoints(arr.shape[0])
    return PointSet(arr)


def check_in_box(ps: PointSet, metric: Metric) -> None:
    """Periodic metrics require every coordinate in [0, box_length);
    out-of-box points are an error, never silently wrapped."""
    if metric.kind != PERIODIC:
        return
    box = metric.box_array()
    if box.shape[0] != ps.dim_embed:
        raise DimensionMismatch(ps.dim_embed, box.shape[0])
    inside = (ps.points >= 0.0) & (ps.points < box)
    if not inside.all():
        row, col = np.argwhere(~inside)[0]
        raise OutsideBox(int(row), int(col))


def distance(a, b, metric: Metric = Metric(EUCLIDEAN)) -> float:
    """Distance between two points under the given metric."""
    av = np.ascontiguousarray(a, dtype=np.float64).ravel()
    bv = np.ascontiguousarray(b, dtype=np.float64).ravel()
    if av.shape[0] != bv.shape[0]:
        raise DimensionMismatch(bv.shape[0], av.shape[0])
    if metric.kind == EUCLIDEAN:
        return float(np.sqrt(_kernels.sqdist_euclidean(av, bv)))
    if metric.kind == PERIODIC:
        box = metric.box_array()
        if box.shape[0] != av.shape[0]:
            raise DimensionMismatch(av.shape[0], box.shape[0])
        for name, v in (("a", av), ("b", bv)):
            bad = (v < 0.0) | (v >= box)
            if bad.any():
                raise OutsideBox(0 if name == "a" else 1, int(np.flatnonzero(bad)[0]))
        return float(np.sqrt(_kernels.sqdist_periodic(av, bv, box)))
    raise ValidationError("distance() needs a euclidean or periodic metric")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric nonnegative distance matrix with zero diagonal."""

    d: np.ndarray

    def __post_init__(self):
        arr = _validate_matrix(np.ascontiguousarray(self.d, dtype=np.float64))
        arr.setflags(write=False)
        object.__setattr__(self, "d", arr)

    @property
    def n(self) -> int:
        return self.d.shape[0]


def matrix_unchecked(arr: np.ndarray) -> DistanceMatrix:
    """Wrap an array already known to satisfy the matrix invariants
    (symmetric submatrices, freshly computed pairwise matrices)."""
    dm = object.__new__(DistanceMatrix)
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    object.__setattr__(dm, "d", arr)
    return dm


def _validate_matrix(arr: np.ndarray) -> np.ndarray:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        rows = arr.shape[0] if arr.ndim >= 1 else 0
        cols = arr.shape[1] if arr.ndim == 2 else 0
        raise NotSquare(rows, cols)
    bad = _first_nonfinite(arr)
    if bad is not None:
        raise NonFinite(*bad)
    n = arr.shape[0]
    scale = np.abs(arr).max(initial=0.0)
    diag = np.abs(np.diagonal(arr))
    if (diag > SYMMETRY_RTOL * scale).any():
        i = int(np.argmax(diag > SYMMETRY_RTOL * scale))
        raise NonzeroDiagonal(i, float(arr[i, i]))
    gap = np.abs(arr - arr.T)
    tol = SYMMETRY_RTOL * np.maximum(np.abs(arr), np.abs(arr.T))
    viol = gap > tol
    if viol.any():
        i, j = np.argwhere(viol)[0]
        raise AsymmetricMatrix(int(i), int(j), float(arr[i, j]), float(arr[j, i]))
    # symmetrize residual rounding by averaging
    sym = 0.5 * (arr + arr.T)
    np.fill_diagonal(sym, 0.0)
    neg = sym < 0.0
    if neg.any():
        i, j = np.argwhere(neg)[0]
        raise NegativeDistance(int(i), int(j), float(arr[i, j]))
    return sym


def pairwise_distances(ps: PointSet, metric: Metric = Metric(EUCLIDEAN)) -> DistanceMatrix:
    """Dense pairwise distance matrix under a euclidean or periodic metric.

    O(n^2) memory; meant for moderate n (cross-checks, matrix export)."""
    if metric.kind == PRECOMPUTED:
        raise ValidationError("pairwise_distances needs coordinates, not a precomputed metric")
    check_in_box(ps, metric)
    pts_t = np.ascontiguousarray(ps.points.T)
    sq = _kernels.pairwise_sqdist(pts_t, metric.kind == PERIODIC, metric.box_array())
    return matrix_unchecked(np.sqrt(sq))
