"""Block-decimation analysis of the estimated dimension versus sample size.

Partitioning the dataset into disjoint blocks of equal size and estimating
the dimension inside each block probes the estimate as a function of scale:
smaller blocks mean larger neighbor distances. A plateau in d(block_size)
marks the range where the dimension is well defined; noise directions only
get resolved once blocks are large enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import DistanceMatrix, Metric, PointSet, matrix_unchecked
from .errors import (
    BlockTooLarge,
    BlockTooSmall,
    ScanError,
    TwonnError,
    ValidationError,
)
from .estimator import CDF_FIT, estimate_id
from .neighbors import two_nearest, two_nearest_from_matrix

MIN_BLOCK_DEFAULT = 20


@dataclass(frozen=True)
class ScanPoint:
    block_size: int
    d_mean: float
    d_std: float
    n_blocks: int


@dataclass(frozen=True)
class ScanCurve:
    points: tuple[ScanPoint, ...]
    seed: int

    def block_sizes(self) -> list[int]:
        return [p.block_size for p in self.points]


@dataclass(frozen=True)
class PlateauReport:
    lo: int | None
    hi: int | None
    d_plateau: float | None
    found: bool


def default_block_grid(n_total: int, min_block: int = MIN_BLOCK_DEFAULT) -> list[int]:
    """Geometric grid n, n/2, n/4, ... truncated below min_block, ascending."""
    sizes = []
    b = n_total
    while b >= max(min_block, 3):
        sizes.append(b)
        b //= 2
    if not sizes:
        raise BlockTooSmall(n_total)
    return sorted(set(sizes))


def decimate(n_total: int, block_size: int, seed) -> list[np.ndarray]:
    """Disjoint index blocks of exactly block_size from a seeded uniform
    shuffle of range(n_total); remainder indices are discarded."""
    if block_size < 3:
        raise BlockTooSmall(block_size)
    if block_size > n_total:
        raise BlockTooLarge(block_size, n_total)
    perm = np.random.default_rng(seed).permutation(n_total)
    n_blocks = n_total // block_size
    return [perm[i * block_size : (i + 1) * block_size] for i in range(n_blocks)]


def scan(
    data: PointSet | DistanceMatrix,
    metric: Metric = Metric("euclidean"),
    block_sizes: Sequence[int] | None = None,
    *,
    discard_fraction: float = 0.10,
    method: str = CDF_FIT,
    seed: int = 0,
    min_block: int = MIN_BLOCK_DEFAULT,
    strategy: str = "auto",
    drop_duplicates: bool = False,
) -> ScanCurve:
    """Estimate the dimension on disjoint blocks over a grid of block sizes.

    Neighbors are recomputed inside each block (never filtered from the
    full-set neighbor lists); each block size gets its own seeded shuffle,
    derived deterministically from `seed`.
    """
    from_matrix = isinstance(data, DistanceMatrix)
    n_total = data.n
    if block_sizes is None:
        block_sizes = default_block_grid(n_total, min_block)
    sizes = [int(b) for b in block_sizes]
    if len(set(sizes)) != len(sizes):
        raise ValidationError("block sizes must be distinct")
    sizes = sorted(sizes)
    for b in sizes:
        if b < 3:
            raise BlockTooSmall(b)
        if b > n_total:
            raise BlockTooLarge(b, n_total)

    children = np.random.SeedSequence(seed).spawn(len(sizes))
    curve = []
    for b, child in zip(sizes, children):
        blocks = decimate(n_total, b, child)
        d_hats = np.empty(len(blocks))
        for bi, idx in enumerate(blocks):
            try:
                if from_matrix:
                    sub = matrix_unchecked(data.d[np.ix_(idx, idx)])
                    ni = two_nearest_from_matrix(sub, drop_duplicates=drop_duplicates)
                else:
                    sub = PointSet(data.points[idx])
                    ni = two_nearest(
                        sub, metric, strategy=strategy, drop_duplicates=drop_duplicates
                    )
                d_hats[bi] = estimate_id(ni, discard_fraction, method).d_hat
            except TwonnError as exc:
                raise ScanError(b, bi, exc) from exc
        curve.append(
            ScanPoint(
                block_size=b,
                d_mean=float(np.mean(d_hats)),
                d_std=float(np.std(d_hats)),
                n_blocks=len(blocks),
            )
        )
    return ScanCurve(points=tuple(curve), seed=seed)


def detect_plateau(
    curve: ScanCurve, rel_tol: float = 0.05, min_points: int = 3
) -> PlateauReport:
    """Longest contiguous run of the curve whose d_mean spread satisfies
    (max - min) / mean <= rel_tol, at least min_points long. Ties go to
    the run widest in log block-size, then to the earliest."""
    pts = curve.points
    means = np.array([p.d_mean for p in pts])
    sizes = [p.block_size for p in pts]
    best = None  # (length, log width, -start, lo_idx, hi_idx)
    for i in range(len(pts)):
        for j in range(i + min_points - 1, len(pts)):
            window = means[i : j + 1]
            center = window.mean()
            if center <= 0:
                continue
            if (window.max() - window.min()) / center > rel_tol:
                continue
            key = (j - i + 1, np.log(sizes[j] / sizes[i]), -i, i, j)
            if best is None or key > best:
                best = key
    if best is None:
        return PlateauReport(lo=None, hi=None, d_plateau=None, found=False)
    _, _, _, i, j = best
    return PlateauReport(
        lo=sizes[i],
        hi=sizes[j],
        d_plateau=float(means[i : j + 1].mean()),
        found=True,
    )
