"""Compiled distance and two-nearest-neighbor kernels.

Every code path that produces a distance used in an estimate goes through the
scalar accumulation implemented here (per-coordinate squared terms summed in
ascending coordinate order), so brute-force, candidate-refinement, and
pairwise-matrix results are bitwise comparable.
"""

from __future__ import annotations

import warnings

import numpy as np
from numba import njit, prange

# stale system TBB merely disables that threading layer; not actionable here
warnings.filterwarnings("ignore", message=".*TBB.*")


@njit(cache=True)
def sqdist_euclidean(a, b):
    s = 0.0
    for k in range(a.shape[0]):
        d = a[k] - b[k]
        s += d * d
    return s


@njit(cache=True)
def sqdist_periodic(a, b, box):
    s = 0.0
    for k in range(a.shape[0]):
        d = abs(a[k] - b[k])
        if box[k] - d < d:
            d = box[k] - d
        s += d * d
    return s


@njit(cache=True, parallel=True)
def two_nearest_dense(pts_t, periodic, box):
    """Exact two smallest distances per point, full O(n^2) search.

    pts_t is the (dim, n) transposed coordinate array: the inner loop then
    streams contiguously over points. Ties are broken by lowest index.
    Returns squared distances.
    """
    dim, n = pts_t.shape
    r1 = np.empty(n)
    r2 = np.empty(n)
    i1 = np.full(n, -1, np.int64)
    i2 = np.full(n, -1, np.int64)
    for i in prange(n):
        buf = np.zeros(n)
        if periodic:
            for k in range(dim):
                a = pts_t[k, i]
                length = box[k]
                for j in range(n):
                    d = abs(a - pts_t[k, j])
                    if length - d < d:
                        d = length - d
                    buf[j] += d * d
        else:
            for k in range(dim):
                a = pts_t[k, i]
                for j in range(n):
                    d = a - pts_t[k, j]
                    buf[j] += d * d
        b1 = np.inf
        b2 = np.inf
        j1 = -1
        j2 = -1
        for j in range(n):
            if j == i:
                continue
            s = buf[j]
            if s < b1 or (s == b1 and j < j1):
                b2 = b1
                j2 = j1
                b1 = s
                j1 = j
            elif s < b2 or (s == b2 and j < j2):
                b2 = s
                j2 = j
        r1[i] = b1
        r2[i] = b2
        i1[i] = j1
        i2[i] = j2
    return r1, r2, i1, i2


@njit(cache=True, parallel=True)
def two_nearest_subsets(pts_t, cand_flat, offsets, periodic, box):
    """Same selection as two_nearest_dense but restricted to per-point
    candidate lists (cand_flat[offsets[i]:offsets[i+1]] for point i).

    Candidate lists may arrive in any order; the lexicographic
    (distance, index) comparison makes the result order-independent.
    """
    dim, n = pts_t.shape
    r1 = np.empty(n)
    r2 = np.empty(n)
    i1 = np.full(n, -1, np.int64)
    i2 = np.full(n, -1, np.int64)
    for i in prange(n):
        b1 = np.inf
        b2 = np.inf
        j1 = -1
        j2 = -1
        for c in range(offsets[i], offsets[i + 1]):
            j = cand_flat[c]
            if j == i:
                continue
            s = 0.0
            if periodic:
                for k in range(dim):
                    d = abs(pts_t[k, i] - pts_t[k, j])
                    if box[k] - d < d:
                        d = box[k] - d
                    s += d * d
            else:
                for k in range(dim):
                    d = pts_t[k, i] - pts_t[k, j]
                    s += d * d
            if s < b1 or (s == b1 and j < j1):
                b2 = b1
                j2 = j1
                b1 = s
                j1 = j
            elif s < b2 or (s == b2 and j < j2):
                b2 = s
                j2 = j
        r1[i] = b1
        r2[i] = b2
        i1[i] = j1
        i2[i] = j2
    return r1, r2, i1, i2


@njit(cache=True, parallel=True)
def pairwise_sqdist(pts_t, periodic, box):
    """Full (n, n) squared-distance matrix; symmetric bitwise because
    (a-b)^2 and (b-a)^2 round identically."""
    dim, n = pts_t.shape
    out = np.zeros((n, n))
    for i in prange(n):
        if periodic:
            for k in range(dim):
                a = pts_t[k, i]
                length = box[k]
                for j in range(n):
                    d = abs(a - pts_t[k, j])
                    if length - d < d:
                        d = length - d
                    out[i, j] += d * d
        else:
            for k in range(dim):
                a = pts_t[k, i]
                for j in range(n):
                    d = a - pts_t[k, j]
                    out[i, j] += d * d
    return out


def warmup():
    """Force-compile the kernels on toy input (first call in a process
    otherwise pays JIT latency inside timed code)."""
    pts = np.array([[0.0, 0.0], [0.25, 0.0], [0.5, 0.5]])
    box = np.array([1.0, 1.0])
    for periodic in (False, True):
        two_nearest_dense(np.ascontiguousarray(pts.T), periodic, box)
        two_nearest_subsets(
            np.ascontiguousarray(pts.T),
            np.array([0, 1, 2, 0, 1, 2, 0, 1, 2], np.int64),
            np.array([0, 3, 6, 9], np.int64),
            periodic,
            box,
        )
        pairwise_sqdist(np.ascontiguousarray(pts.T), periodic, box)
        sqdist_euclidean(pts[0], pts[1])
        sqdist_periodic(pts[0], pts[1], box)
