"""Intrinsic-dimension estimation from first/second neighbor distances.

The ratio mu = r2/r1 of each point's second to first neighbor distance
follows a Pareto law f(mu) = d*mu^(-d-1) wherever density is locally
uniform, so d is recovered either by fitting the empirical cumulate on
log axes with a line through the origin (the default) or by the
closed-form maximum-likelihood estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoSpread, TooFewAfterDiscard, ValidationError
from .neighbors import NeighborInfo

CDF_FIT = "cdf_fit"
MLE = "mle"


@dataclass(frozen=True, eq=False)
class MuSample:
    """Per-point ratios r2/r1, order preserved; every value >= 1."""

    mu: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.mu, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError("mu sample must be one-dimensional")
        if not np.isfinite(arr).all() or (arr < 1.0).any():
            raise ValidationError("mu values must be finite and >= 1")
        arr.setflags(write=False)
        object.__setattr__(self, "mu", arr)

    @property
    def n(self) -> int:
        return self.mu.shape[0]


@dataclass(frozen=True)
class CdfPoint:
    """One point of the fit plane: x = log(mu), y = -log(1 - F_emp(mu)).
    The final order statistic has F = 1 and carries y = inf; it is never
    eligible for fitting."""

    x: float
    y: float

    @property
    def fittable(self) -> bool:
        return math.isfinite(self.y)


@dataclass(frozen=True)
class Estimate:
    d_hat: float
    method: str
    n_total: int
    n_used: int
    discard_fraction: float
    rms_residual: float


@dataclass(frozen=True)
class ShellSample:
    """Hyperspherical shell volumes around one point and their ratio.

    Under a homogeneous Poisson process of rate `density`, each shell
    volume is Exponential(density) and the ratio has cdf R/(1+R)."""

    delta_v1: float
    delta_v2: float
    ratio: float
    density: float


def compute_mu(ni: Sequence[NeighborInfo]) -> MuSample:
    """Elementwise r2/r1, order preserved."""
    mu = np.fromiter((x.r2 / x.r1 for x in ni), dtype=np.float64, count=len(ni))
    return MuSample(mu)


def _cdf_arrays(mu_sorted: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x = log(mu) and y = -log(1 - i/N) for ascending mu, i = 1..N.
    The i = N entry is +inf."""
    n = mu_sorted.shape[0]
    x = np.log(mu_sorted)
    y = np.empty(n)
    i = np.arange(1, n)
    y[: n - 1] = -np.log((n - i) / n)
    y[n - 1] = np.inf
    return x, y


def empirical_cdf(mu: MuSample) -> list[CdfPoint]:
    """Empirical cumulate of mu: sort ascending and assign F = i/N."""
    if mu.n == 0:
        raise ValidationError("empty mu sample")
    x, y = _cdf_arrays(np.sort(mu.mu))
    return [CdfPoint(float(a), float(b)) for a, b in zip(x, y)]


def _fit_xy(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    sxx = float(np.add.reduce(x * x))
    if sxx == 0.0:
        raise NoSpread()
    sxy = float(np.add.reduce(x * y))
    slope = sxy / sxx
    resid = y - slope * x
    rms = math.sqrt(float(np.add.reduce(resid * resid)) / x.shape[0])
    return slope, rms


def fit_line_through_origin(pts: Sequence[CdfPoint]) -> tuple[float, float]:
    """Least-squares slope of y = s*x through the origin, plus the RMS
    residual. Points flagged infinite (the F = 1 order statistic) are
    ignored."""
    finite = [p for p in pts if math.isfinite(p.y)]
    if not finite:
        raise NoSpread("no fittable points")
    x = np.array([p.x for p in finite])
    y = np.array([p.y for p in finite])
    return _fit_xy(x, y)


def _discard_count(n: int, fraction: float, *, at_least_one: bool) -> int:
    if not 0.0 <= fraction < 1.0:
        raise ValidationError(f"discard fraction must be in [0, 1), got {fraction}")
    # round before ceil so 0.1 * 2500 trims 250 points, not 251
    k = math.ceil(round(fraction * n, 9))
    if at_least_one:
        k = max(k, 1)
    return k


def estimate_id(
    ni: Sequence[NeighborInfo],
    discard_fraction: float = 0.10,
    method: str = CDF_FIT,
) -> Estimate:
    """Estimate the intrinsic dimension from neighbor distances.

    Sorts mu ascending, drops the ceil(discard_fraction * N) largest values
    (the F = 1 order statistic always goes, even at fraction 0), then fits
    the empirical-cumulate line or evaluates the likelihood closed form on
    the kept values.
    """
    mu = compute_mu(ni)
    return _estimate_from_mu(mu, discard_fraction, method, at_least_one=True)


def estimate_id_mle(mu: MuSample, discard_fraction: float = 0.0) -> Estimate:
    """Closed-form likelihood estimate d = n / sum(log mu) over the sample
    left after dropping the ceil(discard_fraction * N) largest values."""
    return _estimate_from_mu(mu, discard_fraction, MLE, at_least_one=False)


def _estimate_from_mu(
    mu: MuSample, discard_fraction: float, method: str, *, at_least_one: bool
) -> Estimate:
    if method not in (CDF_FIT, MLE):
        raise ValidationError(f"unknown method {method!r}")
    n = mu.n
    k = _discard_count(n, discard_fraction, at_least_one=at_least_one)
    n_used = n - k
    if n_used < 2:
        raise TooFewAfterDiscard(max(n_used, 0))
    mu_sorted = np.sort(mu.mu)
    x, y = _cdf_arrays(mu_sorted)
    xk = x[:n_used]
    yk = y[:n_used]

    if method == CDF_FIT:
        d_hat, rms = _fit_xy(xk, yk)
    else:
        log_sum = float(np.add.reduce(xk))
        if log_sum == 0.0:
            raise NoSpread()
        d_hat = n_used / log_sum
        finite = np.isfinite(yk)
        resid = yk[finite] - d_hat * xk[finite]
        rms = math.sqrt(float(np.add.reduce(resid * resid)) / max(int(finite.sum()), 1))
    return Estimate(
        d_hat=d_hat,
        method=method,
        n_total=n,
        n_used=n_used,
        discard_fraction=discard_fraction,
        rms_residual=rms,
    )


def kept_mask(n: int, discard_fraction: float) -> np.ndarray:
    """Boolean mask over the ascending-mu order marking the points an
    estimate_id fit uses (False for the discarded tail and the F = 1
    point)."""
    k = _discard_count(n, discard_fraction, at_least_one=True)
    mask = np.zeros(n, dtype=bool)
    mask[: n - k] = True
    return mask


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in d dimensions: pi^(d/2) / Gamma(d/2 + 1)."""
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def shell_samples(
    ni: Sequence[NeighborInfo], dim: int, density: float
) -> list[ShellSample]:
    """Per-point shell volumes delta_v1 = w_d * r1^d and
    delta_v2 = w_d * (r2^d - r1^d), with their ratio.

    delta_v2 is evaluated in log space (expm1) to avoid cancellation when
    r1 and r2 are nearly equal.
    """
    w = unit_ball_volume(dim)
    out = []
    for x in ni:
        v1 = w * x.r1**dim
        v2 = v1 * math.expm1(dim * (math.log(x.r2) - math.log(x.r1)))
        out.append(ShellSample(v1, v2, v2 / v1, density))
    return out
