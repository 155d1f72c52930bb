"""TWO-NN intrinsic dimension estimation.

Estimates the intrinsic dimension of a dataset from each point's first and
second nearest-neighbor distances, with a block-decimation scan to read the
dimension as a function of scale, synthetic benchmark generators, and a CLI.
"""

from .data import (
    DistanceMatrix,
    Metric,
    PointSet,
    distance,
    pairwise_distances,
    validate_pointset,
)
from .errors import TwonnError
from .estimator import (
    CdfPoint,
    Estimate,
    MuSample,
    ShellSample,
    compute_mu,
    empirical_cdf,
    estimate_id,
    estimate_id_mle,
    fit_line_through_origin,
    shell_samples,
    unit_ball_volume,
)
from .generators import GeneratorSpec, generate
from .neighbors import (
    NeighborInfo,
    two_nearest,
    two_nearest_accelerated,
    two_nearest_brute,
    two_nearest_from_matrix,
)
from .scan import (
    PlateauReport,
    ScanCurve,
    ScanPoint,
    decimate,
    default_block_grid,
    detect_plateau,
    scan,
)

__version__ = "0.1.0"

__all__ = [
    "CdfPoint",
    "DistanceMatrix",
    "Estimate",
    "GeneratorSpec",
    "Metric",
    "MuSample",
    "NeighborInfo",
    "PlateauReport",
    "PointSet",
    "ScanCurve",
    "ScanPoint",
    "ShellSample",
    "TwonnError",
    "compute_mu",
    "decimate",
    "default_block_grid",
    "detect_plateau",
    "distance",
    "empirical_cdf",
    "estimate_id",
    "estimate_id_mle",
    "fit_line_through_origin",
    "generate",
    "pairwise_distances",
    "scan",
    "shell_samples",
    "two_nearest",
    "two_nearest_accelerated",
    "two_nearest_brute",
    "two_nearest_from_matrix",
    "unit_ball_volume",
    "validate_pointset",
]
