import math

import numpy as np
import pytest

from twonn.data import (
    DistanceMatrix,
    Metric,
    PointSet,
    distance,
    pairwise_distances,
    validate_pointset,
)
from twonn.errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    NegativeDistance,
    NonFinite,
    NonzeroDiagonal,
    OutsideBox,
    RaggedRows,
    TooFewPoints,
    ValidationError,
)

from conftest import seeded


class TestValidatePointset:
    def test_minimal_valid_table(self):
        ps = validate_pointset([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]])
        assert ps.n == 3
        assert ps.dim_embed == 2

    def test_nan_positions_named(self):
        with pytest.raises(NonFinite) as exc:
            validate_pointset([[0.0, 1.0], [2.0, math.nan], [4.0, 5.0]])
        assert (exc.value.row, exc.value.col) == (1, 1)

    def test_inf_rejected(self):
        with pytest.raises(NonFinite):
            validate_pointset([[0.0], [math.inf], [1.0]])

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints) as exc:
            validate_pointset(np.zeros((2, 5)))
        assert exc.value.n == 2

    def test_ragged_rows(self):
        with pytest.raises(RaggedRows):
            validate_pointset([[0.0, 1.0], [2.0], [3.0, 4.0]])

    def test_points_are_immutable(self):
        ps = validate_pointset(np.ones((3, 2)))
        with pytest.raises(ValueError):
            ps.points[0, 0] = 7.0


class TestMetric:
    def test_periodic_requires_positive_lengths(self):
        with pytest.raises(ValidationError):
            Metric.periodic([1.0, 0.0])
        with pytest.raises(ValidationError):
            Metric.periodic([])

    def test_euclidean_takes_no_box(self):
        with pytest.raises(ValidationError):
            Metric("euclidean", (1.0,))


class TestDistance:
    def test_three_four_five(self):
        assert distance([0.0, 0.0], [3.0, 4.0]) == 5.0

    def test_identity(self):
        assert distance([1.5, -2.0], [1.5, -2.0]) == 0.0

    def test_minimum_image_wraps(self):
        m = Metric.periodic([1.0, 1.0])
        assert distance([0.05, 0.0], [0.95, 0.0], m) == pytest.approx(0.1, rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            distance([0.0, 0.0], [1.0, 2.0, 3.0])

    def test_periodic_rejects_out_of_box(self):
        m = Metric.periodic([1.0])
        with pytest.raises(OutsideBox):
            distance([1.2], [0.1], m)

    @pytest.mark.parametrize("kind", ["euclidean", "periodic"])
    def test_symmetry_exact(self, kind):
        rng = seeded(101, kind)
        m = Metric.periodic([1.0] * 4) if kind == "periodic" else Metric.euclidean()
        for _ in range(200):
            a = rng.random(4)
            b = rng.random(4)
            assert distance(a, b, m) == distance(b, a, m)

    def test_periodic_translation_invariance(self):
        box = np.array([1.0, 2.0, 0.5])
        m = Metric.periodic(box)
        rng = seeded(102)
        for _ in range(200):
            a = rng.random(3) * box
            b = rng.random(3) * box
            shift = rng.integers(-3, 4, 3) * box
            a2 = np.mod(a + shift, box)
            b2 = np.mod(b + shift, box)
            d0 = distance(a, b, m)
            d1 = distance(a2, b2, m)
            assert d1 == pytest.approx(d0, rel=1e-12)

    def test_triangle_inequality(self):
        rng = seeded(103)
        for _ in range(300):
            a, b, c = rng.standard_normal((3, 5))
            ab = distance(a, b)
            bc = distance(b, c)
            ac = distance(a, c)
            assert ac <= ab + bc + 1e-12 * (ab + bc)


class TestDistanceMatrix:
    def test_valid_symmetric(self):
        dm = DistanceMatrix([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
        assert dm.n == 3
        assert dm.d[0, 1] == 1.0

    def test_asymmetric_beyond_tolerance(self):
        with pytest.raises(AsymmetricMatrix):
            DistanceMatrix([[0, 1, 2], [2, 0, 3], [2, 3, 0]])

    def test_rounding_asymmetry_averaged(self):
        eps = 1e-12
        dm = DistanceMatrix([[0, 1 + eps, 2], [1, 0, 3], [2, 3, 0]])
        assert dm.d[0, 1] == dm.d[1, 0]

    def test_negative_distance(self):
        with pytest.raises(NegativeDistance):
            DistanceMatrix([[0, -0.5, 1], [-0.5, 0, 1], [1, 1, 0]])

    def test_nonzero_diagonal(self):
        with pytest.raises(NonzeroDiagonal):
            DistanceMatrix([[1.0, 1, 1], [1, 0, 1], [1, 1, 0]])


class TestPairwiseDistances:
    def test_matches_scalar_distance(self):
        rng = seeded(104)
        ps = PointSet(rng.random((20, 3)))
        for m in (Metric.euclidean(), Metric.periodic([1.0] * 3)):
            dm = pairwise_distances(ps, m)
            assert np.all(np.diagonal(dm.d) == 0.0)
            assert np.array_equal(dm.d, dm.d.T)
            for i in (0, 7, 19):
                for j in (3, 11):
                    assert dm.d[i, j] == distance(ps.points[i], ps.points[j], m)
