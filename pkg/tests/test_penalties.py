import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from numerics import orthonormality_defect
from numerics.errors import InvalidParameterError, PartitionError
from penalties import L0Penalty, ProductPenalty, RankPenalty, ZeroPenalty, manifold_info_l0, manifold_info_rank, prox_l0, prox_rank
from penalties.l0 import signature_label


def best_truncation(Z, theta):
    """Rank-r truncation minimizing 0.5*||X - Z||^2 + theta*rank(X) over every r."""
    U, s, Vt = np.linalg.svd(Z, full_matrices=False)
    costs = [0.5 * float(np.sum(s[r:] ** 2)) + theta * r for r in range(s.size + 1)]
    r = int(np.argmin(costs))
    return (U[:, :r] * s[:r]) @ Vt[:r]


class TestL0Prox:

    def test_matches_two_candidate_oracle(self, rng):
        """Each coordinate keeps the better of 0 and z_i."""
        for _ in range(1000):
            z = rng.standard_normal(6) * 2.0
            theta = rng.uniform(0.01, 3.0)
            keep = 0.5 * z ** 2 > theta
            assert_array_equal(prox_l0(z, theta), np.where(keep, z, 0.0))

    def test_tie_goes_to_zero(self):
        assert prox_l0(np.array([1.0, -1.0]), 0.5).tolist() == [0.0, 0.0]

    def test_theta_must_be_positive(self):
        with pytest.raises(InvalidParameterError):
            prox_l0(np.ones(2), 0.0)

    def test_weight_scales_threshold(self):
        pen = L0Penalty(3, 2.0)
        out = pen.prox(np.array([1.9, 2.1, -3.0]), 1.0)
        assert_array_equal(out, [0.0, 2.1, -3.0])
        assert pen.value(out) == 4.0

    def test_prox_eval_consistent(self, rng):
        pen = L0Penalty(10, 0.3)
        z = rng.standard_normal(10)
        res = pen.prox_eval(z, 0.7)
        assert_array_equal(res.point, pen.prox(z, 0.7))
        assert res.value == pen.value(res.point)
        assert res.signature == pen.signature(res.point)


class TestL0Manifold:

    def test_basis_and_projector(self):
        x = np.array([0.0, 1.5, 0.0, -2.0])
        info = manifold_info_l0(x)
        assert info.signature == (1, 3)
        assert info.dimension == 2
        assert orthonormality_defect(info.tangent_basis) == 0.0
        assert_array_equal(info.project(np.ones(4)), [0.0, 1.0, 0.0, 1.0])

    def test_signature_label_stable(self):
        assert signature_label((1, 3)) == signature_label((1, 3))
        assert signature_label((1, 3)).startswith('2#')
        assert signature_label((1, 3)) != signature_label((1, 4))


class TestRankProx:

    def test_matches_truncation_oracle(self, rng):
        for _ in range(100):
            Z = rng.standard_normal((10, 8))
            theta = rng.uniform(0.1, 5.0)
            assert np.linalg.norm(prox_rank(Z, theta) - best_truncation(Z, theta)) <= 1e-10

    def test_penalty_on_flat_vectors(self, rng):
        pen = RankPenalty((5, 4), 0.5)
        Z = rng.standard_normal((5, 4))
        res = pen.prox_eval(Z.ravel(), 1.0)
        assert res.point.shape == (20,)
        assert res.value == 0.5 * res.signature
        assert pen.signature(res.point) == res.signature


class TestRankManifold:

    def test_tangent_dimension_and_projector(self, rng):
        n1, n2, r = (6, 5, 2)
        X = rng.standard_normal((n1, r)) @ rng.standard_normal((r, n2))
        info = manifold_info_rank(X)
        assert info.signature == r
        assert info.dimension == r * (n1 + n2 - r)
        assert orthonormality_defect(info.tangent_basis) < 1e-10
        assert_allclose(info.project(X.ravel()), X.ravel(), atol=1e-10)
        col = info.tangent_basis[:, 0]
        assert_allclose(info.project(col), col, atol=1e-10)

    def test_zero_matrix(self):
        info = manifold_info_rank(np.zeros((3, 3)))
        assert info.signature == 0
        assert info.dimension == 0


class TestProductAndZero:

    def test_partition_errors(self):
        with pytest.raises(PartitionError):
            ProductPenalty([(L0Penalty(3, 1.0), slice(0, 3)), (L0Penalty(3, 1.0), slice(2, 5))])
        with pytest.raises(PartitionError):
            ProductPenalty([(L0Penalty(2, 1.0), slice(0, 2)), (L0Penalty(2, 1.0), slice(3, 5))])

    def test_blockwise_prox_with_free_slice(self):
        pen = ProductPenalty([(L0Penalty(3, 1.0), slice(1, 4))], free_slices=[slice(0, 1)])
        z = np.array([0.1, 0.5, 2.0, -0.2])
        res = pen.prox_eval(z, 1.0)
        assert_array_equal(res.point, [0.1, 0.0, 2.0, 0.0])
        assert res.value == 1.0
        assert res.signature == ((1,),)
        info = pen.manifold(res.point)
        assert info.dimension == 2
        assert orthonormality_defect(info.tangent_basis) == 0.0

    def test_zero_penalty(self, rng):
        pen = ZeroPenalty(4)
        z = rng.standard_normal(4)
        assert_array_equal(pen.prox(z, 0.3), z)
        assert pen.value(z) == 0.0
        assert pen.manifold(z).dimension == 4
