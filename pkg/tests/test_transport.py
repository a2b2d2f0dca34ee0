"""Tests for total variation, Wasserstein distances and discrete transport."""

import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from posteriorlip import errors
from posteriorlip import measures
from posteriorlip import transport

atoms = st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=1, max_size=8)


class TestTotalVariation:
    def test_shifted_gaussians(self):
        """Verify TV(N(0,1), N(1,1)) = 2Φ(1/2) - 1."""
        value = transport.tv_distance(measures.normal(0.0, 1.0), measures.normal(1.0, 1.0))
        assert value == pytest.approx(2.0 * scipy.stats.norm.cdf(0.5) - 1.0, abs=1e-4)

    def test_identical(self, standard_normal):
        """Verify a law is at distance zero from itself."""
        assert transport.tv_distance(standard_normal, standard_normal) == pytest.approx(0.0, abs=1e-12)

    def test_disjoint_supports(self):
        """Verify disjoint supports are at distance one."""
        value = transport.tv_distance(measures.uniform(0.0, 1.0), measures.uniform(2.0, 3.0))
        assert value == pytest.approx(1.0, abs=1e-12)


class TestWasserstein1D:
    def test_translation(self):
        """Verify Wp between translates equals the shift."""
        mu, nu = measures.normal(0.0, 1.0), measures.normal(0.5, 1.0)
        assert transport.wasserstein_1d(mu, nu, p=1) == pytest.approx(0.5, abs=1e-8)
        assert transport.wasserstein_1d(mu, nu, p=2) == pytest.approx(0.5, abs=1e-8)

    def test_matches_gaussian_closed_form(self):
        """Verify the quantile route agrees with the Gaussian formula."""
        closed = transport.gaussian_w2(
            measures.GaussianVec([0.0], [[1.0]]), measures.GaussianVec([1.0], [[4.0]])
        )
        quantile = transport.wasserstein_1d(measures.normal(0.0, 1.0), measures.normal(1.0, 4.0), p=2)
        assert closed == pytest.approx(math.sqrt(2.0))
        assert quantile == pytest.approx(closed, abs=1e-6)

    @given(atoms, atoms, st.sampled_from([1.0, 2.0]))
    @settings(max_examples=40, deadline=None)
    def test_matches_exact_lp(self, left, right, p):
        """Verify the quantile formula agrees with the network simplex."""
        mu = measures.EmpiricalMeasure.from_samples(left)
        nu = measures.EmpiricalMeasure.from_samples(right)
        exact = transport.ot_discrete(mu, nu, p=p).cost
        assert transport.wasserstein_1d(mu, nu, p=p) == pytest.approx(exact, rel=1e-9, abs=1e-9)

    def test_order_below_one(self, standard_normal):
        """Verify p < 1 is rejected."""
        with pytest.raises(errors.InvalidInput):
            transport.wasserstein_1d(standard_normal, standard_normal, p=0.5)


class TestOtDiscrete:
    def test_plan_marginals(self):
        """Verify the exact plan has the prescribed marginals."""
        mu = measures.GridMeasure([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [0.2, 0.3, 0.5])
        nu = measures.GridMeasure([[1.0, 1.0], [2.0, 0.0]], [0.6, 0.4])
        result = transport.ot_discrete(mu, nu, p=2)
        matrix = transport.plan_matrix(result).toarray()
        assert result.solver_tag == "exact_lp"
        assert matrix.sum(axis=1) == pytest.approx([0.2, 0.3, 0.5])
        assert matrix.sum(axis=0) == pytest.approx([0.6, 0.4])

    def test_zero_mass_atoms_keep_indices(self):
        """Verify plan indices refer to the original atoms."""
        mu = measures.GridMeasure([0.0, 5.0, 1.0], [0.5, 0.0, 0.5])
        nu = measures.GridMeasure([1.0, 2.0], [0.5, 0.5])
        result = transport.ot_discrete(mu, nu, p=1)
        assert result.plan is not None
        assert {entry.row for entry in result.plan} == {0, 2}
        assert result.cost == pytest.approx(1.0)

    def test_entropic_close_to_exact(self):
        """Verify debiased Sinkhorn approaches the exact cost."""
        mu = measures.EmpiricalMeasure([0.0, 1.0, 2.0])
        nu = measures.EmpiricalMeasure([0.5, 1.5, 2.5])
        result = transport.ot_discrete(mu, nu, p=2, mode="entropic", epsilon=1e-3)
        assert result.solver_tag == "sinkhorn"
        assert result.cost == pytest.approx(0.5, abs=1e-2)

    def test_entropic_has_no_plan(self):
        """Verify Sinkhorn results carry no plan matrix."""
        mu = measures.EmpiricalMeasure([0.0, 1.0])
        result = transport.ot_discrete(mu, mu, mode="entropic")
        with pytest.raises(errors.MissingParam):
            transport.plan_matrix(result)

    def test_unit_mass_required(self):
        """Verify measures without unit mass are infeasible."""
        light = measures.GridMeasure([0.0, 1.0], [0.25, 0.25])
        with pytest.raises(errors.Infeasible):
            transport.ot_discrete(light, light)

    def test_unknown_mode(self):
        """Verify an unknown solver mode is rejected."""
        mu = measures.EmpiricalMeasure([0.0])
        with pytest.raises(errors.InvalidInput):
            transport.ot_discrete(mu, mu, mode="greedy")


class TestGaussian:
    def test_sqrtm(self):
        """Verify the square root of a diagonal matrix."""
        assert transport.sqrtm_psd([[4.0, 0.0], [0.0, 9.0]]) == pytest.approx(np.diag([2.0, 3.0]))

    def test_sqrtm_squares_back(self):
        """Verify the root squares back to the matrix."""
        matrix = np.array([[2.0, 1.0], [1.0, 2.0]])
        root = transport.sqrtm_psd(matrix)
        assert root @ root == pytest.approx(matrix)

    def test_mean_shift(self):
        """Verify equal covariances leave only the mean distance."""
        a = measures.GaussianVec([0.0, 0.0], np.eye(2))
        b = measures.GaussianVec([3.0, 4.0], np.eye(2))
        assert transport.gaussian_w2(a, b) == pytest.approx(5.0)


class TestDistance:
    def test_dispatch_gaussian(self):
        """Verify Gaussian vectors go through the closed form."""
        a = measures.GaussianVec([0.0], [[1.0]])
        b = measures.GaussianVec([2.0], [[1.0]])
        assert transport.distance(a, b, "w2") == pytest.approx(2.0)

    def test_dispatch_grid(self):
        """Verify grid measures go through the exact solver."""
        a = measures.GridMeasure([0.0], [1.0])
        b = measures.GridMeasure([3.0], [1.0])
        assert transport.distance(a, b, "w1") == pytest.approx(3.0)

    @pytest.mark.parametrize(
        ("left", "right", "metric"),
        [
            (measures.EmpiricalMeasure([0.0]), measures.EmpiricalMeasure([1.0]), "tv"),
            (measures.GaussianVec([0.0], [[1.0]]), measures.GaussianVec([1.0], [[1.0]]), "w1"),
            (measures.GridMeasure([0.0], [1.0]), measures.GridMeasure([1.0], [1.0]), "tv"),
            (measures.EmpiricalMeasure([0.0]), measures.EmpiricalMeasure([1.0]), "hellinger"),
        ],
    )
    def test_rejects_mismatch(self, left, right, metric):
        """Verify unsupported metric and measure pairs are rejected."""
        with pytest.raises(errors.InvalidInput):
            transport.distance(left, right, metric)
