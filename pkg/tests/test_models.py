"""Tests for models, priors and posterior kernels."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from posteriorlip import errors
from posteriorlip import models
from posteriorlip.features import exponential
from posteriorlip.features import pareto
from posteriorlip.features import priors


class TestModels:
    @pytest.mark.parametrize(
        ("model", "thetas"),
        [
            (exponential.GaussianLocation(), [-1.0, 0.0, 2.0]),
            (exponential.ExponentialRate(), [0.5, 2.0]),
            (pareto.Pareto1D(), [1.2, 1.8]),
            (pareto.ParetoHFunction(), [1.1, 1.9]),
        ],
    )
    def test_likelihoods_normalised(self, model, thetas):
        """Verify ∫ f(x|θ) dx = 1."""
        assert model.normalization_error(thetas) < 1e-8

    def test_unnormalised_family_refused(self, monkeypatch):
        """Verify registration rejects a family whose base measure drops its normaliser."""

        def shifted_family() -> exponential.CustomExpFamily:
            return exponential.CustomExpFamily(
                statistic=lambda x: float(x[0]),
                statistic_grad=lambda x: np.array([1.0]),
                log_h=lambda x: -0.5 * float(x[0]) ** 2,
                log_partition=lambda t: 0.5 * t**2,
                log_partition_grad=lambda t: t,
                log_partition_hess=lambda t: np.ones_like(t, dtype=np.float64),
                lip_T=1.0,
                param_space=models.Interval(-math.inf, math.inf),
                data_space=models.Interval(-math.inf, math.inf),
                box=(-3.0, 3.0),
            )

        monkeypatch.setitem(models.MODELS, "shifted_family", shifted_family)
        with pytest.raises(errors.InvalidInput, match="not normalised"):
            models.build_model("shifted_family")

    def test_msample_single_observation_normalised(self):
        """Verify the one-observation Pareto sum model passes registration."""
        assert models.build_model("pareto_msample", {"m": 1}).data_dim == 1

    def test_gaussian_curvature(self):
        """Verify M'' = 1 for the Gaussian location family."""
        model = exponential.GaussianLocation()
        assert model.curvature_bounds(priors.gaussian().support) == (1.0, 1.0)

    def test_pareto_positivity(self):
        """Verify the positivity set (1, x) of the Pareto likelihood."""
        support = pareto.Pareto1D().positivity(np.array([1.5]))
        assert (support.lo, support.hi) == (1.0, 1.5)

    def test_msample_needs_observations(self):
        """Verify m ≥ 1."""
        with pytest.raises(errors.InvalidInput):
            pareto.ParetoMSample(m=0)

    def test_registry(self):
        """Verify lookup by name and parameter checking."""
        assert isinstance(models.build_model("pareto_1d"), pareto.Pareto1D)
        assert models.build_model("gaussian_location", {"box": [-1.0, 1.0]}).data_box == [(-1.0, 1.0)]
        with pytest.raises(errors.InvalidInput):
            models.build_model("cauchy")
        with pytest.raises(errors.InvalidInput):
            models.build_model("pareto_1d", {"shape": 3.0})


class TestPriors:
    def test_gaussian(self):
        """Verify the score and curvature of N(0, 4)."""
        prior = priors.gaussian(sd=2.0)
        assert prior.lambda_min == pytest.approx(0.25)
        assert prior.dlog_density(np.array([2.0])) == pytest.approx([-0.5])

    def test_uniform_normaliser(self):
        """Verify log ∫ 1 over (1, 3)."""
        assert priors.uniform(1.0, 3.0).log_normalizer == pytest.approx(math.log(2.0))

    def test_finite_difference_score(self):
        """Verify the score falls back to central differences."""
        prior = priors.Prior("custom", priors.uniform(0.0, 2.0).support, lambda t: -(t**3))
        assert prior.dlog_density(np.array([1.0])) == pytest.approx([-3.0], rel=1e-6)

    def test_catalogue(self):
        """Verify named construction and its errors."""
        assert priors.build_prior("uniform_2d").box == [(1.0, 2.0), (1.0, 2.0)]
        with pytest.raises(errors.InvalidInput):
            priors.build_prior("beta")
        with pytest.raises(errors.InvalidInput):
            priors.build_prior("power_exponential", {"alpha": -2.0})
        with pytest.raises(errors.InvalidInput):
            priors.uniform(0.0, math.inf)


class TestPosteriorKernel:
    def test_gaussian_conjugacy(self, gaussian_kernel):
        """Verify π(·|x) = N(x/2, 1/2)."""
        variance, mean = gaussian_kernel.evaluate(1.0).variance_vec()
        assert mean == pytest.approx(0.5, abs=1e-10)
        assert variance == pytest.approx(0.5, abs=1e-10)

    def test_evidence(self, gaussian_kernel):
        """Verify ρ(x) is the N(0, 2) density."""
        expected = -0.25 * 1.5**2 - 0.5 * math.log(4.0 * math.pi)
        assert gaussian_kernel.log_evidence(1.5) == pytest.approx(expected, abs=1e-10)

    def test_centred_score(self, gaussian_kernel):
        """Verify Ψ has posterior mean zero."""
        law = gaussian_kernel.evaluate(0.7)
        assert law.expect(lambda t: gaussian_kernel.psi(0.7, t, law)[0]) == pytest.approx(0.0, abs=1e-10)

    def test_density_ratio(self, gaussian_kernel):
        """Verify ∫ g(x, ·) dπ = 1."""
        prior = gaussian_kernel.prior.distribution
        assert prior.expect(lambda t: gaussian_kernel.g(-1.0, t)) == pytest.approx(1.0, abs=1e-9)

    def test_flat_likelihood(self, flat_kernel, standard_normal):
        """Verify an uninformative likelihood leaves the prior unchanged."""
        assert flat_kernel.evaluate(0.3).variance_vec()[0] == pytest.approx(standard_normal.variance_vec()[0])

    def test_moving_support(self, pareto_kernel):
        """Verify the support (1, min(x, 2)) and the posterior ∝ θ on it."""
        law = pareto_kernel.evaluate(1.5)
        assert pareto_kernel.moving_support
        assert (law.support.lo, law.support.hi) == (1.0, 1.5)
        assert law.mean() == pytest.approx((2.0 / 3.0) * (1.5**3 - 1.0) / (1.5**2 - 1.0), abs=1e-10)

    def test_zero_evidence(self, pareto_kernel):
        """Verify data below the prior support carry no evidence."""
        with pytest.raises(errors.ZeroEvidence):
            pareto_kernel.evaluate(0.9)

    def test_two_parameter_model_refused(self):
        """Verify two-parameter models need the grid kernel."""
        with pytest.raises(errors.InvalidInput):
            models.PosteriorKernel(pareto.Pareto2Param(), priors.uniform())


class TestRepeatedObservations:
    def test_exchangeable_conjugacy(self):
        """Verify the posterior after four observations with mean statistic 1."""
        kernel = models.ExchangeableKernel(exponential.GaussianLocation(), priors.gaussian(), 4)
        variance, mean = kernel.evaluate(1.0).variance_vec()
        assert mean == pytest.approx(0.8, abs=1e-10)
        assert variance == pytest.approx(0.2, abs=1e-10)

    def test_product_matches_sufficient(self):
        """Verify both evaluation methods agree on an exponential family."""
        model, prior = exponential.GaussianLocation(), priors.gaussian()
        xs = [0.2, -0.4, 1.0]
        product = models.posterior_n(model, prior, xs, method="product")
        sufficient = models.posterior_n(model, prior, xs, method="sufficient")
        assert product.mean() == pytest.approx(sufficient.mean(), abs=1e-9)
        assert sufficient.mean() == pytest.approx(0.2, abs=1e-10)

    def test_order_invariance(self):
        """Verify the posterior ignores the order of observations."""
        model, prior = pareto.Pareto1D(), priors.uniform(1.0, 2.0)
        forward = models.posterior_n(model, prior, [1.5, 1.8])
        backward = models.posterior_n(model, prior, [1.8, 1.5])
        assert forward.mean() == backward.mean()
        assert forward.mean() == pytest.approx(0.75 * (1.5**4 - 1.0) / (1.5**3 - 1.0), abs=1e-10)

    def test_no_sufficient_statistic(self):
        """Verify Pareto data have no exponential-family statistic."""
        with pytest.raises(errors.InvalidInput):
            models.posterior_n(pareto.Pareto1D(), priors.uniform(), [1.5], method="sufficient")


class TestWiener:
    def test_grid_point(self):
        """Verify a single nonzero weight when jx is an integer."""
        law = models.wiener_family(4, 0.25)
        assert law.mean == pytest.approx([0.125, 0.25, 0.25, 0.25])
        assert law.covariance[0] == pytest.approx([0.25, 0.25, 0.25, 0.25])

    def test_origin(self):
        """Verify the mean at x = 0."""
        assert models.wiener_family(4, 0.0).mean == pytest.approx([0.125] * 4)

    @pytest.mark.parametrize("x", [0.75, 0.9, 1.0])
    def test_last_cell(self, x):
        """Verify the last cell keeps the single weight 1/√j at position j - 1."""
        assert models.wiener_stencil(4, x).tolist() == pytest.approx([0.0, 0.0, 0.0, 0.5])
        assert models.wiener_family(4, x).mean == pytest.approx([0.125, 0.25, 0.375, 0.5])

    def test_two_point_example(self):
        """Verify j = 2, x = 1/4 splits the weight evenly."""
        assert models.wiener_stencil(2, 0.25) == pytest.approx([0.5 / math.sqrt(2.0)] * 2)

    @given(st.integers(min_value=2, max_value=128), st.floats(min_value=0.0, max_value=1.0))
    @settings(deadline=None)
    def test_stencil_is_nonnegative(self, j, x):
        """Verify at most two adjacent nonnegative weights summing to 1/√j."""
        v = models.wiener_stencil(j, x)
        nonzero = np.flatnonzero(v)
        assert np.all(v >= 0.0)
        assert len(nonzero) <= 2
        assert len(nonzero) < 2 or nonzero[1] == nonzero[0] + 1
        assert v.sum() == pytest.approx(1.0 / math.sqrt(j))

    @pytest.mark.parametrize(("j", "x"), [(1, 0.5), (129, 0.5), (4, -0.1), (4, 1.5)])
    def test_range(self, j, x):
        """Verify j and x are range-checked."""
        with pytest.raises(errors.InvalidInput):
            models.wiener_family(j, x)

    def test_kernel(self):
        """Verify the kernel evaluates the family."""
        kernel = models.build_kernel("wiener_j", {"j": 8})
        assert isinstance(kernel, models.WienerKernel)
        assert kernel.evaluate(0.5).dim == 8


class TestGridKernel:
    def test_weights(self):
        """Verify grid posteriors are normalised and stay below x."""
        kernel = models.build_kernel("pareto_2param", {"resolution": 32}, priors.uniform_2d())
        assert isinstance(kernel, models.GridPosteriorKernel)
        cloud = kernel.evaluate(1.5)
        assert cloud.weights.sum() == pytest.approx(1.0)
        assert np.all(cloud.weights > 0)
        assert np.all(cloud.points[:, 0] < 1.5)
        assert cloud.shape == (32, 32)

    def test_coarse_grid(self):
        """Verify fewer than 32 nodes per axis are refused."""
        with pytest.raises(errors.InvalidInput):
            models.posterior_2d_grid(pareto.Pareto2Param(), priors.uniform_2d(), 1.5, resolution=8)

    def test_prior_dimension(self):
        """Verify the prior dimension must match the model."""
        with pytest.raises(errors.InvalidInput):
            models.build_kernel("pareto_2param", None, priors.uniform())
        with pytest.raises(errors.InvalidInput):
            models.build_kernel("pareto_1d", None, priors.uniform_2d())
