import math

import numpy as np
import pytest

from core.enum.init_kind import InitKind
from core.exceptions.domain_exceptions import InvalidConfig, NotTwiceDifferentiable
from core.services import relu_net
from core.value_objects.init_scheme import InitScheme
from core.value_objects.net_params import NetParams

X = 0.3
EPS = 1e-6


def _perturbed(params, i, step):
    theta = params.flatten()
    theta[i] += step
    return NetParams.from_vector(theta)


class TestForward:
    def test_hat_network_is_the_hat_function(self, hat_params):
        assert relu_net.forward(hat_params, 0.25) == pytest.approx(0.5)
        assert relu_net.forward(hat_params, -0.5) == pytest.approx(0.0)

    def test_batch_matches_pointwise(self, small_params):
        xs = np.linspace(-1.0, 1.0, 11)
        expected = [relu_net.forward(small_params, x) for x in xs]
        np.testing.assert_allclose(relu_net.forward_batch(small_params, xs), expected, atol=1e-15)


class TestDerivatives:
    def test_gradient_matches_finite_differences(self, small_params):
        numeric = [
            (relu_net.forward(_perturbed(small_params, i, EPS), X) - relu_net.forward(_perturbed(small_params, i, -EPS), X))
            / (2 * EPS)
            for i in range(small_params.dim)
        ]
        np.testing.assert_allclose(relu_net.param_gradient(small_params, X), numeric, atol=1e-8)

    def test_gradient_matrix_rows_are_pointwise_gradients(self, small_params):
        xs = [-0.4, 0.3, 0.45]
        matrix = relu_net.gradient_matrix(small_params, xs)
        for row, x in zip(matrix, xs):
            np.testing.assert_allclose(row, relu_net.param_gradient(small_params, x), atol=1e-15)

    def test_hessian_matches_finite_differences_of_gradient(self, small_params):
        numeric = np.column_stack([
            (relu_net.param_gradient(_perturbed(small_params, i, EPS), X)
             - relu_net.param_gradient(_perturbed(small_params, i, -EPS), X)) / (2 * EPS)
            for i in range(small_params.dim)
        ])
        np.testing.assert_allclose(relu_net.param_hessian(small_params, X), numeric, atol=1e-7)

    def test_hessian_vector_product_and_quadform_agree_with_matrix(self, small_params):
        hess = relu_net.param_hessian(small_params, X)
        rng = np.random.Generator(np.random.PCG64(4))
        vectors = rng.standard_normal((5, small_params.dim))
        for v in vectors:
            np.testing.assert_allclose(relu_net.hessian_vector_product(small_params, X, v), hess @ v, atol=1e-14)
        np.testing.assert_allclose(
            relu_net.hessian_quadforms(small_params, X, vectors),
            np.einsum("ij,jk,ik->i", vectors, hess, vectors),
            atol=1e-13,
        )

    def test_operator_norm_is_exact(self, small_params):
        hess = relu_net.param_hessian(small_params, X)
        assert relu_net.hessian_operator_norm(small_params, X) == pytest.approx(np.linalg.norm(hess, 2))
        assert relu_net.hessian_operator_norm(small_params, X) == pytest.approx(math.sqrt(X * X + 1.0))

    def test_operator_norm_without_active_neuron_is_zero(self):
        params = NetParams([1.0], [-2.0], [1.0], 0.0)
        assert relu_net.hessian_operator_norm(params, 0.5) == 0.0

    def test_kink_on_the_input_raises(self):
        params = NetParams([1.0, 2.0], [0.0, 1.0], [1.0, 1.0], 0.0)
        with pytest.raises(NotTwiceDifferentiable) as info:
            relu_net.param_hessian(params, 0.0)
        assert info.value.neuron == 0


class TestExtractKnots:
    def test_hat_network_has_one_merged_knot(self, hat_params):
        pwl = relu_net.extract_knots(hat_params)
        assert pwl.positions.tolist() == [0.0]
        assert pwl.dslopes.tolist() == [-4.0]
        assert pwl.base_slope == pytest.approx(2.0)

    def test_spline_form_reproduces_the_network(self):
        params = relu_net.init_params(12, seed=5)
        grid = np.linspace(-3.0, 3.0, 301)
        pwl = relu_net.extract_knots(params)
        np.testing.assert_allclose(pwl.evaluate(grid), relu_net.forward_batch(params, grid), atol=1e-10)

    def test_zero_slope_neuron_adds_a_constant(self):
        params = NetParams([0.0, 1.0], [1.0, 0.0], [3.0, 1.0], 0.0)
        pwl = relu_net.extract_knots(params)
        assert pwl.positions.tolist() == [0.0]
        assert pwl.evaluate(-1.0) == pytest.approx(3.0)
        assert pwl.evaluate(2.0) == pytest.approx(5.0)

    def test_cancelling_neurons_leave_no_knot(self):
        params = NetParams([1.0, 1.0], [0.0, 0.0], [1.0, -1.0], 0.0)
        assert relu_net.extract_knots(params).knot_count == 0

    def test_margin_is_smallest_pre_activation(self, small_params, hat_data):
        pre = np.outer(hat_data.xs, small_params.w1) + small_params.b1
        assert relu_net.differentiability_margin(small_params, hat_data) == pytest.approx(np.min(np.abs(pre)))


class TestInitParams:
    def test_same_seed_same_network(self):
        a = relu_net.init_params(10, seed=7)
        b = relu_net.init_params(10, seed=7)
        np.testing.assert_array_equal(a.flatten(), b.flatten())

    def test_different_seed_different_network(self):
        a = relu_net.init_params(10, seed=7)
        b = relu_net.init_params(10, seed=8)
        assert not np.array_equal(a.flatten(), b.flatten())

    def test_fanin_ranges(self):
        params = relu_net.init_params(400, seed=0)
        assert np.all(np.abs(params.w1) <= 1.0)
        assert np.all(np.abs(params.b1) <= 1.0)
        assert np.all(np.abs(params.w2) <= 1.0 / math.sqrt(400))

    def test_custom_ranges(self):
        scheme = InitScheme(kind=InitKind.UNIFORM_CUSTOM, a_w1=0.1, a_b1=0.2, a_w2=0.3)
        params = relu_net.init_params(200, scheme, seed=0)
        assert np.all(np.abs(params.w1) <= 0.1)
        assert np.all(np.abs(params.b1) <= 0.2)
        assert np.all(np.abs(params.w2) <= 0.3)

    def test_stratified_knots_fall_in_their_strata(self):
        k, span = 16, 0.5
        params = relu_net.init_params(k, InitScheme(kind=InitKind.STRATIFIED_KNOTS, knot_range=span), seed=2)
        knots = -params.b1 / params.w1
        edges = -span + 2.0 * span * np.arange(k + 1) / k
        assert np.all(knots >= edges[:-1] - 1e-12)
        assert np.all(knots <= edges[1:] + 1e-12)
        assert np.all((np.abs(params.w1) >= 0.5) & (np.abs(params.w1) <= 1.0))

    def test_nonpositive_width_raises(self):
        with pytest.raises(InvalidConfig):
            relu_net.init_params(0)

    @pytest.mark.parametrize("kind", list(InitKind))
    def test_knot_on_a_design_point_is_redrawn(self, kind):
        scheme = InitScheme(kind=kind, knot_range=0.5)
        plain = relu_net.init_params(16, scheme, seed=3)
        design = np.array([-0.45, float(-plain.b1[5] / plain.w1[5]), 0.45])

        params = relu_net.init_params(16, scheme, seed=3, avoid=design)

        margin = np.min(np.abs(np.outer(design, params.w1) + params.b1))
        assert margin > relu_net.DIFF_TOL
        assert params.b1[5] != plain.b1[5]
        np.testing.assert_array_equal(np.delete(params.b1, 5), np.delete(plain.b1, 5))
        np.testing.assert_array_equal(params.w1, plain.w1)
        np.testing.assert_array_equal(params.w2, plain.w2)

    def test_redrawn_stratified_knot_keeps_its_stratum(self):
        k, span = 16, 0.5
        scheme = InitScheme(kind=InitKind.STRATIFIED_KNOTS, knot_range=span)
        plain = relu_net.init_params(k, scheme, seed=3)
        params = relu_net.init_params(k, scheme, seed=3, avoid=[float(-plain.b1[5] / plain.w1[5])])
        knot = -params.b1[5] / params.w1[5]
        assert -span + 2.0 * span * 5 / k <= knot <= -span + 2.0 * span * 6 / k

    def test_clear_design_leaves_the_draw_unchanged(self):
        scheme = InitScheme(kind=InitKind.STRATIFIED_KNOTS)
        plain = relu_net.init_params(12, scheme, seed=1)
        knots = -plain.b1 / plain.w1
        midpoints = (np.sort(knots)[:-1] + np.sort(knots)[1:]) / 2.0
        params = relu_net.init_params(12, scheme, seed=1, avoid=midpoints)
        np.testing.assert_array_equal(params.flatten(), plain.flatten())
