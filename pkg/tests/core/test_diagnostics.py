import numpy as np
import pytest

from core.exceptions.domain_exceptions import InvalidConfig
from core.services import diagnostics, relu_net


class TestExportBasis:
    def test_rows_plus_output_bias_give_the_network(self, small_params):
        grid, matrix = diagnostics.export_basis(small_params, -1.0, 1.0, 41)
        assert matrix.shape == (3, 41)
        np.testing.assert_allclose(matrix.sum(axis=0) + small_params.b2, relu_net.forward_batch(small_params, grid))

    def test_needs_two_points(self, small_params):
        with pytest.raises(InvalidConfig):
            diagnostics.export_basis(small_params, -1.0, 1.0, 1)

    def test_needs_an_increasing_grid(self, small_params):
        with pytest.raises(InvalidConfig):
            diagnostics.export_basis(small_params, 1.0, 1.0, 10)


class TestSparsity:
    def test_hat_network_has_one_knot(self, hat_params, hat_data):
        stats = diagnostics.sparsity_metrics(hat_params, data=hat_data)
        assert stats["knot_count_total"] == 1
        assert stats["knot_count_in_range"] == 1
        assert stats["l1"] == pytest.approx(4.0)
        assert stats["lp"] == pytest.approx(4.0)
        assert stats["min_knot_datum_distance"] == pytest.approx(1.0 / 14.0)
        assert stats["knot_quantiles"]["q50"] == pytest.approx(0.0)

    def test_without_data_there_is_no_distance(self, small_params):
        stats = diagnostics.sparsity_metrics(small_params)
        assert stats["knot_count_total"] == 3
        assert stats["min_knot_datum_distance"] is None

    def test_lp_exponent_out_of_range_raises(self, small_params):
        with pytest.raises(InvalidConfig):
            diagnostics.sparsity_metrics(small_params, lp_norm_p=1.5)
