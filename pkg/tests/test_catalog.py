"""Builtin problem catalog."""

import numpy as np
import pytest

import structbandit as sb


class TestCatalogEntries:
    def test_example_a(self, example_a):
        assert example_a.k == 2
        assert (example_a.space.lower, example_a.space.upper) == (-1.0, 1.0)
        assert example_a.sigma2 == 1.0
        grid = np.linspace(-1, 1, 41)
        np.testing.assert_allclose(example_a.means[0].values_on_grid(grid), grid, atol=1e-12)
        np.testing.assert_allclose(example_a.means[1].values_on_grid(grid), -grid, atol=1e-12)

    def test_example_b_gap(self, example_b):
        p = sb.gap_profile(example_b, 0.3)
        assert p.optimal_arm == 2
        assert p.delta_min == pytest.approx(0.3)

    def test_example_c_shapes(self, example_c):
        grid = np.linspace(-1, 1, 81)
        np.testing.assert_allclose(
            example_c.means[0].values_on_grid(grid), np.where(grid > 0, grid, 0.0), atol=1e-12
        )
        np.testing.assert_allclose(
            example_c.means[1].values_on_grid(grid), np.where(grid < 0, -grid, 0.0), atol=1e-12
        )

    def test_ambiguous_a_definition(self, ambiguous_a):
        assert ambiguous_a.space.ambiguous == ((-1.0, 0.0),)
        assert sb.evaluate_mean(ambiguous_a, 1, 0.0) == 0.0
        assert sb.evaluate_mean(ambiguous_a, 2, 0.0) == -1.0  # left-closed jump
        assert sb.evaluate_mean(ambiguous_a, 2, 0.5) == 0.0
        assert sb.evaluate_mean(ambiguous_a, 1, 0.5) == -0.5

    def test_reconstructed_flags(self):
        assert sb.make_builtin("example-a").metadata["reconstructed"] is False
        for name in ("example-d", "example-e", "example-f", "ambiguous-b",
                     "ambiguous-c", "ambiguous-d", "tradeoff-a"):
            assert sb.make_builtin(name).metadata["reconstructed"] is True

    def test_permutation_regions(self):
        f = sb.make_builtin("example-f")
        perms = {
            0.5: (1, 2, 3), 1.5: (2, 1, 3), 2.5: (3, 1, 2),
            3.5: (3, 2, 1), 4.5: (2, 3, 1), 5.5: (1, 3, 2),
        }
        for theta, values in perms.items():
            np.testing.assert_allclose(f.mean_vector(theta), values)
        # right-continuous at internal region edges
        np.testing.assert_allclose(f.mean_vector(1.0), (2, 1, 3))

    def test_tradeoff_pair_conditions(self):
        b = sb.make_builtin("tradeoff-a")
        delta = 0.5
        assert sb.evaluate_mean(b, 1, -1.0) == sb.evaluate_mean(b, 1, 1.0)
        assert sb.evaluate_mean(b, 1, -1.0) >= sb.evaluate_mean(b, 2, -1.0) + delta
        assert sb.evaluate_mean(b, 2, 1.0) >= sb.evaluate_mean(b, 1, 1.0) + delta

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown problem"):
            sb.make_builtin("example-z")

    def test_resolution_override(self):
        assert len(sb.make_builtin("example-a", resolution=11).space.grid()) == 11
