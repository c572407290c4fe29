"""Cartesian/radial mask construction and navigator extraction."""

import dataclasses

import numpy as np
import pytest

from blmd.errors import ConfigError
from blmd.sampling import (
    MaskConfig,
    cartesian_mask,
    center_spectrum,
    extract_navigators,
    radial_mask,
    uncenter_spectrum,
)
from blmd.transforms import vectorize


def cart_cfg(**kw):
    base = dict(kind="cartesian", acceleration=4.0, nav_rows_count=4, seed=0)
    base.update(kw)
    return MaskConfig(**base)


class TestCartesian:
    def test_acceleration_near_one_samples_everything(self):
        mask = cartesian_mask(16, 8, 3, cart_cfg(acceleration=1.0001, nav_rows_count=2))
        assert np.all(mask.pattern == 1)

    def test_navigator_rows_centered(self):
        mask = cartesian_mask(32, 16, 4, cart_cfg())
        assert mask.nav_rows == (14, 15, 16, 17)
        for r in mask.nav_rows:
            assert np.all(mask.pattern[r, :, :] == 1)

    def test_row_budget_exact(self):
        mask = cartesian_mask(32, 16, 6, cart_cfg(acceleration=4.0))
        for t in range(6):
            rows = np.nonzero(mask.pattern[:, 0, t])[0]
            # whole rows only
            np.testing.assert_array_equal(
                mask.pattern[rows, :, t], np.ones((len(rows), 16))
            )
            assert len(rows) == 8

    def test_achieved_acceleration_close_to_target(self):
        for acc in (2.0, 4.0, 6.0):
            mask = cartesian_mask(32, 32, 8, cart_cfg(acceleration=acc))
            assert abs(mask.achieved_acceleration() - acc) <= 0.15 * acc

    def test_infeasible_budget_raises(self):
        with pytest.raises(ConfigError):
            cartesian_mask(32, 16, 4, cart_cfg(acceleration=16.0, nav_rows_count=4))

    def test_deterministic_given_seed(self):
        a = cartesian_mask(32, 16, 4, cart_cfg(seed=5))
        b = cartesian_mask(32, 16, 4, cart_cfg(seed=5))
        np.testing.assert_array_equal(a.pattern, b.pattern)
        c = cartesian_mask(32, 16, 4, cart_cfg(seed=6))
        assert np.any(a.pattern != c.pattern)

    def test_pattern_is_binary_and_nav_rows_frame_invariant(self):
        mask = cartesian_mask(32, 16, 5, cart_cfg())
        assert set(np.unique(mask.pattern)) <= {0, 1}
        for r in mask.nav_rows:
            assert np.all(mask.pattern[r] == 1)


def radial_cfg(**kw):
    base = dict(
        kind="radial", acceleration=6.0, nav_rows_count=1, spokes_per_frame=1, seed=0
    )
    base.update(kw)
    return MaskConfig(**base)


class TestRadial:
    def test_single_horizontal_spoke_marks_center_row(self):
        mask = radial_mask(5, 5, 1, radial_cfg())
        expected = np.zeros((5, 5))
        expected[2, :] = 1  # angle 0 spoke through the grid center
        np.testing.assert_array_equal(mask.pattern[:, :, 0], expected)
        assert mask.nav_rows == (2,)

    def test_center_denser_than_edge(self):
        for spokes in (8, 12):
            mask = radial_mask(
                33, 33, 4, radial_cfg(spokes_per_frame=spokes, nav_rows_count=1)
            )
            p = mask.pattern.astype(float)
            n = 33
            q = n // 4
            central = p[q : n - q, q : n - q, :]
            outer = p.sum(axis=(0, 1)) - central.sum(axis=(0, 1))
            frac_central = central.mean()
            outer_cells = n * n - central.shape[0] * central.shape[1]
            frac_outer = outer.sum() / (outer_cells * p.shape[2])
            assert frac_central >= frac_outer

    def test_golden_angle_continues_across_frames(self):
        # two frames of k spokes cover exactly the same cells as one frame
        # of 2k spokes: the spoke counter never resets at a frame boundary
        split = radial_mask(17, 17, 2, radial_cfg(spokes_per_frame=3))
        joint = radial_mask(17, 17, 1, radial_cfg(spokes_per_frame=6))
        union = np.logical_or(split.pattern[:, :, 0], split.pattern[:, :, 1])
        np.testing.assert_array_equal(union.astype(np.uint8), joint.pattern[:, :, 0])
        assert np.any(split.pattern[:, :, 0] != split.pattern[:, :, 1])

    def test_deterministic(self):
        a = radial_mask(17, 17, 2, radial_cfg(spokes_per_frame=3))
        b = radial_mask(17, 17, 2, radial_cfg(spokes_per_frame=3))
        np.testing.assert_array_equal(a.pattern, b.pattern)

    def test_navigator_rows_forced(self):
        mask = radial_mask(16, 16, 3, radial_cfg(nav_rows_count=4))
        assert mask.nav_rows == (6, 7, 8, 9)
        for r in mask.nav_rows:
            assert np.all(mask.pattern[r] == 1)

    def test_spokes_must_be_positive(self):
        with pytest.raises(ConfigError):
            radial_mask(8, 8, 2, radial_cfg(spokes_per_frame=0))


class TestNavigatorExtraction:
    def test_shape(self):
        mask = cartesian_mask(32, 16, 5, cart_cfg())
        rng = np.random.default_rng(0)
        cube = rng.standard_normal((32, 16, 5)) + 1j * rng.standard_normal((32, 16, 5))
        nav = extract_navigators(cube, mask)
        assert nav.shape == (4 * 16, 5)

    def test_full_row_navigator_equals_vectorize(self):
        mask = cartesian_mask(6, 4, 3, cart_cfg(acceleration=1.0001, nav_rows_count=5))
        mask = dataclasses.replace(mask, nav_rows=tuple(range(6)))
        rng = np.random.default_rng(1)
        cube = rng.standard_normal((6, 4, 3)) + 1j * rng.standard_normal((6, 4, 3))
        np.testing.assert_array_equal(extract_navigators(cube, mask), vectorize(cube))

    def test_entries_match_indexed_copy(self):
        mask = cartesian_mask(32, 8, 4, cart_cfg())
        rng = np.random.default_rng(2)
        cube = rng.standard_normal((32, 8, 4)) + 1j * rng.standard_normal((32, 8, 4))
        nav = extract_navigators(cube, mask)
        for j in range(4):
            k = 0
            for c in range(8):
                for i, r in enumerate(mask.nav_rows):
                    assert nav[k, j] == cube[r, c, j]
                    k += 1

    def test_missing_navigators_raises(self):
        mask = cartesian_mask(8, 4, 2, cart_cfg(nav_rows_count=1, acceleration=2.0))
        mask = dataclasses.replace(mask, nav_rows=())
        with pytest.raises(ValueError):
            extract_navigators(np.zeros((8, 4, 2), dtype=complex), mask)


def test_center_shift_round_trip():
    rng = np.random.default_rng(3)
    cube = rng.standard_normal((5, 6, 2)) + 1j * rng.standard_normal((5, 6, 2))
    np.testing.assert_array_equal(uncenter_spectrum(center_spectrum(cube)), cube)
    # DC lands mid-grid under the centering map
    delta = np.zeros((4, 4, 1), dtype=complex)
    delta[0, 0, 0] = 1.0
    assert center_spectrum(delta)[2, 2, 0] == 1.0
