"""Reconstruction quality metrics vs hand values and brute-force oracles."""

import numpy as np
import pytest

from blmd.metrics import (
    compute_metrics,
    hfen,
    log_kernel,
    nrmse,
    nrmse_per_frame,
    sharpness_m1,
    sharpness_m2,
    ssim,
)


def conv2_same_zero_oracle(img, kernel):
    """Literal 'same' zero-padded 2-D convolution, double loop."""
    n, m = img.shape
    k = kernel.shape[0]
    c = k // 2
    out = np.zeros((n, m), dtype=float)
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for u in range(k):
                for v in range(k):
                    r = i - (u - c)
                    s = j - (v - c)
                    if 0 <= r < n and 0 <= s < m:
                        acc += kernel[u, v] * img[r, s]
            out[i, j] = acc
    return out


def ssim_oracle(x, y, window, data_range):
    """Direct windowed-statistics single-frame SSIM, zero-padded."""
    n, m = x.shape
    k = window.shape[0]
    c = k // 2
    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    total = 0.0
    for i in range(n):
        for j in range(m):
            mx = my = mxx = myy = mxy = 0.0
            for u in range(k):
                for v in range(k):
                    r = i - (u - c)
                    s = j - (v - c)
                    if 0 <= r < n and 0 <= s < m:
                        w = window[u, v]
                        mx += w * x[r, s]
                        my += w * y[r, s]
                        mxx += w * x[r, s] ** 2
                        myy += w * y[r, s] ** 2
                        mxy += w * x[r, s] * y[r, s]
            vx = mxx - mx * mx
            vy = myy - my * my
            cxy = mxy - mx * my
            total += ((2 * mx * my + c1) * (2 * cxy + c2)) / (
                (mx * mx + my * my + c1) * (vx + vy + c2)
            )
    return total / (n * m)


class TestNrmse:
    def test_perfect_reconstruction(self):
        x = np.ones((2, 2, 2), dtype=complex)
        assert nrmse(x, x) == 0.0

    def test_zero_estimate(self):
        x = np.full((3, 3, 1), 2.0, dtype=complex)
        assert nrmse(x, np.zeros_like(x)) == pytest.approx(1.0)

    def test_hand_case(self):
        x = np.array([1.0, 0.0])
        x_hat = np.array([0.0, 1.0])
        assert nrmse(x, x_hat) == pytest.approx(np.sqrt(2.0))

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            nrmse(np.zeros(3), np.ones(3))

    def test_error_scale_covariance(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((4, 4, 2)) + 1j * rng.standard_normal((4, 4, 2))
        e = rng.standard_normal((4, 4, 2)) + 1j * rng.standard_normal((4, 4, 2))
        vals = [nrmse(x, x + a * e) for a in (1.0, 2.0, 4.0)]
        assert vals[1] / vals[0] == pytest.approx(2.0, rel=1e-12)
        assert vals[2] / vals[0] == pytest.approx(4.0, rel=1e-12)

    def test_per_frame_variant(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((4, 4, 3)) + 1j * rng.standard_normal((4, 4, 3))
        x_hat = x.copy()
        x_hat[:, :, 1] = 0.0
        per = nrmse_per_frame(x, x_hat)
        assert per.shape == (3,)
        assert per[0] == 0.0 and per[2] == 0.0
        assert per[1] == pytest.approx(1.0)


class TestHfen:
    def test_kernel_sums_to_zero(self):
        k = log_kernel()
        assert k.shape == (15, 15)
        assert abs(k.sum()) <= 1e-12
        # rotational symmetry
        np.testing.assert_allclose(k, k.T, atol=1e-15)
        np.testing.assert_allclose(k, k[::-1, ::-1], atol=1e-15)

    def test_perfect_reconstruction(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((8, 8, 2)) + 1j * rng.standard_normal((8, 8, 2))
        assert hfen(x, x) == 0.0

    def test_matches_brute_force_convolution(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((16, 16, 1))
        x_hat = x + 0.1 * rng.standard_normal((16, 16, 1))
        k = log_kernel()
        lx = conv2_same_zero_oracle(np.abs(x[:, :, 0]), k)
        lh = conv2_same_zero_oracle(np.abs(x_hat[:, :, 0]), k)
        want = np.linalg.norm(lx - lh) / np.linalg.norm(lx)
        assert hfen(x, x_hat) == pytest.approx(want, abs=1e-10)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((8, 8, 2)) + 1j * rng.standard_normal((8, 8, 2))
        x_hat = x + 0.2 * rng.standard_normal((8, 8, 2))
        rot = np.exp(1j * 0.9)
        assert hfen(rot * x, rot * x_hat) == pytest.approx(hfen(x, x_hat), abs=1e-12)

    def test_flat_reference_rejected(self):
        # LoG of a constant image vanishes under zero-sum kernels only up to
        # the boundary; use an all-zero reference for a guaranteed zero norm
        x = np.zeros((8, 8, 1))
        with pytest.raises(ValueError):
            hfen(x, x + 1.0)


class TestSsim:
    def test_perfect_reconstruction(self):
        rng = np.random.default_rng(5)
        x = rng.random((12, 12, 2)) + 1j * rng.random((12, 12, 2))
        assert ssim(x, x) == pytest.approx(1.0)

    def test_inverted_contrast_below_one(self):
        rng = np.random.default_rng(6)
        x = 0.5 + 0.4 * rng.random((12, 12, 1))
        assert ssim(x, 1.0 - x) < 1.0

    def test_matches_windowed_statistics_oracle(self):
        rng = np.random.default_rng(7)
        x = rng.random((8, 8, 1))
        x_hat = np.clip(x + 0.2 * rng.standard_normal((8, 8, 1)), 0.0, 2.0)
        from blmd.metrics import gaussian_window

        want = ssim_oracle(
            np.abs(x[:, :, 0]),
            np.abs(x_hat[:, :, 0]),
            gaussian_window(),
            float(np.abs(x).max()),
        )
        assert ssim(x, x_hat) == pytest.approx(want, abs=1e-10)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(8)
        x = rng.random((8, 8, 2)) + 1j * rng.random((8, 8, 2))
        x_hat = x + 0.1 * rng.random((8, 8, 2))
        rot = np.exp(1j * 1.3)
        assert ssim(rot * x, rot * x_hat) == pytest.approx(ssim(x, x_hat), abs=1e-12)

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            ssim(np.zeros((8, 8, 1)), np.ones((8, 8, 1)))


class TestSharpness:
    def test_constant_image_vanishes(self):
        x = np.full((5, 5, 2), 3.0, dtype=complex)
        assert sharpness_m1(x) == 0.0
        assert sharpness_m2(x) == 0.0

    def test_m1_hand_case(self):
        x = np.array([[0.0, 1.0], [0.0, 1.0]])[:, :, None]
        assert sharpness_m1(x) == pytest.approx(0.25)

    def test_m2_hand_case(self):
        x = np.array([[0.0, 1.0], [0.0, 1.0]])[:, :, None]
        assert sharpness_m2(x) == pytest.approx(0.5)

    def test_nonnegative(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((6, 6, 3)) + 1j * rng.standard_normal((6, 6, 3))
        assert sharpness_m1(x) >= 0.0
        assert sharpness_m2(x) >= 0.0


def test_compute_metrics_report_fields():
    rng = np.random.default_rng(10)
    x = 0.5 + rng.random((8, 8, 4))
    x_hat = x + 0.05 * rng.standard_normal((8, 8, 4))
    rep = compute_metrics(x, x_hat)
    assert rep.nrmse >= 0.0
    assert rep.nrmse_per_frame.shape == (4,)
    assert rep.ssim <= 1.0
    assert rep.m1 >= 0.0 and rep.m2 >= 0.0
    assert np.isfinite(rep.hfen)
    assert rep.hfen_per_frame.shape == (4,)
    assert np.all(rep.hfen_per_frame >= 0.0)
