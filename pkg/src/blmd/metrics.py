"""Quantitative evaluation of reconstructions.

All metrics operate on magnitude images (reconstructions are compared as
magnitude maps); boundary handling for the filtered metrics is
zero-padded same-size convolution, fixed for determinism.

NRMSE   ||X - Xh||_F / ||X||_F, global and per frame.
HFEN    norm ratio of Laplacian-of-Gaussian filtered stacks
        (15x15 kernel, sigma 1.5).
SSIM    single-scale, 11x11 Gaussian window (sigma 1.5), K1=0.01,
        K2=0.03, dynamic range = max |X|; mean over all pixels/frames.
M1, M2  sharpness: intensity variance, and forward-difference gradient
        energy per pixel.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

__all__ = [
    "MetricsReport",
    "compute_metrics",
    "gaussian_window",
    "hfen",
    "hfen_per_frame",
    "log_kernel",
    "nrmse",
    "nrmse_per_frame",
    "sharpness_m1",
    "sharpness_m2",
    "ssim",
]


@dataclass
class MetricsReport:
    nrmse: float
    nrmse_per_frame: np.ndarray
    hfen: float
    ssim: float
    m1: float
    m2: float
    hfen_per_frame: np.ndarray = None  # informational extra


def _as_cube(a):
    a = np.asarray(a)
    if a.ndim == 2:
        a = a[:, :, None]
    if a.ndim != 3:
        raise ValueError(f"expected frames, got ndim={a.ndim}")
    return a


def nrmse(x, x_hat) -> float:
    x = np.asarray(x)
    x_hat = np.asarray(x_hat)
    if x.shape != x_hat.shape:
        raise ValueError("shape mismatch")
    ref = np.linalg.norm(x)
    if ref == 0.0:
        raise ValueError("reference has zero norm")
    return float(np.linalg.norm(x - x_hat) / ref)


def nrmse_per_frame(x, x_hat) -> np.ndarray:
    x = _as_cube(x)
    x_hat = _as_cube(x_hat)
    out = np.empty(x.shape[2])
    for j in range(x.shape[2]):
        out[j] = nrmse(x[:, :, j], x_hat[:, :, j])
    return out


def log_kernel(size: int = 15, sigma: float = 1.5) -> np.ndarray:
    """Rotationally symmetric Laplacian-of-Gaussian filter.

    The underlying Gaussian is normalized to unit sum before applying the
    Laplacian factor; the result is mean-subtracted so the kernel sums to
    zero exactly.
    """
    half = size // 2
    idx = np.arange(-half, half + 1, dtype=float)
    rho2 = idx[:, None] ** 2 + idx[None, :] ** 2
    g = np.exp(-rho2 / (2.0 * sigma**2))
    g /= g.sum()
    h = g * (rho2 - 2.0 * sigma**2) / sigma**4
    return h - h.mean()


def _filter_stack(cube, kernel):
    mags = np.abs(cube)
    return np.stack(
        [
            convolve2d(mags[:, :, j], kernel, mode="same", boundary="fill")
            for j in range(cube.shape[2])
        ],
        axis=2,
    )


def hfen(x, x_hat) -> float:
    x = _as_cube(x)
    x_hat = _as_cube(x_hat)
    if x.shape != x_hat.shape:
        raise ValueError("shape mismatch")
    kernel = log_kernel()
    ref = _filter_stack(x, kernel)
    est = _filter_stack(x_hat, kernel)
    denom = np.linalg.norm(ref)
    if denom == 0.0:
        raise ValueError("filtered reference has zero norm")
    return float(np.linalg.norm(ref - est) / denom)


def hfen_per_frame(x, x_hat) -> np.ndarray:
    """Frame-wise variant of :func:`hfen` (informational)."""
    x = _as_cube(x)
    x_hat = _as_cube(x_hat)
    return np.array(
        [hfen(x[:, :, j], x_hat[:, :, j]) for j in range(x.shape[2])]
    )


def gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = size // 2
    idx = np.arange(-half, half + 1, dtype=float)
    w = np.exp(-(idx[:, None] ** 2 + idx[None, :] ** 2) / (2.0 * sigma**2))
    return w / w.sum()


def ssim(x, x_hat) -> float:
    x = _as_cube(x)
    x_hat = _as_cube(x_hat)
    if x.shape != x_hat.shape:
        raise ValueError("shape mismatch")
    data_range = float(np.max(np.abs(x)))
    if data_range == 0.0:
        raise ValueError("reference is identically zero")
    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    window = gaussian_window()

    total = 0.0
    for j in range(x.shape[2]):
        a = np.abs(x[:, :, j])
        b = np.abs(x_hat[:, :, j])
        conv = lambda img: convolve2d(img, window, mode="same", boundary="fill")
        mu_a = conv(a)
        mu_b = conv(b)
        var_a = conv(a * a) - mu_a**2
        var_b = conv(b * b) - mu_b**2
        cov = conv(a * b) - mu_a * mu_b
        score = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
            (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
        )
        total += float(score.mean())
    return total / x.shape[2]


def sharpness_m1(x_hat) -> float:
    """Variance of magnitude intensities over all pixels and frames."""
    return float(np.var(np.abs(_as_cube(x_hat))))


def sharpness_m2(x_hat) -> float:
    """Forward-difference gradient energy, normalized by pixel count.

    Differences past the last row/column are dropped; the sum over frames
    is divided by the total element count.
    """
    mags = np.abs(_as_cube(x_hat))
    gx = mags[:, 1:, :] - mags[:, :-1, :]
    gy = mags[1:, :, :] - mags[:-1, :, :]
    return float((np.sum(gx**2) + np.sum(gy**2)) / mags.size)


def compute_metrics(x, x_hat) -> MetricsReport:
    return MetricsReport(
        nrmse=nrmse(x, x_hat),
        nrmse_per_frame=nrmse_per_frame(x, x_hat),
        hfen=hfen(x, x_hat),
        ssim=ssim(x, x_hat),
        m1=sharpness_m1(x_hat),
        m2=sharpness_m2(x_hat),
        hfen_per_frame=hfen_per_frame(x, x_hat),
    )
