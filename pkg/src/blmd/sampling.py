"""Undersampling masks with always-on navigator rows.

Masks live on the *centered* k-space grid (low frequencies mid-array, as
acquisition diagrams draw them).  This module also owns the index maps
between that layout and the shift-free DC-at-(0,0) layout the transforms
use, so the transforms themselves never shift.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "GOLDEN_ANGLE_DEG",
    "MaskConfig",
    "SamplingMask",
    "cartesian_mask",
    "center_spectrum",
    "extract_navigators",
    "radial_mask",
    "uncenter_spectrum",
]

GOLDEN_ANGLE_DEG = 111.246117975


def center_spectrum(cube: np.ndarray) -> np.ndarray:
    """DC-at-(0,0) layout -> centered layout (low frequencies mid-array)."""
    return np.fft.fftshift(cube, axes=(0, 1))


def uncenter_spectrum(cube: np.ndarray) -> np.ndarray:
    """Centered layout -> DC-at-(0,0) layout; exact inverse of centering."""
    return np.fft.ifftshift(cube, axes=(0, 1))


@dataclass
class MaskConfig:
    kind: str = "cartesian"  # "cartesian" | "radial"
    acceleration: float = 4.0  # target N_k*N_fr / samples (Cartesian)
    nav_rows_count: int = 4
    gaussian_std_fraction: float = 0.15  # Cartesian row-density width
    spokes_per_frame: int = 6  # radial
    seed: int = 0

    def validate(self):
        if self.kind not in ("cartesian", "radial"):
            raise ConfigError(f"unknown mask kind {self.kind!r}")
        if self.nav_rows_count < 1:
            raise ConfigError("nav_rows_count must be >= 1")
        if self.kind == "cartesian" and self.acceleration <= 1.0:
            raise ConfigError("acceleration must exceed 1")
        if self.kind == "cartesian" and self.gaussian_std_fraction <= 0.0:
            raise ConfigError("gaussian_std_fraction must be > 0")
        if self.kind == "radial" and self.spokes_per_frame < 1:
            raise ConfigError("spokes_per_frame must be >= 1")


@dataclass
class SamplingMask:
    pattern: np.ndarray  # uint8 (n_p, n_f, n_fr), centered layout
    nav_rows: tuple  # always-on phase-row indices, ascending

    def achieved_acceleration(self) -> float:
        return self.pattern.size / int(np.count_nonzero(self.pattern))


def _navigator_rows(n_p: int, nu: int) -> tuple:
    if not 1 <= nu < n_p:
        raise ConfigError(f"navigator count {nu} must satisfy 1 <= nu < n_p={n_p}")
    start = (n_p - nu) // 2
    return tuple(range(start, start + nu))


def cartesian_mask(n_p: int, n_f: int, n_fr: int, cfg: MaskConfig) -> SamplingMask:
    """Whole phase-encode rows: centered navigators plus Gaussian-density draws.

    Per frame, rows are drawn without replacement (weight proportional to
    a Gaussian centered on the low-frequency rows) until the row budget
    ``ceil(n_p / acceleration)`` is met; navigator rows are identical in
    every frame.
    """
    cfg.validate()
    nav = _navigator_rows(n_p, cfg.nav_rows_count)
    budget = math.ceil(n_p / cfg.acceleration)
    if budget < len(nav):
        raise ConfigError(
            f"row budget {budget} (acceleration {cfg.acceleration}) cannot cover "
            f"{len(nav)} navigator rows"
        )
    sigma = cfg.gaussian_std_fraction * n_p
    centre = (n_p - 1) / 2.0
    weights = np.exp(-((np.arange(n_p) - centre) ** 2) / (2.0 * sigma**2))
    candidates = np.array([r for r in range(n_p) if r not in nav])
    rng = np.random.default_rng(cfg.seed)

    pattern = np.zeros((n_p, n_f, n_fr), dtype=np.uint8)
    pattern[list(nav), :, :] = 1
    extra = budget - len(nav)
    for t in range(n_fr):
        if extra:
            p = weights[candidates] / weights[candidates].sum()
            rows = rng.choice(candidates, size=extra, replace=False, p=p)
            pattern[rows, :, t] = 1
    return SamplingMask(pattern=pattern, nav_rows=nav)


def _mark_spoke(frame: np.ndarray, angle_rad: float):
    """Rasterize one straight line through the grid center (DDA walk)."""
    n_p, n_f = frame.shape
    r0, c0 = n_p // 2, n_f // 2
    dr, dc = math.sin(angle_rad), math.cos(angle_rad)
    if abs(dc) >= abs(dr):
        for c in range(n_f):
            t = (c - c0) / dc
            r = int(math.floor(r0 + t * dr + 0.5))
            if 0 <= r < n_p:
                frame[r, c] = 1
    else:
        for r in range(n_p):
            t = (r - r0) / dr
            c = int(math.floor(c0 + t * dc + 0.5))
            if 0 <= c < n_f:
                frame[r, c] = 1


def radial_mask(n_p: int, n_f: int, n_fr: int, cfg: MaskConfig) -> SamplingMask:
    """Golden-angle spokes gridded onto the Cartesian mask.

    The spoke counter continues across frame boundaries; navigator rows
    are forced on exactly as in the Cartesian mask.  Achieved acceleration
    is whatever the rasterization yields (reported, not targeted).
    """
    cfg.validate()
    nav = _navigator_rows(n_p, cfg.nav_rows_count)
    pattern = np.zeros((n_p, n_f, n_fr), dtype=np.uint8)
    for t in range(n_fr):
        for s in range(cfg.spokes_per_frame):
            g = t * cfg.spokes_per_frame + s
            _mark_spoke(pattern[:, :, t], math.radians(g * GOLDEN_ANGLE_DEG))
    pattern[list(nav), :, :] = 1
    return SamplingMask(pattern=pattern, nav_rows=nav)


def extract_navigators(kspace: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Gather the navigator rows of each frame into a (nu*n_f, n_fr) matrix.

    Column j vectorizes the nu x n_f navigator slab of frame j in
    column-major order.
    """
    if not mask.nav_rows:
        raise ValueError("mask carries no navigator rows")
    slab = np.asarray(kspace)[list(mask.nav_rows), :, :]
    nu, n_f, n_fr = slab.shape
    return slab.reshape(nu * n_f, n_fr, order="F")
