"""Desk-scale dynamic phantom: static texture plus a pulsating soft ellipse.

The ellipse edge is a cubic smoothstep whose argument is linear in
``cos(2*pi*t/period)``, so pixels inside the soft-edge band (never fully
covered, never fully released) trace a temporal profile that is an exact
cubic polynomial in the cosine — their spectrum holds the DC line plus
three overtones and nothing else.  That makes the phantom's temporal
structure fully known, which the tests exploit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = ["PhantomConfig", "generate_phantom"]


def _smoothstep(x):
    return x * x * (3.0 - 2.0 * x)


@dataclass
class PhantomConfig:
    n_p: int = 32
    n_f: int = 32
    n_fr: int = 32
    period: int = 8
    background_level: float = 0.35
    center: tuple = (0.5, 0.5)  # (row, col) as FOV fractions
    radii: tuple = (0.28, 0.20)  # (row, col) semi-axes as FOV fractions
    pulse_amplitude: float = 0.03  # radial oscillation, FOV fraction
    edge_width: float = 0.07  # soft-edge half width, FOV fraction
    noise_std: float = 0.0
    seed: int = 0

    def validate(self):
        if min(self.n_p, self.n_f, self.n_fr) < 1:
            raise ConfigError("phantom dimensions must be positive")
        if self.period < 1 or self.n_fr % self.period != 0:
            raise ConfigError(
                f"period {self.period} must divide the frame count {self.n_fr}"
            )
        if not 0.0 <= self.background_level <= 1.0:
            raise ConfigError("background_level must lie in [0, 1]")
        if self.pulse_amplitude < 0.0:
            raise ConfigError("pulse_amplitude must be >= 0")
        if self.noise_std < 0.0:
            raise ConfigError("noise_std must be >= 0")
        if self.edge_width <= 0.0:
            raise ConfigError("edge_width must be > 0")
        r_ref = max(self.radii)
        reach = 1.0 + (self.pulse_amplitude + self.edge_width) / r_ref
        for c, r in zip(self.center, self.radii):
            if c - r * reach < 0.0 or c + r * reach > 1.0:
                raise ConfigError("ellipse (radii + pulsation + edge) exceeds the FOV")

    # normalized oscillation/edge scales shared by generation and tests
    @property
    def _rel_amp(self):
        return self.pulse_amplitude / max(self.radii)

    @property
    def _rel_edge(self):
        return self.edge_width / max(self.radii)

    def elliptic_radius(self):
        """Static normalized elliptic-radius map (1.0 on the base boundary)."""
        y = (np.arange(self.n_p) + 0.5) / self.n_p
        x = (np.arange(self.n_f) + 0.5) / self.n_f
        dy = (y[:, None] - self.center[0]) / self.radii[0]
        dx = (x[None, :] - self.center[1]) / self.radii[1]
        return np.sqrt(dy * dy + dx * dx)

    def rim_pixel(self):
        """A pixel whose soft-edge argument never clips over the cycle.

        Requires edge_width > pulse_amplitude (relative to the reference
        radius); targets an off-center point of the band so all four
        cosine powers carry nonzero weight.
        """
        a, w = self._rel_amp, self._rel_edge
        if w <= a:
            raise ConfigError("edge_width must exceed pulse_amplitude for a rim band")
        target = 1.0 - 0.3 * w  # inside (1+a-w, 1-a+w), away from the midpoint
        e = self.elliptic_radius()
        idx = np.argmin(np.abs(e - target))
        return np.unravel_index(idx, e.shape)


def _background(cfg: PhantomConfig, rng) -> np.ndarray:
    """Smooth static texture from a few random low-order Fourier modes."""
    y = (np.arange(cfg.n_p) + 0.5) / cfg.n_p
    x = (np.arange(cfg.n_f) + 0.5) / cfg.n_f
    tex = np.zeros((cfg.n_p, cfg.n_f))
    for ky in range(3):
        for kx in range(3):
            amp = rng.standard_normal() / (1.0 + ky + kx)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            tex += amp * np.cos(2.0 * np.pi * (ky * y[:, None] + kx * x[None, :]) + phase)
    lo, hi = tex.min(), tex.max()
    if hi > lo:
        tex = (tex - lo) / (hi - lo)
    else:
        tex = np.zeros_like(tex)
    return cfg.background_level * (0.3 + 0.7 * tex)


def generate_phantom(cfg: PhantomConfig) -> np.ndarray:
    """Build the complex-valued (zero imaginary part) image cube.

    Deterministic given ``cfg.seed``; frames ``t`` and ``t + period`` are
    bit-identical when ``noise_std`` is zero.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    bg = _background(cfg, rng)
    e = cfg.elliptic_radius()
    a, w = cfg._rel_amp, cfg._rel_edge

    cube = np.empty((cfg.n_p, cfg.n_f, cfg.n_fr), dtype=np.complex128)
    for t in range(cfg.n_fr):
        scale = 1.0 + a * np.cos(2.0 * np.pi * (t % cfg.period) / cfg.period)
        m = _smoothstep(np.clip((scale + w - e) / (2.0 * w), 0.0, 1.0))
        frame = bg + (1.0 - bg) * m
        if cfg.noise_std > 0.0:
            frame = np.maximum(frame + cfg.noise_std * rng.standard_normal(frame.shape), 0.0)
        cube[:, :, t] = frame
    return cube
