"""Fourier and sampling primitives used throughout the recovery pipeline.

Conventions, fixed once here and relied on by every gradient formula:

* the forward DFT is the plain unnormalized double sum with kernel
  ``exp(-2j*pi/N)``; the inverse carries the ``1/N`` factor.  Under the
  trace inner product this makes the adjoints exactly
  ``F* = N_k * F^-1`` (spatial) and ``Ft* = N_fr * Ft^-1`` (temporal);
* frames are stored DC-at-(0,0); centering for display/mask geometry is a
  separate index map owned by :mod:`blmd.sampling`;
* vectorization is column-major per frame ("stack one column below the
  other"), so a cube of shape ``(n_p, n_f, n_fr)`` maps to a Casorati
  matrix of shape ``(n_p*n_f, n_fr)`` and back losslessly.

All functions are pure and operate on complex double-precision arrays.
"""

import numpy as np

__all__ = [
    "apply_sampling",
    "devectorize",
    "dft2",
    "dft_t",
    "frobenius_inner",
    "vectorize",
]


def dft2(a: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Per-frame 2-D DFT over the two leading (spatial) axes.

    Parameters
    ----------
    a : ndarray
        Single frame ``(n_p, n_f)`` or cube ``(n_p, n_f, n_fr)``.
    inverse : bool
        Apply the inverse transform (carries the ``1/(n_p*n_f)`` factor).
    """
    a = np.asarray(a)
    if a.ndim not in (2, 3):
        raise ValueError(f"expected a 2-D frame or 3-D cube, got ndim={a.ndim}")
    if inverse:
        return np.fft.ifft2(a, axes=(0, 1))
    return np.fft.fft2(a, axes=(0, 1))


def dft_t(a: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Row-wise 1-D DFT along the temporal (last) axis.

    Acts on Casorati matrices ``(rows, n_fr)``; unnormalized forward,
    ``1/n_fr`` on the inverse.
    """
    a = np.asarray(a)
    if inverse:
        return np.fft.ifft(a, axis=-1)
    return np.fft.fft(a, axis=-1)


def apply_sampling(a: np.ndarray, pattern: np.ndarray) -> np.ndarray:
    """Keep entries at sampled positions, nullify the rest.

    The operator is self-adjoint and idempotent; ``pattern`` is binary and
    must match ``a`` in shape.
    """
    a = np.asarray(a)
    pattern = np.asarray(pattern)
    if a.shape != pattern.shape:
        raise ValueError(f"shape mismatch: data {a.shape} vs pattern {pattern.shape}")
    return a * pattern


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Trace inner product ``<A, B> = trace(A^H B)``.

    Conjugate-linear in the first argument: ``<B, A> = conj(<A, B>)``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def vectorize(cube: np.ndarray) -> np.ndarray:
    """Cube ``(n_p, n_f, n_fr)`` -> Casorati matrix ``(n_p*n_f, n_fr)``.

    Column ``j`` is the column-major vectorization of frame ``j``.
    """
    cube = np.asarray(cube)
    if cube.ndim != 3:
        raise ValueError(f"expected a 3-D cube, got ndim={cube.ndim}")
    n_p, n_f, n_fr = cube.shape
    return cube.reshape(n_p * n_f, n_fr, order="F")


def devectorize(mat: np.ndarray, n_p: int, n_f: int) -> np.ndarray:
    """Inverse of :func:`vectorize`; exact bit-level round trip."""
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != n_p * n_f:
        raise ValueError(
            f"cannot reshape {mat.shape} into frames of size {n_p}x{n_f}"
        )
    return mat.reshape(n_p, n_f, mat.shape[1], order="F")
