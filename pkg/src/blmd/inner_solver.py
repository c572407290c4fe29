"""Generic solver for affinely constrained composite convex subproblems.

The iteration keeps a half-index auxiliary sequence: with T the
constraint-attracting map, T_a := a*T + (1-a)*Id, step ``lam`` and smooth
gradient ``grad_g1``,

    H_{1/2}   = T_a(H_0) - lam * grad_g1(H_0)
    H_1       = prox_{lam g2}(H_{1/2})
    H_{k+3/2} = H_{k+1/2} + T(H_{k+1}) - lam*grad_g1(H_{k+1})
                          - T_a(H_k)   + lam*grad_g1(H_k)
    H_{k+2}   = prox_{lam g2}(H_{k+3/2})

with T applied to the newer iterate and T_a to the older one, exactly in
that asymmetric form.  Feasibility of hard constraints is reached only in
the limit; callers that need it exactly apply their projection once more
to the returned iterate.

The admissible step interval is (0, 2*(1-a)/L) for a in [0.5, 1), where L
is a Lipschitz constant of ``grad_g1``.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "SubproblemSpec",
    "admissible_step",
    "hermitian_lambda_max",
    "project_column_sums_to_one",
    "project_columns_to_ball",
    "run_inner",
    "soft_threshold",
]


def soft_threshold(a: np.ndarray, t: float) -> np.ndarray:
    """Entrywise magnitude shrinkage by t; phases preserved.

    ``a_ij * (1 - t / max(t, |a_ij|))``; entries with ``|a_ij| <= t``
    collapse to zero.
    """
    a = np.asarray(a)
    if t < 0:
        raise ValueError("threshold must be >= 0")
    if t == 0.0:
        return a.copy()
    return a * (1.0 - t / np.maximum(t, np.abs(a)))


def project_columns_to_ball(a: np.ndarray, radius: float) -> np.ndarray:
    """Scale each column onto the Euclidean ball of the given radius."""
    if radius <= 0:
        raise ValueError("radius must be > 0")
    a = np.asarray(a)
    norms = np.linalg.norm(a, axis=0)
    return a * (radius / np.maximum(radius, norms))


def project_column_sums_to_one(a: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {column sums == 1}."""
    a = np.asarray(a)
    n = a.shape[0]
    return a - (a.sum(axis=0, keepdims=True) - 1.0) / n


def hermitian_lambda_max(
    a: np.ndarray, tol: float = 1e-10, max_iters: int = 500
) -> float:
    """Largest eigenvalue of a Hermitian PSD matrix by power iteration.

    Deterministic all-ones start; falls back to the dense eigensolver when
    the iteration stalls (start vector in the kernel, degenerate ties).
    """
    a = np.asarray(a)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return 0.0
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    lam = 0.0
    for _ in range(max_iters):
        w = a @ v
        wn = np.linalg.norm(w)
        if wn <= 1e-15 * scale:
            return float(np.linalg.eigvalsh(a)[-1])
        v = w / wn
        lam_new = float(np.real(np.vdot(v, a @ v)))
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return float(np.linalg.eigvalsh(a)[-1])


def admissible_step(lipschitz: float, alpha: float, safety: float = 0.99) -> float:
    """Default step: just inside the admissible interval (0, 2(1-alpha)/L)."""
    return safety * 2.0 * (1.0 - alpha) / lipschitz


def _identity(a):
    return a


@dataclass
class SubproblemSpec:
    grad_g1: Callable[[np.ndarray], np.ndarray]
    lipschitz: float
    prox_g2: Optional[Callable[[np.ndarray, float], np.ndarray]] = None  # (h, step)
    t_map: Optional[Callable[[np.ndarray], np.ndarray]] = None
    alpha: float = 0.5
    step: Optional[float] = None  # None -> admissible_step(lipschitz, alpha)
    inner_iters: int = 50  # loop passes after the initialization half-step

    def validate(self) -> float:
        if not 0.5 <= self.alpha < 1.0:
            raise ValueError(f"alpha={self.alpha} outside [0.5, 1)")
        if not self.lipschitz > 0.0:
            raise ValueError("lipschitz must be > 0")
        if self.inner_iters < 0:
            raise ValueError("inner_iters must be >= 0")
        lam = self.step if self.step is not None else admissible_step(
            self.lipschitz, self.alpha
        )
        hi = 2.0 * (1.0 - self.alpha) / self.lipschitz
        if not 0.0 < lam < hi:
            raise ValueError(f"step {lam} outside the admissible interval (0, {hi})")
        return lam


def run_inner(spec: SubproblemSpec, h0: np.ndarray, return_history: bool = False):
    """Run the half-index iteration from h0; returns the final prox output.

    ``inner_iters`` counts loop passes, so ``inner_iters=0`` returns
    H_1 = prox(T_a(H_0) - lam*grad_g1(H_0)).
    """
    lam = spec.validate()
    prox = spec.prox_g2 or (lambda h, _s: h)
    t_map = spec.t_map or _identity
    alpha = spec.alpha

    h_prev = np.asarray(h0)
    g_prev = spec.grad_g1(h_prev)
    t_prev = t_map(h_prev)
    half = alpha * t_prev + (1.0 - alpha) * h_prev - lam * g_prev
    h_curr = prox(half, lam)
    history = [h_curr] if return_history else None

    for _ in range(spec.inner_iters):
        g_curr = spec.grad_g1(h_curr)
        t_curr = t_map(h_curr)
        half = (
            half
            + t_curr
            - lam * g_curr
            - (alpha * t_prev + (1.0 - alpha) * h_prev)
            + lam * g_prev
        )
        h_prev, g_prev, t_prev = h_curr, g_curr, t_curr
        h_curr = prox(half, lam)
        if return_history:
            history.append(h_curr)

    if return_history:
        return h_curr, history
    return h_curr
