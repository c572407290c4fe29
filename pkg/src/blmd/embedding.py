"""Two-stage dimensionality reduction of the landmark columns.

Stage one fits a sparse affine self-expression W (each landmark written
as an affine, zero-self-weight combination of the others) by running the
generic composite solver on

    min ||L - L W||_F^2 + lambda_w ||W||_1
    s.t. column sums of W equal 1, diag(W) = 0.

Stage two compresses the landmarks to d dimensions: the rows of the
output are the d eigenvectors of (I - W)(I - W)^H with the smallest
eigenvalues, conjugate-transposed, which minimizes ||C - C W||_F^2 over
matrices with orthonormal rows.
"""

from dataclasses import dataclass

import numpy as np

from .inner_solver import (
    SubproblemSpec,
    hermitian_lambda_max,
    run_inner,
    soft_threshold,
)

__all__ = [
    "CompressedLandmarks",
    "SelfExpression",
    "compress_landmarks",
    "project_affine_zero_diag",
    "solve_self_expression",
]


@dataclass
class SelfExpression:
    w: np.ndarray  # (n_l, n_l), zero diagonal, unit column sums
    lambda_w: float
    residual: float  # final objective value (fit + l1)


@dataclass
class CompressedLandmarks:
    lambda_check: np.ndarray  # (d, n_l), orthonormal rows
    d: int
    eigvals: np.ndarray  # the d smallest eigenvalues, ascending


def project_affine_zero_diag(w: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {unit column sums, zero diagonal}.

    Per column j: zero the diagonal entry, then spread the remaining
    column-sum deficit evenly over the off-diagonal entries.
    """
    w = np.asarray(w)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("expected a square matrix")
    n = w.shape[0]
    if n < 2:
        raise ValueError("constraint set is infeasible for a single landmark")
    out = w.copy()
    np.fill_diagonal(out, 0.0)
    out = out + (1.0 - out.sum(axis=0, keepdims=True)) / (n - 1)
    np.fill_diagonal(out, 0.0)
    return out


def solve_self_expression(
    lambda_mat: np.ndarray,
    lambda_w: float,
    iters: int = 300,
    alpha: float = 0.5,
    step: float = None,
    return_history: bool = False,
):
    """Fit the sparse affine self-expression of the landmark columns.

    Returns a :class:`SelfExpression` whose invariants (zero diagonal,
    unit column sums to 1e-8) hold exactly thanks to a final projection.
    With ``return_history`` also returns the objective value at every
    prox output.
    """
    lam = np.asarray(lambda_mat)
    if lam.ndim != 2 or lam.shape[1] < 2:
        raise ValueError("need at least two landmark columns")
    if lambda_w <= 0:
        raise ValueError("lambda_w must be > 0")
    n_l = lam.shape[1]
    gram = lam.conj().T @ lam
    lip = 2.0 * hermitian_lambda_max(gram)
    if lip <= 0.0:
        raise ValueError("landmark matrix is identically zero")

    def grad(w):
        return 2.0 * (gram @ w - gram)

    def objective(w):
        return float(
            np.linalg.norm(lam - lam @ w) ** 2 + lambda_w * np.sum(np.abs(w))
        )

    spec = SubproblemSpec(
        grad_g1=grad,
        lipschitz=lip,
        prox_g2=lambda h, s: soft_threshold(h, lambda_w * s),
        t_map=project_affine_zero_diag,
        alpha=alpha,
        step=step,
        inner_iters=iters,
    )
    w0 = project_affine_zero_diag(np.zeros((n_l, n_l), dtype=lam.dtype))
    if return_history:
        w_raw, iterates = run_inner(spec, w0, return_history=True)
        history = [objective(h) for h in iterates]
    else:
        w_raw = run_inner(spec, w0)
    w = project_affine_zero_diag(w_raw)
    expr = SelfExpression(w=w, lambda_w=lambda_w, residual=objective(w))
    if return_history:
        history.append(expr.residual)
        return expr, history
    return expr


def compress_landmarks(w: np.ndarray, d: int) -> CompressedLandmarks:
    """d-dimensional orthonormal-row embedding from the smallest eigenvectors.

    Eigenvalues sorted ascending; each eigenvector row is rotated so its
    largest-magnitude component is real and positive, making the output
    deterministic up to eigenvalue ties.
    """
    w = np.asarray(w)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("expected a square self-expression matrix")
    n_l = w.shape[0]
    if not 1 <= d <= n_l:
        raise ValueError(f"d={d} must lie in [1, {n_l}]")
    if not np.all(np.isfinite(w)):
        raise ValueError("self-expression matrix contains non-finite entries")

    residual_map = np.eye(n_l) - w
    m = residual_map @ residual_map.conj().T
    m = 0.5 * (m + m.conj().T)  # exact Hermitian symmetry for the eigensolver
    eigvals, eigvecs = np.linalg.eigh(m)  # ascending

    rows = eigvecs[:, :d].conj().T.copy()
    for i in range(d):
        k = int(np.argmax(np.abs(rows[i])))
        pivot = rows[i, k]
        if np.abs(pivot) > 0:
            rows[i] *= np.conj(pivot) / np.abs(pivot)
    return CompressedLandmarks(
        lambda_check=rows, d=d, eigvals=np.maximum(eigvals[:d], 0.0)
    )
