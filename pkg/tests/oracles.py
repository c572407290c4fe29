"""Independent oracle implementations shared by the test modules.

Everything here re-derives expected values through a different route than
the library (direct sums, dual bisection, long proximal-gradient runs) so
the checks stay two-sided.
"""

import numpy as np


def soft_real(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def prox_l1_affine_column(v, t, zero_index=None, iters=80):
    """Exact prox of t*||.||_1 + indicator{sum(w)=1 (, w[zero_index]=0)}.

    Real vectors only.  Solves the scalar dual: find mu such that
    sum_i soft(v_i - mu, t) = 1 over the free entries (monotone
    piecewise-linear in mu), by bisection.
    """
    v = np.asarray(v, dtype=float)
    free = np.ones(len(v), dtype=bool)
    if zero_index is not None:
        free[zero_index] = False
    vf = v[free]

    def g(mu):
        return soft_real(vf - mu, t).sum() - 1.0

    lo = vf.min() - t - abs(1.0) / max(1, len(vf)) - 1.0
    hi = vf.max() + t + 1.0
    assert g(lo) > 0 > g(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    w = np.zeros_like(v)
    w[free] = soft_real(vf - mu, t)
    return w


def prox_l1_affine_cols(v, t, zero_diag=False):
    """Column-wise exact prox onto {column sums = 1} (optionally diag = 0)."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    for j in range(v.shape[1]):
        zi = j if zero_diag else None
        out[:, j] = prox_l1_affine_column(v[:, j], t, zero_index=zi)
    return out


def ista_composite(grad, lipschitz, prox, x0, iters=20000, tol=1e-14):
    """Plain proximal gradient with exact prox; converges to the global min."""
    x = x0.copy()
    eta = 1.0 / lipschitz
    for _ in range(iters):
        x_new = prox(x - eta * grad(x), eta)
        if np.linalg.norm(x_new - x) <= tol * max(1.0, np.linalg.norm(x)):
            x = x_new
            break
        x = x_new
    return x


def projection_oracle_slsqp(v, constraint, x0=None):
    """Euclidean projection via SLSQP on stacked real/imag variables.

    constraint: callable giving a list of scipy constraint dicts over the
    real stacked vector.
    """
    from scipy.optimize import minimize

    v = np.asarray(v)
    if np.iscomplexobj(v):
        vr = np.concatenate([v.real.ravel(), v.imag.ravel()])
    else:
        vr = v.ravel().astype(float)

    def obj(x):
        return 0.5 * np.sum((x - vr) ** 2)

    res = minimize(
        obj,
        x0 if x0 is not None else vr,
        jac=lambda x: x - vr,
        method="SLSQP",
        constraints=constraint(v),
        options={"maxiter": 500, "ftol": 1e-14},
    )
    assert res.success, res.message
    x = res.x
    if np.iscomplexobj(v):
        half = v.size
        return (x[:half] + 1j * x[half:]).reshape(v.shape)
    return x.reshape(v.shape)
