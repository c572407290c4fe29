"""Outer recovery loop for the bilinear factor model.

The estimate of the image-domain Casorati matrix is U @ C @ B with C the
compressed landmarks (d x n_l, fixed), U the decompression factor
(n_k x d, columns confined to a Euclidean ball) and B the affine
combination weights (n_l x n_fr, unit column sums, l1-penalized).  Each
outer iteration convexifies the task around the current triple
(U_n, B_n, Z_n):

* U and B are updated by the generic inner solver on their strongly
  convex subproblems (proximal weights tau_u, tau_b);
* the temporal-spectrum auxiliary Z gets a closed-form magnitude
  shrinkage at threshold lambda2/lambda1;
* the triple moves by a convex combination with the diminishing step
  gamma_{n+1} = gamma_n * (1 - zeta * gamma_n).

The masked k-space data and mask arrive in the centered layout produced
by the sampling module and are mapped once to the shift-free layout the
transforms use; the two layouts are unitarily equivalent, so gradients
and bounds are unaffected.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ConfigError
from .inner_solver import (
    SubproblemSpec,
    hermitian_lambda_max,
    project_column_sums_to_one,
    project_columns_to_ball,
    run_inner,
    soft_threshold,
)
from .sampling import extract_navigators, uncenter_spectrum
from .transforms import apply_sampling, devectorize, dft2, dft_t, vectorize

__all__ = [
    "RecoveryConfig",
    "RecoveryResult",
    "default_lambda3",
    "default_lambda_w",
    "default_n_landmarks",
    "gamma_next",
    "grad_b",
    "grad_u",
    "lipschitz_b",
    "lipschitz_u",
    "make_context",
    "make_problem",
    "objective",
    "run_recovery",
    "update_z",
]


@dataclass
class RecoveryConfig:
    lambda1: float = 1.0
    lambda2: float = 0.05
    lambda3: Optional[float] = None  # None -> 0.05 * max|Y_nav|
    c_u: float = 1.0
    tau_u: float = 1.0
    tau_b: float = 1.0
    zeta: float = 0.001
    gamma0: float = 0.9
    n_landmarks: Optional[int] = None  # None -> ceil(0.2 * n_fr)
    embed_dim: Optional[int] = None  # None -> min(4, n_landmarks)
    lambda_w: Optional[float] = None  # None -> 1e-3 * ||L||_F^2 / n_l
    outer_iters: int = 60
    inner_iters: int = 50
    w_iters: int = 300
    alpha: float = 0.5
    stop_tol: float = 1e-3

    def validate(self):
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ConfigError("lambda1 and lambda2 must be > 0")
        if self.lambda3 is not None and self.lambda3 <= 0:
            raise ConfigError("lambda3 must be > 0")
        if self.c_u <= 0 or self.tau_u <= 0 or self.tau_b <= 0:
            raise ConfigError("c_u, tau_u and tau_b must be > 0")
        if not 0.0 < self.zeta < 1.0:
            raise ConfigError("zeta must lie in (0, 1)")
        if not 0.0 < self.gamma0 <= 1.0:
            raise ConfigError("gamma0 must lie in (0, 1]")
        if not 0.5 <= self.alpha < 1.0:
            raise ConfigError("alpha must lie in [0.5, 1)")
        if self.outer_iters < 0 or self.inner_iters < 0 or self.w_iters < 0:
            raise ConfigError("iteration counts must be >= 0")
        if self.stop_tol < 0:
            raise ConfigError("stop_tol must be >= 0")
        if self.n_landmarks is not None and self.n_landmarks < 1:
            raise ConfigError("n_landmarks must be >= 1")
        if self.embed_dim is not None and self.embed_dim < 1:
            raise ConfigError("embed_dim must be >= 1")
        if self.lambda_w is not None and self.lambda_w <= 0:
            raise ConfigError("lambda_w must be > 0")


def default_n_landmarks(n_fr: int) -> int:
    """About a fifth of the frame count describes the cloud concisely."""
    return max(1, math.ceil(0.2 * n_fr))


def default_lambda3(y_nav: np.ndarray) -> float:
    return 0.05 * float(np.max(np.abs(y_nav)))


def default_lambda_w(lambda_mat: np.ndarray) -> float:
    n_l = lambda_mat.shape[1]
    return 1e-3 * float(np.linalg.norm(lambda_mat) ** 2) / n_l


@dataclass
class _Problem:
    s_y: np.ndarray  # (n_k, n_fr) masked k-space Casorati, DC-at-(0,0)
    pattern: np.ndarray  # (n_p, n_f, n_fr), DC-at-(0,0)
    lam_check: np.ndarray  # (d, n_l)
    n_p: int
    n_f: int
    n_fr: int
    n_k: int
    lambda1: float
    base_const: np.ndarray = field(repr=False, default=None)  # n_k * F^-1(S(Y))


def make_problem(s_y_cube, pattern, lam_check, lambda1: float) -> _Problem:
    s_y_cube = np.asarray(s_y_cube)
    pattern = np.asarray(pattern)
    lam_check = np.asarray(lam_check)
    if s_y_cube.ndim != 3 or s_y_cube.shape != pattern.shape:
        raise ValueError("masked data and pattern must be equally shaped cubes")
    n_p, n_f, n_fr = s_y_cube.shape
    n_k = n_p * n_f
    prob = _Problem(
        s_y=vectorize(s_y_cube),
        pattern=pattern,
        lam_check=lam_check,
        n_p=n_p,
        n_f=n_f,
        n_fr=n_fr,
        n_k=n_k,
        lambda1=lambda1,
    )
    prob.base_const = n_k * vectorize(dft2(s_y_cube, inverse=True))
    return prob


@dataclass
class _Context:
    """Per-outer-iteration shared quantities for both subproblems."""

    prob: _Problem
    u_ref: np.ndarray
    b_ref: np.ndarray
    z_ref: np.ndarray
    lb: np.ndarray  # lam_check @ b_ref, (d, n_fr)
    ul: np.ndarray  # u_ref @ lam_check, (n_k, n_l)
    const: np.ndarray  # n_k*F^-1(S(Y)) + lambda1*n_fr*Ft^-1(z_ref)
    lb_h: np.ndarray = None
    ul_h: np.ndarray = None


def make_context(prob: _Problem, u_ref, b_ref, z_ref) -> _Context:
    const = prob.base_const + prob.lambda1 * prob.n_fr * dft_t(z_ref, inverse=True)
    lb = prob.lam_check @ b_ref
    ul = u_ref @ prob.lam_check
    return _Context(
        prob=prob,
        u_ref=u_ref,
        b_ref=b_ref,
        z_ref=z_ref,
        lb=lb,
        ul=ul,
        const=const,
        lb_h=np.ascontiguousarray(lb.conj().T),
        ul_h=np.ascontiguousarray(ul.conj().T),
    )


def _masked_roundtrip(m: np.ndarray, prob: _Problem) -> np.ndarray:
    """F^-1 S F applied to an (n_k, n_fr) Casorati matrix."""
    cube = devectorize(m, prob.n_p, prob.n_f)
    filtered = apply_sampling(dft2(cube), prob.pattern)
    return vectorize(dft2(filtered, inverse=True))


def grad_u(u: np.ndarray, ctx: _Context, tau_u: float) -> np.ndarray:
    """Real-pair gradient of the smooth U-subproblem part.

    [n_k*F^-1 S F(M) + lambda1*n_fr*M] (C B_n)^H + tau_u (U - U_n) - const (C B_n)^H
    with M = U C B_n; the directional derivative equals Re<G, D>.
    """
    prob = ctx.prob
    m = u @ ctx.lb
    t = prob.n_k * _masked_roundtrip(m, prob) + prob.lambda1 * prob.n_fr * m
    return (t - ctx.const) @ ctx.lb_h + tau_u * (u - ctx.u_ref)


def grad_b(b: np.ndarray, ctx: _Context, tau_b: float) -> np.ndarray:
    """Real-pair gradient of the smooth B-subproblem part (mirror of grad_u)."""
    prob = ctx.prob
    m = ctx.ul @ b
    t = prob.n_k * _masked_roundtrip(m, prob) + prob.lambda1 * prob.n_fr * m
    return ctx.ul_h @ (t - ctx.const) + tau_b * (b - ctx.b_ref)


def lipschitz_u(ctx: _Context, tau_u: float) -> float:
    """(n_k + lambda1*n_fr) * lambda_max(C B_n B_n^H C^H) + tau_u."""
    prob = ctx.prob
    lam = hermitian_lambda_max(ctx.lb @ ctx.lb.conj().T)
    return (prob.n_k + prob.lambda1 * prob.n_fr) * lam + tau_u


def lipschitz_b(ctx: _Context, tau_b: float) -> float:
    """(n_k + lambda1*n_fr) * lambda_max(C^H U_n^H U_n C) + tau_b."""
    prob = ctx.prob
    lam = hermitian_lambda_max(ctx.ul.conj().T @ ctx.ul)
    return (prob.n_k + prob.lambda1 * prob.n_fr) * lam + tau_b


def update_z(u, b, lam_check, lambda1: float, lambda2: float) -> np.ndarray:
    """Magnitude shrinkage of the temporal spectrum of U C B.

    Entrywise soft threshold at lambda2/lambda1; phases preserved.
    """
    if lambda1 == 0.0:
        raise ValueError("lambda1 must be nonzero")
    spectrum = dft_t(u @ (np.asarray(lam_check) @ b))
    return soft_threshold(spectrum, lambda2 / lambda1)


def objective(u, b, z, prob: _Problem, cfg: RecoveryConfig) -> float:
    """Full task value: data fit + spectrum tie + l1(Z) + l1(B)."""
    m = u @ (prob.lam_check @ b)
    cube = devectorize(m, prob.n_p, prob.n_f)
    data_fit = 0.5 * np.linalg.norm(
        prob.s_y - vectorize(apply_sampling(dft2(cube), prob.pattern))
    ) ** 2
    tie = 0.5 * cfg.lambda1 * np.linalg.norm(z - dft_t(m)) ** 2
    return float(
        data_fit
        + tie
        + cfg.lambda2 * np.sum(np.abs(z))
        + (cfg.lambda3 or 0.0) * np.sum(np.abs(b))
    )


def gamma_next(gamma: float, zeta: float) -> float:
    """One diminishing-step update; strictly smaller, stays positive."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma={gamma} outside (0, 1]")
    if not 0.0 < zeta < 1.0:
        raise ValueError(f"zeta={zeta} outside (0, 1)")
    return gamma * (1.0 - zeta * gamma)


@dataclass
class RecoveryResult:
    x_hat: np.ndarray  # image cube (n_p, n_f, n_fr)
    u_star: np.ndarray
    b_star: np.ndarray
    z_star: np.ndarray
    objective_trace: np.ndarray
    gamma_trace: np.ndarray
    residual_trace: np.ndarray  # relative change of the stacked factors
    u_colnorm_trace: np.ndarray  # max U column norm per iterate
    b_colsum_dev_trace: np.ndarray  # max |column sum - 1| per iterate


def _initial_factors(prob: _Problem, cfg: RecoveryConfig, init_seed):
    n_l = prob.lam_check.shape[1]
    b0 = np.full((n_l, prob.n_fr), 1.0 / n_l, dtype=complex)
    f_inv = prob.base_const / prob.n_k  # F^-1(S(Y)) as Casorati
    u0 = (1.0 / prob.n_k) * f_inv @ b0.conj().T @ prob.lam_check.conj().T
    if init_seed is not None:
        rng = np.random.default_rng(init_seed)
        sigma = 0.01 * cfg.c_u / math.sqrt(prob.n_k)
        u0 = u0 + sigma * (
            rng.standard_normal(u0.shape) + 1j * rng.standard_normal(u0.shape)
        )
    u0 = project_columns_to_ball(u0, cfg.c_u)
    z0 = dft_t(u0 @ (prob.lam_check @ b0))
    return u0, b0, z0


def run_recovery(masked_y, mask, compressed, cfg: RecoveryConfig, init_seed=None):
    """Run the full outer loop on centered-layout masked k-space data.

    ``compressed`` is a CompressedLandmarks (or a bare (d, n_l) array).
    ``init_seed`` perturbs the data-driven U_0 for independent trials;
    None keeps the deterministic initialization.
    """
    cfg.validate()
    masked_y = np.asarray(masked_y)
    if not np.all(np.isfinite(masked_y)):
        raise ValueError("masked k-space data contain non-finite entries")
    lam_check = np.asarray(getattr(compressed, "lambda_check", compressed))

    lambda3 = cfg.lambda3
    if lambda3 is None:
        lambda3 = default_lambda3(extract_navigators(masked_y, mask))
        if lambda3 <= 0:
            raise ConfigError("cannot scale lambda3 from all-zero navigators")
    cfg = replace(cfg, lambda3=lambda3)

    pattern = uncenter_spectrum(mask.pattern).astype(float)
    s_y_cube = apply_sampling(uncenter_spectrum(masked_y), pattern)
    prob = make_problem(s_y_cube, pattern, lam_check, lambda1=cfg.lambda1)

    u, b, z = _initial_factors(prob, cfg, init_seed)
    gamma = cfg.gamma0
    obj_trace, gamma_trace, res_trace = [], [], []
    ucol_trace, bdev_trace = [], []

    for n in range(cfg.outer_iters):
        gamma = gamma_next(gamma, cfg.zeta)
        ctx = make_context(prob, u, b, z)

        spec_u = SubproblemSpec(
            grad_g1=lambda h, c=ctx: grad_u(h, c, cfg.tau_u),
            lipschitz=lipschitz_u(ctx, cfg.tau_u),
            prox_g2=lambda h, _s: project_columns_to_ball(h, cfg.c_u),
            alpha=cfg.alpha,
            inner_iters=cfg.inner_iters,
        )
        u_hat = project_columns_to_ball(run_inner(spec_u, u), cfg.c_u)

        spec_b = SubproblemSpec(
            grad_g1=lambda h, c=ctx: grad_b(h, c, cfg.tau_b),
            lipschitz=lipschitz_b(ctx, cfg.tau_b),
            prox_g2=lambda h, s: soft_threshold(h, s * cfg.lambda3),
            t_map=project_column_sums_to_one,
            alpha=cfg.alpha,
            inner_iters=cfg.inner_iters,
        )
        b_hat = project_column_sums_to_one(run_inner(spec_b, b))

        z_hat = update_z(u, b, prob.lam_check, cfg.lambda1, cfg.lambda2)

        old_norm = math.sqrt(
            np.linalg.norm(u) ** 2 + np.linalg.norm(b) ** 2 + np.linalg.norm(z) ** 2
        )
        u_new = (1.0 - gamma) * u + gamma * u_hat
        b_new = (1.0 - gamma) * b + gamma * b_hat
        z_new = (1.0 - gamma) * z + gamma * z_hat
        change = math.sqrt(
            np.linalg.norm(u_new - u) ** 2
            + np.linalg.norm(b_new - b) ** 2
            + np.linalg.norm(z_new - z) ** 2
        )
        u, b, z = u_new, b_new, z_new

        if not (
            np.all(np.isfinite(u)) and np.all(np.isfinite(b)) and np.all(np.isfinite(z))
        ):
            raise RuntimeError(f"non-finite iterate at outer iteration {n}")

        obj_trace.append(objective(u, b, z, prob, cfg))
        gamma_trace.append(gamma)
        rel = change / max(old_norm, 1e-300)
        res_trace.append(rel)
        ucol_trace.append(float(np.max(np.linalg.norm(u, axis=0))))
        bdev_trace.append(float(np.max(np.abs(b.sum(axis=0) - 1.0))))
        if cfg.stop_tol > 0.0 and rel < cfg.stop_tol:
            break

    x_hat = devectorize(u @ (prob.lam_check @ b), prob.n_p, prob.n_f)
    return RecoveryResult(
        x_hat=x_hat,
        u_star=u,
        b_star=b,
        z_star=z,
        objective_trace=np.asarray(obj_trace),
        gamma_trace=np.asarray(gamma_trace),
        residual_trace=np.asarray(res_trace),
        u_colnorm_trace=np.asarray(ucol_trace),
        b_colsum_dev_trace=np.asarray(bdev_trace),
    )
