"""Batch pipeline: config file in, artifacts and a metrics report out.

Flow: phantom -> k-space -> mask/sample -> landmarks -> embedding ->
recovery (one run per trial) -> metrics for the bilinear estimate and the
zero-filled baseline -> report.json plus binary/image/CSV artifacts.

Every stage failure is re-raised as :class:`PipelineError` tagged with
the stage name so the CLI can report it and pick the right exit code.
"""

import dataclasses
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .blmdfile import write_blmd
from .embedding import compress_landmarks, solve_self_expression
from .errors import ConfigError
from .landmarks import select_landmarks
from .metrics import MetricsReport, compute_metrics, nrmse
from .phantom import PhantomConfig, generate_phantom
from .recovery import (
    RecoveryConfig,
    default_lambda_w,
    default_n_landmarks,
    run_recovery,
)
from .sampling import (
    MaskConfig,
    cartesian_mask,
    extract_navigators,
    radial_mask,
    center_spectrum,
    uncenter_spectrum,
)
from .transforms import apply_sampling, dft2

__all__ = [
    "PipelineConfig",
    "PipelineError",
    "load_config",
    "config_from_dict",
    "run_pipeline",
    "zero_filled_baseline",
]


class PipelineError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name):
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


@dataclass
class PipelineConfig:
    phantom: PhantomConfig = field(default_factory=PhantomConfig)
    mask: MaskConfig = field(default_factory=MaskConfig)
    recovery: RecoveryConfig = field(default_factory=RecoveryConfig)
    output_dir: str = "out"
    emit_images: bool = False
    emit_csv: bool = False
    trials: int = 1
    base_seed: int = 0

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        self.phantom.validate()
        self.mask.validate()
        self.recovery.validate()


def _build(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def config_from_dict(data) -> PipelineConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    names = {f.name for f in dataclasses.fields(PipelineConfig)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"config: unknown keys {unknown}")
    kwargs = dict(data)
    for key, cls in (
        ("phantom", PhantomConfig),
        ("mask", MaskConfig),
        ("recovery", RecoveryConfig),
    ):
        if key in kwargs:
            kwargs[key] = _build(cls, kwargs[key], key)
    try:
        return PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> PipelineConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def zero_filled_baseline(masked_y) -> np.ndarray:
    """Inverse transform of the masked data, unobserved entries zero."""
    return dft2(uncenter_spectrum(np.asarray(masked_y)), inverse=True)


def _metrics_dict(rep: MetricsReport) -> dict:
    return {
        "nrmse": float(rep.nrmse),
        "nrmse_per_frame": [float(v) for v in rep.nrmse_per_frame],
        "hfen": float(rep.hfen),
        "ssim": float(rep.ssim),
        "m1": float(rep.m1),
        "m2": float(rep.m2),
    }


def _write_pgm16(path: Path, img: np.ndarray) -> float:
    """16-bit binary PGM; magnitudes scaled to [0, 65535] per file."""
    hi = float(img.max())
    scale = 65535.0 / hi if hi > 0 else 0.0
    q = np.round(img * scale).astype(">u2")
    h, w = img.shape
    path.write_bytes(f"P5\n{w} {h}\n65535\n".encode() + q.tobytes())
    return scale


def _emit_images(out: Path, truth, recon):
    lines = []
    for label, cube in (("truth", truth), ("recon", recon)):
        mags = np.abs(cube)
        for j in range(cube.shape[2]):
            name = f"{label}_f{j:03d}.pgm"
            scale = _write_pgm16(out / name, mags[:, :, j])
            lines.append(f"{name} {scale!r}")
    (out / "pgm_scales.txt").write_text("\n".join(lines) + "\n")


def _emit_csv(out: Path, per_frame, result):
    rows = ["frame_index,nrmse"]
    rows += [f"{j},{float(v)!r}" for j, v in enumerate(per_frame)]
    (out / "nrmse_per_frame.csv").write_text("\n".join(rows) + "\n")
    rows = ["iter,objective,gamma,residual"]
    for i in range(result.objective_trace.size):
        rows.append(
            f"{i},{float(result.objective_trace[i])!r},"
            f"{float(result.gamma_trace[i])!r},{float(result.residual_trace[i])!r}"
        )
    (out / "trace.csv").write_text("\n".join(rows) + "\n")


def build_mask(cfg: PipelineConfig):
    ph = cfg.phantom
    if cfg.mask.kind == "radial":
        return radial_mask(ph.n_p, ph.n_f, ph.n_fr, cfg.mask)
    return cartesian_mask(ph.n_p, ph.n_f, ph.n_fr, cfg.mask)


def pick_landmarks(cfg: PipelineConfig, y_nav):
    rcfg = cfg.recovery
    n_fr = y_nav.shape[1]
    n_l = rcfg.n_landmarks or default_n_landmarks(n_fr)
    if n_l > n_fr:
        raise ConfigError(f"n_landmarks {n_l} exceeds frame count {n_fr}")
    return select_landmarks(y_nav, n_l)


def embed_landmarks(cfg: PipelineConfig, lms, nav_size):
    rcfg = cfg.recovery
    n_l = lms.lambda_mat.shape[1]
    lambda_w = rcfg.lambda_w or default_lambda_w(lms.lambda_mat)
    expr = solve_self_expression(
        lms.lambda_mat, lambda_w, iters=rcfg.w_iters, alpha=rcfg.alpha
    )
    d = rcfg.embed_dim or min(4, n_l)
    if d > min(n_l, nav_size):
        raise ConfigError(
            f"embed_dim {d} exceeds min(n_landmarks, navigator size) "
            f"= {min(n_l, nav_size)}"
        )
    return expr, compress_landmarks(expr.w, d)


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Execute the full flow; returns the report dict (also written to disk)."""
    t_start = time.perf_counter()
    with _stage("config"):
        cfg.validate()

    with _stage("phantom"):
        truth = generate_phantom(cfg.phantom)

    with _stage("mask"):
        mask = build_mask(cfg)

    with _stage("sample"):
        masked = apply_sampling(center_spectrum(dft2(truth)), mask.pattern)
        y_nav = extract_navigators(masked, mask)

    with _stage("landmarks"):
        lms = pick_landmarks(cfg, y_nav)

    with _stage("embedding"):
        expr, comp = embed_landmarks(cfg, lms, y_nav.shape[0])

    results = []
    with _stage("recover"):
        for t in range(cfg.trials):
            seed = None if cfg.trials == 1 else cfg.base_seed + t
            results.append(run_recovery(masked, mask, comp, cfg.recovery, seed))

    with _stage("metrics"):
        rep_bilinear = compute_metrics(truth, results[0].x_hat)
        rep_baseline = compute_metrics(truth, zero_filled_baseline(masked))
        trial_nrmse = [nrmse(truth, r.x_hat) for r in results]

    report = {
        "bilinear": _metrics_dict(rep_bilinear),
        "baseline": _metrics_dict(rep_baseline),
        "acceleration_achieved": float(mask.achieved_acceleration()),
        "trials": cfg.trials,
        "nrmse_mean": float(np.mean(trial_nrmse)),
        "nrmse_std": float(np.std(trial_nrmse)),
        "wall_clock_s": time.perf_counter() - t_start,
    }

    with _stage("report"):
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_blmd(out / "truth.blmd", truth)
        write_blmd(out / "mask.blmd", mask.pattern.astype(np.complex128))
        write_blmd(out / "kspace_masked.blmd", masked)
        write_blmd(out / "recon.blmd", results[0].x_hat)
        for t in range(1, cfg.trials):
            write_blmd(out / f"recon_trial{t:03d}.blmd", results[t].x_hat)
        if cfg.emit_images:
            _emit_images(out, truth, results[0].x_hat)
        if cfg.emit_csv:
            _emit_csv(out, rep_bilinear.nrmse_per_frame, results[0])
        with open(out / "report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return report


def emit_phantom(cfg: PipelineConfig) -> Path:
    """The `phantom` verb: ground truth only (plus images when enabled)."""
    with _stage("config"):
        cfg.validate()
    with _stage("phantom"):
        truth = generate_phantom(cfg.phantom)
    with _stage("report"):
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_blmd(out / "truth.blmd", truth)
        if cfg.emit_images:
            mags = np.abs(truth)
            lines = []
            for j in range(truth.shape[2]):
                name = f"truth_f{j:03d}.pgm"
                scale = _write_pgm16(out / name, mags[:, :, j])
                lines.append(f"{name} {scale!r}")
            (out / "pgm_scales.txt").write_text("\n".join(lines) + "\n")
    return Path(cfg.output_dir) / "truth.blmd"


def rescore(cfg: PipelineConfig, recon_path) -> dict:
    """The `metrics` verb: evaluate an existing reconstruction file."""
    from .blmdfile import read_blmd

    with _stage("config"):
        cfg.validate()
    with _stage("phantom"):
        truth = generate_phantom(cfg.phantom)
    with _stage("metrics"):
        recon = read_blmd(recon_path)
        if recon.shape != truth.shape:
            raise ValueError(
                f"reconstruction shape {recon.shape} does not match "
                f"phantom {truth.shape}"
            )
        return _metrics_dict(compute_metrics(truth, recon))
