"""Batch simulation runs, scaling fits, and calibration helpers.

An experiment sweeps models, node counts, and seeds, writes one round-log
JSON per run plus an aggregate CSV, and is deterministic for a fixed
configuration.  Runs execute concurrently across (model, n, seed) but the
aggregate is assembled in a fixed order, and files are written atomically
(temp file + rename) so partially written outputs never appear under the
final names.
"""

from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import snr_upper_schedule
from .broadcast import (
    BroadcastConfig,
    RoundLog,
    run_expanding_disk,
    run_miso_broadcast,
    run_udg_flood,
)
from .nodefield import NodeField, sample_field
from .signal_model import GridSpec, SenderSet, SignalParams, field_map, mimo_triggered

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "ScalingFit",
    "DEFAULT_C1",
    "run_experiment",
    "fit_scaling",
    "emit_fieldmaps",
    "calibrate_c1",
]

CSV_HEADER = "model,n,rho,lambda,seed,rounds,fully_informed,propagation_time"

#: Analysis constant of the doubly-exponential schedule (far more
#: conservative than what simulations support, see :func:`calibrate_c1`).
DEFAULT_C1 = 9.0 / (8.0 * 4480.0 * math.pi * math.sqrt(2.0))


@dataclass(frozen=True)
class ExperimentConfig:
    models: tuple[str, ...]  # subset of {"udg", "snr", "mimo"}
    node_counts: tuple[int, ...]
    density: float = 64.0
    density_rule: str = "fixed"  # "fixed" | "log" (rho = density * ln n)
    seeds: tuple[int, ...] = (0, 1, 2)
    params: SignalParams = field(default_factory=SignalParams)
    c1: float = DEFAULT_C1
    c2: float = 1.0
    output_dir: str = "runs"
    workers: int = 4

    def __post_init__(self):
        unknown = set(self.models) - {"udg", "snr", "mimo"}
        if unknown or not self.models:
            raise ValueError(f"models must be a nonempty subset of udg/snr/mimo, got {self.models}")
        if self.density_rule not in ("fixed", "log"):
            raise ValueError(f"unknown density rule {self.density_rule!r}")
        if self.density <= 0.0:
            raise ValueError("density must be positive")
        if not self.node_counts:
            raise ValueError("need at least one node count")
        if len(set(self.seeds)) != len(self.seeds) or not self.seeds:
            raise ValueError("seeds must be nonempty and distinct")

    def rho(self, n: int) -> float:
        if self.density_rule == "log":
            return self.density * math.log(n)
        return self.density

    def radius_for(self, n: int) -> float:
        return math.sqrt(n / (math.pi * self.rho(n)))


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[dict]
    log_paths: list[str]
    csv_path: str
    failures: list[tuple[str, int, int, str]] = field(default_factory=list)


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float
    points: tuple[tuple[float, float], ...]  # transformed coordinates


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _run_single(cfg: ExperimentConfig, model: str, n: int, seed: int) -> RoundLog:
    rho = cfg.rho(n)
    radius = cfg.radius_for(n)
    fld = sample_field(n, radius, seed)
    if model == "udg":
        return run_udg_flood(fld)
    if model == "snr":
        schedule = snr_upper_schedule(rho, radius).radii
        config = BroadcastConfig(
            model="SNR",
            schedule="expanding_disk",
            radius_schedule=tuple(schedule),
            params=cfg.params,
        )
        return run_expanding_disk(fld, config)
    return run_miso_broadcast(fld, cfg.params, c1=cfg.c1, c2=cfg.c2)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    os.makedirs(cfg.output_dir, exist_ok=True)
    jobs = [
        (model, n, seed)
        for model in cfg.models
        for n in cfg.node_counts
        for seed in cfg.seeds
    ]

    def work(job):
        model, n, seed = job
        try:
            return job, _run_single(cfg, model, n, seed), None
        except Exception as exc:  # noqa: BLE001 - recorded, run continues
            return job, None, f"{type(exc).__name__}: {exc}"

    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        outcomes = list(pool.map(work, jobs))

    result = ExperimentResult(cfg, [], [], os.path.join(cfg.output_dir, "summary.csv"))
    lines = [CSV_HEADER]
    for (model, n, seed), log, error in outcomes:
        if error is not None:
            result.failures.append((model, n, seed, error))
            continue
        row = {
            "model": model,
            "n": n,
            "rho": cfg.rho(n),
            "lambda": cfg.params.lam,
            "seed": seed,
            "rounds": log.total_rounds,
            "fully_informed": log.fully_informed,
            "propagation_time": log.propagation_time,
        }
        result.rows.append(row)
        lines.append(
            f"{model},{n},{row['rho']!r},{cfg.params.lam!r},{seed},"
            f"{log.total_rounds},{int(log.fully_informed)},{log.propagation_time!r}"
        )
        path = os.path.join(cfg.output_dir, f"{model}_n{n}_seed{seed}.json")
        try:
            _atomic_write(path, log.to_json())
        except OSError as exc:
            raise OSError(f"writing round log {path}: {exc}") from exc
        result.log_paths.append(path)
    try:
        _atomic_write(result.csv_path, "\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"writing summary {result.csv_path}: {exc}") from exc
    return result


def fit_scaling(points, transform: str = "loglog") -> ScalingFit:
    """Least-squares line after a coordinate transform.

    ``loglog`` takes logs of both axes (power laws become lines),
    ``semilog`` logs only x (so y = a log x has slope a), and ``loglogx``
    maps x to log(log(x)), which linearizes doubly logarithmic growth.
    """
    if len(points) < 4:
        raise ValueError("need at least four points to fit")
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if transform == "loglog":
        xs, ys = np.log(xs), np.log(ys)
    elif transform == "semilog":
        xs = np.log(xs)
    elif transform == "loglogx":
        xs = np.log(np.log(xs))
    else:
        raise ValueError(f"unknown transform {transform!r}")
    if np.ptp(xs) == 0.0:
        raise ValueError("degenerate fit: all x values coincide after transform")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    total = ys - np.mean(ys)
    ss_tot = float(total @ total)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - float(resid @ resid) / ss_tot
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        points=tuple(zip(xs.tolist(), ys.tolist())),
    )


def emit_fieldmaps(
    field_: NodeField,
    log: RoundLog,
    params: SignalParams,
    grid: GridSpec,
    model: str,
    output_dir: str,
) -> list[str]:
    """Write one PGM energy map per round, with that round's informed set
    transmitting at zero phase."""
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    informed: list[int] = [0]
    for rec in log.rounds:
        informed.extend(rec.newly_informed)
        senders = SenderSet.build(field_.positions[np.unique(informed)])
        fmap = field_map(senders, grid, params, model=model)
        path = os.path.join(output_dir, f"round_{rec.round_index}_{model.lower()}.pgm")
        _atomic_write(path, fmap.to_pgm(threshold=params.beta_N0))
        paths.append(path)
    return paths


def calibrate_c1(
    density: float,
    params: SignalParams,
    c2: float = 1.0,
    seeds: tuple[int, ...] = tuple(range(50)),
    success_rate: float = 0.99,
    n: int = 4096,
) -> float:
    """Largest power-of-two schedule constant with reliable round success.

    For each candidate c1, one growth step of the doubly-exponential
    schedule is simulated on fresh node fields: all nodes inside radius
    r_1 = c2/lam transmit with phases aligned toward the origin, and the
    step succeeds when 100 far-field receivers on the circle of radius
    d = c1 rho sqrt(lam) r_1^1.5 (floored at the far-field limit 15 r_1)
    are all triggered.  Returns the largest candidate whose success
    fraction over the seeds reaches ``success_rate``.
    """
    radius = math.sqrt(n / (math.pi * density))
    r1 = c2 / params.lam
    if r1 > radius:
        raise ValueError(f"sender radius r1={r1} exceeds field radius {radius}")
    best = None
    for exponent in range(-14, 6):
        cand = 2.0**exponent
        d = cand * density * math.sqrt(params.lam) * r1**1.5
        if d < 15.0 * r1:
            continue
        successes = 0
        for seed in seeds:
            fld = sample_field(n, radius, seed)
            radii = fld.radii
            sender_idx = np.flatnonzero(radii <= r1)
            if sender_idx.size == 0:
                continue
            phases = -2.0 * np.pi * radii[sender_idx] / params.lam
            senders = SenderSet.build(fld.positions[sender_idx], phases=phases)
            rng = np.random.Generator(np.random.Philox(key=seed, counter=1))
            ang = rng.uniform(0.0, 2.0 * np.pi, 100)
            receivers = d * np.column_stack([np.cos(ang), np.sin(ang)])
            if bool(np.all(mimo_triggered(senders, receivers, params))):
                successes += 1
        if successes / len(seeds) >= success_rate:
            best = cand
    if best is None:
        raise RuntimeError("no candidate constant met the target success rate")
    return best
