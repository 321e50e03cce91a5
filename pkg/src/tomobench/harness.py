"""Scenario orchestration: simulate many runs, reconstruct with the requested
estimators, and emit per-run records, summary statistics, and histograms."""

import csv
import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .estimators import lin_estimate, mle_estimate
from .linalg import min_eigenvalue
from .metrics import ScenarioStats, aggregate, fidelity_pure, histogram
from .simulate import RunSeed, dump_counts_csv, simulate_counts
from .states import StateSpec, build_product_pauli_pom, make_state, target_ket

PHYSICAL_MIN_EIG = -1e-10


@dataclass(frozen=True)
class ScenarioConfig:
    """One benchmark scenario: a pure target, a true state, and the run loop."""

    target: StateSpec
    true_state: StateSpec
    runs: int = 500
    copies_per_setting: int = 100
    master_seed: int = 0
    estimators: Tuple[str, ...] = ("lin", "mle")
    mle_tol: float = 1e-10
    mle_max_iter: int = 20000
    n_qubits: int = 4
    bin_width: float = 0.002
    workers: int = 1
    dump_counts: bool = False

    def __post_init__(self):
        if self.runs < 2:
            raise ValueError("runs must be >= 2")
        for est in self.estimators:
            if est not in ("lin", "mle"):
                raise ValueError(f"unknown estimator {est!r}")


@dataclass
class RunRecord:
    run_index: int
    estimator: str
    fidelity: float
    min_eig: float
    iterations: Optional[int] = None
    converged: Optional[bool] = None
    log_likelihood: Optional[float] = None


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    f0: float
    records: list
    stats: dict  # estimator name -> ScenarioStats
    unconverged: dict = field(default_factory=dict)


def _estimate_run(pom, rho_true, psi, cfg, run_index, dump_dir=None):
    data = simulate_counts(
        rho_true, pom, cfg.copies_per_setting, RunSeed(cfg.master_seed, run_index)
    )
    if dump_dir is not None:
        dump_counts_csv(data, os.path.join(dump_dir, f"counts_run{run_index:04d}.csv"))
    records = []
    for name in cfg.estimators:
        if name == "lin":
            est = lin_estimate(data)
            records.append(
                RunRecord(
                    run_index=run_index,
                    estimator="lin",
                    fidelity=fidelity_pure(psi, est.matrix),
                    min_eig=est.min_eig,
                )
            )
        else:
            est = mle_estimate(data, tol=cfg.mle_tol, max_iter=cfg.mle_max_iter)
            records.append(
                RunRecord(
                    run_index=run_index,
                    estimator="mle",
                    fidelity=fidelity_pure(psi, est.matrix),
                    min_eig=min_eigenvalue(est.matrix),
                    iterations=est.iterations,
                    converged=est.converged,
                    log_likelihood=est.log_likelihood,
                )
            )
    return records


_WORKER = {}


def _init_worker(cfg, dump_dir):
    _WORKER["cfg"] = cfg
    _WORKER["dump_dir"] = dump_dir
    _WORKER["pom"] = build_product_pauli_pom(cfg.n_qubits)
    _WORKER["rho"] = make_state(cfg.true_state)
    _WORKER["psi"] = target_ket(cfg.target)


def _run_in_worker(run_index):
    return _estimate_run(
        _WORKER["pom"],
        _WORKER["rho"],
        _WORKER["psi"],
        _WORKER["cfg"],
        run_index,
        _WORKER["dump_dir"],
    )


def run_scenario(cfg, dump_dir=None):
    """Execute a scenario; deterministic for a fixed master seed regardless of
    the worker count (runs are independent and sorted by index)."""
    pom = build_product_pauli_pom(cfg.n_qubits)
    psi = target_ket(cfg.target)
    rho_true = make_state(cfg.true_state)
    f0 = fidelity_pure(psi, rho_true)

    if dump_dir is not None:
        os.makedirs(dump_dir, exist_ok=True)

    if cfg.workers > 1:
        with ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_init_worker, initargs=(cfg, dump_dir)
        ) as pool:
            per_run = list(pool.map(_run_in_worker, range(cfg.runs), chunksize=4))
    else:
        per_run = [
            _estimate_run(pom, rho_true, psi, cfg, i, dump_dir) for i in range(cfg.runs)
        ]

    records = [rec for recs in sorted(per_run, key=lambda r: r[0].run_index) for rec in recs]

    stats = {}
    unconverged = {}
    for name in cfg.estimators:
        recs = [r for r in records if r.estimator == name]
        fids = [r.fidelity for r in recs]
        nonphys = sum(1 for r in recs if r.min_eig < PHYSICAL_MIN_EIG)
        stats[name] = aggregate(fids, f0, nonphysical_count=nonphys)
        if name == "mle":
            unconverged[name] = sum(1 for r in recs if not r.converged)
    return ScenarioResult(
        config=cfg, f0=f0, records=records, stats=stats, unconverged=unconverged
    )


def _fmt(x):
    return format(float(x), ".17g")


def write_runs_csv(result, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["run", "estimator", "fidelity", "min_eig", "iterations", "converged", "loglik"]
        )
        for r in result.records:
            writer.writerow(
                [
                    r.run_index,
                    r.estimator,
                    _fmt(r.fidelity),
                    _fmt(r.min_eig),
                    "" if r.iterations is None else r.iterations,
                    "" if r.converged is None else int(r.converged),
                    "" if r.log_likelihood is None else _fmt(r.log_likelihood),
                ]
            )


def write_summary_json(result, path):
    payload = {
        "f0": result.f0,
        "config": dataclasses.asdict(result.config),
        "estimators": {},
    }
    for name, st in result.stats.items():
        entry = dataclasses.asdict(st)
        if name in result.unconverged:
            entry["unconverged_runs"] = result.unconverged[name]
        payload["estimators"][name] = entry
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_histogram_csv(result, path):
    """Combined LIN/MLE histogram over bins aligned to the configured width."""
    width = result.config.bin_width
    per_est = {}
    for name in ("lin", "mle"):
        recs = [r for r in result.records if r.estimator == name]
        if recs:
            per_est[name] = dict(
                (round(left / width), c)
                for left, c in histogram([r.fidelity for r in recs], width)
            )
    if per_est:
        indices = sorted(set().union(*(d.keys() for d in per_est.values())))
    else:
        indices = []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "count_lin", "count_mle"])
        for i in indices:
            writer.writerow(
                [
                    _fmt(i * width),
                    per_est.get("lin", {}).get(i, 0),
                    per_est.get("mle", {}).get(i, 0),
                ]
            )


def emit_outputs(result, out_dir):
    """Write runs.csv, summary.json, and histogram.csv into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    write_runs_csv(result, os.path.join(out_dir, "runs.csv"))
    write_summary_json(result, os.path.join(out_dir, "summary.json"))
    write_histogram_csv(result, os.path.join(out_dir, "histogram.csv"))
