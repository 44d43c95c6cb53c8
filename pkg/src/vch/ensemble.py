"""Ensemble experiments over balls of initial data.

The attractor statements are quantified over every sequence of initial data
in an H1 ball and over late times; at desk scale that becomes: many seeded
trajectories, a long horizon, and cross-trajectory suprema.  A limsup over
an infinite sequence is realized as the value at the largest horizon with a
stability check across the last two horizons.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .config import SimulationConfig, localized_field, random_h1_field
from .diagnostics import DiagnosticsRecord
from .operators import Mode
from .simulate import run_from_state

__all__ = [
    "EnsembleSpec",
    "EnsembleReport",
    "SmoothingVerdict",
    "VanishingCurve",
    "run_ensemble",
    "report_at_horizon",
    "merged_plateau_ratio",
    "smoothing_report",
    "highfreq_vanishing_curve",
    "spec_from_config",
]


@dataclass(frozen=True)
class EnsembleSpec:
    ball_radius: float
    count: int
    seeds: tuple[int, ...]
    t_end: float
    sample_times: tuple[float, ...]
    mode: Mode

    def __post_init__(self):
        if self.count != len(self.seeds):
            raise ValueError(
                f"count = {self.count} does not match {len(self.seeds)} seeds"
            )
        bad = [s for s in self.sample_times if not 0 <= s <= self.t_end]
        if bad:
            raise ValueError(f"sample times outside [0, t_end]: {bad}")


@dataclass(frozen=True)
class EnsembleReport:
    spec: EnsembleSpec
    per_trajectory: dict[int, list[DiagnosticsRecord]]
    sup_I: float
    highfreq_decay: dict[int, float]
    besov_sup: float
    besov_table: dict[int, float]
    tail_sup: dict[float, float]
    plateau_ratio: float
    plateaus: dict[int, float]


def spec_from_config(config: SimulationConfig, ball_radius: float) -> EnsembleSpec:
    e = config.ensemble
    if e is None:
        raise ValueError("config has no [ensemble] section")
    return EnsembleSpec(
        ball_radius=ball_radius,
        count=e.count,
        seeds=e.seeds,
        t_end=e.t_end,
        sample_times=e.sample_times,
        mode=config.mode,
    )


def _initial_for(spec: EnsembleSpec, config: SimulationConfig, seed: int):
    if spec.mode is Mode.DAMPED:
        return localized_field(
            spec.ball_radius, seed, config.resolution, config.box_length
        )
    return random_h1_field(spec.ball_radius, seed, config.resolution, config.box_length)


def _run_one(args) -> tuple[int, list[DiagnosticsRecord]]:
    spec, config, seed = args
    u0 = _initial_for(spec, config, seed)
    run_cfg = dc_replace(config, t_end=spec.t_end)
    _, records = run_from_state(run_cfg, u0, sample_times=spec.sample_times)
    return seed, records


def run_ensemble(
    spec: EnsembleSpec, config: SimulationConfig, workers: int = 1
) -> EnsembleReport:
    """Run every seeded trajectory and reduce to cross-trajectory suprema.

    Trajectories are independent; the reduction is order-independent, so the
    report is identical for any worker count.  A failing trajectory aborts
    the ensemble with its seed attached.
    """
    jobs = [(spec, config, seed) for seed in spec.seeds]
    results: dict[int, list[DiagnosticsRecord]] = {}
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for seed, records in pool.map(_run_one, jobs):
                results[seed] = records
    else:
        for job in jobs:
            try:
                seed, records = _run_one(job)
            except Exception as exc:
                raise RuntimeError(f"trajectory for seed {job[2]} failed: {exc}") from exc
            results[seed] = records
    results = dict(sorted(results.items()))
    return _reduce(spec, results)


def _reduce(
    spec: EnsembleSpec, results: dict[int, list[DiagnosticsRecord]]
) -> EnsembleReport:
    finals = {seed: records[-1] for seed, records in results.items()}
    sup_I = max(r.I for records in results.values() for r in records)
    ks = sorted(set().union(*(r.I_gt.keys() for r in finals.values()))) if finals else []
    highfreq_decay = {k: max(r.I_gt[k] for r in finals.values()) for k in ks}
    blocks = sorted(set().union(*(r.besov_blocks.keys() for r in finals.values())))
    besov_table = {
        k: max(r.besov_blocks.get(k, 0.0) for r in finals.values()) for k in blocks
    }
    besov_sup = max(besov_table.values()) if besov_table else 0.0
    tails = sorted(set().union(*(r.J_gt.keys() for r in finals.values())))
    tail_sup = {n: max(r.J_gt[n] for r in finals.values()) for n in tails}

    t_last = max(r.t for records in results.values() for r in records)
    plateaus = {}
    for seed, records in results.items():
        late = [r.I for r in records if r.t >= 0.75 * t_last]
        plateaus[seed] = float(np.mean(late)) if late else records[-1].I
    pos = [p for p in plateaus.values() if p > 0]
    plateau_ratio = (max(pos) / min(pos)) if len(pos) == len(plateaus) and pos else math.inf
    if not plateaus:
        plateau_ratio = math.nan

    return EnsembleReport(
        spec=spec,
        per_trajectory=results,
        sup_I=sup_I,
        highfreq_decay=highfreq_decay,
        besov_sup=besov_sup,
        besov_table=besov_table,
        tail_sup=tail_sup,
        plateau_ratio=plateau_ratio,
        plateaus=plateaus,
    )


def report_at_horizon(report: EnsembleReport, t_horizon: float) -> EnsembleReport:
    """Re-reduce an ensemble as if it had stopped at an earlier sample time.

    Lets one long run stand in for a sequence of horizons when checking that
    the limsup surrogate has stopped moving.
    """
    truncated = {
        seed: [r for r in records if r.t <= t_horizon + 1e-12]
        for seed, records in report.per_trajectory.items()
    }
    if any(not records for records in truncated.values()):
        raise ValueError(f"no samples at or before t = {t_horizon}")
    spec = dc_replace(
        report.spec,
        t_end=t_horizon,
        sample_times=tuple(s for s in report.spec.sample_times if s <= t_horizon + 1e-12),
    )
    return _reduce(spec, truncated)


def merged_plateau_ratio(reports: list[EnsembleReport]) -> float:
    """Largest/smallest long-run plateau across several ensembles."""
    values = [p for r in reports for p in r.plateaus.values()]
    if not values or min(values) <= 0:
        return math.inf
    return max(values) / min(values)


@dataclass(frozen=True)
class SmoothingVerdict:
    trivial: bool
    ratio: float
    table: dict[int, float]
    smoothing_observed: bool


def smoothing_report(report: EnsembleReport, g_l2: float) -> SmoothingVerdict:
    """Besov-block verdict at the final time.

    ratio = (sup over trajectories and k of 2^{2k} ||P_{2^k} u(t_end)||) / ||g||.
    smoothing_observed means the per-k table is flat-or-decreasing past its
    peak over the resolved range (blocks above 1e-9 of the table max).
    """
    table = report.besov_table
    if g_l2 <= 0:
        return SmoothingVerdict(True, 0.0, table, True)
    top = max(table.values()) if table else 0.0
    resolved = [k for k in sorted(table) if table[k] > 1e-9 * top]
    observed = True
    if resolved:
        peak = max(resolved, key=lambda k: table[k])
        for k0, k1 in zip(resolved, resolved[1:]):
            if k0 >= peak and table[k1] > 1.2 * table[k0]:
                observed = False
    return SmoothingVerdict(False, report.besov_sup / g_l2, table, observed)


@dataclass(frozen=True)
class VanishingCurve:
    witness: dict[int, float]
    ratios: dict[int, float]
    stable: bool


def highfreq_vanishing_curve(
    reports: list[EnsembleReport], stability_tol: float = 0.05
) -> VanishingCurve:
    """High-frequency witness sqrt(I_{>k}) at the latest horizon.

    Needs reports at two or more increasing horizons; the limsup surrogate is
    the latest value, flagged stable when it moved less than stability_tol
    (relative) between the last two horizons.
    """
    if len(reports) < 2:
        raise ValueError("need reports at two or more horizons")
    reports = sorted(reports, key=lambda r: r.spec.t_end)
    last, prev = reports[-1], reports[-2]
    witness = {k: math.sqrt(v) for k, v in last.highfreq_decay.items()}
    ratios = {}
    ks = sorted(witness)
    for k0, k1 in zip(ks, ks[1:]):
        if witness[k0] > 0:
            ratios[k1] = witness[k1] / witness[k0]
    stable = True
    for k, w in witness.items():
        w_prev = math.sqrt(prev.highfreq_decay.get(k, 0.0))
        scale = max(w, w_prev)
        if scale > 0 and abs(w - w_prev) > stability_tol * scale + 1e-12:
            stable = False
    return VanishingCurve(witness=witness, ratios=ratios, stable=stable)
