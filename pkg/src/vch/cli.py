"""Command-line interface.

Verbs:
    vch simulate --config FILE [--out-dir DIR] [--seed-offset K]
    vch ensemble --config FILE [--out-dir DIR] [--workers W] [--seed-offset K]
    vch check    [--config FILE]
    vch report   FILE [FILE ...]

Exit codes: 0 success, 2 config rejected, 3 numeric failure (non-finite
state or unsatisfiable step-size budget), 4 a monitored inequality verdict
failed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import io as vio
from .config import ConfigError, SimulationConfig, parse_config_file, random_h1_field
from .diagnostics import conservation_residual, dissipation_monitor
from .ensemble import (
    merged_plateau_ratio,
    run_ensemble,
    smoothing_report,
    spec_from_config,
)
from .integrator import NonFiniteState
from .operators import Mode
from .simulate import run
from .spectral import analyze, l2_norm, lp_project, sup_norm, FrequencyBand

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERDICT = 4


def _load_config(path: str) -> SimulationConfig:
    try:
        return parse_config_file(path)
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {path}"])


def _out_base(config: SimulationConfig, out_dir: str | None, stem: str) -> str:
    d = out_dir if out_dir is not None else config.out_dir
    return os.path.join(d, stem)


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    try:
        _, records = run(config, seed_offset=args.seed_offset)
    except NonFiniteState as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    verdicts = None
    code = EXIT_OK
    if config.mode is Mode.VISCOUS and config.forcing is not None:
        rep = dissipation_monitor(
            records, config.epsilon, config.forcing.g_l2, config.mode
        )
        verdicts = vio.dissipation_verdict_dict(rep)
        ok = rep.envelope_holds and (rep.rate_ok is not False)
        if not ok:
            code = EXIT_VERDICT
        print(
            f"dissipation: envelope_holds={rep.envelope_holds} "
            f"c_star={rep.c_star:.6g} decay_rate="
            f"{'n/a' if rep.decay_rate is None else f'{rep.decay_rate:.6g}'} "
            f"plateau={rep.plateau:.6g}"
        )

    base = _out_base(config, args.out_dir, "trajectory")
    cfg = config.as_dict()
    if "csv" in config.formats:
        vio.emit_records_csv(records, cfg, base + ".csv")
        print(f"wrote {base}.csv")
    if "json" in config.formats:
        vio.emit_records_json(records, cfg, base + ".json", verdicts=verdicts)
        print(f"wrote {base}.json")
    return code


def cmd_ensemble(args) -> int:
    config = _load_config(args.config)
    if config.ensemble is None:
        raise ConfigError(["ensemble verb needs an [ensemble] section in the config"])
    reports = []
    try:
        for radius in config.ensemble.ball_radii:
            spec = spec_from_config(config, radius)
            if args.seed_offset:
                spec = spec.__class__(
                    ball_radius=spec.ball_radius,
                    count=spec.count,
                    seeds=tuple(s + args.seed_offset for s in spec.seeds),
                    t_end=spec.t_end,
                    sample_times=spec.sample_times,
                    mode=spec.mode,
                )
            reports.append(run_ensemble(spec, config, workers=args.workers))
    except NonFiniteState as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RuntimeError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    code = EXIT_OK
    ratio = merged_plateau_ratio(reports)
    g_l2 = config.forcing.g_l2 if config.forcing is not None else 0.0
    verdict_lines = []
    for rep in reports:
        verdict_lines.append(
            f"ball B={rep.spec.ball_radius:g}: sup I = {rep.sup_I:.6g}, "
            f"plateau ratio = {rep.plateau_ratio:.4g}"
        )
        sv = smoothing_report(rep, g_l2)
        if not sv.trivial and not sv.smoothing_observed:
            verdict_lines.append(
                f"  smoothing verdict FAILED for B={rep.spec.ball_radius:g}: "
                "Besov block table grows past its peak"
            )
            code = EXIT_VERDICT
    verdict_lines.append(f"cross-ball plateau ratio = {ratio:.4g}")
    if not math.isfinite(ratio):
        code = EXIT_VERDICT
    for line in verdict_lines:
        print(line)

    base = _out_base(config, args.out_dir, "ensemble")
    vio.emit_ensemble_json(
        reports,
        config.as_dict(),
        base + ".json",
        extra={"merged_plateau_ratio": ratio},
    )
    print(f"wrote {base}.json")
    return code


def cmd_check(args) -> int:
    """On-demand numerical oracles: transform fidelity, Bernstein, residual."""
    rng = np.random.default_rng(0)
    failures = []

    worst = 0.0
    for _ in range(50):
        v = rng.standard_normal(256)
        f = analyze(v, 1.0)
        grid_l2 = math.sqrt(np.mean(v**2))
        worst = max(worst, abs(l2_norm(f) - grid_l2))
    print(f"transform fidelity: max |spectral L2 - grid L2| = {worst:.3e} "
          f"({'ok' if worst < 1e-10 else 'FAIL'})")
    if worst >= 1e-10:
        failures.append("transform fidelity")

    worst_ratio = 0.0
    for n in (4, 16, 64):
        for _ in range(20):
            f = analyze(rng.standard_normal(256), 1.0)
            low = lp_project(f, FrequencyBand.low_pass(n))
            denom = math.sqrt(n) * l2_norm(f)
            if denom > 0:
                worst_ratio = max(worst_ratio, sup_norm(low) / denom)
    print(f"Bernstein low-pass bound: worst ratio = {worst_ratio:.4f} "
          f"({'ok' if worst_ratio <= 1.0 else 'FAIL'})")
    if worst_ratio > 1.0:
        failures.append("Bernstein bound")

    u = random_h1_field(1.0, 1, 256)
    res = abs(conservation_residual(u))
    print(f"conservation residual on random field: {res:.3e} "
          f"({'ok' if res < 1e-10 else 'FAIL'})")
    if res >= 1e-10:
        failures.append("conservation residual")

    if args.config:
        _load_config(args.config)
        print(f"config ok: {args.config}")

    if failures:
        print("check FAILED: " + ", ".join(failures), file=sys.stderr)
        return EXIT_VERDICT
    return EXIT_OK


def cmd_report(args) -> int:
    """Re-derive verdicts from stored trajectory/ensemble files."""
    code = EXIT_OK
    for path in args.files:
        payload = vio.load_json(path)
        kind = payload.get("kind", "trajectory")
        cfg = payload.get("config", {})
        print(f"{path}: {kind}, schema v{payload.get('schema_version')}")
        if kind == "trajectory":
            records, _, _ = vio.load_records_json(path)
            print(f"  {len(records)} records, t in "
                  f"[{records[0].t:g}, {records[-1].t:g}], "
                  f"final I = {records[-1].I:.6g}")
            if cfg.get("mode") == "viscous" and "g_l2" in cfg:
                rep = dissipation_monitor(records, cfg["epsilon"], cfg["g_l2"])
                ok = rep.envelope_holds and (rep.rate_ok is not False)
                print(f"  dissipation: c_star={rep.c_star:.6g} "
                      f"plateau={rep.plateau:.6g} "
                      f"{'ok' if ok else 'VERDICT FAILED'}")
                if not ok:
                    code = EXIT_VERDICT
        elif kind == "ensemble_report":
            for ens in payload.get("ensembles", []):
                print(f"  ball B={ens['ball_radius']:g}: sup I = {ens['sup_I']:.6g}, "
                      f"plateau ratio = {ens['plateau_ratio']:.4g}")
            ratio = payload.get("merged_plateau_ratio")
            if ratio is not None:
                print(f"  cross-ball plateau ratio = {ratio:.4g}")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vch",
        description="Numerical laboratory for a viscous shallow-water-type PDE",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_sim = sub.add_parser("simulate", help="run one trajectory")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out-dir", default=None)
    p_sim.add_argument("--seed-offset", type=int, default=0)
    p_sim.set_defaults(func=cmd_simulate)

    p_ens = sub.add_parser("ensemble", help="run a seeded ensemble suite")
    p_ens.add_argument("--config", required=True)
    p_ens.add_argument("--out-dir", default=None)
    p_ens.add_argument("--workers", type=int, default=1)
    p_ens.add_argument("--seed-offset", type=int, default=0)
    p_ens.set_defaults(func=cmd_ensemble)

    p_chk = sub.add_parser("check", help="run quick numerical self-checks")
    p_chk.add_argument("--config", default=None)
    p_chk.set_defaults(func=cmd_check)

    p_rep = sub.add_parser("report", help="summarize stored output files")
    p_rep.add_argument("files", nargs="+")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except NonFiniteState as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
