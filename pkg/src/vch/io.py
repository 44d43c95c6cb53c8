"""CSV / JSON emission and loading for diagnostics and reports.

Every emitted file embeds the full config so a figure is reproducible from
its data file alone.  Floats are serialized with 17 significant digits
(round-trippable doubles); identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict

from .diagnostics import DiagnosticsRecord, DissipationReport
from .ensemble import EnsembleReport

__all__ = [
    "emit_records_csv",
    "emit_records_json",
    "emit_ensemble_json",
    "load_records_json",
    "load_json",
    "format_float",
]

SCHEMA_VERSION = 1


def format_float(v: float) -> str:
    return f"{v:.17g}"


def _columns(records: list[DiagnosticsRecord]) -> tuple[list[int], list[int], list[float]]:
    ks = sorted({k for r in records for k in r.I_gt})
    bs = sorted({k for r in records for k in r.besov_blocks})
    ns = sorted({n for r in records for n in r.J_gt})
    return ks, bs, ns


def emit_records_csv(records: list[DiagnosticsRecord], config: dict, path: str) -> None:
    ks, bs, ns = _columns(records)
    header = (
        ["t", "I", "mean_u"]
        + [f"I_gt_k{k}" for k in ks]
        + [f"besov_k{k}" for k in bs]
        + [f"J_N{format_float(n)}" for n in ns]
        + ["residual", "h2"]
    )
    lines = [f"# config: {json.dumps(config, sort_keys=True)}"]
    lines.append(f"# schema_version: {SCHEMA_VERSION}")
    lines.append(",".join(header))
    for r in records:
        row = [format_float(r.t), format_float(r.I), format_float(r.mean_u)]
        row += [format_float(r.I_gt.get(k, 0.0)) for k in ks]
        row += [format_float(r.besov_blocks.get(k, 0.0)) for k in bs]
        row += [format_float(r.J_gt.get(n, 0.0)) for n in ns]
        row += [format_float(r.conservation_residual), format_float(r.h2_norm)]
        lines.append(",".join(row))
    _write(path, "\n".join(lines) + "\n")


def _record_dict(r: DiagnosticsRecord) -> dict:
    return {
        "t": r.t,
        "I": r.I,
        "mean_u": r.mean_u,
        "I_gt": {str(k): v for k, v in sorted(r.I_gt.items())},
        "besov_blocks": {str(k): v for k, v in sorted(r.besov_blocks.items())},
        "J_gt": {format_float(n): v for n, v in sorted(r.J_gt.items())},
        "conservation_residual": r.conservation_residual,
        "h2_norm": r.h2_norm,
    }


def _record_from_dict(d: dict) -> DiagnosticsRecord:
    return DiagnosticsRecord(
        t=d["t"],
        I=d["I"],
        mean_u=d["mean_u"],
        I_gt={int(k): v for k, v in d.get("I_gt", {}).items()},
        besov_blocks={int(k): v for k, v in d.get("besov_blocks", {}).items()},
        J_gt={float(k): v for k, v in d.get("J_gt", {}).items()},
        conservation_residual=d.get("conservation_residual", 0.0),
        h2_norm=d.get("h2_norm", 0.0),
    )


def emit_records_json(
    records: list[DiagnosticsRecord],
    config: dict,
    path: str,
    verdicts: dict | None = None,
) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "trajectory",
        "config": config,
        "records": [_record_dict(r) for r in records],
    }
    if verdicts is not None:
        payload["verdicts"] = verdicts
    _write(path, json.dumps(payload, sort_keys=True, indent=1) + "\n")


def emit_ensemble_json(
    reports: list[EnsembleReport], config: dict, path: str, extra: dict | None = None
) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "ensemble_report",
        "config": config,
        "ensembles": [
            {
                "ball_radius": rep.spec.ball_radius,
                "t_end": rep.spec.t_end,
                "seeds": list(rep.spec.seeds),
                "sup_I": rep.sup_I,
                "highfreq_decay": {str(k): v for k, v in sorted(rep.highfreq_decay.items())},
                "besov_sup": rep.besov_sup,
                "besov_table": {str(k): v for k, v in sorted(rep.besov_table.items())},
                "tail_sup": {format_float(n): v for n, v in sorted(rep.tail_sup.items())},
                "plateau_ratio": rep.plateau_ratio,
                "plateaus": {str(s): v for s, v in sorted(rep.plateaus.items())},
                "per_trajectory": {
                    str(seed): [_record_dict(r) for r in records]
                    for seed, records in rep.per_trajectory.items()
                },
            }
            for rep in reports
        ],
    }
    if extra:
        payload.update(extra)
    _write(path, json.dumps(payload, sort_keys=True, indent=1) + "\n")


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_records_json(path: str) -> tuple[list[DiagnosticsRecord], dict, dict]:
    """Load a trajectory file; returns (records, config, verdicts)."""
    payload = load_json(path)
    records = [_record_from_dict(d) for d in payload["records"]]
    return records, payload.get("config", {}), payload.get("verdicts", {})


def dissipation_verdict_dict(report: DissipationReport) -> dict:
    return asdict(report)


def _write(path: str, text: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
