"""Loaders for the simulation output schema (CSV and JSON).

Every plotted quantity comes from these files; nothing is recomputed.
"""

from __future__ import annotations

import json
import os

SCHEMA_VERSION = 1


class DataError(ValueError):
    """Unusable input file: bad schema, missing columns, parse failure."""


def load(path: str) -> dict:
    """Load a trajectory or ensemble payload from .json or .csv."""
    if not os.path.exists(path):
        raise DataError(f"input file does not exist: {path}")
    if path.endswith(".json"):
        payload = _load_json(path)
    elif path.endswith(".csv"):
        payload = _load_csv(path)
    else:
        raise DataError(f"unsupported input format: {path} (expected .csv or .json)")
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataError(
            f"{path}: schema_version {version!r} does not match expected {SCHEMA_VERSION}"
        )
    return payload


def check_matching_schema(payloads: list[dict]) -> None:
    versions = {p.get("schema_version") for p in payloads}
    if len(versions) > 1:
        raise DataError(f"input files carry mismatched schema versions: {sorted(versions)}")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from exc


def _load_csv(path: str) -> dict:
    """Reconstruct the JSON-shaped payload from the CSV flavour."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    config: dict = {}
    version = None
    body: list[str] = []
    for ln in lines:
        if ln.startswith("# config:"):
            config = json.loads(ln[len("# config:"):])
        elif ln.startswith("# schema_version:"):
            version = int(ln.split(":", 1)[1])
        elif ln and not ln.startswith("#"):
            body.append(ln)
    if not body:
        raise DataError(f"{path}: no header row")
    header = body[0].split(",")
    required = {"t", "I"}
    if not required <= set(header):
        raise DataError(f"{path}: missing columns {sorted(required - set(header))}")
    records = []
    for row_text in body[1:]:
        cells = row_text.split(",")
        if len(cells) != len(header):
            raise DataError(f"{path}: row has {len(cells)} cells, header has {len(header)}")
        row = dict(zip(header, (float(c) for c in cells)))
        rec = {
            "t": row["t"],
            "I": row["I"],
            "mean_u": row.get("mean_u", 0.0),
            "I_gt": {},
            "besov_blocks": {},
            "J_gt": {},
            "conservation_residual": row.get("residual", 0.0),
            "h2_norm": row.get("h2", 0.0),
        }
        for name, value in row.items():
            if name.startswith("I_gt_k"):
                rec["I_gt"][name[len("I_gt_k"):]] = value
            elif name.startswith("besov_k"):
                rec["besov_blocks"][name[len("besov_k"):]] = value
            elif name.startswith("J_N"):
                rec["J_gt"][name[len("J_N"):]] = value
        records.append(rec)
    return {
        "schema_version": version,
        "kind": "trajectory",
        "config": config,
        "records": records,
    }


def records_of(payload: dict, path: str) -> list[dict]:
    if payload.get("kind") != "trajectory":
        raise DataError(f"{path}: expected a trajectory file, got kind {payload.get('kind')!r}")
    return payload.get("records", [])


def ensembles_of(payload: dict, path: str) -> list[dict]:
    if payload.get("kind") != "ensemble_report":
        raise DataError(
            f"{path}: expected an ensemble report, got kind {payload.get('kind')!r}"
        )
    return payload.get("ensembles", [])
