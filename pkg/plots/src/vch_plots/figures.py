"""The four figure kinds, rendered from stored simulation output.

Nothing here recomputes physics: every curve, envelope and table value is
read from the data files.  Output is vector (SVG/PDF) and deterministic
for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "vch-plots"

import matplotlib.pyplot as plt
import numpy as np

from .data import DataError, check_matching_schema, ensembles_of, load, records_of

KINDS = ("decay", "besov", "highfreq", "tail")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input data files, figure kind, output path, scales."""

    inputs: tuple[str, ...]
    kind: str
    output: str
    log_y: bool = True
    log_x: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown figure kind {self.kind!r} (expected one of {KINDS})")
        if not self.inputs:
            raise DataError("at least one input file is required")


def render(spec: FigureSpec) -> str:
    """Render the figure described by spec; returns the output path."""
    payloads = [load(p) for p in spec.inputs]
    check_matching_schema(payloads)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        drawer = {
            "decay": _draw_decay,
            "besov": _draw_besov,
            "highfreq": _draw_highfreq,
            "tail": _draw_tail,
        }[spec.kind]
        drawer(ax, spec, payloads)
        if spec.log_y:
            ax.set_yscale("log")
        if spec.log_x:
            ax.set_xscale("log")
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize=8)
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        fig.savefig(spec.output, metadata=_metadata(spec.output))
    finally:
        plt.close(fig)
    return spec.output


def _metadata(path: str) -> dict | None:
    # strip timestamps so identical inputs give identical bytes
    if path.endswith(".svg"):
        return {"Date": None}
    if path.endswith(".pdf"):
        return {"CreationDate": None}
    return None


def _annotate_empty(ax, message: str) -> None:
    ax.text(0.5, 0.5, message, ha="center", va="center",
            transform=ax.transAxes, color="tab:red")


def _draw_decay(ax, spec: FigureSpec, payloads: list[dict]) -> None:
    """I(t) curves with the stored decay envelope overlaid."""
    drew = False
    for path, payload in zip(spec.inputs, payloads):
        records = records_of(payload, path)
        if not records:
            continue
        t = np.array([r["t"] for r in records])
        I = np.array([r["I"] for r in records])
        ax.plot(t, np.maximum(I, 1e-300), label=f"I(t)  [{_short(path)}]")
        config = payload.get("config", {})
        verdicts = payload.get("verdicts", {})
        eps = config.get("epsilon")
        if eps is not None:
            g_l2 = config.get("g_l2", 0.0)
            c_star = verdicts.get("c_star", 0.0)
            floor = c_star * g_l2**2 / eps**2
            envelope = I[0] * np.exp(-0.5 * eps * t) + floor
            ax.plot(t, np.maximum(envelope, 1e-300), "--",
                    label=f"envelope, C*={c_star:.3g}")
        drew = True
    if not drew:
        _annotate_empty(ax, "no records in input")
    ax.set_xlabel("t")
    ax.set_ylabel("H1 energy I(t)")


def _draw_besov(ax, spec: FigureSpec, payloads: list[dict]) -> None:
    """Weighted dyadic block tables at the first and last snapshot."""
    drew = False
    for path, payload in zip(spec.inputs, payloads):
        records = records_of(payload, path)
        if not records:
            continue
        for record, style, tag in ((records[0], "o--", "t=0"),
                                   (records[-1], "s-", "t_end")):
            table = {int(k): v for k, v in record.get("besov_blocks", {}).items()}
            if not table:
                continue
            ks = sorted(table)
            vals = [max(table[k], 1e-300) for k in ks]
            ax.plot(ks, vals, style, label=f"{tag}  [{_short(path)}]")
            drew = True
    if not drew:
        _annotate_empty(ax, "no block table in input")
    ax.set_xlabel("dyadic index k")
    ax.set_ylabel("2^{2k} ||P_{2^k} u||")


def _draw_highfreq(ax, spec: FigureSpec, payloads: list[dict]) -> None:
    """sqrt of the stored high-frequency energies against k, per ball."""
    drew = False
    for path, payload in zip(spec.inputs, payloads):
        for ens in ensembles_of(payload, path):
            decay = {int(k): v for k, v in ens.get("highfreq_decay", {}).items()}
            if not decay:
                continue
            ks = sorted(decay)
            vals = [max(math.sqrt(decay[k]), 1e-300) for k in ks]
            ax.plot(ks, vals, "o-", label=f"B={ens.get('ball_radius'):g}")
            drew = True
    if not drew:
        _annotate_empty(ax, "no high-frequency data in input")
    ax.set_xlabel("dyadic cutoff k")
    ax.set_ylabel("sqrt(I_{>2^k}) at t_end")


def _draw_tail(ax, spec: FigureSpec, payloads: list[dict]) -> None:
    """Windowed tail energies J_{>N} against the window scale N."""
    drew = False
    for path, payload in zip(spec.inputs, payloads):
        for ens in ensembles_of(payload, path):
            tails = {float(k): v for k, v in ens.get("tail_sup", {}).items()}
            if not tails:
                continue
            ns = sorted(tails)
            ax.plot(ns, [max(tails[n], 1e-300) for n in ns], "o-",
                    label=f"B={ens.get('ball_radius'):g}")
            drew = True
    if not drew:
        _annotate_empty(ax, "no tail data in input")
    ax.set_xlabel("window scale N")
    ax.set_ylabel("sup J_{>N} at t_end")


def _short(path: str) -> str:
    return path.rsplit("/", 1)[-1]
