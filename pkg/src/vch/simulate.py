"""Drive one trajectory from a validated config and collect diagnostics."""

from __future__ import annotations

import numpy as np

from .config import SimulationConfig, build_initial
from .diagnostics import DiagnosticsRecord, compute_record
from .integrator import TrajectoryState, advance_to
from .operators import Mode
from .spectral import SpectralField, dealias

__all__ = ["run", "run_from_state"]


def _record(config: SimulationConfig, state: TrajectoryState) -> DiagnosticsRecord:
    tails = config.tail_scales if config.mode is Mode.DAMPED else ()
    return compute_record(
        state.t, state.u, dyadic_ks=config.dyadic_ks, tail_scales=tails
    )


def run_from_state(
    config: SimulationConfig,
    u0: SpectralField,
    sample_times: tuple[float, ...] | None = None,
    include_nonlinearity: bool = True,
) -> tuple[list[TrajectoryState], list[DiagnosticsRecord]]:
    """Integrate u0 to t_end, snapshotting at the requested times.

    Deterministic: identical config and initial data give bit-identical
    diagnostics.  Trajectory failures propagate with the failing time
    attached (NonFiniteState).
    """
    p = None if config.mode is Mode.INVISCID_TEST else config.profile
    f = None if config.mode is Mode.INVISCID_TEST else config.forcing
    state = TrajectoryState(t=0.0, u=dealias(u0))

    if sample_times is None:
        if config.dt is not None:
            # fixed-dt runs snapshot every output_stride steps
            n_steps = int(round(config.t_end / config.dt))
            sample_times = tuple(
                i * config.dt for i in range(0, n_steps + 1, config.output_stride)
            )
            if sample_times[-1] < config.t_end - 1e-12:
                sample_times = sample_times + (config.t_end,)
        else:
            sample_times = tuple(np.linspace(0.0, config.t_end, config.snapshots + 1))

    snapshots = [state]
    records = [_record(config, state)]
    for t_next in sample_times:
        if t_next <= state.t + 1e-12:
            continue
        state = advance_to(
            state, t_next, p, f, config.mode,
            dt=config.dt, include_nonlinearity=include_nonlinearity,
        )
        snapshots.append(state)
        records.append(_record(config, state))
    return snapshots, records


def run(
    config: SimulationConfig, seed_offset: int = 0, include_nonlinearity: bool = True
) -> tuple[list[TrajectoryState], list[DiagnosticsRecord]]:
    """Realize the initial data recipe and integrate (see run_from_state)."""
    u0 = build_initial(config, seed_offset)
    return run_from_state(config, u0, include_nonlinearity=include_nonlinearity)
