"""Time stepping for u_t = -A u - F(u) - mu u + g.

The scheme is second-order exponential time differencing (ETDRK2): the
stiff constant-coefficient part (mean viscosity abar * u_xx plus damping
mu) is diagonal in Fourier space and integrated exactly; the remainder
N = d/dx((a - abar) u_x) - F(u) + g enters through the phi functions

    u1    = e^{L dt} u + dt phi1(L dt) N(u, t)
    u_new = u1 + dt phi2(L dt) (N(u1, t + dt) - N(u, t))

so a state with N constant in time (in particular the forced linear
steady state -L u = g) is reproduced exactly at any dt.  When L = 0 the
scheme degenerates to Heun's method.  The mean Fourier mode is overwritten
with its exact evolution  u0_hat <- u0_hat e^{-mu dt} + g0_hat
(1 - e^{-mu dt})/mu  (continuous limit g0_hat*dt when mu = 0).

The step-size budget is re-evaluated every step:

    dt <= min( 0.5 * 2 pi^2 / (max|a-abar| * (2 pi kmax / L)^2),
               CFL * (L/N) / max|u| ),   CFL = 0.5

and a step that produces a non-finite state is rejected and retried with
half the step size before giving up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import ForcingTerm, Mode, ViscosityProfile, ch_nonlinearity
from .spectral import SpectralField, dealias, dealias_limit, derivative, multiply

__all__ = [
    "TimeGrid",
    "TrajectoryState",
    "NonFiniteState",
    "stability_budget",
    "step",
    "advance_to",
]

CFL = 0.5
DT_MAX = 0.05
MAX_REJECTIONS = 40


class NonFiniteState(FloatingPointError):
    """The state overflowed or turned NaN; carries a diagnostic snapshot."""

    def __init__(self, t: float, step_count: int, dt: float):
        self.t = t
        self.step_count = step_count
        self.dt = dt
        super().__init__(
            f"non-finite state at t = {t:.6g} (step {step_count}, dt = {dt:.3e})"
        )


@dataclass(frozen=True)
class TimeGrid:
    """Step size (or None for automatic), horizon, and output cadence."""

    dt: float | None
    t_end: float
    output_stride: int = 1

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.output_stride < 1:
            raise ValueError(f"output_stride must be >= 1, got {self.output_stride}")


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    u: SpectralField
    step_count: int = 0


def stability_budget(
    u: SpectralField, p: ViscosityProfile | None, dt_max: float = DT_MAX
) -> float:
    """Explicit-part step budget from diffusion (variable coefficient) and advection."""
    n = u.n_modes
    period = u.period
    kmax = dealias_limit(n)
    budget = dt_max
    if p is not None:
        fluct = float(np.max(np.abs(p.fluctuation.values)))
        if fluct > 0:
            xi = 2.0 * np.pi * kmax / period
            budget = min(budget, 0.5 * 2.0 * np.pi**2 / (fluct * xi * xi))
    umax = float(np.max(np.abs(u.values)))
    if umax > 0:
        budget = min(budget, CFL * (period / n) / umax)
    return budget


def _linear_symbol(
    u: SpectralField, p: ViscosityProfile | None, mu: float
) -> np.ndarray:
    """Diagonal stiff symbol: -abar (2 pi xi)^2 - mu."""
    abar = p.mean_a if p is not None else 0.0
    return -abar * (2.0 * np.pi * u.xi) ** 2 - mu


def _explicit_part(
    u: SpectralField,
    p: ViscosityProfile | None,
    f: ForcingTerm | None,
    mode: Mode,
    t: float,
    include_nonlinearity: bool,
) -> SpectralField:
    """Everything the scheme treats explicitly: variable viscosity, -F, g."""
    out = None
    if include_nonlinearity:
        out = -ch_nonlinearity(u)
    if mode is not Mode.INVISCID_TEST:
        assert p is not None and f is not None
        var = derivative(multiply(p.fluctuation, derivative(u)))
        out = var if out is None else out + var
        out = out + f.at(t)
    if out is None:
        out = u.with_coeffs(np.zeros_like(u.coeffs))
    return out


def _phi12(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, stable near 0."""
    small = np.abs(z) < 1e-7
    zs = np.where(small, 1.0, z)  # placeholder avoids 0/0 warnings
    em = np.expm1(zs)
    phi1 = np.where(small, 1.0 + z / 2.0, em / zs)
    phi2 = np.where(small, 0.5 + z / 6.0, (em - zs) / (zs * zs))
    return phi1, phi2


def step(
    state: TrajectoryState,
    p: ViscosityProfile | None,
    f: ForcingTerm | None,
    dt: float,
    mode: Mode,
    include_nonlinearity: bool = True,
) -> TrajectoryState:
    """One ETDRK2 step; raises NonFiniteState on blow-up."""
    u, t = state.u, state.t
    mu = f.mu if (f is not None and mode is Mode.DAMPED) else 0.0
    ell = _linear_symbol(u, p, mu)
    exp_l = np.exp(ell * dt)
    phi1, phi2 = _phi12(ell * dt)

    n0 = _explicit_part(u, p, f, mode, t, include_nonlinearity)
    u1 = u.with_coeffs(exp_l * u.coeffs + dt * phi1 * n0.coeffs)
    n1 = _explicit_part(u1, p, f, mode, t + dt, include_nonlinearity)
    new_coeffs = u1.coeffs + dt * phi2 * (n1.coeffs - n0.coeffs)

    # exact mean-mode evolution (degenerate mu = 0 handled by the limit)
    g0 = f.at(t).coeffs[0] if (f is not None and mode is not Mode.INVISCID_TEST) else 0.0
    if mu > 0:
        new_coeffs[0] = u.coeffs[0] * math.exp(-mu * dt) + g0 * (
            1.0 - math.exp(-mu * dt)
        ) / mu
    else:
        new_coeffs[0] = u.coeffs[0] + g0 * dt

    u_new = dealias(u.with_coeffs(new_coeffs))
    if not np.all(np.isfinite(u_new.coeffs)):
        raise NonFiniteState(t, state.step_count, dt)
    return TrajectoryState(t=t + dt, u=u_new, step_count=state.step_count + 1)


def advance_to(
    state: TrajectoryState,
    t_target: float,
    p: ViscosityProfile | None,
    f: ForcingTerm | None,
    mode: Mode,
    dt: float | None = None,
    include_nonlinearity: bool = True,
    dt_max: float = DT_MAX,
) -> TrajectoryState:
    """Advance to t_target, clipping the last step; adaptive dt when dt is None.

    A non-finite step is rejected and retried with half the step size; the
    trajectory aborts (NonFiniteState) after MAX_REJECTIONS halvings.
    """
    while state.t < t_target - 1e-12:
        h = dt if dt is not None else stability_budget(state.u, p, dt_max)
        h = min(h, t_target - state.t)
        rejections = 0
        while True:
            try:
                state = step(state, p, f, h, mode, include_nonlinearity)
                break
            except NonFiniteState:
                rejections += 1
                if rejections > MAX_REJECTIONS:
                    raise
                h *= 0.5
    return state
