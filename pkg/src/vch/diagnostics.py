"""Energy functionals and inequality monitors.

Quantities tracked per snapshot: the H1 energy I(t) = int u^2 + u_x^2 dx,
the mean of u, the high-frequency energies I_{>k} (energy of P_{>2^k} u),
the dyadic Besov block table 2^{2k} ||P_{2^k} u||_{L2}, the windowed tail
energy J_{>N} (large-box damped mode only), the discrete conservation-law
residual int u F(u) + u_x dF(u)/dx dx, and the H2 norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import Mode, ch_nonlinearity
from .spectral import (
    FrequencyBand,
    SpectralField,
    besov_seminorm,
    dealias_limit,
    derivative,
    l2_norm,
    lp_project,
    norms,
)

__all__ = [
    "DiagnosticsRecord",
    "CutoffFunction",
    "DiagnosticsError",
    "DissipationReport",
    "h1_energy",
    "highfreq_energy",
    "tail_energy",
    "conservation_residual",
    "compute_record",
    "dissipation_monitor",
]


class DiagnosticsError(ValueError):
    pass


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One time-stamped ledger row of every tracked functional."""

    t: float
    I: float
    mean_u: float
    I_gt: dict[int, float] = field(default_factory=dict)
    besov_blocks: dict[int, float] = field(default_factory=dict)
    J_gt: dict[float, float] = field(default_factory=dict)
    conservation_residual: float = 0.0
    h2_norm: float = 0.0


def h1_energy(u: SpectralField) -> float:
    l2 = l2_norm(u)
    ux_l2 = l2_norm(derivative(u))
    return l2 * l2 + ux_l2 * ux_l2


def highfreq_energy(u: SpectralField, k: int) -> float:
    """H1 energy of P_{> 2^k} u; requires 2^k inside the dealiased band."""
    if 2**k >= dealias_limit(u.n_modes):
        raise DiagnosticsError(
            f"dyadic cutoff 2^{k} = {2 ** k} is outside the dealiased range "
            f"(limit {dealias_limit(u.n_modes)})"
        )
    return h1_energy(lp_project(u, FrequencyBand.high_pass(2**k)))


@dataclass(frozen=True)
class CutoffFunction:
    """Smooth even window psi: 1 on |x| <= scale, 0 on |x| >= 1.5 * scale.

    Built from the classical exp(-1/x) mollifier, so the sampled profile is
    C-infinity in the transition zone.
    """

    scale: float

    def __post_init__(self):
        if self.scale <= 0:
            raise DiagnosticsError(f"cutoff scale must be positive, got {self.scale}")

    @staticmethod
    def _smooth_step(t: np.ndarray) -> np.ndarray:
        """0 at t<=0, 1 at t>=1, monotone C-infinity in between."""
        t = np.clip(t, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            h = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
            h1 = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
        return h / (h + h1)

    def profile(self, x: np.ndarray) -> np.ndarray:
        """psi(x / scale) evaluated at (signed) distances x."""
        r = np.abs(np.asarray(x, dtype=float)) / self.scale
        return 1.0 - self._smooth_step(2.0 * (r - 1.0))


def tail_energy(u: SpectralField, cutoff: CutoffFunction) -> float:
    """J_{>N} = int (u^2 + u_x^2) (1 - psi(d/N)) dx, d = distance from box center."""
    if u.period < 3.0 * cutoff.scale:
        raise DiagnosticsError(
            f"cutoff scale {cutoff.scale} too wide for box of length {u.period} "
            "(need box >= 3 * scale)"
        )
    x = u.grid
    d = x - 0.5 * u.period
    w = 1.0 - cutoff.profile(d)
    density = u.values**2 + derivative(u).values ** 2
    return float(np.sum(density * w) * (u.period / u.n_modes))


def conservation_residual(u: SpectralField) -> float:
    """int u F(u) + u_x d/dx F(u) dx; vanishes for the inviscid flow."""
    fu = ch_nonlinearity(u)
    ux = derivative(u)
    fux = derivative(fu)
    inner = np.sum(np.conj(u.coeffs) * fu.coeffs + np.conj(ux.coeffs) * fux.coeffs)
    return float(inner.real) * u.period


def compute_record(
    t: float,
    u: SpectralField,
    dyadic_ks: tuple[int, ...] = (),
    tail_scales: tuple[float, ...] = (),
    with_residual: bool = True,
) -> DiagnosticsRecord:
    _, blocks = besov_seminorm(u, s=2.0)
    _, _, h2 = norms(u, 2.0)
    return DiagnosticsRecord(
        t=t,
        I=h1_energy(u),
        mean_u=u.mean,
        I_gt={k: highfreq_energy(u, k) for k in dyadic_ks},
        besov_blocks=blocks,
        J_gt={n: tail_energy(u, CutoffFunction(n)) for n in tail_scales},
        conservation_residual=conservation_residual(u) if with_residual else 0.0,
        h2_norm=h2,
    )


@dataclass(frozen=True)
class DissipationReport:
    """Witnesses for the exponential decay / absorbing-ball estimate."""

    c_star: float
    envelope_holds: bool
    decay_rate: float | None
    rate_ok: bool | None
    plateau: float


def dissipation_monitor(
    records: list[DiagnosticsRecord],
    epsilon: float,
    g_l2: float,
    mode: Mode = Mode.VISCOUS,
) -> DissipationReport:
    """Check I(t) <= I(0) e^{-eps t / 2} + C* ||g||^2 / eps^2.

    C* is the smallest constant making the envelope true (clamped at 0, a
    logged witness rather than an asserted theory constant).  For g = 0 the
    decay rate is fitted by least squares on log I(t) over the window where
    I(t) exceeds 100x its final plateau, and compared against eps/2.
    """
    if mode is not Mode.VISCOUS:
        raise DiagnosticsError(
            f"dissipation monitor applies to viscous-mode runs, got mode {mode.value}"
        )
    if len(records) < 2:
        raise DiagnosticsError("dissipation monitor needs at least two records")
    t = np.array([r.t for r in records])
    I = np.array([r.I for r in records])
    envelope_free = I[0] * np.exp(-0.5 * epsilon * t)
    plateau = float(np.mean(I[t >= 0.75 * t[-1]]))

    if g_l2 > 0:
        c_star = float(np.max((I - envelope_free) * epsilon**2 / g_l2**2))
        c_star = max(c_star, 0.0)
        return DissipationReport(
            c_star=c_star, envelope_holds=True, decay_rate=None, rate_ok=None,
            plateau=plateau,
        )

    window = I > max(100.0 * plateau, 1e-280)
    if np.count_nonzero(window) < 2:
        window = I > 0
    slope = np.polyfit(t[window], np.log(I[window]), 1)[0]
    rate = -float(slope)
    return DissipationReport(
        c_star=0.0,
        envelope_holds=bool(np.all(I <= envelope_free * (1.0 + 1e-9) + 1e-300)),
        decay_rate=rate,
        rate_ok=rate >= 0.5 * epsilon,
        plateau=plateau,
    )
