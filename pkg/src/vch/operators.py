"""Right-hand side of the viscous Camassa-Holm dynamics.

The evolution is  u_t = -F(u) + d/dx(a(x) u_x) - mu*u + g  where

    F(u) = 1/2 d/dx(u^2) + d/dx (1 - d^2/dx^2)^{-1} [u_x^2/2 + u^2]

is the Camassa-Holm nonlinearity, a(x) is a coercive viscosity coefficient
(eps < a < 1/eps) and mu >= 0 is an optional linear damping used in the
large-box whole-line proxy.  All products are formed in physical space and
dealiased, so F and the viscosity term are exact x-derivatives discretely
(their mean mode vanishes to roundoff).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .spectral import (
    SpectralField,
    dealias,
    derivative,
    helmholtz_inverse,
    multiply,
    sup_norm,
)

__all__ = [
    "Mode",
    "StructuralFlag",
    "ViscosityProfile",
    "ForcingTerm",
    "ProfileError",
    "CoercivityViolation",
    "LipschitzBudgetExceeded",
    "StructuralConditionFailed",
    "ch_nonlinearity",
    "ch_bilinear",
    "apply_viscosity",
    "validate_profile",
    "rhs",
]


class Mode(enum.Enum):
    VISCOUS = "viscous"
    DAMPED = "damped"
    INVISCID_TEST = "inviscid_test"


class StructuralFlag(enum.Enum):
    SMALL_LIPSCHITZ = "small_lipschitz"
    SECOND_DERIVATIVE_BOUND = "second_derivative_bound"
    NONE = "none"


class ProfileError(ValueError):
    """A viscosity coefficient fails one of the standing hypotheses."""


class CoercivityViolation(ProfileError):
    pass


class LipschitzBudgetExceeded(ProfileError):
    pass


class StructuralConditionFailed(ProfileError):
    pass


@dataclass(frozen=True)
class ViscosityProfile:
    """Validated time-independent coefficient a(x) with its bounds.

    min_a, max_a, max_slope and max_structural_excess are the measured grid
    values recorded at validation time.
    """

    a: SpectralField
    epsilon: float
    delta: float
    structural_flag: StructuralFlag
    min_a: float
    max_a: float
    max_slope: float
    max_structural_excess: float

    @property
    def mean_a(self) -> float:
        return self.a.mean

    @property
    def fluctuation(self) -> SpectralField:
        """a - mean(a), the part the integrator treats explicitly."""
        c = self.a.coeffs.copy()
        c[0] = 0.0
        return self.a.with_coeffs(c)


@dataclass(frozen=True)
class ForcingTerm:
    """Static forcing g(x) plus the damping coefficient mu."""

    g: SpectralField
    mean_zero: bool = True
    mu: float = 0.0

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"damping coefficient must be nonnegative, got {self.mu}")
        if self.mean_zero and abs(self.g.coeffs[0]) > 1e-14:
            raise ValueError(
                f"forcing declared mean-zero but |mean(g)| = {abs(self.g.coeffs[0]):.3e} > 1e-14"
            )

    def at(self, t: float) -> SpectralField:
        # hook point: time-dependent forcing plugs in by overriding this
        return self.g

    @property
    def g_l2(self) -> float:
        from .spectral import l2_norm

        return l2_norm(self.g)


def validate_profile(
    a: SpectralField,
    epsilon: float,
    delta: float = 0.0,
    flag: StructuralFlag = StructuralFlag.NONE,
) -> ViscosityProfile:
    """Check the coercivity / Lipschitz / structural hypotheses on the grid.

    Raises CoercivityViolation unless eps < a(x) < 1/eps everywhere;
    LipschitzBudgetExceeded if the small-Lipschitz flag is set but
    max|a'| > delta*eps; StructuralConditionFailed if the second-derivative
    flag is set but a''(x) > 2 a(x) somewhere.  Checks are grid-pointwise
    (necessary-condition testing; re-validate after doubling the resolution
    to gain confidence in between-node behaviour).
    """
    if epsilon <= 0:
        raise CoercivityViolation(
            f"coercivity hypothesis needs epsilon > 0, got epsilon = {epsilon}"
        )
    if delta < 0:
        raise ProfileError(f"Lipschitz budget delta must be nonnegative, got {delta}")
    av = a.values
    min_a, max_a = float(np.min(av)), float(np.max(av))
    a1 = derivative(a, 1)
    a2 = derivative(a, 2)
    max_slope = sup_norm(a1)
    max_excess = float(np.max(a2.values - 2.0 * av))
    if not (epsilon < min_a and max_a < 1.0 / epsilon):
        raise CoercivityViolation(
            "coercivity hypothesis epsilon < a(x) < 1/epsilon violated: "
            f"epsilon = {epsilon}, min a = {min_a:.6g}, max a = {max_a:.6g}"
        )
    if flag is StructuralFlag.SMALL_LIPSCHITZ and max_slope > delta * epsilon:
        raise LipschitzBudgetExceeded(
            "small-Lipschitz hypothesis max|a'| <= delta*epsilon violated: "
            f"max|a'| = {max_slope:.6g} > {delta * epsilon:.6g}"
        )
    if flag is StructuralFlag.SECOND_DERIVATIVE_BOUND and max_excess > 0:
        raise StructuralConditionFailed(
            "structural hypothesis a''(x) <= 2 a(x) violated: "
            f"max(a'' - 2a) = {max_excess:.6g} > 0"
        )
    return ViscosityProfile(
        a=dealias(a),
        epsilon=epsilon,
        delta=delta,
        structural_flag=flag,
        min_a=min_a,
        max_a=max_a,
        max_slope=max_slope,
        max_structural_excess=max_excess,
    )


def ch_bilinear(u: SpectralField, v: SpectralField) -> SpectralField:
    """Bilinear form  1/2 d/dx(u v) + d/dx (1-d^2/dx^2)^{-1} [u_x v_x / 2 + u v]."""
    uv = multiply(u, v)
    ux_vx = multiply(derivative(u), derivative(v))
    inner = helmholtz_inverse(0.5 * ux_vx + uv)
    return derivative(0.5 * uv + inner)


def ch_nonlinearity(u: SpectralField) -> SpectralField:
    """F(u) = ch_bilinear(u, u); its mean mode vanishes (perfect derivative)."""
    return ch_bilinear(u, u)


def apply_viscosity(p: ViscosityProfile, u: SpectralField) -> SpectralField:
    """A u = -d/dx(a(x) u_x), product dealiased in physical space."""
    return -derivative(multiply(p.a, derivative(u)))


def rhs(
    u: SpectralField,
    p: ViscosityProfile | None,
    f: ForcingTerm | None,
    mode: Mode,
    t: float = 0.0,
) -> SpectralField:
    """Full right-hand side u_t for the requested mode."""
    out = -ch_nonlinearity(u)
    if mode is Mode.INVISCID_TEST:
        return out
    if p is None or f is None:
        raise ValueError(f"mode {mode.value} needs a viscosity profile and forcing")
    out = out - apply_viscosity(p, u) + f.at(t)
    if mode is Mode.DAMPED:
        out = out - f.mu * u
    return out
