"""Nonlinearity, viscosity operator, and hypothesis validation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vch.operators import (
    CoercivityViolation,
    ForcingTerm,
    LipschitzBudgetExceeded,
    Mode,
    StructuralConditionFailed,
    StructuralFlag,
    apply_viscosity,
    ch_bilinear,
    ch_nonlinearity,
    rhs,
    validate_profile,
)
from vch.spectral import (
    analyze,
    dealias,
    derivative,
    from_coeffs,
    from_function,
    l2_norm,
)


def random_field(seed, n=128):
    rng = np.random.default_rng(seed)
    return dealias(analyze(rng.standard_normal(n)))


def constant_profile(value=1.0, n=128, epsilon=0.5):
    a = from_coeffs({0: value}, n)
    return validate_profile(a, epsilon)


# --- nonlinearity ----------------------------------------------------------

def test_nonlinearity_single_mode_closed_form():
    # u = c sin(2 pi x):
    #   1/2 (u^2)' = pi c^2 sin(4 pi x)
    #   u_x^2/2 + u^2 = pi^2 c^2 (1 + cos 4 pi x) + c^2/2 (1 - cos 4 pi x)
    #   after (1 - d^2/dx^2)^{-1} and d/dx only the cos 4 pi x part survives
    c = 0.7
    u = from_function(lambda x: c * np.sin(2 * np.pi * x), 256)
    fu = ch_nonlinearity(u)
    amp = np.pi * c**2 - 4 * np.pi * (np.pi**2 * c**2 - c**2 / 2) / (1 + 16 * np.pi**2)
    expected = from_function(lambda x: amp * np.sin(4 * np.pi * x), 256)
    assert np.max(np.abs(fu.coeffs - expected.coeffs)) < 1e-12


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_nonlinearity_is_mean_free(seed):
    # F(u) is a perfect x-derivative, so its integral vanishes
    fu = ch_nonlinearity(random_field(seed))
    assert abs(fu.coeffs[0]) < 1e-13


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_conservation_pairing(seed):
    # int u F(u) + u_x (F(u))_x dx = 0: the discrete footprint of d/dt I = 0
    u = random_field(seed)
    fu = ch_nonlinearity(u)
    inner = np.sum(np.conj(u.coeffs) * fu.coeffs).real
    inner += np.sum(np.conj(derivative(u).coeffs) * derivative(fu).coeffs).real
    scale = max(1.0, l2_norm(derivative(u)) ** 3)
    assert abs(inner) < 1e-13 * scale


def test_bilinear_symmetry():
    u, v = random_field(3), random_field(4)
    a = ch_bilinear(u, v)
    b = ch_bilinear(v, u)
    assert np.allclose(a.coeffs, b.coeffs, atol=1e-12)


def test_bilinear_diagonal_matches_nonlinearity():
    u = random_field(9)
    assert np.allclose(ch_bilinear(u, u).coeffs, ch_nonlinearity(u).coeffs)


# --- viscosity operator ----------------------------------------------------

def test_constant_coefficient_viscosity_is_minus_laplacian():
    p = constant_profile(1.0)
    u = from_function(lambda x: np.sin(2 * np.pi * x), 128)
    au = apply_viscosity(p, u)
    # compare inside the dealiased band; outside it -u'' only holds roundoff
    # amplified by k^2
    assert np.allclose(au.coeffs, dealias(-derivative(u, 2)).coeffs, atol=1e-11)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_viscosity_dissipates(seed):
    # <A u, u> = int a u_x^2 >= eps ||u_x||^2 > 0 for nonconstant u
    a = from_function(lambda x: 1.0 + 0.2 * np.cos(2 * np.pi * x), 128)
    p = validate_profile(a, 0.5)
    u = random_field(seed)
    au = apply_viscosity(p, u)
    quad = float(np.sum(np.conj(u.coeffs) * au.coeffs).real)
    ux2 = l2_norm(derivative(u)) ** 2
    assert quad >= 0.5 * ux2 - 1e-10


def test_viscosity_output_mean_free():
    a = from_function(lambda x: 1.0 + 0.2 * np.cos(2 * np.pi * x), 128)
    p = validate_profile(a, 0.5)
    assert abs(apply_viscosity(p, random_field(2)).coeffs[0]) < 1e-14


# --- hypothesis validation -------------------------------------------------

def test_profile_accepts_valid_coefficient():
    a = from_function(lambda x: 1.0 + 0.1 * np.cos(2 * np.pi * x), 128)
    p = validate_profile(a, 0.5, delta=2.0, flag=StructuralFlag.SMALL_LIPSCHITZ)
    assert 0.89 < p.min_a < 0.91 and 1.09 < p.max_a < 1.11
    assert p.max_slope == pytest.approx(0.2 * np.pi, rel=1e-3)
    assert p.mean_a == pytest.approx(1.0)


def test_profile_rejects_noncoercive():
    a = from_function(lambda x: 2.0 + 2.0 * np.cos(2 * np.pi * x), 128)
    with pytest.raises(CoercivityViolation, match="coercivity"):
        validate_profile(a, 0.5)


def test_profile_rejects_too_large():
    a = from_coeffs({0: 3.0}, 64)
    with pytest.raises(CoercivityViolation):
        validate_profile(a, 0.5)  # 3 > 1/eps = 2


def test_profile_rejects_bad_epsilon():
    a = from_coeffs({0: 1.0}, 64)
    with pytest.raises(CoercivityViolation, match="epsilon > 0"):
        validate_profile(a, 0.0)


def test_lipschitz_budget_enforced():
    a = from_function(lambda x: 1.0 + 0.1 * np.cos(2 * np.pi * x), 128)
    with pytest.raises(LipschitzBudgetExceeded, match="delta"):
        validate_profile(a, 0.5, delta=0.1, flag=StructuralFlag.SMALL_LIPSCHITZ)


def test_second_derivative_condition():
    # a = 1 + 0.3 cos(2 pi x): a'' = -1.2 pi^2 cos; max(a'' - 2a) at x = 1/2
    # is 1.2 pi^2 - 2(1 - 0.3) = 10.4... > 0, so the flag must reject it
    a = from_function(lambda x: 1.0 + 0.3 * np.cos(2 * np.pi * x), 128)
    with pytest.raises(StructuralConditionFailed, match="a''"):
        validate_profile(a, 0.5, flag=StructuralFlag.SECOND_DERIVATIVE_BOUND)
    # constant coefficient satisfies a'' = 0 <= 2a
    validate_profile(from_coeffs({0: 1.0}, 64), 0.5,
                     flag=StructuralFlag.SECOND_DERIVATIVE_BOUND)


# --- forcing and assembled right-hand side --------------------------------

def test_forcing_mean_zero_enforced():
    g = from_coeffs({0: 0.5, 1: 1.0}, 64)
    with pytest.raises(ValueError, match="mean"):
        ForcingTerm(g=g, mean_zero=True)
    ForcingTerm(g=g, mean_zero=False)  # accepted when declared


def test_forcing_negative_mu_rejected():
    g = from_coeffs({1: 1.0}, 64)
    with pytest.raises(ValueError, match="nonnegative"):
        ForcingTerm(g=g, mu=-0.1)


def test_rhs_inviscid_is_pure_nonlinearity():
    u = random_field(7)
    out = rhs(u, None, None, Mode.INVISCID_TEST)
    assert np.allclose(out.coeffs, -ch_nonlinearity(u).coeffs)


def test_rhs_damped_includes_damping():
    u = random_field(8)
    p = constant_profile(1.0)
    g = from_coeffs({1: 0.3}, 128)
    f = ForcingTerm(g=g, mu=0.25)
    damped = rhs(u, p, f, Mode.DAMPED)
    viscous = rhs(u, p, f, Mode.VISCOUS)
    diff = viscous - damped
    assert np.allclose(diff.coeffs, 0.25 * u.coeffs, atol=1e-13)


def test_rhs_viscous_needs_profile_and_forcing():
    with pytest.raises(ValueError, match="needs"):
        rhs(random_field(1), None, None, Mode.VISCOUS)
