"""Time stepping: exact linear parts, convergence, stability budget."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vch.integrator import (
    DT_MAX,
    NonFiniteState,
    TimeGrid,
    TrajectoryState,
    advance_to,
    stability_budget,
    step,
)
from vch.operators import ForcingTerm, Mode, StructuralFlag, validate_profile
from vch.spectral import from_coeffs, from_function, l2_norm


def constant_profile(value=1.0, n=128, epsilon=0.5):
    return validate_profile(from_coeffs({0: value}, n), epsilon)


def zero_forcing(n=128, mu=0.0):
    return ForcingTerm(g=from_coeffs({}, n), mu=mu)


def test_heat_mode_decay_is_exact():
    # with a constant and the nonlinearity switched off, each mode decays as
    # exp(-a (2 pi k)^2 t), handled exactly by the integrating factor
    p = constant_profile(1.0)
    f = zero_forcing()
    u0 = from_function(lambda x: np.sin(2 * np.pi * x), 128)
    st0 = TrajectoryState(t=0.0, u=u0)
    out = advance_to(st0, 0.1, p, f, Mode.VISCOUS, dt=0.01, include_nonlinearity=False)
    decay = math.exp(-4 * np.pi**2 * 0.1)
    assert abs(out.u.coeff(1) - u0.coeff(1) * decay) < 1e-13


def test_mean_mode_exact_with_damping():
    # mean evolves as u0 e^{-mu t} + g0 (1 - e^{-mu t}) / mu regardless of dt
    n = 64
    p = constant_profile(1.0, n)
    g = from_coeffs({0: 0.3}, n)
    f = ForcingTerm(g=g, mean_zero=False, mu=0.5)
    u0 = from_coeffs({0: 2.0}, n)
    out = advance_to(
        TrajectoryState(t=0.0, u=u0), 1.0, p, f, Mode.DAMPED, dt=0.25,
        include_nonlinearity=False,
    )
    exact = 2.0 * math.exp(-0.5) + (0.3 / 0.5) * (1 - math.exp(-0.5))
    assert abs(out.u.mean - exact) < 1e-13


def test_mean_mode_exact_without_damping():
    n = 64
    p = constant_profile(1.0, n)
    g = from_coeffs({0: 0.3}, n)
    f = ForcingTerm(g=g, mean_zero=False, mu=0.0)
    out = advance_to(
        TrajectoryState(t=0.0, u=from_coeffs({0: 1.0}, n)), 2.0, p, f,
        Mode.VISCOUS, dt=0.1, include_nonlinearity=False,
    )
    assert abs(out.u.mean - (1.0 + 0.3 * 2.0)) < 1e-12


def test_forced_equilibrium_is_reached():
    # u_t = u_xx + g converges to the solution of -u_xx = g
    n = 128
    p = constant_profile(1.0, n)
    g = from_coeffs({1: 0.5}, n)
    f = ForcingTerm(g=g, mu=0.0)
    out = advance_to(
        TrajectoryState(t=0.0, u=from_coeffs({}, n)), 3.0, p, f, Mode.VISCOUS,
        dt=2e-3, include_nonlinearity=False,
    )
    target = 0.5 / (4 * np.pi**2)
    # the phi-function treatment of g reproduces the steady state exactly
    assert abs(out.u.coeff(1) - target) < 1e-12


def test_step_counts_and_time_advance():
    p = constant_profile()
    f = zero_forcing()
    st0 = TrajectoryState(t=0.0, u=from_coeffs({1: 0.1}, 128))
    out = advance_to(st0, 0.5, p, f, Mode.VISCOUS, dt=0.1)
    assert out.step_count == 5
    assert out.t == pytest.approx(0.5)


def test_final_step_is_clipped():
    p = constant_profile()
    f = zero_forcing()
    st0 = TrajectoryState(t=0.0, u=from_coeffs({1: 0.1}, 128))
    out = advance_to(st0, 0.25, p, f, Mode.VISCOUS, dt=0.1)
    assert out.t == pytest.approx(0.25)


def test_stability_budget_limits():
    u = from_function(lambda x: 2.0 * np.sin(2 * np.pi * x), 128)
    # constant coefficient: only the advection budget is active
    assert stability_budget(u, constant_profile()) == pytest.approx(
        min(DT_MAX, 0.5 * (1.0 / 128) / 2.0), rel=1e-6
    )
    # variable coefficient tightens the budget
    a = from_function(lambda x: 1.0 + 0.1 * np.cos(2 * np.pi * x), 128)
    p = validate_profile(a, 0.5, 2.0, StructuralFlag.SMALL_LIPSCHITZ)
    assert stability_budget(u, p) < stability_budget(u, constant_profile())


def test_zero_field_budget_is_dt_max():
    u = from_coeffs({}, 64)
    assert stability_budget(u, None) == DT_MAX


def test_nonfinite_state_raised():
    # an absurd dt on the inviscid advection problem overflows within a few
    # Heun steps; step must flag it rather than return garbage
    u = from_function(lambda x: np.sin(2 * np.pi * x), 64)
    s = TrajectoryState(t=0.0, u=u)
    with pytest.raises(NonFiniteState) as exc:
        with np.errstate(all="ignore"):
            for _ in range(50):
                s = step(s, None, None, 5.0, Mode.INVISCID_TEST)
    assert exc.value.dt == 5.0


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(dt=-0.1, t_end=1.0)
    with pytest.raises(ValueError):
        TimeGrid(dt=0.1, t_end=-1.0)
    with pytest.raises(ValueError):
        TimeGrid(dt=0.1, t_end=1.0, output_stride=0)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_viscous_step_contracts_energy_without_forcing(seed):
    # with g = 0 the H1 energy is nonincreasing step to step
    rng = np.random.default_rng(seed)
    n = 128
    pairs = {k: 0.1 * k ** (-1.5) * np.exp(2j * np.pi * rng.uniform()) for k in range(1, 20)}
    u = from_coeffs(pairs, n)
    p = constant_profile(1.0, n)
    f = zero_forcing(n)
    s = TrajectoryState(t=0.0, u=u)
    from vch.diagnostics import h1_energy

    prev = h1_energy(s.u)
    for _ in range(20):
        s = step(s, p, f, 1e-3, Mode.VISCOUS)
        cur = h1_energy(s.u)
        assert cur <= prev * (1.0 + 1e-10)
        prev = cur


def test_determinism_bitwise():
    p = constant_profile()
    f = zero_forcing()
    u0 = from_function(lambda x: 0.3 * np.sin(2 * np.pi * x), 128)
    a = advance_to(TrajectoryState(0.0, u0), 0.3, p, f, Mode.VISCOUS, dt=1e-3)
    b = advance_to(TrajectoryState(0.0, u0), 0.3, p, f, Mode.VISCOUS, dt=1e-3)
    assert np.array_equal(a.u.coeffs, b.u.coeffs)
