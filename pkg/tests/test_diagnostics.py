"""Energy functionals, cutoff window, dissipation monitor."""

import math

import numpy as np
import pytest

from vch.diagnostics import (
    CutoffFunction,
    DiagnosticsError,
    DiagnosticsRecord,
    compute_record,
    conservation_residual,
    dissipation_monitor,
    h1_energy,
    highfreq_energy,
    tail_energy,
)
from vch.operators import Mode
from vch.spectral import analyze, dealias, from_coeffs, from_function


def test_h1_energy_of_sine():
    u = from_function(lambda x: np.sin(2 * np.pi * x), 128)
    # int sin^2 = 1/2, int (2 pi cos)^2 = 2 pi^2
    assert h1_energy(u) == pytest.approx(0.5 + 2 * np.pi**2, rel=1e-12)


def test_highfreq_energy_splits_modes():
    u = from_coeffs({2: 1.0, 10: 1.0}, 128)
    # P_{>2^2} keeps only the n = 10 pair
    e = highfreq_energy(u, 2)
    expected = 2 * (1.0 + (2 * np.pi * 10) ** 2)
    assert e == pytest.approx(expected, rel=1e-12)
    # P_{>2^0} keeps both pairs
    full = highfreq_energy(u, 0)
    assert full == pytest.approx(h1_energy(u), rel=1e-12)


def test_highfreq_energy_rejects_unresolved_cutoff():
    u = from_coeffs({1: 1.0}, 64)
    with pytest.raises(DiagnosticsError, match="dealiased"):
        highfreq_energy(u, 6)  # 2^6 = 64 > 64//3


def test_cutoff_profile_shape():
    psi = CutoffFunction(2.0)
    x = np.array([0.0, 1.0, 2.0, 2.5, 3.0, 4.0, -1.5, -3.5])
    vals = psi.profile(x)
    assert np.all(vals[:3] == 1.0)  # identically 1 inside |x| <= scale
    assert 0.0 < vals[3] < 1.0  # strictly between in the transition zone
    assert vals[4] == 0.0 and vals[5] == 0.0  # 0 beyond 1.5 * scale
    assert vals[6] == 1.0 and vals[7] == 0.0  # even in x


def test_cutoff_monotone_in_radius():
    psi = CutoffFunction(1.0)
    r = np.linspace(0.0, 2.0, 200)
    vals = psi.profile(r)
    assert np.all(np.diff(vals) <= 1e-12)


def test_cutoff_rejects_bad_scale():
    with pytest.raises(DiagnosticsError):
        CutoffFunction(0.0)


def test_tail_energy_of_centered_bump_is_small():
    L, n = 32.0, 512
    u = from_function(lambda x: np.exp(-((x - 16.0) ** 2)), n, L)
    inner = tail_energy(u, CutoffFunction(2.0))
    outer = tail_energy(u, CutoffFunction(8.0))
    assert inner > outer  # wider window excludes more of the bump
    assert outer < 1e-10  # a width-1 bump has no mass 8 units out
    assert inner >= 0.0


def test_tail_energy_of_far_mass_is_total():
    L, n = 32.0, 512
    # mass near the box edge (distance ~16 from center): fully outside psi
    u = from_function(lambda x: np.exp(-(np.minimum(x, L - x) ** 2)), n, L)
    j = tail_energy(u, CutoffFunction(4.0))
    assert j == pytest.approx(h1_energy(u), rel=1e-6)


def test_tail_energy_rejects_wide_cutoff():
    u = from_coeffs({1: 1.0}, 64, period=4.0)
    with pytest.raises(DiagnosticsError, match="box"):
        tail_energy(u, CutoffFunction(2.0))


def test_conservation_residual_vanishes_on_random_field():
    rng = np.random.default_rng(3)
    u = dealias(analyze(rng.standard_normal(128)))
    assert abs(conservation_residual(u)) < 1e-10


def test_compute_record_fields():
    u = from_coeffs({1: 0.3, 9: 0.05}, 256)
    rec = compute_record(0.5, u, dyadic_ks=(1, 2), tail_scales=())
    assert rec.t == 0.5
    assert rec.I == pytest.approx(h1_energy(u), rel=1e-12)
    assert rec.I_gt[2] == pytest.approx(highfreq_energy(u, 2), rel=1e-12)
    assert rec.mean_u == 0.0
    assert rec.h2_norm > 0
    assert 3 in rec.besov_blocks


# --- dissipation monitor ---------------------------------------------------

def _records_from(t, I):
    return [DiagnosticsRecord(t=float(a), I=float(b), mean_u=0.0) for a, b in zip(t, I)]


def test_monitor_fits_clean_exponential():
    eps = 0.5
    t = np.linspace(0, 10, 60)
    recs = _records_from(t, 4.0 * np.exp(-3.0 * t) + 1e-14)
    rep = dissipation_monitor(recs, eps, g_l2=0.0)
    assert rep.decay_rate == pytest.approx(3.0, rel=1e-3)
    assert rep.rate_ok is True
    assert rep.envelope_holds  # 3.0 > eps/2, so I sits below the envelope


def test_monitor_flags_slow_decay():
    eps = 2.0
    t = np.linspace(0, 10, 60)
    recs = _records_from(t, np.exp(-0.1 * t))
    rep = dissipation_monitor(recs, eps, g_l2=0.0)
    assert rep.rate_ok is False
    assert not rep.envelope_holds


def test_monitor_forced_case_logs_witness_constant():
    eps = 0.5
    t = np.linspace(0, 40, 100)
    plateau = 0.02
    I = 3.0 * np.exp(-0.5 * eps * t) + plateau
    rep = dissipation_monitor(_records_from(t, I), eps, g_l2=0.1)
    # envelope with C* = plateau * eps^2 / g^2 is tight at late times
    assert rep.c_star == pytest.approx(plateau * eps**2 / 0.1**2, rel=1e-2)
    assert rep.envelope_holds
    assert rep.plateau == pytest.approx(plateau, rel=0.05)


def test_monitor_requires_viscous_mode():
    recs = _records_from([0.0, 1.0], [1.0, 0.5])
    with pytest.raises(DiagnosticsError, match="viscous"):
        dissipation_monitor(recs, 0.5, 0.0, mode=Mode.DAMPED)


def test_monitor_requires_two_records():
    with pytest.raises(DiagnosticsError, match="two"):
        dissipation_monitor(_records_from([0.0], [1.0]), 0.5, 0.0)
