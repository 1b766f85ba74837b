"""Switched simulation, verdicts, and critical clearing times."""
import dataclasses
import math

import numpy as np
import pytest

from gflstab import (CircuitParams, PllState, ReducedState, Scenario,
                     network_equivalents, point_stability_oracle, real_cct,
                     simulate, swing_params)
from gflstab.dynsim import u_cq, u_c_mag


def test_frozen_q_axis_voltage():
    """q-axis voltage at zero angle on the unfaulted network."""
    p = CircuitParams()
    ne = network_equivalents(p)
    assert u_cq(0.0, ne, p) == pytest.approx(0.47472015235561726, rel=1e-12)


def test_voltage_magnitude_consistency():
    """|U_c| is never below |u_cq| and matches hypot of the components."""
    p = CircuitParams()
    ne = network_equivalents(p)
    for d in np.linspace(-3.0, 3.0, 13):
        assert u_c_mag(d, ne, p) >= abs(u_cq(d, ne, p)) - 1e-15


def test_real_cct_reference_case(real_ccts):
    """Frozen CCT grid for the four fault resistances."""
    assert real_ccts[3.0] == pytest.approx(0.2325, abs=1e-9)
    assert real_ccts[1.0] == pytest.approx(0.2237, abs=1e-9)
    assert real_ccts[0.5] == pytest.approx(0.2218, abs=1e-9)
    assert real_ccts[0.1] == pytest.approx(0.2203, abs=1e-9)


def test_cct_step_halving(real_ccts):
    """Halving dt moves the rf = 3 CCT by less than 0.2 ms."""
    cct_half = real_cct(CircuitParams(), rf_ohm=3.0, dt=5e-5)
    assert abs(cct_half - real_ccts[3.0]) < 2e-4


def test_verdict_flip_around_cct():
    """Clearing just below the CCT is stable, just above is unstable."""
    p = CircuitParams()
    stable = simulate(Scenario(params=p, t_fault=0.2, t_clear=0.4235))
    unstable = simulate(Scenario(params=p, t_fault=0.2, t_clear=0.4260))
    assert stable.verdict.kind == "stable"
    assert stable.verdict.branch_k == 0
    assert unstable.verdict.kind == "unstable"


def test_zero_duration_fault_stays_settled():
    """A fault cleared instantly leaves the system at its operating point."""
    rec = simulate(Scenario(params=CircuitParams(), t_fault=0.2,
                            t_clear=0.2, t_end=2.0))
    assert str(rec.verdict) == "stable(0)"
    names = [name for _, name in rec.events]
    assert "fault_on" in names and "fault_clear" in names


def test_simulation_is_deterministic():
    """Two identical runs produce bit-identical sample arrays."""
    sc = Scenario(params=CircuitParams(), t_fault=0.2, t_clear=0.45,
                  t_end=3.0)
    a = simulate(sc)
    b = simulate(sc)
    assert np.array_equal(a.samples, b.samples)
    assert a.events == b.events


def test_sample_grid_and_horizon():
    """Samples advance by dt and the record ends exactly at t_end."""
    sc = Scenario(params=CircuitParams(), t_fault=0.1, t_clear=0.2,
                  t_end=1.0, dt=1e-3)
    rec = simulate(sc)
    t = rec.samples[:, 0]
    assert t[0] == 0.0
    assert t[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(t) > 0)
    assert np.max(np.abs(np.diff(t) - 1e-3)) < 1e-9


def test_frequency_jump_at_switch():
    """At a network switch omega jumps by k_p times the u_cq step."""
    p = CircuitParams()
    sc = Scenario(params=p, t_fault=0.2, t_clear=0.45, dt=1e-4, t_end=1.0)
    rec = simulate(sc)
    t = rec.samples[:, 0]
    i = int(np.argmin(np.abs(t - sc.t_fault)))
    assert t[i] == pytest.approx(sc.t_fault, abs=1e-12)
    d_i = rec.samples[i, 1]
    ne_pre = network_equivalents(p)
    ne_post = network_equivalents(p, faulted=True)
    predicted = p.k_p * (u_cq(d_i, ne_post, p) - u_cq(d_i, ne_pre, p))
    measured = rec.samples[i + 1, 2] - rec.samples[i, 2]
    assert measured == pytest.approx(predicted, abs=0.05)


def test_oracle_probe_points(frame36):
    """Known stable and unstable initial states classify correctly."""
    ne, _, eq = frame36
    p = CircuitParams()
    near = point_stability_oracle(ReducedState(eq.delta_sep + 0.1, 0.0),
                                  ne, p)
    far = point_stability_oracle(ReducedState(eq.delta_uep + 0.5, 30.0),
                                 ne, p)
    assert near.kind == "stable"
    assert far.kind == "unstable"


def test_divergence_detection(frame36):
    """A runaway frequency trips the divergence bound."""
    ne, _, _ = frame36
    v = point_stability_oracle(ReducedState(0.5, 150.0), ne,
                               CircuitParams(), t_end=2.0)
    assert v.kind == "unstable"


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(params=CircuitParams(), t_fault=0.5, t_clear=0.4)
    with pytest.raises(ValueError):
        Scenario(params=CircuitParams(), t_fault=-0.1, t_clear=0.4)
    with pytest.raises(ValueError):
        Scenario(params=CircuitParams(), t_fault=0.1, t_clear=0.2,
                 t_end=0.15)


def test_state_validation():
    with pytest.raises(ValueError):
        PllState(math.nan, 0.0)
    with pytest.raises(ValueError):
        ReducedState(0.0, math.inf)


def test_cct_sentinel_when_never_unstable():
    """A barely-there fault cannot destabilize within the scan range."""
    cct = real_cct(CircuitParams(), rf_ohm=1e6, dt=1e-3, tau_max=0.05,
                   post_window=1.0)
    assert math.isinf(cct)
