"""Shared fixtures: parameter sets, certificates, CCT tables, timings."""
import dataclasses
import time

import pytest

from gflstab import (CircuitParams, Scenario, build_ablm, build_atrm,
                     build_zubov, classify_sd_form, equilibria,
                     network_equivalents, point_stability_oracle, real_cct,
                     simulate, swing_params, trm_boundary)
from gflstab import ReducedState, lyap_ablm, lyap_atrm, lyap_zubov

RF_SET = (3.0, 1.0, 0.5, 0.1)


@pytest.fixture(scope="session")
def timings():
    """Wall-clock records filled in by the heavy fixtures."""
    return {}


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the integration kernels before anything is timed."""
    p = CircuitParams()
    sc = Scenario(params=p, t_fault=0.002, t_clear=0.004, t_end=0.02,
                  dt=1e-3)
    simulate(sc)
    ne = network_equivalents(p)
    point_stability_oracle(ReducedState(0.5, 0.0), ne, p, dt=1e-3,
                           t_end=0.05)
    real_cct(p, rf_ohm=3.0, dt=2e-3, tau_max=0.01, post_window=0.05)


@pytest.fixture(scope="session")
def p36():
    return CircuitParams()


@pytest.fixture(scope="session")
def p24(p36):
    return dataclasses.replace(p36, x_c=0.24)


@pytest.fixture(scope="session")
def p60(p36):
    return dataclasses.replace(p36, x_c=0.6)


def _frame(p):
    ne = network_equivalents(p)
    sp = swing_params(ne, p)
    return ne, sp, equilibria(sp)


@pytest.fixture(scope="session")
def frame36(p36):
    return _frame(p36)


@pytest.fixture(scope="session")
def frame60(p60):
    return _frame(p60)


@pytest.fixture(scope="session")
def zubov36(frame36, timings):
    _, sp, eq = frame36
    t0 = time.perf_counter()
    cert = build_zubov(sp, eq.delta_sep)
    timings["zubov_build_s"] = time.perf_counter() - t0
    return cert


@pytest.fixture(scope="session")
def zubov60(frame60):
    _, sp, eq = frame60
    return build_zubov(sp, eq.delta_sep)


@pytest.fixture(scope="session")
def atrm36(frame36, timings):
    _, sp, eq = frame36
    t0 = time.perf_counter()
    cert = build_atrm(sp, eq.delta_sep)
    timings["atrm_build_s"] = time.perf_counter() - t0
    return cert


@pytest.fixture(scope="session")
def ray36(frame36):
    _, sp, _ = frame36
    return build_ablm(sp, "ray")


@pytest.fixture(scope="session")
def trap36(frame36):
    _, sp, _ = frame36
    return build_ablm(sp, "trapezoid")


@pytest.fixture(scope="session")
def real_ccts(p36, timings):
    t0 = time.perf_counter()
    vals = {rf: real_cct(p36, rf_ohm=rf) for rf in RF_SET}
    timings["real_cct_total_s"] = time.perf_counter() - t0
    return vals


@pytest.fixture(scope="session")
def method_ccts(p36, ray36, trap36, zubov36, atrm36):
    methods = {
        "ablm_ray": (lyap_ablm, ray36),
        "ablm_trapezoid": (lyap_ablm, trap36),
        "zubov": (lyap_zubov, zubov36),
        "atrm": (lyap_atrm, atrm36),
    }
    return {name: {rf: mod.estimate_cct(cert, p36, rf) for rf in RF_SET}
            for name, (mod, cert) in methods.items()}


@pytest.fixture(scope="session")
def sd_results(p36):
    """Boundary curves and band classification for the three X_c cases."""
    out = {}
    for xc in (0.24, 0.36, 0.6):
        p = dataclasses.replace(p36, x_c=xc)
        ne = network_equivalents(p)
        sp = swing_params(ne, p)
        curves = trm_boundary(sp)
        out[xc] = (p, ne, sp, curves, classify_sd_form(curves, ne, p))
    return out
