"""PLL reset control: judge the state at LVRT exit with a Lyapunov
certificate and, on an unstable verdict, reset the PLL frequency (and
optionally its angle) inside the simulation loop."""
import math
from dataclasses import dataclass, field

from .dynsim import ReducedState, Scenario, Verdict, simulate
from .errors import ConfigError

MODES = ("none", "omega_reset", "omega_delta_reset")


@dataclass(frozen=True)
class ResetPolicy:
    """What to do at LVRT exit when the judged verdict is unstable."""

    mode: str
    omega_target: float = 0.0
    judge: str = "zubov"
    max_resets: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not math.isfinite(self.omega_target):
            raise ValueError("omega_target must be finite")
        if self.max_resets < 1:
            raise ValueError("max_resets must be >= 1")


@dataclass(frozen=True)
class ResetEvent:
    t: float
    pre_state: ReducedState
    post_state: ReducedState
    judged_value: float
    mode_applied: str


def judge_with_certificate(x, cert):
    """(verdict, certificate value) for any of the three certificate types."""
    from . import lyap_ablm, lyap_atrm, lyap_zubov
    if isinstance(cert, lyap_ablm.AblmCertificate):
        return lyap_ablm.judge(x, cert), lyap_ablm.v_ablm(x, cert)
    if isinstance(cert, lyap_zubov.ZubovCertificate):
        value = cert.v.eval(x.delta - cert.sep, x.omega)
        return lyap_zubov.judge(x, cert), value
    if isinstance(cert, lyap_atrm.AtrmCertificate):
        value = cert.v.eval(x.delta - cert.sep, x.omega)
        return lyap_atrm.judge(x, cert), value
    raise ConfigError(f"unsupported certificate type {type(cert).__name__}")


class ResetController:
    """Stateful per-run controller handed to dynsim.simulate."""

    def __init__(self, policy, certificate):
        if policy.mode != "none" and certificate is None:
            raise ConfigError("reset policy needs a certificate to judge by")
        self.policy = policy
        self.certificate = certificate
        self.events = []

    def on_lvrt_exit(self, x, ne, p, t):
        """Judge the exit state; emit a ResetEvent when it must be caught."""
        if self.policy.mode == "none":
            return None
        if len(self.events) >= self.policy.max_resets:
            return None
        verdict, value = judge_with_certificate(x, self.certificate)
        if verdict.kind == "stable":
            return None
        if self.policy.mode == "omega_reset":
            post = ReducedState(x.delta, self.policy.omega_target)
        else:
            post = ReducedState(0.0, self.policy.omega_target)
        ev = ResetEvent(t, x, post, value, self.policy.mode)
        self.events.append(ev)
        return ev


def on_lvrt_exit(x, policy, certificate, ne, p, t=0.0):
    """One-shot functional form of the controller decision."""
    return ResetController(policy, certificate).on_lvrt_exit(x, ne, p, t)


def reset_demo(sc, policy, certificate=None):
    """Paired runs of one scenario: uncontrolled versus under the policy.

    Returns (base_record, controlled_record, reset_events).  Both runs
    share every scenario number, so the records overlay sample for
    sample until the reset instant.
    """
    base = simulate(sc)
    controller = ResetController(policy, certificate)
    controlled = simulate(sc, controller=controller)
    return base, controlled, list(controller.events)
