"""Transient stability toolkit for PLL-synchronized grid-following
converters: exact stability boundaries by backward tracing, three
Lyapunov certificate families, critical clearing time estimation, and
certificate-triggered PLL reset control."""

from .circuit import (CircuitParams, EquilibriumPair, NetworkEquivalents,
                      SwingParams, equilibria, network_equivalents, scr,
                      swing_params)
from .dynsim import (PllState, ReducedState, Scenario, TrajectoryRecord,
                     Verdict, judged_cct, lvrt_exit_state,
                     point_stability_oracle, real_cct, simulate)
from .errors import (ClassificationInconclusiveError, ConfigError,
                     DegreeOverflowError, EvolutionDivergedError,
                     GflstabError, NoEquilibriumError, NonHurwitzError,
                     NotASaddleError, NumericalFailureError,
                     ResonanceError, SingularNetworkError,
                     TangencyBudgetError, WindowTooSmallError)
from .lyap_ablm import AblmCertificate, build_ablm
from .lyap_atrm import AtrmCertificate, build_atrm
from .lyap_zubov import ZubovCertificate, build_zubov
from .polyalg import Poly2, taylor_field
from .reset_ctl import ResetController, ResetEvent, ResetPolicy, reset_demo
from .sd_trm import (BoundaryCurve, SdForm, classify_sd_form,
                     sweep_parameter, trm_boundary)

__version__ = "0.1.0"

__all__ = [
    "AblmCertificate", "AtrmCertificate", "BoundaryCurve", "CircuitParams",
    "ClassificationInconclusiveError", "ConfigError",
    "DegreeOverflowError", "EquilibriumPair", "EvolutionDivergedError",
    "GflstabError", "NetworkEquivalents", "NoEquilibriumError",
    "NonHurwitzError", "NotASaddleError", "NumericalFailureError",
    "PllState", "Poly2", "ReducedState", "ResetController", "ResetEvent",
    "ResetPolicy", "ResonanceError", "Scenario", "SdForm",
    "SingularNetworkError", "SwingParams", "TangencyBudgetError",
    "TrajectoryRecord", "Verdict", "WindowTooSmallError",
    "ZubovCertificate", "build_ablm", "build_atrm", "build_zubov",
    "classify_sd_form", "equilibria", "judged_cct", "lvrt_exit_state",
    "network_equivalents", "point_stability_oracle", "real_cct",
    "reset_demo", "scr", "simulate", "sweep_parameter", "swing_params",
    "taylor_field", "trm_boundary",
]
