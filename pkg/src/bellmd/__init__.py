"""Measurement dependence in Bell tests.

Local mimics of no-signaling behaviors, faking source strategies, min-entropy
thresholds, an exact LP for the maximal Bell value under a bounded ``P_M``,
and a seeded round-by-round simulator.
"""
from ._accel import NUMBA_ENABLED
from .bounds import BoundReport, chsh_analytic_max, ns_threshold, quantum_pm_threshold, quantum_report, theorem1_threshold
from .fine import CrossSet, JointOutcomeModel, SignalingError, cross_set, local_mimic, tightness_check
from .lp import LPSolution, local_membership_on_subset, max_bell, sweep_max_bell
from .numeric import DOUBLE, RATIONAL
from .scenario import (
    CHSH_SHAPE,
    Behavior,
    BellFunctional,
    DeterministicStrategy,
    Limits,
    ResourceLimitError,
    ScenarioShape,
    bell_value,
    catalog,
    enumerate_local_vertices,
    is_no_signaling,
    pr_box,
)
from .simulator import ExperimentSummary, reconstruct_behavior, simulate
from .sources import (
    InfeasiblePriorError,
    LocalResponseModel,
    SettingDistribution,
    SourceStrategy,
    SVParams,
    m_prime,
    m_prime_bound_check,
    min_entropy,
    solve_prior,
    source_polytope_vertices,
    strategy_general,
    strategy_hide_one,
    strategy_theorem1,
    strategy_tilted_chsh,
)

__version__ = "0.1.0"
