"""blcsim: spacelike quantum measurements with pluggable collapse surfaces.

An entangled pair decays at a source; two detectors, possibly in relative
motion, measure at spacelike separation.  The simulator lets the state-vector
reduction propagate over a chosen hypersurface (instantaneous plane, tilted
spacelike plane, or backward light cone), reproduces the quantum statistics
that rule out fixed local probability assignments, and verifies mechanically
that only the backward light cone survives the frame-consistency test.
"""

from .collapse import (
    BACKWARD_LIGHT_CONE,
    INSTANTANEOUS,
    TILTED_PLANE,
    CollapsePolicy,
    CollapseSurface,
    arrival_on_worldline,
    blc_slope_limit,
    consistency_check,
    inconsistency_scan,
    max_consistent_arrival,
    reduction_point_on_branch,
)
from .errors import (
    ConfigError,
    GeometryError,
    ImpossibleOutcomeError,
    InfeasibleError,
    StateError,
    TimelineError,
)
from .kinematics import (
    Detector,
    SignalBranch,
    Worldline,
    lightlike_branch,
    position_at,
    proper_time_between,
    spacelike_measurements,
)
from .minkowski import Boost, Event, IntervalClass, boost, interval, inverse_boost, rapidity_from_beta
from .ordering import DecisionSchedule, decide_order, proper_times, sample_sharp_time
from .quantum import (
    Outcome,
    ProbabilityTable,
    StateVector,
    WaveFunctionTimeline,
    born_probabilities,
    build_timeline,
    chsh_value,
    collapse_state,
    conditional_probabilities,
    intermediate_state,
    lhv_constraints_check,
    singlet,
)
from .scenario import (
    EnsembleStats,
    ScenarioConfig,
    TrialLog,
    consistency_report,
    derive_source,
    dump_config,
    figure1,
    lightlike_preset,
    parse_config,
    run_ensemble,
    run_trial,
)

__version__ = "0.1.0"
