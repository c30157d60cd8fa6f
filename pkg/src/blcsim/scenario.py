"""Scenario assembly: configuration, source placement, trials, ensembles.

A scenario is two detectors, a common source in their timelike past, a
collapse policy, and run parameters.  ``run_trial`` produces the full event
chronology and wave-function timeline of a single decay; ``run_ensemble``
aggregates outcome statistics over many trials.  Everything is a pure
function of (config, seed): replays are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import kernels, ordering, quantum
from .collapse import (
    BACKWARD_LIGHT_CONE,
    INSTANTANEOUS,
    TILTED_PLANE,
    CollapsePolicy,
    CollapseSurface,
    ScanReport,
    consistency_check,
    inconsistency_scan,
    reduction_point_on_branch,
)
from .errors import ConfigError, GeometryError, InfeasibleError, TimelineError
from .kinematics import Detector, SignalBranch, Worldline, event_at_rest_time
from .minkowski import Boost, Event, boost, rapidity_from_beta
from .quantum import Outcome, WaveFunctionTimeline, build_timeline, singlet
from .rng import LANE_ORDER, LANE_TBAR_A, LANE_TBAR_B, stream_state

EXPLICIT = "explicit"
DERIVED = "derived"
LIGHTLIKE_SOURCE = "lightlike"


@dataclass(frozen=True)
class SourceSpec:
    """How the common source event is placed.

    ``explicit`` pins coordinates; ``derived`` solves for the event whose
    branch proper times hit the targets; ``lightlike`` is the zero-target
    special case, putting the source on both backward light cones of the
    window-start events (the finite response margins then keep every
    decision surface clear of the source).
    """

    mode: str = DERIVED
    event: Event | None = None
    tau_a: float | None = None
    tau_b: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    source: SourceSpec
    detector_a: Detector
    detector_b: Detector
    policy: CollapsePolicy
    trials: int = 1
    seed: int = 0
    report_frames: tuple[float, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1", key="trials")
        if self.detector_a.id != "A" or self.detector_b.id != "B":
            raise ConfigError("detectors must be labeled A and B")


# ---------------------------------------------------------------------------
# Source placement


def derive_source(a1: Event, b2: Event, tau_a: float, tau_b: float) -> Event:
    """Source event whose branch proper times to ``a1`` and ``b2`` equal the
    targets, constrained to the x2 = x3 = 0 plane.

    The difference of the two hyperbola constraints is linear in (t, x1), so
    the system reduces to one quadratic; of the feasible roots (emission
    strictly before both arrivals, residuals below 1e-9) the latest emission
    wins.
    """
    if tau_a < 0.0 or tau_b < 0.0:
        raise ValueError("proper-time targets must be nonnegative")
    c1 = a1.x2 * a1.x2 + a1.x3 * a1.x3
    c2 = b2.x2 * b2.x2 + b2.x3 * b2.x3
    lt = -2.0 * (a1.t - b2.t)
    lx = 2.0 * (a1.x1 - b2.x1)
    rhs = (
        (tau_a * tau_a - tau_b * tau_b)
        + (c1 - c2)
        + (a1.x1 * a1.x1 - b2.x1 * b2.x1)
        - (a1.t * a1.t - b2.t * b2.t)
    )
    if abs(lt) < 1e-12 and abs(lx) < 1e-12:
        raise InfeasibleError("arrival events coincide; source placement is underdetermined")

    candidates: list[tuple[float, float]] = []
    if abs(lx) >= abs(lt):
        # x = alpha + beta*t substituted into the first constraint.
        alpha = rhs / lx
        beta = -lt / lx
        qa = 1.0 - beta * beta
        qb = -2.0 * a1.t - 2.0 * beta * (alpha - a1.x1)
        qc = a1.t * a1.t - (alpha - a1.x1) ** 2 - c1 - tau_a * tau_a
        for t in _quadratic_roots(qa, qb, qc):
            candidates.append((t, alpha + beta * t))
    else:
        alpha = rhs / lt
        beta = -lx / lt
        qa = beta * beta - 1.0
        qb = 2.0 * beta * (alpha - a1.t) + 2.0 * a1.x1
        qc = (alpha - a1.t) ** 2 - a1.x1 * a1.x1 - c1 - tau_a * tau_a
        for x in _quadratic_roots(qa, qb, qc):
            candidates.append((alpha + beta * x, x))

    best: Event | None = None
    for t, x in candidates:
        if not (t < a1.t and t < b2.t):
            continue
        s = Event(t, x)
        r1 = (s.t - a1.t) ** 2 - (s.x1 - a1.x1) ** 2 - c1 - tau_a * tau_a
        r2 = (s.t - b2.t) ** 2 - (s.x1 - b2.x1) ** 2 - c2 - tau_b * tau_b
        if abs(r1) > 1e-9 or abs(r2) > 1e-9:
            continue
        if best is None or s.t > best.t:
            best = s
    if best is None:
        raise InfeasibleError(
            f"no source satisfies tau targets ({tau_a}, {tau_b}) before both arrivals"
        )
    return best


def _quadratic_roots(a: float, b: float, c: float) -> list[float]:
    if abs(a) < 1e-14:
        return [] if abs(b) < 1e-14 else [-c / b]
    disc = b * b - 4.0 * a * c
    if disc <= 0.0:
        # Collinear arrangements put the source at a tangency of the two
        # constraint hyperbolas (an exact double root), which rounding can
        # push to disc < 0.  Offer the vertex; the caller's residual check
        # accepts the tangency and rejects genuine near-misses.
        return [-b / (2.0 * a)]
    sq = math.sqrt(disc)
    return [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]


# ---------------------------------------------------------------------------
# Nominal geometry (jitter-free), shared by trials, diagrams, and reports


@dataclass(frozen=True)
class Geometry:
    source: Event
    arrival_a: Event
    arrival_b: Event
    branch_a: SignalBranch
    branch_b: SignalBranch
    tau_a: float
    tau_b: float


@lru_cache(maxsize=64)
def nominal_geometry(cfg: ScenarioConfig) -> Geometry:
    arrival_a = cfg.detector_a.window_start_event()
    arrival_b = cfg.detector_b.window_start_event()
    spec = cfg.source
    if spec.mode == EXPLICIT:
        source = spec.event
    elif spec.mode == DERIVED:
        source = derive_source(arrival_a, arrival_b, spec.tau_a, spec.tau_b)
    elif spec.mode == LIGHTLIKE_SOURCE:
        source = derive_source(arrival_a, arrival_b, 0.0, 0.0)
    else:
        raise ConfigError(f"unknown source mode {spec.mode!r}", key="mode")
    branch_a = SignalBranch(source, arrival_a, "S->A1")
    branch_b = SignalBranch(source, arrival_b, "S->B2")
    tau_a, tau_b = ordering.proper_times(source, arrival_a, arrival_b)
    return Geometry(source, arrival_a, arrival_b, branch_a, branch_b, tau_a, tau_b)


# ---------------------------------------------------------------------------
# Trial execution


@dataclass(frozen=True)
class Record:
    kind: str
    event: Event | None
    frame: str
    detail: str

    def line(self) -> str:
        if self.event is None:
            coords = ("-", "-", "-", "-")
        else:
            e = self.event
            coords = tuple(f"{v:.9g}" for v in (e.t, e.x1, e.x2, e.x3))
        return "\t".join((self.kind, *coords, self.frame, self.detail))


@dataclass(frozen=True)
class TrialLog:
    """Chronology and state history of one trial.

    ``records`` are ordered by lab time (header first, verdict last), with
    per-frame re-expressions appended after the lab block.  ``reduction_sb``
    is where B's surface cuts the branch toward A, ``reduction_sa`` where A's
    surface cuts the branch toward B; the first decider's one is the physical
    reduction point, the other is inert (the state is already a product).
    """

    trial_index: int
    first: str
    outcome_a: Outcome
    outcome_b: Outcome
    schedule: ordering.DecisionSchedule
    consistent: bool
    reduction_sb: Event | None
    reduction_sa: Event | None
    timeline: WaveFunctionTimeline | None
    records: tuple[Record, ...]

    def lines(self) -> list[str]:
        return [r.line() for r in self.records]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _fmt_sign(s: int) -> str:
    return f"{s:+d}"


def run_trial(cfg: ScenarioConfig, trial_index: int) -> TrialLog:
    """Execute one decay: place the source, order the decisions by proper
    time, sample both outcomes sequentially, locate the reduction points,
    and assemble the timeline plus the consistency verdict."""
    g = nominal_geometry(cfg)
    det_a, det_b = cfg.detector_a, cfg.detector_b

    tbar_a = ordering.sample_sharp_time(det_a, stream_state(cfg.seed, trial_index, LANE_TBAR_A))
    tbar_b = ordering.sample_sharp_time(det_b, stream_state(cfg.seed, trial_index, LANE_TBAR_B))
    decision_a = event_at_rest_time(det_a.worldline, tbar_a)
    decision_b = event_at_rest_time(det_b.worldline, tbar_b)

    schedule = ordering.decide_order(
        g.tau_a,
        g.tau_b,
        det_a.dt_window,
        det_b.dt_window,
        stream_state(cfg.seed, trial_index, LANE_ORDER),
        tbar_a=tbar_a,
        tbar_b=tbar_b,
    )
    first_b = schedule.first == "B"

    ia, sa, ib, sb = kernels.sample_pair(
        singlet().amplitudes,
        det_a.axes,
        det_a.axis_weights,
        det_b.axes,
        det_b.axis_weights,
        first_b=first_b,
        seed=cfg.seed,
        trial=trial_index,
    )
    outcome_a = Outcome("A", ia + 1, sa, det_a.axes[ia])
    outcome_b = Outcome("B", ib + 1, sb, det_b.axes[ib])

    surface_a = CollapseSurface(decision_a, cfg.policy, decider_zeta=det_a.zeta)
    surface_b = CollapseSurface(decision_b, cfg.policy, decider_zeta=det_b.zeta)
    reduction_sb = _try_reduction(surface_b, g.branch_a)
    reduction_sa = _try_reduction(surface_a, g.branch_b)

    check = _consistency_in_a_frame(decision_a, decision_b, cfg.policy, det_a.zeta, det_b.zeta)

    outcome_first, outcome_second = (outcome_b, outcome_a) if first_b else (outcome_a, outcome_b)
    first_decision, second_decision = (
        (decision_b, decision_a) if first_b else (decision_a, decision_b)
    )
    crossing = reduction_sb if first_b else reduction_sa
    timeline: WaveFunctionTimeline | None = None
    if crossing is not None:
        try:
            timeline = build_timeline(
                crossing, first_decision, second_decision, outcome_first, outcome_second
            )
        except TimelineError:
            timeline = None

    records = _build_records(
        cfg, g, trial_index, schedule, decision_a, decision_b,
        outcome_a, outcome_b, reduction_sb, reduction_sa, check.consistent,
    )
    return TrialLog(
        trial_index=trial_index,
        first=schedule.first,
        outcome_a=outcome_a,
        outcome_b=outcome_b,
        schedule=schedule,
        consistent=check.consistent,
        reduction_sb=reduction_sb,
        reduction_sa=reduction_sa,
        timeline=timeline,
        records=tuple(records),
    )


def _try_reduction(surface: CollapseSurface, branch: SignalBranch) -> Event | None:
    try:
        return reduction_point_on_branch(surface, branch)
    except GeometryError:
        return None


def _consistency_in_a_frame(decision_a, decision_b, policy, zeta_a, zeta_b):
    """Reduce to the canonical check frame: A at rest, B at the relative
    rapidity.  Worldlines through the origin stay through the origin."""
    if zeta_a != 0.0:
        frame = Boost(zeta_a)
        decision_a = boost(decision_a, frame)
        decision_b = boost(decision_b, frame)
    return consistency_check(decision_a, decision_b, policy, zeta_b - zeta_a)


def _build_records(
    cfg, g, trial_index, schedule, decision_a, decision_b,
    outcome_a, outcome_b, reduction_sb, reduction_sa, consistent,
) -> list[Record]:
    det_a, det_b = cfg.detector_a, cfg.detector_b
    header = Record(
        "trial",
        None,
        "lab",
        f"index={trial_index} policy={cfg.policy.kind} first={schedule.first}",
    )
    events: list[Record] = [Record("emission", g.source, "lab", "S")]
    if reduction_sb is not None:
        events.append(Record("reduction", reduction_sb, "lab", "SB branch=S->A1 surface=B2"))
    if reduction_sa is not None:
        events.append(Record("reduction", reduction_sa, "lab", "SA branch=S->B2 surface=A1"))
    events.append(Record("arrival", g.arrival_a, "lab", "A1"))
    events.append(Record("arrival", g.arrival_b, "lab", "B2"))
    events.append(
        Record(
            "decision",
            decision_a,
            "lab",
            f"A1 outcome={_fmt_sign(outcome_a.sign)} axis={outcome_a.axis_index}",
        )
    )
    events.append(
        Record(
            "decision",
            decision_b,
            "lab",
            f"B2 outcome={_fmt_sign(outcome_b.sign)} axis={outcome_b.axis_index}",
        )
    )
    events.append(Record("detection", det_a.window_end_event(), "lab", "A1 window-end"))
    events.append(Record("detection", det_b.window_end_event(), "lab", "B2 window-end"))
    events.sort(key=lambda r: r.event.t)

    records = [header, *events]
    for zeta in cfg.report_frames:
        frame = Boost(zeta)
        label = f"zeta={zeta:.9g}"
        records.extend(
            Record(r.kind, boost(r.event, frame), label, r.detail) for r in events
        )
    records.append(
        Record("verdict", None, "lab", "consistent" if consistent else "inconsistent")
    )
    return records


# ---------------------------------------------------------------------------
# Ensembles


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregated outcome statistics for one scenario.

    ``counts[ia, sa, ib, sb]`` indexes 0-based axis choices and (+1, -1)
    signs; correlators are conditioned per axis pair.  The CHSH combination
    E(a1,b1) - E(a1,b2) + E(a2,b1) + E(a2,b2) is reported when both
    detectors run a two-axis design.
    """

    trials: int
    seed: int
    axes_a: tuple[tuple[float, float, float], ...]
    axes_b: tuple[tuple[float, float, float], ...]
    counts: np.ndarray
    lhv: quantum.LhvReport
    chsh_estimate: float | None
    chsh_analytic: float | None

    def marginal(self, detector: str, axis_index: int, sign: int) -> float:
        s = 0 if sign > 0 else 1
        i = axis_index - 1
        if detector == "A":
            return float(self.counts[i, s, :, :].sum()) / self.trials
        return float(self.counts[:, :, i, s].sum()) / self.trials

    def correlator(self, i: int, j: int) -> float:
        c = self.counts
        n_pp = c[i, 0, j, 0]
        n_pm = c[i, 0, j, 1]
        n_mp = c[i, 1, j, 0]
        n_mm = c[i, 1, j, 1]
        n = n_pp + n_pm + n_mp + n_mm
        return float(n_pp + n_mm - n_pm - n_mp) / float(n) if n else 0.0

    def same_sign_count(self) -> int:
        c = self.counts
        return int(c[:, 0, :, 0].sum() + c[:, 1, :, 1].sum())

    def text(self) -> str:
        out = ["[meta]", f"trials\t{self.trials}", f"seed\t{self.seed}"]
        out.append("[counts]")
        for i in range(len(self.axes_a)):
            for s_i, s in enumerate((1, -1)):
                for j in range(len(self.axes_b)):
                    for t_i, t in enumerate((1, -1)):
                        out.append(
                            f"A axis={i + 1} sign={_fmt_sign(s)}\t"
                            f"B axis={j + 1} sign={_fmt_sign(t)}\t"
                            f"{int(self.counts[i, s_i, j, t_i])}"
                        )
        out.append("[marginals]")
        for det, axes in (("A", self.axes_a), ("B", self.axes_b)):
            for i in range(len(axes)):
                for s in (1, -1):
                    out.append(
                        f"{det} axis={i + 1} sign={_fmt_sign(s)}\t"
                        f"{self.marginal(det, i + 1, s):.9g}"
                    )
        out.append("[correlators]")
        for i in range(len(self.axes_a)):
            for j in range(len(self.axes_b)):
                out.append(f"E[{i + 1},{j + 1}]\t{self.correlator(i, j):.9g}")
        out.append("[chsh]")
        if self.chsh_estimate is not None:
            out.append(f"estimate\t{self.chsh_estimate:.9g}")
            out.append(f"analytic\t{self.chsh_analytic:.9g}")
        else:
            out.append("not-applicable\taxis sets do not form a 2x2 design")
        out.append("[lhv]")
        if self.lhv.violations:
            for v in self.lhv.violations:
                out.append(
                    f"violation\t{v.kind}\t{v.detector}\taxis={v.axis_index}\t"
                    f"{v.values[0]:.9g}\t{v.values[1]:.9g}"
                )
        else:
            out.append("no-violations")
        return "\n".join(out) + "\n"


def run_ensemble(cfg: ScenarioConfig, force_first: str | None = None) -> EnsembleStats:
    """Aggregate ``cfg.trials`` samples into outcome statistics.

    Per-trial randomness is counter-based, so results are independent of
    batching or evaluation order.  ``force_first`` overrides the proper-time
    ordering (testing hook for the order-independence property).
    """
    g = nominal_geometry(cfg)
    det_a, det_b = cfg.detector_a, cfg.detector_b
    psi = singlet().amplitudes

    if force_first is not None:
        firsts = force_first
    else:
        overlap = abs(g.tau_a - g.tau_b) <= det_a.dt_window + det_b.dt_window
        if not overlap:
            firsts = "A" if g.tau_a < g.tau_b else "B"
        else:
            firsts = None  # per-trial draw below

    if isinstance(firsts, str):
        counts = kernels.sample_pair_counts(
            psi,
            det_a.axes,
            det_a.axis_weights,
            det_b.axes,
            det_b.axis_weights,
            first_b=(firsts == "B"),
            seed=cfg.seed,
            n_trials=cfg.trials,
        )
    else:
        counts = np.zeros((len(det_a.axes), 2, len(det_b.axes), 2), dtype=np.int64)
        for k in range(cfg.trials):
            schedule = ordering.decide_order(
                g.tau_a,
                g.tau_b,
                det_a.dt_window,
                det_b.dt_window,
                stream_state(cfg.seed, k, LANE_ORDER),
            )
            ia, sa, ib, sb = kernels.sample_pair(
                psi,
                det_a.axes,
                det_a.axis_weights,
                det_b.axes,
                det_b.axis_weights,
                first_b=schedule.first == "B",
                seed=cfg.seed,
                trial=k,
            )
            counts[ia, 0 if sa > 0 else 1, ib, 0 if sb > 0 else 1] += 1

    lhv = quantum.lhv_constraints_check(
        quantum.born_probabilities(singlet(), det_a),
        quantum.born_probabilities(singlet(), det_b),
    )

    chsh_estimate = chsh_analytic = None
    if len(det_a.axes) == 2 and len(det_b.axes) == 2:
        e = [[0.0, 0.0], [0.0, 0.0]]
        for i in range(2):
            for j in range(2):
                n_pp = counts[i, 0, j, 0]
                n_pm = counts[i, 0, j, 1]
                n_mp = counts[i, 1, j, 0]
                n_mm = counts[i, 1, j, 1]
                n = n_pp + n_pm + n_mp + n_mm
                e[i][j] = float(n_pp + n_mm - n_pm - n_mp) / float(n) if n else 0.0
        chsh_estimate = e[0][0] - e[0][1] + e[1][0] + e[1][1]
        chsh_analytic = quantum.chsh_analytic(det_a.axes, det_b.axes)

    return EnsembleStats(
        trials=cfg.trials,
        seed=cfg.seed,
        axes_a=det_a.axes,
        axes_b=det_b.axes,
        counts=counts,
        lhv=lhv,
        chsh_estimate=chsh_estimate,
        chsh_analytic=chsh_analytic,
    )


# ---------------------------------------------------------------------------
# Consistency report


@dataclass(frozen=True)
class ConsistencyReport:
    scans: tuple[tuple[str, ScanReport], ...]

    @property
    def blc_only(self) -> bool:
        """True when the light-cone policy is clean over the grid and every
        plane policy scanned has at least one violation."""
        ok = True
        for label, scan in self.scans:
            if scan.policy.kind == BACKWARD_LIGHT_CONE:
                ok = ok and scan.all_consistent
            else:
                ok = ok and not scan.all_consistent
        return ok

    def text(self) -> str:
        out = []
        for label, scan in self.scans:
            bad = scan.inconsistent_cells
            out.append(f"[policy {label}]")
            out.append(f"cells\t{len(scan.cells)}")
            out.append(f"inconsistent\t{len(bad)}")
            if bad:
                out.append(f"first-violation-zeta\t{scan.first_violation_zeta:.9g}")
            for z in scan.zetas:
                row = "".join(
                    "+" if c.consistent else "-" for c in scan.cells if c.zeta == z
                )
                out.append(f"zeta={z:.9g}\t{row}")
        verdict = "CONFIRMED" if self.blc_only else "REFUTED"
        out.append(
            "summary\tbackward light cone is the only consistent policy "
            f"over this grid: {verdict}"
        )
        return "\n".join(out) + "\n"


def consistency_report(
    cfg: ScenarioConfig,
    zeta_grid: tuple[float, ...] | list[float],
    time_grid: tuple[float, ...] | list[float],
) -> ConsistencyReport:
    """Scan the instantaneous plane, a tilted plane, and the backward light
    cone over the grids (the tilted slope follows the config when it uses
    one, else 0.9)."""
    slope = cfg.policy.slope if cfg.policy.kind == TILTED_PLANE else 0.9
    policies = (
        ("instantaneous", CollapsePolicy(INSTANTANEOUS)),
        (f"tilted_plane:{slope:g}", CollapsePolicy(TILTED_PLANE, slope)),
        ("backward_light_cone", CollapsePolicy(BACKWARD_LIGHT_CONE)),
    )
    scans = tuple(
        (label, inconsistency_scan(policy, tuple(zeta_grid), tuple(time_grid)))
        for label, policy in policies
    )
    return ConsistencyReport(scans)


# ---------------------------------------------------------------------------
# Configuration parsing

_SECTIONS = ("source", "detector.A", "detector.B", "policy", "run")

_SCHEMA: dict[str, dict[str, dict]] = {
    "source": {
        "mode": {"type": "enum", "values": [EXPLICIT, DERIVED, LIGHTLIKE_SOURCE], "default": DERIVED},
        "t": {"type": "float", "default": None},
        "x1": {"type": "float", "default": None},
        "x2": {"type": "float", "default": 0.0},
        "x3": {"type": "float", "default": 0.0},
        "tau_a": {"type": "float", "default": None},
        "tau_b": {"type": "float", "default": None},
    },
    "detector.A": {
        "zeta": {"type": "float", "default": None},
        "beta": {"type": "float", "default": None},
        "offsets": {"type": "float-pair", "default": (0.0, 0.0)},
        "window_start": {"type": "float", "default": None, "required": True},
        "window_length": {"type": "float", "default": 0.002},
        "pre_decision": {"type": "float", "default": None},
        "jitter": {"type": "float", "default": 1.0},
        "axes": {"type": "axes", "default": ((0.0, 0.0, 1.0),)},
        "axis_weights": {"type": "float-list", "default": None},
    },
    "policy": {
        "kind": {
            "type": "enum",
            "values": [INSTANTANEOUS, TILTED_PLANE, BACKWARD_LIGHT_CONE],
            "default": BACKWARD_LIGHT_CONE,
        },
        "slope": {"type": "float", "default": 0.0},
    },
    "run": {
        "trials": {"type": "int", "default": 1},
        "seed": {"type": "int", "default": 0},
        "report_frames": {"type": "float-list", "default": ()},
    },
}
_SCHEMA["detector.B"] = _SCHEMA["detector.A"]


def config_schema() -> dict:
    """Machine-readable description of the config format (sections, keys,
    types, defaults)."""
    schema = {}
    for section in _SECTIONS:
        schema[section] = {
            key: {k: v for k, v in spec.items() if k != "required"}
            for key, spec in _SCHEMA[section].items()
        }
    return schema


def _parse_float(raw: str, key: str, line: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"expected a number, got {raw!r}", key=key, line=line) from None
    if not math.isfinite(v):
        raise ConfigError("value must be finite", key=key, line=line)
    return v


def _parse_axes(raw: str, key: str, line: int) -> tuple[tuple[float, float, float], ...]:
    axes = []
    for chunk in raw.split(";"):
        parts = [p for p in chunk.split(",")]
        if len(parts) != 3:
            raise ConfigError(
                f"each axis needs 3 comma-separated components, got {chunk.strip()!r}",
                key=key,
                line=line,
            )
        vec = tuple(_parse_float(p, key, line) for p in parts)
        norm = math.sqrt(sum(v * v for v in vec))
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"axis {vec} is not a unit vector", key=key, line=line)
        axes.append(vec)
    return tuple(axes)


def parse_config(text: str) -> ScenarioConfig:
    """Parse the line-oriented config format.

    Sections [source], [detector.A], [detector.B], [policy], [run] hold
    ``key = value`` pairs; ``#`` starts a comment; axes are semicolon-
    separated unit 3-vectors.  Unknown sections or keys are rejected, and
    errors carry the line number (syntax) or key name (semantics).
    """
    values: dict[str, dict[str, tuple[str, int]]] = {s: {} for s in _SECTIONS}
    section: str | None = None
    seen_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        seen_any = True
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("unterminated section header", line=lineno)
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", line=lineno)
            section = name
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        if section is None:
            raise ConfigError("key outside any section", line=lineno)
        key, _, raw_value = line.partition("=")
        key = key.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key in [{section}]", key=key, line=lineno)
        if key in values[section]:
            raise ConfigError(f"duplicate key in [{section}]", key=key, line=lineno)
        values[section][key] = (raw_value.strip(), lineno)
    if not seen_any:
        raise ConfigError("empty configuration", line=1)

    source = _build_source(values["source"])
    det_a = _build_detector("A", values["detector.A"])
    det_b = _build_detector("B", values["detector.B"])
    policy = _build_policy(values["policy"])
    run = values["run"]
    trials = _get_int(run, "trials", 1)
    seed = _get_int(run, "seed", 0)
    frames_raw = run.get("report_frames")
    report_frames: tuple[float, ...] = ()
    if frames_raw is not None and frames_raw[0]:
        report_frames = tuple(
            _parse_float(p, "report_frames", frames_raw[1]) for p in frames_raw[0].split(",")
        )
    return ScenarioConfig(
        source=source,
        detector_a=det_a,
        detector_b=det_b,
        policy=policy,
        trials=trials,
        seed=seed,
        report_frames=report_frames,
    )


def _get_int(section: dict, key: str, default: int) -> int:
    if key not in section:
        return default
    raw, line = section[key]
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}", key=key, line=line) from None


def _build_source(vals: dict) -> SourceSpec:
    mode = vals.get("mode", (DERIVED, 0))[0]
    if mode == EXPLICIT:
        for key in ("t", "x1"):
            if key not in vals:
                raise ConfigError("explicit source needs 't' and 'x1'", key=key)
        event = Event(
            _parse_float(vals["t"][0], "t", vals["t"][1]),
            _parse_float(vals["x1"][0], "x1", vals["x1"][1]),
            _parse_float(vals["x2"][0], "x2", vals["x2"][1]) if "x2" in vals else 0.0,
            _parse_float(vals["x3"][0], "x3", vals["x3"][1]) if "x3" in vals else 0.0,
        )
        return SourceSpec(mode=EXPLICIT, event=event)
    if mode == DERIVED:
        for key in ("tau_a", "tau_b"):
            if key not in vals:
                raise ConfigError("derived source needs 'tau_a' and 'tau_b'", key=key)
        return SourceSpec(
            mode=DERIVED,
            tau_a=_parse_float(vals["tau_a"][0], "tau_a", vals["tau_a"][1]),
            tau_b=_parse_float(vals["tau_b"][0], "tau_b", vals["tau_b"][1]),
        )
    if mode == LIGHTLIKE_SOURCE:
        return SourceSpec(mode=LIGHTLIKE_SOURCE, tau_a=0.0, tau_b=0.0)
    raise ConfigError(f"unknown source mode {mode!r}", key="mode")


def _build_detector(label: str, vals: dict) -> Detector:
    if "zeta" in vals and "beta" in vals:
        raise ConfigError("give either zeta or beta, not both", key="beta")
    if "zeta" in vals:
        zeta = _parse_float(vals["zeta"][0], "zeta", vals["zeta"][1])
    elif "beta" in vals:
        beta = _parse_float(vals["beta"][0], "beta", vals["beta"][1])
        try:
            zeta = rapidity_from_beta(beta)
        except ValueError as exc:
            raise ConfigError(str(exc), key="beta", line=vals["beta"][1]) from None
    else:
        zeta = 0.0
    offsets = (0.0, 0.0)
    if "offsets" in vals:
        raw, line = vals["offsets"]
        parts = raw.split(",")
        if len(parts) != 2:
            raise ConfigError("offsets must be two comma-separated numbers", key="offsets", line=line)
        offsets = tuple(_parse_float(p, "offsets", line) for p in parts)
    if "window_start" not in vals:
        raise ConfigError(f"detector {label} needs window_start", key="window_start")
    window_start = _parse_float(vals["window_start"][0], "window_start", vals["window_start"][1])
    window_length = (
        _parse_float(vals["window_length"][0], "window_length", vals["window_length"][1])
        if "window_length" in vals
        else 0.002
    )
    pre_decision = (
        _parse_float(vals["pre_decision"][0], "pre_decision", vals["pre_decision"][1])
        if "pre_decision" in vals
        else 0.5 * window_length
    )
    jitter = (
        _parse_float(vals["jitter"][0], "jitter", vals["jitter"][1]) if "jitter" in vals else 1.0
    )
    axes = (
        _parse_axes(vals["axes"][0], "axes", vals["axes"][1])
        if "axes" in vals
        else ((0.0, 0.0, 1.0),)
    )
    if "axis_weights" in vals:
        raw, line = vals["axis_weights"]
        weights = tuple(_parse_float(p, "axis_weights", line) for p in raw.split(","))
    else:
        weights = tuple(1.0 / len(axes) for _ in axes)
    try:
        return Detector(
            id=label,
            worldline=Worldline(zeta, offsets),
            t_start=window_start,
            dt_window=window_length,
            pre_decision=pre_decision,
            axes=axes,
            axis_weights=weights,
            jitter=jitter,
        )
    except ValueError as exc:
        raise ConfigError(str(exc), key=f"detector.{label}") from None


def _build_policy(vals: dict) -> CollapsePolicy:
    kind = vals.get("kind", (BACKWARD_LIGHT_CONE, 0))[0]
    slope = _parse_float(vals["slope"][0], "slope", vals["slope"][1]) if "slope" in vals else 0.0
    try:
        return CollapsePolicy(kind, slope)
    except ValueError as exc:
        raise ConfigError(str(exc), key="kind") from None


def dump_config(cfg: ScenarioConfig) -> str:
    """Normalized echo of a config with every default made explicit."""
    out = ["[source]", f"mode = {cfg.source.mode}"]
    if cfg.source.mode == EXPLICIT:
        e = cfg.source.event
        out += [f"t = {e.t:.9g}", f"x1 = {e.x1:.9g}", f"x2 = {e.x2:.9g}", f"x3 = {e.x3:.9g}"]
    else:
        out += [f"tau_a = {cfg.source.tau_a:.9g}", f"tau_b = {cfg.source.tau_b:.9g}"]
    for det in (cfg.detector_a, cfg.detector_b):
        out.append(f"[detector.{det.id}]")
        out.append(f"zeta = {det.zeta:.9g}")
        out.append(f"offsets = {det.worldline.offsets[0]:.9g}, {det.worldline.offsets[1]:.9g}")
        out.append(f"window_start = {det.t_start:.9g}")
        out.append(f"window_length = {det.dt_window:.9g}")
        out.append(f"pre_decision = {det.pre_decision:.9g}")
        out.append(f"jitter = {det.jitter:.9g}")
        out.append("axes = " + " ; ".join(f"{a[0]:.9g},{a[1]:.9g},{a[2]:.9g}" for a in det.axes))
        out.append("axis_weights = " + ", ".join(f"{w:.9g}" for w in det.axis_weights))
    out.append("[policy]")
    out.append(f"kind = {cfg.policy.kind}")
    if cfg.policy.kind == TILTED_PLANE:
        out.append(f"slope = {cfg.policy.slope:.9g}")
    out.append("[run]")
    out.append(f"trials = {cfg.trials}")
    out.append(f"seed = {cfg.seed}")
    if cfg.report_frames:
        out.append("report_frames = " + ", ".join(f"{z:.9g}" for z in cfg.report_frames))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Shipped presets


FIGURE1_TEXT = """\
# Reference scenario: detector A at rest, detector B approaching at
# rapidity 0.5; both signal arrivals pinned so that the A-frame and B-frame
# decision times read (-1.000, -1.052) and (-1.128, -0.933).
[source]
mode = derived
tau_a = 0.8
tau_b = 0.664

[detector.A]
zeta = 0.0
window_start = -1.0
window_length = 0.002
pre_decision = 0.001
jitter = 0.0
axes = 0,0,1

[detector.B]
zeta = 0.5
window_start = -0.933
window_length = 0.002
pre_decision = 0.001
jitter = 0.0
axes = 0,0,1

[policy]
kind = backward_light_cone

[run]
trials = 1
seed = 7
report_frames = 0.5
"""

LIGHTLIKE_TEXT = """\
# Lightlike-signal variant: the source sits on the backward light cones of
# both window-start events, and the finite response times keep the decision
# surfaces clear of the source.
[source]
mode = lightlike

[detector.A]
zeta = 0.0
window_start = -1.0
window_length = 0.002
pre_decision = 0.001
jitter = 0.0
axes = 0,0,1

[detector.B]
zeta = 0.5
window_start = -0.933
window_length = 0.002
pre_decision = 0.001
jitter = 0.0
axes = 0,0,1

[policy]
kind = backward_light_cone

[run]
trials = 1
seed = 7
"""


def figure1(**overrides) -> ScenarioConfig:
    """The reference two-detector scenario (rapidity 0.5, approaching)."""
    cfg = parse_config(FIGURE1_TEXT)
    return replace(cfg, **overrides) if overrides else cfg


def lightlike_preset(**overrides) -> ScenarioConfig:
    cfg = parse_config(LIGHTLIKE_TEXT)
    return replace(cfg, **overrides) if overrides else cfg
