"""Two-spin state space: singlet, Born rule, collapse, and the epoch timeline.

Amplitudes live over the ordered product basis

    index 0: |->_B |+>_A      index 1: |+>_B |->_A
    index 2: |+>_B |+>_A      index 3: |->_B |->_A

(the B branch factor written first).  Spin-1/2 measurements along a unit axis
``n`` use the projectors (1 +- n.sigma)/2 on the measured tensor factor.
Collapsed states are renormalized and phase-canonicalized: the first
amplitude above 1e-12 in magnitude is made real and positive, so states that
differ only by a global phase compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ImpossibleOutcomeError, StateError, TimelineError
from .kinematics import Detector
from .minkowski import Boost, Event, boost

_NORM_TOL = 1e-9
_ZERO_TOL = 1e-12

# (b, a) -> flat index, with spin +1 encoded as 0 and -1 as 1 per factor.
_IDX = ((2, 1), (0, 3))

Axis = tuple[float, float, float]


def _phase_canonical(amps: np.ndarray) -> np.ndarray:
    for c in amps:
        if abs(c) > _ZERO_TOL:
            return amps * (c.conjugate() / abs(c))
    return amps


@dataclass(frozen=True)
class StateVector:
    """A normalized two-spin state in the declared product basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (4,):
            raise StateError(f"expected 4 amplitudes, got shape {amps.shape}")
        if abs(np.linalg.norm(amps) - 1.0) > _NORM_TOL:
            raise StateError(f"state is not normalized: |psi| = {np.linalg.norm(amps)}")
        object.__setattr__(self, "amplitudes", amps)

    def matrix(self) -> np.ndarray:
        """Amplitudes as a 2x2 array M[b, a] (spin +1 first per factor)."""
        m = np.empty((2, 2), dtype=complex)
        for b in range(2):
            for a in range(2):
                m[b, a] = self.amplitudes[_IDX[b][a]]
        return m

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(other.amplitudes, self.amplitudes))


@dataclass(frozen=True)
class Outcome:
    """One measurement alternative: detector label, axis choice, and sign.

    ``axis_index`` is 1-based within the detector's axis list; ``axis`` is the
    resolved unit vector so an outcome is self-contained.
    """

    detector: str
    axis_index: int
    sign: int
    axis: Axis

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +-1, got {self.sign}")
        if self.axis_index < 1:
            raise ValueError("axis_index is 1-based")


@dataclass(frozen=True)
class ProbabilityTable:
    """Normalized probabilities over a detector's measurement alternatives."""

    entries: dict[Outcome, float]

    def __post_init__(self):
        total = sum(self.entries.values())
        if any(p < -_ZERO_TOL or p > 1.0 + _ZERO_TOL for p in self.entries.values()):
            raise StateError("probabilities must lie in [0, 1]")
        if abs(total - 1.0) > _NORM_TOL:
            raise StateError(f"probability table sums to {total}, expected 1")

    def get(self, detector: str, axis_index: int, sign: int) -> float:
        for o, p in self.entries.items():
            if o.detector == detector and o.axis_index == axis_index and o.sign == sign:
                return p
        raise KeyError((detector, axis_index, sign))


def pauli_dot(axis: Axis) -> np.ndarray:
    nx, ny, nz = axis
    return np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]], dtype=complex)


def spin_projector(axis: Axis, sign: int) -> np.ndarray:
    """2x2 projector onto the +-1 eigenspace of the spin along ``axis``."""
    return 0.5 * (np.eye(2, dtype=complex) + sign * pauli_dot(axis))


def spin_eigenvector(axis: Axis, sign: int) -> np.ndarray:
    """Phase-canonical eigenvector of the spin along ``axis``."""
    p = spin_projector(axis, sign)
    col = 0 if p[0, 0].real >= 0.5 else 1
    v = p[:, col]
    return _phase_canonical(v / np.linalg.norm(v))


def operator_on_factor(m: np.ndarray, factor: str) -> np.ndarray:
    """Lift a 2x2 operator on one tensor factor ('A' or 'B') to the 4-space."""
    out = np.zeros((4, 4), dtype=complex)
    for b in range(2):
        for a in range(2):
            for bp in range(2):
                for ap in range(2):
                    if factor == "A":
                        val = m[ap, a] if bp == b else 0.0
                    else:
                        val = m[bp, b] if ap == a else 0.0
                    out[_IDX[bp][ap], _IDX[b][a]] = val
    return out


def singlet() -> StateVector:
    """The rotationally invariant two-spin state with amplitudes
    (1, -1, 0, 0)/sqrt(2) in the declared basis."""
    amps = np.array([1.0, -1.0, 0.0, 0.0], dtype=complex) / math.sqrt(2.0)
    return StateVector(amps)


def _table_for(psi: StateVector, d: Detector) -> ProbabilityTable:
    amps = psi.amplitudes
    entries: dict[Outcome, float] = {}
    for i, (axis, w) in enumerate(zip(d.axes, d.axis_weights), start=1):
        proj = operator_on_factor(spin_projector(axis, +1), d.id)
        p_plus = float(np.real(np.vdot(amps, proj @ amps)))
        p_plus = min(max(p_plus, 0.0), 1.0)
        entries[Outcome(d.id, i, +1, axis)] = w * p_plus
        entries[Outcome(d.id, i, -1, axis)] = w * (1.0 - p_plus)
    return ProbabilityTable(entries)


def born_probabilities(psi: StateVector, d: Detector) -> ProbabilityTable:
    """Pre-measurement probabilities for every (axis, sign) alternative of a
    detector: axis weight times the spin projector expectation."""
    if d.id not in ("A", "B"):
        raise ValueError(f"detector id must be 'A' or 'B', got {d.id!r}")
    return _table_for(psi, d)


def collapse_state(psi: StateVector, o: Outcome) -> StateVector:
    """Project onto the recorded alternative and renormalize.

    For a full projection of one factor the result is a product state across
    the branches, which is what lets the later measurement act locally.
    """
    proj = operator_on_factor(spin_projector(o.axis, o.sign), o.detector)
    w = proj @ psi.amplitudes
    p = float(np.real(np.vdot(w, w)))
    if p <= _ZERO_TOL:
        raise ImpossibleOutcomeError(f"outcome {o} has probability {p}")
    return StateVector(_phase_canonical(w / math.sqrt(p)))


def conditional_probabilities(psi_after: StateVector, d: Detector) -> ProbabilityTable:
    """Born table of the remaining detector against the collapsed state."""
    return born_probabilities(psi_after, d)


def _contract_a_factor(psi: StateVector, a_vec: np.ndarray) -> np.ndarray:
    """Partial inner product over the A factor: returns the 2-component
    B-branch vector <a|psi>, renormalized and phase-canonical."""
    contracted = psi.matrix() @ a_vec.conjugate()
    n = np.linalg.norm(contracted)
    if n <= _ZERO_TOL:
        raise ImpossibleOutcomeError("contraction with the A factor vanishes")
    return _phase_canonical(contracted / n)


def _contract_b_factor(psi: StateVector, b_vec: np.ndarray) -> np.ndarray:
    contracted = psi.matrix().T @ b_vec.conjugate()
    n = np.linalg.norm(contracted)
    if n <= _ZERO_TOL:
        raise ImpossibleOutcomeError("contraction with the B factor vanishes")
    return _phase_canonical(contracted / n)


def intermediate_state(psi: StateVector, k: Outcome) -> np.ndarray:
    """B-branch factor before the deciding surface reaches that branch.

    Contracts the two-spin state with the A-branch eigenvector named by ``k``
    and renormalizes: <a_k| psi, a 2-component B-factor.  For the singlet
    this is proportional to the eigenstate the B side will record.
    """
    if k.detector != "A":
        raise ValueError("the contraction outcome must name the A-branch factor")
    return _contract_a_factor(psi, spin_eigenvector(k.axis, k.sign))


def factor_product(psi: StateVector) -> tuple[np.ndarray, np.ndarray]:
    """Split a product state into (B factor, A factor), phase-canonical.

    Raises :class:`StateError` when the Schmidt rank exceeds one.
    """
    m = psi.matrix()
    u, s, vh = np.linalg.svd(m)
    if s[1] > _NORM_TOL:
        raise StateError(f"state is entangled (Schmidt values {s})")
    return _phase_canonical(u[:, 0]), _phase_canonical(vh[0, :])


def schmidt_values(psi: StateVector) -> np.ndarray:
    return np.linalg.svd(psi.matrix(), compute_uv=False)


def same_ray(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    """True when two normalized vectors agree up to a global phase."""
    return abs(abs(np.vdot(u, v)) - 1.0) <= tol


# ---------------------------------------------------------------------------
# Wave-function timeline


@dataclass(frozen=True)
class Epoch:
    """One piecewise regime of the timeline.

    Product epochs carry 2-component branch factors (``y`` toward B, ``x``
    toward A); the initial epoch carries the entangled 4-amplitude state.
    """

    name: str
    t_start: float | None
    t_end: float | None
    entangled: np.ndarray | None = None
    y_factor: np.ndarray | None = None
    x_factor: np.ndarray | None = None

    def amplitudes(self) -> np.ndarray:
        if self.entangled is not None:
            return self.entangled
        out = np.empty(4, dtype=complex)
        for b in range(2):
            for a in range(2):
                out[_IDX[b][a]] = self.y_factor[b] * self.x_factor[a]
        return out


@dataclass(frozen=True)
class WaveFunctionTimeline:
    """The four-epoch piecewise state history of one trial.

    Jumps occur at the surface crossing on the second branch, at the first
    decision, and at the second decision.  The boundaries are spacetime
    events, so other frames reorder their coordinate times without touching
    the epoch contents; the epoch sequence is fixed by the crossings.
    """

    first: str
    crossing: Event
    first_decision: Event
    second_decision: Event
    epochs: tuple[Epoch, Epoch, Epoch, Epoch]

    def boundaries(self) -> tuple[float, float, float]:
        return (self.crossing.t, self.first_decision.t, self.second_decision.t)

    def boundaries_in_frame(self, zeta: float) -> tuple[float, float, float]:
        b = Boost(zeta)
        return (
            boost(self.crossing, b).t,
            boost(self.first_decision, b).t,
            boost(self.second_decision, b).t,
        )

    def epoch_at(self, t: float) -> Epoch:
        """Epoch active at lab time t (boundaries belong to the later epoch)."""
        if t < self.crossing.t:
            return self.epochs[0]
        if t < self.first_decision.t:
            return self.epochs[1]
        if t < self.second_decision.t:
            return self.epochs[2]
        return self.epochs[3]

    def state_at(self, t: float) -> np.ndarray:
        return self.epoch_at(t).amplitudes()


def build_timeline(
    crossing: Event,
    first_decision: Event,
    second_decision: Event,
    outcome_first: Outcome,
    outcome_second: Outcome,
    psi0: StateVector | None = None,
) -> WaveFunctionTimeline:
    """Assemble the piecewise state history for one trial.

    ``outcome_first`` is the first decider's record (its surface cuts the
    other branch at ``crossing``); ``outcome_second`` the later one.  Epochs:
    entangled, then the second branch's factor collapsed with the first
    branch still holding the contraction ansatz, then both factors sharp,
    then the second decision applied.
    """
    psi0 = psi0 if psi0 is not None else singlet()
    if not crossing.t < first_decision.t < second_decision.t:
        raise TimelineError(
            "boundaries must be ordered crossing < first decision < second decision "
            f"(got {crossing.t}, {first_decision.t}, {second_decision.t})"
        )
    if {outcome_first.detector, outcome_second.detector} != {"A", "B"}:
        raise TimelineError("outcomes must name the two distinct detectors")

    after_first = collapse_state(psi0, outcome_first)
    y3, x3 = factor_product(after_first)
    after_second = collapse_state(after_first, outcome_second)
    y4, x4 = factor_product(after_second)

    if outcome_first.detector == "B":
        # B's surface cut the x branch: the x factor is sharp first.
        intermediate = _contract_a_factor(psi0, x3)
        e2 = Epoch("crossed", crossing.t, first_decision.t, y_factor=intermediate, x_factor=x3)
    else:
        intermediate = _contract_b_factor(psi0, y3)
        e2 = Epoch("crossed", crossing.t, first_decision.t, y_factor=y3, x_factor=intermediate)

    return WaveFunctionTimeline(
        first=outcome_first.detector,
        crossing=crossing,
        first_decision=first_decision,
        second_decision=second_decision,
        epochs=(
            Epoch("entangled", None, crossing.t, entangled=psi0.amplitudes),
            e2,
            Epoch("decided-first", first_decision.t, second_decision.t, y_factor=y3, x_factor=x3),
            Epoch("decided-both", second_decision.t, None, y_factor=y4, x_factor=x4),
        ),
    )


# ---------------------------------------------------------------------------
# Local-realism constraints and CHSH


@dataclass(frozen=True)
class LhvViolation:
    kind: str  # "product_nonzero" or "biconditional"
    detector: str
    axis_index: int
    values: tuple[float, float]


@dataclass(frozen=True)
class LhvReport:
    violations: tuple[LhvViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def lhv_constraints_check(table_a: ProbabilityTable, table_b: ProbabilityTable) -> LhvReport:
    """Check the constraints a fixed local probability assignment must obey
    when both detectors may pick the same axis.

    For every axis i: p_X(i,+) * p_X(i,-) must vanish for each detector, and
    p_A(i,s) = 0 exactly when p_B(i,-s) = 0.  Quantum singlet tables violate
    the product constraints for every axis.
    """
    axes_a = sorted({o.axis_index for o in table_a.entries})
    axes_b = sorted({o.axis_index for o in table_b.entries})
    if axes_a != axes_b:
        raise ValueError("probability tables must cover matching axis sets")
    violations: list[LhvViolation] = []
    for i in axes_a:
        for det, table in (("A", table_a), ("B", table_b)):
            p_plus = table.get(det, i, +1)
            p_minus = table.get(det, i, -1)
            if p_plus * p_minus > _ZERO_TOL:
                violations.append(LhvViolation("product_nonzero", det, i, (p_plus, p_minus)))
        for s in (+1, -1):
            pa = table_a.get("A", i, s)
            pb = table_b.get("B", i, -s)
            if (pa <= _ZERO_TOL) != (pb <= _ZERO_TOL):
                violations.append(LhvViolation("biconditional", "A/B", i, (pa, pb)))
    return LhvReport(tuple(violations))


def _dot(u: Axis, v: Axis) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


@dataclass(frozen=True)
class ChshResult:
    """Monte Carlo and analytic values of S = E(a,b) - E(a,b') + E(a',b) + E(a',b')."""

    estimate: float
    analytic: float
    trials: int
    correlators: tuple[tuple[float, float], tuple[float, float]]
    pair_counts: tuple[tuple[int, int], tuple[int, int]]

    @property
    def lhv_bound(self) -> float:
        return 2.0

    @property
    def violation_margin(self) -> float:
        return abs(self.estimate) - self.lhv_bound


# Axes for which the singlet's S reaches +2*sqrt(2): a along z, a' along x,
# b and b' at -+45 degrees in the (x, z) plane with b sign-flipped.
_S2 = math.sqrt(0.5)
OPTIMAL_CHSH_AXES: tuple[tuple[Axis, Axis], tuple[Axis, Axis]] = (
    ((0.0, 0.0, 1.0), (1.0, 0.0, 0.0)),
    ((-_S2, 0.0, -_S2), (-_S2, 0.0, _S2)),
)


def chsh_analytic(axes_a: tuple[Axis, Axis], axes_b: tuple[Axis, Axis]) -> float:
    """Closed-form S for the singlet, where E(a, b) = -a.b."""
    e = [[-_dot(a, b) for b in axes_b] for a in axes_a]
    return e[0][0] - e[0][1] + e[1][0] + e[1][1]


def chsh_value(
    axes_a: tuple[Axis, Axis],
    axes_b: tuple[Axis, Axis],
    trials: int,
    seed: int,
) -> ChshResult:
    """Estimate S by sequential sampling of singlet pairs.

    Each trial picks one axis per side uniformly, samples the first outcome
    from the Born table, collapses, and samples the second from the
    conditional table; correlators are conditioned on the axis pair.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    counts = kernels.sample_pair_counts(
        singlet().amplitudes,
        axes_a,
        (0.5, 0.5),
        axes_b,
        (0.5, 0.5),
        first_b=False,
        seed=seed,
        n_trials=trials,
    )
    correlators = [[0.0, 0.0], [0.0, 0.0]]
    pair_counts = [[0, 0], [0, 0]]
    for i in range(2):
        for j in range(2):
            n_pp = counts[i, 0, j, 0]
            n_pm = counts[i, 0, j, 1]
            n_mp = counts[i, 1, j, 0]
            n_mm = counts[i, 1, j, 1]
            n = n_pp + n_pm + n_mp + n_mm
            pair_counts[i][j] = int(n)
            correlators[i][j] = (n_pp + n_mm - n_pm - n_mp) / n if n else 0.0
    e = correlators
    estimate = e[0][0] - e[0][1] + e[1][0] + e[1][1]
    return ChshResult(
        estimate=estimate,
        analytic=chsh_analytic(axes_a, axes_b),
        trials=trials,
        correlators=tuple(tuple(row) for row in correlators),
        pair_counts=tuple(tuple(row) for row in pair_counts),
    )
