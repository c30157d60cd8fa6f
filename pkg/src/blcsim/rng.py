"""Counter-based deterministic random streams.

Every stochastic choice in the simulator draws from a SplitMix64 stream whose
state is derived from ``(root_seed, trial_index, lane)``.  Streams for
different trials or lanes are independent, so ensembles are reproducible and
order-independent under parallel evaluation.  The compiled sampling kernel
implements the identical arithmetic on ``uint64``; outputs must match this
module bit for bit.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53

# Lane assignments, fixed for the life of the on-disk log format.
LANE_QUANTUM = 0
LANE_ORDER = 1
LANE_TBAR_A = 2
LANE_TBAR_B = 3


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit word."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_state(seed: int, trial: int, lane: int) -> int:
    """Initial stream state for one (trial, lane) pair under a root seed."""
    z = mix64((seed & _MASK) + _GOLDEN * ((trial & _MASK) + 1))
    return mix64(z + _GOLDEN * ((lane & _MASK) + 1))


class Stream:
    """A single SplitMix64 sequence; advance with the golden-ratio increment."""

    __slots__ = ("state",)

    def __init__(self, seed: int, trial: int = 0, lane: int = 0):
        self.state = stream_state(seed, trial, lane)

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return mix64(self.state)

    def next_double(self) -> float:
        """Uniform draw in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()
