"""Backend selection and typed front end for the pair-sampling kernels.

The compiled extension (``blcsim._pairs``) is preferred; the pure-Python twin
(``blcsim._pairs_py``) is a drop-in replacement selected at import time when
the extension is unavailable (or when ``BLCSIM_KERNEL=python`` is set).  Both
produce bit-identical outcome streams for a given (seed, trial) by
construction; ``tests/test_kernels.py`` enforces the equivalence and
``benchmarks/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pairs_py

try:  # pragma: no cover - exercised indirectly via backend tests
    from . import _pairs as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

if os.environ.get("BLCSIM_KERNEL") == "python":
    _active = _pairs_py
else:
    _active = _compiled if _compiled is not None else _pairs_py

Axis = tuple[float, float, float]


def backend_name() -> str:
    return "compiled" if _active is _compiled else "python"


def available_backends() -> dict[str, object]:
    backends: dict[str, object] = {"python": _pairs_py}
    if _compiled is not None:
        backends["compiled"] = _compiled
    return backends


def _prep(amplitudes, axes_a, weights_a, axes_b, weights_b, backend):
    impl = _active if backend is None else available_backends()[backend]
    amps = np.ascontiguousarray(np.asarray(amplitudes, dtype=complex).view(np.float64))
    aa = np.ascontiguousarray(np.asarray(axes_a, dtype=np.float64).reshape(-1, 3))
    ab = np.ascontiguousarray(np.asarray(axes_b, dtype=np.float64).reshape(-1, 3))
    wa = np.ascontiguousarray(np.asarray(weights_a, dtype=np.float64))
    wb = np.ascontiguousarray(np.asarray(weights_b, dtype=np.float64))
    if impl is _pairs_py:
        return (
            impl,
            tuple(amps.tolist()),
            tuple(map(tuple, aa.tolist())),
            tuple(wa.tolist()),
            tuple(map(tuple, ab.tolist())),
            tuple(wb.tolist()),
        )
    return impl, amps, aa, wa, ab, wb


def sample_pair(
    amplitudes,
    axes_a,
    weights_a,
    axes_b,
    weights_b,
    *,
    first_b: bool,
    seed: int,
    trial: int,
    backend: str | None = None,
) -> tuple[int, int, int, int]:
    """Sample one outcome pair: (axis_a, sign_a, axis_b, sign_b).

    Axis indices are 0-based; signs are +-1.  ``first_b`` selects which
    detector measures (and collapses) first.
    """
    impl, amps, aa, wa, ab, wb = _prep(amplitudes, axes_a, weights_a, axes_b, weights_b, backend)
    ia, sa, ib, sb = impl.sample_pair(amps, aa, wa, ab, wb, bool(first_b), seed, trial)
    return ia, 1 - 2 * sa, ib, 1 - 2 * sb


def sample_pair_counts(
    amplitudes,
    axes_a,
    weights_a,
    axes_b,
    weights_b,
    *,
    first_b: bool,
    seed: int,
    n_trials: int,
    trial0: int = 0,
    backend: str | None = None,
) -> np.ndarray:
    """Outcome counts over trials [trial0, trial0 + n_trials).

    Returns an int64 array of shape (n_axes_a, 2, n_axes_b, 2); the sign axis
    is ordered (+1, -1).  Counts are a pure function of (seed, trial range),
    independent of batching.
    """
    impl, amps, aa, wa, ab, wb = _prep(amplitudes, axes_a, weights_a, axes_b, weights_b, backend)
    flat = impl.sample_pair_counts(
        amps, aa, wa, ab, wb, bool(first_b), seed, int(n_trials), int(trial0)
    )
    return np.asarray(flat, dtype=np.int64).reshape(len(wa), 2, len(wb), 2)
