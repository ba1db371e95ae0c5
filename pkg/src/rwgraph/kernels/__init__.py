"""Hot numeric kernels with a selectable backend.

``RWG_BACKEND=numpy`` forces the pure-numpy path; otherwise the numba-compiled
kernels are used when numba imports. Both backends consume the same uniform
draws and return identical results.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

from . import _numpy

DIAMETER, RADIUS, MST = 0, 1, 2

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

_BACKENDS = {"numpy": _numpy}
if _numba is not None:
    _BACKENDS["numba"] = _numba

_requested = os.environ.get("RWG_BACKEND", "numba").strip().lower()
_active = _BACKENDS.get(_requested, _BACKENDS.get("numba", _numpy))


def backend() -> str:
    return "numba" if _active is _numba else "numpy"


def available() -> list[str]:
    return sorted(_BACKENDS)


def set_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {available()}") from None


@contextlib.contextmanager
def use_backend(name: str):
    prev = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def set_threads(count: int | None) -> None:
    """Cap compiled-kernel worker threads (no-op for the numpy backend)."""
    if _numba is None or not count:
        return
    import numba

    numba.set_num_threads(max(1, min(int(count), numba.config.NUMBA_NUM_THREADS)))


def batch_property(kind: int, n: int, us, vs, weights, designated: int = 0) -> np.ndarray:
    """Property value of each row of ``weights`` (shape ``(S, m)``) realized on ``(us, vs)``."""
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if weights.ndim != 2:
        raise ValueError("weights must be a 2-d (samples, edges) array")
    if weights.shape[0] == 0:
        return np.empty(0)
    us = np.ascontiguousarray(us, dtype=np.int64)
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    return _active.batch_property(int(kind), int(n), us, vs, weights, int(designated or 0))


def contraction_trials(n, us, vs, costs, k, u_keys, u_perm, u_size, cum) -> np.ndarray:
    """Canonical vertex labels (``(T, n)``) of one random contraction+partition per trial."""
    return _active.contraction_trials(
        int(n),
        np.ascontiguousarray(us, dtype=np.int64),
        np.ascontiguousarray(vs, dtype=np.int64),
        np.ascontiguousarray(costs, dtype=np.float64),
        int(k),
        np.ascontiguousarray(u_keys),
        np.ascontiguousarray(u_perm),
        np.ascontiguousarray(u_size),
        np.ascontiguousarray(cum),
    )


def klm_indicators(indptr, indices, q, cum, u_clause, u_vars) -> np.ndarray:
    """First-satisfied-clause indicators of conditioned DNF samples."""
    return _active.klm_indicators(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(q, dtype=np.float64),
        np.ascontiguousarray(cum, dtype=np.float64),
        np.ascontiguousarray(u_clause, dtype=np.float64),
        np.ascontiguousarray(u_vars, dtype=np.float64),
    )
