"""Trace-map dynamics, the Fricke-Vogt invariant, and the dimension proxy."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .transfer import half_trace, transfer_piece, transfer_piece_grid

SILVER_RATIO_LOG = np.log(1.0 + np.sqrt(2.0))
DIM_PROXY_THRESHOLD = (1.0 + np.sqrt(2.0)) ** 2

DEFAULT_MAX_ITER = 60
DEFAULT_BLOWUP = 1e10


class TraceTriple(NamedTuple):
    """(x_{k+1}, x_k, x_{k-1}) point for the trace-map orbit."""

    x: float
    y: float
    z: float


def trace_map_step(t):
    """One application of (x, y, z) -> (2xy - z, x, y)."""
    x, y, z = t
    return TraceTriple(2.0 * x * y - z, x, y)


def fricke_vogt(t):
    """x^2 + y^2 + z^2 - 2xyz - 1; conserved by the trace map."""
    x, y, z = t
    return x * x + y * y + z * z - 2.0 * x * y * z - 1.0


def curve_of_initial_conditions(piece0, piece1, lam, E, steps_per_unit=2048):
    """Seed triple (x2, x1, x0) from the two elementary cell monodromies.

    x0 and x1 are half-traces of the single-piece cells; x2 is the
    half-trace of their product M0 @ M1 (the two-cell approximant runs
    through piece1 first, then piece0).
    """
    T0 = transfer_piece(piece0, lam, E, steps_per_unit)
    T1 = transfer_piece(piece1, lam, E, steps_per_unit)
    return TraceTriple(
        float(half_trace(T0 @ T1)), float(half_trace(T1)), float(half_trace(T0))
    )


def curve_grid(piece0, piece1, lam, E, steps_per_unit=2048):
    """Vectorized curve of initial conditions over an energy array."""
    E = np.atleast_1d(np.asarray(E, dtype=float))
    lam_arr = np.full_like(E, lam)
    T0 = transfer_piece_grid(piece0, lam_arr, E, steps_per_unit)
    T1 = transfer_piece_grid(piece1, lam_arr, E, steps_per_unit)
    x0 = half_trace(T0)
    x1 = half_trace(T1)
    x2 = half_trace(T0 @ T1)
    return x2, x1, x0


def invariant_of_energy(piece0, piece1, lam, E, steps_per_unit=2048):
    return fricke_vogt(curve_of_initial_conditions(piece0, piece1, lam, E, steps_per_unit))


@dataclass(frozen=True)
class OrbitVerdict:
    status: str                 # "Bounded" or "Escaped"
    escape_index: int | None
    max_abs: float


def escape_test(t, max_iter=DEFAULT_MAX_ITER, blowup=DEFAULT_BLOWUP):
    """Decide whether the trace-map orbit of t escapes.

    Escape fires at the first index where the two newest coordinates
    exceed 1 in absolute value and the leading one exceeds blowup, or
    where the iteration stops being finite.  Trace-map escape is
    doubly exponential, so the default 60 iterations dwarf any orbit
    this package examines.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if blowup <= 2.0:
        raise ValueError("blowup must exceed 2")
    esc, idx, mabs = kernels.trace_orbit(
        np.array([t[0]], dtype=float),
        np.array([t[1]], dtype=float),
        np.array([t[2]], dtype=float),
        int(max_iter),
        float(blowup),
    )
    if esc[0]:
        return OrbitVerdict("Escaped", int(idx[0]), float(mabs[0]))
    return OrbitVerdict("Bounded", None, float(mabs[0]))


def escape_test_grid(x2, x1, x0, max_iter=DEFAULT_MAX_ITER, blowup=DEFAULT_BLOWUP):
    """Vectorized escape verdicts; returns (escaped_bool, index, max_abs)."""
    esc, idx, mabs = kernels.trace_orbit(
        np.ascontiguousarray(x2, dtype=float),
        np.ascontiguousarray(x1, dtype=float),
        np.ascontiguousarray(x0, dtype=float),
        int(max_iter),
        float(blowup),
    )
    return esc.astype(bool), idx, mabs


def orbit(t, n):
    """First n trace-map iterates of t (the seed excluded)."""
    out = []
    cur = TraceTriple(*t)
    for _ in range(n):
        cur = trace_map_step(cur)
        out.append(cur)
        if not all(np.isfinite(cur)):
            break
    return out


def dimension_upper_proxy(invariant_value):
    """Large-invariant asymptote 2 log(1 + sqrt 2) / log I.

    Valid only from I = (1 + sqrt 2)^2 upward, where the formula stays
    at or below 1; returns None below (the exact dimension function is
    dynamical and out of reach here).
    """
    if not np.isfinite(invariant_value) or invariant_value < DIM_PROXY_THRESHOLD:
        return None
    return float(2.0 * SILVER_RATIO_LOG / np.log(invariant_value))


@dataclass(frozen=True)
class InvariantRecord:
    E: float
    x0: float
    x1: float
    x2: float
    invariant_value: float
    dim_proxy: float | None
    bounded: bool
