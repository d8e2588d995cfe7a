"""Reproduction drivers: coupling search, trace divergence, invariant scans."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import PreconditionError
from .potentials import ZeroPiece
from .tracemap import (InvariantRecord, curve_grid, curve_of_initial_conditions,
                       dimension_upper_proxy, escape_test_grid, fricke_vogt)
from .transfer import (DEFAULT_STEPS_PER_UNIT, suggested_steps, transfer_piece,
                       transfer_piece_grid)


@dataclass(frozen=True)
class CouplingHit:
    lambda_value: float
    trace_residual: float
    b_squared_residual: float
    invariant_at_E: float


def counterexample_search(piece1, n=1, lambda_min=40.0, lambda_max=200.0,
                          scan_step=0.05, tol=1e-12, steps=DEFAULT_STEPS_PER_UNIT):
    """Couplings where the f1-cell transfer matrix has trace zero.

    The energy is pinned to E = 4 pi^2 n^2, where the zero-potential
    cell transfer is the identity; a trace zero then forces the square
    of the cell matrix to -I, putting E in the periodic spectrum with
    vanishing invariant.  Zeros are bracketed on a scan grid and
    polished by bisection.
    """
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    if lambda_min <= 0 or lambda_max <= lambda_min:
        raise PreconditionError("need 0 < lambda_min < lambda_max")
    E = 4.0 * math.pi ** 2 * n * n
    count = max(2, int(math.ceil((lambda_max - lambda_min) / scan_step)) + 1)
    lams = np.linspace(lambda_min, lambda_max, count)

    def base_steps(lam):
        return suggested_steps(piece1, lam, E, steps)

    def trace_of(lam):
        T = transfer_piece(piece1, lam, E, base_steps(lam))
        return float(T[0, 0] + T[1, 1])

    if piece1.segments() is not None:
        traces = transfer_piece_grid(piece1, lams, np.full_like(lams, E))
        traces = traces[:, 0, 0] + traces[:, 1, 1]
    else:
        traces = np.array([trace_of(l) for l in lams])

    hits = []
    for i in range(len(lams) - 1):
        if traces[i] == 0.0:
            lam_star = float(lams[i])
        elif traces[i] * traces[i + 1] < 0:
            lam_star = float(brentq(trace_of, lams[i], lams[i + 1],
                                    xtol=tol, rtol=8.9e-16))
        else:
            continue
        B = transfer_piece(piece1, lam_star, E, base_steps(lam_star))
        b2 = B @ B + np.eye(2)
        inv = fricke_vogt(curve_of_initial_conditions(
            ZeroPiece(), piece1, lam_star, E, base_steps(lam_star)))
        hits.append(CouplingHit(
            lambda_value=lam_star,
            trace_residual=abs(float(B[0, 0] + B[1, 1])),
            b_squared_residual=float(np.max(np.abs(b2))),
            invariant_at_E=float(inv),
        ))
    if not hits and float(np.ptp(traces)) > 1e-9:
        warnings.warn("trace oscillates but no sign change was bracketed; "
                      "scan_step may be too large", stacklevel=2)
    return hits


def trace_divergence_check(piece1, e_max=10.0, lambda_grid=(1e3, 1e4, 1e5),
                           e_grid=801, steps=DEFAULT_STEPS_PER_UNIT):
    """min over E in [-e_max, e_max] of the f1-cell transfer trace, per lambda.

    Requires a nonnegative piece; a piece vanishing on an interval is
    allowed but flagged, since the divergence claim is then void.
    """
    xs = np.linspace(0.0, piece1.length, 4097)
    vals = piece1.sample(xs)
    if np.min(vals) < -1e-12:
        raise PreconditionError("trace divergence requires a nonnegative piece")
    zero_frac = float(np.mean(np.abs(vals) < 1e-14))
    if zero_frac > 0.05:
        warnings.warn(
            f"piece vanishes on ~{zero_frac:.0%} of its domain; the "
            "uniform trace divergence is not guaranteed there", stacklevel=2)
    Es = np.linspace(-e_max, e_max, e_grid)
    rows = []
    for lam in lambda_grid:
        st = suggested_steps(piece1, lam, e_max, steps)
        T = transfer_piece_grid(piece1, np.full_like(Es, lam), Es, st)
        traces = T[:, 0, 0] + T[:, 1, 1]
        i = int(np.argmin(traces))
        rows.append((float(lam), float(traces[i]), float(Es[i])))
    return rows


def invariant_scan(piece0, piece1, lam, e_min, e_max, e_grid=501,
                   steps=DEFAULT_STEPS_PER_UNIT, max_iter=60, blowup=1e10):
    """Invariant records along an energy window at fixed coupling.

    Bounded trace-map verdicts mark candidate spectrum points.
    """
    Es = np.linspace(e_min, e_max, e_grid)
    st = max(steps, suggested_steps(piece0, lam, max(abs(e_min), abs(e_max)), steps),
             suggested_steps(piece1, lam, max(abs(e_min), abs(e_max)), steps))
    x2, x1, x0 = curve_grid(piece0, piece1, lam, Es, st)
    inv = x2 ** 2 + x1 ** 2 + x0 ** 2 - 2.0 * x2 * x1 * x0 - 1.0
    escaped, _, _ = escape_test_grid(x2, x1, x0, max_iter, blowup)
    records = []
    for i, E in enumerate(Es):
        records.append(InvariantRecord(
            E=float(E), x0=float(x0[i]), x1=float(x1[i]), x2=float(x2[i]),
            invariant_value=float(inv[i]),
            dim_proxy=dimension_upper_proxy(float(inv[i])),
            bounded=not bool(escaped[i]),
        ))
    return records
