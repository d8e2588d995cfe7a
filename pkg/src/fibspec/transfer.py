"""SL(2,R) transfer matrices over potential pieces and period cells.

Matrix layout follows the derivative-on-top convention: row 0 holds
(v'(b), u'(b)) and row 1 holds (v(b), u(b)), where u is the Neumann
solution (u(a)=1, u'(a)=0) and v the Dirichlet one (v(a)=0, v'(a)=1).
Composition puts later intervals on the left: T[b,c] @ T[a,b] = T[a,c].
"""

import math

import numpy as np

from . import kernels
from .errors import StepCountTooSmallError

#: |det - 1| beyond which transfer_ode declares the step count too small
#: (relative to the float measurement floor eps * ||T||^2).
DET_DRIFT_TOL = 1e-6

#: entry-magnitude ceiling below which the determinant is renormalized;
#: past this the det of a unimodular matrix is not measurable in doubles.
DET_MEASURABLE_MAXSQ = 1e7

DEFAULT_STEPS_PER_UNIT = 2048


def transfer_constant(value, length, E):
    """Closed-form transfer matrix of a constant potential segment.

    With q = E - value: oscillatory (cos/sin) for q > 0, hyperbolic
    continuation for q < 0, and the exact linear-solution limit at the
    degeneracy q = 0 (series-stabilized, not a special case).
    """
    q = E - value
    z = q * length * length
    if z > 1e-6:
        w = math.sqrt(z)
        c, s = math.cos(w), math.sin(w) / w
    elif z < -1e-6:
        w = math.sqrt(-z)
        c, s = math.cosh(w), math.sinh(w) / w
    else:
        c = 1.0 - z / 2.0 + z * z / 24.0 - z ** 3 / 720.0
        s = 1.0 - z / 6.0 + z * z / 120.0 - z ** 3 / 5040.0
    return np.array([[c, -q * length * s], [length * s, c]])


def transfer_pwc(segments, lam, E):
    """Product of closed-form segment transfers, later segments left."""
    T = np.eye(2)
    for value, length in segments:
        T = transfer_constant(lam * value, length, E) @ T
    return T


def half_trace(m):
    return 0.5 * (m[..., 0, 0] + m[..., 1, 1])


def sl2_det(m):
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def _certify_dets(out):
    """Renormalize measurable determinants; raise on genuine drift.

    The determinant of a unimodular matrix can only be measured in
    doubles up to ~eps * max|entry|^2, so the drift guard and the
    renormalization are both gated on the entry magnitude.
    """
    det = sl2_det(out)
    if not np.all(np.isfinite(det)):
        raise StepCountTooSmallError("integration overflowed; increase steps")
    m2 = np.maximum(1.0, np.max(np.abs(out), axis=(-2, -1)) ** 2)
    drift = np.abs(det - 1.0)
    bad = drift > DET_DRIFT_TOL + 100.0 * np.finfo(float).eps * m2
    if np.any(bad):
        i = int(np.argmax(bad))
        raise StepCountTooSmallError(
            f"determinant drifted to {det.ravel()[i]:.6g}; increase steps"
        )
    renorm = (drift <= DET_DRIFT_TOL) & (m2 <= DET_MEASURABLE_MAXSQ)
    scale = np.ones_like(det)
    scale[renorm] = np.sqrt(det[renorm])
    return out / scale[..., None, None]


def smooth_chunks(piece, x_start, x_end):
    """Split [x_start, x_end] at the piece's interior discontinuities.

    RK4 assumes a smooth right-hand side; stepping across a
    piecewise-constant jump would cap the order at the jump.
    """
    segs = piece.segments()
    if segs is None:
        return [(x_start, x_end)]
    edges = np.cumsum([l for _, l in segs])[:-1]
    cuts = [x_start] + [float(e) for e in edges if x_start < e < x_end] + [x_end]
    return list(zip(cuts[:-1], cuts[1:]))


def _chunk_phi(piece, a, b, steps):
    """Half-step samples of the piece on [a, b]; constant chunks exactly."""
    if piece.segments() is not None:
        val = float(piece.sample(np.array([0.5 * (a + b)]))[0])
        return np.full(2 * steps + 1, val)
    return np.ascontiguousarray(piece.sample(np.linspace(a, b, 2 * steps + 1)))


def _as_grid(lam, E):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    E = np.atleast_1d(np.asarray(E, dtype=float))
    if lam.shape != E.shape:
        lam, E = np.broadcast_arrays(lam, E)
    return np.ascontiguousarray(lam), np.ascontiguousarray(E)


def transfer_ode_grid(piece, lam, E, steps, x_start=0.0, x_end=None):
    """RK4 transfer matrices of one piece over arrays of (lambda, E).

    `steps` is the total count over [x_start, x_end], allotted to the
    smooth chunks proportionally to their length.
    """
    lam, E = _as_grid(lam, E)
    if x_end is None:
        x_end = piece.length
    total = x_end - x_start
    out = np.broadcast_to(np.eye(2), lam.shape + (2, 2)).copy()
    for a, b in smooth_chunks(piece, x_start, x_end):
        st = max(16, int(math.ceil(steps * (b - a) / total)))
        phi = _chunk_phi(piece, a, b, st)
        out = kernels.transfer_rk4(phi, float(b - a), st, lam, E) @ out
    return _certify_dets(out)


def transfer_ode(piece, lam, E, steps, x_start=0.0, x_end=None):
    """Transfer matrix by fixed-step RK4; steps >= 16.

    Raises StepCountTooSmallError when the unimodularity certificate
    fails (|det - 1| resolvably above tolerance).
    """
    if steps < 16:
        raise StepCountTooSmallError(f"need at least 16 steps, got {steps}")
    return transfer_ode_grid(piece, [lam], [E], steps, x_start, x_end)[0]


def transfer_piece(piece, lam, E, steps=DEFAULT_STEPS_PER_UNIT):
    """Transfer over one piece: closed form when piecewise constant."""
    segs = piece.segments()
    if segs is not None:
        return transfer_pwc(segs, lam, E)
    return transfer_ode(piece, lam, E, max(16, int(math.ceil(steps * piece.length))))


def transfer_piece_grid(piece, lam, E, steps=DEFAULT_STEPS_PER_UNIT):
    """Vectorized transfer_piece over (lambda, E) arrays -> (n, 2, 2)."""
    segs = piece.segments()
    lam, E = _as_grid(lam, E)
    if segs is not None:
        values = np.array([v for v, _ in segs])
        lengths = np.array([l for _, l in segs])
        return kernels.pwc_transfer(values, lengths, lam, E)
    return transfer_ode_grid(piece, lam, E, max(16, int(math.ceil(steps * piece.length))))


def suggested_steps(piece, lam, E, base=DEFAULT_STEPS_PER_UNIT):
    """Step count per unit length keeping the fastest mode resolved.

    The local frequency is sqrt(|lam * phi - E|); twenty steps per
    radian keeps RK4 phase error and determinant drift in budget.
    """
    rate = math.sqrt(1.0 + abs(lam) * piece.abs_max() + abs(E))
    return max(int(base), int(math.ceil(20.0 * rate)))


def monodromy(cell, E, steps_per_unit=DEFAULT_STEPS_PER_UNIT):
    """Transfer matrix over one full period cell.

    Per-letter transfers are computed once and composed along the word
    with later cells on the left, matching M_k = M_{k-2} M_{k-1} for
    concatenated approximants.
    """
    letters = set(cell.word)
    mats = {
        ch: transfer_piece(cell.piece_for(ch), cell.coupling, E, steps_per_unit)
        for ch in letters
    }
    M = np.eye(2)
    for ch in cell.word:
        M = mats[ch] @ M
    return M


def monodromy_grid(cell, E, steps_per_unit=DEFAULT_STEPS_PER_UNIT):
    """Vectorized monodromy over an array of energies -> (n, 2, 2)."""
    E = np.atleast_1d(np.asarray(E, dtype=float))
    lam = np.full_like(E, cell.coupling)
    letters = set(cell.word)
    mats = {
        ch: transfer_piece_grid(cell.piece_for(ch), lam, E, steps_per_unit)
        for ch in letters
    }
    M = np.broadcast_to(np.eye(2), E.shape + (2, 2)).copy()
    for ch in cell.word:
        M = mats[ch] @ M
    return M
