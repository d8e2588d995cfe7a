"""Nonlinear eigenvalue matrices for piecewise-constant Fibonacci cells.

The boundary-value problem on one period couples per-subdomain solution
coefficients (A_n, B_n) through interface continuity, interface
smoothness, and the phase-twisted wrap-around conditions; energies
where the assembled matrix is singular are Floquet eigenvalues.  This
module is the independent oracle for the floquet band edges.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._kernels_numpy import _cs_vec
from .errors import DegenerateEnergyError, PreconditionError
from .words import validate_word

#: minimal |E - lambda*v| treated as nondegenerate in the paper basis
DEG_TOL = 1e-9

#: residual below which a refined tangential point counts as a root
TOUCH_ACCEPT = 1e-8

DET_CHUNK = 20000


@dataclass(frozen=True)
class NlevpProblem:
    """Subdomain constant values (unit coupling) and lengths."""

    values: tuple
    lengths: tuple

    @classmethod
    def from_word(cls, word):
        """Unit cells: value 1 under letter '1', 0 under letter '0'."""
        validate_word(word)
        return cls(tuple(1.0 if ch == "1" else 0.0 for ch in word),
                   tuple(1.0 for _ in word))

    @classmethod
    def from_word_halfcell(cls, word, c=4.0):
        """Half-unit subdomains: letter '1' carries (1, -c), letter '0' (0, 0)."""
        validate_word(word)
        values = []
        for ch in word:
            values.extend((1.0, -c) if ch == "1" else (0.0, 0.0))
        return cls(tuple(values), tuple(0.5 for _ in values))

    @property
    def dimension(self):
        return 2 * len(self.values)


def build(problem, E, lam, theta):
    """Assemble the paper-form complex matrix at one energy.

    Row 2n is the value-continuity row of subdomain n, row 2n+1 the
    derivative row; columns order the coefficients (A_1, B_1, A_2,
    B_2, ...).  sqrt(E - lambda*v) continues to i*sqrt(lambda*v - E)
    below the subdomain threshold.  Energies where some phi vanishes
    degenerate the sin/cos basis and raise DegenerateEnergyError.
    """
    M = problem.dimension
    out = np.zeros((M, M), dtype=complex)
    phase = np.exp(1j * theta)
    phis = []
    for v in problem.values:
        q = complex(E - lam * v)
        if abs(q) < DEG_TOL * max(1.0, abs(E)):
            raise DegenerateEnergyError(
                f"basis degenerates at E={E} for subdomain value {v}")
        phis.append(np.sqrt(q))
    n_sub = len(problem.values)
    for n in range(n_sub):
        phi = phis[n]
        l = problem.lengths[n]
        r0, r1 = 2 * n, 2 * n + 1
        out[r0, 2 * n] += np.sin(phi * l)
        out[r0, 2 * n + 1] += np.cos(phi * l)
        out[r1, 2 * n] += phi * np.cos(phi * l)
        out[r1, 2 * n + 1] += -phi * np.sin(phi * l)
        if n < n_sub - 1:
            out[r0, 2 * n + 3] += -1.0
            out[r1, 2 * n + 2] += -phis[n + 1]
        else:
            # single-subdomain problems overlay the wrap terms on the
            # same entries; the displayed matrix is a sum of outer products
            out[r0, 1] += -phase
            out[r1, 0] += -phis[0] * phase
    return out


def build_period2(E, lam, theta):
    """The 4x4 period-2 matrix (pieces 0 and lambda on unit cells).

    Identical to build_general on the word "10"; the coefficient
    ordering (A_1, B_1, A_2, B_2) makes the permutation between the
    two the identity.
    """
    return build(NlevpProblem.from_word("10"), E, lam, theta)


def build_general(E, lam, theta, word):
    """2 F_k x 2 F_k matrix for a word of unit constant cells."""
    return build(NlevpProblem.from_word(word), E, lam, theta)


def build_halfcell(E, lam, theta, word, c=4.0):
    """4 F_k x 4 F_k matrix with two half-unit subdomains per letter."""
    return build(NlevpProblem.from_word_halfcell(word, c), E, lam, theta)


def _theta_sign(theta):
    if abs(theta) < 1e-12:
        return 1.0
    if abs(theta - np.pi) < 1e-12:
        return -1.0
    raise PreconditionError("determinant scan requires theta in {0, pi}")


def scaled_matrices(problem, E, lam, theta):
    """Real, entire-in-E matrix stack with the A-columns divided by phi.

    Rescaling column 2n by phi_n turns its basis into sin(phi x)/phi,
    which is entire in E; every entry is then real for theta in {0, pi}
    and the determinant keeps the same zeros as the paper matrix away
    from the (measure-zero) basis degeneracies.
    """
    sign = _theta_sign(theta)
    E = np.atleast_1d(np.asarray(E, dtype=float))
    nE = E.size
    M = problem.dimension
    out = np.zeros((nE, M, M))
    n_sub = len(problem.values)
    for n in range(n_sub):
        l = problem.lengths[n]
        q = E - lam * problem.values[n]
        C, S = _cs_vec(q * l * l)
        r0, r1 = 2 * n, 2 * n + 1
        out[:, r0, 2 * n] += S * l
        out[:, r0, 2 * n + 1] += C
        out[:, r1, 2 * n] += C
        out[:, r1, 2 * n + 1] += -q * l * S
        if n < n_sub - 1:
            out[:, r0, 2 * n + 3] += -1.0
            out[:, r1, 2 * n + 2] += -1.0
        else:
            out[:, r0, 1] += -sign
            out[:, r1, 0] += -sign
    return out


def row_reference(problem, E_sample, lam, theta):
    """Reference row magnitudes: median row max over an energy sample.

    Used to floor the per-energy row equilibration; without the floor,
    a row that vanishes identically at a root (possible in the 2x2
    single-subdomain problem, where wrap and interface terms share
    entries) would be amplified until the root disappears from the
    scaled determinant.  Capped at 1 so the floor never interferes
    with the large rows it is meant to equilibrate.
    """
    mats = scaled_matrices(problem, E_sample, lam, theta)
    med = np.median(np.max(np.abs(mats), axis=2), axis=0)
    return np.minimum(0.01 * med, 1.0)


def scaled_det(problem, E, lam, theta, row_floor=None):
    """Row-equilibrated determinant of the scaled matrix, per energy.

    Row scaling keeps the sign-change scan robust when the derivative
    rows grow like sqrt(lambda); the optional floor keeps vanishing
    rows from being amplified (see row_reference).
    """
    E = np.atleast_1d(np.asarray(E, dtype=float))
    out = np.empty(E.size)
    for lo in range(0, E.size, DET_CHUNK):
        chunk = E[lo:lo + DET_CHUNK]
        mats = scaled_matrices(problem, chunk, lam, theta)
        scale = np.max(np.abs(mats), axis=2, keepdims=True)
        if row_floor is not None:
            scale = np.maximum(scale, row_floor[None, :, None])
        scale[scale == 0.0] = 1.0
        out[lo:lo + chunk.size] = np.linalg.det(mats / scale)
    return out


def eigenvalue_scan(problem, lam, theta, e_range, grid=4001, tol=1e-10):
    """Real energies where the matrix is singular, in (e_range).

    Scan grid is offset by half a step so exact basis degeneracies
    (E = 0 or E = lambda*v) are never evaluated; simple roots come from
    sign changes and bisection, tangential roots from refining interior
    extrema of the equilibrated determinant.
    """
    _theta_sign(theta)
    e_lo, e_hi = e_range
    if grid < 2:
        raise PreconditionError("grid must be at least 2")
    Es = np.linspace(e_lo, e_hi, grid)
    Es = Es + 0.5 * (Es[1] - Es[0])
    floor = row_reference(problem, Es[:: max(1, grid // 512)], lam, theta)
    d = scaled_det(problem, Es, lam, theta, floor)

    def f(E):
        return float(scaled_det(problem, np.array([E]), lam, theta, floor)[0])

    roots = []
    for i in range(len(Es) - 1):
        if d[i] == 0.0:
            roots.append(float(Es[i]))
        elif d[i] * d[i + 1] < 0:
            roots.append(float(brentq(f, Es[i], Es[i + 1], xtol=tol)))
    ad = np.abs(d)
    h = 1e-4 * (Es[1] - Es[0])
    for i in range(1, len(Es) - 1):
        if ad[i] < ad[i - 1] and ad[i] < ad[i + 1]:
            try:
                r = brentq(lambda E: f(E + h) - f(E - h),
                           Es[i - 1], Es[i + 1], xtol=tol)
            except ValueError:
                continue
            if abs(f(r)) <= TOUCH_ACCEPT:
                roots.append(float(r))
    roots.sort()
    out = []
    for r in roots:
        if e_lo < r <= e_hi and (not out or r - out[-1] > max(10 * tol, 1e-9)):
            out.append(r)
    return out


def singular_values(matrix):
    """(smallest, largest) singular value of a built matrix."""
    sv = np.linalg.svd(matrix, compute_uv=False)
    return float(sv[-1]), float(sv[0])
