"""Polar (theta, L) flow and large-coupling scaling measurements.

The polar system is integrated through the equivalent linear flow on
(y', y) with periodic renormalization; theta comes back out of the
quadrant of the state plus an exact count of upward pi-crossings
(theta' = 1 whenever theta = 0 mod pi, so crossings are upward and
coincide with sign changes of y).  Direct RK4 on the theta equation is
not viable at large coupling: its right-hand side sweeps rates from 1
up to lambda within every rotation, which aliases the phase long
before the sqrt(lambda)-scaled step budget is exhausted.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import FitDomainError, IntegrationFailureError, PreconditionError

DEFAULT_BASE_STEPS = 4096


@dataclass(frozen=True)
class PruferState:
    theta: float
    logr: float
    x: float


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    intercept: float
    r_squared: float
    lambda_range: tuple


def prufer_steps(piece, lam, E, length, base=DEFAULT_BASE_STEPS):
    """Steps keeping RK4 under 1/20 radian of the fastest local mode."""
    rate = math.sqrt(1.0 + abs(lam) * piece.abs_max() + abs(E))
    return max(int(base), int(math.ceil(20.0 * rate * length)))


def integrate_prufer(piece, lam, E, theta0, steps=None, x_start=0.0, x_end=None):
    """Integrate the polar system over [x_start, x_end] with L(start) = 0.

    Piecewise-constant pieces are integrated per smooth chunk so RK4
    never steps across a jump; (theta, L) chain continuously through
    the chunk boundaries.
    """
    from .transfer import smooth_chunks

    if x_end is None:
        x_end = piece.length
    length = x_end - x_start
    if length <= 0:
        raise PreconditionError("x_end must exceed x_start")
    if steps is None:
        steps = prufer_steps(piece, lam, E, length)
    if steps < 64:
        raise PreconditionError(f"need at least 64 steps, got {steps}")
    theta = float(theta0)
    logr = 0.0
    for a, b in smooth_chunks(piece, x_start, x_end):
        st = max(64, int(math.ceil(steps * (b - a) / length)))
        if piece.segments() is not None:
            val = float(piece.sample(np.array([0.5 * (a + b)]))[0])
            phi = np.full(2 * st + 1, val)
        else:
            phi = np.ascontiguousarray(piece.sample(np.linspace(a, b, 2 * st + 1)))
        th, dL = kernels.prufer_rk4(
            phi, float(b - a), st,
            np.array([float(lam)]), np.array([float(E)]), np.array([theta]),
        )
        theta = float(th[0])
        logr += float(dL[0])
        if not (np.isfinite(theta) and np.isfinite(logr)):
            raise IntegrationFailureError("non-finite Prufer state; reduce step size")
    return PruferState(theta, logr, float(x_end))


def fit_loglog(lams, values):
    """Ordinary least squares of log(values) on log(lams)."""
    lams = np.asarray(lams, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(lams) < 2:
        raise FitDomainError("exponent fit needs at least two grid points")
    if np.any(values <= 0):
        raise FitDomainError("exponent fit needs strictly positive values")
    x = np.log(lams)
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return ExponentFit(float(slope), float(intercept), r2,
                       (float(lams.min()), float(lams.max())))


def _interval(piece, interval):
    if interval is None:
        return 0.0, piece.length
    a, b = interval
    if not (0.0 <= a < b <= piece.length):
        raise PreconditionError(f"interval {interval} outside piece domain")
    return float(a), float(b)


def _interior_samples(piece, a, b, n=2001):
    xs = np.linspace(a, b, n)[1:-1]
    return xs, piece.sample(xs)


def measure_positive_growth(piece, E, lambda_grid, theta0=math.pi / 4,
                            interval=None, base_steps=DEFAULT_BASE_STEPS):
    """Fit the log-norm gain of a positive region against coupling.

    The region must be strictly positive on its interior and the
    launch angle interior to (0, pi/2); the gain L(b) - L(a) scales
    like sqrt(lambda).
    """
    a, b = _interval(piece, interval)
    if not (0.0 < theta0 < math.pi / 2):
        raise PreconditionError("theta0 must lie in (0, pi/2)")
    _, vals = _interior_samples(piece, a, b)
    if np.any(vals <= 0):
        raise PreconditionError("piece must be strictly positive on the interior")
    gains = []
    for lam in lambda_grid:
        st = prufer_steps(piece, lam, E, b - a, base_steps)
        gains.append(integrate_prufer(piece, lam, E, theta0, st, a, b).logr)
    gains = np.asarray(gains)
    if np.any(gains <= 0):
        raise FitDomainError("nonpositive log-norm gain in a positive region")
    return fit_loglog(lambda_grid, gains)


def measure_rotation(piece, E, lambda_grid, theta0=math.pi / 4,
                     interval=None, base_steps=DEFAULT_BASE_STEPS):
    """Fit the angle advance of a negative region; scales like sqrt(lambda)."""
    if E <= 0:
        raise PreconditionError("rotation measurement requires E > 0")
    a, b = _interval(piece, interval)
    _, vals = _interior_samples(piece, a, b)
    if np.any(vals >= 0):
        raise PreconditionError("piece must be strictly negative on the interior")
    advances = []
    for lam in lambda_grid:
        st = prufer_steps(piece, lam, E, b - a, base_steps)
        advances.append(integrate_prufer(piece, lam, E, theta0, st, a, b).theta - theta0)
    advances = np.asarray(advances)
    if np.any(advances <= 0):
        raise FitDomainError("nonpositive angle advance in a negative region")
    return fit_loglog(lambda_grid, advances)


def measure_negative_lognorm(piece, E, lambda_grid, theta0=0.0,
                             interval=None, base_steps=DEFAULT_BASE_STEPS):
    """Fit |L(d) - L(c)| over a strictly negative region.

    The bound is logarithmic in lambda, so the fitted power-law
    exponent should be near zero.  The default launch angle 0 is the
    Dirichlet direction: a generic angle loads the expanding ellipse
    axis and injects a spurious (log lambda)/2 systematic.
    """
    if E <= 0:
        raise PreconditionError("log-norm measurement requires E > 0")
    a, b = _interval(piece, interval)
    if piece.sample(np.array([a]))[0] >= 0 or piece.sample(np.array([b]))[0] >= 0:
        raise PreconditionError("piece must be strictly negative on the closed interval")
    _, vals = _interior_samples(piece, a, b)
    if np.any(vals >= 0):
        raise PreconditionError("piece must be strictly negative on the closed interval")
    return fit_loglog(lambda_grid, _abs_gains(piece, E, lambda_grid, theta0,
                                              a, b, base_steps))


def measure_boundary_zero(piece, E, lambda_grid, theta0=0.0,
                          interval=None, base_steps=DEFAULT_BASE_STEPS):
    """Fit |L(d) - L(c)| over a negative lobe pinched to zero at both ends.

    Requires phi(c) = phi(d) = 0 with phi'(c) < 0 and phi'(d) > 0; the
    bound is lambda^{9/20}, strictly below the sqrt(lambda) growth of
    the positive region.
    """
    if E <= 0:
        raise PreconditionError("boundary-zero measurement requires E > 0")
    a, b = _interval(piece, interval)
    fa = piece.sample(np.array([a]))[0]
    fb = piece.sample(np.array([b]))[0]
    if abs(fa) > 1e-9 or abs(fb) > 1e-9:
        raise PreconditionError("piece must vanish at both interval endpoints")
    h = 1e-6 * (b - a)
    da = (piece.sample(np.array([a + h]))[0] - fa) / h
    db = (fb - piece.sample(np.array([b - h]))[0]) / h
    # one-sided slopes of a double zero come out O(h); demand a real slope
    if da >= -1e-3 or db <= 1e-3:
        raise PreconditionError("need phi'(c) < 0 and phi'(d) > 0 at the lobe ends")
    _, vals = _interior_samples(piece, a, b)
    if np.any(vals >= 0):
        raise PreconditionError("piece must be negative inside the lobe")
    return fit_loglog(lambda_grid, _abs_gains(piece, E, lambda_grid, theta0,
                                              a, b, base_steps))


def _abs_gains(piece, E, lambda_grid, theta0, a, b, base_steps):
    if len(lambda_grid) < 2:
        raise FitDomainError("exponent fit needs at least two grid points")
    out = []
    for lam in lambda_grid:
        st = prufer_steps(piece, lam, E, b - a, base_steps)
        out.append(abs(integrate_prufer(piece, lam, E, theta0, st, a, b).logr))
    return np.asarray(out)


def asymptotics_table(piece, E, lambda_grid, theta0=math.pi / 4,
                      interval=None, base_steps=DEFAULT_BASE_STEPS):
    """Rows (lambda, delta_theta, delta_L, steps) for the CSV output."""
    a, b = _interval(piece, interval)
    rows = []
    for lam in lambda_grid:
        st = prufer_steps(piece, lam, E, b - a, base_steps)
        state = integrate_prufer(piece, lam, E, theta0, st, a, b)
        rows.append((float(lam), state.theta - theta0, state.logr, st))
    return rows
