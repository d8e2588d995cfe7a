"""Numba implementations of the hot kernels.

Every kernel takes flat float64 arrays over a batch of (lambda, E) grid
points and loops points in parallel; per-point arithmetic is scalar so
results match the vectorized numpy backend to rounding.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _cs(z):
    """cos(sqrt z) and sin(sqrt z)/sqrt z, continued through z <= 0."""
    if z > 1e-6:
        w = np.sqrt(z)
        return np.cos(w), np.sin(w) / w
    if z < -1e-6:
        w = np.sqrt(-z)
        return np.cosh(w), np.sinh(w) / w
    c = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0
    s = 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0
    return c, s


@njit(cache=True, parallel=True)
def pwc_transfer(values, lengths, lam, E):
    """Transfer matrices over piecewise-constant cells, closed form.

    Later segments multiply on the left: T = T_m ... T_2 T_1.
    """
    n = lam.shape[0]
    m = values.shape[0]
    out = np.empty((n, 2, 2))
    for i in prange(n):
        t11 = 1.0
        t12 = 0.0
        t21 = 0.0
        t22 = 1.0
        for j in range(m):
            q = E[i] - lam[i] * values[j]
            l = lengths[j]
            c, s = _cs(q * l * l)
            a11 = c
            a12 = -q * l * s
            a21 = l * s
            a22 = c
            n11 = a11 * t11 + a12 * t21
            n12 = a11 * t12 + a12 * t22
            n21 = a21 * t11 + a22 * t21
            n22 = a21 * t12 + a22 * t22
            t11, t12, t21, t22 = n11, n12, n21, n22
        out[i, 0, 0] = t11
        out[i, 0, 1] = t12
        out[i, 1, 0] = t21
        out[i, 1, 1] = t22
    return out


@njit(cache=True, parallel=True)
def transfer_rk4(phi, length, steps, lam, E):
    """RK4 propagation of Y' = [[0, lam*phi - E], [1, 0]] Y over [0, length].

    phi holds 2*steps + 1 samples of the piece on the half-step grid.
    """
    n = lam.shape[0]
    h = length / steps
    out = np.empty((n, 2, 2))
    for i in prange(n):
        y11 = 1.0
        y12 = 0.0
        y21 = 0.0
        y22 = 1.0
        li = lam[i]
        Ei = E[i]
        for k in range(steps):
            q0 = li * phi[2 * k] - Ei
            qm = li * phi[2 * k + 1] - Ei
            q1 = li * phi[2 * k + 2] - Ei
            # stage 1
            a11 = q0 * y21
            a12 = q0 * y22
            a21 = y11
            a22 = y12
            # stage 2
            b11 = qm * (y21 + 0.5 * h * a21)
            b12 = qm * (y22 + 0.5 * h * a22)
            b21 = y11 + 0.5 * h * a11
            b22 = y12 + 0.5 * h * a12
            # stage 3
            c11 = qm * (y21 + 0.5 * h * b21)
            c12 = qm * (y22 + 0.5 * h * b22)
            c21 = y11 + 0.5 * h * b11
            c22 = y12 + 0.5 * h * b12
            # stage 4
            d11 = q1 * (y21 + h * c21)
            d12 = q1 * (y22 + h * c22)
            d21 = y11 + h * c11
            d22 = y12 + h * c12
            y11 += h / 6.0 * (a11 + 2.0 * b11 + 2.0 * c11 + d11)
            y12 += h / 6.0 * (a12 + 2.0 * b12 + 2.0 * c12 + d12)
            y21 += h / 6.0 * (a21 + 2.0 * b21 + 2.0 * c21 + d21)
            y22 += h / 6.0 * (a22 + 2.0 * b22 + 2.0 * c22 + d22)
        out[i, 0, 0] = y11
        out[i, 0, 1] = y12
        out[i, 1, 0] = y21
        out[i, 1, 1] = y22
    return out


@njit(cache=True, parallel=True)
def prufer_rk4(phi, length, steps, lam, E, theta0):
    """Polar coordinates (theta, L) of the flow, via the linear system.

    Integrates (y1, y2) = (y', y) with RK4 and periodic renormalization,
    then reads theta off the quadrant plus an exact count of the
    upward pi-crossings (theta' = 1 whenever y = 0, so y sign changes
    are in bijection with crossings; the step rule keeps at most one
    sign change per step).  L accumulates log of the renormalizations.
    """
    n = lam.shape[0]
    h = length / steps
    theta = np.empty(n)
    logr = np.empty(n)
    for i in prange(n):
        y1 = np.cos(theta0[i])
        y2 = np.sin(theta0[i])
        L = 0.0
        k = int(np.floor(theta0[i] / np.pi))
        sgn = 0.0
        if y2 > 0.0:
            sgn = 1.0
        elif y2 < 0.0:
            sgn = -1.0
        li = lam[i]
        Ei = E[i]
        for m in range(steps):
            q0 = li * phi[2 * m] - Ei
            qm = li * phi[2 * m + 1] - Ei
            q1 = li * phi[2 * m + 2] - Ei
            a1 = q0 * y2
            b1 = y1
            a2 = qm * (y2 + 0.5 * h * b1)
            b2 = y1 + 0.5 * h * a1
            a3 = qm * (y2 + 0.5 * h * b2)
            b3 = y1 + 0.5 * h * a2
            a4 = q1 * (y2 + h * b3)
            b4 = y1 + h * a3
            y1 += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            y2 += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            ns = 0.0
            if y2 > 0.0:
                ns = 1.0
            elif y2 < 0.0:
                ns = -1.0
            if ns != 0.0 and sgn != 0.0 and ns != sgn:
                k += 1
            if ns != 0.0:
                sgn = ns
            mx = abs(y1)
            if abs(y2) > mx:
                mx = abs(y2)
            if mx > 1e100:
                L += np.log(mx)
                y1 /= mx
                y2 /= mx
        r = np.hypot(y1, y2)
        L += np.log(r)
        ang = np.arctan2(y2, y1) % np.pi
        theta[i] = np.pi * k + ang
        logr[i] = L
    return theta, logr


@njit(cache=True, parallel=True)
def trace_orbit(x, y, z, max_iter, blowup):
    """Iterate the trace map T(x,y,z) = (2xy - z, x, y) with escape test.

    Escape at the first index where |x| and |y| both exceed 1 and the
    leading coordinate exceeds blowup, or where a coordinate stops
    being finite.  Returns (escaped, escape_index, max_abs).
    """
    n = x.shape[0]
    escaped = np.zeros(n, dtype=np.uint8)
    esc_idx = np.zeros(n, dtype=np.int64)
    max_abs = np.zeros(n)
    for i in prange(n):
        a = x[i]
        b = y[i]
        c = z[i]
        m = max(abs(a), abs(b), abs(c))
        esc = 0
        idx = 0
        if not (np.isfinite(a) and np.isfinite(b) and np.isfinite(c)):
            esc = 1
        else:
            for k in range(max_iter):
                a, b, c = 2.0 * a * b - c, a, b
                if not np.isfinite(a):
                    esc = 1
                    idx = k
                    break
                if abs(a) > m:
                    m = abs(a)
                if abs(a) > blowup and abs(a) > 1.0 and abs(b) > 1.0:
                    esc = 1
                    idx = k
                    break
        escaped[i] = esc
        esc_idx[i] = idx
        max_abs[i] = m
    return escaped, esc_idx, max_abs
