"""Pure-numpy fallback kernels, vectorized over the grid axis.

Semantics match fibspec._kernels_numba; select with FIBSPEC_BACKEND=numpy.
"""

import numpy as np


def _cs_vec(z):
    z = np.asarray(z, dtype=float)
    C = np.empty_like(z)
    S = np.empty_like(z)
    pos = z > 1e-6
    neg = z < -1e-6
    mid = ~(pos | neg)
    w = np.sqrt(np.abs(z))
    C[pos] = np.cos(w[pos])
    S[pos] = np.sin(w[pos]) / w[pos]
    C[neg] = np.cosh(w[neg])
    S[neg] = np.sinh(w[neg]) / w[neg]
    zm = z[mid]
    C[mid] = 1.0 - zm / 2.0 + zm * zm / 24.0 - zm ** 3 / 720.0
    S[mid] = 1.0 - zm / 6.0 + zm * zm / 120.0 - zm ** 3 / 5040.0
    return C, S


def pwc_transfer(values, lengths, lam, E):
    n = lam.shape[0]
    t11 = np.ones(n)
    t12 = np.zeros(n)
    t21 = np.zeros(n)
    t22 = np.ones(n)
    for v, l in zip(values, lengths):
        q = E - lam * v
        c, s = _cs_vec(q * l * l)
        a12 = -q * l * s
        a21 = l * s
        n11 = c * t11 + a12 * t21
        n12 = c * t12 + a12 * t22
        n21 = a21 * t11 + c * t21
        n22 = a21 * t12 + c * t22
        t11, t12, t21, t22 = n11, n12, n21, n22
    out = np.empty((n, 2, 2))
    out[:, 0, 0] = t11
    out[:, 0, 1] = t12
    out[:, 1, 0] = t21
    out[:, 1, 1] = t22
    return out


def transfer_rk4(phi, length, steps, lam, E):
    n = lam.shape[0]
    h = length / steps
    y11 = np.ones(n)
    y12 = np.zeros(n)
    y21 = np.zeros(n)
    y22 = np.ones(n)
    for k in range(steps):
        q0 = lam * phi[2 * k] - E
        qm = lam * phi[2 * k + 1] - E
        q1 = lam * phi[2 * k + 2] - E
        a11 = q0 * y21
        a12 = q0 * y22
        a21 = y11
        a22 = y12
        b11 = qm * (y21 + 0.5 * h * a21)
        b12 = qm * (y22 + 0.5 * h * a22)
        b21 = y11 + 0.5 * h * a11
        b22 = y12 + 0.5 * h * a12
        c11 = qm * (y21 + 0.5 * h * b21)
        c12 = qm * (y22 + 0.5 * h * b22)
        c21 = y11 + 0.5 * h * b11
        c22 = y12 + 0.5 * h * b12
        d11 = q1 * (y21 + h * c21)
        d12 = q1 * (y22 + h * c22)
        d21 = y11 + h * c11
        d22 = y12 + h * c12
        y11 = y11 + h / 6.0 * (a11 + 2.0 * b11 + 2.0 * c11 + d11)
        y12 = y12 + h / 6.0 * (a12 + 2.0 * b12 + 2.0 * c12 + d12)
        y21 = y21 + h / 6.0 * (a21 + 2.0 * b21 + 2.0 * c21 + d21)
        y22 = y22 + h / 6.0 * (a22 + 2.0 * b22 + 2.0 * c22 + d22)
    out = np.empty((n, 2, 2))
    out[:, 0, 0] = y11
    out[:, 0, 1] = y12
    out[:, 1, 0] = y21
    out[:, 1, 1] = y22
    return out


def prufer_rk4(phi, length, steps, lam, E, theta0):
    n = lam.shape[0]
    h = length / steps
    y1 = np.cos(theta0)
    y2 = np.sin(theta0)
    L = np.zeros(n)
    k = np.floor(theta0 / np.pi).astype(np.int64)
    sgn = np.sign(y2)
    for m in range(steps):
        q0 = lam * phi[2 * m] - E
        qm = lam * phi[2 * m + 1] - E
        q1 = lam * phi[2 * m + 2] - E
        a1 = q0 * y2
        b1 = y1
        a2 = qm * (y2 + 0.5 * h * b1)
        b2 = y1 + 0.5 * h * a1
        a3 = qm * (y2 + 0.5 * h * b2)
        b3 = y1 + 0.5 * h * a2
        a4 = q1 * (y2 + h * b3)
        b4 = y1 + h * a3
        y1 = y1 + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        y2 = y2 + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        ns = np.sign(y2)
        k += ((ns != 0) & (sgn != 0) & (ns != sgn)).astype(np.int64)
        sgn = np.where(ns != 0, ns, sgn)
        mx = np.maximum(np.abs(y1), np.abs(y2))
        big = mx > 1e100
        if np.any(big):
            L = np.where(big, L + np.log(mx), L)
            y1 = np.where(big, y1 / mx, y1)
            y2 = np.where(big, y2 / mx, y2)
    r = np.hypot(y1, y2)
    L = L + np.log(r)
    ang = np.arctan2(y2, y1) % np.pi
    return np.pi * k + ang, L


def trace_orbit(x, y, z, max_iter, blowup):
    a = np.array(x, dtype=float, copy=True)
    b = np.array(y, dtype=float, copy=True)
    c = np.array(z, dtype=float, copy=True)
    n = a.shape[0]
    escaped = np.zeros(n, dtype=np.uint8)
    esc_idx = np.zeros(n, dtype=np.int64)
    max_abs = np.max(np.abs(np.stack([a, b, c])), axis=0)
    bad = ~(np.isfinite(a) & np.isfinite(b) & np.isfinite(c))
    escaped[bad] = 1
    active = ~bad
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(max_iter):
            if not np.any(active):
                break
            a_new = 2.0 * a * b - c
            a_new = np.where(active, a_new, a)
            c = np.where(active, b, c)
            b = np.where(active, a, b)
            a = a_new
            nonfin = active & ~np.isfinite(a)
            esc = active & np.isfinite(a) & (np.abs(a) > blowup) & \
                (np.abs(a) > 1.0) & (np.abs(b) > 1.0)
            max_abs = np.where(active & np.isfinite(a),
                               np.maximum(max_abs, np.abs(a)), max_abs)
            newly = nonfin | esc
            escaped[newly] = 1
            esc_idx[newly] = k
            active = active & ~newly
    return escaped, esc_idx, max_abs
