"""Singular and eigen directions of SL(2,R) matrices; the angle bound.

Directions are projective: unit vectors with the first nonzero
component made positive.  Angles between directions are computed as
atan2(|cross|, |dot|), which equals arccos(|dot|) but keeps full
precision for nearly parallel vectors.
"""

import math

import numpy as np

from .errors import NoDistinguishedDirectionError, NotHyperbolicError

ANGLE_SLACK = 1e-12


def _canonical(v):
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    v = v / n
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    return v


def angle_rp1(u, v):
    """Angle in [0, pi/2] between two projective directions."""
    cross = abs(u[0] * v[1] - u[1] * v[0])
    dot = abs(u[0] * v[0] + u[1] * v[1])
    return math.atan2(cross, dot)


def matrix_norm(m):
    """Spectral norm via the closed-form 2x2 symmetric eigenproblem."""
    p = m[0, 0] ** 2 + m[1, 0] ** 2
    r = m[0, 1] ** 2 + m[1, 1] ** 2
    q = m[0, 0] * m[0, 1] + m[1, 0] * m[1, 1]
    lam_max = 0.5 * (p + r + math.hypot(p - r, 2.0 * q))
    return math.sqrt(lam_max)


def singular_directions(m):
    """(expanding, contracting) unit directions; |m @ expanding| = ||m||.

    Computed from the closed-form eigenvectors of m^T m.  Requires
    ||m|| > 1 strictly; at norm 1 the directions are not unique.
    """
    m = np.asarray(m, dtype=float)
    p = m[0, 0] ** 2 + m[1, 0] ** 2
    r = m[0, 1] ** 2 + m[1, 1] ** 2
    q = m[0, 0] * m[0, 1] + m[1, 0] * m[1, 1]
    lam_max = 0.5 * (p + r + math.hypot(p - r, 2.0 * q))
    if math.sqrt(lam_max) <= 1.0 + 1e-12:
        raise NoDistinguishedDirectionError("matrix norm is 1; no expanding direction")
    # eigenvector for lam_max of [[p, q], [q, r]]: pick the better-conditioned row
    v1 = np.array([q, lam_max - p])
    v2 = np.array([lam_max - r, q])
    u = v1 if np.abs(v1).sum() >= np.abs(v2).sum() else v2
    expanding = _canonical(u)
    contracting = _canonical(np.array([-expanding[1], expanding[0]]))
    return expanding, contracting


def eigen_direction(m):
    """(direction, eigenvalue) for the eigenvalue with |mu| > 1."""
    m = np.asarray(m, dtype=float)
    tr = m[0, 0] + m[1, 1]
    if abs(tr) <= 2.0:
        raise NotHyperbolicError(f"trace {tr} has modulus <= 2")
    disc = math.sqrt(tr * tr - 4.0)
    mu = 0.5 * (tr + disc) if tr > 0 else 0.5 * (tr - disc)
    v1 = np.array([m[0, 1], mu - m[0, 0]])
    v2 = np.array([mu - m[1, 1], m[1, 0]])
    v = v1 if np.abs(v1).sum() >= np.abs(v2).sum() else v2
    return _canonical(v), float(mu)


def check_angle_bound(m):
    """Angle between the expanding eigendirection and m @ U(m), with bound.

    The bound is pi / (2 |mu| ||m||); holds is angle <= bound + slack.
    """
    direction, mu = eigen_direction(m)
    expanding, _ = singular_directions(m)
    image = np.asarray(m, dtype=float) @ expanding
    image = _canonical(image)
    angle = angle_rp1(direction, image)
    bound = math.pi / (2.0 * abs(mu) * matrix_norm(m))
    return angle, bound, angle <= bound + ANGLE_SLACK


def check_angle_bound_constant_cell(value, length, lam, E, dps=260):
    """check_angle_bound for a constant-potential cell in high precision.

    The interesting couplings make the angle far smaller than double
    rounding can represent (it scales like ||m||^-2), so this path
    evaluates the closed-form cosh/sinh matrix and the 2x2 eigenvector
    algebra in mpmath.  Returns (angle, bound) as mpmath floats.
    """
    from mpmath import mp, mpf

    with mp.workdps(dps):
        q = mpf(E) - mpf(lam) * mpf(value)
        l = mpf(length)
        if q >= 0:
            w = mp.sqrt(q)
            if w == 0:
                a, b, c, d = mpf(1), mpf(0), l, mpf(1)
            else:
                a = mp.cos(w * l)
                b = -w * mp.sin(w * l)
                c = mp.sin(w * l) / w
                d = a
        else:
            w = mp.sqrt(-q)
            a = mp.cosh(w * l)
            b = w * mp.sinh(w * l)
            c = mp.sinh(w * l) / w
            d = a
        tr = a + d
        if abs(tr) <= 2:
            raise NotHyperbolicError("constant cell is not hyperbolic here")
        disc = mp.sqrt(tr * tr - 4)
        mu = (tr + disc) / 2 if tr > 0 else (tr - disc) / 2
        v1 = (b, mu - a)
        v2 = (mu - d, c)
        v = v1 if abs(v1[0]) + abs(v1[1]) >= abs(v2[0]) + abs(v2[1]) else v2
        nv = mp.sqrt(v[0] ** 2 + v[1] ** 2)
        v = (v[0] / nv, v[1] / nv)
        p = a * a + c * c
        r = b * b + d * d
        qq = a * b + c * d
        lam_max = (p + r + mp.sqrt((p - r) ** 2 + 4 * qq * qq)) / 2
        u1 = (qq, lam_max - p)
        u2 = (lam_max - r, qq)
        u = u1 if abs(u1[0]) + abs(u1[1]) >= abs(u2[0]) + abs(u2[1]) else u2
        nu = mp.sqrt(u[0] ** 2 + u[1] ** 2)
        u = (u[0] / nu, u[1] / nu)
        img = (a * u[0] + b * u[1], c * u[0] + d * u[1])
        ni = mp.sqrt(img[0] ** 2 + img[1] ** 2)
        img = (img[0] / ni, img[1] / ni)
        cross = abs(v[0] * img[1] - v[1] * img[0])
        dot = abs(v[0] * img[0] + v[1] * img[1])
        angle = mp.atan2(cross, dot)
        bound = mp.pi / (2 * abs(mu) * mp.sqrt(lam_max))
        return angle, bound
