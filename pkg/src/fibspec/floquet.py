"""Floquet discriminants and spectral bands of periodic approximants."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .transfer import DEFAULT_STEPS_PER_UNIT, monodromy, monodromy_grid

#: |discriminant| level bounding the periodic spectrum
BAND_LEVEL = 2.0

#: residual below which a refined tangential point counts as a root
TOUCH_ACCEPT = 1e-8


@dataclass(frozen=True)
class Band:
    e_lo: float
    e_hi: float

    @property
    def width(self):
        return self.e_hi - self.e_lo


def discriminant(cell, E, steps=DEFAULT_STEPS_PER_UNIT):
    """Trace of the period monodromy; E is in the spectrum iff in [-2, 2]."""
    M = monodromy(cell, E, steps)
    return float(M[0, 0] + M[1, 1])


def discriminant_grid(cell, E, steps=DEFAULT_STEPS_PER_UNIT):
    M = monodromy_grid(cell, E, steps)
    return M[:, 0, 0] + M[:, 1, 1]


def band_scan(cell, e_min, e_max, grid=2001, tol=1e-9, steps=DEFAULT_STEPS_PER_UNIT):
    """Bands where |discriminant| <= 2, edges refined by bisection.

    Grid-based: bands (and gaps) narrower than the grid spacing are
    missed.  Tangentially touching bands merge, consistent with the
    closed-set semantics of the spectrum; see split_touching_bands for
    the Floquet-counting variant.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    Es = np.linspace(e_min, e_max, grid)
    disc = discriminant_grid(cell, Es, steps)
    inband = np.abs(disc) <= BAND_LEVEL

    def g(E):
        return abs(discriminant(cell, E, steps)) - BAND_LEVEL

    bands = []
    start = None
    for i in range(grid):
        if inband[i] and start is None:
            if i == 0:
                start = Es[0]
            else:
                start = brentq(g, Es[i - 1], Es[i], xtol=tol)
        elif not inband[i] and start is not None:
            edge = brentq(g, Es[i - 1], Es[i], xtol=tol)
            bands.append(Band(float(start), float(edge)))
            start = None
    if start is not None:
        bands.append(Band(float(start), float(Es[-1])))
    return bands


def _refine_extremum(f, lo, hi, tol):
    """Locate an interior extremum of smooth f by bisecting f'."""
    h = 1e-4 * (hi - lo)

    def df(E):
        return f(E + h) - f(E - h)

    try:
        return brentq(df, lo, hi, xtol=tol)
    except ValueError:
        return None


def level_roots(cell, level, e_min, e_max, grid=4001, tol=1e-10,
                steps=DEFAULT_STEPS_PER_UNIT):
    """All roots of discriminant(E) = level, tangential ones included.

    Sign changes bisect directly; tangential (double) roots appear as
    interior extrema of the residual and are kept when the refined
    residual is below TOUCH_ACCEPT.
    """
    Es = np.linspace(e_min, e_max, grid)
    g = discriminant_grid(cell, Es, steps) - level

    def f(E):
        return discriminant(cell, E, steps) - level

    roots = []
    for i in range(grid - 1):
        if g[i] == 0.0:
            roots.append(float(Es[i]))
        elif g[i] * g[i + 1] < 0:
            roots.append(float(brentq(f, Es[i], Es[i + 1], xtol=tol)))
    if g[-1] == 0.0:
        roots.append(float(Es[-1]))
    ag = np.abs(g)
    for i in range(1, grid - 1):
        if ag[i] < ag[i - 1] and ag[i] < ag[i + 1]:
            r = _refine_extremum(f, Es[i - 1], Es[i + 1], tol)
            if r is not None and abs(f(r)) <= TOUCH_ACCEPT:
                roots.append(float(r))
    roots.sort()
    out = []
    for r in roots:
        if not out or r - out[-1] > max(10 * tol, 1e-9):
            out.append(r)
    return out


def split_touching_bands(cell, bands, grid=4001, tol=1e-10,
                         steps=DEFAULT_STEPS_PER_UNIT, touch_tol=1e-9):
    """Split merged bands at interior points where |discriminant| = 2.

    This recovers the Floquet band count, where a closed gap separates
    two bands meeting at a point (a double eigenvalue), instead of the
    closed-set count produced by band_scan.
    """
    out = []
    for band in bands:
        if band.width <= 0:
            out.append(band)
            continue
        Es = np.linspace(band.e_lo, band.e_hi, grid)
        disc = discriminant_grid(cell, Es, steps)

        cuts = []
        for sign in (1.0, -1.0):
            h = sign * disc  # touch shows as an interior max of h reaching +2
            for i in range(1, grid - 1):
                if h[i] > h[i - 1] and h[i] > h[i + 1] and h[i] >= BAND_LEVEL - 1e-6:
                    r = _refine_extremum(
                        lambda E: sign * discriminant(cell, E, steps),
                        Es[i - 1], Es[i + 1], tol)
                    if r is None:
                        continue
                    val = sign * discriminant(cell, r, steps)
                    if abs(val - BAND_LEVEL) <= touch_tol:
                        cuts.append(float(r))
        cuts = sorted(c for c in cuts
                      if band.e_lo + 10 * tol < c < band.e_hi - 10 * tol)
        edges = [band.e_lo] + cuts + [band.e_hi]
        for lo, hi in zip(edges[:-1], edges[1:]):
            out.append(Band(lo, hi))
    return out


def spectrum_slice(cell_factory, e_values, lam_values,
                   steps=DEFAULT_STEPS_PER_UNIT):
    """Rows (lambda, E, discriminant, in_spectrum) over the grid.

    cell_factory maps a coupling to a CellPotential; rows are ordered
    lambda-major to keep output deterministic.
    """
    rows = []
    for lam in lam_values:
        cell = cell_factory(lam)
        disc = discriminant_grid(cell, e_values, steps)
        for E, d in zip(e_values, disc):
            rows.append((float(lam), float(E), float(d),
                         1 if abs(d) <= BAND_LEVEL else 0))
    return rows
