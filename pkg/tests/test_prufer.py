import math

import numpy as np
import pytest

from fibspec.errors import FitDomainError, PreconditionError
from fibspec.potentials import (BumpPiece, ConstantPiece, PiecewiseConstantPiece,
                                PolynomialPiece, ZeroPiece, discrete_split,
                                splitcubic)
from fibspec.prufer import (fit_loglog, integrate_prufer, measure_boundary_zero,
                            measure_negative_lognorm, measure_positive_growth,
                            measure_rotation, prufer_steps)
from fibspec.transfer import transfer_piece

E_COUNTER = 4.0 * math.pi ** 2


def test_free_flow_closed_form():
    # phi = 0, E = 0: dtheta/dx = cos^2 theta, so tan theta(x) = tan theta0 + x
    st = integrate_prufer(ZeroPiece(), 0.0, 0.0, math.pi / 4, 4096)
    assert st.theta == pytest.approx(math.atan(2.0), abs=1e-8)


@pytest.mark.parametrize("piece", [ZeroPiece(), BumpPiece(), splitcubic(),
                                   ConstantPiece(-1.0)])
def test_initial_slope_is_one(piece):
    # theta' = 1 at theta = 0 regardless of the potential
    st = integrate_prufer(piece, 50.0, 1.0, 0.0, 256, 0.0, 1e-3)
    assert st.theta / 1e-3 == pytest.approx(1.0, abs=2e-3)


@pytest.mark.parametrize("piece", [ZeroPiece(), ConstantPiece(1.0), BumpPiece(),
                                   splitcubic(), discrete_split(4.0)])
@pytest.mark.parametrize("lam", [0.0, 1.0, 10.0, 1e3])
@pytest.mark.parametrize("E", [1.0, E_COUNTER])
def test_consistency_with_transfer(piece, lam, E):
    # exp(L) (cos theta, sin theta) must equal T (cos theta0, sin theta0)
    theta0 = 0.3
    st = integrate_prufer(piece, lam, E, theta0, 8192)
    T = transfer_piece(piece, lam, E, 8192)
    v = T @ np.array([math.cos(theta0), math.sin(theta0)])
    w = math.exp(st.logr) * np.array([math.cos(st.theta), math.sin(st.theta)])
    rel = np.max(np.abs(v - w)) / np.max(np.abs(v))
    assert rel <= 1e-6


@pytest.mark.parametrize("piece,interval", [(ConstantPiece(-1.0), None),
                                            (splitcubic(), (1.0 / 3.0, 1.0))])
def test_theta_monotone_in_negative_regions(piece, interval):
    for lam in (10.0, 1e3, 1e5):
        a = 0.0 if interval is None else interval[0]
        b = piece.length if interval is None else interval[1]
        st = integrate_prufer(piece, lam, 1.0, 0.4,
                              prufer_steps(piece, lam, 1.0, b - a), a, b)
        assert st.theta >= 0.4


def test_stiffness_guard_step_halving():
    for lam in (1e3, 1e6):
        base = prufer_steps(BumpPiece(), lam, 1.0, 1.0)
        s1 = integrate_prufer(BumpPiece(), lam, 1.0, 0.5, base)
        s2 = integrate_prufer(BumpPiece(), lam, 1.0, 0.5, 2 * base)
        assert abs(s1.logr - s2.logr) <= 1e-5 * (1.0 + abs(s2.logr))


def test_fit_loglog_requires_two_points():
    with pytest.raises(FitDomainError):
        fit_loglog([100.0], [3.0])
    with pytest.raises(FitDomainError):
        measure_positive_growth(BumpPiece(), 1.0, [100.0])


def test_measure_preconditions():
    with pytest.raises(PreconditionError):
        measure_rotation(ConstantPiece(-1.0), -1.0, [1e2, 1e3])
    with pytest.raises(PreconditionError):
        measure_positive_growth(BumpPiece(), 1.0, [1e2, 1e3], theta0=0.0)
    with pytest.raises(PreconditionError):
        # interior zero violates strict negativity
        measure_negative_lognorm(splitcubic(), 1.0, [1e2, 1e3])
    with pytest.raises(PreconditionError):
        # slope at the right endpoint vanishes: -x^2 (1-x)^2 style lobe
        measure_boundary_zero(PolynomialPiece([0.0, 0.0, -1.0, 2.0, -1.0]),
                              1.0, [1e2, 1e3])
    with pytest.raises(PreconditionError):
        measure_positive_growth(ConstantPiece(-1.0), 1.0, [1e2, 1e3])
    with pytest.raises(PreconditionError):
        measure_rotation(ConstantPiece(1.0), 1.0, [1e2, 1e3])


def test_exponent_smoke_small_grids():
    # coarse three-point versions of the acceptance fits
    lams = np.geomspace(1e2, 1e4, 5)
    fit = measure_positive_growth(ConstantPiece(1.0), 1.0, lams)
    assert fit.exponent == pytest.approx(0.5, abs=0.05)
    assert fit.r_squared > 0.99
    fit = measure_rotation(ConstantPiece(-1.0), 1.0, lams)
    assert fit.exponent == pytest.approx(0.5, abs=0.05)
    fit = measure_negative_lognorm(ConstantPiece(-1.0), 1.0, lams)
    assert abs(fit.exponent) < 0.6  # no systematic sqrt growth
    assert fit.lambda_range == (100.0, 10000.0)
