import math

import numpy as np
import pytest

from fibspec.errors import NoDistinguishedDirectionError, NotHyperbolicError
from fibspec.sl2util import (angle_rp1, check_angle_bound,
                             check_angle_bound_constant_cell, eigen_direction,
                             matrix_norm, singular_directions)
from fibspec.transfer import transfer_constant


def random_hyperbolic(rng, max_log_norm=4.0):
    # products of random shears and a diagonal stretch, filtered to |tr| > 2
    while True:
        t = rng.uniform(0.5, max_log_norm)
        d = np.diag([math.exp(t), math.exp(-t)])
        s1 = np.array([[1.0, rng.uniform(-2, 2)], [0.0, 1.0]])
        s2 = np.array([[1.0, 0.0], [rng.uniform(-2, 2), 1.0]])
        m = s2 @ d @ s1
        if abs(np.trace(m)) > 2.0 + 1e-9:
            return m


def test_singular_directions_diagonal():
    exp_dir, con_dir = singular_directions(np.diag([2.0, 0.5]))
    assert np.allclose(exp_dir, [1.0, 0.0], atol=1e-14)
    assert np.allclose(con_dir, [0.0, 1.0], atol=1e-14)


def test_rotation_has_no_distinguished_direction():
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    with pytest.raises(NoDistinguishedDirectionError):
        singular_directions(np.array([[c, -s], [s, c]]))


def test_image_of_expanding_direction_attains_norm():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = random_hyperbolic(rng)
        exp_dir, con_dir = singular_directions(m)
        norm = matrix_norm(m)
        assert np.linalg.norm(m @ exp_dir) == pytest.approx(norm, rel=1e-9)
        assert np.linalg.norm(m @ con_dir) == pytest.approx(1.0 / norm, rel=1e-9)


def test_eigen_direction_examples():
    d, mu = eigen_direction(np.diag([3.0, 1.0 / 3.0]))
    assert np.allclose(d, [1.0, 0.0], atol=1e-14)
    assert mu == 3.0
    with pytest.raises(NotHyperbolicError):
        eigen_direction(np.array([[1.0, 1.0], [0.0, 1.0]]))  # parabolic, tr = 2
    d, mu = eigen_direction(np.array([[2.0, 1.0], [1.0, 1.0]]))
    assert mu == pytest.approx((3.0 + math.sqrt(5.0)) / 2.0, abs=1e-12)
    assert np.allclose(np.array([[2.0, 1.0], [1.0, 1.0]]) @ d, mu * d, atol=1e-12)


def test_angle_rp1():
    assert angle_rp1([1.0, 0.0], [1.0, 0.0]) == 0.0
    assert angle_rp1([1.0, 0.0], [0.0, 1.0]) == pytest.approx(math.pi / 2)
    r = 1.0 / math.sqrt(2.0)
    assert angle_rp1([1.0, 0.0], [r, r]) == pytest.approx(math.pi / 4)
    # antipodal identification
    assert angle_rp1([1.0, 0.0], [-1.0, 1e-12]) == pytest.approx(0.0, abs=1e-10)


def test_angle_bound_diagonal():
    angle, bound, holds = check_angle_bound(np.diag([3.0, 1.0 / 3.0]))
    assert holds
    assert angle == pytest.approx(0.0, abs=1e-15)
    assert bound == pytest.approx(math.pi / 18.0, abs=1e-12)


def test_angle_bound_random_sweep():
    rng = np.random.default_rng(11)
    for _ in range(2000):
        m = random_hyperbolic(rng, max_log_norm=9.0)  # norms up to ~8e3
        angle, bound, holds = check_angle_bound(m)
        assert holds, (m, angle, bound)


def test_trace_zero_squares_to_minus_identity():
    rng = np.random.default_rng(5)
    for _ in range(300):
        b = rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])
        a = rng.uniform(-2.0, 2.0)
        c = -(1.0 + a * a) / b
        m = np.array([[a, b], [c, -a]])  # tr 0, det 1
        assert np.allclose(m @ m, -np.eye(2), atol=1e-12 * max(1.0, np.abs(m).max() ** 2))


def test_positive_cell_angle_decays_exponentially():
    # angle between the expanding eigendirection and the image of the
    # most-expanded direction, for the constant-potential cell
    lam = 1e3
    m = transfer_constant(lam, 1.0, 0.0)
    angle, bound, holds = check_angle_bound(m)
    assert holds
    assert angle <= 10.0 * math.exp(-math.sqrt(lam))
    # the double-precision path saturates near 1e4; use the high-precision one
    angle_mp, bound_mp = check_angle_bound_constant_cell(1.0, 1.0, 1e4, 0.0)
    assert float(angle_mp) <= 10.0 * math.exp(-100.0)
    assert angle_mp <= bound_mp
