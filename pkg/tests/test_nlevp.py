import math

import numpy as np
import pytest

from fibspec.errors import DegenerateEnergyError, PreconditionError
from fibspec.floquet import discriminant, level_roots
from fibspec.nlevp import (NlevpProblem, build, build_general, build_halfcell,
                           build_period2, eigenvalue_scan, scaled_det,
                           singular_values)
from fibspec.potentials import ZeroPiece, ConstantPiece, assemble, discrete_split
from fibspec.words import approximant_word

E_COUNTER = 4.0 * math.pi ** 2
LAM_STAR = 92.46773


def test_period2_matches_displayed_matrix():
    E, lam, th = 7.0, 3.0, 0.7
    r = math.sqrt(E - lam)
    s = math.sqrt(E)
    ph = np.exp(1j * th)
    expect = np.array([
        [math.sin(r), math.cos(r), 0.0, -1.0],
        [r * math.cos(r), -r * math.sin(r), -s, 0.0],
        [0.0, -ph, math.sin(s), math.cos(s)],
        [-ph * r, 0.0, s * math.cos(s), -s * math.sin(s)],
    ], dtype=complex)
    got = build_period2(E, lam, th)
    assert np.allclose(got, expect, atol=1e-14)


def test_general_equals_period2_identity_permutation():
    E, lam, th = 11.0, 2.0, math.pi
    assert np.array_equal(build_general(E, lam, th, "10"), build_period2(E, lam, th))


def test_complex_continuation_below_threshold():
    m = build_period2(1.0, 3.0, 0.0)  # E < lambda: phi_1 imaginary
    assert np.iscomplexobj(m)
    assert abs(m[0, 0] - 1j * math.sinh(math.sqrt(2.0))) < 1e-12


def test_dimensions():
    word8 = approximant_word(5)
    assert len(word8) == 8
    assert build_general(5.0, 1.0, 0.0, word8).shape == (16, 16)
    assert build_halfcell(5.0, 1.0, 0.0, "1", 4.0).shape == (4, 4)
    m = build_general(5.0, 1.0, math.pi, "10")
    assert np.max(np.abs(m.imag)) < 1e-12  # e^{i pi} = -1 keeps entries real


def test_degenerate_energy_guard():
    with pytest.raises(DegenerateEnergyError):
        build_period2(3.0, 3.0, 0.0)
    with pytest.raises(DegenerateEnergyError):
        build_general(0.0, 1.0, 0.0, "10")


def test_free_period2_singularity():
    # lam = 0: Floquet eigenvalues of the free period-2 problem at (m pi)^2
    d_root = abs(scaled_det(NlevpProblem.from_word("10"), math.pi ** 2, 0.0, 0.0)[0])
    d_off = abs(scaled_det(NlevpProblem.from_word("10"), 5.0, 0.0, 0.0)[0])
    assert d_root < 1e-12
    assert d_off > 1e-3


def test_eigenvalue_scan_free_oracle():
    problem = NlevpProblem.from_word("10")
    roots = eigenvalue_scan(problem, 0.0, 0.0, (0.5, 50.0), 4001)
    expect = [math.pi ** 2, 4.0 * math.pi ** 2]
    assert len(roots) == len(expect)
    for r, e in zip(roots, expect):
        assert r == pytest.approx(e, abs=1e-6)
    assert eigenvalue_scan(problem, 0.0, 0.0, (0.5, 0.6), 10) == []


def test_theta_guard():
    with pytest.raises(PreconditionError):
        eigenvalue_scan(NlevpProblem.from_word("10"), 0.0, 0.5, (0.5, 10.0), 100)


def test_halfcell_lambda_zero_matches_free():
    # with lam = 0 every subdomain is free; roots must match the unit-cell
    # problem on the all-zero word of the same period
    half = NlevpProblem.from_word_halfcell("1", 4.0)
    free = NlevpProblem.from_word("0")
    r1 = eigenvalue_scan(half, 0.0, 0.0, (0.5, 100.0), 4001)
    r2 = eigenvalue_scan(free, 0.0, 0.0, (0.5, 100.0), 4001)
    assert len(r1) == len(r2)
    for a, b in zip(r1, r2):
        assert a == pytest.approx(b, abs=1e-7)


def test_halfcell_counterexample_energy_in_spectrum():
    # at the trace-zero coupling the discriminant at E = 4 pi^2 is 0, i.e.
    # mid-band; the matrix must be singular for some interior phase
    problem = NlevpProblem.from_word_halfcell("10", 4.0)
    thetas = np.linspace(0.0, math.pi, 101)
    dets = []
    for th in thetas:
        m = build(problem, E_COUNTER, LAM_STAR, th)
        scale = np.max(np.abs(m), axis=1, keepdims=True)
        dets.append(abs(np.linalg.det(m / scale)))
    dets = np.array(dets)
    assert dets.min() / dets.max() < 1e-4
    # ... and it is nearly exactly singular at theta = pi/2 (disc = 2 cos theta)
    i = np.argmin(np.abs(thetas - math.pi / 2))
    assert dets[i] / dets.max() < 1e-5


@pytest.mark.parametrize("builder,lam", [("general", 1.0), ("general", 10.0),
                                         ("halfcell", LAM_STAR)])
def test_roots_match_floquet_levels(builder, lam):
    word = "10"
    if builder == "general":
        problem = NlevpProblem.from_word(word)
        piece1 = ConstantPiece(1.0)
    else:
        problem = NlevpProblem.from_word_halfcell(word, 4.0)
        piece1 = discrete_split(4.0)
    cell = assemble(word, ZeroPiece(), piece1, lam)
    # near-degenerate root pairs at weak coupling sit ~3e-3 apart, so the
    # scan grid must resolve them on both sides
    for theta, level in ((0.0, 2.0), (math.pi, -2.0)):
        roots = eigenvalue_scan(problem, lam, theta, (0.2, 121.0), 240001)
        roots = [r for r in roots if 0.5 < r < 120.5]
        floq = [r for r in level_roots(cell, level, 0.2, 121.0, 240001)
                if 0.5 < r < 120.5]
        assert len(roots) == len(floq)
        for a, b in zip(roots, floq):
            assert a == pytest.approx(b, abs=1e-6)
        for r in roots:
            m = build(problem, r, lam, theta)
            sv_min, sv_max = singular_values(m)
            assert sv_min <= 1e-6 * sv_max
            assert abs(discriminant(cell, r) - level) < 1e-6
