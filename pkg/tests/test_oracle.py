"""Tests for the numerical oracles: quadrature on SO(3), finite-difference
Lie derivatives, coordinate differential operators, and the rank-one
specialization."""

import math
from fractions import Fraction

import numpy as np
import pytest

from sl3rep.clebsch import q_float
from sl3rep.oracle import (QuadratureRule, coordinate_diffops_check,
                           fd_lie_derivative, integrate_K,
                           orthogonality_report, product_integral,
                           sample_group_point, sl2_extend, sl2_fd_derivative,
                           sl2_iwasawa, sl2_ladder_check, sl2_maass_check,
                           verify_theorem_main)
from sl3rep.series import GroupElement, extend_wigner
from sl3rep.wigner import EulerAngles, WignerIndex


def test_quadrature_mass_one():
    rule = QuadratureRule.for_degree(2)
    assert integrate_K(lambda ang: 1.0, rule) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(ValueError):
        QuadratureRule.for_degree(-1)


def test_orthogonality_small():
    rep = orthogonality_report(3)
    assert rep["max_deviation"] < 1e-10
    assert rep["count"] == sum((2 * l + 1) ** 2 for l in range(4))


def test_triple_product_matches_coupling():
    # integral of D^2_{a,b} D^l_{m1,m2} conj(D^{l+j}) equals
    # q(a,j,l,m1) q(b,j,l,m2) / (2(l+j)+1)
    rule = QuadratureRule.for_degree(6)
    cases = [((2, 1, -1), (3, 0, 2), 1), ((2, -1, -1), (2, 1, 1), -2),
             ((2, -2, 2), (4, 2, -2), 2)]
    for (a2, a, b), (l, m1, m2), j in cases:
        target = WignerIndex(l + j, m1 + a, m2 + b)
        val = product_integral(WignerIndex(a2, a, b), WignerIndex(l, m1, m2),
                               target, rule)
        expected = (q_float(a, j, l, m1) * q_float(b, j, l, m2)
                    / (2 * (l + j) + 1))
        assert val == pytest.approx(expected, abs=1e-11)


def test_fd_derivative_along_k_matches_exact():
    # the derivative along Y1 of the extension is i*m2 times the value
    from sl3rep.action import generator_matrix_numeric

    lam = (0.2 + 0.3j, -0.1, -0.1 - 0.3j)
    idx = WignerIndex(2, 1, -1)
    g = GroupElement.from_nak((0.3, -0.2, 0.1), (1.2, 0.8),
                              EulerAngles(0.7, 1.0, 2.1))
    got = fd_lie_derivative(lam, idx, generator_matrix_numeric("Y1"), g)
    want = 1j * idx.m2 * extend_wigner(lam, idx, g)
    assert got == pytest.approx(want, abs=1e-7)


def test_fd_step_validation():
    from sl3rep.action import generator_matrix_numeric

    g = sample_group_point(np.random.default_rng(0))
    with pytest.raises(ValueError):
        fd_lie_derivative((0, 0, 0), WignerIndex(1, 0, 0),
                          generator_matrix_numeric("Z0"), g, h=1e-2)


def test_theorem_main_small():
    rep = verify_theorem_main((0.15 + 0.4j, -0.3, 0.15 - 0.4j),
                              lmax=2, samples=3, seed=11)
    assert rep["max_deviation"] < 1e-6


def test_theorem_main_detects_wrong_lambda():
    # the oracle is sensitive: evaluating the expansion at a shifted
    # parameter while differentiating at the true one must fail
    from sl3rep.action import act_Z, generator_matrix_numeric
    from sl3rep.oracle import fd_lie_derivative_many

    lam_true = (0.3, 0.2, -0.5)
    lam_wrong = (0.8, -0.3, -0.5)
    g = sample_group_point(np.random.default_rng(3))
    idx = WignerIndex(2, 1, 0)
    fd = fd_lie_derivative_many(lam_true, [idx],
                                generator_matrix_numeric("Z0"), g)[0]
    rhs = sum(c * extend_wigner(lam_true, t, g)
              for t, c in act_Z(0, idx, lam_wrong).items())
    assert abs(fd - rhs) > 1e-3


def test_coordinate_diffops_diagonal_index():
    # content requires m1 = m2 (the coordinate slice sits at k = identity)
    lam = (0.25 + 0.1j, -0.5, 0.25 - 0.1j)
    point = (0.2, -0.4, 0.3, 1.3, 0.7)
    rep = coordinate_diffops_check(lam, WignerIndex(2, 1, 1), point)
    assert rep["max_deviation"] < 1e-5
    assert set(rep["rows"]) == {"Y1", "H1", "H2", "X1", "X2", "X3",
                                "Z-2", "Z0", "Z2"}


def test_coordinate_diffops_off_diagonal_vanishes():
    # for m1 != m2 the restricted function is identically zero, so both
    # sides of every row are zero
    lam = (0.1, 0.2, -0.3)
    rep = coordinate_diffops_check(lam, WignerIndex(2, 1, 0),
                                   (0.1, 0.2, -0.1, 1.1, 0.9))
    assert rep["max_deviation"] < 1e-12


def test_sl2_iwasawa_round_trip():
    g = np.array([[1.3, 0.4], [-0.7, 0.554]])
    g = g / math.sqrt(abs(np.linalg.det(g)))
    x, y, theta = sl2_iwasawa(g)
    n = np.array([[1.0, x], [0.0, 1.0]])
    a = np.diag([math.sqrt(y), 1.0 / math.sqrt(y)])
    k = np.array([[math.cos(theta), -math.sin(theta)],
                  [math.sin(theta), math.cos(theta)]])
    assert np.abs(n @ a @ k - g).max() < 1e-12
    with pytest.raises(ValueError):
        sl2_iwasawa(np.diag([2.0, 1.0]))


def test_sl2_extend_equivariance():
    # f(n a g) = a^(1+2nu) f(g)
    nu = 0.3 + 0.7j
    g = np.array([[0.9, 0.2], [-0.5, 1.0]])
    g = g / math.sqrt(np.linalg.det(g))
    t = 1.4
    a = np.diag([t, 1 / t])
    lhs = sl2_extend(nu, 3, a @ g)
    rhs = t ** (1 + 2 * nu) * sl2_extend(nu, 3, g)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_sl2_richardson_accuracy():
    nu = 0.21 - 0.43j
    g = np.array([[1.1, 0.3], [0.2, (1 + 0.3 * 0.2) / 1.1]])
    plain = sl2_ladder_check(nu, 3, g)
    assert plain["max_deviation"] < 1e-9


def test_sl2_ladder_zero_coefficient():
    # at 2nu + 1 = l the lowering coefficient vanishes: the fd derivative
    # of the lowering combination is numerically zero
    nu = 1.0  # 2nu+1 = 3 = l
    from sl3rep.oracle import SL2_LOWER
    g = np.array([[1.2, -0.4], [0.3, (1 - 0.4 * 0.3) / 1.2]])
    d = sl2_fd_derivative(nu, 3, SL2_LOWER, g)
    assert abs(d) < 1e-9


def test_sl2_maass():
    rep = sl2_maass_check(0.37 + 0.11j, 2, x=0.4, y=1.7)
    assert rep["max_deviation"] < 1e-5
