"""Tests for Wigner functions, Euler angles, and so(3) derivative formulas."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3rep.wigner import (EulerAngles, WignerIndex, euler_from_matrix,
                           eval_vector, left_derivative_Y, little_d,
                           matrix_from_euler, right_derivative_Y, wigner_D,
                           wigner_D_matrix)

ANGLES = st.tuples(st.floats(0, 2 * math.pi), st.floats(0.01, math.pi - 0.01),
                   st.floats(0, 2 * math.pi)).map(lambda t: EulerAngles(*t))


def test_little_d_edge_values():
    # d^l at cos(beta) = 1 is the identity matrix
    for l in range(4):
        for m1 in range(-l, l + 1):
            for m2 in range(-l, l + 1):
                assert little_d(l, m1, m2, 1.0) == pytest.approx(
                    1.0 if m1 == m2 else 0.0)


def test_little_d_l1_explicit():
    # the 3-dimensional representation in closed form
    x = 0.37
    s = math.sqrt(1 - x * x)
    assert little_d(1, 0, 0, x) == pytest.approx(x)
    assert little_d(1, 1, 1, x) == pytest.approx((1 + x) / 2)
    assert little_d(1, -1, -1, x) == pytest.approx((1 + x) / 2)
    assert little_d(1, 1, -1, x) == pytest.approx((1 - x) / 2)
    assert little_d(1, 1, 0, x) == pytest.approx(s / math.sqrt(2))
    assert little_d(1, 0, 1, x) == pytest.approx(-s / math.sqrt(2))


def test_index_validation():
    with pytest.raises(ValueError):
        WignerIndex(1, 2, 0).validate()
    with pytest.raises(ValueError):
        little_d(2, 0, 0, 1.5)


@given(ANGLES, ANGLES)
@settings(max_examples=25, deadline=None)
def test_homomorphism(a1, a2):
    k12 = matrix_from_euler(a1) @ matrix_from_euler(a2)
    a12 = euler_from_matrix(k12)
    for l in (1, 2):
        lhs = wigner_D_matrix(l, a12)
        rhs = wigner_D_matrix(l, a1) @ wigner_D_matrix(l, a2)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_spin1_matches_defining_rep():
    # D^1 is equivalent to the rotation matrix itself; check via traces,
    # which are basis-independent
    ang = EulerAngles(0.7, 1.2, 2.9)
    assert np.trace(wigner_D_matrix(1, ang)) == pytest.approx(
        np.trace(matrix_from_euler(ang)), abs=1e-12)


@given(ANGLES)
@settings(max_examples=40, deadline=None)
def test_euler_round_trip(ang):
    k = matrix_from_euler(ang)
    ang2 = euler_from_matrix(k)
    assert np.abs(matrix_from_euler(ang2) - k).max() < 1e-10


def test_euler_gimbal_lock():
    for beta in (0.0, math.pi):
        k = matrix_from_euler(EulerAngles(0.9, beta, 0.4))
        a, b, g = euler_from_matrix(k)
        assert g == 0.0
        assert np.abs(matrix_from_euler(EulerAngles(a, b, g)) - k).max() < 1e-10


def test_euler_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        euler_from_matrix(np.diag([2.0, 1.0, 0.5]))


def _fd_right(i, idx, ang, h=1e-6):
    """Reference right derivative along the Y_i one-parameter subgroup."""
    from scipy.linalg import expm

    from sl3rep.action import generator_matrix_numeric

    x = generator_matrix_numeric(f"Y{i}").real
    k = matrix_from_euler(ang)
    fwd = wigner_D(idx, euler_from_matrix(k @ expm(h * x)))
    bwd = wigner_D(idx, euler_from_matrix(k @ expm(-h * x)))
    return (fwd - bwd) / (2 * h)


def _fd_left(i, idx, ang, h=1e-6):
    from scipy.linalg import expm

    from sl3rep.action import generator_matrix_numeric

    x = generator_matrix_numeric(f"Y{i}").real
    k = matrix_from_euler(ang)
    fwd = wigner_D(idx, euler_from_matrix(expm(h * x) @ k))
    bwd = wigner_D(idx, euler_from_matrix(expm(-h * x) @ k))
    return (fwd - bwd) / (2 * h)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_right_derivative_matches_fd(i):
    ang = EulerAngles(0.8, 1.1, 2.3)
    for idx in [WignerIndex(1, 0, 1), WignerIndex(2, 1, -1), WignerIndex(3, -2, 2)]:
        exact = eval_vector(right_derivative_Y(i, idx), ang)
        assert exact == pytest.approx(_fd_right(i, idx, ang), abs=1e-7)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_left_derivative_matches_fd(i):
    ang = EulerAngles(0.8, 1.1, 2.3)
    for idx in [WignerIndex(1, 0, 1), WignerIndex(2, 1, -1), WignerIndex(3, -2, 2)]:
        exact = eval_vector(left_derivative_Y(i, idx), ang)
        assert exact == pytest.approx(_fd_left(i, idx, ang), abs=1e-7)


def test_y_derivatives_satisfy_so3_bracket():
    # [Y1, Y2] = -Y3 as matrices, so the derivative formulas must obey
    # [pi(Y1), pi(Y2)] = -pi(Y3) pointwise
    from sl3rep.ktvector import KTypeVector

    ang = EulerAngles(0.4, 0.9, 5.0)

    def apply(i, vec):
        out = KTypeVector()
        for jdx, c in vec.items():
            out = out + right_derivative_Y(i, jdx).scaled(c)
        return out

    for idx in [WignerIndex(2, 1, 0), WignerIndex(3, -1, 2)]:
        v = KTypeVector({idx: 1})
        lhs = apply(1, apply(2, v)) - apply(2, apply(1, v))
        rhs = apply(3, v).scaled(-1)
        assert eval_vector(lhs - rhs, ang) == pytest.approx(0, abs=1e-12)
