from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kronbrs.errors import DimensionError
from kronbrs.finite_field import BijectionFamily, FieldSpec
from kronbrs.laurent import LaurentSeries, Poly, laurent_from_quadratic_L, laurent_from_rational
from kronbrs.sequences import (
    BadicPoint,
    GeneratingMatrix,
    KroneckerSystem,
    bnorm,
    digital_point,
    digits,
    dshift,
    dsub,
    hankel_matrix,
    index_shift,
    int_norm,
    kronecker_point,
    point_norm,
    truncate,
)

F2 = FieldSpec.for_base(2)
ID2 = BijectionFamily.identity(F2)


def kron(series, F=F2, bij=None):
    return KroneckerSystem(F, tuple(series), bij or BijectionFamily.identity(F))


def test_digits():
    assert digits(0, 2) == []
    assert digits(5, 2) == [1, 0, 1]


def test_badic_point_values():
    x = BadicPoint.from_values([Fraction(5, 8), Fraction(1, 4)], 2, 4)
    assert x.coords == ((1, 0, 1, 0), (0, 1, 0, 0))
    assert x.values() == (Fraction(5, 8), Fraction(1, 4))
    with pytest.raises(DimensionError):
        BadicPoint(2, ((0, 1), (1,)))


def test_truncate_and_shift_examples():
    x = BadicPoint.from_values([Fraction(7, 8)], 2, 3)
    assert truncate(x, 1).values() == (Fraction(1, 2),)
    assert truncate(x, 3) == x
    z = BadicPoint.zero(2, 1, 3)
    assert truncate(z, 2) == z
    assert dshift(x, z) == x
    y = BadicPoint.from_values([Fraction(3, 8)], 2, 3)
    assert dshift(x, y).values() == (Fraction(1, 2),)


def test_index_shift_examples():
    assert index_shift(5, 0, 3, 2) == 5
    assert index_shift(5, 3, 3, 2) == 6
    assert index_shift(2, 2, 1, 3) == 1


def test_norms():
    assert bnorm((0, 0, 1), 2) == Fraction(1, 8)
    assert bnorm((0, 0, 0), 2) == 0
    assert point_norm(BadicPoint(2, ((1, 0), (0, 1)))) == Fraction(1, 8)
    assert int_norm(0, 2) == 0
    assert int_norm(5, 2) == 4


def test_kronecker_point_examples():
    L = LaurentSeries(1, (1, 1))
    assert kronecker_point(3, kron([L]), 2).coords == ((0, 1),)
    assert kronecker_point(2, kron([LaurentSeries(1, (1,))]), 3).coords == ((0, 0, 0),)


def test_hankel_examples():
    L = laurent_from_quadratic_L(F2, 16)
    C = hankel_matrix(L, 4, 4)
    assert C.tolist() == [[1, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]]
    assert not hankel_matrix(LaurentSeries.zero(), 3, 3).entries.any()


def test_digital_point_identity_matrix():
    C = GeneratingMatrix(np.eye(2, dtype=np.int64))
    assert digital_point(2, [C], 2, ID2).values() == (Fraction(1, 4),)


def test_hankel_bridge_small():
    L = LaurentSeries(1, (1, 1))
    system = kron([L])
    mats = system.hankel(8, 4)
    for n in range(16):
        assert digital_point(n, mats, 8, ID2) == kronecker_point(n, system, 8)


@pytest.mark.parametrize("b", [3, 4])
def test_hankel_bridge_nonbinary(b):
    F = FieldSpec.for_base(b)
    L1 = laurent_from_rational(F, Poly((1,)), Poly((1, 1, 0, 1)), 40)
    L2 = laurent_from_rational(F, Poly((2 % b, 1)), Poly((1, 0, 1, 1)), 40)
    psi = [list(range(b))] * 2
    psi[0] = [0] + list(range(b - 1, 0, -1))
    bij = BijectionFamily(F, tuple(map(tuple, psi)), ((tuple(range(b)),),))
    system = kron([L1, L2], F, bij)
    seq = system.digital(10, 4)
    for n in range(b**3):
        assert seq.point(n, 10) == kronecker_point(n, system, 10)


def test_digital_sequence_dimension_errors(lstar_seq):
    with pytest.raises(DimensionError):
        lstar_seq.y_block(0, 4, 65)
    with pytest.raises(DimensionError):
        lstar_seq.y_block(2**31, 1, 4)


def test_generating_matrix_equality():
    a = GeneratingMatrix(np.eye(2, dtype=np.int64))
    assert a == GeneratingMatrix(np.eye(2, dtype=np.int64))
    assert a.rows == 2 and a.cols == 2


pts = st.lists(st.integers(0, 1), min_size=6, max_size=6).map(lambda d: BadicPoint(2, (tuple(d[:3]), tuple(d[3:]))))


@given(pts, pts, pts)
def test_dshift_group(x, y, z):
    zero = BadicPoint.zero(2, 2, 3)
    assert dshift(x, y) == dshift(y, x)
    assert dshift(dshift(x, y), z) == dshift(x, dshift(y, z))
    assert dsub(dshift(x, y), y) == x
    assert dshift(x, zero) == x


@given(pts, pts, st.integers(0, 3))
def test_truncation_commutes_with_shift(x, y, m):
    assert truncate(dshift(x, y), m) == dshift(truncate(x, m), truncate(y, m))


@given(st.sampled_from([2, 3, 5]), st.data())
def test_index_shift_matches_digit_shift(b, data):
    m = 4
    n1, n2 = (data.draw(st.integers(0, b**m - 1)) for _ in range(2))
    d1 = tuple(int(x) for x in np.base_repr(n1, b).zfill(m))
    d2 = tuple(int(x) for x in np.base_repr(n2, b).zfill(m))
    s = dshift(BadicPoint(b, (d1,)), BadicPoint(b, (d2,)))
    assert index_shift(n1, n2, m, b) == int("".join(map(str, s.coords[0])), b)
