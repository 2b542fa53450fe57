from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kronbrs.errors import AdmissibilityError, DimensionError
from kronbrs.finite_field import BijectionFamily, FieldSpec
from kronbrs.nets import (
    compositions,
    compute_T,
    kappa,
    kappa_fast,
    minimal_t,
    net_check,
    ud_criterion,
)
from kronbrs.sequences import BadicPoint, DigitalSequence, GeneratingMatrix

F2 = FieldSpec.for_base(2)


def pts1(values, P=4):
    return [BadicPoint.from_values([Fraction(v)], 2, P) for v in values]


def brute_net(points, t, m, b):
    """Oracle: count points in every elementary interval by exact values."""
    s = points[0].s
    vals = [p.values() for p in points]
    for d in compositions(m - t, s):
        cells = {}
        for v in vals:
            key = tuple(int(x * b**di) for x, di in zip(v, d))
            cells[key] = cells.get(key, 0) + 1
        if len(cells) < b ** (m - t) or any(c != b**t for c in cells.values()):
            return False
    return True


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]


def test_van_der_corput_block():
    vdc = pts1([0, Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)])
    assert net_check(vdc, 0, 2, 1, 2).ok


def test_net_failure_witness():
    res = net_check(pts1([0, 0, Fraction(1, 2), Fraction(1, 2)]), 0, 2, 1, 2)
    assert not res.ok
    assert res.witness.bounds() == [(Fraction(1, 4), Fraction(1, 2))]
    assert res.count == 0


def test_t_equals_m_is_trivial():
    assert net_check(pts1([0, 0, 0, 0]), 2, 2, 1, 2).ok


def test_net_check_validates_size():
    with pytest.raises(DimensionError):
        net_check(pts1([0, 0, 0]), 0, 2, 1, 2)


def test_compute_T_trivial_matrices():
    eye = GeneratingMatrix(np.eye(6, dtype=np.int64))
    zero = GeneratingMatrix(np.zeros((6, 6), dtype=np.int64))
    for m in range(1, 7):
        assert compute_T(F2, [eye], m) == 0
        assert compute_T(F2, [zero], m) == m


@pytest.mark.parametrize("m", range(1, 7))
def test_compute_T_matches_exhaustive(lstar_seq, m):
    mats = tuple(GeneratingMatrix(C.entries[:, :m]) for C in lstar_seq.matrices)
    T = compute_T(F2, mats, m)
    block = lstar_seq.points(0, 2**m, 12)
    assert T == minimal_t(block, m, 1, 2)


@pytest.mark.parametrize("m", range(1, 5))
def test_compute_T_matches_exhaustive_pair(pair_seq, m):
    T = compute_T(F2, pair_seq.matrices, m)
    block = pair_seq.points(0, 2**m, 12)
    assert T == minimal_t(block, m, 2, 2)
    assert brute_net(block, T, m, 2)
    if T:
        assert not brute_net(block, T - 1, m, 2)


def test_ud_profile_of_fixture(lstar_seq):
    prof = ud_criterion(F2, lstar_seq.matrices, 8)
    gaps = [g for _, _, g in prof.rows]
    assert gaps == list(range(1, 9))
    assert prof.verdict == "consistent with u.d."
    assert "heuristic" in prof.as_text()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_net_property_monotone_in_t(m, data):
    raw = data.draw(st.lists(st.integers(0, 2**6 - 1), min_size=2**m, max_size=2**m))
    block = pts1([Fraction(v, 64) for v in raw], 6)
    t0 = minimal_t(block, m, 1, 2)
    for t in range(m + 1):
        assert net_check(block, t, m, 1, 2).ok == (t >= t0)
        assert brute_net(block, t, m, 2) == (t >= t0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.data())
def test_compute_T_random_matrices(m, data):
    s = data.draw(st.integers(1, 2))
    mats = [
        GeneratingMatrix(np.array(data.draw(st.lists(st.integers(0, 1), min_size=m * m, max_size=m * m))).reshape(m, m))
        for _ in range(s)
    ]
    seq = DigitalSequence(F2, tuple(mats), BijectionFamily.identity(F2))
    assert compute_T(F2, mats, m) == minimal_t(seq.x_block(0, 2**m, m), m, s, 2)


def test_kappa_two_points():
    rep = kappa(pts1([0, Fraction(1, 2)]), 1)
    assert rep.kappa_m == Fraction(1, 2)
    assert rep.tau_m == 1
    assert rep.tau_printed == 0
    with pytest.raises(AdmissibilityError):
        rep.require_tau("printed")


def test_kappa_duplicates():
    rep = kappa(pts1([Fraction(1, 4), Fraction(1, 4)]), 1)
    assert rep.kappa_m == 0
    assert rep.witness == (0, 1)
    with pytest.raises(AdmissibilityError):
        rep.tau_m


def test_kappa_fixture(lstar_seq, pair_seq):
    for m in range(1, 9):
        rep = kappa(lstar_seq, m)
        assert rep.kappa_m > 0
        assert rep.e_max == m
    e = [kappa(pair_seq, m).e_max for m in range(1, 9)]
    assert e == [2, 3, 4, 6, 10, 10, 10, 10]


@pytest.mark.parametrize("m", range(1, 7))
def test_kappa_fast_agrees(pair_seq, m):
    assert kappa_fast(pair_seq, m).kappa_m == kappa(pair_seq, m).kappa_m


def test_kappa_fast_rejects_non_identity():
    F4 = FieldSpec.for_base(4)
    seq = DigitalSequence(F4, (GeneratingMatrix(np.eye(3, dtype=np.int64)),), BijectionFamily.identity(F4))
    with pytest.raises(DimensionError):
        kappa_fast(seq, 2)
