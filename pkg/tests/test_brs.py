from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kronbrs.brs import (
    BoxSpec,
    GammaSpec,
    brs_profile,
    carry_free_positions,
    delta_count,
    dichotomy_report,
    in_box,
    prefix_deltas,
    spaced_positions,
    star_discrepancy_exhaustive,
)
from kronbrs.errors import DomainError, InconclusiveError, PrecisionError
from kronbrs.sequences import BadicPoint

VDC4 = [BadicPoint.from_values([Fraction(v)], 2, 4) for v in (0, Fraction(1, 2), Fraction(1, 4), Fraction(3, 4))]


def vdc(n_pts, P):
    out = []
    for n in range(n_pts):
        ds = [(n >> j) & 1 for j in range(P)]
        out.append(BadicPoint(2, (tuple(ds),)))
    return out


def star_oracle(points):
    """Every corner from the coordinate grid plus 1, both boundary conventions."""
    vals = [p.values() for p in points]
    N, s = len(vals), len(vals[0])
    grids = [sorted({v[i] for v in vals} | {Fraction(1)}) for i in range(s)]
    best = Fraction(0)
    for y in product(*grids):
        vol = Fraction(1)
        for c in y:
            vol *= c
        opened = sum(all(v[i] < y[i] for i in range(s)) for v in vals)
        closed = sum(all(v[i] <= y[i] for i in range(s)) for v in vals)
        best = max(best, vol - Fraction(opened, N), Fraction(closed, N) - vol)
    return best


def test_gamma_parsing():
    g = GammaSpec.parse(2, "0.11")
    assert g.value == Fraction(3, 4) and g.finite
    assert GammaSpec.parse(2, "0.", "01").value == Fraction(1, 3)
    assert GammaSpec.parse(2, "1").whole
    assert str(GammaSpec.from_fraction(Fraction(1, 3), 2)) == "0.(01)"
    with pytest.raises(DomainError):
        GammaSpec.parse(2, "0.12")
    with pytest.raises(DomainError):
        GammaSpec(2, (), (1,))


@given(st.integers(2, 16), st.fractions(min_value=0, max_value=1, max_denominator=200))
def test_gamma_fraction_roundtrip(b, x):
    assert GammaSpec.from_fraction(x, b).value == x


def test_delta_examples():
    half = BoxSpec.from_fractions([Fraction(1, 2)], 2)
    assert delta_count(half, VDC4) == 0
    assert delta_count(half, []) == 0
    full = BoxSpec.full(2, 1)
    assert delta_count(full, VDC4[:3]) == 0


def test_in_box_tie_needs_precision():
    third = BoxSpec((GammaSpec.from_fraction(Fraction(1, 3), 2),))
    pt = BadicPoint(2, ((0, 1, 0, 1),))
    with pytest.raises(PrecisionError):
        in_box(third, np.array([pt.coords]))
    finite = BoxSpec.from_fractions([Fraction(5, 16)], 2)
    assert not in_box(finite, np.array([pt.coords]))[0]


def test_star_examples():
    assert star_discrepancy_exhaustive([BadicPoint(2, ((0, 0),))]) == 1
    two = [BadicPoint.from_values([v], 2, 3) for v in (0, Fraction(1, 2))]
    assert star_discrepancy_exhaustive(two) == Fraction(1, 2)


@pytest.mark.parametrize("k", range(1, 9))
def test_star_van_der_corput_envelope(k):
    assert star_discrepancy_exhaustive(vdc(2**k, k)) <= Fraction(k + 2, 2 ** (k + 1))


point_sets = st.integers(1, 2).flatmap(
    lambda s: st.lists(
        st.lists(st.integers(0, 15), min_size=s, max_size=s), min_size=1, max_size=12
    )
)


@settings(max_examples=80, deadline=None)
@given(point_sets)
def test_star_matches_oracle(raw):
    pts = [BadicPoint.from_values([Fraction(v, 16) for v in row], 2, 4) for row in raw]
    assert star_discrepancy_exhaustive(pts) == star_oracle(pts)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 60), st.integers(1, 60), st.fractions(min_value=0, max_value=1, max_denominator=64))
def test_delta_telescopes(lstar_seq, n1, n2, g):
    box = BoxSpec.from_fractions([g], 2)
    P = 12 if box.finite else 30
    block = lstar_seq.x_block(0, n1 + n2, P)
    assert delta_count(box, block) == delta_count(box, block[:n1]) + delta_count(box, block[n1:])


def test_prefix_deltas_match_counting(lstar_seq):
    box = BoxSpec.from_fractions([Fraction(5, 8)], 2)
    scaled, q = prefix_deltas(lstar_seq, box, 300, precision=12)
    block = lstar_seq.x_block(0, 300, 12)
    for N in (1, 7, 64, 299, 300):
        assert Fraction(int(scaled[N - 1]), q) == delta_count(box, block[:N])


def test_profile_basics(lstar_seq):
    box = BoxSpec.from_fractions([Fraction(3, 4)], 2)
    assert brs_profile(lstar_seq, box, 0).ranges == ()
    prof = brs_profile(lstar_seq, box, 2**10)
    assert [r.lo for r in prof.ranges] == [2**j for j in range(10)]
    cum = prof.cumulative
    assert all(a <= c for a, c in zip(cum, cum[1:]))
    assert prof.to_csv().splitlines()[0] == "range_lo,range_hi,sup_num,sup_den,argmax_N"


def test_dichotomy_guards(lstar_seq):
    fin = BoxSpec.from_fractions([Fraction(3, 4)], 2)
    inf = BoxSpec.from_fractions([Fraction(1, 3)], 2)
    with pytest.raises(DomainError):
        dichotomy_report(lstar_seq, fin, fin, 2**10)
    with pytest.raises(DomainError):
        dichotomy_report(lstar_seq, inf, inf, 2**10)
    with pytest.raises(InconclusiveError):
        dichotomy_report(lstar_seq, fin, inf, 16)


def test_carry_free_positions():
    third = GammaSpec.from_fraction(Fraction(1, 3), 2)
    assert carry_free_positions(third, 8) == [2, 4, 6, 8]
    assert carry_free_positions(GammaSpec.parse(2, "0.11"), 8) == [2]
    assert carry_free_positions((3, [1, 1, 2, 2]), 4) == [1, 2, 4]


def test_spaced_positions():
    W = list(range(2, 40, 2))
    assert spaced_positions(W, 4, 4) == [2, 6, 10, 14]
    assert spaced_positions([2, 4], 4, 5) == [2]
    assert spaced_positions(W, 1) == W


def test_net_block_elementary_box(lstar_seq):
    # L* gives (0, m, 1)-nets, so every interval [0, b^-m) holds one point
    for m in range(1, 8):
        box = BoxSpec.from_fractions([Fraction(1, 2**m)], 2)
        assert delta_count(box, lstar_seq.x_block(0, 2**m, 12)) == 0


def test_full_box_prefixes(pair_seq):
    scaled, _ = prefix_deltas(pair_seq, BoxSpec.full(2, 2), 500, precision=12)
    assert not scaled.any()


def test_profile_extension_is_prefix(lstar_seq):
    box = BoxSpec.from_fractions([Fraction(1, 3)], 2)
    short = brs_profile(lstar_seq, box, 2**9)
    long = brs_profile(lstar_seq, box, 2**12)
    assert long.ranges[: len(short.ranges)] == short.ranges
    assert long.cumulative[: len(short.ranges)] == short.cumulative
