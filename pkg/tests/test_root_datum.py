from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsod.ratlin import CapacityError, pair, vec
from qsod.root_datum import (
    InvarianceError,
    RootDatum,
    RootDatumError,
    dot_action,
    dotted_regularize,
    gl_datum,
    inversion_count,
    levi,
    levi_data,
    rho,
    slope_and_plus_test,
    torus_datum,
)


def test_weyl_orders():
    assert len(gl_datum(2).weyl) == 2
    assert len(gl_datum(3).weyl) == 6
    assert len(gl_datum(2, 2).weyl) == 4
    assert len(torus_datum(3).weyl) == 1


def test_weyl_cap():
    with pytest.raises(CapacityError):
        gl_datum(4, weyl_cap=10)


def test_rejects_bad_pairing():
    with pytest.raises(RootDatumError):
        RootDatum.build(1, [(1,), (-1,)], [(1,), (-1,)])


def test_rho_of_gl3():
    assert rho(gl_datum(3)) == vec([1, 0, -1])


def test_lengths_match_inversions():
    rd = gl_datum(3)
    for pi in rd.weyl:
        assert pi.length == inversion_count(rd, pi)


def test_pairing_is_preserved():
    rd = gl_datum(3)
    lam, w = vec([F(1, 2), -2, 3]), vec([4, -1, F(2, 3)])
    for pi in rd.weyl:
        assert pair(pi.act_co(lam), pi.act(w)) == pair(lam, w)


def test_dotted_regularize_gl2():
    rd = gl_datum(2)
    # (0,1) + rho = (1/2, 1/2) sits on the wall
    assert dotted_regularize(rd, vec([0, 1])) is None
    weight, pi = dotted_regularize(rd, vec([-1, 1]))
    assert weight == vec([0, 0]) and pi.length == 1
    weight, pi = dotted_regularize(rd, vec([2, 0]))
    assert weight == vec([2, 0]) and pi.length == 0


def permutation_regularize(w):
    """Brute force over coordinate permutations for GL(n)."""
    n = len(w)
    shifted = [w[i] + F(n - 1, 2) - i for i in range(n)]
    if len(set(shifted)) < n:
        return None
    order = sorted(range(n), key=lambda i: -shifted[i])
    image = [shifted[i] - (F(n - 1, 2) - k) for k, i in enumerate(order)]
    inversions = sum(1 for a, b in itertools.combinations(order, 2) if a > b)
    return tuple(image), inversions


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_dotted_regularize_matches_permutation_brute_force(w):
    rd = gl_datum(3)
    got = dotted_regularize(rd, vec(w))
    want = permutation_regularize(vec(w))
    if want is None:
        assert got is None
    else:
        assert (got[0], got[1].length) == want
        assert rd.is_dominant(got[0])
        assert dot_action(rd, got[1], vec(w)) == got[0]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=3, max_size=3))
def test_antidominant_representative_is_unique_in_orbit(lam):
    rd = gl_datum(3)
    lam = vec(lam)
    rep, pi = rd.antidominant_co(lam)
    assert rd.is_antidominant_co(rep)
    orbit = {p.act_co(lam) for p in rd.weyl}
    assert [mu for mu in orbit if rd.is_antidominant_co(mu)] == [rep]
    assert rep == tuple(sorted(lam))


def test_levi_of_gl3():
    rd = gl_datum(3)
    lv = levi(rd, [0])
    assert sorted(rd.roots[i] for i in lv.levi_roots) == [vec([-1, 1, 0]), vec([1, -1, 0])]
    rho_L, outside = levi_data(rd, lv)
    assert rho_L == vec([F(1, 2), F(-1, 2), 0])
    assert len(outside) == 2


def test_slope_and_plus_test():
    rd = gl_datum(2)
    assert slope_and_plus_test(rd, levi(rd, []), vec([1, -1])) == (vec([1, -1]), True)
    assert slope_and_plus_test(rd, levi(rd, []), vec([-1, 1]))[1] is False
    with pytest.raises(InvarianceError):
        slope_and_plus_test(rd, levi(rd, [0]), vec([1, 0]))
