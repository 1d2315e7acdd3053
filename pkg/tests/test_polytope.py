from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsod.polytope import WeightPolytope, arrangement_faces, hyperplane_normals
from qsod.ratlin import CapacityError, pair, vec
from qsod.root_datum import gl_datum
from qsod.weights import SignedWeightMultiset, adjoint_weights

PARALLELOGRAM = SignedWeightMultiset(2, {(2, 0): 1, (-2, 0): 1, (1, 2): 1, (-1, -2): 1})
PARALLELOGRAM_CENTRE = [(-1, -1), (-1, 0), (0, -1), (0, 0), (0, 1), (1, 0), (1, 1)]


def test_parallelogram_support_and_rays():
    P = WeightPolytope(PARALLELOGRAM)
    assert P.upper_support((1, 0)) == F(3, 2)
    assert P.lower_support((1, 0)) == F(-3, 2)
    assert P.rays == ((-2, 1), (0, -1), (0, 1), (2, -1))
    assert P.lineality_basis == ()


def test_parallelogram_lattice_points():
    assert WeightPolytope(PARALLELOGRAM).lattice_points() == PARALLELOGRAM_CENTRE


def test_membership_boundary_is_closed():
    P = WeightPolytope(PARALLELOGRAM)
    assert P.member((1, 1)) and not P.member((1, -1))
    assert P.member((F(3, 2), F(1)))  # a vertex
    assert not P.member((F(3, 2), F(1, 2)))


def test_toy_interval():
    P = WeightPolytope(SignedWeightMultiset(1, {(1,): 2, (-1,): 2}))
    assert P.lattice_points() == [(-1,), (0,), (1,)]
    assert P.lattice_points((F(1, 2),)) == [(0,), (1,)]


def test_lineality_and_negative_multiplicities():
    # wt(g) of GL(2) taken negatively: a flat polytope in the (1,-1) direction
    rd = gl_datum(2)
    P = WeightPolytope(adjoint_weights(rd).scaled(-1))
    assert P.lineality_basis == ((1, 1),)
    assert P.is_empty()


def test_empty_generators():
    P = WeightPolytope(SignedWeightMultiset(2, {}))
    assert P.lattice_points((1, 2)) == [(1, 2)]
    assert not P.member((1, 3), (1, 2))


def test_parallelogram_faces():
    normals = hyperplane_normals(PARALLELOGRAM.support())
    faces = arrangement_faces(normals, 2)
    assert len(faces) == 9
    assert len({f.sign_vector for f in faces}) == 9
    for f in faces:
        for nu, s in zip(f.normals, f.sign_vector):
            p = pair(vec(nu), f.witness)
            assert (p > 0) - (p < 0) == s


def test_face_cap():
    with pytest.raises(CapacityError):
        arrangement_faces([(1,) * 9], 9, cap=8)


weights = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4)


def symmetric(ws):
    entries = {}
    for a, b in ws:
        if (a, b) != (0, 0):
            entries[(a, b)] = entries.get((a, b), 0) + 1
            entries[(-a, -b)] = entries.get((-a, -b), 0) + 1
    return SignedWeightMultiset(2, entries)


@settings(max_examples=60, deadline=None)
@given(weights, st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=10))
def test_member_agrees_with_support_inequalities(ws, lams):
    """Ray membership implies every sampled support inequality; rejections have a witness ray."""
    P = WeightPolytope(symmetric(ws))
    for u in P.lattice_points():
        for lam in lams:
            assert pair(vec(lam), vec(u)) <= P.upper_support(lam)
    for u in [(x, y) for x in range(-5, 6) for y in range(-5, 6)]:
        if not P.member(u):
            assert any(pair(vec(r), vec(u)) > P.upper_support(r) for r in P.rays)


@settings(max_examples=25, deadline=None)
@given(weights)
def test_membership_matches_vertex_hull(ws):
    """Against the hull of the subset sums of 1/2 v; facet normals are perpendicular
    to generators, so the direction grid below contains all of them."""
    M = symmetric(ws)
    P = WeightPolytope(M)
    verts = {(F(0), F(0))}
    for v, m in M.items():
        for _ in range(m):
            verts |= {(a + F(v[0], 2), b + F(v[1], 2)) for a, b in verts}
    directions = [(x, y) for x in range(-3, 4) for y in range(-3, 4) if (x, y) != (0, 0)]
    tops = [(d, max(d[0] * a + d[1] * b for a, b in verts)) for d in directions]
    for u in [(x, y) for x in range(-7, 8) for y in range(-7, 8)]:
        inside = all(d[0] * u[0] + d[1] * u[1] <= top for d, top in tops)
        assert P.member(u) == inside
