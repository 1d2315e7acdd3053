"""Weight polytopes given by signed Minkowski data, queried through support values.

A weight u lies in the polytope iff pair(lam, u) <= U(lam) for every cocharacter
lam, where U(lam) = 1/2 sum_{pair(lam, v) > 0} mult(v) pair(lam, v).  The gap
U(lam) - pair(lam, u) is linear on every cone of the arrangement of hyperplanes
v^perp, so it is enough to test the rays of that arrangement together with
+-lineality directions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .ratlin import (
    DEFAULT_VARIABLE_CAP,
    CapacityError,
    RatVec,
    feasible,
    kernel_basis,
    line_key,
    pair,
    primitive,
    rank as mat_rank,
    vec,
)
from .weights import SignedWeightMultiset

IntVec = Tuple[int, ...]


@dataclass(frozen=True)
class ArrangementFace:
    sign_vector: Tuple[int, ...]
    normals: Tuple[IntVec, ...]
    span_basis: Tuple[RatVec, ...]
    witness: RatVec

    def signs(self) -> Dict[IntVec, int]:
        return dict(zip(self.normals, self.sign_vector))


def hyperplane_normals(weights: Sequence[Sequence[int]]) -> Tuple[IntVec, ...]:
    """Distinct hyperplanes v^perp, one primitive normal per line, sorted."""
    keys = {line_key(vec(w)) for w in weights if any(w)}
    return tuple(sorted(keys))


def arrangement_rays(normals: Sequence[IntVec], n: int) -> Tuple[Tuple[IntVec, ...], Tuple[IntVec, ...]]:
    """(rays in both orientations, lineality basis) for a central arrangement."""
    lineality = [primitive(b) for b in kernel_basis(normals, n)]
    r = mat_rank(normals, n) if normals else 0
    found = set()
    complement = [vec(b) for b in lineality]
    # a 1-dim face modulo lineality is cut out by r - 1 independent normals;
    # its representative is taken orthogonal (dot product) to the lineality space
    for subset in itertools.combinations(normals, max(r - 1, 0)):
        rows = [vec(v) for v in subset] + complement
        ker = kernel_basis(rows, n)
        if len(ker) != 1:
            continue
        p = primitive(ker[0])
        found.add(p)
        found.add(tuple(-x for x in p))
    for b in lineality:
        found.add(b)
        found.add(tuple(-x for x in b))
    return tuple(sorted(found)), tuple(lineality)


def arrangement_faces(
    normals: Sequence[IntVec], n: int, cap: int = DEFAULT_VARIABLE_CAP
) -> List[ArrangementFace]:
    """Every realizable sign vector of the arrangement, decided exactly."""
    if n > cap:
        raise CapacityError(f"rank {n} exceeds the face-enumeration cap of {cap}")
    faces: List[Tuple[Tuple[int, ...], RatVec]] = [((), tuple(Fraction(0) for _ in range(n)))]
    for k, v in enumerate(normals):
        nxt = []
        for signs, witness in faces:
            current = _sign(pair(v, witness))
            for s in (-1, 0, 1):
                if s == current:
                    nxt.append((signs + (s,), witness))
                    continue
                w = _realize(normals[: k + 1], signs + (s,), n, cap)
                if w is not None:
                    nxt.append((signs + (s,), w))
        faces = nxt
    out = []
    for signs, witness in faces:
        zero_rows = [vec(v) for v, s in zip(normals, signs) if s == 0]
        span = tuple(kernel_basis(zero_rows, n))
        out.append(ArrangementFace(signs, tuple(normals), span, witness))
    out.sort(key=lambda f: (len(f.span_basis), f.sign_vector))
    return out


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _realize(normals, signs, n, cap) -> Optional[RatVec]:
    strict, eqs = [], []
    for v, s in zip(normals, signs):
        if s == 0:
            eqs.append((v, 0))
        elif s > 0:
            strict.append((v, 0))
        else:
            strict.append((tuple(-x for x in v), 0))
    return feasible(strict, (), eqs, n=n, cap=cap)


class WeightPolytope:
    """The polytope 1/2 sum mult(v) [0, v] of a signed weight multiset, in H-form."""

    def __init__(self, generators: SignedWeightMultiset):
        self.generators = generators
        self.rank = generators.rank
        self._gens = [(w, m) for w, m in generators.items() if any(w)]
        self.normals = hyperplane_normals([w for w, _ in self._gens])
        self.rays, self.lineality_basis = arrangement_rays(self.normals, self.rank)
        self._ray_bounds = [(ray, self.upper_support(ray)) for ray in self.rays]

    def upper_support(self, lam: Sequence) -> Fraction:
        total = Fraction(0)
        for w, m in self._gens:
            p = sum(a * b for a, b in zip(lam, w))
            if p > 0:
                total += m * p
        return total / 2

    def lower_support(self, lam: Sequence) -> Fraction:
        return -self.upper_support(tuple(-x for x in lam))

    def member(self, u: Sequence, shift: Optional[Sequence] = None) -> bool:
        if shift is not None:
            u = tuple(a - b for a, b in zip(u, shift))
        for ray, bound in self._ray_bounds:
            if sum(a * b for a, b in zip(ray, u)) > bound:
                return False
        return True

    def is_empty(self) -> bool:
        weak = [(tuple(-x for x in ray), bound) for ray, bound in self._ray_bounds]
        if not weak:
            return False
        return feasible((), weak, (), n=self.rank) is None

    def bounding_box(self, shift: Sequence) -> List[range]:
        box = []
        for i in range(self.rank):
            e = tuple(int(i == j) for j in range(self.rank))
            me = tuple(-x for x in e)
            lo = math.ceil(Fraction(shift[i]) - self.upper_support(me))
            hi = math.floor(Fraction(shift[i]) + self.upper_support(e))
            box.append(range(lo, hi + 1))
        return box

    def lattice_points(self, shift: Optional[Sequence] = None) -> List[IntVec]:
        """Integral points of the polytope translated by ``shift``, sorted."""
        shift = vec(shift) if shift is not None else tuple(Fraction(0) for _ in range(self.rank))
        offsets = [(ray, bound + sum(a * b for a, b in zip(ray, shift))) for ray, bound in self._ray_bounds]
        out = []
        for u in itertools.product(*self.bounding_box(shift)):
            if all(sum(a * b for a, b in zip(ray, u)) <= limit for ray, limit in offsets):
                out.append(tuple(u))
        return out

    def faces(self, cap: int = DEFAULT_VARIABLE_CAP) -> List[ArrangementFace]:
        return arrangement_faces(self.normals, self.rank, cap)


def upper_support(P: WeightPolytope, lam: Sequence) -> Fraction:
    return P.upper_support(lam)


def enumerate_rays(P: WeightPolytope) -> Tuple[IntVec, ...]:
    return P.rays


def member(P: WeightPolytope, u: Sequence, shift: Optional[Sequence] = None) -> bool:
    return P.member(u, shift)


def lattice_points(P: WeightPolytope, shift: Optional[Sequence] = None) -> List[IntVec]:
    return P.lattice_points(shift)


def enumerate_faces(P: WeightPolytope, cap: int = DEFAULT_VARIABLE_CAP) -> List[ArrangementFace]:
    return P.faces(cap)
