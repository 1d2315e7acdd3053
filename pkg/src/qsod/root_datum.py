"""Root data, Weyl groups, dominance and the rho-shifted action.

Weights live in the character lattice and are acted on by ``WeylElement.matrix``;
cocharacters live in the dual lattice and are acted on by ``WeylElement.comatrix``
(the inverse transpose), so ``pair(pi.act_co(lam), pi.act(w)) == pair(lam, w)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .ratlin import (
    CapacityError,
    RatMat,
    RatVec,
    add,
    fmt_vec,
    identity,
    matmul,
    matvec,
    pair,
    scale,
    sub,
    transpose,
    vec,
    zero,
)

DEFAULT_WEYL_CAP = 10080


class RootDatumError(ValueError):
    pass


class InvarianceError(ValueError):
    pass


@dataclass(frozen=True)
class WeylElement:
    matrix: RatMat
    comatrix: RatMat
    length: int
    word: Tuple[int, ...] = ()

    def act(self, w: Sequence[Fraction]) -> RatVec:
        return matvec(self.matrix, w)

    def act_co(self, lam: Sequence[Fraction]) -> RatVec:
        return matvec(self.comatrix, lam)


@dataclass(frozen=True)
class LeviType:
    simple_subset: Tuple[int, ...]
    levi_roots: Tuple[int, ...]


@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: Tuple[RatVec, ...]
    coroots: Tuple[RatVec, ...]
    positive: Tuple[int, ...]
    simple: Tuple[int, ...]
    weyl: Tuple[WeylElement, ...] = field(repr=False, compare=False)
    weyl_cap: int = DEFAULT_WEYL_CAP

    @classmethod
    def build(
        cls,
        rank: int,
        roots: Sequence[Sequence] = (),
        coroots: Sequence[Sequence] = (),
        positive: Optional[Sequence[int]] = None,
        weyl_cap: int = DEFAULT_WEYL_CAP,
    ) -> "RootDatum":
        """Validate the datum and eagerly generate its Weyl group."""
        roots = tuple(vec(r) for r in roots)
        coroots = tuple(vec(c) for c in coroots)
        if len(roots) != len(coroots):
            raise RootDatumError("roots and coroots must be listed in matching order")
        for r, c in zip(roots, coroots):
            if len(r) != rank or len(c) != rank:
                raise RootDatumError(f"root {r} or coroot {c} does not have rank {rank}")
            if any(x.denominator != 1 for x in r + c):
                raise RootDatumError("roots and coroots must be integral")
            if pair(c, r) != 2:
                raise RootDatumError(f"pair(coroot, root) = {pair(c, r)} != 2 for root {r}")
        index = {r: i for i, r in enumerate(roots)}
        if len(index) != len(roots):
            raise RootDatumError("repeated root")
        for r, c in zip(roots, coroots):
            j = index.get(tuple(-x for x in r))
            if j is None or coroots[j] != tuple(-x for x in c):
                raise RootDatumError(f"root {r} has no negative partner")
        for r, c in zip(roots, coroots):
            for s in roots:
                image = sub(s, scale(pair(c, s), r))
                if image not in index:
                    raise RootDatumError(f"reflection in {r} does not permute the roots")
        if positive is None:
            positive = _positive_system(roots, rank)
        positive = tuple(sorted(positive))
        pos_set = set(positive)
        for i, r in enumerate(roots):
            partner = index[tuple(-x for x in r)]
            if (i in pos_set) == (partner in pos_set):
                raise RootDatumError("positive roots must contain exactly one of each +-pair")
        simple = _simple_roots(roots, positive)
        weyl = _generate_weyl(roots, coroots, simple, rank, weyl_cap)
        return cls(rank, roots, coroots, positive, simple, weyl, weyl_cap)

    def positive_roots(self) -> Tuple[RatVec, ...]:
        return tuple(self.roots[i] for i in self.positive)

    def simple_roots(self) -> Tuple[RatVec, ...]:
        return tuple(self.roots[i] for i in self.simple)

    def reflect(self, i: int, w: Sequence[Fraction]) -> RatVec:
        return sub(w, scale(pair(self.coroots[i], w), self.roots[i]))

    def is_dominant(self, w: Sequence[Fraction], strict: bool = False) -> bool:
        for i in self.simple:
            p = pair(self.coroots[i], w)
            if p < 0 or (strict and p == 0):
                return False
        return True

    def is_antidominant_co(self, lam: Sequence[Fraction]) -> bool:
        return all(pair(lam, self.roots[i]) <= 0 for i in self.simple)

    def is_w_invariant(self, w: Sequence[Fraction]) -> bool:
        return all(pair(self.coroots[i], w) == 0 for i in self.simple)

    def antidominant_co(self, lam: Sequence[Fraction]) -> Tuple[RatVec, WeylElement]:
        """The anti-dominant W-translate of a cocharacter (minimal-length pi on ties)."""
        for pi in self.weyl:
            image = pi.act_co(lam)
            if self.is_antidominant_co(image):
                return image, pi
        raise AssertionError("Weyl group failed to reach the anti-dominant chamber")


def _positive_system(roots, rank):
    # a functional that is nonzero on every root picks out a positive system
    bound = 1 + 2 * max((abs(x) for r in roots for x in r), default=1)
    xi = tuple(Fraction(bound) ** (rank - 1 - k) for k in range(rank))
    out = []
    for i, r in enumerate(roots):
        v = pair(xi, r)
        if v == 0:
            raise RootDatumError("could not choose a positive system; pass one explicitly")
        if v > 0:
            out.append(i)
    return out


def _simple_roots(roots, positive):
    pos = {roots[i] for i in positive}
    simple = []
    for i in positive:
        r = roots[i]
        if not any(sub(r, s) in pos for s in pos if s != r):
            simple.append(i)
    return tuple(simple)


def _reflection_matrices(root, coroot, rank):
    # s(w) = w - <coroot, w> root ; on cocharacters the transpose
    m = tuple(
        tuple(Fraction(int(i == j)) - root[i] * coroot[j] for j in range(rank))
        for i in range(rank)
    )
    return m, transpose(m)


def _generate_weyl(roots, coroots, simple, rank, cap):
    gens = [_reflection_matrices(roots[i], coroots[i], rank) for i in simple]
    ident = identity(rank)
    start = WeylElement(ident, ident, 0, ())
    seen = {ident: start}
    layer = [start]
    ordered = []
    while layer:
        layer.sort(key=lambda e: e.matrix)
        ordered.extend(layer)
        nxt = {}
        for elem in layer:
            for k, (m, cm) in enumerate(gens):
                mat = matmul(m, elem.matrix)
                if mat in seen or mat in nxt:
                    continue
                nxt[mat] = WeylElement(mat, matmul(cm, elem.comatrix), elem.length + 1, (k,) + elem.word)
                if len(seen) + len(nxt) > cap:
                    raise CapacityError(f"Weyl group exceeds the cap of {cap} elements")
        seen.update(nxt)
        layer = list(nxt.values())
    return tuple(ordered)


def generate_weyl(rd: RootDatum) -> Tuple[WeylElement, ...]:
    """All Weyl group elements in BFS order (word length, then matrix order)."""
    return rd.weyl


def inversion_count(rd: RootDatum, pi: WeylElement) -> int:
    """#{alpha > 0 : pi(alpha) < 0}, computed from the root list alone."""
    pos = {rd.roots[i] for i in rd.positive}
    return sum(1 for a in pos if pi.act(a) not in pos)


def rho(rd: RootDatum) -> RatVec:
    total = zero(rd.rank)
    for r in rd.positive_roots():
        total = add(total, r)
    return scale(Fraction(1, 2), total)


def dominant_representative(rd: RootDatum, w: Sequence[Fraction]) -> Tuple[RatVec, WeylElement]:
    for pi in rd.weyl:
        image = pi.act(w)
        if rd.is_dominant(image):
            return image, pi
    raise AssertionError("Weyl group failed to reach the dominant chamber")


def dot_action(rd: RootDatum, pi: WeylElement, w: Sequence[Fraction]) -> RatVec:
    r = rho(rd)
    return sub(pi.act(add(w, r)), r)


def dotted_regularize(
    rd: RootDatum, w: Sequence[Fraction], rho_vec: Optional[RatVec] = None
) -> Optional[Tuple[RatVec, WeylElement]]:
    """The unique pi with pi * w dominant, or None when w + rho sits on a wall."""
    r = rho(rd) if rho_vec is None else rho_vec
    shifted = add(w, r)
    for c in rd.coroots:
        if pair(c, shifted) == 0:
            return None
    for pi in rd.weyl:
        image = pi.act(shifted)
        if rd.is_dominant(image, strict=True):
            return sub(image, r), pi
    raise AssertionError("regular weight with no strictly dominant translate")


def levi(rd: RootDatum, simple_subset: Sequence[int]) -> LeviType:
    """Levi subgroup spanned by a subset of simple roots (indices into rd.simple)."""
    subset = tuple(sorted(set(simple_subset)))
    if any(k < 0 or k >= len(rd.simple) for k in subset):
        raise RootDatumError(f"simple-root subset {subset} out of range")
    chosen = [rd.roots[rd.simple[k]] for k in subset]
    members = []
    for i, r in enumerate(rd.roots):
        if _in_span(r, chosen):
            members.append(i)
    return LeviType(subset, tuple(members))


def _in_span(r, gens):
    from .ratlin import rank as _rank

    if not gens:
        return False
    return _rank(list(gens) + [r]) == _rank(list(gens))


def levi_of_cocharacter(rd: RootDatum, lam: Sequence[Fraction]) -> Tuple[int, ...]:
    """Indices of the roots fixed by lam, i.e. the roots of its Levi subgroup."""
    return tuple(i for i, r in enumerate(rd.roots) if pair(lam, r) == 0)


def levi_data(rd: RootDatum, lv: LeviType) -> Tuple[RatVec, Tuple[RatVec, ...]]:
    """(rho_L, positive roots of G that are not roots of L)."""
    members = set(lv.levi_roots)
    total = zero(rd.rank)
    outside = []
    for i in rd.positive:
        if i in members:
            total = add(total, rd.roots[i])
        else:
            outside.append(rd.roots[i])
    return scale(Fraction(1, 2), total), tuple(outside)


def is_levi_dominant(rd: RootDatum, levi_roots: Sequence[int], w: Sequence[Fraction]) -> bool:
    members = set(levi_roots)
    return all(pair(rd.coroots[i], w) >= 0 for i in rd.positive if i in members)


def slope_and_plus_test(
    rd: RootDatum,
    lv: LeviType,
    w: Sequence[Fraction],
    form: Optional[RatMat] = None,
) -> Tuple[RatVec, bool]:
    """Slope mu(w) and whether w lies in the plus-cone of characters of Z(L).

    ``w`` is given in W_L-invariant coordinates, so mu(w) = w. ``form`` is the
    bilinear form on characters used for the positivity test (standard dot
    product when omitted).
    """
    w = vec(w)
    for i in lv.levi_roots:
        if pair(rd.coroots[i], w) != 0:
            raise InvarianceError(f"{fmt_vec(w)} is not invariant under the reflection in root {fmt_vec(rd.roots[i])}")
    _, outside = levi_data(rd, lv)
    g = form if form is not None else identity(rd.rank)
    in_plus = all(pair(v, matvec(g, w)) > 0 for v in outside)
    return w, in_plus


def gl_datum(*dims: int, weyl_cap: int = DEFAULT_WEYL_CAP) -> RootDatum:
    """Root datum of GL(d_1) x ... x GL(d_k) in the standard diagonal coordinates."""
    n = sum(dims)
    roots, coroots, positive = [], [], []
    offset = 0
    for d in dims:
        if d < 0:
            raise RootDatumError("negative GL dimension")
        for a in range(offset, offset + d):
            for b in range(offset, offset + d):
                if a == b:
                    continue
                e = [0] * n
                e[a], e[b] = 1, -1
                if a < b:
                    positive.append(len(roots))
                roots.append(e)
                coroots.append(e)
        offset += d
    return RootDatum.build(n, roots, coroots, positive, weyl_cap)


def torus_datum(rank: int) -> RootDatum:
    return RootDatum.build(rank)
