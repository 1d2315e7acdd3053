"""Signed weight multisets: wt(V), wt(g) and wt(V/G) = wt(V) - wt(g)."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from .ratlin import RatVec, add, line_key, pair, scale, vec, zero
from .root_datum import RootDatum

Weight = Tuple[int, ...]


class SignedWeightMultiset:
    """Integral weights with nonzero integer multiplicities.

    Zero multiplicities are never stored; the zero weight itself is kept so
    that wt(g) carries its Cartan part.
    """

    __slots__ = ("rank", "_entries")

    def __init__(self, rank: int, entries: Optional[Mapping[Sequence[int], int]] = None):
        self.rank = rank
        acc: Dict[Weight, int] = {}
        for w, m in (entries or {}).items():
            key = tuple(int(x) for x in w)
            if len(key) != rank:
                raise ValueError(f"weight {key} does not have rank {rank}")
            if any(Fraction(x) != Fraction(y) for x, y in zip(key, w)):
                raise ValueError(f"weight {tuple(w)} is not integral")
            acc[key] = acc.get(key, 0) + int(m)
        self._entries = {w: m for w, m in sorted(acc.items()) if m != 0}

    @classmethod
    def from_list(cls, rank: int, items: Iterable[Tuple[Sequence[int], int]]) -> "SignedWeightMultiset":
        acc: Dict[Weight, int] = {}
        for w, m in items:
            key = tuple(int(x) for x in w)
            acc[key] = acc.get(key, 0) + int(m)
        return cls(rank, acc)

    def items(self) -> Iterator[Tuple[Weight, int]]:
        return iter(self._entries.items())

    def support(self) -> Tuple[Weight, ...]:
        return tuple(self._entries)

    def nonzero_support(self) -> Tuple[Weight, ...]:
        return tuple(w for w in self._entries if any(w))

    def mult(self, w: Sequence[int]) -> int:
        return self._entries.get(tuple(w), 0)

    def total(self) -> int:
        return sum(self._entries.values())

    def size(self) -> int:
        """Total multiplicity; only meaningful for nonnegative multisets."""
        return sum(abs(m) for m in self._entries.values())

    def is_representation(self) -> bool:
        return all(m > 0 for m in self._entries.values())

    def __add__(self, other: "SignedWeightMultiset") -> "SignedWeightMultiset":
        acc = dict(self._entries)
        for w, m in other.items():
            acc[w] = acc.get(w, 0) + m
        return SignedWeightMultiset(self.rank, acc)

    def __sub__(self, other: "SignedWeightMultiset") -> "SignedWeightMultiset":
        return self + other.scaled(-1)

    def scaled(self, k: int) -> "SignedWeightMultiset":
        return SignedWeightMultiset(self.rank, {w: k * m for w, m in self._entries.items()})

    def negated(self) -> "SignedWeightMultiset":
        return SignedWeightMultiset(self.rank, {tuple(-x for x in w): m for w, m in self._entries.items()})

    def mapped(self, matrix) -> "SignedWeightMultiset":
        out: Dict[Weight, int] = {}
        for w, m in self._entries.items():
            image = tuple(int(sum(Fraction(a) * b for a, b in zip(row, w))) for row in matrix)
            out[image] = out.get(image, 0) + m
        return SignedWeightMultiset(self.rank, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedWeightMultiset):
            return NotImplemented
        return self.rank == other.rank and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rank, tuple(self._entries.items())))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __repr__(self) -> str:
        body = ", ".join(f"{w}^{m}" if m != 1 else f"{w}" for w, m in self._entries.items())
        return f"SignedWeightMultiset({{{body}}})"


def adjoint_weights(rd: RootDatum, copies: int = 1) -> SignedWeightMultiset:
    """wt(g): every root once plus the zero weight with multiplicity rank."""
    entries: Dict[Weight, int] = {tuple([0] * rd.rank): rd.rank * copies}
    for r in rd.roots:
        key = tuple(int(x) for x in r)
        entries[key] = entries.get(key, 0) + copies
    return SignedWeightMultiset(rd.rank, entries)


def vg_multiset(V: SignedWeightMultiset, rd: RootDatum, extra_adjoint: int = 0) -> SignedWeightMultiset:
    """wt(V/G) = wt(V) - wt(g); ``extra_adjoint`` subtracts further copies of wt(g)."""
    return V - adjoint_weights(rd, 1 + extra_adjoint)


def is_symmetric(M: SignedWeightMultiset) -> bool:
    return M == M.negated()


def quasi_symmetry_violation(M: SignedWeightMultiset) -> Optional[Weight]:
    """Primitive direction of the first line whose weighted sum is nonzero, else None."""
    sums: Dict[Weight, RatVec] = {}
    for w, m in M.items():
        if not any(w):
            continue
        key = line_key(vec(w))
        sums[key] = add(sums.get(key, zero(M.rank)), scale(m, vec(w)))
    for key in sorted(sums):
        if any(sums[key]):
            return key
    return None


def is_quasi_symmetric(M: SignedWeightMultiset) -> bool:
    return quasi_symmetry_violation(M) is None


def lambda_slice(
    M: SignedWeightMultiset, lam: Sequence[Fraction]
) -> Tuple[SignedWeightMultiset, SignedWeightMultiset, SignedWeightMultiset]:
    """Split M by the sign of pair(lam, v): (fixed, positive, negative)."""
    fixed, positive, negative = {}, {}, {}
    for w, m in M.items():
        p = pair(lam, vec(w))
        (fixed if p == 0 else positive if p > 0 else negative)[w] = m
    return (
        SignedWeightMultiset(M.rank, fixed),
        SignedWeightMultiset(M.rank, positive),
        SignedWeightMultiset(M.rank, negative),
    )


def weighted_sum(M: SignedWeightMultiset) -> RatVec:
    total = zero(M.rank)
    for w, m in M.items():
        total = add(total, scale(m, vec(w)))
    return total


def v_lambda(VG: SignedWeightMultiset, lam: Sequence[Fraction]) -> RatVec:
    """Half the multiplicity-weighted sum of the lam-positive part."""
    _, positive, _ = lambda_slice(VG, lam)
    return scale(Fraction(1, 2), weighted_sum(positive))


def is_w_stable(M: SignedWeightMultiset, rd: RootDatum) -> bool:
    return all(M.mapped(pi.matrix) == M for pi in rd.weyl)
