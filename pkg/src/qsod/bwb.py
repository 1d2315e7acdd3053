"""Borel-Weil-Bott presentations of Hall-induced generators.

For an anti-dominant cocharacter lam and a G^lam-dominant weight w, the induced
bundle is presented by the terms Gamma((w - v_J)^+)[|J| - l_J], one for every
sub-multiset J of the lam-negative weights of V whose shifted weight w - v_J + rho
is regular.  Only the graded object is kept; the differential is not modelled.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import TYPE_CHECKING, Dict, Iterator, List, Optional, Sequence, Tuple

from .ratlin import CapacityError, RatVec, add, scale, sub, vec, zero
from .root_datum import WeylElement, dotted_regularize, rho
from .weights import SignedWeightMultiset, lambda_slice

if TYPE_CHECKING:
    from .sod import SODConfig

SUBMULTISET_CAP = 20


@dataclass(frozen=True)
class BWBTerm:
    weight: RatVec
    shift: int
    multiplicity: int


@dataclass(frozen=True)
class BWBPresentation:
    lam: RatVec
    w: RatVec
    terms: Tuple[BWBTerm, ...]
    dropped: int

    @property
    def admissible(self) -> int:
        return sum(t.multiplicity for t in self.terms)


@dataclass(frozen=True)
class JTerm:
    """One sub-multiset J, with the number of ways to pick it."""

    counts: Tuple[int, ...]
    size: int
    ways: int
    v_J: RatVec
    shifted: RatVec
    regular: Optional[Tuple[RatVec, WeylElement]]


def submultisets(M: SignedWeightMultiset, cap: int = SUBMULTISET_CAP) -> Iterator[Tuple[Tuple[int, ...], int, int, RatVec]]:
    """Yield (counts per weight, |J|, binomial multiplicity, v_J) for every J in M."""
    items = list(M.items())
    total = sum(m for _, m in items)
    if any(m < 0 for _, m in items):
        raise ValueError("sub-multisets need nonnegative multiplicities")
    if total > cap:
        raise CapacityError(f"{total} weights to choose from exceeds the cap of {cap}")
    ranges = [range(m + 1) for _, m in items]
    for counts in itertools.product(*ranges):
        ways = 1
        v = zero(M.rank)
        for (w, m), k in zip(items, counts):
            ways *= comb(m, k)
            if k:
                v = add(v, scale(k, vec(w)))
        yield counts, sum(counts), ways, v


def negative_part(cfg: "SODConfig", lam: Sequence) -> SignedWeightMultiset:
    return lambda_slice(cfg.V, vec(lam))[2]


def expand(cfg: "SODConfig", lam: Sequence, w: Sequence, cap: int = SUBMULTISET_CAP) -> List[JTerm]:
    """Every J with its regularization (None when the dotted stabilizer is nontrivial)."""
    lam, w = vec(lam), vec(w)
    r = rho(cfg.rd)
    out = []
    for counts, size, ways, v_J in submultisets(negative_part(cfg, lam), cap):
        shifted = sub(w, v_J)
        out.append(JTerm(counts, size, ways, v_J, shifted, dotted_regularize(cfg.rd, shifted, r)))
    return out


def _check_pre(cfg: "SODConfig", lam: RatVec, w: RatVec) -> None:
    from .root_datum import is_levi_dominant, levi_of_cocharacter

    if not cfg.rd.is_antidominant_co(lam):
        raise ValueError(f"cocharacter {lam} is not anti-dominant")
    if not is_levi_dominant(cfg.rd, levi_of_cocharacter(cfg.rd, lam), w):
        raise ValueError(f"weight {w} is not dominant for the Levi of {lam}")


def bwb_presentation(cfg: "SODConfig", lam: Sequence, w: Sequence, cap: int = SUBMULTISET_CAP) -> BWBPresentation:
    lam, w = vec(lam), vec(w)
    _check_pre(cfg, lam, w)
    acc: Dict[Tuple[RatVec, int], int] = {}
    dropped = 0
    for t in expand(cfg, lam, w, cap):
        if t.regular is None:
            dropped += t.ways
            continue
        weight, pi = t.regular
        key = (weight, t.size - pi.length)
        acc[key] = acc.get(key, 0) + t.ways
    terms = tuple(BWBTerm(wt, sh, m) for (wt, sh), m in sorted(acc.items(), key=lambda kv: (kv[0][1], kv[0][0])))
    return BWBPresentation(lam, w, terms, dropped)


def count_admissible(cfg: "SODConfig", lam: Sequence, w: Sequence, cap: int = SUBMULTISET_CAP) -> Tuple[int, int]:
    pres = bwb_presentation(cfg, lam, w, cap)
    return pres.admissible, pres.dropped


def euler_series(pres: BWBPresentation) -> Counter:
    """Signed Laurent polynomial sum (-1)^shift mult x^weight of a presentation."""
    poly: Counter = Counter()
    for t in pres.terms:
        poly[t.weight] += (-1) ** t.shift * t.multiplicity
    return Counter({k: v for k, v in poly.items() if v})


def koszul_series(w: Sequence, negative: SignedWeightMultiset) -> Counter:
    """x^w * prod_{v} (1 - x^{-v}) over the multiset, expanded factor by factor."""
    poly: Counter = Counter({vec(w): 1})
    for v, m in negative.items():
        for _ in range(m):
            nxt: Counter = Counter()
            for mono, c in poly.items():
                nxt[mono] += c
                nxt[sub(mono, vec(v))] -= c
            poly = Counter({k: c for k, c in nxt.items() if c})
    return poly
