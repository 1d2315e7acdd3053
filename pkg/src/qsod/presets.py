"""Builders for quiver moduli, curve moduli labels and the standard test configs."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .ratlin import RatVec, add, fmt_vec, identity, matvec, pair, scale, sub, vec, zero
from .root_datum import InvarianceError, LeviType, RootDatum, gl_datum, levi_data, rho, slope_and_plus_test, torus_datum
from .sod import QuadraticNorm, SODConfig
from .weights import SignedWeightMultiset, adjoint_weights, quasi_symmetry_violation, vg_multiset


class QuiverRejected(ValueError):
    pass


class LabelRejected(ValueError):
    pass


@dataclass(frozen=True)
class QuiverSpec:
    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str], ...]
    dimension: Tuple[int, ...]
    delta_vec: RatVec = ()
    preprojective: bool = False

    def __post_init__(self):
        if len(self.dimension) != len(self.vertices):
            raise ValueError("one dimension per vertex")
        if any(d < 0 for d in self.dimension):
            raise ValueError("dimensions must be nonnegative")
        known = set(self.vertices)
        for s, t in self.arrows:
            if s not in known or t not in known:
                raise ValueError(f"arrow {s}->{t} uses an unknown vertex")
        if self.delta_vec and len(self.delta_vec) != len(self.vertices):
            raise ValueError("one delta entry per vertex")

    @classmethod
    def loops(cls, m: int, d: int, delta: Fraction = Fraction(0), preprojective: bool = False) -> "QuiverSpec":
        """The one-vertex quiver with m loops."""
        return cls(("0",), (("0", "0"),) * m, (d,), (Fraction(delta),), preprojective)

    def delta(self) -> RatVec:
        return vec(self.delta_vec) if self.delta_vec else zero(len(self.vertices))

    def index(self, vertex: str) -> int:
        return self.vertices.index(vertex)

    def total(self, dims: Optional[Sequence[int]] = None) -> int:
        return sum(self.dimension if dims is None else dims)


@dataclass(frozen=True)
class PartitionLabel:
    """Blocks (d_j, w_j) listed by strictly increasing slope w_j / |d_j|."""

    blocks: Tuple[Tuple[Tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        for dims, _ in self.blocks:
            if sum(dims) <= 0 or any(x < 0 for x in dims):
                raise ValueError(f"block {dims} must be a nonzero dimension vector")
        slopes = self.slopes
        if any(a >= b for a, b in zip(slopes, slopes[1:])):
            raise ValueError(f"slopes {slopes} are not strictly increasing")

    @classmethod
    def of(cls, *blocks) -> "PartitionLabel":
        return cls(tuple((tuple(int(x) for x in d), Fraction(w)) for d, w in blocks))

    @property
    def slopes(self) -> Tuple[Fraction, ...]:
        return tuple(w / sum(d) for d, w in self.blocks)

    def check_sum(self, spec: QuiverSpec) -> None:
        total = tuple(sum(col) for col in zip(*(d for d, _ in self.blocks)))
        if total != tuple(spec.dimension):
            raise ValueError(f"blocks add up to {total}, not {tuple(spec.dimension)}")


# --- linear model ---------------------------------------------------------------


def _coords(dims: Sequence[int]) -> List[List[int]]:
    """Torus coordinate indices of each vertex, vertices in order."""
    out, k = [], 0
    for d in dims:
        out.append(list(range(k, k + d)))
        k += d
    return out


def _arrow_weights(spec: QuiverSpec, dims: Sequence[int]) -> Dict[Tuple[int, ...], int]:
    n = sum(dims)
    coords = _coords(dims)
    acc: Dict[Tuple[int, ...], int] = {}
    arrows = list(spec.arrows)
    if spec.preprojective:
        arrows += [(t, s) for s, t in spec.arrows]
    for s, t in arrows:
        for b in coords[spec.index(t)]:
            for c in coords[spec.index(s)]:
                w = [0] * n
                w[b] += 1
                w[c] -= 1
                acc[tuple(w)] = acc.get(tuple(w), 0) + 1
    return acc


def quiver_config(spec: QuiverSpec, dims: Optional[Sequence[int]] = None) -> SODConfig:
    """Linear model of representations of dimension ``dims`` (default: the quiver's own)."""
    dims = tuple(spec.dimension if dims is None else dims)
    rd = gl_datum(*dims)
    n = rd.rank
    V = SignedWeightMultiset(n, _arrow_weights(spec, dims))
    extra = 1 if spec.preprojective else 0
    line = quasi_symmetry_violation(vg_multiset(V, rd, extra))
    if line is not None:
        raise QuiverRejected(f"not quasi-symmetric: weights on the line through {fmt_vec(vec(line))} do not cancel")
    delta = spec.delta()
    spread = tuple(delta[i] for i, d in enumerate(dims) for _ in range(d))
    return SODConfig(rd, V, QuadraticNorm.standard(n), spread, extra)


def ext_weights(spec: QuiverSpec, d1: Sequence[int], d2: Sequence[int]) -> SignedWeightMultiset:
    """Torus weights of Ext(d1, d2) on the torus of GL(d1) x GL(d2).

    Hom over vertices counts +1, Hom over arrows counts -1.  GL(d1) acts on its
    coordinates dually, so Hom(C^a, C^b) has weights f_b - e_a.
    """
    n1, n2 = sum(d1), sum(d2)
    c1 = _coords(d1)
    c2 = [[n1 + k for k in block] for block in _coords(d2)]
    acc: Dict[Tuple[int, ...], int] = {}

    def hom(src_block, dst_block, sign):
        for a in src_block:
            for b in dst_block:
                w = [0] * (n1 + n2)
                w[b] += 1
                w[a] -= 1
                acc[tuple(w)] = acc.get(tuple(w), 0) + sign

    for i in range(len(spec.vertices)):
        hom(c1[i], c2[i], 1)
    for s, t in spec.arrows:
        hom(c1[spec.index(s)], c2[spec.index(t)], -1)
    return SignedWeightMultiset(n1 + n2, acc)


def _ext_class(spec: QuiverSpec, d1, d2) -> SignedWeightMultiset:
    M = ext_weights(spec, d1, d2)
    if spec.preprojective:
        # Ext(d1, d2) + Ext(d2, d1)^dual, with the factors swapped back into place
        n1, n2 = sum(d1), sum(d2)
        other = ext_weights(spec, d2, d1)
        swapped = {tuple(w[n2:]) + tuple(w[:n2]): m for w, m in other.items()}
        M = M + SignedWeightMultiset(n1 + n2, swapped).negated()
    return M


def det_ext(spec: QuiverSpec, d1: Sequence[int], d2: Sequence[int]) -> RatVec:
    """Minus the total GL(d1)-torus weight of the Ext complex, as a weight of GL(d1)."""
    n1 = sum(d1)
    total = zero(n1)
    for w, m in _ext_class(spec, d1, d2).items():
        total = add(total, scale(m, vec(w[:n1])))
    return tuple(-x for x in total)


def quiver_delta_labels(spec: QuiverSpec, partition: PartitionLabel) -> List[RatVec]:
    """Window centre of every block, on that block's own torus."""
    partition.check_sum(spec)
    delta = spec.delta()
    out = []
    for j, (dj, wj) in enumerate(partition.blocks):
        size = sum(dj)
        base = tuple(delta[i] + wj / size for i, d in enumerate(dj) for _ in range(d))
        correction = zero(size)
        for k, (dk, _) in enumerate(partition.blocks):
            if k == j:
                continue
            term = det_ext(spec, dj, dk)
            correction = add(correction, term) if k < j else sub(correction, term)
        out.append(sub(base, scale(Fraction(1, 2), correction)))
    return out


def quiver_sort_key(partition: PartitionLabel) -> Fraction:
    return sum((w * w / sum(d) for d, w in partition.blocks), Fraction(0))


def block_cocharacter(spec: QuiverSpec, partition: PartitionLabel) -> RatVec:
    """Dominant cocharacter with value -w_j/|d_j| on the coordinates of block j."""
    partition.check_sum(spec)
    lam = []
    for i in range(len(spec.vertices)):
        for dj, wj in partition.blocks:
            lam.extend([-wj / sum(dj)] * dj[i])
    return tuple(lam)


def block_coordinates(spec: QuiverSpec, partition: PartitionLabel) -> List[List[int]]:
    """Indices in the assembled torus of each block, in the block's own order."""
    blocks: List[List[int]] = [[] for _ in partition.blocks]
    k = 0
    for i in range(len(spec.vertices)):
        for j, (dj, _) in enumerate(partition.blocks):
            blocks[j].extend(range(k, k + dj[i]))
            k += dj[i]
    return blocks


def _compositions(dims: Tuple[int, ...]) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Ordered sequences of nonzero dimension vectors adding up to dims."""
    if not any(dims):
        yield ()
        return
    for first in itertools.product(*(range(d + 1) for d in dims)):
        if not any(first):
            continue
        rest = tuple(a - b for a, b in zip(dims, first))
        for tail in _compositions(rest):
            yield (first,) + tail


def enumerate_partitions(spec: QuiverSpec, radius) -> List[PartitionLabel]:
    """Labels with sum w_j^2/|d_j| <= radius and w_j + delta.d_j integral.

    Sorted by descending sort key, then by blocks.
    """
    radius = Fraction(radius)
    delta = spec.delta()
    out = []
    for comp in _compositions(tuple(spec.dimension)):
        ranges = []
        for dj in comp:
            shift = sum((delta[i] * d for i, d in enumerate(dj)), Fraction(0))
            bound = math.isqrt(math.floor(radius * sum(dj))) + 1
            # w = v - shift with v integral
            ranges.append([v - shift for v in range(-bound - math.ceil(abs(shift)), bound + math.ceil(abs(shift)) + 1)])
        for ws in itertools.product(*ranges):
            blocks = tuple(zip(comp, ws))
            if sum(w * w / sum(d) for d, w in blocks) > radius:
                continue
            slopes = [w / sum(d) for d, w in blocks]
            if any(a >= b for a, b in zip(slopes, slopes[1:])):
                continue
            out.append(PartitionLabel(blocks))
    out.sort(key=lambda p: (-quiver_sort_key(p), p.blocks))
    return out


# --- curve moduli labels ----------------------------------------------------------

KAPPA_FAMILIES = {
    "bundles": "g - 1",
    "twisted-higgs": "deg L",
    "higgs": "2g - 2",
    "lambda-connections": "2g - 2",
    "local-systems": "-chi(C)",
}


def kappa_for(family: str, genus: int = 0, degree: int = 0) -> Fraction:
    """Coefficient of rho_G - rho_L for each family of curve moduli."""
    if family == "bundles":
        return Fraction(genus - 1)
    if family == "twisted-higgs":
        return Fraction(degree)
    if family in ("higgs", "lambda-connections"):
        return Fraction(2 * genus - 2)
    if family == "local-systems":
        return Fraction(2 * genus - 2)  # -chi(C) with chi(C) = 2 - 2g
    raise ValueError(f"unknown family {family!r}; expected one of {sorted(KAPPA_FAMILIES)}")


def curve_labels(
    rd: RootDatum, kappa, levi: LeviType, w: Sequence, form=None
) -> RatVec:
    """-kappa (rho_G - rho_L) - mu(w) for w in the plus-cone of the centre of L."""
    try:
        mu, in_plus = slope_and_plus_test(rd, levi, w, form)
    except InvarianceError as exc:
        raise LabelRejected(str(exc)) from exc
    if not in_plus:
        g = form if form is not None else identity(rd.rank)
        _, outside = levi_data(rd, levi)
        bad = next(v for v in outside if pair(v, matvec(g, vec(w))) <= 0)
        raise LabelRejected(f"{fmt_vec(vec(w))} is not positive on root {fmt_vec(bad)}")
    rho_L, _ = levi_data(rd, levi)
    return sub(scale(-Fraction(kappa), sub(rho(rd), rho_L)), mu)


# --- standard configurations --------------------------------------------------------


def toy_config(n: int, delta=0) -> SODConfig:
    """G_m acting on C^n with weight 1 plus its dual."""
    V = SignedWeightMultiset(1, {(1,): n, (-1,): n})
    return SODConfig(torus_datum(1), V, QuadraticNorm.standard(1), (Fraction(delta),))


def parallelogram_config() -> SODConfig:
    """Rank-2 torus with weights +-(2,0), +-(1,2), standard form, delta = 0."""
    V = SignedWeightMultiset(2, {(2, 0): 1, (-2, 0): 1, (1, 2): 1, (-1, -2): 1})
    return SODConfig(torus_datum(2), V, QuadraticNorm.standard(2), (Fraction(0), Fraction(0)))


def gl_adjoint_config(d: int, m: int, delta=0) -> SODConfig:
    """GL(d) acting on m copies of its adjoint representation."""
    rd = gl_datum(d)
    return SODConfig(rd, adjoint_weights(rd, m), QuadraticNorm.standard(d), (Fraction(delta),) * d)


PRESETS = {
    "toy": lambda p: toy_config(int(p.get("n", 1)), Fraction(str(p.get("delta", 0)))),
    "parallelogram": lambda p: parallelogram_config(),
    "gl-adjoint": lambda p: gl_adjoint_config(int(p["d"]), int(p["m"]), Fraction(str(p.get("delta", 0)))),
    "loop-quiver": lambda p: quiver_config(
        QuiverSpec.loops(int(p["m"]), int(p["d"]), Fraction(str(p.get("delta", 0))), bool(p.get("preprojective", False)))
    ),
}


def quiver_spec_from(params: Mapping) -> QuiverSpec:
    vertices = tuple(str(v) for v in params["vertices"])
    arrows = tuple((str(s), str(t)) for s, t in params.get("arrows", ()))
    dims = tuple(int(x) for x in params["dimension"])
    delta = tuple(Fraction(str(x)) for x in params.get("delta", ())) or ()
    return QuiverSpec(vertices, arrows, dims, delta, bool(params.get("preprojective", False)))
