"""Windows, the lattice partition, summand enumeration and the inequality checks.

A configuration is a root datum, a quasi-symmetric representation V, a
W-invariant positive-definite form q on cocharacters and a W-invariant rational
weight delta.  Each rational cocharacter lam carries a window centred at
delta_lam = delta - v_lam - q(lam); the integral weights split into the cells
of these windows, and ``locate`` finds the cell holding a given weight.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import bwb
from .polytope import WeightPolytope, arrangement_faces, hyperplane_normals
from .ratlin import (
    RatMat,
    RatVec,
    add,
    fmt_vec,
    inverse,
    leading_minors,
    matmul,
    matvec,
    pair,
    sub,
    transpose,
    vec,
    zero,
)
from .root_datum import RootDatum, is_levi_dominant, levi_of_cocharacter
from .weights import (
    SignedWeightMultiset,
    is_w_stable,
    lambda_slice,
    quasi_symmetry_violation,
    v_lambda,
    vg_multiset,
)


class ConfigError(ValueError):
    pass


class CoverageError(RuntimeError):
    pass


class DisjointnessError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadraticNorm:
    """Symmetric form on cocharacters; q(lam) = matrix . lam is a weight."""

    matrix: RatMat

    @classmethod
    def standard(cls, n: int) -> "QuadraticNorm":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "QuadraticNorm":
        return cls(tuple(vec(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def covector(self, lam: Sequence[Fraction]) -> RatVec:
        return matvec(self.matrix, lam)

    def inner(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
        return pair(a, self.covector(b))

    def norm_sq(self, lam: Sequence[Fraction]) -> Fraction:
        return self.inner(lam, lam)

    def is_symmetric(self) -> bool:
        return self.matrix == transpose(self.matrix)

    def is_positive_definite(self) -> bool:
        return self.is_symmetric() and all(m > 0 for m in leading_minors(self.matrix))

    def is_w_invariant(self, rd: RootDatum) -> bool:
        # lam -> comatrix . lam must preserve the form
        return all(
            matmul(matmul(transpose(pi.comatrix), self.matrix), pi.comatrix) == self.matrix for pi in rd.weyl
        )


@dataclass(frozen=True)
class SODConfig:
    rd: RootDatum
    V: SignedWeightMultiset
    q: QuadraticNorm
    delta: RatVec
    extra_adjoint: int = 0

    def __post_init__(self):
        n = self.rd.rank
        if self.V.rank != n or self.q.rank != n or len(self.delta) != n:
            raise ConfigError(f"root datum, representation, form and delta must all have rank {n}")
        if any(len(row) != n for row in self.q.matrix):
            raise ConfigError("form matrix is not square")

    @cached_property
    def VG(self) -> SignedWeightMultiset:
        return vg_multiset(self.V, self.rd, self.extra_adjoint)

    @cached_property
    def normals(self):
        return hyperplane_normals(list(self.V.nonzero_support()) + list(self.rd.roots))

    @cached_property
    def central_basis(self) -> Tuple[RatVec, ...]:
        from .ratlin import kernel_basis

        return tuple(kernel_basis([vec(v) for v in self.normals], self.rd.rank))

    @cached_property
    def q_inverse(self) -> RatMat:
        return inverse(self.q.matrix)

    @cached_property
    def _faces(self) -> Tuple["_FaceSolver", ...]:
        return tuple(_FaceSolver.build(self, f) for f in arrangement_faces(self.normals, self.rd.rank))


def config_problems(cfg: SODConfig) -> List[str]:
    """Every failed load-time invariant, in a fixed order."""
    out = []
    if not cfg.V.is_representation():
        out.append("representation: weights must have positive multiplicities")
    if not is_w_stable(cfg.V, cfg.rd):
        out.append("representation: weight multiset is not Weyl-stable")
    line = quasi_symmetry_violation(cfg.VG)
    if line is not None:
        out.append(f"quasi-symmetry: weights on the line through {fmt_vec(vec(line))} do not sum to zero")
    if not cfg.q.is_symmetric():
        out.append("q: matrix is not symmetric")
    elif not cfg.q.is_positive_definite():
        out.append("q: not positive-definite (nonpositive leading minor)")
    if not cfg.q.is_w_invariant(cfg.rd):
        out.append("q: not Weyl-invariant")
    if not cfg.rd.is_w_invariant(cfg.delta):
        out.append("delta: not Weyl-invariant")
    return out


def validate(cfg: SODConfig) -> SODConfig:
    problems = config_problems(cfg)
    if problems:
        raise ConfigError(problems[0])
    return cfg


@lru_cache(maxsize=None)
def _polytope(generators: SignedWeightMultiset) -> WeightPolytope:
    return WeightPolytope(generators)


# --- per-cocharacter data ---------------------------------------------------------


@dataclass(frozen=True)
class LambdaData:
    lam: RatVec
    raw: RatVec
    levi_roots: Tuple[int, ...]
    fixed_V: SignedWeightMultiset
    v_lambda: RatVec
    delta_lambda: RatVec
    norm_sq: Fraction


def lambda_data(cfg: SODConfig, lam: Sequence, normalize: bool = True) -> LambdaData:
    raw = vec(lam)
    lam = cfg.rd.antidominant_co(raw)[0] if normalize else raw
    fixed, _, _ = lambda_slice(cfg.VG, lam)
    v = v_lambda(cfg.VG, lam)
    centre = sub(sub(cfg.delta, v), cfg.q.covector(lam))
    return LambdaData(
        lam, raw, levi_of_cocharacter(cfg.rd, lam), fixed, v, centre, cfg.q.norm_sq(lam)
    )


def central_weight(cfg: SODConfig, lam: Sequence[Fraction]) -> RatVec:
    """delta - q(lam, .) evaluated on a basis of the central cocharacters."""
    form = sub(cfg.delta, cfg.q.covector(lam))
    return tuple(pair(mu, form) for mu in cfg.central_basis)


@dataclass(frozen=True)
class Window:
    lam: LambdaData
    centre: RatVec
    cell_points: Tuple[Tuple[int, ...], ...]
    dominant_points: Tuple[Tuple[int, ...], ...]
    central_weight: RatVec

    @property
    def sort_key(self) -> Fraction:
        return self.lam.norm_sq

    @property
    def order_key(self):
        return (-self.lam.norm_sq, self.central_weight, self.lam.lam)


def window(cfg: SODConfig, lam: Sequence, offset: Optional[Sequence] = None) -> Window:
    """Window of lam.  ``offset`` moves the centre of every window with lam != 0."""
    data = lambda_data(cfg, lam)
    centre = data.delta_lambda
    if offset is not None and any(data.lam):
        centre = add(centre, vec(offset))
    cells = tuple(_polytope(data.fixed_V).lattice_points(centre))
    dominant = tuple(p for p in cells if is_levi_dominant(cfg.rd, data.levi_roots, p))
    return Window(data, centre, cells, dominant, central_weight(cfg, data.lam))


# --- locate ---------------------------------------------------------------------


def _int_form(coeffs: Sequence[Fraction], const: Fraction) -> Tuple[Tuple[int, ...], int]:
    den = 1
    for x in list(coeffs) + [const]:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return tuple(int(x * den) for x in coeffs), int(const * den)


@dataclass(frozen=True)
class _FaceSolver:
    """On one face the candidate lam is affine in w: lam = A w + b."""

    sign_vector: Tuple[int, ...]
    A: RatMat
    b: RatVec
    # (coeffs, const, sign): sign +1 / -1 demands a strict sign, 0 demands <= 0
    forms: Tuple[Tuple[Tuple[int, ...], int, int], ...] = field(repr=False)

    @classmethod
    def build(cls, cfg: SODConfig, face) -> "_FaceSolver":
        n = cfg.rd.rank
        Q = cfg.q.matrix
        fixed, _, _ = lambda_slice(cfg.VG, face.witness)
        v_F = v_lambda(cfg.VG, face.witness)
        offset = add(sub(zero(n), cfg.delta), v_F)  # y = w - delta + v_F = w + offset
        B = face.span_basis
        if B:
            Bt = tuple(vec(b) for b in B)  # rows are basis vectors
            gram = matmul(matmul(Bt, Q), transpose(Bt))
            # lam = -B (B^T Q B)^{-1} B^T y
            P = matmul(matmul(transpose(Bt), inverse(gram)), Bt)
            A = tuple(tuple(-x for x in row) for row in P)
        else:
            A = tuple(zero(n) for _ in range(n))
        b = matvec(A, offset)
        forms = []
        for nu, s in zip(face.normals, face.sign_vector):
            if s == 0:
                continue  # identically zero on the span
            coeffs = matvec(transpose(A), vec(nu))
            forms.append(_int_form(coeffs, pair(vec(nu), b)) + (s,))
        QA = matmul(Q, A)
        Qb = matvec(Q, b)
        poly = _polytope(fixed)
        for ray, bound in poly._ray_bounds:
            r = vec(ray)
            # r . (w + offset + Q(A w + b)) - bound <= 0
            coeffs = add(r, matvec(transpose(QA), r))
            const = pair(r, add(offset, Qb)) - bound
            forms.append(_int_form(coeffs, const) + (0,))
        return cls(face.sign_vector, A, b, tuple(forms))

    def accepts(self, w: Sequence) -> bool:
        for coeffs, const, s in self.forms:
            value = const
            for c, x in zip(coeffs, w):
                value += c * x
            if s == 0:
                if value > 0:
                    return False
            elif (value > 0) != (s > 0) or value == 0:
                return False
        return True

    def solve(self, w: Sequence) -> RatVec:
        return add(matvec(self.A, w), self.b)


def locate_all(cfg: SODConfig, w: Sequence) -> List[RatVec]:
    """Every raw cocharacter whose cell contains w, one per accepting face."""
    w = tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in w)
    if len(w) != cfg.rd.rank:
        raise ConfigError(f"weight {w} does not have rank {cfg.rd.rank}")
    return sorted(f.solve(vec(w)) for f in cfg._faces if f.accepts(w))


def locate_label(cfg: SODConfig, w: Sequence) -> RatVec:
    """Anti-dominant lam of the unique cell, up to Weyl conjugacy, containing w."""
    found = locate_all(cfg, w)
    if not found:
        raise CoverageError(f"no cell contains {fmt_vec(vec(w))}")
    reps = sorted({cfg.rd.antidominant_co(lam)[0] for lam in found})
    if len(reps) > 1:
        raise DisjointnessError(f"{fmt_vec(vec(w))} lies in the cells of " + ", ".join(fmt_vec(r) for r in reps))
    return reps[0]


def locate(cfg: SODConfig, w: Sequence) -> LambdaData:
    return lambda_data(cfg, locate_label(cfg, w))


# --- enumeration ----------------------------------------------------------------


def box_points(rank: int, radius) -> List[Tuple[int, ...]]:
    r = math.floor(Fraction(radius))
    return list(itertools.product(range(-r, r + 1), repeat=rank))


def enumerate_summands(cfg: SODConfig, radius, offset: Optional[Sequence] = None) -> List[Window]:
    """Windows meeting the integral box |w_i| <= radius, in decomposition order."""
    labels = sorted({locate_label(cfg, w) for w in box_points(cfg.rd.rank, radius)})
    windows = [window(cfg, lam, offset) for lam in labels]
    windows = [W for W in windows if W.dominant_points]
    windows.sort(key=lambda W: W.order_key)
    return windows


def central_blocks(windows: Sequence[Window]) -> Dict[RatVec, List[Window]]:
    """Windows grouped by central weight; distinct groups are mutually orthogonal."""
    blocks: Dict[RatVec, List[Window]] = {}
    for W in windows:
        blocks.setdefault(W.central_weight, []).append(W)
    return dict(sorted(blocks.items()))


# --- inequality checks -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    w: Tuple[int, ...]
    v_J: RatVec
    induced: RatVec
    w_prime: Tuple[int, ...]
    margin: Fraction


@dataclass(frozen=True)
class InequalityReport:
    lam: RatVec
    lam_prime: RatVec
    checked: int
    violations: Tuple[Violation, ...]
    min_margin: Optional[Fraction]
    margins: Tuple[Fraction, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _induced(cfg: SODConfig, W: Window, nonempty: bool, samples: Optional[int], seed: int):
    """(w, v_J, (w - v_J)^+, ways, |J|) over the window's generators and admissible J."""
    points = list(W.dominant_points)
    if samples is not None and samples < len(points):
        points = sorted(random.Random(seed).sample(points, samples))
    out = []
    for w in points:
        for t in bwb.expand(cfg, W.lam.lam, w):
            if t.regular is None or (nonempty and t.size == 0):
                continue
            out.append((w, t.v_J, t.regular[0], t.ways, t.size))
    return out


def _compare(lam, lam_prime, induced, W_prime: Window) -> InequalityReport:
    targets = [(pair(lam_prime, vec(p)), p) for p in W_prime.dominant_points]
    checked = sum(entry[3] for entry in induced) * len(targets)
    if not targets or not induced:
        return InequalityReport(lam, lam_prime, checked, (), None)
    top, top_point = max(targets)
    violations = []
    margins = set()
    for w, v_J, image, _, _ in induced:
        margin = pair(lam_prime, image) - top
        margins.add(margin)
        if margin <= 0:
            violations.append(Violation(w, v_J, image, top_point, margin))
    return InequalityReport(lam, lam_prime, checked, tuple(violations), min(margins), tuple(sorted(margins)))


def check_semiorthogonality(
    cfg: SODConfig,
    lam,
    lam_prime,
    samples: Optional[int] = None,
    seed: int = 0,
    offset: Optional[Sequence] = None,
) -> InequalityReport:
    """pair(lam', (w - v_J)^+) > pair(lam', w') over both windows and all admissible J."""
    W = lam if isinstance(lam, Window) else window(cfg, lam, offset)
    W2 = lam_prime if isinstance(lam_prime, Window) else window(cfg, lam_prime, offset)
    if W.lam.lam == W2.lam.lam:
        raise ValueError("semiorthogonality needs two distinct cocharacters")
    if W.lam.norm_sq > W2.lam.norm_sq:
        raise ValueError("the first cocharacter must have the smaller q-norm")
    return _compare(W.lam.lam, W2.lam.lam, _induced(cfg, W, False, samples, seed), W2)


def check_full_faithfulness(
    cfg: SODConfig, lam, samples: Optional[int] = None, seed: int = 0, offset: Optional[Sequence] = None
) -> InequalityReport:
    """The same inequality with lam' = lam and J nonempty."""
    W = lam if isinstance(lam, Window) else window(cfg, lam, offset)
    return _compare(W.lam.lam, W.lam.lam, _induced(cfg, W, True, samples, seed), W)


@dataclass(frozen=True)
class VerificationReport:
    semiorthogonality: Tuple[InequalityReport, ...]
    full_faithfulness: Tuple[InequalityReport, ...]

    @property
    def violations(self) -> int:
        return sum(len(r.violations) for r in self.semiorthogonality + self.full_faithfulness)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def min_margin(self, which: str) -> Optional[Fraction]:
        reports = self.semiorthogonality if which == "so" else self.full_faithfulness
        margins = [r.min_margin for r in reports if r.min_margin is not None]
        return min(margins) if margins else None


def verify_windows(
    cfg: SODConfig, windows: Sequence[Window], samples: Optional[int] = None, seed: int = 0
) -> VerificationReport:
    """Both suites over every ordered pair |lam|_q <= |lam'|_q and every window."""
    induced_all = [_induced(cfg, W, False, samples, seed) for W in windows]
    so, ff = [], []
    for i, W in enumerate(windows):
        for j, W2 in enumerate(windows):
            if i == j or W.lam.norm_sq > W2.lam.norm_sq:
                continue
            so.append(_compare(W.lam.lam, W2.lam.lam, induced_all[i], W2))
        nonempty = [entry for entry in induced_all[i] if entry[4] > 0]
        ff.append(_compare(W.lam.lam, W.lam.lam, nonempty, W))
    return VerificationReport(tuple(so), tuple(ff))


# --- independent convex oracle (torus, nonnegative multiplicities) ------------------


def convex_minimizer(cfg: SODConfig, w: Sequence) -> RatVec:
    """argmin of 1/2 q(mu,mu) + 1/2 sum mult max(<mu,v>,0) + <mu, w - delta>.

    Solved through its dual: the q^{-1}-nearest point of the zonotope
    1/2 sum mult [0, v] to delta - w, found by Wolfe's minimum-norm-point
    iteration with an exact linear oracle.  Uses nothing from the face solver.
    All iterates are kept as integer vectors over a common denominator.
    """
    if cfg.rd.roots:
        raise ValueError("the convex oracle is only set up for tori")
    gens = [(v, m) for v, m in cfg.V.items() if any(v)]
    if any(m < 0 for _, m in gens):
        raise ValueError("the convex oracle needs nonnegative multiplicities")
    n = cfg.rd.rank
    M = cfg.q_inverse
    c = 1
    for row in M:
        for x in row:
            c = c * x.denominator // math.gcd(c, x.denominator)
    A = [[int(x * c) for x in row] for row in M]  # positive multiple of q^{-1}
    x = sub(vec(w), cfg.delta)
    target = tuple(-a for a in x)
    D = 2
    for a in target:
        D = D * a.denominator // math.gcd(D, a.denominator)
    T = [int(a * D) for a in target]
    half = D // 2

    def apply(Y):
        return [sum(a * y for a, y in zip(row, Y)) for row in A]

    def lmo(Y):
        # D * (vertex minimizing <y, p>_M  -  target)
        g = apply(Y)
        P = [-t for t in T]
        for v, m in gens:
            if sum(a * b for a, b in zip(g, v)) < 0:
                for i in range(n):
                    P[i] += half * m * v[i]
        return P

    Y, d = _wolfe_int(lmo, lmo([-t for t in T]), apply)
    # p* = y / D + target, mu = -q^{-1}(x + p*)
    p_star = tuple(Fraction(Yi, d * D) + t for Yi, t in zip(Y, target))
    return tuple(-a for a in matvec(M, add(x, p_star)))


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _wolfe_int(lmo, start, apply):
    """Wolfe's minimum-norm point in the metric <a, b> = a . apply(b); returns (Y, d), y = Y/d."""
    S = [start]
    AS = [apply(start)]
    coef = [Fraction(1)]
    Y, d = list(start), 1
    while True:
        P = lmo(Y)
        AY = apply(Y)
        if _dot(Y, AY) <= d * _dot(AY, P):
            return Y, d
        S.append(P)
        AS.append(apply(P))
        coef.append(Fraction(0))
        while True:
            alpha = _affine_minimizer_int(S, AS)
            if all(a > 0 for a in alpha):
                coef = alpha
                break
            theta = min(c / (c - a) for c, a in zip(coef, alpha) if a <= 0 and c != a)
            coef = [theta * a + (1 - theta) * c for c, a in zip(coef, alpha)]
            keep = [k for k, c in enumerate(coef) if c > 0]
            S = [S[k] for k in keep]
            AS = [AS[k] for k in keep]
            coef = [coef[k] for k in keep]
        d = 1
        for c in coef:
            d = d * c.denominator // math.gcd(d, c.denominator)
        weights = [int(c * d) for c in coef]
        Y = [sum(wk * s[i] for wk, s in zip(weights, S)) for i in range(len(start))]


def _affine_minimizer_int(S, AS) -> List[Fraction]:
    from .ratlin import solve

    k = len(S)
    gram = [[Fraction(_dot(a, Ab)) for Ab in AS] + [Fraction(1)] for a in S]
    gram.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * k + [Fraction(1)]
    return list(solve(gram, rhs)[:k])
