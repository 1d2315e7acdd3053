"""Exact rational linear algebra over ``fractions.Fraction``.

Vectors are plain tuples of ``Fraction``; matrices are tuples of row tuples.
Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple, Union

Rat = Fraction
RatVec = Tuple[Fraction, ...]
RatMat = Tuple[RatVec, ...]

# (coefficients, constant) read as  coeffs . x + constant  (op)  0
Affine = Tuple[Sequence[Fraction], Fraction]

DEFAULT_VARIABLE_CAP = 8

Number = Union[int, Fraction, str]


class DimensionError(ValueError):
    pass


class CapacityError(RuntimeError):
    pass


def rat(x: Number) -> Fraction:
    """Parse an int, Fraction or string such as ``"-3/2"`` into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fmt(x: Fraction) -> str:
    """Canonical text form; ``rat(fmt(x)) == x``."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable[Number]) -> RatVec:
    return tuple(rat(x) for x in xs)


def fmt_vec(v: Sequence[Fraction]) -> str:
    return "(" + ",".join(fmt(x) for x in v) + ")"


def zero(n: int) -> RatVec:
    return (Fraction(0),) * n


def pair(lam: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    """Natural pairing of a cocharacter with a weight (dual coordinates)."""
    if len(lam) != len(w):
        raise DimensionError(f"cannot pair vectors of lengths {len(lam)} and {len(w)}")
    return sum((a * b for a, b in zip(lam, w)), Fraction(0))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVec:
    if len(u) != len(v):
        raise DimensionError("length mismatch")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVec:
    if len(u) != len(v):
        raise DimensionError("length mismatch")
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Number, v: Sequence[Fraction]) -> RatVec:
    c = rat(c)
    return tuple(c * a for a in v)


def neg(v: Sequence[Fraction]) -> RatVec:
    return tuple(-a for a in v)


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def matvec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> RatVec:
    return tuple(pair(row, v) for row in m)


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RatMat:
    cols = list(zip(*b))
    return tuple(tuple(pair(row, col) for col in cols) for row in a)


def transpose(m: Sequence[Sequence[Fraction]]) -> RatMat:
    return tuple(tuple(col) for col in zip(*m))


def identity(n: int) -> RatMat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def primitive(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Smallest integer vector on the ray through ``v`` (``v`` nonzero)."""
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(a // g for a in ints)


def line_key(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Primitive direction up to sign: the first nonzero coordinate is made positive."""
    p = primitive(v)
    for a in p:
        if a != 0:
            return p if a > 0 else tuple(-b for b in p)
    raise AssertionError("unreachable")


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[list, list]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def kernel_basis(rows: Sequence[Sequence[Fraction]], n: Optional[int] = None) -> list:
    """Basis of {x : pair(x, r) = 0 for all r in rows}, as primitive integer vectors.

    ``n`` is the ambient rank and is required when ``rows`` is empty.
    """
    if n is None:
        if not rows:
            raise DimensionError("ambient rank needed for an empty constraint list")
        n = len(rows[0])
    for r in rows:
        if len(r) != n:
            raise DimensionError("constraint rows of unequal length")
    red, pivots = rref([vec(r) for r in rows], n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(Fraction(a) for a in primitive(x)))
    return basis


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> RatVec:
    """Solve the square nonsingular system a x = b."""
    n = len(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in red)


def inverse(a: Sequence[Sequence[Fraction]]) -> RatMat:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def leading_minors(a: Sequence[Sequence[Fraction]]) -> list:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


# --- Fourier-Motzkin feasibility -------------------------------------------------

_STRICT, _WEAK = True, False


def _normalize(coeffs: Tuple[Fraction, ...], const: Fraction, strict: bool):
    """Scale so the first nonzero coefficient is +-1; makes duplicates detectable."""
    lead = next((c for c in coeffs if c != 0), None)
    if lead is None:
        return coeffs, const, strict
    s = abs(lead)
    return tuple(c / s for c in coeffs), const / s, strict


def feasible(
    strict_ineqs: Iterable[Affine] = (),
    weak_ineqs: Iterable[Affine] = (),
    eqs: Iterable[Affine] = (),
    n: Optional[int] = None,
    cap: int = DEFAULT_VARIABLE_CAP,
) -> Optional[RatVec]:
    """Decide {a.x + c > 0}, {a.x + c >= 0}, {a.x + c = 0} exactly.

    Returns a rational witness, or ``None`` when the system is infeasible.
    Variables are eliminated in index order; the witness is rebuilt by
    back-substituting interval midpoints, so it is deterministic.
    """
    cons = []
    for group, strict in ((strict_ineqs, _STRICT), (weak_ineqs, _WEAK)):
        for coeffs, const in group:
            cons.append((vec(coeffs), rat(const), strict))
    for coeffs, const in eqs:
        a, c = vec(coeffs), rat(const)
        cons.append((a, c, _WEAK))
        cons.append((neg(a), -c, _WEAK))
    if n is None:
        if not cons:
            raise DimensionError("ambient rank needed for an empty system")
        n = len(cons[0][0])
    if any(len(a) != n for a, _, _ in cons):
        raise DimensionError("constraints of unequal length")
    if n > cap:
        raise CapacityError(f"{n} variables exceeds the Fourier-Motzkin cap of {cap}")

    # stages[k] holds the constraints in which variables < k have been eliminated
    stages = []
    current = _dedupe(cons)
    for k in range(n):
        stages.append(current)
        pos, negs, rest = [], [], []
        for a, c, s in current:
            (pos if a[k] > 0 else negs if a[k] < 0 else rest).append((a, c, s))
        combined = list(rest)
        for ap, cp, sp in pos:
            for an, cn, sn in negs:
                fp, fn = ap[k], -an[k]
                a = tuple(fn * x + fp * y for x, y in zip(ap, an))
                combined.append((a, fn * cp + fp * cn, sp or sn))
        current = _dedupe(combined)
        for a, c, s in current:
            if is_zero(a) and (c < 0 or (s and c == 0)):
                return None
    for _, c, s in current:
        if c < 0 or (s and c == 0):
            return None

    x = [Fraction(0)] * n
    for k in reversed(range(n)):
        lo = hi = None
        lo_strict = hi_strict = False
        for a, c, s in stages[k]:
            if a[k] == 0:
                continue
            # a[k] x_k + rest (op) 0, later variables already fixed
            rest = c + sum(a[j] * x[j] for j in range(k + 1, n))
            bound = -rest / a[k]
            if a[k] > 0:
                if lo is None or bound > lo:
                    lo, lo_strict = bound, s
                elif bound == lo:
                    lo_strict = lo_strict or s
            else:
                if hi is None or bound < hi:
                    hi, hi_strict = bound, s
                elif bound == hi:
                    hi_strict = hi_strict or s
        if lo is not None and hi is not None:
            x[k] = (lo + hi) / 2
        elif lo is not None:
            x[k] = lo + 1
        elif hi is not None:
            x[k] = hi - 1
        else:
            x[k] = Fraction(0)
    return tuple(x)


def _dedupe(cons):
    seen = {}
    for a, c, s in cons:
        a, c, s = _normalize(a, c, s)
        seen[(a, c)] = seen.get((a, c), False) or s
    return _drop_dominated([(a, c, s) for (a, c), s in seen.items()])


def _drop_dominated(cons):
    # same left-hand side: keep only the tightest constant
    best = {}
    for a, c, s in cons:
        if a not in best:
            best[a] = (c, s)
            continue
        c0, s0 = best[a]
        if c < c0 or (c == c0 and s and not s0):
            best[a] = (c, s)
    return [(a, c, s) for a, (c, s) in best.items()]
