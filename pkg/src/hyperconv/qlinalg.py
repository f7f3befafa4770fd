"""Exact rational linear algebra.

Matrices are tuples of row tuples of :class:`fractions.Fraction`.  Every
routine here is a pure function and never touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


class LinAlgError(ValueError):
    pass


def q(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot read {type(value).__name__} as a rational")


def qstr(x: Fraction) -> str:
    x = q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def qvec(values: Iterable) -> tuple:
    return tuple(q(v) for v in values)


def qmat(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(qvec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise LinAlgError("ragged matrix")
    return out


def shape(m: Matrix) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def ncols(m: Matrix, default: int = 0) -> int:
    return len(m[0]) if m else default


def transpose(m: Matrix, rows_if_empty: int = 0) -> Matrix:
    if not m:
        return tuple(() for _ in range(rows_if_empty))
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((q(x) * q(y) for x, y in zip(u, v)), Fraction(0))


def hstack(*blocks: Matrix) -> Matrix:
    return tuple(tuple(x for block in blocks for x in block[i]) for i in range(len(blocks[0])))


def column(m: Matrix, j: int) -> tuple:
    return tuple(row[j] for row in m)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and 1-based pivot columns.

    The pivot in each column is the first nonzero entry at or below the
    current row, so the output is deterministic.
    """
    rows = [[q(x) for x in r] for r in m]
    nr, nc = len(rows), ncols(m)
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c + 1)
        r += 1
    return tuple(tuple(row) for row in rows), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix, width: int | None = None) -> Matrix:
    """Columns spanning {y : m y = 0}, returned as an (ncols × nullity) matrix."""
    nc = ncols(m, width or 0)
    red, piv = rref(m)
    piv0 = [p - 1 for p in piv]
    free = [j for j in range(nc) if j not in piv0]
    cols = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for i, p in enumerate(piv0):
            v[p] = -red[i][f]
        cols.append(v)
    return transpose(tuple(tuple(c) for c in cols), rows_if_empty=nc) if cols else tuple(() for _ in range(nc))


def orthogonal_complement(basis: Matrix) -> Matrix:
    """An n × (n-k) matrix whose columns span the perpendicular of colspan(basis)."""
    n, k = shape(basis)
    if rank(basis) != k:
        raise LinAlgError("not a basis")
    return nullspace(transpose(basis, n), width=n)


def solve(m: Matrix, b: Sequence) -> tuple | None:
    """One exact solution of m·y = b, or None when inconsistent.

    Free variables are set to zero, so a unique solution is returned as is.
    """
    nc = ncols(m)
    aug = tuple(tuple(row) + (q(bi),) for row, bi in zip(m, b))
    red, piv = rref(aug)
    if nc + 1 in piv:
        return None
    y = [Fraction(0)] * nc
    for i, p in enumerate(piv):
        y[p - 1] = red[i][nc]
    return tuple(y)


def _common_scale(m) -> int:
    scale = 1
    for row in m:
        for x in row:
            d = x.denominator
            scale = scale * d // _gcd(scale, d)
    return scale


def _int_det(a: list) -> int:
    """Bareiss elimination on a square integer matrix (list of lists, consumed)."""
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for c in range(size - 1):
        if a[c][c] == 0:
            p = next((i for i in range(c + 1, size) if a[i][c] != 0), None)
            if p is None:
                return 0
            a[c], a[p] = a[p], a[c]
            sign = -sign
        for i in range(c + 1, size):
            for j in range(c + 1, size):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
        prev = a[c][c]
    return sign * a[-1][-1]


def det(m: Matrix) -> Fraction:
    """Determinant by fraction-free Bareiss elimination."""
    scale = _common_scale(m)
    a = [[int(x * scale) for x in row] for row in m]
    return Fraction(_int_det(a), scale ** len(m))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class PluckerVector:
    ambient_n: int
    rank_k: int
    coords: dict  # sorted 1-based k-tuple -> Fraction

    def signs(self) -> tuple:
        return tuple((v > 0) - (v < 0) for v in self.coords.values())


def plucker(m: Matrix) -> PluckerVector:
    """All maximal minors, keyed by 1-based row subsets in lexicographic order."""
    n, k = shape(m)
    if n < k:
        raise LinAlgError("plucker needs at least as many rows as columns")
    scale = _common_scale(m)
    ints = [[int(x * scale) for x in row] for row in m]
    denom = scale**k
    coords = {}
    for rows in combinations(range(n), k):
        sub = [list(ints[r]) for r in rows]
        coords[tuple(r + 1 for r in rows)] = Fraction(_int_det(sub), denom)
    return PluckerVector(n, k, coords)


POSITIVE = "PositiveProjective"
NOT_POSITIVE = "NotPositive"


def sign_class(p: PluckerVector) -> tuple[str, tuple]:
    """Gr>0 membership: every coordinate nonzero and all of one sign."""
    signs = p.signs()
    positive = bool(signs) and (all(s > 0 for s in signs) or all(s < 0 for s in signs))
    return (POSITIVE if positive else NOT_POSITIVE), signs


def is_positive(m: Matrix) -> bool:
    return sign_class(plucker(m))[0] == POSITIVE


def projective_signs(signs: Sequence[int]) -> tuple:
    """Normalize a sign vector up to global negation (first nonzero becomes +)."""
    first = next((s for s in signs if s), 1)
    return tuple(s * first for s in signs)
