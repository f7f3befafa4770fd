"""Gale duality, alt, polarization reversal, deletion and restriction."""
from __future__ import annotations

from fractions import Fraction

from .arrangement import (
    Arrangement,
    ArrangementError,
    PolarizedArrangement,
    alt_vector,
)
from .qlinalg import dot, matvec, nullspace, orthogonal_complement, rank, solve, transpose


def _like(V, A, w, x=None):
    if isinstance(V, PolarizedArrangement):
        return PolarizedArrangement(A, w, V.x if x is None else x)
    return Arrangement(A, w)


def representative_in_V(V: PolarizedArrangement) -> tuple:
    """The representative c ∈ V of ξ, i.e. the one orthogonal to V⊥ (cᵀA = x)."""
    At = transpose(V.A)
    gram = tuple(tuple(dot(a, b) for b in At) for a in At)
    coeffs = solve(gram, V.x)
    return matvec(V.A, coeffs)


def gale_dual(V: PolarizedArrangement) -> PolarizedArrangement:
    """(V⊥, -ξ, -η) with representatives chosen by orthogonal projection."""
    B = orthogonal_complement(V.A)
    c = representative_in_V(V) if V.k else (Fraction(0),) * V.n
    new_w = tuple(-v for v in c)
    new_x = tuple(-dot(col, V.w) for col in transpose(B)) if B and B[0] else ()
    return PolarizedArrangement(B, new_w, new_x)


def alt_map(V):
    A = tuple(tuple(-a for a in row) if i % 2 else row for i, row in enumerate(V.A))
    return _like(V, A, alt_vector(V.w))


def polarization_reverse(V: PolarizedArrangement) -> PolarizedArrangement:
    return PolarizedArrangement(V.A, V.w, tuple(-v for v in V.x))


def alt_gale(V: PolarizedArrangement) -> PolarizedArrangement:
    """Polarization reversal of the alt Gale dual: (alt V⊥, -alt ξ, alt η)."""
    return polarization_reverse(alt_map(gale_dual(V)))


def _drop(seq, i):
    return tuple(v for j, v in enumerate(seq) if j != i - 1)


def delete(V, i: int):
    """Remove the i-th hyperplane (project away the i-th coordinate)."""
    if not 1 <= i <= V.n:
        raise ArrangementError("hyperplane index out of range")
    A = _drop(V.A, i)
    if rank(A) != V.k:
        raise ArrangementError(f"cannot delete: V contains the coordinate axis e_{i}")
    return _like(V, A, _drop(V.w, i))


def restriction_data(V, i: int):
    """Pieces of the restriction to the i-th hyperplane.

    Returns (K, y0, A', w'): points of the restriction with coordinates b sit at
    a = y0 + K b in the coordinates of V.
    """
    if not 1 <= i <= V.n:
        raise ArrangementError("hyperplane index out of range")
    row = V.A[i - 1]
    if all(a == 0 for a in row):
        raise ArrangementError(f"cannot restrict: V lies in the coordinate hyperplane {i}")
    j = next(t for t, a in enumerate(row) if a != 0)
    y0 = [Fraction(0)] * V.k
    y0[j] = -V.w[i - 1] / row[j]
    K = nullspace((row,), width=V.k)
    AK = tuple(tuple(dot(r, col) for col in transpose(K, V.k)) for r in V.A) if K[0] else tuple(() for _ in V.A)
    w_new = tuple(wi + dot(r, y0) for r, wi in zip(V.A, V.w))
    return K, tuple(y0), _drop(AK, i), _drop(w_new, i)


def restrict(V, i: int):
    K, _, A, w = restriction_data(V, i)
    if isinstance(V, PolarizedArrangement):
        x = tuple(dot(col, V.x) for col in transpose(K, V.k)) if K[0] else ()
        return PolarizedArrangement(A, w, x)
    return Arrangement(A, w)


def sign_flip_diagonal(n: int, i: int) -> tuple:
    return tuple(1 if j < i else -1 for j in range(1, n + 1))


def signed_restrict(V, i: int):
    """Restriction followed by negating coordinates j >= i."""
    R = restrict(V, i)
    D = sign_flip_diagonal(R.n, i)
    A = tuple(tuple(d * a for a in row) for d, row in zip(D, R.A))
    w = tuple(d * v for d, v in zip(D, R.w))
    return _like(R, A, w)


def restriction_signs(alpha: str, i: int) -> str:
    """Sign sequence of the signed restriction matching a region of the restriction."""
    return "".join(a if j < i else {"+": "-", "-": "+"}[a] for j, a in enumerate(alpha, start=1))
