"""Brute-force reference computations used to cross-check the package.

Everything here goes through sympy or plain enumeration and shares no code
with hyperconv, so agreement is evidence rather than tautology.
"""
from itertools import combinations, product
from math import comb

import sympy


def sign_strings(n):
    return ["".join(p) for p in product("+-", repeat=n)]


def _sgn(ch):
    return 1 if ch == "+" else -1


def _matrix(V):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in V.A])


def _vector(values):
    return [sympy.Rational(x.numerator, x.denominator) for x in values]


def arrangement_vertices(V):
    """Every point of V + η lying on k hyperplanes (k = 0: the single point)."""
    A, w = _matrix(V), _vector(V.w)
    n, k = V.n, V.k
    if k == 0:
        return [sympy.Matrix([])]
    out = []
    for S in combinations(range(n), k):
        sub = A.extract(list(S), list(range(k)))
        if sub.det() == 0:
            continue
        out.append(sub.LUsolve(sympy.Matrix([-w[i] for i in S])))
    return out


def extreme_directions(V):
    """Both orientations of every line cut out by k-1 of the hyperplane directions."""
    A = _matrix(V)
    n, k = V.n, V.k
    if k == 0:
        return []
    dirs = []
    for T in combinations(range(n), k - 1):
        sub = A.extract(list(T), list(range(k))) if T else sympy.zeros(0, k)
        null = sub.nullspace() if T else [sympy.eye(k)[:, j] for j in range(k)]
        if len(null) == 1 or not T:
            for d in null:
                dirs.extend([d, -d])
    return dirs


def region_value(V, alpha, point, A=None, w=None):
    A = _matrix(V) if A is None else A
    w = _vector(V.w) if w is None else w
    return [_sgn(s) * ((A[i, :] * point)[0] + w[i]) if V.k else _sgn(s) * w[i] for i, s in enumerate(alpha)]


def brute_sets(V, objective=None):
    """(F, B, P, K) from arrangement vertices and extreme recession directions.

    Regions of an arrangement whose normals span are pointed, so a region is
    nonempty iff it contains an arrangement vertex, and its recession cone is
    generated by lines where k-1 of the normals vanish.
    """
    A, w = _matrix(V), _vector(V.w)
    verts = arrangement_vertices(V)
    dirs = extreme_directions(V)
    xi = _vector(objective if objective is not None else getattr(V, "x", ()))
    F, B, K = set(), set(), set()
    for alpha in sign_strings(V.n):
        feasible = any(all(v >= 0 for v in region_value(V, alpha, p, A, w)) for p in verts)
        rays = [
            d for d in dirs if all(_sgn(s) * (A[i, :] * d)[0] >= 0 for i, s in enumerate(alpha))
        ]
        if feasible:
            F.add(alpha)
            if not rays:
                K.add(alpha)
        if not feasible or not any(sum(a * b for a, b in zip(xi, d)) > 0 for d in rays):
            B.add(alpha)
    return frozenset(F), frozenset(B), frozenset(F & B), frozenset(K)


def var_by_definition(signs):
    s = [c for c in signs if c != "0"]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def var_bar_by_resolution(signs):
    zeros = [i for i, c in enumerate(signs) if c == "0"]
    best = 0
    for fill in product("+-", repeat=len(zeros)):
        z = list(signs)
        for i, c in zip(zeros, fill):
            z[i] = c
        best = max(best, var_by_definition(z))
    return best


def alt_string(signs):
    flip = {"+": "-", "-": "+", "0": "0"}
    return "".join(flip[c] if i % 2 == 1 else c for i, c in enumerate(signs))


def truncated_monomial_count(n, k, degree):
    """Monomials of u-degree degree/2 in n variables using at most k of them."""
    if degree % 2:
        return 0
    m = degree // 2
    count = 0
    for exps in product(range(m + 1), repeat=n):
        if sum(exps) == m and sum(1 for e in exps if e) <= k:
            count += 1
    return count


def expected_region_counts(n, k):
    return comb(n, k), comb(n - 1, k)


def lex_dot_order(n, k, side):
    """Strict order on dot sets: x < y iff y is reached by single-step dot moves.

    Left side moves dots rightwards, right side leftwards.  Equivalent to the
    componentwise comparison of sorted dot tuples.
    """
    rng = range(0, n) if side == "left" else range(1, n + 1)
    sets = list(combinations(rng, k))
    out = set()
    for x in sets:
        for y in sets:
            if x == y:
                continue
            if side == "left" and all(a <= b for a, b in zip(x, y)):
                out.add((x, y))
            if side == "right" and all(a >= b for a, b in zip(x, y)):
                out.add((x, y))
    return out
