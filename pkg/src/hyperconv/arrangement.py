"""Polarized hyperplane arrangements and their sign-sequence combinatorics.

An arrangement with n hyperplanes in a k-dimensional affine space is stored
as an n×k matrix ``A`` (columns span V) and a vector ``w`` representing the
shift.  Points of V+η have coordinates ``a`` in the columns of A, and the
i-th hyperplane is where ``w_i + A_i·a`` vanishes.  A polarization adds the
row vector ``x`` of the objective in the same coordinates.  Sign sequences
are strings over ``"+-"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Optional, Sequence

from . import lp
from .qlinalg import (
    LinAlgError,
    det,
    dot,
    is_positive,
    matvec,
    plucker,
    projective_signs,
    q,
    qmat,
    qvec,
    rank,
    solve,
    transpose,
)


class ArrangementError(ValueError):
    pass


class InternalDisagreement(AssertionError):
    """Two independent tests of the same property disagreed."""


def all_sequences(n: int) -> list[str]:
    return ["".join(p) for p in product("+-", repeat=n)]


def sign_value(ch: str) -> int:
    return 1 if ch == "+" else -1


def negate(alpha: str) -> str:
    return alpha.translate(str.maketrans("+-", "-+"))


def flip_at(alpha: str, i: int) -> str:
    """Flip the sign at 1-based position i."""
    return alpha[: i - 1] + negate(alpha[i - 1]) + alpha[i:]


def differ(alpha: str, beta: str) -> list[int]:
    return [i + 1 for i, (a, b) in enumerate(zip(alpha, beta)) if a != b]


@dataclass(frozen=True, eq=False)
class Arrangement:
    A: tuple
    w: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        A = qmat(self.A)
        w = qvec(self.w)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "w", w)
        if len(w) != len(A):
            raise ArrangementError("w must have one entry per hyperplane")
        if self.k and rank(A) != self.k:
            raise ArrangementError("A must have full column rank")
        self._check_simple()

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def k(self) -> int:
        return len(self.A[0]) if self.A else 0

    def _check_simple(self):
        # k+1 hyperplanes may never share a point of V+η
        n, k = self.n, self.k
        for S in combinations(range(n), k + 1):
            rows = tuple(self.A[i] for i in S)
            if k == 0:
                consistent = all(self.w[i] == 0 for i in S)
            else:
                consistent = solve(rows, [-self.w[i] for i in S]) is not None
            if consistent:
                raise ArrangementError(
                    f"arrangement is not simple: hyperplanes {[i + 1 for i in S]} meet"
                )

    # geometry -----------------------------------------------------------
    def hyperplane_value(self, i: int, point: Sequence) -> Fraction:
        return self.w[i - 1] + dot(self.A[i - 1], point)

    def region_polyhedron(self, alpha: str) -> lp.Polyhedron:
        if len(alpha) != self.n:
            raise ArrangementError("sign sequence length must equal n")
        ineqs = []
        for s, row, wi in zip(alpha, self.A, self.w):
            v = sign_value(s)
            ineqs.append((tuple(v * a for a in row), v * wi))
        return lp.Polyhedron(self.k, tuple(ineqs))

    def is_feasible(self, alpha: str) -> bool:
        key = ("F", alpha)
        if key not in self._cache:
            self._cache[key] = lp.is_nonempty(self.region_polyhedron(alpha))[0]
        return self._cache[key]

    def is_compact(self, alpha: str) -> bool:
        key = ("K", alpha)
        if key not in self._cache:
            poly = self.region_polyhedron(alpha)
            self._cache[key] = self.is_feasible(alpha) and lp.is_pointed_compact(poly)
        return self._cache[key]

    def positive_sets(self) -> tuple[frozenset, frozenset]:
        seqs = all_sequences(self.n)
        return (
            frozenset(a for a in seqs if self.is_feasible(a)),
            frozenset(a for a in seqs if self.is_compact(a)),
        )

    def augmented(self) -> tuple:
        """[[A, w], [0, 1]], whose column span encodes the arrangement projectively."""
        rows = [tuple(row) + (wi,) for row, wi in zip(self.A, self.w)]
        rows.append((Fraction(0),) * self.k + (Fraction(1),))
        return tuple(rows)

    def with_shift_basis(self) -> tuple:
        """[A | w], a basis of V + <η>."""
        return tuple(tuple(row) + (wi,) for row, wi in zip(self.A, self.w))


@dataclass(frozen=True, eq=False)
class PolarizedArrangement(Arrangement):
    x: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        x = qvec(self.x)
        object.__setattr__(self, "x", x)
        if len(x) != self.k:
            raise ArrangementError("x must have length k")
        self._check_generic()

    def _check_generic(self):
        # no representative of ξ may be supported on k-1 coordinates
        n, k = self.n, self.k
        for T in combinations(range(n), max(k - 1, 0)):
            rows = tuple(self.A[i] for i in T)
            if k == 0:
                continue
            if not T:
                if all(v == 0 for v in self.x):
                    raise ArrangementError("polarization is not generic: ξ = 0")
                continue
            if rank(rows + (self.x,)) == rank(rows):
                raise ArrangementError(
                    f"polarization is not generic: ξ is supported on {[i + 1 for i in T]}"
                )

    @property
    def base(self) -> Arrangement:
        return Arrangement(self.A, self.w)

    def objective_value(self, point: Sequence) -> Fraction:
        return dot(self.x, point)

    def lp_verdict(self, alpha: str) -> lp.LpVerdict:
        key = ("LP", alpha)
        if key not in self._cache:
            self._cache[key] = lp.bounded_above(self.region_polyhedron(alpha), self.x)
        return self._cache[key]

    def is_bounded(self, alpha: str) -> bool:
        key = ("B", alpha)
        if key not in self._cache:
            if not self.is_feasible(alpha):
                self._cache[key] = True
            else:
                ray = lp.recession_ray(self.region_polyhedron(alpha), self.x)
                self._cache[key] = ray is None
        return self._cache[key]

    def sets(self, cap: int = 16) -> "RegionSets":
        return enumerate_sets(self, cap)


@dataclass(frozen=True, eq=False)
class StrongPolarizedArrangement(PolarizedArrangement):
    c: Fraction = Fraction(0)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "c", q(self.c))

    @property
    def polarized(self) -> PolarizedArrangement:
        return PolarizedArrangement(self.A, self.w, self.x)


@dataclass(frozen=True)
class RegionSets:
    F: frozenset
    B: frozenset
    P: frozenset
    K: frozenset


def enumerate_sets(V: PolarizedArrangement, cap: int = 16) -> RegionSets:
    if V.n > cap:
        raise ArrangementError(f"n = {V.n} exceeds the enumeration cap {cap}")
    key = ("sets",)
    if key not in V._cache:
        seqs = all_sequences(V.n)
        F = frozenset(a for a in seqs if V.is_feasible(a))
        B = frozenset(a for a in seqs if V.is_bounded(a))
        K = frozenset(a for a in F if V.is_compact(a))
        P = F & B
        if not (K <= P <= F):
            raise InternalDisagreement("K ⊆ P ⊆ F violated")
        V._cache[key] = RegionSets(F, B, P, K)
    return V._cache[key]


def region_polyhedron(V: Arrangement, alpha: str) -> lp.Polyhedron:
    return V.region_polyhedron(alpha)


def is_feasible(V: Arrangement, alpha: str) -> bool:
    return V.is_feasible(alpha)


def is_bounded(V: PolarizedArrangement, alpha: str) -> bool:
    return V.is_bounded(alpha)


def is_compact(V: Arrangement, alpha: str) -> bool:
    return V.is_compact(alpha)


# sign variation -------------------------------------------------------------

def _as_signs(z) -> list[int]:
    if isinstance(z, str):
        return [{"+": 1, "-": -1, "0": 0}[ch] for ch in z]
    return [(v > 0) - (v < 0) for v in z]


def var(z) -> int:
    """Number of sign alternations, ignoring zeros."""
    s = [v for v in _as_signs(z) if v]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def var_bar(z) -> int:
    """Largest var over all ways of replacing zeros by signs (one left-to-right pass)."""
    best: dict = {}
    for v in _as_signs(z):
        new = {}
        for c in ((v,) if v else (1, -1)):
            if not best:
                new[c] = 0
            else:
                new[c] = max(best.get(c, -1), best.get(-c, -2) + 1)
        best = new
    return max(best.values()) if best else 0


def var_l(alpha: str) -> int:
    return var("+" + alpha)


def var_r(alpha: str, k: int) -> int:
    return var(alpha + ("+" if k % 2 == 0 else "-"))


def alt_vector(z: Sequence) -> tuple:
    """Negate the even-index (1-based) coordinates."""
    return tuple(-v if i % 2 == 1 else v for i, v in enumerate(z))


def alt_signs(alpha: str) -> str:
    return "".join(negate(ch) if i % 2 == 1 and ch in "+-" else ch for i, ch in enumerate(alpha))


# cyclicity ---------------------------------------------------------------------

def projection_onto_complement(V: Arrangement, w: Sequence | None = None) -> tuple:
    """Orthogonal projection of w (default: the shift) onto V⊥."""
    w = V.w if w is None else qvec(w)
    if V.k == 0:
        return tuple(w)
    At = transpose(V.A)
    gram = tuple(tuple(dot(c1, c2) for c2 in At) for c1 in At)
    coeffs = solve(gram, [dot(c, w) for c in At])
    along = matvec(V.A, coeffs)
    return tuple(a - b for a, b in zip(w, along))


def is_positively_oriented(V: Arrangement) -> bool:
    u = projection_onto_complement(V)
    return bool(u) and u[0] > 0


def _span_positive(m) -> bool:
    return rank(m) == len(m[0]) and is_positive(m)


def _phi_matrix(V: Arrangement, sign: int = 1, phi_first: bool = True) -> tuple:
    """(φ, id)(V+<η>) in the basis [A | w], with φ(A)=0, φ(w)=sign."""
    phi_row = (Fraction(0),) * V.k + (Fraction(sign),)
    body = V.with_shift_basis()
    return ((phi_row,) + body) if phi_first else (body + (phi_row,))


def is_cyclic_by_definition(V: Arrangement) -> bool:
    if V.k == 0 or V.k >= V.n:
        return False
    return (
        _span_positive(V.A)
        and _span_positive(V.with_shift_basis())
        and is_positively_oriented(V)
    )


def is_cyclic_by_plucker(V: Arrangement) -> bool:
    if V.k == 0 or V.k >= V.n:
        return False
    return _span_positive(_phi_matrix(V))


def is_cyclic(V: Arrangement) -> bool:
    a, b = is_cyclic_by_definition(V), is_cyclic_by_plucker(V)
    if a != b:
        raise InternalDisagreement(f"cyclicity tests disagree: definition={a}, plucker={b}")
    return a


def _xi_first(V: PolarizedArrangement) -> tuple:
    return (V.x,) + V.A


def _xi_last(V: PolarizedArrangement) -> tuple:
    s = -1 if V.k % 2 else 1
    return V.A + (tuple(s * v for v in V.x),)


def _left_by_definition(V: PolarizedArrangement) -> bool:
    return (
        _span_positive(V.with_shift_basis())
        and _span_positive(_xi_first(V))
        and is_positively_oriented(V)
    )


def _right_by_definition(V: PolarizedArrangement) -> bool:
    return (
        _span_positive(V.with_shift_basis())
        and _span_positive(_xi_last(V))
        and is_positively_oriented(V)
    )


def lift_matrix(V: PolarizedArrangement, c, flavor: str) -> tuple:
    """The (n+2)×(k+1) matrix whose positivity certifies a strong lift with ξ̄(w) = c."""
    k = V.k
    s = -1 if k % 2 else 1
    c = q(c)
    if flavor == "left":
        top = tuple(V.x) + (s * c,)
        body = tuple(tuple(row) + (s * wi,) for row, wi in zip(V.A, V.w))
        bottom = (Fraction(0),) * k + (Fraction(1),)
        return (top,) + body + (bottom,)
    if flavor == "right":
        top = (Fraction(0),) * k + (Fraction(1),)
        body = V.with_shift_basis()
        bottom = tuple(s * v for v in V.x) + (s * c,)
        return (top,) + body + (bottom,)
    raise ValueError("flavor must be 'left' or 'right'")


def _affine_minors(make) -> list[tuple[Fraction, Fraction]]:
    """Minors of make(c) as (constant, slope) pairs; make is affine in c."""
    m0, m1 = plucker(make(0)), plucker(make(1))
    return [(m0.coords[S], m1.coords[S] - m0.coords[S]) for S in m0.coords]


def _nice_point(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction((hi - 1).__floor__())
    if hi is None:
        return Fraction(lo.__floor__() + 1)
    return (lo + hi) / 2


def find_strong_lift(V: PolarizedArrangement, flavor: str) -> Optional[Fraction]:
    """A value c = ξ̄(w) making every maximal minor of lift_matrix share one sign."""
    minors = _affine_minors(lambda c: lift_matrix(V, c, flavor))
    for s in (1, -1):
        lo = hi = None
        ok = True
        for a, b in minors:
            a, b = s * a, s * b
            if b == 0:
                if a <= 0:
                    ok = False
                    break
                continue
            root = -a / b
            if b > 0:
                lo = root if lo is None or root > lo else lo
            else:
                hi = root if hi is None or root < hi else hi
        if not ok or (lo is not None and hi is not None and lo >= hi):
            continue
        c = _nice_point(lo, hi)
        if not is_positive(lift_matrix(V, c, flavor)):
            raise InternalDisagreement("strong lift failed re-validation")
        return c
    return None


def is_left_cyclic(V: PolarizedArrangement) -> bool:
    if V.k == 0 or V.k >= V.n:
        return False
    a = _left_by_definition(V)
    b = find_strong_lift(V, "left") is not None
    if a != b:
        raise InternalDisagreement(f"left cyclicity tests disagree: definition={a}, lift={b}")
    return a


def is_right_cyclic(V: PolarizedArrangement) -> bool:
    if V.k == 0 or V.k >= V.n:
        return False
    a = _right_by_definition(V)
    b = find_strong_lift(V, "right") is not None
    if a != b:
        raise InternalDisagreement(f"right cyclicity tests disagree: definition={a}, lift={b}")
    return a


def projection_variation_check(V: Arrangement) -> bool:
    u = projection_onto_complement(V)
    return var(u) == var_bar(u) == V.k


# Vandermonde fixtures ----------------------------------------------------------

def _check_increasing(z):
    z = qvec(z)
    if any(b <= a for a, b in zip(z, z[1:])):
        raise ArrangementError("points must be strictly increasing")
    return z


def vandermonde_data(z: Sequence, k: int) -> tuple[tuple, tuple]:
    z = _check_increasing(z)
    if not 0 <= k <= len(z):
        raise ArrangementError("need 0 <= k <= n")
    A = tuple(tuple(zi**j for j in range(k)) for zi in z)
    s = -1 if k % 2 else 1
    w = tuple(s * zi**k for zi in z)
    return A, w


def vandermonde(z: Sequence, k: int) -> Arrangement:
    return Arrangement(*vandermonde_data(z, k))


def vandermonde_left(z0, z: Sequence, k: int) -> PolarizedArrangement:
    z0 = q(z0)
    _check_increasing((z0,) + qvec(z))
    A, w = vandermonde_data(z, k)
    return PolarizedArrangement(A, w, tuple(z0**j for j in range(k)))


def vandermonde_right(z: Sequence, z_last, k: int) -> PolarizedArrangement:
    z_last = q(z_last)
    _check_increasing(qvec(z) + (z_last,))
    A, w = vandermonde_data(z, k)
    s = -1 if k % 2 else 1
    return PolarizedArrangement(A, w, tuple(s * z_last**j for j in range(k)))


def reference_left(n: int, k: int) -> PolarizedArrangement:
    return vandermonde_left(0, range(1, n + 1), k)


def reference_right(n: int, k: int) -> PolarizedArrangement:
    return vandermonde_right(range(1, n + 1), n + 1, k)


def reference(n: int, k: int, side: str) -> PolarizedArrangement:
    if side == "left":
        return reference_left(n, k)
    if side == "right":
        return reference_right(n, k)
    raise ValueError("side must be 'left' or 'right'")


# combinatorial characterizations -------------------------------------------------

def combinatorial_feasibility(V: Arrangement, alpha: str, flavor: str) -> tuple:
    """(feasible, bounded, compact) read off from sign variation.

    ``bounded`` is None for the unpolarized ``cyclic`` flavor.
    """
    k = V.k
    compact = var(alpha) == k and alpha[0] == "+"
    if flavor == "cyclic":
        if not is_cyclic(V):
            raise ArrangementError("arrangement is not cyclic")
        return var(alpha) <= k, None, compact
    if flavor == "left":
        if not is_left_cyclic(V):
            raise ArrangementError("arrangement is not left cyclic")
        v = var_l(alpha)
    elif flavor == "right":
        if not is_right_cyclic(V):
            raise ArrangementError("arrangement is not right cyclic")
        v = var_r(alpha, k)
    else:
        raise ValueError("flavor must be cyclic, left or right")
    return v <= k, v >= k, compact


# dots ----------------------------------------------------------------------------

def kappa_l(alpha: str, k: int | None = None) -> tuple:
    if k is not None and var_l(alpha) != k:
        raise ArrangementError(f"var_l({alpha}) != {k}")
    s = "+" + alpha
    return tuple(i for i in range(len(alpha)) if s[i] != s[i + 1])


def kappa_l_inv(dots: Iterable[int], n: int) -> str:
    dots = set(dots)
    if any(not 0 <= d <= n - 1 for d in dots):
        raise ArrangementError("left dots must lie in {0..n-1}")
    out, cur = [], "+"
    for step in range(1, n + 1):
        if step - 1 in dots:
            cur = negate(cur)
        out.append(cur)
    return "".join(out)


def kappa_r(alpha: str, k: int) -> tuple:
    s = alpha + ("+" if k % 2 == 0 else "-")
    if var(s) != k:
        raise ArrangementError(f"var_r({alpha}) != {k}")
    return tuple(i for i in range(1, len(alpha) + 1) if s[i - 1] != s[i])


def kappa_r_inv(dots: Iterable[int], n: int, k: int) -> str:
    dots = set(dots)
    if any(not 1 <= d <= n for d in dots):
        raise ArrangementError("right dots must lie in {1..n}")
    cur = "+" if k % 2 == 0 else "-"
    out = []
    for step in range(1, n + 1):
        if n - step + 1 in dots:
            cur = negate(cur)
        out.append(cur)
    return "".join(reversed(out))


def kappa(alpha: str, k: int, side: str) -> tuple:
    return kappa_l(alpha, k) if side == "left" else kappa_r(alpha, k)


def kappa_inv(dots, n: int, k: int, side: str) -> str:
    return kappa_l_inv(dots, n) if side == "left" else kappa_r_inv(dots, n, k)


def dot_sets(n: int, k: int, flavor: str) -> list[tuple]:
    ranges = {"left": range(0, n), "right": range(1, n + 1), "prime": range(1, n), "full": range(0, n + 1)}
    return [tuple(c) for c in combinations(ranges[flavor], k)]


# the bijection with bases and the induced order ------------------------------------

@dataclass(frozen=True)
class VertexData:
    basis: frozenset
    point: tuple
    value: Fraction


def mu_bijection(V: PolarizedArrangement) -> dict:
    """For every bounded feasible α: the hyperplanes through the ξ-maximizer on Δ_α."""
    if "mu" in V._cache:
        return V._cache["mu"]
    out = {}
    for alpha in sorted(enumerate_sets(V).P):
        point, active = lp.argmax_vertex(V.region_polyhedron(alpha), V.x)
        if len(active) != V.k:
            raise ArrangementError(f"maximizer of region {alpha} lies on {len(active)} hyperplanes")
        out[alpha] = VertexData(frozenset(active), point, V.objective_value(point))
    V._cache["mu"] = out
    return out


def _closure(elements, relation) -> frozenset:
    elements = list(elements)
    up = {a: set() for a in elements}
    for a, b in relation:
        up[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elements:
            extra = set()
            for b in up[a]:
                extra |= up[b]
            if not extra <= up[a]:
                up[a] |= extra
                changed = True
    return frozenset((a, b) for a in elements for b in up[a])


def partial_order(V: PolarizedArrangement) -> frozenset:
    """Strict order on 𝒫 as pairs (α, β) with α < β."""
    mu = mu_bijection(V)
    covers = []
    for a, b in combinations(sorted(mu), 2):
        if len(mu[a].basis & mu[b].basis) != V.k - 1:
            continue
        va, vb = mu[a].value, mu[b].value
        if va == vb:
            raise ArrangementError(f"ξ takes equal values at the vertices of {a} and {b}")
        covers.append((a, b) if va < vb else (b, a))
    return _closure(mu, covers)


def dot_order(n: int, k: int, side: str) -> frozenset:
    """Order on 𝒫 from single dot moves: rightward increases on the left side, leftward on the right."""
    sets = dot_sets(n, k, side)
    present = set(sets)
    step = 1 if side == "left" else -1
    covers = []
    for x in sets:
        for d in x:
            y = tuple(sorted((set(x) - {d}) | {d + step}))
            if d + step not in x and y in present:
                covers.append((kappa_inv(x, n, k, side), kappa_inv(y, n, k, side)))
    return _closure([kappa_inv(x, n, k, side) for x in sets], covers)


# equivalence -----------------------------------------------------------------------

def _strong_matrix(V: PolarizedArrangement, c) -> tuple:
    rows = [tuple(row) + (wi,) for row, wi in zip(V.A, V.w)]
    rows.append(tuple(V.x) + (q(c),))
    rows.append((Fraction(0),) * V.k + (Fraction(1),))
    return tuple(rows)


def _pattern(m) -> tuple:
    return projective_signs(plucker(m).signs())


def lift_patterns(V: PolarizedArrangement) -> set:
    """Every projective Plücker sign pattern realized by some strong lift of V."""
    minors = _affine_minors(lambda c: _strong_matrix(V, c))
    roots = sorted({-a / b for a, b in minors if b != 0})
    if not roots:
        samples = [Fraction(0)]
    else:
        samples = [roots[0] - 1, roots[-1] + 1] + roots
        samples += [(r1 + r2) / 2 for r1, r2 in zip(roots, roots[1:])]
    out = set()
    for c in samples:
        vals = [a + b * c for a, b in minors]
        out.add(projective_signs([(v > 0) - (v < 0) for v in vals]))
    return out


def equivalent(V1: Arrangement, V2: Arrangement) -> bool:
    if (V1.n, V1.k) != (V2.n, V2.k):
        raise ArrangementError("equivalence needs matching (n, k)")
    strong1 = isinstance(V1, StrongPolarizedArrangement)
    strong2 = isinstance(V2, StrongPolarizedArrangement)
    pol1 = isinstance(V1, PolarizedArrangement)
    pol2 = isinstance(V2, PolarizedArrangement)
    if pol1 != pol2:
        raise ArrangementError("cannot compare a polarized and an unpolarized arrangement")
    if not pol1:
        return _pattern(V1.augmented()) == _pattern(V2.augmented())
    if strong1 and strong2:
        return _pattern(_strong_matrix(V1, V1.c)) == _pattern(_strong_matrix(V2, V2.c))
    p1 = {_pattern(_strong_matrix(V1, V1.c))} if strong1 else lift_patterns(V1)
    p2 = {_pattern(_strong_matrix(V2, V2.c))} if strong2 else lift_patterns(V2)
    return bool(p1 & p2)


def expected_counts(n: int, k: int) -> tuple[int, int]:
    """|P| and |K| for left or right cyclic arrangements."""
    return comb(n, k), comb(n - 1, k)
