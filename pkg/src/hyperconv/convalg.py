"""Convolution algebras attached to a polarized arrangement.

Two independent models are kept side by side:

* canonical forms: an element of B̃(V) is a dict ``{(alpha, beta, mono): int}``
  over the admissible monomials of each pair of bounded feasible regions;
* quiver presentations: paths with central polynomial generators modulo
  relations, whose graded pieces are computed by integer normal form.

Paths in a presentation are tuples of vertices.  Every quiver used here has
at most one arrow between two vertices, so the vertex sequence names the path.
Presented elements are dicts ``{(path, mono): int}``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import lcm
from typing import Callable, Optional

from .arrangement import (
    ArrangementError,
    PolarizedArrangement,
    enumerate_sets,
    flip_at,
    sign_value,
)
from .dualities import delete, gale_dual, restrict
from .intnf import RationalEchelon, smith_invariants
from .qlinalg import matvec, nullspace, rank, solve

# ---------------------------------------------------------------- small helpers


def unit(n: int, i: int, scale: int = 1) -> tuple:
    """scale·e_i as a length-n tuple (i is 1-based)."""
    return tuple(scale if j == i - 1 else 0 for j in range(n))


def vadd(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def flip_set(alpha: str, beta: str) -> frozenset:
    return frozenset(i for i, (a, b) in enumerate(zip(alpha, beta), start=1) if a != b)


def insert_sign(alpha: str, i: int, s: str) -> str:
    return alpha[: i - 1] + s + alpha[i - 1 :]


def remove_sign(alpha: str, i: int) -> str:
    return alpha[: i - 1] + alpha[i:]


def shift_up(j: int, i: int) -> int:
    """Index of coordinate j of a smaller space after inserting position i."""
    return j if j < i else j + 1


def drop_coord(mono, i: int) -> tuple:
    return tuple(m for j, m in enumerate(mono, start=1) if j != i)


def insert_coord(mono, i: int, value: int = 0) -> tuple:
    return tuple(mono[: i - 1]) + (value,) + tuple(mono[i - 1 :])


def lin_add(x: dict, y: dict, c: int = 1) -> dict:
    out = dict(x)
    for key, v in y.items():
        nv = out.get(key, 0) + c * v
        if nv:
            out[key] = nv
        else:
            out.pop(key, None)
    return out


def lin_scale(x: dict, c: int) -> dict:
    return {key: c * v for key, v in x.items()} if c else {}


def monomials(n: int, degree: int):
    """All exponent vectors of total degree ``degree`` in n variables."""
    for combo in combinations_with_replacement(range(n), degree):
        mono = [0] * n
        for j in combo:
            mono[j] += 1
        yield tuple(mono)


def sub_degrees(d):
    return product(*(range(x + 1) for x in d))


# ---------------------------------------------------------------- faces


def vertex_sign_table(V: PolarizedArrangement) -> tuple:
    """Sign vectors (entries -1/0/1) of every vertex of the arrangement.

    Each nonempty face of a simple essential arrangement is pointed, so it
    contains one of these vertices; face emptiness reduces to a table scan.
    """
    key = ("vertex_signs",)
    if key not in V._cache:
        seen = set()
        for S in combinations(range(V.n), V.k):
            rows = tuple(V.A[i] for i in S)
            if V.k:
                if rank(rows) < V.k:
                    continue
                point = solve(rows, [-V.w[i] for i in S])
            else:
                point = ()
            vals = tuple(wi + sum((a * p for a, p in zip(row, point)), Fraction(0)) for row, wi in zip(V.A, V.w))
            seen.add(tuple((v > 0) - (v < 0) for v in vals))
        V._cache[key] = tuple(sorted(seen))
    return V._cache[key]


def face_nonempty(V: PolarizedArrangement, alpha: str, beta: str, S) -> bool:
    """Is Δ_α ∩ Δ_β ∩ H_S nonempty?  S holds 1-based hyperplane indices."""
    zero = set(S) | flip_set(alpha, beta)
    signs = [sign_value(a) for a in alpha]
    for sig in vertex_sign_table(V):
        if all(sig[i - 1] == 0 for i in zero) and all(
            sig[j] in (0, signs[j]) for j in range(V.n) if j + 1 not in zero
        ):
            return True
    return False


@dataclass(frozen=True)
class VanishingIdeal:
    pair: tuple
    minimal_sets: tuple  # of frozensets of 1-based indices

    def contains(self, support) -> bool:
        support = set(support)
        return any(S <= support for S in self.minimal_sets)

    @property
    def is_unit(self) -> bool:
        return frozenset() in self.minimal_sets


def vanishing_sets(V: PolarizedArrangement, alpha: str, beta: str) -> VanishingIdeal:
    """Minimal S with Δ_α ∩ Δ_β ∩ H_S empty, by cardinality with superset pruning."""
    key = ("vanish", alpha, beta)
    if key in V._cache:
        return V._cache[key]
    P = enumerate_sets(V).P
    if alpha not in P or beta not in P:
        out = VanishingIdeal((alpha, beta), (frozenset(),))
    else:
        found: list = []
        for size in range(V.n + 1):
            for S in combinations(range(1, V.n + 1), size):
                fs = frozenset(S)
                if any(m <= fs for m in found):
                    continue
                if not face_nonempty(V, alpha, beta, fs):
                    found.append(fs)
        out = VanishingIdeal((alpha, beta), tuple(sorted(found, key=lambda s: (len(s), sorted(s)))))
    V._cache[key] = out
    return out


# ---------------------------------------------------------------- canonical B̃


class BTilde:
    """B̃(V) in canonical form, optionally truncated to a set of idempotents."""

    def __init__(self, V: PolarizedArrangement, idempotents=None):
        self.V = V
        self.n = V.n
        sets = enumerate_sets(V)
        self.P = sets.P
        self.K = sets.K
        idem = self.P if idempotents is None else frozenset(idempotents)
        if not idem <= self.P:
            raise ArrangementError("truncation idempotents must be bounded feasible")
        self.idempotents = tuple(sorted(idem))
        self._idem = frozenset(self.idempotents)
        self._adm: dict = {}
        self._paths: dict = {}

    # elements -------------------------------------------------------------
    def admissible(self, alpha: str, beta: str, mono) -> bool:
        support = frozenset(i for i, m in enumerate(mono, start=1) if m)
        key = (alpha, beta, support)
        if key not in self._adm:
            self._adm[key] = not vanishing_sets(self.V, alpha, beta).contains(support)
        return self._adm[key]

    def reduce(self, terms: dict) -> dict:
        return {
            (a, b, m): c
            for (a, b, m), c in terms.items()
            if c and a in self._idem and b in self._idem and self.admissible(a, b, m)
        }

    def zero(self) -> dict:
        return {}

    def e(self, alpha: str) -> dict:
        return self.reduce({(alpha, alpha, (0,) * self.n): 1})

    def f(self, alpha: str, beta: str, mono=None) -> dict:
        return self.reduce({(alpha, beta, tuple(mono) if mono else (0,) * self.n): 1})

    def u(self, i: int) -> dict:
        """The central element u_i = Σ_α u_i e_α."""
        return self.reduce({(a, a, unit(self.n, i)): 1 for a in self.idempotents})

    def one(self) -> dict:
        return self.reduce({(a, a, (0,) * self.n): 1 for a in self.idempotents})

    def add(self, x, y, c: int = 1) -> dict:
        return lin_add(x, y, c)

    def mul(self, x: dict, y: dict) -> dict:
        by_src: dict = {}
        for (b, g, m), c in y.items():
            by_src.setdefault(b, []).append((g, m, c))
        out: dict = {}
        for (a, b, m1), c1 in x.items():
            for g, m2, c2 in by_src.get(b, ()):
                S = [i for i in range(self.n) if a[i] == g[i] != b[i]]
                mono = list(vadd(m1, m2))
                for i in S:
                    mono[i] += 1
                mono = tuple(mono)
                if not self.admissible(a, g, mono):
                    continue
                key = (a, g, mono)
                nv = out.get(key, 0) + c1 * c2
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return out

    def power(self, x: dict, exps) -> dict:
        out = self.one()
        for i, m in enumerate(exps, start=1):
            for _ in range(m):
                out = self.mul(out, self.u(i))
        return self.mul(x, out) if x is not None else out

    def is_zero(self, x: dict) -> bool:
        return not self.reduce(x)

    def psi(self, x: dict) -> dict:
        """The anti-involution f_{αβ} ↦ f_{βα}, u_i fixed."""
        return {(b, a, m): c for (a, b, m), c in x.items()}

    # grading --------------------------------------------------------------
    def multidegree(self, alpha: str, beta: str, mono) -> tuple:
        fl = flip_set(alpha, beta)
        return tuple(2 * m + (1 if i in fl else 0) for i, m in enumerate(mono, start=1))

    def basis(self, alpha: str, beta: str, d) -> list:
        if alpha not in self._idem or beta not in self._idem:
            return []
        fl = flip_set(alpha, beta)
        mono = []
        for i, di in enumerate(d, start=1):
            r = di - (1 if i in fl else 0)
            if r < 0 or r % 2:
                return []
            mono.append(r // 2)
        mono = tuple(mono)
        return [mono] if self.admissible(alpha, beta, mono) else []

    def graded_rank(self, alpha: str, beta: str, d) -> int:
        return len(self.basis(alpha, beta, d))

    def basis_single(self, alpha: str, beta: str, degree: int) -> list:
        """Admissible monomials of pair (α,β) in single degree ``degree``."""
        r = degree - len(flip_set(alpha, beta))
        if alpha not in self._idem or beta not in self._idem or r < 0 or r % 2:
            return []
        return [m for m in monomials(self.n, r // 2) if self.admissible(alpha, beta, m)]

    def term_degree(self, key) -> tuple:
        return self.multidegree(*key)

    # lifting to paths -----------------------------------------------------
    def monotone_path(self, alpha: str, beta: str) -> Optional[tuple]:
        """A shortest path α → β through the idempotents flipping each coordinate once."""
        key = (alpha, beta)
        if key not in self._paths:
            fl = sorted(flip_set(alpha, beta))
            prev = {alpha: None}
            queue = deque([alpha])
            while queue:
                cur = queue.popleft()
                if cur == beta:
                    break
                for i in fl:
                    if cur[i - 1] == alpha[i - 1]:
                        nxt = flip_at(cur, i)
                        if nxt in self._idem and nxt not in prev:
                            prev[nxt] = cur
                            queue.append(nxt)
            if beta not in prev:
                self._paths[key] = None
            else:
                path = [beta]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                self._paths[key] = tuple(reversed(path))
        return self._paths[key]

    def lift(self, x: dict) -> dict:
        """Rewrite a canonical element as a combination of (path, mono) words."""
        out: dict = {}
        for (a, b, m), c in x.items():
            path = self.monotone_path(a, b)
            if path is None:
                raise ArrangementError(f"no monotone path of idempotents from {a} to {b}")
            out = lin_add(out, {(path, m): c})
        return out

    def generators(self) -> list:
        """Idempotents, adjacent arrows and u_i e_α as (label, element)."""
        gens = [(f"e[{a}]", self.e(a)) for a in self.idempotents]
        for a in self.idempotents:
            for i in range(1, self.n + 1):
                b = flip_at(a, i)
                if b in self._idem:
                    gens.append((f"f[{a},{b}]", self.f(a, b)))
        for a in self.idempotents:
            for i in range(1, self.n + 1):
                g = self.f(a, a, unit(self.n, i))
                if g:
                    gens.append((f"u{i}e[{a}]", g))
        return gens


def btilde_multiply(V: PolarizedArrangement, x: dict, y: dict) -> dict:
    return _btilde(V).mul(x, y)


def graded_rank_btilde(V: PolarizedArrangement, alpha: str, beta: str, d) -> int:
    return _btilde(V).graded_rank(alpha, beta, d)


def _btilde(V: PolarizedArrangement) -> BTilde:
    key = ("btilde",)
    if key not in V._cache:
        V._cache[key] = BTilde(V)
    return V._cache[key]


# ---------------------------------------------------------------- presentations


@dataclass(frozen=True)
class Relation:
    terms: tuple  # ((path, mono), coeff) pairs
    label: str = ""

    @property
    def src(self):
        return self.terms[0][0][0][0]

    @property
    def tgt(self):
        return self.terms[0][0][0][-1]

    def as_dict(self) -> dict:
        return dict(self.terms)


@dataclass
class QuiverPresentation:
    """Path algebra over Z[c_1..c_n] (central generators) modulo relations.

    ``arrows`` maps (src, tgt) to (name, multidegree).  ``idempotents`` is the
    set of vertices the algebra is truncated to; it defaults to all vertices.
    """

    vertices: tuple
    arrows: dict
    n: int
    relations: tuple
    central_name: str = "u"
    idempotents: Optional[tuple] = None
    label: str = ""
    _out: dict = field(default_factory=dict, init=False, repr=False)
    _rel_at: dict = field(default_factory=dict, init=False, repr=False)
    _exact: dict = field(default_factory=dict, init=False, repr=False)
    _words: dict = field(default_factory=dict, init=False, repr=False)
    _rel_by_deg: dict = field(default_factory=dict, init=False, repr=False)
    _pieces: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.idempotents is None:
            self.idempotents = tuple(self.vertices)
        for (s, t) in self.arrows:
            self._out.setdefault(s, []).append(t)
        for r in self.relations:
            deg = self.term_degree(r.terms[0][0])
            for (path, mono), _ in r.terms:
                if path[0] != r.src or path[-1] != r.tgt or self.term_degree((path, mono)) != deg:
                    raise ValueError(f"relation {r.label} is not homogeneous")
            self._rel_at.setdefault(r.src, []).append((r, deg))
            self._rel_by_deg.setdefault(deg, {}).setdefault(r.src, []).append(r)

    def arrow_degree(self, s, t) -> tuple:
        return self.arrows[(s, t)][1]

    def term_degree(self, key) -> tuple:
        path, mono = key
        d = tuple(2 * m for m in mono)
        for s, t in zip(path, path[1:]):
            d = vadd(d, self.arrow_degree(s, t))
        return d

    def exact_paths(self, v, d) -> list:
        """Paths starting at v whose arrow multidegree is exactly d."""
        key = (v, d)
        if key not in self._exact:
            if not any(d):
                out = [(v,)]
            else:
                out = []
                for t in self._out.get(v, ()):
                    ad = self.arrow_degree(v, t)
                    rest = tuple(x - y for x, y in zip(d, ad))
                    if min(rest) < 0:
                        continue
                    out.extend((v,) + p for p in self.exact_paths(t, rest))
            self._exact[key] = out
        return self._exact[key]

    def paths_into(self, src, tgt, d) -> list:
        """Basis words (path, mono) from src to tgt of multidegree d."""
        key = (src, tgt, tuple(d))
        if key not in self._words:
            out = []
            for e in sub_degrees(d):
                rem = tuple(x - y for x, y in zip(d, e))
                if any(r % 2 for r in rem):
                    continue
                mono = tuple(r // 2 for r in rem)
                out.extend((p, mono) for p in self.exact_paths(src, e) if p[-1] == tgt)
            self._words[key] = out
        return self._words[key]

    def piece(self, src, tgt, d, bound: Optional[int] = None) -> "GradedPiece":
        d = tuple(d)
        if bound is not None and sum(d) > bound:
            raise ValueError(f"multidegree {d} exceeds the window bound {bound}")
        key = (src, tgt, d)
        if key not in self._pieces:
            self._pieces[key] = self._build_piece(src, tgt, d)
        return self._pieces[key]

    def _build_piece(self, src, tgt, d) -> "GradedPiece":
        basis = sorted(self.paths_into(src, tgt, d))
        index = {b: j for j, b in enumerate(basis)}
        rows = []
        seen = set()
        if basis:
            for e1 in sub_degrees(d):
                starts = None
                for rdeg, by_vertex in self._rel_by_deg.items():
                    rem = tuple(x - y - z for x, y, z in zip(d, e1, rdeg))
                    if min(rem) < 0:
                        continue
                    if starts is None:
                        starts = self.exact_paths(src, e1)
                    for p1 in starts:
                        for rel in by_vertex.get(p1[-1], ()):
                            for p2, m in self.paths_into(rel.tgt, tgt, rem):
                                row = {}
                                for (path, mono), c in rel.terms:
                                    j = index[(p1 + path[1:] + p2[1:], vadd(mono, m))]
                                    row[j] = row.get(j, 0) + c
                                frozen = tuple(sorted((j, c) for j, c in row.items() if c))
                                if frozen and frozen not in seen:
                                    seen.add(frozen)
                                    rows.append(dict(frozen))
        return GradedPiece(src, tgt, d, tuple(basis), rows)

    def algebra(self) -> "PresentedAlgebra":
        return PresentedAlgebra(self)

    def generators(self) -> list:
        """(label, element) for idempotents, arrows and c_i e_v within the truncation."""
        idem = set(self.idempotents)
        z = (0,) * self.n
        gens = [(f"e[{_fmt(v)}]", {((v,), z): 1}) for v in self.idempotents]
        for (s, t), (name, _) in sorted(self.arrows.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            if s in idem and t in idem:
                gens.append((f"{name}[{_fmt(s)}->{_fmt(t)}]", {((s, t), z): 1}))
        for v in self.idempotents:
            for i in range(1, self.n + 1):
                gens.append((f"{self.central_name}{i}e[{_fmt(v)}]", {((v,), unit(self.n, i)): 1}))
        return gens


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return "{" + ",".join(map(str, v)) + "}"


@dataclass
class GradedPiece:
    src: object
    tgt: object
    d: tuple
    basis: tuple
    relation_rows: list
    _inv: Optional[list] = field(default=None, init=False, repr=False)
    _ech: Optional[RationalEchelon] = field(default=None, init=False, repr=False)

    @property
    def invariants(self) -> list:
        if self._inv is None:
            self._inv = smith_invariants(self.relation_rows, len(self.basis))
        return self._inv

    @property
    def rank(self) -> int:
        return len(self.basis) - len(self.invariants)

    @property
    def torsion(self) -> list:
        return [x for x in self.invariants if x > 1]

    def vector(self, x: dict) -> dict:
        index = {b: j for j, b in enumerate(self.basis)}
        return {index[key]: c for key, c in x.items() if c}

    def contains(self, vec: dict) -> bool:
        """Membership in the relation lattice (valid since the quotient is torsion-free)."""
        if self.torsion:
            raise ArithmeticError(f"graded piece {self.src}->{self.tgt} {self.d} has torsion")
        if self._ech is None:
            self._ech = RationalEchelon()
            for r in self.relation_rows:
                self._ech.add(r)
        return self._ech.contains(vec)


def presented_graded_rank(qp: QuiverPresentation, src, tgt, d, bound: int = 12) -> tuple:
    """(rank, torsion divisors) of the graded piece e_src · A_d · e_tgt."""
    piece = qp.piece(src, tgt, d, bound)
    return piece.rank, piece.torsion


class PresentedAlgebra:
    """Arithmetic on (path, mono) words with zero tests through graded pieces."""

    def __init__(self, qp: QuiverPresentation):
        self.qp = qp
        self.n = qp.n
        self._idem = frozenset(qp.idempotents)

    def zero(self) -> dict:
        return {}

    def e(self, v) -> dict:
        return {((v,), (0,) * self.n): 1}

    def arrow(self, s, t) -> dict:
        return {((s, t), (0,) * self.n): 1}

    def central(self, i: int) -> dict:
        return {((v,), unit(self.n, i)): 1 for v in self.qp.idempotents}

    def add(self, x, y, c: int = 1) -> dict:
        return lin_add(x, y, c)

    def mul(self, x: dict, y: dict) -> dict:
        by_src: dict = {}
        for (p, m), c in y.items():
            by_src.setdefault(p[0], []).append((p, m, c))
        out: dict = {}
        for (p1, m1), c1 in x.items():
            for p2, m2, c2 in by_src.get(p1[-1], ()):
                key = (p1 + p2[1:], vadd(m1, m2))
                nv = out.get(key, 0) + c1 * c2
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return out

    def is_zero(self, x: dict) -> bool:
        groups: dict = {}
        for key, c in x.items():
            if not c:
                continue
            path, _ = key
            if path[0] not in self._idem or path[-1] not in self._idem:
                raise ValueError("element leaves the truncation")
            g = (path[0], path[-1], self.qp.term_degree(key))
            groups.setdefault(g, {})[key] = c
        for (s, t, d), terms in groups.items():
            piece = self.qp.piece(s, t, d)
            if not piece.contains(piece.vector(terms)):
                return False
        return True

    def term_degree(self, key) -> tuple:
        return self.qp.term_degree(key)


# ---------------------------------------------------------------- hypercube quivers


def hypercube_presentation(n: int, vertices, killed, central_name: str = "u", label: str = "") -> QuiverPresentation:
    """Vertices are sign sequences; arrows join sequences differing in one place.

    Relations: e_α for α in ``killed``, commuting squares, and
    p(α,β,α) = c_i e_α where i is the coordinate where α and β differ.
    """
    verts = tuple(sorted(vertices))
    vset = set(verts)
    z = (0,) * n
    arrows = {}
    for a in verts:
        for i in range(1, n + 1):
            b = flip_at(a, i)
            if b in vset:
                arrows[(a, b)] = (f"p", unit(n, i))
    rels = []
    for a in verts:
        if a in killed:
            rels.append(Relation(((((a,), z), 1),), f"kill {a}"))
    for a in verts:
        for i, j in combinations(range(1, n + 1), 2):
            b, dd = flip_at(a, i), flip_at(a, j)
            g = flip_at(b, j)
            if {b, dd, g} <= vset:
                rels.append(Relation(((((a, b, g), z), 1), (((a, dd, g), z), -1)), f"square {a}->{g}"))
    for a in verts:
        for i in range(1, n + 1):
            b = flip_at(a, i)
            if b in vset:
                rels.append(Relation(((((a, b, a), z), 1), (((a,), unit(n, i)), -1)), f"loop {a}<->{b}"))
    return QuiverPresentation(verts, arrows, n, tuple(rels), central_name, label=label)


def btilde_presentation(V: PolarizedArrangement) -> QuiverPresentation:
    key = ("btilde_presentation",)
    if key not in V._cache:
        sets = enumerate_sets(V)
        V._cache[key] = hypercube_presentation(V.n, sets.B, sets.B - sets.F, "u", "btilde")
    return V._cache[key]


def atilde_presentation(V: PolarizedArrangement) -> QuiverPresentation:
    key = ("atilde_presentation",)
    if key not in V._cache:
        sets = enumerate_sets(V)
        V._cache[key] = hypercube_presentation(V.n, sets.F, sets.F - sets.B, "t", "atilde")
    return V._cache[key]


def count_squares(vertices, n: int) -> int:
    """Number of 4-cycles α↔β↔γ↔δ↔α with all corners in ``vertices``."""
    vset = set(vertices)
    total = 0
    for a in vset:
        for i, j in combinations(range(1, n + 1), 2):
            if {flip_at(a, i), flip_at(a, j), flip_at(flip_at(a, i), j)} <= vset:
                total += 1
    return total // 4


# ---------------------------------------------------------------- homomorphisms


class HomomorphismError(AssertionError):
    pass


class GeneratorHom:
    """A homomorphism out of a quiver presentation, given by generator images.

    Codomain elements are handled through the codomain's mul/add/is_zero.
    ``domain_lift`` turns canonical elements of the domain into words when the
    domain algebra is usually handled in canonical form.
    """

    def __init__(
        self,
        name: str,
        domain: QuiverPresentation,
        codomain,
        vertex_image: Callable,
        arrow_image: Callable,
        central_image: Callable,
        grading: Optional[Callable] = None,
        domain_lift: Optional[Callable] = None,
    ):
        self.name = name
        self.domain = domain
        self.codomain = codomain
        self._v = vertex_image
        self._a = arrow_image
        self._c = central_image
        self.grading = grading
        self.domain_lift = domain_lift
        self._vc: dict = {}
        self._ac: dict = {}
        self._cc: dict = {}

    def on_vertex(self, v) -> dict:
        if v not in self._vc:
            self._vc[v] = self._v(v)
        return self._vc[v]

    def on_arrow(self, s, t) -> dict:
        if (s, t) not in self._ac:
            self._ac[(s, t)] = self._a(s, t)
        return self._ac[(s, t)]

    def on_central(self, i: int) -> dict:
        if i not in self._cc:
            self._cc[i] = self._c(i)
        return self._cc[i]

    def on_word(self, path, mono) -> dict:
        cod = self.codomain
        x = self.on_vertex(path[0])
        for s, t in zip(path, path[1:]):
            if not x:
                return {}
            x = cod.mul(x, self.on_arrow(s, t))
        for i, m in enumerate(mono, start=1):
            for _ in range(m):
                if not x:
                    return {}
                x = cod.mul(x, self.on_central(i))
        return x

    def apply_words(self, words: dict) -> dict:
        out: dict = {}
        for (path, mono), c in words.items():
            out = lin_add(out, self.on_word(path, mono), c)
        return out

    def apply(self, x: dict) -> dict:
        if x and self.domain_lift is not None and len(next(iter(x))) == 3:
            x = self.domain_lift(x)
        return self.apply_words(x)

    def relation_failures(self) -> list:
        """Labels of defining and structural relations not sent to zero."""
        cod = self.codomain
        bad = []
        for r in self.domain.relations:
            if not cod.is_zero(self.apply_words(r.as_dict())):
                bad.append(r.label)
        verts = self.domain.idempotents
        for v in verts:
            ev = self.on_vertex(v)
            if not cod.is_zero(lin_add(cod.mul(ev, ev), ev, -1)):
                bad.append(f"idempotent {_fmt(v)}")
            for w in verts:
                if w != v and not cod.is_zero(cod.mul(ev, self.on_vertex(w))):
                    bad.append(f"orthogonal {_fmt(v)},{_fmt(w)}")
            for i in range(1, self.domain.n + 1):
                c = self.on_central(i)
                if not cod.is_zero(lin_add(cod.mul(c, ev), cod.mul(ev, c), -1)):
                    bad.append(f"central {i} at {_fmt(v)}")
        idem = set(verts)
        for (s, t) in self.domain.arrows:
            if s not in idem or t not in idem:
                continue
            a = self.on_arrow(s, t)
            framed = cod.mul(cod.mul(self.on_vertex(s), a), self.on_vertex(t))
            if not cod.is_zero(lin_add(framed, a, -1)):
                bad.append(f"arrow frame {_fmt(s)}->{_fmt(t)}")
            for i in range(1, self.domain.n + 1):
                c = self.on_central(i)
                if not cod.is_zero(lin_add(cod.mul(c, a), cod.mul(a, c), -1)):
                    bad.append(f"central {i} past {_fmt(s)}->{_fmt(t)}")
        return bad

    def check(self) -> None:
        bad = self.relation_failures()
        if bad:
            raise HomomorphismError(f"{self.name}: relations not respected: {bad[:5]}")

    def generator_images(self) -> list:
        return [(label, g, self.apply_words(g)) for label, g in self.domain.generators()]


class CanonicalHom:
    """A homomorphism defined term by term on canonical forms of a truncated B̃."""

    def __init__(self, name: str, domain: BTilde, codomain, term_image: Callable, grading=None):
        self.name = name
        self.domain = domain
        self.codomain = codomain
        self._t = term_image
        self.grading = grading

    def apply(self, x: dict) -> dict:
        out: dict = {}
        for (a, b, m), c in x.items():
            out = lin_add(out, self._t(a, b, m), c)
        return self.codomain.reduce(out) if hasattr(self.codomain, "reduce") else out

    def ideal_failures(self) -> list:
        """Pairs whose minimal vanishing monomials are not sent to zero."""
        dom, n = self.domain, self.domain.n
        bad = []
        for a in dom.idempotents:
            for b in dom.idempotents:
                for S in vanishing_sets(dom.V, a, b).minimal_sets:
                    mono = tuple(1 if i in S else 0 for i in range(1, n + 1))
                    if not self.codomain.is_zero(self._t(a, b, mono)):
                        bad.append((a, b, tuple(sorted(S))))
        return bad

    def multiplicativity_failures(self, window: int) -> list:
        dom = self.domain
        basis = []
        for a in dom.idempotents:
            for b in dom.idempotents:
                for deg in range(window + 1):
                    basis.extend((a, b, m) for m in dom.basis_single(a, b, deg))
        by_src: dict = {}
        for key in basis:
            by_src.setdefault(key[0], []).append(key)
        bad = []
        for x in basis:
            dx = sum(dom.multidegree(*x))
            for y in by_src.get(x[1], ()):
                if dx + sum(dom.multidegree(*y)) > window:
                    continue
                lhs = self.apply(dom.mul({x: 1}, {y: 1}))
                rhs = self.codomain.mul(self.apply({x: 1}), self.apply({y: 1}))
                if lhs != self.codomain.reduce(rhs):
                    bad.append((x, y))
        return bad

    def check(self, window: int = 4) -> None:
        bad = self.ideal_failures()
        if bad:
            raise HomomorphismError(f"{self.name}: vanishing ideal not respected: {bad[:5]}")
        bad = self.multiplicativity_failures(window)
        if bad:
            raise HomomorphismError(f"{self.name}: not multiplicative on {bad[:3]}")


def canonical_evaluation(V: PolarizedArrangement, algebra: Optional[BTilde] = None) -> GeneratorHom:
    """btilde_presentation(V) → B̃(V) sending p(α,β) to f_{αβ}."""
    alg = algebra or _btilde(V)
    return GeneratorHom(
        "eval",
        btilde_presentation(V),
        alg,
        lambda v: alg.e(v),
        lambda s, t: alg.f(s, t),
        lambda i: alg.u(i),
        grading=lambda d: d,
    )


# ---------------------------------------------------------------- Ã and B̃′


class ATilde:
    """Ã(V) realized as B̃(V^∨) in canonical form and by its own presentation."""

    def __init__(self, V: PolarizedArrangement):
        self.V = V
        self.dual = gale_dual(V)
        self.canonical = _btilde(self.dual)
        self.presentation = atilde_presentation(V)
        if self.canonical.P != enumerate_sets(V).P:
            raise ArrangementError("Gale dual does not exchange feasibility and boundedness")

    def graded_rank(self, alpha: str, beta: str, d) -> int:
        return self.canonical.graded_rank(alpha, beta, d)

    def presented_rank(self, alpha: str, beta: str, d) -> tuple:
        return presented_graded_rank(self.presentation, alpha, beta, d)

    def evaluation(self) -> GeneratorHom:
        alg = self.canonical
        return GeneratorHom(
            "atilde-eval",
            self.presentation,
            alg,
            lambda v: alg.e(v),
            lambda s, t: alg.f(s, t),
            lambda i: alg.u(i),
            grading=lambda d: d,
        )

    def compare_ranks(self, window: int) -> list:
        """Cells (α, β, d) where the two realizations disagree or show torsion."""
        bad = []
        for a in self.presentation.vertices:
            for d in degrees_up_to(self.V.n, window):
                b = _parity_target(a, d)
                r, tors = self.presented_rank(a, b, d)
                expect = self.graded_rank(a, b, d) if a in self.canonical.P and b in self.canonical.P else 0
                if r != expect or tors:
                    bad.append((a, b, d, r, expect, tors))
        return bad


def atilde(V: PolarizedArrangement) -> ATilde:
    key = ("atilde",)
    if key not in V._cache:
        V._cache[key] = ATilde(V)
    return V._cache[key]


def degrees_up_to(n: int, window: int):
    for total in range(window + 1):
        for mono in monomials(n, total):
            yield mono


def _parity_target(alpha: str, d) -> str:
    out = alpha
    for i, di in enumerate(d, start=1):
        if di % 2:
            out = flip_at(out, i)
    return out


def presentation_rank_mismatches(V: PolarizedArrangement, window: int) -> list:
    """Compare btilde_presentation ranks with canonical monomial counts."""
    qp = btilde_presentation(V)
    alg = _btilde(V)
    bad = []
    for a in qp.vertices:
        for d in degrees_up_to(V.n, window):
            b = _parity_target(a, d)
            r, tors = presented_graded_rank(qp, a, b, d)
            expect = alg.graded_rank(a, b, d) if a in alg.P and b in alg.P else 0
            if r != expect or tors:
                bad.append((a, b, d, r, expect, tors))
    return bad


@dataclass
class BTildePrime:
    algebras: tuple  # one truncated BTilde per polarization
    idempotents: tuple

    def graded_rank(self, alpha: str, beta: str, d) -> int:
        return self.algebras[0].graded_rank(alpha, beta, d)

    def xi_independence_failures(self, window: int) -> list:
        bad = []
        n = self.algebras[0].n
        for a in self.idempotents:
            for b in self.idempotents:
                for d in degrees_up_to(n, window):
                    ranks = {alg.graded_rank(a, b, d) for alg in self.algebras}
                    if len(ranks) > 1:
                        bad.append((a, b, d, sorted(ranks)))
        return bad


def btilde_prime(*polarized: PolarizedArrangement) -> BTildePrime:
    """B̃′ from one or more polarizations of the same arrangement."""
    if not polarized:
        raise ValueError("need at least one polarization")
    base = polarized[0]
    for V in polarized[1:]:
        if V.A != base.A or V.w != base.w:
            raise ArrangementError("polarizations must share the arrangement")
    Ks = {enumerate_sets(V).K for V in polarized}
    if len(Ks) != 1:
        raise ArrangementError("compact regions disagree between polarizations")
    K = Ks.pop()
    return BTildePrime(tuple(BTilde(V, K) for V in polarized), tuple(sorted(K)))


# ---------------------------------------------------------------- center and quotient


@dataclass
class CenterPiece:
    degree: int
    rank: int
    basis: list  # canonical elements


def center_graded(alg: BTilde, bound: int) -> dict:
    """Center of the truncated B̃ in single degrees 0..bound, by commutant solve."""
    out = {}
    idem = alg.idempotents
    adjacent = [(a, b) for a in idem for b in idem if len(flip_set(a, b)) == 1]
    for D in range(bound + 1):
        if D % 2:
            out[D] = CenterPiece(D, 0, [])
            continue
        m = D // 2
        unknowns = [(a, mono) for a in idem for mono in alg.basis_single(a, a, D)]
        index = {u: j for j, u in enumerate(unknowns)}
        eqs = []
        for a, b in adjacent:
            # z f_ab - f_ab z, coefficient of u^mono f_ab
            for mono in monomials(alg.n, m):
                if not alg.admissible(a, b, mono):
                    continue
                row = [Fraction(0)] * len(unknowns)
                if (a, mono) in index:
                    row[index[(a, mono)]] += 1
                if (b, mono) in index:
                    row[index[(b, mono)]] -= 1
                if any(row):
                    eqs.append(tuple(row))
        if not unknowns:
            out[D] = CenterPiece(D, 0, [])
            continue
        if eqs:
            ker = nullspace(tuple(eqs), width=len(unknowns))
            cols = list(zip(*ker)) if ker and ker[0] else []
        else:
            cols = [tuple(Fraction(int(i == j)) for i in range(len(unknowns))) for j in range(len(unknowns))]
        basis = []
        for col in cols:
            scale = lcm(*(x.denominator for x in col))
            elem = {(a, a, mono): int(x * scale) for (a, mono), x in zip(unknowns, col) if x}
            basis.append(elem)
        out[D] = CenterPiece(D, len(basis), basis)
    return out


def center_failures(alg: BTilde, pieces: dict) -> list:
    """Basis elements that fail to commute with some generator."""
    bad = []
    gens = alg.generators()
    for D, piece in pieces.items():
        for z in piece.basis:
            for label, g in gens:
                if alg.mul(z, g) != alg.mul(g, z):
                    bad.append((D, label))
    return bad


def truncated_polynomial_rank(n: int, k: int, degree: int) -> int:
    """Rank in single degree ``degree`` of Z[U_1..U_n] modulo all (k+1)-fold squarefree products."""
    if degree % 2:
        return 0
    return sum(1 for m in monomials(n, degree // 2) if sum(1 for x in m if x) <= k)


def finite_quotient_graded_dim(V: PolarizedArrangement, alpha: str, beta: str, degree: int) -> int:
    """dim over Q of the degree part of R̃_αβ modulo the linear forms Σ c_i u_i, c ∈ V."""
    alg = _btilde(V)
    if alpha not in alg.P or beta not in alg.P:
        return 0
    r = degree - len(flip_set(alpha, beta))
    if r < 0 or r % 2:
        return 0
    m = r // 2
    basis = [mono for mono in monomials(V.n, m) if alg.admissible(alpha, beta, mono)]
    if not basis or m == 0:
        return len(basis)
    index = {b: j for j, b in enumerate(basis)}
    ech = RationalEchelon()
    for j in range(V.k):
        form = [row[j] for row in V.A]
        for low in monomials(V.n, m - 1):
            vec = {}
            for i in range(V.n):
                if form[i]:
                    mono = tuple(x + (1 if t == i else 0) for t, x in enumerate(low))
                    if mono in index:
                        vec[index[mono]] = vec.get(index[mono], 0) + form[i]
            if vec:
                ech.add(vec)
    return len(basis) - ech.rank


# ---------------------------------------------------------------- deletion and restriction


@dataclass
class DeletionRestrictionHoms:
    V: PolarizedArrangement
    i: int
    s: str
    rest_atilde: GeneratorHom
    del_atilde: GeneratorHom
    rest_btilde_prime: CanonicalHom
    del_btilde: GeneratorHom
    rest_btilde: GeneratorHom
    del_atilde_prime: CanonicalHom

    def all(self) -> list:
        return [
            self.rest_atilde,
            self.del_atilde,
            self.rest_btilde_prime,
            self.del_btilde,
            self.rest_btilde,
            self.del_atilde_prime,
        ]

    def check(self, window: int = 4) -> None:
        for h in self.all():
            if isinstance(h, CanonicalHom):
                h.check(window)
            else:
                h.check()


def _grading_insert(i):
    return lambda d: insert_coord(d, i, 0)


def _grading_drop(i):
    return lambda d: drop_coord(d, i)


def _insertion_hom(name, domain_qp, target: BTilde, i: int, s: str, lift=None) -> GeneratorHom:
    """Generators of the smaller algebra go to the sign-s insertion at position i."""
    n_small = target.n - 1
    return GeneratorHom(
        name,
        domain_qp,
        target,
        lambda v: target.e(insert_sign(v, i, s)),
        lambda a, b: target.f(insert_sign(a, i, s), insert_sign(b, i, s)),
        lambda j: target.u(shift_up(j, i)),
        grading=_grading_insert(i),
        domain_lift=lift,
    )


def _removal_hom(name, domain_qp, target: BTilde, i: int, s: str, lift=None) -> GeneratorHom:
    """Generators with sign s at position i lose it; the rest go to zero; c_i ↦ 0."""

    def vimg(v):
        return target.e(remove_sign(v, i)) if v[i - 1] == s else {}

    def aimg(a, b):
        if a[i - 1] == s and b[i - 1] == s:
            return target.f(remove_sign(a, i), remove_sign(b, i))
        return {}

    def cimg(j):
        if j == i:
            return {}
        return target.u(j if j < i else j - 1)

    return GeneratorHom(name, domain_qp, target, vimg, aimg, cimg, grading=_grading_drop(i), domain_lift=lift)


def _primed_removal(name, domain: BTilde, target: BTilde, i: int) -> CanonicalHom:
    """Canonical truncation B̃^s → smaller algebra with c_i ↦ 1."""

    def term(a, b, mono):
        return target.reduce({(remove_sign(a, i), remove_sign(b, i), drop_coord(mono, i)): 1})

    return CanonicalHom(name, domain, target, term, grading=_grading_drop(i))


def sign_truncation(alg_V: PolarizedArrangement, i: int, s: str) -> BTilde:
    P = enumerate_sets(alg_V).P
    return BTilde(alg_V, [a for a in P if a[i - 1] == s])


def deletion_restriction_homs(V: PolarizedArrangement, i: int, s: str) -> DeletionRestrictionHoms:
    """The six homomorphisms attached to hyperplane i and sign s."""
    if s not in "+-" or len(s) != 1:
        raise ValueError("sign must be '+' or '-'")
    V_del = delete(V, i)
    V_res = restrict(V, i)
    A_V, A_del, A_res = atilde(V), atilde(V_del), atilde(V_res)
    B_V, B_del, B_res = _btilde(V), _btilde(V_del), _btilde(V_res)

    rest_a = _insertion_hom("rest_A", A_res.presentation, A_V.canonical, i, s, A_res.canonical.lift)
    del_a = _removal_hom("del_A", A_V.presentation, A_del.canonical, i, s, A_V.canonical.lift)
    rest_b_prime = _primed_removal("rest'_B", sign_truncation(V, i, s), B_res, i)
    del_b = _insertion_hom("del_B", btilde_presentation(V_del), B_V, i, s, B_del.lift)
    rest_b = _removal_hom("rest_B", btilde_presentation(V), B_res, i, s, B_V.lift)
    del_a_prime = _primed_removal("del'_A", sign_truncation(A_V.dual, i, s), A_del.canonical, i)
    return DeletionRestrictionHoms(V, i, s, rest_a, del_a, rest_b_prime, del_b, rest_b, del_a_prime)


def _single_degree_preserved(h, n_dom: int) -> bool:
    """Does the grading map preserve Σd on the unit vectors of the domain?"""
    return all(sum(h.grading(unit(n_dom, j, 2))) == 2 for j in range(1, n_dom + 1))


@dataclass
class CompositionReport:
    atilde_zero: bool
    btilde_zero: bool
    atilde_sign_independent: bool
    btilde_sign_independent: bool
    atilde_primed_agrees: bool
    btilde_primed_agrees: bool
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def composition_check(V_big: PolarizedArrangement, i: int) -> CompositionReport:
    """Restrict-then-delete composites through V_big at hyperplane i, all sign choices."""
    homs = {s: deletion_restriction_homs(V_big, i, s) for s in "+-"}
    failures = []
    res_pres = atilde(restrict(V_big, i)).presentation
    del_pres = btilde_presentation(delete(V_big, i))

    def route_a(s1, s2, primed=False):
        first = homs[s2].rest_atilde
        second = homs[s1].del_atilde_prime if primed else homs[s1].del_atilde
        return {label: second.apply(first.apply_words(g)) for label, g in res_pres.generators()}

    def route_b(s1, s2, primed=False):
        first = homs[s1].del_btilde
        second = homs[s2].rest_btilde_prime if primed else homs[s2].rest_btilde
        return {label: second.apply(first.apply_words(g)) for label, g in del_pres.generators()}

    a_zero = all(not x for s1, s2 in (("+", "-"), ("-", "+")) for x in route_a(s1, s2).values())
    b_zero = all(not x for s1, s2 in (("+", "-"), ("-", "+")) for x in route_b(s1, s2).values())
    a_same = route_a("+", "+") == route_a("-", "-")
    b_same = route_b("+", "+") == route_b("-", "-")
    a_primed = all(route_a(s, s, True) == route_a(s, s) for s in "+-")
    b_primed = all(route_b(s, s, True) == route_b(s, s) for s in "+-")
    for name, ok in [
        ("atilde composite vanishes for different signs", a_zero),
        ("btilde composite vanishes for different signs", b_zero),
        ("atilde composite independent of the sign", a_same),
        ("btilde composite independent of the sign", b_same),
        ("atilde primed route agrees", a_primed),
        ("btilde primed route agrees", b_primed),
    ]:
        if not ok:
            failures.append(name)
    return CompositionReport(a_zero, b_zero, a_same, b_same, a_primed, b_primed, failures)
