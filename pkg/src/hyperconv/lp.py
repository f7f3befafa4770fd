"""Exact LP kernel built on Fourier–Motzkin elimination.

A polyhedron is a list of inequalities ``normal·x + offset >= 0``.  The
dimensions that show up in this package are small (k <= 4, n <= 12), so
elimination with dominance pruning stays cheap and every answer is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from itertools import combinations

from .qlinalg import dot, q, rank, solve, transpose

EMPTY = "Empty"
BOUNDED = "NonemptyBounded"
UNBOUNDED = "NonemptyUnbounded"


class DegenerateObjective(ValueError):
    pass


@dataclass(frozen=True)
class Polyhedron:
    dim: int
    inequalities: tuple = ()  # ((normal tuple, offset), ...)

    def __post_init__(self):
        ineqs = tuple((tuple(q(a) for a in nrm), q(b)) for nrm, b in self.inequalities)
        for nrm, _ in ineqs:
            if len(nrm) != self.dim:
                raise ValueError("normal length does not match dim")
        object.__setattr__(self, "inequalities", ineqs)

    def with_inequalities(self, extra) -> "Polyhedron":
        return Polyhedron(self.dim, self.inequalities + tuple(extra))

    def contains(self, point: Sequence) -> bool:
        return all(sum((a * x for a, x in zip(nrm, point)), b) >= 0 for nrm, b in self.inequalities)


@dataclass(frozen=True)
class LpVerdict:
    status: str
    witness: Optional[tuple] = None
    optimum: Optional[Fraction] = None
    direction: Optional[tuple] = field(default=None, compare=False)


def _integral(nrm, off):
    den = off.denominator
    for a in nrm:
        den = den * a.denominator // gcd(den, a.denominator)
    return tuple(int(a * den) for a in nrm) + (int(off * den),)


def _prune(rows):
    """Drop trivial rows and keep the tightest row per normal direction.

    Rows are integer tuples (normal..., offset).  Returns None when some
    constant row is violated.
    """
    best: dict = {}
    for row in rows:
        g = 0
        for a in row[:-1]:
            g = gcd(g, a)
        if g == 0:
            if row[-1] < 0:
                return None
            continue
        key = tuple(a // g for a in row[:-1])
        off = row[-1]
        old = best.get(key)
        # offsets compare as off/g
        if old is None or off * old[1] < old[0] * g:
            best[key] = (off, g)
    out = []
    for key, (off, g) in best.items():
        h = gcd(off, g)
        out.append(tuple(a * (g // h) for a in key) + (off // h,))
    return out


def _eliminate(rows, j):
    pos, neg, out = [], [], []
    for row in rows:
        c = row[j]
        (pos if c > 0 else neg if c < 0 else out).append(row)
    for pr in pos:
        a = pr[j]
        for nr in neg:
            b = -nr[j]
            out.append(tuple(b * x + a * y for x, y in zip(pr, nr)))
    return out


def _bounds(rows, j, values):
    lo = hi = None
    for row in rows:
        c = row[j]
        if c == 0:
            continue
        acc = Fraction(row[-1])
        for i, a in enumerate(row[:-1]):
            if i != j and a:
                acc += a * values[i]
        rhs = -acc / c
        if c > 0:
            lo = rhs if lo is None or rhs > lo else lo
        else:
            hi = rhs if hi is None or rhs < hi else hi
    return lo, hi


def _pick(lo, hi):
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo
    if hi is not None:
        return hi
    return Fraction(0)


def _cost(rows, j):
    p = sum(1 for row in rows if row[j] > 0)
    m = sum(1 for row in rows if row[j] < 0)
    return p * m - p - m


def _solve_system(dim, rows, keep=()):
    """Eliminate every variable not in ``keep``.

    Returns (stages, final_rows) or None when infeasible; stages is a list of
    (rows, eliminated variable) in elimination order.
    """
    cur = _prune([_integral(nrm, off) for nrm, off in rows])
    if cur is None:
        return None
    stages = []
    remaining = [j for j in range(dim) if j not in keep]
    while remaining:
        j = min(remaining, key=lambda t: _cost(cur, t))
        remaining.remove(j)
        stages.append((cur, j))
        cur = _prune(_eliminate(cur, j))
        if cur is None:
            return None
    return stages, cur


def _witness(dim, rows):
    solved = _solve_system(dim, rows)
    if solved is None:
        return None
    stages, _ = solved
    values = [Fraction(0)] * dim
    for stage_rows, j in reversed(stages):
        lo, hi = _bounds(stage_rows, j, values)
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("Fourier-Motzkin back-substitution failed")
        values[j] = _pick(lo, hi)
    return tuple(values)


def is_nonempty(p: Polyhedron) -> tuple[bool, Optional[tuple]]:
    w = _witness(p.dim, p.inequalities)
    return (w is not None), w


def functional_range(p: Polyhedron, f: Sequence) -> Optional[tuple]:
    """(min, max) of f over p, None for an unbounded side; None overall if p is empty."""
    f = tuple(q(a) for a in f)
    rows = [((Fraction(0),) + nrm, off) for nrm, off in p.inequalities]
    rows.append(((Fraction(-1),) + f, Fraction(0)))
    rows.append(((Fraction(1),) + tuple(-a for a in f), Fraction(0)))
    solved = _solve_system(p.dim + 1, rows, keep=(0,))
    if solved is None:
        return None
    return _bounds(solved[1], 0, [Fraction(0)] * (p.dim + 1))


def recession_ray(p: Polyhedron, objective: Sequence) -> Optional[tuple]:
    """A direction r with normals·r >= 0 and objective·r >= 1, if one exists."""
    rows = [(nrm, Fraction(0)) for nrm, _ in p.inequalities]
    rows.append((tuple(q(a) for a in objective), Fraction(-1)))
    return _witness(p.dim, rows)


def is_pointed_compact(p: Polyhedron) -> bool:
    """True when the recession cone of p is {0}."""
    normals = tuple(nrm for nrm, _ in p.inequalities)
    if p.dim == 0:
        return True
    if normals and rank(normals) == p.dim:
        # with full-rank normals, any nonzero r in the cone has N r >= 0, N r != 0,
        # so the sum of the normals is strictly positive on it
        total = tuple(sum(col, Fraction(0)) for col in zip(*normals))
        return recession_ray(p, total) is None
    for j in range(p.dim):
        for s in (1, -1):
            e = [0] * p.dim
            e[j] = s
            if recession_ray(p, e) is not None:
                return False
    return True


def is_bounded_above(p: Polyhedron, objective: Sequence) -> bool:
    """Objective bounded above on p; vacuously true when p is empty."""
    return not is_nonempty(p)[0] or recession_ray(p, objective) is None


def vertices(p: Polyhedron) -> list[tuple]:
    """All vertices, by solving every dim-subset of inequalities as equalities."""
    out = set()
    for S in combinations(range(len(p.inequalities)), p.dim):
        rows = tuple(p.inequalities[i][0] for i in S)
        if rank(rows) < p.dim:
            continue
        point = solve(rows, [-p.inequalities[i][1] for i in S])
        if p.contains(point):
            out.add(point)
    return sorted(out)


def _is_pointed(p: Polyhedron) -> bool:
    return rank(tuple(nrm for nrm, _ in p.inequalities)) == p.dim if p.dim else True


def bounded_above(p: Polyhedron, objective: Sequence) -> LpVerdict:
    ok, w = is_nonempty(p)
    if not ok:
        return LpVerdict(EMPTY)
    ray = recession_ray(p, objective)
    if ray is not None:
        return LpVerdict(UNBOUNDED, witness=w, direction=ray)
    return LpVerdict(BOUNDED, witness=w, optimum=_optimum(p, objective))


def _optimum(p: Polyhedron, objective: Sequence, verts=None) -> Fraction:
    if _is_pointed(p):
        return max(dot(objective, v) for v in (vertices(p) if verts is None else verts))
    return functional_range(p, objective)[1]


def _tight(p: Polyhedron, point) -> frozenset:
    return frozenset(
        i + 1
        for i, (nrm, off) in enumerate(p.inequalities)
        if sum((a * x for a, x in zip(nrm, point)), off) == 0
    )


def argmax_vertex(p: Polyhedron, objective: Sequence) -> tuple[tuple, frozenset]:
    """Unique maximizer of objective over p and the 1-based indices tight there."""
    objective = tuple(q(a) for a in objective)
    if not is_nonempty(p)[0]:
        raise ValueError(f"objective is not bounded on a nonempty polyhedron ({EMPTY})")
    if recession_ray(p, objective) is not None:
        raise ValueError(f"objective is not bounded on a nonempty polyhedron ({UNBOUNDED})")
    pointed = _is_pointed(p)
    verts = vertices(p) if pointed else None
    optimum = _optimum(p, objective, verts)
    if pointed:
        best = [v for v in verts if dot(objective, v) == optimum]
        if len(best) != 1:
            raise DegenerateObjective("degenerate objective")
        point = best[0]
        active = _tight(p, point)
        if len(active) == p.dim:
            # the maximizer is unique iff -objective is a strictly positive
            # combination of the active normals
            normals = tuple(p.inequalities[i - 1][0] for i in sorted(active))
            lam = solve(transpose(normals, p.dim), [-a for a in objective]) if p.dim else ()
            if any(v <= 0 for v in lam):
                raise DegenerateObjective("degenerate objective")
            return point, active
    face = p.with_inequalities([(objective, -optimum)])
    point = []
    for j in range(p.dim):
        e = [0] * p.dim
        e[j] = 1
        lo, hi = functional_range(face, e)
        if lo is None or hi is None or lo != hi:
            raise DegenerateObjective("degenerate objective")
        point.append(lo)
    point = tuple(point)
    return point, _tight(p, point)
