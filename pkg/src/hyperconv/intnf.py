"""Integer normal forms for sparse relation matrices.

Rows are dicts ``{column: int}``.  Only what graded-rank computations need
is kept: the rank and the nontrivial invariant factors of the row lattice,
plus a rational echelon form for membership tests.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def smith_invariants(rows, ncols: int | None = None) -> list[int]:
    """Nonzero diagonal of a Smith normal form of the integer matrix ``rows``.

    The returned list is normalized to invariant factors d1 | d2 | ...,
    so its length is the rank and entries > 1 describe the torsion of the
    cokernel.
    """
    work = {}
    cols: dict = {}  # column -> ids of rows with a nonzero there
    for ri, r in enumerate(rows):
        r = {c: v for c, v in r.items() if v}
        if r:
            work[ri] = r
            for c in r:
                cols.setdefault(c, set()).add(ri)

    def axpy(target_id, qt, src):
        # row[target] -= qt * src, keeping the column index in sync
        r = work[target_id]
        for c, v in src.items():
            nv = r.get(c, 0) - qt * v
            if nv:
                if c not in r:
                    cols.setdefault(c, set()).add(target_id)
                r[c] = nv
            elif c in r:
                del r[c]
                cols[c].discard(target_id)

    diag = []
    while work:
        # pivot: a unit entry if there is one, else the smallest absolute value
        pr = pc = pv = None
        for ri, r in work.items():
            for c, v in r.items():
                if pv is None or abs(v) < abs(pv):
                    pr, pc, pv = ri, c, v
                    if abs(v) == 1:
                        break
            if abs(pv) == 1:
                break
        while True:
            prow = work[pr]
            pv = prow[pc]
            moved = False
            # clear the pivot column in the other rows
            for ri in sorted(cols[pc] - {pr}):
                axpy(ri, work[ri][pc] // pv, prow)
                if pc in work[ri]:
                    pr, moved = ri, True
                    break
            if moved:
                continue
            # the pivot column is now clear; reduce the pivot row by column operations
            bad = next((c for c, v in prow.items() if c != pc and v % pv), None)
            if bad is None:
                diag.append(abs(pv))
                for c in prow:
                    cols[c].discard(pr)
                del work[pr]
                for ri in [ri for ri, r in work.items() if not r]:
                    del work[ri]
                break
            # a column operation touches only this row since the column is clear elsewhere
            prow[bad] -= (prow[bad] // pv) * pv
            pc = bad
    return _invariant_factors(diag)


def _invariant_factors(diag: list[int]) -> list[int]:
    d = sorted(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


class RationalEchelon:
    """Incremental echelon basis over Q for span-membership queries."""

    def __init__(self):
        self.rows: dict = {}  # pivot column -> normalized row dict

    def _reduce(self, vec: dict) -> dict:
        v = {c: Fraction(x) for c, x in vec.items() if x}
        changed = True
        while changed:
            changed = False
            for c in sorted(v):
                if c in self.rows and v.get(c):
                    f = v[c]
                    for cc, x in self.rows[c].items():
                        nv = v.get(cc, 0) - f * x
                        if nv:
                            v[cc] = nv
                        else:
                            v.pop(cc, None)
                    changed = True
                    break
        return v

    def add(self, vec: dict) -> bool:
        v = self._reduce(vec)
        if not v:
            return False
        c = min(v)
        f = v[c]
        row = {cc: x / f for cc, x in v.items()}
        for other in self.rows.values():
            if c in other:
                g = other[c]
                for cc, x in row.items():
                    nv = other.get(cc, 0) - g * x
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self.rows[c] = row
        return True

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)
