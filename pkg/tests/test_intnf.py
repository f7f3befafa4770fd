import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from hyperconv.intnf import RationalEchelon, smith_invariants


def dense_to_sparse(rows):
    return [{j: v for j, v in enumerate(r) if v} for r in rows]


def sympy_invariants(rows):
    m = sympy.Matrix(rows)
    if m.is_zero_matrix:
        return []
    snf = smith_normal_form(m, domain=sympy.ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0)


def test_examples():
    assert smith_invariants([{0: 2, 1: 4}, {0: 6, 1: 8}]) == [2, 4]
    assert smith_invariants([{0: 1}, {0: 1}]) == [1]
    assert smith_invariants([]) == []
    assert smith_invariants([{3: 5}]) == [5]


matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=1, max_size=6)
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_matches_sympy_smith_form(rows):
    assert smith_invariants(dense_to_sparse(rows)) == sympy_invariants(rows)


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_echelon_membership_matches_rank(rows, coeffs):
    ech = RationalEchelon()
    for r in dense_to_sparse(rows):
        ech.add(r)
    assert ech.rank == sympy.Matrix(rows).rank()
    combo = {}
    for c, r in zip(coeffs, rows):
        for j, v in enumerate(r):
            combo[j] = combo.get(j, 0) + c * v
    assert ech.contains(combo)
