from fractions import Fraction as Fr

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from hyperconv import qlinalg as ql


def M(rows):
    return ql.qmat(rows)


def test_rref_examples():
    assert ql.rref(M([[1, 0], [0, 1]])) == (M([[1, 0], [0, 1]]), [1, 2])
    assert ql.rref(M([[1, 1], [1, 2], [1, 3]])) == (M([[1, 0], [0, 1], [0, 0]]), [1, 2])
    assert ql.rref(M([[0, 0], [0, 0]])) == (M([[0, 0], [0, 0]]), [])


def test_orthogonal_complement_examples():
    comp = ql.orthogonal_complement(M([[1], [1], [1], [1]]))
    assert ql.shape(comp) == (4, 3) and ql.rank(comp) == 3
    assert all(sum(comp[i][j] for i in range(4)) == 0 for j in range(3))
    e2 = ql.orthogonal_complement(M([[1], [0]]))
    assert e2[0][0] == 0 and e2[1][0] != 0
    kern = ql.orthogonal_complement(M([[1, 1], [1, 2], [1, 3]]))
    col = [row[0] for row in kern]
    assert [c / col[0] for c in col] == [1, -2, 1]


def test_plucker_examples():
    assert set(ql.plucker(M([[1], [1], [1], [1]])).coords.values()) == {1}
    assert ql.plucker(M([[1, 1], [1, 2], [1, 3]])).coords == {(1, 2): 1, (1, 3): 2, (2, 3): 1}
    assert ql.plucker(M([[1, 0], [0, 1]])).coords == {(1, 2): 1}


def test_sign_class_examples():
    assert ql.sign_class(ql.plucker(M([[1], [1], [1], [1]])))[0] == ql.POSITIVE
    assert ql.sign_class(ql.plucker(M([[1, 0], [0, 1], [-1, 0]])))[0] == ql.NOT_POSITIVE
    assert ql.sign_class(ql.plucker(M([[1, 1], [1, 2], [1, 3]])))[0] == ql.POSITIVE


def test_solve_examples():
    assert ql.solve(M([[1, 0], [0, 1]]), [Fr(3, 2), -1]) == (Fr(3, 2), -1)
    assert ql.solve(M([[1, 1], [1, 2]]), [1, 2]) == (0, 1)
    assert ql.solve(M([[1], [1]]), [0, 1]) is None


small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=3):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.integers(c, max_rows).flatmap(
            lambda r: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_and_det_match_sympy(rows):
    m = M(rows)
    assert ql.rank(m) == sympy.Matrix(rows).rank()
    sq = [r[: len(rows[0])] for r in rows[: len(rows[0])]]
    if len(sq) == len(sq[0]):
        assert ql.det(M(sq)) == sympy.Matrix(sq).det()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.permutations(range(3)))
def test_plucker_column_permutation_multiplies_by_sign(rows, perm):
    k = len(rows[0])
    perm = [p for p in perm if p < k]
    permuted = [[r[p] for p in perm] for r in rows]
    sign = sympy.combinatorics.Permutation(perm).signature()
    a, b = ql.plucker(M(rows)).coords, ql.plucker(M(permuted)).coords
    assert all(b[key] == sign * a[key] for key in a)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_complement_is_orthogonal_with_complementary_dimension(rows):
    m = M(rows)
    assume(ql.rank(m) == len(rows[0]))
    comp = ql.orthogonal_complement(m)
    n = len(rows)
    assert ql.ncols(comp) == n - ql.rank(m)
    if n > ql.rank(m):
        assert ql.rank(comp) == n - ql.rank(m)
    for j in range(ql.ncols(comp)):
        for c in range(len(rows[0])):
            assert sum(m[i][c] * comp[i][j] for i in range(n)) == 0


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=3, max_size=3))
def test_solve_resubstitutes(rows, y):
    m = M(rows)
    b = ql.matvec(m, y[: len(rows[0])])
    x = ql.solve(m, b)
    assert x is not None and ql.matvec(m, x) == b


def test_complement_rejects_dependent_columns():
    with pytest.raises(ql.LinAlgError):
        ql.orthogonal_complement(M([[0]]))


def test_qstr_and_parse_round_trip():
    for text in ["3/2", "-1", "0", "7"]:
        assert ql.qstr(ql.q(text)) == text
    with pytest.raises((ValueError, ZeroDivisionError)):
        ql.q("1/0")


def test_integer_input_stays_exact():
    comp = ql.orthogonal_complement(((1,), (1,)))
    assert all(isinstance(x, Fr) for row in comp for x in row)
    assert ql.rref(((2, 1),))[0] == ((1, Fr(1, 2)),)
