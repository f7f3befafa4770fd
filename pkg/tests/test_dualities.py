import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperconv import arrangement as arr, dualities as du, qlinalg as ql

LEFT41 = arr.vandermonde_left(0, (1, 2, 3, 4), 1)


def test_gale_dual_examples():
    G = du.gale_dual(LEFT41)
    S, T = arr.enumerate_sets(LEFT41), arr.enumerate_sets(G)
    assert S.F == T.B and S.B == T.F and S.P == T.P
    assert arr.equivalent(du.gale_dual(G), LEFT41)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_gale_dual_swaps_feasible_and_bounded(n):
    for k in range(1, n):
        V = arr.reference_left(n, k)
        S, T = arr.enumerate_sets(V), arr.enumerate_sets(du.gale_dual(V))
        assert (S.F, S.B) == (T.B, T.F)


def test_alt_examples():
    V = arr.vandermonde((1, 2, 3, 4), 1)
    assert du.alt_map(V).A == ((1,), (-1,), (1,), (-1,))
    assert du.alt_map(du.alt_map(V)).A == V.A and du.alt_map(du.alt_map(V)).w == V.w


def test_polarization_reverse_examples():
    V = arr.reference_left(4, 2)
    R = du.polarization_reverse(V)
    assert du.polarization_reverse(R).x == V.x
    reversed_objective = tuple(-c for c in V.x)
    direct = {
        a
        for a in arr.all_sequences(4)
        if arr.lp.bounded_above(V.region_polyhedron(a), reversed_objective).status != arr.lp.UNBOUNDED
    }
    assert arr.enumerate_sets(R).B == direct


@pytest.mark.parametrize("k", [1, 2])
def test_alt_gale_of_right_cyclic_is_left_cyclic(k):
    V = arr.vandermonde_right((1, 2, 3, 4), 5, k)
    assert arr.is_right_cyclic(V) and arr.is_left_cyclic(du.alt_gale(V))


def test_deletion_examples():
    D = du.delete(arr.vandermonde((1, 2, 3, 4), 2), 2)
    assert arr.equivalent(D, arr.vandermonde((1, 3, 4), 2))
    V = arr.reference_left(4, 2)
    for i in range(1, 5):
        a = du.gale_dual(du.delete(V, i))
        b = du.restrict(du.gale_dual(V), i)
        assert arr.equivalent(a, b), i
    S = du.signed_restrict(V, 1)
    assert (S.n, S.k) == (3, 1) and arr.is_left_cyclic(S)


@pytest.mark.parametrize("side", ["left", "right"])
def test_deletion_and_signed_restriction_preserve_cyclicity(side):
    test = arr.is_left_cyclic if side == "left" else arr.is_right_cyclic
    for n in range(3, 7):
        for k in range(1, n):
            V = arr.reference(n, k, side)
            for i in range(1, n + 1):
                for W in (du.delete(V, i), du.signed_restrict(V, i)):
                    if 1 <= W.k < W.n:
                        assert test(W), (n, k, side, i)


def _random_positive_basis(rng, n, k):
    # Vandermonde columns at random increasing points are totally positive
    pts = sorted(rng.sample(range(1, 40), n))
    return tuple(tuple(p**j for j in range(k)) for p in pts)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_positive_iff_alt_complement_positive(n, seed):
    rng = random.Random(seed)
    k = rng.randint(1, n - 1)
    if rng.random() < 0.5:
        A = _random_positive_basis(rng, n, k)
    else:
        A = tuple(tuple(rng.randint(-3, 3) for _ in range(k)) for _ in range(n))
        if ql.rank(A) < k:
            return
    comp = ql.orthogonal_complement(A)
    alt_comp = tuple(tuple(-x if i % 2 else x for x in row) for i, row in enumerate(comp))
    assert ql.is_positive(A) == ql.is_positive(alt_comp)


def test_restriction_signs_flip_the_tail():
    assert du.restriction_signs("+-+", 2) == "++-"
    for a in arr.all_sequences(4):
        for i in range(1, 5):
            assert du.restriction_signs(du.restriction_signs(a, i), i) == a


def test_signed_restriction_regions_are_relabelled_restriction_regions():
    V = arr.reference_left(5, 2)
    for i in range(1, 6):
        R, S = du.restrict(V, i), du.signed_restrict(V, i)
        FR, FS = arr.enumerate_sets(R).F, arr.enumerate_sets(S).F
        assert {du.restriction_signs(a, i) for a in FR} == FS
