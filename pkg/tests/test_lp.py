from fractions import Fraction as Fr

from hypothesis import given, settings, strategies as st

from hyperconv import lp


def P(dim, *ineqs):
    return lp.Polyhedron(dim, tuple(ineqs))


def test_is_nonempty_examples():
    ok, w = lp.is_nonempty(P(1, ((1,), -1), ((-1,), 2)))
    assert ok and 1 <= w[0] <= 2
    assert lp.is_nonempty(P(1, ((1,), -2), ((-1,), 1))) == (False, None)
    assert lp.is_nonempty(P(0)) == (True, ())


def test_interval_witness_is_the_midpoint():
    assert lp.is_nonempty(P(1, ((1,), -1), ((-1,), 2)))[1] == (Fr(3, 2),)


def test_bounded_above_examples():
    ray = P(1, ((1,), -1))
    v = lp.bounded_above(ray, (-1,))
    assert v.status == lp.BOUNDED and v.optimum == -1
    v = lp.bounded_above(ray, (1,))
    assert v.status == lp.UNBOUNDED and v.direction[0] > 0
    assert lp.bounded_above(P(1, ((1,), -2), ((-1,), 1)), (1,)).status == lp.EMPTY


def test_argmax_vertex_examples():
    seg = P(1, ((1,), -1), ((-1,), 2))
    assert lp.argmax_vertex(seg, (1,)) == ((2,), frozenset({2}))
    assert lp.argmax_vertex(seg, (-1,)) == ((1,), frozenset({1}))
    square = P(2, ((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1))
    point, active = lp.argmax_vertex(square, (1, 1))
    assert point == (1, 1) and len(active) == 2


coef = st.integers(-3, 3)
ineq2 = st.tuples(st.tuples(coef, coef), st.integers(-5, 5))


@settings(max_examples=80, deadline=None)
@given(st.lists(ineq2, min_size=1, max_size=6))
def test_witness_satisfies_every_inequality(rows):
    p = P(2, *rows)
    ok, w = lp.is_nonempty(p)
    if ok:
        assert p.contains(w)
    else:
        # any integer point in a generous box would contradict emptiness
        assert not any(p.contains((Fr(x, 2), Fr(y, 2))) for x in range(-24, 25) for y in range(-24, 25))


@settings(max_examples=60, deadline=None)
@given(st.lists(ineq2, min_size=1, max_size=5), ineq2, st.tuples(coef, coef))
def test_adding_inequality_keeps_bounded(rows, extra, objective):
    if objective == (0, 0):
        return
    before = lp.bounded_above(P(2, *rows), objective)
    after = lp.bounded_above(P(2, *rows, extra), objective)
    if before.status == lp.BOUNDED:
        assert after.status != lp.UNBOUNDED
        if after.status == lp.BOUNDED:
            assert after.optimum <= before.optimum


@settings(max_examples=60, deadline=None)
@given(st.lists(ineq2, min_size=2, max_size=6), st.tuples(coef, coef))
def test_unbounded_direction_is_certified(rows, objective):
    p = P(2, *rows)
    v = lp.bounded_above(p, objective)
    if v.status == lp.UNBOUNDED:
        r = v.direction
        assert sum(a * b for a, b in zip(objective, r)) > 0
        assert all(sum(a * b for a, b in zip(nrm, r)) >= 0 for nrm, _ in p.inequalities)
    if v.status == lp.BOUNDED:
        assert p.contains(v.witness)
        assert all(sum(a * b for a, b in zip(objective, x)) <= v.optimum for x in lp.vertices(p))
