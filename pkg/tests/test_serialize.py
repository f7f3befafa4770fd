import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperconv import arrangement as arr, convalg as ca, osz
from hyperconv.serialize import (
    InputError,
    arrangement_from_dict,
    dump_arrangement,
    load_arrangement,
    quiver_to_dot,
    rank_table_json,
)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6), st.booleans())
def test_json_round_trip(n, seed, polarized):
    rng = random.Random(seed)
    k = rng.randint(1, n - 1)
    pts = sorted(rng.sample(range(-20, 40), n))
    z = [arr.q(f"{p}/{rng.randint(1, 3)}") for p in pts]
    z = sorted(set(z))
    if len(z) < 2:
        return
    k = min(k, len(z) - 1)
    V = arr.vandermonde_left(z[0] - 1, z, k) if polarized else arr.vandermonde(z, k)
    text = dump_arrangement(V)
    W = load_arrangement(text)
    assert (W.A, W.w) == (V.A, V.w)
    assert getattr(W, "x", None) == getattr(V, "x", None)
    assert dump_arrangement(W) == text


def test_error_positions():
    with pytest.raises(InputError, match="line 1 column"):
        load_arrangement('{"A": [[1]],')
    with pytest.raises(InputError, match=r"A\[1\]\[0\]"):
        arrangement_from_dict({"n": 2, "k": 1, "A": [[1], ["x"]], "w": [0, 1]})
    with pytest.raises(InputError):
        arrangement_from_dict({"n": 2, "k": 1, "A": [[1], [1]]})


def test_dot_export_counts_and_is_stable():
    qp = osz.osz_presentation(osz.OszSpec(2, 1, osz.LEFT))
    text = quiver_to_dot(qp)
    assert text == quiver_to_dot(qp)
    body = [line for line in text.splitlines() if "->" in line]
    loops = [line for line in body if line.split("->")[0].strip() == line.split("->")[1].split()[0]]
    assert text.count("[label=\"{") == 2
    assert len(body) - len(loops) == 2 and len(loops) == 4


def test_dot_export_of_hypercube_quiver():
    text = quiver_to_dot(ca.btilde_presentation(arr.reference_left(3, 1)))
    assert text.startswith("digraph") and text.rstrip().endswith("}")


def test_rank_table_ignores_input_order():
    rows = [("+-", "+-", (2, 0), 1), ("+-", "--", (1, 0), 1), ("--", "+-", (1, 0), 1)]
    text = rank_table_json(rows)
    assert text == rank_table_json(list(reversed(rows)))
    assert [r["src"] for r in json.loads(text)] == ["+-", "+-", "--"]
