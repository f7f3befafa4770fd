"""Acceptance gate: nine criteria, each exact and under its own time limit.

Every criterion prints one PASS/FAIL line (collected and shown in the pytest
terminal summary, or directly when this file is run as a script).
"""
import sys
import time
from itertools import product
from math import comb

import pytest

from hyperconv import arrangement as arr, convalg as ca, dualities as du, osz

import oracles

RESULTS: dict = {}


def vandermonde_fixture(n, k, side):
    z = range(1, n + 1)
    return arr.vandermonde_left(0, z, k) if side == "left" else arr.vandermonde_right(z, n + 1, k)


def fixtures(max_n, sides=("left", "right")):
    for n in range(2, max_n + 1):
        for k in range(1, n):
            for side in sides:
                yield n, k, side


# ---------------------------------------------------------------- criteria


def region_census():
    problems = []
    for n, k in [(4, 1), (4, 2), (5, 2), (6, 3)]:
        for side in ("left", "right"):
            V = vandermonde_fixture(n, k, side)
            S = arr.enumerate_sets(V)
            F, B, K = set(), set(), set()
            for a in oracles.sign_strings(n):
                ext = "+" + a if side == "left" else a + ("+" if k % 2 == 0 else "-")
                v = oracles.var_by_definition(ext)
                if v <= k:
                    F.add(a)
                if v >= k:
                    B.add(a)
                if oracles.var_by_definition(a) == k and a[0] == "+":
                    K.add(a)
            if (S.F, S.B, S.P, S.K) != (F, B, F & B, K):
                problems.append((n, k, side, "sets"))
            if (len(S.P), len(S.K)) != (comb(n, k), comb(n - 1, k)):
                problems.append((n, k, side, "counts"))
    return problems


def duality_suite():
    problems = []
    for n, k, side in fixtures(6):
        V = vandermonde_fixture(n, k, side)
        S, T = arr.enumerate_sets(V), arr.enumerate_sets(du.gale_dual(V))
        if (S.F, S.B) != (T.B, T.F):
            problems.append((n, k, side, "gale swap"))
        twice = du.alt_map(du.alt_map(V))
        if (twice.A, twice.w, twice.x) != (V.A, V.w, V.x):
            problems.append((n, k, side, "alt involution"))
        back = du.polarization_reverse(du.polarization_reverse(V))
        if (back.A, back.w, back.x) != (V.A, V.w, V.x):
            problems.append((n, k, side, "reversal involution"))
        if arr.is_right_cyclic(V) != arr.is_left_cyclic(du.alt_gale(V)):
            problems.append((n, k, side, "alt gale criterion"))
        if side == "right" and not arr.is_right_cyclic(V):
            problems.append((n, k, side, "fixture not right cyclic"))
    return problems


def algebra_self_consistency():
    problems = []
    for n, k in [(3, 1), (4, 1), (4, 2)]:
        for side in ("left", "right"):
            for row in ca.presentation_rank_mismatches(vandermonde_fixture(n, k, side), 6):
                problems.append((n, k, side, row))
    return problems


def isomorphisms():
    osz._PRESENTATIONS.clear()
    problems = []
    for n, k in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]:
        for variant in (osz.LEFT, osz.RIGHT):
            report = osz.verify_isomorphism(osz.OszSpec(n, k, variant), 4)
            for name, witnesses in report.checks.items():
                if witnesses:
                    problems.append((n, k, variant, name, witnesses[:2]))
    return problems


def center_ranks():
    osz._PRESENTATIONS.clear()
    problems = []
    for n, k in [(2, 1), (3, 1), (3, 2), (4, 2)]:
        for variant in (osz.LEFT, osz.RIGHT):
            ok, table = osz.center_check(osz.OszSpec(n, k, variant), 8)
            if not ok:
                problems.append((n, k, variant, "center check"))
            for D in range(9):
                if table[D][0] != oracles.truncated_monomial_count(n, k, D):
                    problems.append((n, k, variant, D, table[D][0]))
    return problems


def deletion_restriction():
    problems = []
    for n, k in [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]:
        for side in ("left", "right"):
            V = vandermonde_fixture(n, k, side)
            for i in range(1, n + 1):
                for s in "+-":
                    try:
                        ca.deletion_restriction_homs(V, i, s).check(4)
                    except AssertionError as exc:
                        problems.append((n, k, side, i, s, str(exc)[:80]))
                report = ca.composition_check(V, i)
                problems.extend((n, k, side, i, f) for f in report.failures)
    for n, k, side in fixtures(6):
        V = vandermonde_fixture(n, k, side)
        test = arr.is_left_cyclic if side == "left" else arr.is_right_cyclic
        for i in range(1, n + 1):
            for name, W in (("delete", du.delete(V, i)), ("signed restrict", du.signed_restrict(V, i))):
                if 1 <= W.k < W.n and not test(W):
                    problems.append((n, k, side, i, name))
    return problems


def bimodules():
    osz._PRESENTATIONS.clear()
    problems = []
    for n, k in [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (4, 3)]:
        failures = osz.fk_homomorphism(n, k).relation_failures()
        if failures:
            problems.append((n, k, "h", failures[:2]))
    for n, k in [(3, 0), (3, 1), (4, 0), (4, 1), (4, 2)]:
        ok, info = osz.f_squared_zero(n, k, 3)
        if not ok:
            problems.append((n, k, "F^2", info["nonzero"]))
    for n, k in [(3, 0), (3, 1), (4, 1)]:
        report = osz.factorization_check(n, k, 3)
        if not report.ok or not report.generators_checked:
            problems.append((n, k, "factorization", report.failures[:2]))
    return problems


def order_theory():
    problems = []
    for n, k, side in fixtures(6):
        V = vandermonde_fixture(n, k, side)
        order = {(arr.kappa(a, k, side), arr.kappa(b, k, side)) for a, b in arr.partial_order(V)}
        if order != oracles.lex_dot_order(n, k, side):
            problems.append((n, k, side, "order"))
        for alpha, data in arr.mu_bijection(V).items():
            dots = arr.kappa(alpha, k, side)
            expected = {d + 1 for d in dots} if side == "left" else set(dots)
            if data.basis != expected:
                problems.append((n, k, side, alpha, sorted(data.basis)))
    return problems


def sign_variation():
    problems = []
    for n in range(1, 8):
        for z in product("+-0", repeat=n):
            if set(z) == {"0"}:
                continue
            z = "".join(z)
            if arr.var(arr.alt_signs(z)) != n - 1 - arr.var_bar(z):
                problems.append(("alt identity", z))
            if arr.alt_signs(z) != oracles.alt_string(z) or arr.var_bar(z) != oracles.var_bar_by_resolution(z):
                problems.append(("disagrees with brute force", z))
    for n in range(2, 7):
        for k in range(1, n):
            u = arr.projection_onto_complement(arr.vandermonde(range(1, n + 1), k))
            if not arr.var(u) == arr.var_bar(u) == k:
                problems.append(("projection", n, k))
    return problems


CRITERIA = [
    (1, "region census", region_census, 5),
    (2, "duality suite", duality_suite, 10),
    (3, "algebra self-consistency", algebra_self_consistency, 60),
    (4, "isomorphisms", isomorphisms, 120),
    (5, "center", center_ranks, 60),
    (6, "deletion and restriction", deletion_restriction, 30),
    (7, "gl(1|1) bimodules", bimodules, 120),
    (8, "order theory", order_theory, 10),
    (9, "sign variation", sign_variation, 10),
]


def evaluate(number, name, func, limit):
    start = time.perf_counter()
    problems = func()
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {elapsed:.2f}s of {limit}s"
    if problems:
        line += f"; {len(problems)} problems, first {problems[0]!r}"
    RESULTS[number] = line
    return ok, problems, elapsed


@pytest.mark.parametrize("number,name,func,limit", CRITERIA, ids=[c[1].replace(" ", "-") for c in CRITERIA])
def test_criterion(number, name, func, limit):
    ok, problems, elapsed = evaluate(number, name, func, limit)
    assert not problems, problems[:5]
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        ok, _, _ = evaluate(*crit)
        print(RESULTS[crit[0]], flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
