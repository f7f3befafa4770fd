"""JSON arrangement files, DOT quiver export and rank-table dumps.

Rationals are written as decimal-free strings ``"p/q"`` or ``"p"``.
"""
from __future__ import annotations

import json
from typing import Union

from .arrangement import Arrangement, ArrangementError, PolarizedArrangement, StrongPolarizedArrangement
from .convalg import QuiverPresentation, _fmt
from .qlinalg import LinAlgError, q, qstr


class InputError(ValueError):
    """Malformed arrangement input; the message carries the position."""


def _rational(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{where}: expected an integer or a \"p/q\" string, got {json.dumps(value)}")
    try:
        return q(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _vector(value, where: str) -> tuple:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected an array")
    return tuple(_rational(v, f"{where}[{i}]") for i, v in enumerate(value))


def arrangement_from_dict(data: dict) -> Union[Arrangement, PolarizedArrangement]:
    if not isinstance(data, dict):
        raise InputError("top level: expected an object")
    for key in ("A", "w"):
        if key not in data:
            raise InputError(f"top level: missing key {key!r}")
    if not isinstance(data["A"], list):
        raise InputError("A: expected an array of rows")
    A = tuple(_vector(row, f"A[{i}]") for i, row in enumerate(data["A"]))
    w = _vector(data["w"], "w")
    n = len(A)
    k = len(A[0]) if A else int(data.get("k", 0))
    if "n" in data and data["n"] != n:
        raise InputError(f"n: declared {data['n']} but A has {n} rows")
    if "k" in data and data["k"] != k:
        raise InputError(f"k: declared {data['k']} but A has {k} columns")
    if any(len(row) != k for row in A):
        raise InputError("A: rows have different lengths")
    if len(w) != n:
        raise InputError(f"w: expected {n} entries, got {len(w)}")
    try:
        if data.get("xi") is None:
            if data.get("c") is not None:
                raise InputError("c: a strong lift needs xi")
            return Arrangement(A, w)
        x = _vector(data["xi"], "xi")
        if len(x) != k:
            raise InputError(f"xi: expected {k} entries, got {len(x)}")
        if data.get("c") is not None:
            return StrongPolarizedArrangement(A, w, x, _rational(data["c"], "c"))
        return PolarizedArrangement(A, w, x)
    except (ArrangementError, LinAlgError) as exc:
        raise InputError(f"arrangement: {exc}") from None


def load_arrangement(text: str) -> Union[Arrangement, PolarizedArrangement]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return arrangement_from_dict(data)


def arrangement_to_dict(V: Arrangement) -> dict:
    out = {
        "n": V.n,
        "k": V.k,
        "A": [[qstr(a) for a in row] for row in V.A],
        "w": [qstr(a) for a in V.w],
    }
    if isinstance(V, PolarizedArrangement):
        out["xi"] = [qstr(a) for a in V.x]
    if isinstance(V, StrongPolarizedArrangement):
        out["c"] = qstr(V.c)
    return out


def dump_arrangement(V: Arrangement) -> str:
    return json.dumps(arrangement_to_dict(V), indent=2) + "\n"


def quiver_to_dot(qp: QuiverPresentation, name: str = "quiver") -> str:
    """DOT text: one node per vertex, one edge per arrow, one loop per central generator."""
    verts = list(qp.idempotents)
    vset = set(verts)
    ids = {v: f"v{j}" for j, v in enumerate(verts)}
    lines = [f"digraph {name} {{"]
    for v in verts:
        lines.append(f'  {ids[v]} [label="{_fmt(v)}"];')
    for (s, t), (label, _) in sorted(qp.arrows.items(), key=lambda kv: (verts.index(kv[0][0]) if kv[0][0] in vset else -1, str(kv[0][1]))):
        if s in vset and t in vset:
            lines.append(f'  {ids[s]} -> {ids[t]} [label="{label}"];')
    for v in verts:
        for i in range(1, qp.n + 1):
            lines.append(f'  {ids[v]} -> {ids[v]} [label="{qp.central_name}{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def rank_table_json(rows: list) -> str:
    """rows: (src, tgt, multidegree, rank) tuples, written in a stable order."""
    items = [
        {"src": _fmt(s), "tgt": _fmt(t), "d": list(d), "rank": r}
        for s, t, d, r in sorted(rows, key=lambda r: (_fmt(r[0]), _fmt(r[1]), tuple(r[2])))
    ]
    return json.dumps(items, indent=1) + "\n"
