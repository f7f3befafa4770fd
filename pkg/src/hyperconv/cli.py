"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import arrangement as arr
from . import convalg, dualities, osz
from .serialize import InputError, dump_arrangement, load_arrangement, quiver_to_dot, rank_table_json


class CheckFailed(Exception):
    pass


def max_n() -> int:
    raw = os.environ.get("HYPERCONV_MAX_N", "12")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HYPERCONV_MAX_N must be an integer, got {raw!r}") from None


def _cap(n: int) -> None:
    if n > max_n():
        raise InputError(f"n = {n} exceeds HYPERCONV_MAX_N = {max_n()}")


def _csv(text: str) -> list:
    try:
        return [arr.q(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read {text!r}: {exc}") from None


# ---------------------------------------------------------------- argument groups


def _add_arrangement_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("arrangement")
    g.add_argument("--input", help="arrangement JSON file ('-' for stdin)")
    g.add_argument("--vandermonde", help="comma-separated increasing points z_1,...,z_n")
    g.add_argument("--polarize", help="left:Z0 or right:Z_LAST for a Vandermonde arrangement")
    g.add_argument("--n", type=int, help="number of hyperplanes of the reference arrangement")
    g.add_argument("--k", type=int, help="dimension")
    g.add_argument("--side", choices=("left", "right"), help="reference polarization")


def _arrangement(args, polarized: bool = True):
    if args.input:
        text = sys.stdin.read() if args.input == "-" else _read(args.input)
        V = load_arrangement(text)
    elif args.vandermonde:
        if args.k is None:
            raise InputError("--vandermonde needs --k")
        z = _csv(args.vandermonde)
        try:
            if args.polarize:
                side, _, point = args.polarize.partition(":")
                if side not in ("left", "right") or not point:
                    raise InputError("--polarize must look like left:0 or right:5")
                p = _csv(point)[0]
                V = arr.vandermonde_left(p, z, args.k) if side == "left" else arr.vandermonde_right(z, p, args.k)
            else:
                V = arr.vandermonde(z, args.k)
        except arr.ArrangementError as exc:
            raise InputError(str(exc)) from None
    elif args.n is not None and args.k is not None:
        _cap(args.n)
        try:
            V = arr.reference(args.n, args.k, args.side or "left")
        except arr.ArrangementError as exc:
            raise InputError(str(exc)) from None
    else:
        raise InputError("give --input, --vandermonde/--k or --n/--k")
    _cap(V.n)
    if polarized and not isinstance(V, arr.PolarizedArrangement):
        raise InputError("this command needs a polarized arrangement (xi or --polarize)")
    return V


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _side_of(V) -> Optional[str]:
    if not isinstance(V, arr.PolarizedArrangement) or V.k == 0 or V.k >= V.n:
        return None
    if arr.is_left_cyclic(V):
        return "left"
    if arr.is_right_cyclic(V):
        return "right"
    return None


def _emit(args, payload: dict, text_lines: list) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.json else "\n".join(text_lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _verdict(args, name: str, checks: dict, extra: Optional[dict] = None) -> None:
    """Print PASS/FAIL with witnesses; raise CheckFailed on failure."""
    ok = all(not v for v in checks.values())
    payload = {
        "check": name,
        "pass": ok,
        "results": {k: {"pass": not v, "witness": [repr(x) for x in list(v)[:5]]} for k, v in checks.items()},
    }
    if extra:
        payload.update(extra)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}"]
    for key, v in checks.items():
        lines.append(f"  {'ok  ' if not v else 'FAIL'} {key}" + ("" if not v else f": {list(v)[:3]!r}"))
    _emit(args, payload, lines)
    if not ok:
        raise CheckFailed(name)


# ---------------------------------------------------------------- verbs


def cmd_regions(args) -> None:
    V = _arrangement(args, polarized=False)
    if not isinstance(V, arr.PolarizedArrangement):
        feasible = [a for a in arr.all_sequences(V.n) if V.is_feasible(a)]
        compact = [a for a in feasible if V.is_compact(a)]
        rows = [{"alpha": a, "F": True, "K": a in compact} for a in feasible]
        payload = {"n": V.n, "k": V.k, "regions": rows, "counts": {"F": len(feasible), "K": len(compact)}}
        lines = [f"{r['alpha']}  F  {'K' if r['K'] else '-'}" for r in rows]
        lines.append(f"|F|={len(feasible)} |K|={len(compact)}")
        _emit(args, payload, lines)
        return
    sets = arr.enumerate_sets(V, cap=max_n())
    side = _side_of(V)
    rows, lines = [], []
    for a in arr.all_sequences(V.n):
        flags = {name: a in getattr(sets, name) for name in "FBPK"}
        dots = list(arr.kappa(a, V.k, side)) if side and flags["P"] else None
        rows.append({"alpha": a, **flags, "dots": dots})
        marks = " ".join(name if flags[name] else "-" for name in "FBPK")
        lines.append(f"{a}  {marks}" + (f"  dots {{{','.join(map(str, dots))}}}" if dots is not None else ""))
    counts = {name: len(getattr(sets, name)) for name in "FBPK"}
    lines.append(" ".join(f"|{k}|={v}" for k, v in counts.items()) + (f"  ({side}-cyclic)" if side else ""))
    _emit(args, {"n": V.n, "k": V.k, "side": side, "regions": rows, "counts": counts}, lines)


def _write_arrangement(args, V) -> None:
    text = dump_arrangement(V)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_dualize(args) -> None:
    _write_arrangement(args, dualities.gale_dual(_arrangement(args)))


def _index(args, V) -> int:
    if not 1 <= args.i <= V.n:
        raise InputError(f"--i must lie in 1..{V.n}")
    return args.i


def cmd_delete(args) -> None:
    V = _arrangement(args, polarized=False)
    try:
        _write_arrangement(args, dualities.delete(V, _index(args, V)))
    except arr.ArrangementError as exc:
        raise InputError(str(exc)) from None


def cmd_restrict(args) -> None:
    V = _arrangement(args, polarized=False)
    try:
        _write_arrangement(args, dualities.restrict(V, _index(args, V)))
    except arr.ArrangementError as exc:
        raise InputError(str(exc)) from None


def cmd_signed_restrict(args) -> None:
    V = _arrangement(args, polarized=False)
    try:
        _write_arrangement(args, dualities.signed_restrict(V, _index(args, V)))
    except arr.ArrangementError as exc:
        raise InputError(str(exc)) from None


def cmd_algebra_ranks(args) -> None:
    V = _arrangement(args)
    if args.algebra == "atilde":
        handle = convalg.atilde(V)
        qp, canon = handle.presentation, handle.canonical
    else:
        qp, canon = convalg.btilde_presentation(V), convalg._btilde(V)
    table, bad = [], []
    for a in qp.vertices:
        for d in convalg.degrees_up_to(V.n, args.window):
            b = convalg._parity_target(a, d)
            piece = qp.piece(a, b, d)
            expect = canon.graded_rank(a, b, d) if a in canon.P and b in canon.P else 0
            if piece.rank:
                table.append((a, b, d, piece.rank))
            if piece.rank != expect or piece.torsion:
                bad.append((a, b, d, piece.rank, expect, piece.torsion))
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write(rank_table_json(table))
    _verdict(
        args,
        f"{args.algebra} presentation ranks, window {args.window}",
        {"presented ranks equal canonical ranks without torsion": bad},
        {"nonzero_cells": len(table)},
    )


def _osz_spec(args, variant: Optional[str] = None) -> osz.OszSpec:
    if args.n is None or args.k is None:
        raise InputError("--n and --k are required")
    _cap(args.n)
    variant = variant or {"left": osz.LEFT, "right": osz.RIGHT, "full": osz.FULL, "prime": osz.PRIME}[args.variant]
    try:
        return osz.OszSpec(args.n, args.k, variant)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _side_spec(args) -> osz.OszSpec:
    spec = _osz_spec(args, osz.LEFT if args.side == "left" else osz.RIGHT)
    if not 1 <= spec.k <= spec.n - 1:
        raise InputError("cyclic arrangements need 1 <= k <= n-1")
    return spec


def cmd_center(args) -> None:
    spec = _side_spec(args)
    ok, table = osz.center_check(spec, args.bound)
    mismatches = [(D, a, b) for D, (a, b) in sorted(table.items()) if a != b]
    checks = {"center ranks equal truncated polynomial ranks": mismatches}
    if not ok and not mismatches:
        checks["center basis and sum of U_i are central"] = ["commutation failure"]
    _verdict(args, f"center of {spec.variant} ({spec.n},{spec.k}) up to degree {args.bound}", checks,
             {"ranks": {str(D): a for D, (a, b) in sorted(table.items())}})


def cmd_verify_iso(args) -> None:
    spec = _side_spec(args)
    report = osz.verify_isomorphism(spec, args.window)
    _verdict(args, f"isomorphism {spec.variant} ({spec.n},{spec.k}) window {args.window}", report.checks)


def cmd_verify_altgale(args) -> None:
    V = _arrangement(args)
    G = dualities.gale_dual(V)
    S, T = arr.enumerate_sets(V), arr.enumerate_sets(G)
    checks = {
        "Gale dual exchanges feasible and bounded": [] if (S.F == T.B and S.B == T.F) else [(sorted(S.F ^ T.B), sorted(S.B ^ T.F))],
    }
    right = arr.is_right_cyclic(V)
    if right:
        checks["right cyclic implies the alt Gale dual is left cyclic"] = (
            [] if arr.is_left_cyclic(dualities.alt_gale(V)) else ["alt Gale dual is not left cyclic"]
        )
    _verdict(args, "alt Gale duality", checks, {"right_cyclic": right})


def cmd_verify_delrest(args) -> None:
    V = _arrangement(args)
    indices = [args.i] if args.i else list(range(1, V.n + 1))
    checks = {"homomorphisms well-defined": [], "composites": [], "cyclicity preserved": []}
    side = _side_of(V)
    for i in indices:
        if not 1 <= i <= V.n:
            raise InputError(f"--i must lie in 1..{V.n}")
        for s in "+-":
            try:
                convalg.deletion_restriction_homs(V, i, s).check(args.window)
            except AssertionError as exc:
                checks["homomorphisms well-defined"].append((i, s, str(exc)))
        report = convalg.composition_check(V, i)
        checks["composites"].extend((i, f) for f in report.failures)
        if side:
            test = arr.is_left_cyclic if side == "left" else arr.is_right_cyclic
            for name, W in (("delete", dualities.delete(V, i)), ("signed restrict", dualities.signed_restrict(V, i))):
                if 1 <= W.k < W.n and not test(W):
                    checks["cyclicity preserved"].append((i, name))
    _verdict(args, "deletion and restriction", checks, {"side": side})


def cmd_verify_fk(args) -> None:
    if args.n is None or args.k is None:
        raise InputError("--n and --k are required")
    _cap(args.n)
    n, k = args.n, args.k
    if not 0 <= k < n:
        raise InputError("need 0 <= k < n")
    checks = {"h well-defined": osz.fk_homomorphism(n, k).relation_failures()}
    if k + 2 <= n:
        ok, info = osz.f_squared_zero(n, k, args.window)
        checks["F_k F_(k+1) = 0"] = [] if ok else [info["nonzero"]]
    report = osz.factorization_check(n, k, args.window)
    checks["F_k factors through deletion and restriction"] = report.failures
    _verdict(args, f"gl(1|1) bimodules ({n},{k}) window {args.window}", checks)


def cmd_export_quiver(args) -> None:
    if args.input or args.vandermonde:
        V = _arrangement(args)
        qp = convalg.atilde(V).presentation if args.algebra == "atilde" else convalg.btilde_presentation(V)
    else:
        qp = osz.osz_presentation(_osz_spec(args))
    text = quiver_to_dot(qp)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperconv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text, arrangement=True):
        p = sub.add_parser(name, help=help_text)
        if arrangement:
            _add_arrangement_args(p)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = verb("regions", cmd_regions, "table of feasible, bounded and compact sign sequences")
    p.add_argument("--out")
    for name, func in (
        ("dualize", cmd_dualize),
        ("delete", cmd_delete),
        ("restrict", cmd_restrict),
        ("signed-restrict", cmd_signed_restrict),
    ):
        p = verb(name, func, f"{name.replace('-', ' ')} and print the arrangement JSON")
        p.add_argument("--out")
        if name != "dualize":
            p.add_argument("--i", type=int, required=True, help="1-based hyperplane index")
    p = verb("algebra-ranks", cmd_algebra_ranks, "compare presented and canonical graded ranks")
    p.add_argument("--algebra", choices=("btilde", "atilde"), default="btilde")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--table", help="write the nonzero ranks as JSON")
    p.add_argument("--out")
    p = verb("center", cmd_center, "center ranks against the truncated polynomial ring")
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--out")
    p = verb("verify-iso", cmd_verify_iso, "check the isomorphism with the OSz algebra")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--out")
    p = verb("verify-altgale", cmd_verify_altgale, "check Gale duality exchanges and the alt Gale criterion")
    p.add_argument("--out")
    p = verb("verify-delrest", cmd_verify_delrest, "check the deletion and restriction homomorphisms")
    p.add_argument("--i", type=int)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--out")
    p = verb("verify-fk", cmd_verify_fk, "check h, F^2 = 0 and the factorization of F_k", arrangement=False)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--out")
    p = verb("export-quiver", cmd_export_quiver, "write a quiver as DOT")
    p.add_argument("--variant", choices=("left", "right", "full", "prime"), default="left")
    p.add_argument("--algebra", choices=("btilde", "atilde"), default="btilde")
    p.add_argument("--out")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if getattr(args, "side", None) is None and args.verb in ("center", "verify-iso"):
        args.side = "left"
    try:
        args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except CheckFailed:
        return 1
    return 0


def main() -> None:
    sys.exit(run())
