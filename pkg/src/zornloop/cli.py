"""Command-line interface: every operation with JSON in and JSON out.

Matrices are given as canonical JSON, either inline or as a path to a file
holding it.  Exit status is 0 on success, 1 when a precondition fails (the
error and its witness are printed as JSON) and 2 on malformed input.
Scalars that can outgrow 2**53 are printed as decimal strings.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import expr
from .errors import ZornError
from .factor import decompose_congruence, factor_unital, split_gamma1_delta
from .floop import (closure, derived_subloop, gamma_ns_image, index_or_cosets,
                    lagrange_check, normality_check, power_closure)
from .quotient import enumerate_sll, index_gamma
from .wohl import wohlfahrt_split
from .zorn import EmbeddedSL2, ZornMatrix, reduce_mod, zdet, zinv, zmul


class InputError(Exception):
    """Malformed command-line input (exit status 2)."""


def _load_json(text: str):
    """Parse ``text`` as JSON, or read it as a UTF-8 file if it is not JSON."""
    src = text
    if not text.lstrip().startswith(("{", "[")):
        try:
            src = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {text!r}: {exc}") from exc
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _matrix(obj) -> ZornMatrix:
    if not isinstance(obj, dict):
        raise InputError("a matrix must be a JSON object")
    try:
        return ZornMatrix.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def read_matrix(text: str) -> ZornMatrix:
    return _matrix(_load_json(text))


def _integral(A: ZornMatrix) -> ZornMatrix:
    if A.mod:
        raise InputError("this command needs a matrix over Z (mod 0)")
    return A


def _tree_report(tree) -> dict:
    return {"tree": expr.to_json(tree), "leaves": len(expr.leaves(tree)),
            "size": expr.tree_size(tree)}


# -- subcommands ---------------------------------------------------------------

def cmd_mul(args):
    return {"product": zmul(read_matrix(args.A), read_matrix(args.B)).to_json()}


def cmd_det(args):
    return {"det": str(zdet(read_matrix(args.A)))}


def cmd_inv(args):
    return {"inverse": zinv(read_matrix(args.A)).to_json()}


def cmd_reduce(args):
    return {"reduced": reduce_mod(read_matrix(args.A), args.mod).to_json()}


def cmd_factor(args):
    return _tree_report(factor_unital(_integral(read_matrix(args.A)), args.level))


def cmd_decompose(args):
    return _tree_report(decompose_congruence(_integral(read_matrix(args.A)), args.level))


def cmd_split(args):
    tree = split_gamma1_delta(_integral(read_matrix(args.A)), args.level)
    out = _tree_report(tree)
    out["embedded_leaves"] = sum(isinstance(t, EmbeddedSL2) for t in expr.leaves(tree))
    return out


def cmd_wohlfahrt(args):
    tree, C = wohlfahrt_split(_integral(read_matrix(args.A)), args.n1, args.n2)
    return {"B_tree": expr.to_json(tree), "C": C.to_json()}


def cmd_enumerate(args):
    L = enumerate_sll(args.mod)
    if args.count_only:
        return {"order": len(L)}
    out = sys.stdout
    for i in range(len(L)):
        out.write(json.dumps(L.element(i).to_json(), separators=(",", ":")) + "\n")
    return None


def cmd_index(args):
    if args.n < 1:
        raise InputError("index needs n >= 1")
    return {"index": str(index_gamma(args.n))}


def _parse_op(op: str):
    name, _, arg = op.partition(":")
    try:
        if name in ("closure", "derived", "lagrange", "normal") and not arg:
            return name, ()
        if name == "power" and arg:
            return name, (int(arg),)
        if name == "gamma-ns" and arg:
            n, s = arg.split(",")
            return name, (int(n), int(s))
    except ValueError:
        pass
    raise InputError(f"unknown or malformed --op {op!r}")


def _read_seed(path: str | None, m: int) -> list[ZornMatrix]:
    if path is None:
        return []
    obj = _load_json(path)
    if isinstance(obj, dict) and "seed" in obj:
        obj = obj["seed"]
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list):
        raise InputError("seed must be a matrix, a list of matrices or {\"seed\": [...]}")
    mats = [_matrix(o) for o in obj]
    for A in mats:
        if A.mod and A.mod % m:
            raise InputError(f"seed matrix modulo {A.mod} cannot be read modulo {m}")
    return mats


def cmd_loop_analyze(args):
    name, params = _parse_op(args.op)
    m = args.mod
    if name == "gamma-ns":
        G = gamma_ns_image(m, *params)
        return {"order": len(G), "status": G.status, "witnesses": []}
    L = enumerate_sll(m)
    seed = _read_seed(args.seed, m)
    try:
        H = closure(L, seed)
    except KeyError as exc:
        raise InputError(f"seed is not in SLL(2, Z/{m}): {exc}") from exc
    if name == "closure":
        return {"order": len(H), "status": H.status, "witnesses": []}
    if name == "derived":
        D = derived_subloop(L, H)
        return {"order": len(D), "status": D.status, "witnesses": []}
    if name == "power":
        P = power_closure(L, H, params[0])
        return {"order": len(P), "status": P.status, "witnesses": []}
    res = lagrange_check(L, H) if name == "lagrange" else normality_check(L, H)
    out = {"order": len(H), "status": H.status, "ok": res.ok,
           "witnesses": [] if res.ok else [res.witness]}
    if name == "lagrange" and res.ok:
        out["cosets"] = index_or_cosets(L, H)
    return out


def cmd_selftest(args):
    from .selftest import run_all
    results = run_all(slow=args.slow, emit=lambda line: print(line, file=sys.stderr, flush=True))
    report = {"passed": all(r.ok for r in results),
              "checks": [{"number": r.number, "title": r.title, "ok": r.ok,
                          "seconds": round(r.seconds, 3), "detail": r.detail}
                         for r in results]}
    return report


# -- plumbing ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zornloop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, matrices=()):
        sp = sub.add_parser(name, help=help_)
        for mname in matrices:
            sp.add_argument(mname, help="matrix JSON or a file containing it")
        sp.set_defaults(fn=fn)
        return sp

    add("mul", cmd_mul, "product A*B", ("A", "B"))
    add("det", cmd_det, "determinant ab - x.y", ("A",))
    add("inv", cmd_inv, "inverse of a unit-determinant matrix", ("A",))
    add("reduce", cmd_reduce, "reduce modulo m", ("A",)).add_argument("--mod", type=int, required=True)
    add("factor", cmd_factor, "elementary factorization of a unital matrix",
        ("A",)).add_argument("--level", type=int, required=True)
    add("decompose", cmd_decompose, "decompose an element of Gamma(n)",
        ("A",)).add_argument("--level", type=int, required=True)
    add("split", cmd_split, "split with at most one axis-1 SL(2) leaf",
        ("A",)).add_argument("--level", type=int, required=True)
    sp = add("wohlfahrt", cmd_wohlfahrt, "A = B C with B of level n1 and C of level n2", ("A",))
    sp.add_argument("--n1", type=int, required=True)
    sp.add_argument("--n2", type=int, required=True)
    sp = add("enumerate", cmd_enumerate, "list SLL(2, Z/m) as newline-delimited JSON")
    sp.add_argument("--mod", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")
    add("index", cmd_index, "index of Gamma(n), i.e. the order of SLL(2, Z/n)").add_argument(
        "n", type=int)
    sp = add("loop-analyze", cmd_loop_analyze, "analyze the subloop generated by a seed")
    sp.add_argument("--mod", type=int, required=True)
    sp.add_argument("--seed", help="JSON list of matrices (or a file holding it)")
    sp.add_argument("--op", required=True,
                    help="closure | derived | power:s | lagrange | normal | gamma-ns:n,s")
    add("selftest", cmd_selftest, "run the acceptance suite").add_argument(
        "--slow", action="store_true", help="also run the heavier exhaustive jobs")
    return p


def _apply_thread_cap() -> None:
    cap = os.environ.get("ZORN_THREADS")
    if not cap:
        return
    try:
        n = int(cap)
    except ValueError as exc:
        raise InputError(f"ZORN_THREADS must be an integer, got {cap!r}") from exc
    if n < 1:
        raise InputError("ZORN_THREADS must be >= 1")
    import numba
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _emit(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def run(argv: list[str] | None = None) -> int:
    try:
        _apply_thread_cap()
        args = build_parser().parse_args(argv)
        out = args.fn(args)
    except InputError as exc:
        _emit({"error": "MalformedInput", "message": str(exc), "witness": None})
        return 2
    except ZornError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc), "witness": exc.witness})
        return 1
    except ValueError as exc:
        _emit({"error": "MalformedInput", "message": str(exc), "witness": None})
        return 2
    if out is not None:
        _emit(out)
    if args.command == "selftest" and not out["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
