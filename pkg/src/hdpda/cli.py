"""Command line entry point.

Exit codes: 0 success (and positive decisions), 1 negative decision,
2 malformed input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import jsonio
from .core import AutomatonError
from .families import FAMILIES, as_str
from .vpa import (
    vpa_complement,
    vpa_determinize,
    vpa_emptiness,
    vpa_equivalence,
    vpa_inclusion,
    vpa_membership,
    vpa_product,
    vpa_universality,
    vpa_validate,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


class CliError(Exception):
    pass


def _load(path, want=None):
    try:
        obj = jsonio.load(path)
    except FileNotFoundError:
        raise CliError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise CliError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    except jsonio.SchemaError as e:
        raise CliError(f"{path}: {e}")
    if want is not None and not isinstance(obj, want):
        raise CliError(f"{path}: expected a {want.__name__} object")
    return obj


def _parse_partition(text: str):
    """Parse --partition c=0,1,$ r=# i=x into (calls, returns, internals)."""
    calls, returns, internals = [], [], []
    for chunk in text.split():
        if "=" not in chunk:
            raise CliError(f"--partition: malformed chunk {chunk!r}")
        key, letters = chunk.split("=", 1)
        target = {"c": calls, "r": returns, "i": internals}.get(key)
        if target is None:
            raise CliError(f"--partition: unknown class {key!r}")
        target.extend(x for x in letters.split(",") if x)
    return tuple(calls), tuple(returns), tuple(internals)


def _emit(obj, out):
    text = json.dumps(jsonio.to_json(obj), indent=2)
    if out:
        with open(out, "w") as fp:
            fp.write(text + "\n")
    else:
        print(text)


def _word(s: str):
    return tuple(s)


def _maybe_partition(pda, args):
    if getattr(args, "partition", None):
        calls, returns, internals = _parse_partition(args.partition)
        if not internals:
            internals = tuple(a for a in pda.alphabet.letters
                              if a not in calls and a not in returns)
        return vpa_validate(pda, partition=(calls, returns, internals))
    return pda


def cmd_validate(args) -> int:
    from .core import validate
    from .vpa import vpa_violations

    pda = _maybe_partition(_load(args.file), args)
    problems = (vpa_violations(pda) if pda.alphabet.partition is not None
                else validate(pda))
    if problems:
        for p in problems:
            print(p)
        return EXIT_NEGATIVE
    print("valid")
    return EXIT_OK


def cmd_vpa(args) -> int:
    op = args.op
    a = vpa_validate(_maybe_partition(_load(args.files[0]), args))
    if op == "det":
        _emit(vpa_determinize(a), args.out)
        return EXIT_OK
    if op == "complement":
        _emit(vpa_complement(a), args.out)
        return EXIT_OK
    if op == "member":
        ok = vpa_membership(a, _word(args.word))
        print("member" if ok else "not member")
        return EXIT_OK if ok else EXIT_NEGATIVE
    if op == "empty":
        empty, witness = vpa_emptiness(a)
        if empty:
            print("empty")
            return EXIT_OK
        print("nonempty, witness:", as_str(witness) or "(empty word)")
        return EXIT_NEGATIVE
    if op == "universal":
        uni, cex = vpa_universality(a)
        if uni:
            print("universal")
            return EXIT_OK
        print("not universal, counterexample:", as_str(cex) or "(empty word)")
        return EXIT_NEGATIVE
    b = vpa_validate(_load(args.files[1]))
    if op == "product":
        _emit(vpa_product(a, b, args.mode), args.out)
        return EXIT_OK
    if op == "include":
        ok, cex = vpa_inclusion(a, b)
        if ok:
            print("included")
            return EXIT_OK
        print("not included, counterexample:", as_str(cex) or "(empty word)")
        return EXIT_NEGATIVE
    ok, cex = vpa_equivalence(a, b)
    if ok:
        print("equivalent")
        return EXIT_OK
    print("not equivalent, counterexample:", as_str(cex) or "(empty word)")
    return EXIT_NEGATIVE


def cmd_hd(args) -> int:
    from .hdcheck import extract_resolver, letter_game_bounded, vpa_is_hd

    pda = _load(args.file)
    if args.op == "check":
        hd = vpa_is_hd(pda)
        print("HD: yes" if hd else "HD: no")
        if hd and args.resolver_out:
            _emit(extract_resolver(pda), args.resolver_out)
        return EXIT_OK if hd else EXIT_NEGATIVE
    if args.op == "resolve":
        _emit(extract_resolver(pda), args.out)
        return EXIT_OK
    verdict = letter_game_bounded(pda, args.horizon, args.eps_budget)
    print(f"letter game (horizon {args.horizon}): {verdict}")
    return EXIT_OK if verdict == "resolver" else EXIT_NEGATIVE


def cmd_vpg(args) -> int:
    from .vpg import solve_vpg

    g = _load(args.file)
    sol = solve_vpg(g)
    eve_region = sol.memo[sol.bottom_key]
    print(f"winner: {sol.winner}")
    print(f"eve region at empty stack: {len(eve_region)} positions")
    print(f"level tags explored: {len(sol.memo)}")
    if args.strategy:
        strat = sol.strategies.get(sol.bottom_key, {})
        for pos, move in sorted(strat.items(), key=repr):
            print(f"  {pos} -> {move.dst} [{move.kind}]")
    return EXIT_OK if sol.winner == "eve" else EXIT_NEGATIVE


def cmd_game(args) -> int:
    from .synthesis import (
        GsSpec,
        build_product_game,
        compositionality_check,
        ge_synthesis,
        solve_gale_stewart,
        universality_via_game,
    )
    from .vpg import solve_vpg

    if args.op == "gs":
        cond = vpa_validate(_load(args.files[0]))
        sigma1 = tuple(sorted({a for (a, _) in cond.alphabet.letters}, key=repr))
        sigma2 = tuple(sorted({b for (_, b) in cond.alphabet.letters}, key=repr))
        winner, _ = solve_gale_stewart(GsSpec(sigma1, sigma2, cond))
        print(f"winner: player {winner}")
        return EXIT_OK if winner == 2 else EXIT_NEGATIVE
    if args.op == "universal":
        ok = universality_via_game(_load(args.files[0]))
        print("universal" if ok else "not universal")
        return EXIT_OK if ok else EXIT_NEGATIVE
    if args.op == "ge":
        realizable, _ = ge_synthesis(_load(args.files[0]))
        print("realizable" if realizable else "not realizable")
        return EXIT_OK if realizable else EXIT_NEGATIVE
    arena = _load(args.files[0])
    automaton = vpa_validate(_load(args.files[1]))
    if args.check:
        rep = compositionality_check(arena, automaton)
        print(f"with automaton: {rep.winner_with_automaton}")
        print(f"with determinization: {rep.winner_with_determinization}")
        print("compositional here" if rep.compositional_here
              else "DISCREPANCY: non-compositionality witness")
        return EXIT_OK if rep.compositional_here else EXIT_NEGATIVE
    sol = solve_vpg(build_product_game(arena, automaton))
    print(f"winner: {sol.winner}")
    return EXIT_OK if sol.winner == "eve" else EXIT_NEGATIVE


def cmd_family(args) -> int:
    entry = FAMILIES.get(args.name)
    if entry is None:
        raise CliError(f"unknown family {args.name!r}; "
                       f"known: {', '.join(sorted(FAMILIES))}")
    params = {}
    if entry.parameters:
        pname = entry.parameters[0]
        if args.n is None:
            raise CliError(f"family {args.name!r} needs -n")
        params[pname] = args.n
    if args.name == "lnprime" and args.partition_choice:
        params["partition_choice"] = args.partition_choice
    if args.op == "gen":
        _emit(entry.generate(**params), args.out)
        return EXIT_OK
    oracle = entry.oracle(**params)
    ok = oracle(args.word)
    print("member" if ok else "not member")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_bench(args) -> int:
    from .bench import bench_succinctness

    lo, _, hi = args.range.partition(":")
    try:
        parameters = range(int(lo), int(hi) + 1, args.step)
    except ValueError:
        raise CliError(f"--range: expected A:B, got {args.range!r}")
    report = bench_succinctness(args.family, parameters)
    print(report.as_table())
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        base = os.path.join(args.out_dir, f"bench_{args.family}")
        report.write_csv(base + ".csv")
        report.write_figure(base + ".png")
        print(f"wrote {base}.csv and {base}.png")
    return EXIT_OK if "VIOLATED" not in report.verdict else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hdpda",
        description="History-deterministic pushdown automata toolkit")
    ap.add_argument("--format", choices=["json"], default="json",
                    help="interchange format (json only)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural and shape validation")
    p.add_argument("file")
    p.add_argument("--partition", help="attach 'c=a,b r=c i=d' before checking")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("vpa", help="visibly pushdown operations")
    p.add_argument("op", choices=["det", "complement", "product", "member",
                                  "empty", "universal", "include", "equiv"])
    p.add_argument("files", nargs="+")
    p.add_argument("--mode", choices=["union", "intersection"],
                   default="intersection")
    p.add_argument("--word", default="")
    p.add_argument("--partition", help="attach 'c=a,b r=c i=d' to the input")
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_vpa)

    p = sub.add_parser("hd", help="history-determinism checks")
    p.add_argument("op", choices=["check", "oracle", "resolve"])
    p.add_argument("file")
    p.add_argument("--horizon", type=int, default=6)
    p.add_argument("--eps-budget", type=int, default=None, dest="eps_budget")
    p.add_argument("--resolver-out")
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_hd)

    p = sub.add_parser("vpg", help="solve a visibly pushdown game")
    p.add_argument("op", choices=["solve"])
    p.add_argument("file")
    p.add_argument("--strategy", action="store_true")
    p.set_defaults(fn=cmd_vpg)

    p = sub.add_parser("game", help="letter-alternation and product games")
    p.add_argument("op", choices=["gs", "universal", "ge", "compose"])
    p.add_argument("files", nargs="+")
    p.add_argument("--check", action="store_true",
                   help="compose: compare against the determinization")
    p.set_defaults(fn=cmd_game)

    p = sub.add_parser("family", help="named example families")
    p.add_argument("op", choices=["gen", "oracle"])
    p.add_argument("name")
    p.add_argument("word", nargs="?", default="")
    p.add_argument("-n", type=int, default=None,
                   help="family parameter (n or k)")
    p.add_argument("--partition", dest="partition_choice",
                   choices=["internal", "calls", "mixed"], default=None)
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("bench", help="size-trend benchmarks")
    p.add_argument("kind", choices=["succinctness"])
    p.add_argument("--family", required=True)
    p.add_argument("--range", required=True, help="A:B inclusive")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--out-dir", help="write CSV and PNG reports here")
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except jsonio.SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except AutomatonError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
