"""
Command-line front end.

    surfbundle rank "D1 D2 D3" --fiber closed
    surfbundle family --eps 1,-1,1,1 --n-range -5..5
    surfbundle table1 --out table1.csv
    surfbundle census --max-len 4 --out census.csv
    surfbundle census --random 100000 --seed 1 --max-len 20 --jobs 8 --out random.csv

Twist words are whitespace-separated syllables ``D<i>`` or ``D<i>^<k>``
(i in 1..5, k nonzero). The leftmost syllable is applied last, so
"D2 D1" means D2 o D1.

Exit codes: 0 success, 1 expectation mismatch, 2 usage or parse error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from contextlib import contextmanager
from typing import List, Optional, Sequence

from .census import (
    MAX_ENUMERATION_LENGTH,
    RANDOM_BUDGETS,
    census,
    check_table1,
    random_search,
    write_csv,
    write_jsonl,
)
from .mcg import TwistWord, WordError, family_word
from .presentation import FiberType, bundle_presentation
from .simplify import DEFAULT_BUDGETS, EXACT, Budgets, certify_monodromy, tietze_eliminate

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("surfbundle")


class UsageError(Exception):
    pass


def _fiber(text: str) -> FiberType:
    try:
        return FiberType.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"fiber must be closed or punctured, not {text!r}") from None


def _eps(text: str) -> tuple:
    try:
        eps = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eps vector {text!r}") from None
    if len(eps) != 4 or any(e not in (1, -1) for e in eps):
        raise argparse.ArgumentTypeError(f"eps must be four entries from {{1,-1}}, got {text!r}")
    return eps


def _n_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a..b") from None
    if not sep or a > b:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a..b with a <= b")
    return range(a, b + 1)


def _add_budget_flags(p: argparse.ArgumentParser, defaults: Budgets = DEFAULT_BUDGETS):
    g = p.add_argument_group("budgets")
    g.add_argument("--max-steps", type=int, default=defaults.max_steps, help="Tietze step cap")
    g.add_argument("--max-letters", type=int, default=defaults.max_letters, help="total relator length cap")
    g.add_argument("--max-degree", type=int, default=defaults.max_degree,
                   help="largest symmetric group searched for quotients (<= 6)")
    g.add_argument("--max-prime", type=int, default=defaults.max_prime,
                   help="largest p for affine AGL(1,p) quotients")
    g.add_argument("--witness-nodes", type=int, default=defaults.witness_nodes)
    g.add_argument("--conjugator-length", type=int, default=defaults.conjugator_length)
    g.add_argument("--conjugate-attempts", type=int, default=defaults.conjugate_attempts)
    g.add_argument("--nielsen-depth", type=int, default=defaults.nielsen_depth)
    g.add_argument("--nielsen-attempts", type=int, default=defaults.nielsen_attempts)


def _budgets(args) -> Budgets:
    if not 3 <= args.max_degree <= 6:
        raise UsageError("--max-degree must be between 3 and 6")
    return Budgets(
        max_steps=args.max_steps,
        max_letters=args.max_letters,
        max_degree=args.max_degree,
        witness_nodes=args.witness_nodes,
        max_prime=args.max_prime,
        conjugator_length=args.conjugator_length,
        conjugate_attempts=args.conjugate_attempts,
        nielsen_depth=args.nielsen_depth,
        nielsen_attempts=args.nielsen_attempts,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfbundle", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="certify the rank of one bundle group")
    p.add_argument("word", help='twist word, e.g. "D1^2 D2^-1 D3"; "" for the trivial monodromy')
    p.add_argument("--fiber", type=_fiber, default=FiberType.CLOSED)
    p.add_argument("--emit-presentation", action="store_true", help="print the presentation as JSON")
    p.add_argument("--emit-trace", action="store_true", help="print the Tietze trace as JSON")
    p.add_argument("--json", action="store_true", help="print the certificate as JSON")
    _add_budget_flags(p)

    p = sub.add_parser("family", help="sweep the rank-two family D2^e2 D1^e1 D3^e3 D4^e4 D5^n")
    p.add_argument("--eps", type=_eps, required=True, help="e1,e2,e3,e4 with entries 1 or -1")
    p.add_argument("--n-range", type=_n_range, required=True, help="a..b")
    p.add_argument("--fiber", type=_fiber, default=FiberType.CLOSED)
    _add_budget_flags(p)

    p = sub.add_parser("table1", help="classify the built-in table of 30 monodromies")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--jobs", type=int, default=1)
    _add_budget_flags(p)

    p = sub.add_parser("census", help="exhaustive or random census")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--random", type=int, metavar="N", help="classify N random words")
    p.add_argument("--max-len", type=int, default=None,
                   help=f"word length bound (exhaustive: <= {MAX_ENUMERATION_LENGTH}; random default 20)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fiber", type=_fiber, default=FiberType.CLOSED)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--rank-two-only", action="store_true", help="emit only records certified rank 2")
    _add_budget_flags(p, RANDOM_BUDGETS)
    return parser


def _preprocess(argv: Sequence[str]) -> List[str]:
    # "--eps -1,1,1,1" would otherwise be read as an option
    out: List[str] = []
    it = iter(argv)
    for arg in it:
        if arg in ("--eps", "--n-range"):
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


@contextmanager
def _open_out(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    try:
        f = open(path, "w", newline="")
    except OSError as e:
        raise IOError(f"cannot write {path}: {e.strerror}") from e
    with f:
        yield f


def cmd_rank(args) -> int:
    try:
        word = TwistWord.parse(args.word)
    except WordError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    budgets = _budgets(args)
    pres = bundle_presentation(word, args.fiber)
    if args.emit_presentation:
        print(json.dumps({"presentation": pres.to_json()}))
    if args.emit_trace:
        print(json.dumps({"trace": tietze_eliminate(pres, budgets).to_json()}))
    cert = certify_monodromy(word, args.fiber, budgets)
    if args.json:
        out = cert.to_json()
        out.update(word=str(word), fiber=args.fiber.value, homology=str(cert.homology))
        print(json.dumps(out))
        return EXIT_OK
    print(f"word:     {word or '(trivial)'}")
    print(f"fiber:    {args.fiber.value}")
    print(f"H1:       {cert.homology}")
    print(f"rank:     lower {cert.lower}, upper {cert.upper} ({cert.status})")
    print(f"witness:  {cert.witness_presentation}")
    if cert.witness_monodromy:
        print(f"          (presentation from equivalent monodromy {cert.witness_monodromy})")
    if cert.witness_quotient:
        q = cert.witness_quotient
        images = ", ".join(f"{k} -> {v}" for k, v in q.cycles().items())
        print(f"quotient: {q.group}: {images}")
    for name, definition in cert.definitions:
        print(f"          {name} = {definition}")
    if cert.truncated:
        print("note:     Tietze budget exhausted")
    return EXIT_OK


def cmd_family(args) -> int:
    budgets = _budgets(args)
    failures = 0
    print("n\tword\tbeta1\tlower\tupper\tstatus")
    for n in args.n_range:
        word = family_word(args.eps, n)
        cert = certify_monodromy(word, args.fiber, budgets)
        ok = cert.status == EXACT and cert.upper == 2
        failures += not ok
        print(f"{n}\t{word}\t{cert.homology.betti_1}\t{cert.lower}\t{cert.upper}\t{cert.status}"
              + ("" if ok else "\tFAIL"))
    print(f"{len(args.n_range) - failures}/{len(args.n_range)} rows certified rank 2", file=sys.stderr)
    return EXIT_MISMATCH if failures else EXIT_OK


def cmd_table1(args) -> int:
    budgets = _budgets(args)
    with _open_out(args.out) as out:
        checks = check_table1(budgets, args.jobs)
        write_csv([c.record for c in checks], out)
    beta_bad = [c for c in checks if not c.beta1_ok]
    rank_bad = [c for c in checks if c.rank_ok is False]
    for c in beta_bad:
        print(f"beta1 mismatch: {c.record.word} ({c.record.fiber.value}): "
              f"got {c.record.betti_1}, table {c.row.beta1[c.record.fiber]}", file=sys.stderr)
    for c in rank_bad:
        print(f"rank not certified 2: {c.record.word} ({c.record.fiber.value}): "
              f"{c.record.rank_lower}..{c.record.rank_upper} {c.record.rank_status}", file=sys.stderr)
    for c in checks:
        if c.rank_ok is None:
            print(f"bound only: {c.record.word} ({c.record.fiber.value}): table reports "
                  f"{c.row.rank[c.record.fiber]} generators, found {c.record.rank_lower}..{c.record.rank_upper} "
                  f"{c.record.rank_status}", file=sys.stderr)
    print(f"{len(checks)} records, {len(beta_bad)} beta1 mismatches, {len(rank_bad)} rank-2 failures",
          file=sys.stderr)
    return EXIT_MISMATCH if beta_bad or rank_bad else EXIT_OK


def cmd_census(args) -> int:
    budgets = _budgets(args)
    if args.random is not None:
        max_len = args.max_len if args.max_len is not None else 20
        if max_len < 1 or args.random < 0:
            raise UsageError("--random and --max-len must be positive")
        records = random_search(args.random, max_len, args.seed, args.fiber, budgets, args.jobs,
                                args.rank_two_only)
    else:
        max_len = args.max_len if args.max_len is not None else 5
        if not 1 <= max_len <= MAX_ENUMERATION_LENGTH:
            raise UsageError(f"--max-len must be between 1 and {MAX_ENUMERATION_LENGTH} for an exhaustive census")
        # the default census budgets are the random-run ones; exhaustive runs are small
        records = census(max_len, args.fiber, budgets, args.jobs)
        if args.rank_two_only:
            records = (r for r in records if r.rank_status == EXACT and r.rank_upper == 2)
    start = time.perf_counter()
    with _open_out(args.out) as out:
        n = (write_jsonl if args.format == "jsonl" else write_csv)(records, out)
    log.info("wrote %d records in %.1fs", n, time.perf_counter() - start)
    return EXIT_OK


COMMANDS = {"rank": cmd_rank, "family": cmd_family, "table1": cmd_table1, "census": cmd_census}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_preprocess(argv))
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (IOError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
