"""Command-line front end.

Exit codes: 0 success / consistent, 1 counterexample or no rainbow tree,
2 usage or input error, 3 inconclusive (budget exhausted).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import secrets
import sys
import time
from pathlib import Path

from .arborescence import count_arborescences, has_rainbow_arborescence
from .coloring import ArcColoring, extremal_coloring, random_coloring
from .errors import DomainError, ResourceError
from .formats import (
    dumps_clr,
    dumps_trn,
    dumps_witness,
    read_clr,
    read_trn,
    write_clr,
)
from .tournament import (
    Tournament,
    Triple,
    delta3_minus,
    h_value,
    make_rng,
    random_tournament,
)
from .verifier import (
    CSV_COLUMNS,
    DEFAULT_BUDGET,
    DEFAULT_SAMPLES,
    DEFAULT_TOURNAMENTS,
    derive_seed,
    run_sweep,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

log = logging.getLogger("antiramsey")


class UsageError(Exception):
    pass


def _seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_n_range(text: str) -> list[int]:
    """'5' -> [5]; '3..5' -> [3, 4, 5]; '3,5' -> [3, 5]."""
    values: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise UsageError(f"bad --n-range {text!r}") from None
    if not values:
        raise UsageError("empty --n-range")
    return values


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "random":
        t = random_tournament(args.n, _seed(args))
    elif args.kind == "transitive":
        t = Tournament.transitive(args.n)
    else:
        t = Tournament.rotational(args.n)
    _emit(dumps_trn(t), args.out)
    if args.coloring:
        if args.coloring == "rainbow":
            gamma = ArcColoring.rainbow(t.m)
        elif args.coloring == "mono":
            gamma = ArcColoring.monochromatic(t.m)
        else:
            if args.k is None:
                raise UsageError("--coloring random needs --k")
            gamma = random_coloring(t.m, args.k, make_rng(derive_seed(_seed(args), 1)))
        if not args.clr_out:
            raise UsageError("--coloring needs --clr-out")
        write_clr(args.clr_out, gamma)
    return EXIT_OK


def cmd_compute(args: argparse.Namespace) -> int:
    t = read_trn(args.input)
    if t.n < 3:
        raise UsageError("h(T) needs n >= 3")
    delta3, triples = delta3_minus(t)
    record = {
        "n": t.n,
        "in_degrees": list(t.in_degrees),
        "delta3": delta3,
        "triples": [list(tr.vertices) for tr in triples],
        "h": h_value(t),
    }
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(f"n={t.n}")
        print("in_degrees=" + " ".join(map(str, t.in_degrees)))
        print(f"delta3={delta3}")
        print("triples=" + " ".join(",".join(map(str, tr.vertices)) for tr in triples))
        print(f"h={record['h']}")
    return EXIT_OK


def cmd_extremal(args: argparse.Namespace) -> int:
    t = read_trn(args.input)
    if t.n < 3:
        raise UsageError("extremal coloring needs n >= 3")
    h = h_value(t)
    if args.triple:
        try:
            triple = Triple.of(t, (int(x) for x in args.triple.split(",")))
        except ValueError as exc:
            raise UsageError(f"invalid --triple: {exc}") from None
    else:
        triple = delta3_minus(t)[1][0]
    gamma = extremal_coloring(t, triple)
    _emit(dumps_clr(gamma), args.out)
    print(f"colors={gamma.k} h-1={h - 1}", file=sys.stderr)
    if gamma.k != h - 1:
        print(
            f"warning: triple {list(triple.vertices)} is not minimizing; "
            f"{gamma.k} colors > h-1 = {h - 1}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    t = read_trn(args.tournament)
    gamma = read_clr(args.coloring)
    if gamma.m != t.m:
        raise UsageError(f"coloring has {gamma.m} arcs, tournament has {t.m}")
    outcome = has_rainbow_arborescence(t, gamma, budget=args.budget)
    if outcome.exhausted:
        print("inconclusive")
        return EXIT_INCONCLUSIVE
    if not outcome.found:
        print("none")
        return EXIT_FAIL
    print(dumps_witness(t, gamma, outcome.witness))
    return EXIT_OK


def _prepare_out(path: str | None) -> Path | None:
    if path is None:
        return None
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise UsageError(f"cannot use output directory {path}: {exc}") from None
    return out


def cmd_verify(args: argparse.Namespace) -> int:
    n_values = parse_n_range(args.n_range)
    seed = _seed(args) if args.mode == "sampled" else (args.seed or 0)
    out = _prepare_out(args.out)
    reports = run_sweep(
        n_values,
        args.mode,
        budget=args.budget,
        samples=args.samples,
        tournaments=args.tournaments,
        seed=seed,
        jobs=args.jobs,
        allow_large=args.allow_large,
        timings=not args.no_timings,
        quarantine=out / "quarantine" if out else None,
    )
    worst = EXIT_OK
    json_lines = []
    rows = []
    for report in reports:
        json_lines.append(report.to_json())
        rows.append(report.csv_row())
        print(
            f"n={report.n} id={report.tournament_id} delta3={report.delta3} h={report.h} "
            f"checked={report.total_checked} failures={len(report.failures)} {report.verdict}"
        )
        if report.verdict == "inconsistent":
            worst = EXIT_FAIL
        elif report.verdict == "inconclusive" and worst == EXIT_OK:
            worst = EXIT_INCONCLUSIVE
    if out is not None:
        (out / "reports.jsonl").write_text("".join(line + "\n" for line in json_lines))
        with open(out / "summary.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            writer.writerows(rows)
    return worst


def cmd_count(args: argparse.Namespace) -> int:
    t = read_trn(args.input)
    roots = [args.root] if args.root is not None else range(t.n)
    counts = {r: count_arborescences(t, r) for r in roots}
    if args.format == "json":
        print(json.dumps({str(r): c for r, c in counts.items()}))
    else:
        print(",".join(str(c) for c in counts.values()))
    return EXIT_OK


BENCH_COLUMNS = ("trial", "orientation", "coloring", "h", "found", "nodes", "prunes", "elapsed_us")


def cmd_bench(args: argparse.Namespace) -> int:
    if args.n < 3:
        raise UsageError("bench needs --n >= 3 (h is undefined below 3)")
    seed = _seed(args)
    rows = []
    for trial in range(args.trials):
        t = random_tournament(args.n, derive_seed(seed, trial, 0))
        h = h_value(t)
        gamma = random_coloring(t.m, h, make_rng(derive_seed(seed, trial, 1)))
        start = time.perf_counter()
        outcome = has_rainbow_arborescence(t, gamma)
        elapsed = (time.perf_counter() - start) * 1e6
        rows.append(
            [
                trial,
                t.bitstring,
                "-".join(map(str, gamma.colors)),
                h,
                int(outcome.found),
                outcome.nodes_expanded,
                outcome.prunes,
                f"{elapsed:.1f}",
            ]
        )
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        writer.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antiramsey",
        description="Rainbow out-directed spanning trees of arc-colored tournaments.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a tournament (and optionally a coloring)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("random", "transitive", "rotational"), default="random")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="trn output path (default stdout)")
    p.add_argument("--coloring", choices=("rainbow", "mono", "random"))
    p.add_argument("--k", type=int)
    p.add_argument("--clr-out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compute", help="in-degrees, delta3, minimizing triples and h(T)")
    p.add_argument("input")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("extremal", help="write the extremal (h-1)-coloring")
    p.add_argument("input")
    p.add_argument("--triple", help="comma-separated vertices, default first minimizing triple")
    p.add_argument("--out", help="clr output path (default stdout)")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("search", help="find a rainbow arborescence")
    p.add_argument("tournament")
    p.add_argument("coloring")
    p.add_argument("--budget", type=int, help="node expansion budget")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="sweep the theorem over tournaments")
    p.add_argument("--n-range", required=True, help="e.g. 5, 3..5 or 3,5")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max colorings per check")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--tournaments", type=int, default=DEFAULT_TOURNAMENTS)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="directory for reports.jsonl, summary.csv, quarantine/")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--allow-large", action="store_true", help="permit exhaustive n >= 6")
    p.add_argument("--no-timings", action="store_true", help="omit elapsed times (byte-stable output)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="arborescence counts per root (matrix-tree)")
    p.add_argument("input")
    p.add_argument("--root", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bench", help="time the search on random h-colorings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, DomainError, ResourceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
