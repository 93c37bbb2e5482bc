"""Machine checks of h(T) = C(n,2) - delta3(T) + 2 and of the shape of the
colorings that sit one color below it.

Exhaustive mode walks every coloring up to renaming; sampled mode draws
seeded uniform random colorings.  Any coloring that looks like a
counterexample is re-run through the brute-force arborescence oracle before
it is reported.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .arborescence import has_rainbow_arborescence, rainbow_exists_bruteforce
from .coloring import (
    ArcColoring,
    VertexType,
    classify_vertex,
    color_stats,
    enumerate_colorings,
    extremal_coloring,
    random_coloring,
    rgs_prefixes,
    stirling2,
)
from .errors import DomainError
from .formats import write_clr, write_trn
from .tournament import (
    Tournament,
    Triple,
    delta3_minus,
    enumerate_tournaments,
    h_value,
    make_rng,
    random_tournament,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
DEFAULT_SAMPLES = 10**5
DEFAULT_TOURNAMENTS = 10
EXHAUSTIVE_SAFE_N = 5
PREFIX_LEN = 4

CSV_COLUMNS = ("n", "digest", "delta3", "h", "mode", "checked", "failures", "elapsed_ms")


def derive_seed(*parts: int) -> int:
    """64-bit seed derived from integer parts via numpy's SeedSequence."""
    state = np.random.SeedSequence([p % 2**64 for p in parts]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


@dataclass
class Failure:
    check: str
    reason: str
    coloring: list[int]


@dataclass
class BoundResult:
    passed: bool
    inconclusive: bool = False
    checked: dict[int, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    coloring: ArcColoring | None = None


@dataclass
class CharacterizationResult:
    passed: bool
    inconclusive: bool = False
    checked: int = 0
    failing: int = 0
    rediscovered_extremal: bool = False
    failures: list[Failure] = field(default_factory=list)
    lemma_stats: dict[str, int] = field(default_factory=dict)


@dataclass
class VerificationReport:
    tournament_id: str
    orientation: str
    n: int
    m: int
    delta3: int
    h: int
    mode: str
    colorings_checked: dict[int, int]
    failing_colorings: int
    failures: list[Failure]
    lemma_stats: dict[str, int]
    checks: dict[str, str]
    seed: int | None
    elapsed: float | None

    @property
    def verdict(self) -> str:
        if self.failures:
            return "inconsistent"
        if "inconclusive" in self.checks.values():
            return "inconclusive"
        return "consistent"

    @property
    def total_checked(self) -> int:
        return sum(self.colorings_checked.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["colorings_checked"] = {str(k): v for k, v in sorted(self.colorings_checked.items())}
        d["verdict"] = self.verdict
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self) -> list:
        elapsed_ms = "" if self.elapsed is None else f"{self.elapsed * 1000:.1f}"
        return [
            self.n,
            self.tournament_id,
            self.delta3,
            self.h,
            self.mode,
            self.total_checked,
            len(self.failures),
            elapsed_ms,
        ]


def find_extremal_triple(t: Tournament, gamma: ArcColoring) -> Triple | None:
    """Minimizing triple whose in-arcs form the only non-singular color class,
    if the coloring has exactly that shape."""
    if gamma.m != t.m or t.n < 3:
        return None
    value, witnesses = delta3_minus(t)
    sizes = [0] * gamma.k
    for c in gamma.colors:
        sizes[c] += 1
    for tri in witnesses:
        in_arcs = set().union(*(t.in_arcs[v] for v in tri.vertices))
        shared = {gamma.colors[a] for a in in_arcs}
        if len(shared) > 1:
            continue
        if all(sizes[gamma.colors[a]] == 1 for a in range(t.m) if a not in in_arcs):
            if not in_arcs or sizes[shared.pop()] == len(in_arcs):
                return tri
    return None


def verify_lower_bound(t: Tournament) -> BoundResult:
    """The extremal coloring on the first minimizing triple has no rainbow tree."""
    if t.n < 3:
        raise DomainError("lower bound needs n >= 3")
    _, witnesses = delta3_minus(t)
    gamma = extremal_coloring(t, witnesses[0])
    outcome = has_rainbow_arborescence(t, gamma)
    failures = []
    if outcome.found:
        failures.append(Failure("lower_bound", "extremal coloring has a rainbow tree", list(gamma.colors)))
    return BoundResult(not outcome.found, checked={gamma.k: 1}, failures=failures, coloring=gamma)


def verify_lemma_bounds(t: Tournament, gamma: ArcColoring) -> dict[str, bool]:
    """Per-vertex bounds that must hold on a failing (h-1)-coloring."""
    if gamma.k != h_value(t) - 1:
        raise DomainError(f"coloring uses {gamma.k} colors, lemmas need h-1 = {h_value(t) - 1}")
    if has_rainbow_arborescence(t, gamma).found:
        raise DomainError("coloring admits a rainbow arborescence; lemmas do not apply")
    n = t.n
    stats = color_stats(t, gamma)
    types = [classify_vertex(t, gamma, x, stats) for x in range(n)]
    type1_ok = all(stats.c(x) >= n - 4 for x in range(n) if types[x] is VertexType.TYPE1)
    type2_ok = all(
        t.out_degree(x) >= stats.c(x) == n - 4
        for x in range(n)
        if types[x] is VertexType.TYPE2
    )
    count_ok = sum(tp is VertexType.TYPE1 for tp in types) <= n - 2
    return {"type1_bound": type1_ok, "type2_bound": type2_ok, "type1_count": count_ok}


def _scan_chunk(args: tuple[int, int, int, tuple[int, ...]]) -> tuple[int, list[tuple[int, ...]], int]:
    """Search every coloring with the given prefix; return (count, colorings
    without a rainbow tree, inconclusive count)."""
    n, bits, k, prefix = args
    t = Tournament(n, bits)
    count = 0
    failing = []
    inconclusive = 0
    for gamma in enumerate_colorings(t.m, k, prefix):
        count += 1
        outcome = has_rainbow_arborescence(t, gamma)
        if outcome.exhausted:
            inconclusive += 1
        elif not outcome.found:
            failing.append(gamma.colors)
    return count, failing, inconclusive


def _scan(t: Tournament, k: int, jobs: int) -> tuple[int, list[ArcColoring], int]:
    if jobs <= 1:
        chunks = [(t.n, t.bits, k, ())]
        results = map(_scan_chunk, chunks)
    else:
        chunks = [(t.n, t.bits, k, p) for p in rgs_prefixes(t.m, k, PREFIX_LEN)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_chunk, chunks, chunksize=max(1, len(chunks) // (4 * jobs))))
    count = 0
    failing: list[ArcColoring] = []
    inconclusive = 0
    # Chunks come back in prefix order, so the merged list stays in RGS order.
    for c, f, i in results:
        count += c
        failing.extend(ArcColoring(x) for x in f)
        inconclusive += i
    return count, failing, inconclusive


def _confirm_absent(t: Tournament, gamma: ArcColoring) -> bool:
    return not rainbow_exists_bruteforce(t, gamma)


def upper_bound_ks(t: Tournament) -> list[int]:
    h = h_value(t)
    ks = [h]
    if t.n <= 4 and h + 1 <= t.m:
        ks.append(h + 1)
    return ks


def verify_upper_bound(
    t: Tournament,
    mode: str = "exhaustive",
    *,
    ks: Sequence[int] | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> BoundResult:
    """Every coloring with h colors (exhaustive: also h+1 for n <= 4) has a
    rainbow arborescence."""
    h = h_value(t)
    result = BoundResult(True)
    if mode == "exhaustive":
        for k in ks if ks is not None else upper_bound_ks(t):
            if stirling2(t.m, k) > budget:
                log.warning("S(%d,%d) exceeds budget %d; upper bound inconclusive", t.m, k, budget)
                result.inconclusive = True
                continue
            count, failing, inconclusive = _scan(t, k, jobs)
            result.checked[k] = count
            result.inconclusive |= inconclusive > 0
            for gamma in failing:
                _record_upper_failure(t, gamma, result)
    elif mode == "sampled":
        if samples > budget:
            result.inconclusive = True
            samples = budget
        rng = make_rng(seed)
        m = t.m
        inconclusive = 0
        for _ in range(samples):
            gamma = random_coloring(m, h, rng)
            outcome = has_rainbow_arborescence(t, gamma)
            if outcome.exhausted:
                inconclusive += 1
            elif not outcome.found:
                _record_upper_failure(t, gamma, result)
        result.checked[h] = samples
        result.inconclusive |= inconclusive > 0
    else:
        raise DomainError(f"unknown mode {mode!r}")
    result.passed = not result.failures and not result.inconclusive
    return result


def _record_upper_failure(t: Tournament, gamma: ArcColoring, result: BoundResult) -> None:
    if _confirm_absent(t, gamma):
        reason = f"no rainbow arborescence with {gamma.k} colors"
    else:
        reason = "search reported none but brute force found a rainbow arborescence"
    result.failures.append(Failure("upper_bound", reason, list(gamma.colors)))


def verify_characterization(
    t: Tournament, *, budget: int = DEFAULT_BUDGET, jobs: int = 1
) -> CharacterizationResult:
    """Every (h-1)-coloring without a rainbow tree is an extremal coloring on
    some minimizing triple; at least one such coloring exists."""
    k = h_value(t) - 1
    result = CharacterizationResult(False)
    if stirling2(t.m, k) > budget:
        result.inconclusive = True
        return result
    count, failing, inconclusive = _scan(t, k, jobs)
    result.checked = count
    result.failing = len(failing)
    result.inconclusive = inconclusive > 0
    stats = {"type1_bound": 0, "type2_bound": 0, "type1_count": 0}
    _, witnesses = delta3_minus(t)
    expected = extremal_coloring(t, witnesses[0]).normalized()
    for gamma in failing:
        if gamma == expected:
            result.rediscovered_extremal = True
        if find_extremal_triple(t, gamma) is None and _confirm_absent(t, gamma):
            result.failures.append(
                Failure("characterization", "failing coloring is not extremal", list(gamma.colors))
            )
        for name, ok in verify_lemma_bounds(t, gamma).items():
            if ok:
                stats[name] += 1
            else:
                result.failures.append(Failure(name, "lemma bound violated", list(gamma.colors)))
    result.lemma_stats = stats
    if failing and not result.rediscovered_extremal:
        result.failures.append(
            Failure("characterization", "extremal coloring not among failing colorings", list(expected.colors))
        )
    result.passed = bool(failing) and not result.failures and not result.inconclusive
    return result


def _verdict(ok: bool, inconclusive: bool = False) -> str:
    if inconclusive:
        return "inconclusive"
    return "pass" if ok else "fail"


def verify_tournament(
    t: Tournament,
    mode: str = "exhaustive",
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    timings: bool = True,
) -> VerificationReport:
    start = time.perf_counter()
    delta3, _ = delta3_minus(t)
    h = h_value(t)
    lower = verify_lower_bound(t)
    failures = list(lower.failures)
    checks = {"lower_bound": _verdict(lower.passed)}
    checked: dict[int, int] = {}
    failing_count = 0
    lemma_stats: dict[str, int] = {}

    if mode == "exhaustive":
        upper = verify_upper_bound(t, "exhaustive", budget=budget, jobs=jobs)
        char = verify_characterization(t, budget=budget, jobs=jobs)
        checked.update(upper.checked)
        if char.checked:
            checked[h - 1] = char.checked
        failing_count = char.failing
        lemma_stats = char.lemma_stats
        failures += upper.failures + char.failures
        checks["upper_bound"] = _verdict(not upper.failures, upper.inconclusive and not upper.failures)
        checks["characterization"] = _verdict(
            not char.failures and char.failing > 0, char.inconclusive and not char.failures
        )
    elif mode == "sampled":
        upper = verify_upper_bound(t, "sampled", samples=samples, seed=seed or 0, budget=budget)
        checked.update(upper.checked)
        failures += upper.failures
        checks["upper_bound"] = _verdict(not upper.failures, upper.inconclusive and not upper.failures)
        # The extremal coloring is itself a failing (h-1)-coloring.
        if lower.passed:
            lemma = verify_lemma_bounds(t, lower.coloring)
            lemma_stats = {name: int(ok) for name, ok in lemma.items()}
            failures += [
                Failure(name, "lemma bound violated", list(lower.coloring.colors))
                for name, ok in lemma.items()
                if not ok
            ]
    else:
        raise DomainError(f"unknown mode {mode!r}")

    return VerificationReport(
        tournament_id=t.digest(),
        orientation=t.bitstring,
        n=t.n,
        m=t.m,
        delta3=delta3,
        h=h,
        mode=mode,
        colorings_checked=checked,
        failing_colorings=failing_count,
        failures=failures,
        lemma_stats=lemma_stats,
        checks=checks,
        seed=seed,
        elapsed=time.perf_counter() - start if timings else None,
    )


def sweep_tournaments(n: int, mode: str, count: int, seed: int) -> list[tuple[Tournament, int | None]]:
    """Tournaments a sweep visits at order n, each with its sampling seed."""
    if mode == "exhaustive":
        return [(t, None) for t in enumerate_tournaments(n, up_to_iso=True)]
    out = []
    for i in range(count):
        out.append((random_tournament(n, derive_seed(seed, n, i, 0)), derive_seed(seed, n, i, 1)))
    return out


def run_sweep(
    n_values: Iterable[int],
    mode: str = "exhaustive",
    *,
    budget: int = DEFAULT_BUDGET,
    samples: int = DEFAULT_SAMPLES,
    tournaments: int = DEFAULT_TOURNAMENTS,
    seed: int = 0,
    jobs: int = 1,
    allow_large: bool = False,
    timings: bool = True,
    quarantine: Path | None = None,
) -> Iterator[VerificationReport]:
    """One report per tournament: every isomorphism class (exhaustive) or
    ``tournaments`` seeded random tournaments (sampled) of each order."""
    for n in n_values:
        if n < 3:
            raise DomainError("sweeps need n >= 3")
        if mode == "exhaustive" and n > EXHAUSTIVE_SAFE_N and not allow_large:
            raise DomainError(
                f"exhaustive sweep at n={n} is very long; pass allow_large to run it"
            )
        for t, t_seed in sweep_tournaments(n, mode, tournaments, seed):
            report = verify_tournament(
                t, mode, samples=samples, seed=t_seed, budget=budget, jobs=jobs, timings=timings
            )
            if report.failures and quarantine is not None:
                _quarantine(quarantine, t, report)
            log.info("n=%d %s %s", n, report.tournament_id, report.verdict)
            yield report


def _quarantine(directory: Path, t: Tournament, report: VerificationReport) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for i, failure in enumerate(report.failures):
        stem = directory / f"{report.tournament_id}_{i:03d}"
        write_trn(stem.with_suffix(".trn"), t)
        write_clr(stem.with_suffix(".clr"), ArcColoring(tuple(failure.coloring)))
