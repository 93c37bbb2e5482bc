import itertools
from functools import lru_cache

import pytest

from antiramsey import Tournament

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def cycle3():
    # 0 -> 1 -> 2 -> 0
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def transitive3():
    return Tournament.transitive(3)


@pytest.fixture
def transitive4():
    return Tournament.transitive(4)


@pytest.fixture
def regular5():
    # i -> i+1, i -> i+2 (mod 5)
    return Tournament.from_arcs(5, [(i, (i + d) % 5) for i in range(5) for d in (1, 2)])


def brute_delta3(t):
    degs = [sum(t.has_arc(u, v) for u in range(t.n) if u != v) for v in range(t.n)]
    return min(sum(degs[v] for v in c) for c in itertools.combinations(range(t.n), 3))


@lru_cache(maxsize=None)
def stirling_rec(m, k):
    """S(m, k) from the recurrence S(m,k) = k S(m-1,k) + S(m-1,k-1)."""
    if m == 0 and k == 0:
        return 1
    if m == 0 or k == 0:
        return 0
    return k * stirling_rec(m - 1, k) + stirling_rec(m - 1, k - 1)


def brute_iso_classes(n):
    """Isomorphism classes by exhaustive relabeling, independent of canonical_form."""
    seen = set()
    classes = 0
    m = n * (n - 1) // 2
    for bits in range(1 << m):
        if bits in seen:
            continue
        classes += 1
        t = Tournament(n, bits)
        for perm in itertools.permutations(range(n)):
            seen.add(t.permute(perm).bits)
    return classes


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
