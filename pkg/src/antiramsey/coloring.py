"""Arc colorings, color statistics and the vertex-type classifier."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError
from .tournament import Tournament, Triple

__all__ = [
    "ArcColoring",
    "ColorStats",
    "VertexType",
    "classify_vertex",
    "color_stats",
    "enumerate_colorings",
    "extremal_coloring",
    "merge_colors",
    "random_coloring",
    "rgs_prefixes",
    "stirling2",
    "unrank_coloring",
]


@dataclass(frozen=True)
class ArcColoring:
    """Color id per arc id; ids are exactly 0..k-1."""

    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        used = set(self.colors)
        if used != set(range(len(used))):
            raise DomainError("color ids must be exactly 0..k-1 (surjective)")

    @classmethod
    def from_labels(cls, labels: Iterable) -> ArcColoring:
        """Relabel arbitrary hashable labels in order of first appearance."""
        ids: dict = {}
        return cls(tuple(ids.setdefault(x, len(ids)) for x in labels))

    @classmethod
    def rainbow(cls, m: int) -> ArcColoring:
        return cls(tuple(range(m)))

    @classmethod
    def monochromatic(cls, m: int) -> ArcColoring:
        return cls((0,) * m)

    @property
    def m(self) -> int:
        return len(self.colors)

    @property
    def k(self) -> int:
        return len(set(self.colors))

    def normalized(self) -> ArcColoring:
        """Restricted-growth form: first occurrences of ids appear in order."""
        return ArcColoring.from_labels(self.colors)

    def is_normalized(self) -> bool:
        return self.colors == self.normalized().colors

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for a, c in enumerate(self.colors):
            out[c].append(a)
        return out


class VertexType(enum.Enum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3


@dataclass(frozen=True)
class ColorStats:
    class_sizes: tuple[int, ...]
    singulars: frozenset[int]
    colors_at: tuple[frozenset[int], ...]

    def c(self, x: int) -> int:
        return len(self.colors_at[x])


def _check_lengths(t: Tournament, gamma: ArcColoring) -> None:
    if gamma.m != t.m:
        raise DomainError(f"coloring has {gamma.m} entries, tournament has {t.m} arcs")


def color_stats(t: Tournament, gamma: ArcColoring) -> ColorStats:
    _check_lengths(t, gamma)
    k = gamma.k
    sizes = [0] * k
    full = (1 << t.n) - 1
    # Vertices incident to every arc of the class: x is one iff the color is in C(x).
    common = [full] * k
    for a, (u, v) in enumerate(t.arcs):
        c = gamma.colors[a]
        sizes[c] += 1
        common[c] &= (1 << u) | (1 << v)
    colors_at = tuple(
        frozenset(c for c in range(k) if common[c] >> x & 1) for x in range(t.n)
    )
    singulars = frozenset(c for c in range(k) if sizes[c] == 1)
    return ColorStats(tuple(sizes), singulars, colors_at)


def classify_vertex(
    t: Tournament, gamma: ArcColoring, x: int, stats: ColorStats | None = None
) -> VertexType:
    """Type 1: an in-arc color lies in C(x).  Type 2: otherwise, and the
    in-arcs carry at least two colors.  Type 3: everything else, including a
    vertex with no in-arcs at all."""
    t._check_vertex(x)
    if stats is None:
        stats = color_stats(t, gamma)
    in_colors = {gamma.colors[a] for a in t.in_arcs[x]}
    if in_colors & stats.colors_at[x]:
        return VertexType.TYPE1
    if len(in_colors) >= 2:
        return VertexType.TYPE2
    return VertexType.TYPE3


def extremal_coloring(t: Tournament, triple: Triple | Iterable[int]) -> ArcColoring:
    """All in-arcs of the triple get color 0; every other arc a fresh color."""
    if t.n < 3:
        raise DomainError("extremal coloring needs n >= 3")
    vertices = triple.vertices if isinstance(triple, Triple) else tuple(triple)
    tri = Triple.of(t, vertices)
    black = set().union(*(t.in_arcs[v] for v in tri.vertices))
    colors = []
    fresh = 1 if black else 0
    for a in range(t.m):
        if a in black:
            colors.append(0)
        else:
            colors.append(fresh)
            fresh += 1
    return ArcColoring(tuple(colors))


def stirling2(m: int, k: int) -> int:
    """Stirling number of the second kind via inclusion-exclusion."""
    if k < 0 or m < 0:
        return 0
    if k == 0:
        return int(m == 0)
    total = sum((-1) ** j * comb(k, j) * (k - j) ** m for j in range(k + 1))
    factorial = 1
    for i in range(2, k + 1):
        factorial *= i
    return total // factorial


@lru_cache(maxsize=None)
def _completions(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """table[r][b]: restricted-growth completions of r more slots, b blocks open, k total."""
    table = [[0] * (k + 2) for _ in range(m + 1)]
    table[0][k] = 1
    for r in range(1, m + 1):
        for b in range(k + 1):
            table[r][b] = b * table[r - 1][b] + table[r - 1][b + 1]
    return tuple(tuple(row) for row in table)


def _check_range(m: int, k: int) -> None:
    if not 1 <= k <= m:
        raise DomainError(f"need 1 <= k <= m, got m={m}, k={k}")


def enumerate_colorings(
    m: int, k: int, prefix: Sequence[int] = ()
) -> Iterator[ArcColoring]:
    """Every partition of m arc slots into exactly k classes, once each, as
    restricted-growth strings in lexicographic order.

    ``prefix`` restricts the stream to strings starting with it; the streams
    for all prefixes from :func:`rgs_prefixes` tile the full enumeration.
    """
    _check_range(m, k)
    table = _completions(m, k)
    seq = list(prefix)
    blocks = _prefix_blocks(seq)
    if blocks is None or table[m - len(seq)][blocks] == 0:
        return

    def extend(pos: int, b: int) -> Iterator[tuple[int, ...]]:
        if pos == m:
            yield tuple(seq)
            return
        rest = m - pos - 1
        for c in range(min(b + 1, k)):
            nb = b + 1 if c == b else b
            if table[rest][nb]:
                seq.append(c)
                yield from extend(pos + 1, nb)
                seq.pop()

    for colors in extend(len(seq), blocks):
        yield ArcColoring(colors)


def _prefix_blocks(seq: Sequence[int]) -> int | None:
    b = 0
    for c in seq:
        if c > b or c < 0:
            return None
        if c == b:
            b += 1
    return b


def rgs_prefixes(m: int, k: int, length: int) -> list[tuple[int, ...]]:
    """Completable restricted-growth prefixes of the given length, in order."""
    _check_range(m, k)
    length = min(length, m)
    table = _completions(m, k)
    out: list[tuple[int, ...]] = []

    def walk(seq: list[int], b: int) -> None:
        if len(seq) == length:
            out.append(tuple(seq))
            return
        rest = m - len(seq) - 1
        for c in range(min(b + 1, k)):
            nb = b + 1 if c == b else b
            if table[rest][nb]:
                seq.append(c)
                walk(seq, nb)
                seq.pop()

    walk([], 0)
    return out


def unrank_coloring(m: int, k: int, rank: int) -> ArcColoring:
    """The ``rank``-th coloring of :func:`enumerate_colorings` (0-based)."""
    _check_range(m, k)
    table = _completions(m, k)
    if not 0 <= rank < table[m][0]:
        raise DomainError(f"rank {rank} outside 0..S({m},{k})-1")
    colors = []
    b = 0
    for pos in range(m):
        rest = m - pos - 1
        for c in range(min(b + 1, k)):
            nb = b + 1 if c == b else b
            block = table[rest][nb]
            if rank < block:
                colors.append(c)
                b = nb
                break
            rank -= block
    return ArcColoring(tuple(colors))


def _uniform_below(rng: np.random.Generator, bound: int) -> int:
    if bound < 2**62:
        return int(rng.integers(0, bound))
    words = (bound.bit_length() + 63) // 64
    span = 1 << (64 * words)
    limit = span - span % bound
    while True:
        raw = rng.bit_generator.random_raw(words)
        value = 0
        for w in raw:
            value = value << 64 | int(w)
        if value < limit:
            return value % bound


def random_coloring(m: int, k: int, rng: np.random.Generator) -> ArcColoring:
    """Uniform over partitions into k classes (equivalently, uniform surjective
    k-coloring up to renaming)."""
    _check_range(m, k)
    return unrank_coloring(m, k, _uniform_below(rng, _completions(m, k)[m][0]))


def merge_colors(gamma: ArcColoring, c_keep: int, c_drop: int) -> ArcColoring:
    """Recolor every arc of ``c_drop`` with ``c_keep``; ids above ``c_drop``
    shift down by one so the result stays contiguous."""
    k = gamma.k
    if c_keep == c_drop:
        raise DomainError("cannot merge a color with itself")
    if not (0 <= c_keep < k and 0 <= c_drop < k):
        raise DomainError(f"colors {c_keep}, {c_drop} not both present (k={k})")

    def remap(c: int) -> int:
        if c == c_drop:
            c = c_keep
        return c - 1 if c > c_drop else c

    return ArcColoring(tuple(remap(c) for c in gamma.colors))
