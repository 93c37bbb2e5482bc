"""Tournaments on labeled vertices 0..n-1.

A tournament is stored as an orientation bit vector over the unordered pairs
{u, v}, u < v, taken in lexicographic order.  Bit ``i`` is 1 when the pair
with arc id ``i`` is oriented from its smaller to its larger endpoint.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, ResourceError

__all__ = [
    "Tournament",
    "Triple",
    "arc_id",
    "arc_pair",
    "canonical_form",
    "count_tournaments",
    "delta3_minus",
    "enumerate_tournaments",
    "h_value",
    "hamiltonian_path",
    "make_rng",
    "reachable_set",
    "random_tournament",
]

CANONICAL_CAP = 8
ISO_ENUM_CAP = 7
LABELED_ENUM_CAP = 5


def arc_id(n: int, u: int, v: int) -> int:
    """Index of the unordered pair {u, v} in lexicographic pair order."""
    if u == v or not (0 <= u < n and 0 <= v < n):
        raise DomainError(f"invalid vertex pair ({u}, {v}) for n={n}")
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


def arc_pair(n: int, index: int) -> tuple[int, int]:
    """Inverse of :func:`arc_id`: the pair (u, v), u < v, named by ``index``."""
    pairs = _pairs(n)
    if not 0 <= index < len(pairs):
        raise DomainError(f"arc id {index} out of range for n={n}")
    return pairs[index]


@dataclass(frozen=True)
class Tournament:
    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("a tournament needs at least one vertex")
        if self.bits < 0 or self.bits >> comb(self.n, 2):
            raise DomainError("orientation bits exceed C(n, 2)")

    @classmethod
    def from_bitstring(cls, n: int, text: str) -> Tournament:
        m = comb(n, 2)
        if len(text) != m or set(text) - {"0", "1"}:
            raise DomainError(f"expected {m} characters of 0/1, got {text!r}")
        return cls(n, sum(1 << i for i, ch in enumerate(text) if ch == "1"))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Tournament:
        """Build from directed arcs; every pair must be oriented exactly once."""
        bits = 0
        seen = set()
        for u, v in arcs:
            a = arc_id(n, u, v)
            if a in seen:
                raise DomainError(f"pair {{{u}, {v}}} oriented twice")
            seen.add(a)
            if u < v:
                bits |= 1 << a
        if len(seen) != comb(n, 2):
            raise DomainError("arc list does not orient every pair")
        return cls(n, bits)

    @classmethod
    def transitive(cls, n: int) -> Tournament:
        """i -> j iff i < j."""
        return cls(n, (1 << comb(n, 2)) - 1)

    @classmethod
    def rotational(cls, n: int) -> Tournament:
        """Circulant tournament i -> i+1, ..., i+(n-1)//2 (mod n); regular for odd n."""
        half = (n - 1) // 2
        arcs = []
        for u, v in _pairs(n):
            arcs.append((u, v) if 1 <= (v - u) % n <= half else (v, u))
        return cls.from_arcs(n, arcs)

    @property
    def m(self) -> int:
        return comb(self.n, 2)

    @property
    def bitstring(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.m))

    def has_arc(self, u: int, v: int) -> bool:
        a = arc_id(self.n, u, v)
        return bool(self.bits >> a & 1) == (u < v)

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        """Directed arcs (tail, head) indexed by arc id."""
        bits = self.bits
        return tuple(
            (u, v) if bits >> i & 1 else (v, u) for i, (u, v) in enumerate(_pairs(self.n))
        )

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.arcs:
            masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def in_degrees(self) -> tuple[int, ...]:
        degs = [0] * self.n
        for _, v in self.arcs:
            degs[v] += 1
        return tuple(degs)

    @cached_property
    def in_arcs(self) -> tuple[tuple[int, ...], ...]:
        """Arc ids of the in-arcs of each vertex."""
        lists: list[list[int]] = [[] for _ in range(self.n)]
        for a, (_, v) in enumerate(self.arcs):
            lists[v].append(a)
        return tuple(tuple(x) for x in lists)

    def in_degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.in_degrees[v]

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.n - 1 - self.in_degrees[v]

    def permute(self, perm: Sequence[int]) -> Tournament:
        """Relabel vertex v as perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise DomainError("not a permutation of the vertex set")
        return Tournament.from_arcs(self.n, ((perm[u], perm[v]) for u, v in self.arcs))

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.arcs:
            adj[u, v] = 1
        return adj

    def digest(self) -> str:
        """Short hex digest of the canonical form (isomorphism-invariant id).

        Above the canonical-form cap the labeled orientation is hashed instead
        and the digest is prefixed with ``L``.
        """
        if self.n > CANONICAL_CAP:
            return "L" + hashlib.sha256(f"{self.n}:{self.bitstring}".encode()).hexdigest()[:15]
        canon = canonical_form(self)
        return hashlib.sha256(f"{self.n}:{canon}".encode()).hexdigest()[:16]

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise DomainError(f"vertex {v} out of range for n={self.n}")


@dataclass(frozen=True, order=True)
class Triple:
    vertices: tuple[int, int, int]
    degree_sum: int

    @classmethod
    def of(cls, t: Tournament, vertices: Iterable[int]) -> Triple:
        vs = tuple(sorted(vertices))
        if len(vs) != 3 or len(set(vs)) != 3:
            raise DomainError(f"a triple needs three distinct vertices, got {vs}")
        for v in vs:
            t._check_vertex(v)
        return cls(vs, sum(t.in_degrees[v] for v in vs))


def delta3_minus(t: Tournament) -> tuple[int, list[Triple]]:
    """Minimum in-degree sum over 3-subsets, with every minimizing triple.

    The minimum is the sum of the three smallest in-degrees; witnesses are
    searched only among vertices whose degree does not exceed the third
    smallest, which is where every minimizer must live.
    """
    if t.n < 3:
        raise DomainError("delta3 needs at least three vertices")
    degs = t.in_degrees
    third = sorted(degs)[2]
    value = sum(sorted(degs)[:3])
    low = [v for v in range(t.n) if degs[v] <= third]
    witnesses = [
        Triple(c, value)
        for c in itertools.combinations(low, 3)
        if degs[c[0]] + degs[c[1]] + degs[c[2]] == value
    ]
    return value, witnesses


def h_value(t: Tournament) -> int:
    if t.n < 3:
        raise DomainError("h(T) is defined for n >= 3")
    return t.m - delta3_minus(t)[0] + 2


def make_rng(seed: int) -> np.random.Generator:
    """Philox4x64 counter-based generator; the seed is the Philox key."""
    return np.random.Generator(np.random.Philox(key=seed % 2**64))


def random_tournament(n: int, seed: int) -> Tournament:
    """Each orientation bit is an independent fair coin from Philox(seed)."""
    if n < 1:
        raise DomainError("n must be positive")
    coins = make_rng(seed).integers(0, 2, size=comb(n, 2))
    return Tournament(n, sum(1 << i for i, b in enumerate(coins) if b))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    iu, iv = np.triu_indices(n, k=1)
    m = len(iu)
    # First arc is the most significant bit so that integer order = lex order.
    weights = np.array([1 << (m - 1 - i) for i in range(m)], dtype=np.int64)
    return perms, iu, iv, weights


def canonical_form(t: Tournament) -> str:
    """Lexicographically least orientation string over all relabelings."""
    if t.n > CANONICAL_CAP:
        raise ResourceError(
            f"canonical_form scans n! relabelings; n={t.n} exceeds cap {CANONICAL_CAP}"
        )
    if t.n <= 1:
        return t.bitstring
    perms, iu, iv, weights = _perm_table(t.n)
    adj = t.adjacency()
    # Row p of ``perms`` lists which original vertex sits at each new position.
    patterns = adj[perms[:, iu], perms[:, iv]].astype(np.int64)
    codes = patterns @ weights
    best = patterns[int(np.argmin(codes))]
    return "".join("1" if b else "0" for b in best)


def count_tournaments(n: int, up_to_iso: bool = False) -> int:
    if not up_to_iso:
        return 2 ** comb(n, 2)
    return sum(1 for _ in enumerate_tournaments(n, up_to_iso=True))


@lru_cache(maxsize=None)
def _iso_representatives(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("",)
    forms: set[str] = set()
    for base in _iso_representatives(n - 1):
        parent = Tournament.from_bitstring(n - 1, base)
        for pattern in range(1 << (n - 1)):
            # New vertex n-1 beats u iff bit u of pattern is set.
            arcs = list(parent.arcs)
            arcs += [(n - 1, u) if pattern >> u & 1 else (u, n - 1) for u in range(n - 1)]
            forms.add(canonical_form(Tournament.from_arcs(n, arcs)))
    return tuple(sorted(forms))


def enumerate_tournaments(
    n: int, up_to_iso: bool = False, cap: int | None = None
) -> Iterator[Tournament]:
    """All labeled tournaments, or one canonical representative per class."""
    limit = cap if cap is not None else (ISO_ENUM_CAP if up_to_iso else LABELED_ENUM_CAP)
    if n > limit:
        raise ResourceError(
            f"enumerating tournaments of order {n} exceeds the cap of {limit}; "
            "raise the cap explicitly or use sampled mode"
        )
    if n < 1:
        raise DomainError("n must be positive")
    if up_to_iso:
        for form in _iso_representatives(n):
            yield Tournament.from_bitstring(n, form)
    else:
        for bits in range(1 << comb(n, 2)):
            yield Tournament(n, bits)


def hamiltonian_path(t: Tournament) -> list[int]:
    """Insertion construction: each vertex goes to the first slot its arcs allow."""
    out = t.out_masks
    path: list[int] = []
    for v in range(t.n):
        if not path or out[v] >> path[0] & 1:
            path.insert(0, v)
            continue
        for i in range(len(path) - 1):
            if out[path[i]] >> v & 1 and out[v] >> path[i + 1] & 1:
                path.insert(i + 1, v)
                break
        else:
            path.append(v)
    return path


def reachable_set(n: int, arcs: Iterable[tuple[int, int]], x: int) -> set[int]:
    """Vertices reachable from x along directed arcs (breadth-first)."""
    succ: list[list[int]] = [[] for _ in range(n)]
    for u, v in arcs:
        if not (0 <= u < n and 0 <= v < n):
            raise DomainError(f"arc ({u}, {v}) references a vertex outside 0..{n - 1}")
        succ[u].append(v)
    for lst in succ:
        lst.sort()
    seen = {x}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen
