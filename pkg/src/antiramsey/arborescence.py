"""Rainbow out-directed spanning trees: backtracking search and oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .coloring import ArcColoring
from .errors import DomainError, ResourceError
from .tournament import Tournament, arc_id

__all__ = [
    "Arborescence",
    "ProofDigraph",
    "SearchOutcome",
    "bareiss_determinant",
    "count_arborescences",
    "enumerate_arborescences",
    "has_rainbow_arborescence",
    "is_arborescence",
    "proof_digraph",
    "rainbow_exists_bruteforce",
]

ENUM_CAP = 7


@dataclass(frozen=True)
class Arborescence:
    """Spanning out-tree; ``parent[root]`` is None."""

    root: int
    parent: tuple[int | None, ...]

    @classmethod
    def from_arcs(cls, n: int, root: int, arcs) -> Arborescence:
        parent: list[int | None] = [None] * n
        for u, v in arcs:
            parent[v] = u
        return cls(root, tuple(parent))

    def tree_arcs(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p is not None]

    def arc_ids(self, t: Tournament) -> list[int]:
        return [arc_id(t.n, u, v) for u, v in self.tree_arcs()]

    def to_json(self, t: Tournament, gamma: ArcColoring) -> dict:
        return {
            "root": self.root,
            "parents": list(self.parent),
            "colors_used": sorted(gamma.colors[a] for a in self.arc_ids(t)),
        }


def is_arborescence(t: Tournament, tree: Arborescence) -> bool:
    """Independent validity check: n-1 host arcs, in-degree one off the root,
    everything reachable from the root."""
    n = t.n
    if len(tree.parent) != n or not 0 <= tree.root < n or tree.parent[tree.root] is not None:
        return False
    arcs = tree.tree_arcs()
    if len(arcs) != n - 1:
        return False
    if not all(0 <= u < n and u != v and t.has_arc(u, v) for u, v in arcs):
        return False
    children: list[list[int]] = [[] for _ in range(n)]
    for u, v in arcs:
        children[u].append(v)
    seen = {tree.root}
    stack = [tree.root]
    while stack:
        for v in children[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


@dataclass(frozen=True)
class SearchOutcome:
    found: bool
    witness: Arborescence | None = None
    nodes_expanded: int = 0
    prunes: int = 0
    exhausted: bool = False

    @property
    def status(self) -> str:
        if self.exhausted:
            return "inconclusive"
        return "found" if self.found else "none"


class _BudgetExhausted(Exception):
    pass


def has_rainbow_arborescence(
    t: Tournament, gamma: ArcColoring, budget: int | None = None
) -> SearchOutcome:
    """Decide whether some spanning out-tree of ``t`` is rainbow under ``gamma``.

    Depth-first growth of a partial tree from each candidate root (largest
    out-degree first).  A search state is the pair (reached vertices, used
    colors); it does not depend on the root, so failed states are shared
    across roots.  Frontier arcs are tried scarcest color first.  A state is
    pruned when some unreached vertex has no in-arc of an unused color, or
    when fewer unused colors enter the unreached set than it has vertices.

    ``budget`` caps node expansions; running out gives ``exhausted=True``,
    which is distinct from a proven absence.
    """
    n = t.n
    if gamma.m != t.m:
        raise DomainError(f"coloring has {gamma.m} entries, tournament has {t.m} arcs")
    if n == 1:
        return SearchOutcome(True, Arborescence(0, (None,)))
    if gamma.k < n - 1:
        return SearchOutcome(False, prunes=1)

    colors = gamma.colors
    into: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for a, (u, v) in enumerate(t.arcs):
        into[v].append((u, 1 << colors[a], a))
    full = (1 << n) - 1
    verts = range(n)
    dead: set[tuple[int, int]] = set()
    chosen: list[tuple[int, int]] = []
    nodes = 0
    prunes = 0

    def extend(reached: int, used: int) -> bool:
        nonlocal nodes, prunes
        if reached == full:
            return True
        if (reached, used) in dead:
            return False
        nodes += 1
        if budget is not None and nodes > budget:
            raise _BudgetExhausted
        need = 0
        avail = 0
        frontier = []
        for v in verts:
            if reached >> v & 1:
                continue
            need += 1
            vmask = 0
            for u, cb, _ in into[v]:
                if not used & cb:
                    vmask |= cb
                    if reached >> u & 1:
                        frontier.append((cb, v, u))
            if not vmask:
                break
            avail |= vmask
        else:
            vmask = 1
        if not vmask or not frontier or avail.bit_count() < need:
            prunes += 1
            dead.add((reached, used))
            return False
        if len(frontier) > 1:
            scarcity: dict[int, int] = {}
            for cb, _, _ in frontier:
                scarcity[cb] = scarcity.get(cb, 0) + 1
            frontier.sort(key=lambda f: (scarcity[f[0]], f[1], f[2]))
        for cb, v, u in frontier:
            chosen.append((u, v))
            if extend(reached | 1 << v, used | cb):
                return True
            chosen.pop()
        dead.add((reached, used))
        return False

    out = t.out_masks
    roots = sorted(verts, key=lambda v: (-out[v].bit_count(), v))
    try:
        for r in roots:
            if extend(1 << r, 0):
                tree = Arborescence.from_arcs(n, r, chosen)
                return SearchOutcome(True, tree, nodes, prunes)
    except _BudgetExhausted:
        return SearchOutcome(False, None, nodes, prunes, exhausted=True)
    return SearchOutcome(False, None, nodes, prunes)


def enumerate_arborescences(
    t: Tournament, root: int, cap: int = ENUM_CAP
) -> Iterator[Arborescence]:
    """Every spanning out-tree rooted at ``root``, each exactly once.

    Parents are assigned to non-root vertices in index order, each choice
    ranging over in-neighbors in index order; a choice closing a cycle is
    rejected immediately.
    """
    n = t.n
    if n > cap:
        raise ResourceError(f"arborescence enumeration capped at n={cap}, got n={n}")
    t._check_vertex(root)
    in_nbrs = [sorted(t.arcs[a][0] for a in t.in_arcs[v]) for v in range(n)]
    order = [v for v in range(n) if v != root]
    parent: list[int | None] = [None] * n

    def closes_cycle(v: int) -> bool:
        u = parent[v]
        while u is not None:
            if u == v:
                return True
            u = parent[u]
        return False

    def assign(i: int) -> Iterator[Arborescence]:
        if i == len(order):
            yield Arborescence(root, tuple(parent))
            return
        v = order[i]
        for p in in_nbrs[v]:
            parent[v] = p
            if not closes_cycle(v):
                yield from assign(i + 1)
        parent[v] = None

    yield from assign(0)


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    a = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[-1][-1]


def count_arborescences(t: Tournament, root: int) -> int:
    """Out-trees rooted at ``root`` by the directed matrix-tree theorem."""
    t._check_vertex(root)
    n = t.n
    lap = [[0] * n for _ in range(n)]
    for u, v in t.arcs:
        lap[v][v] += 1
        lap[u][v] -= 1
    keep = [v for v in range(n) if v != root]
    return bareiss_determinant([[lap[i][j] for j in keep] for i in keep])


def rainbow_exists_bruteforce(t: Tournament, gamma: ArcColoring) -> bool:
    """Oracle: scan every arborescence of every root for distinct colors."""
    n = t.n
    for r in range(n):
        for tree in enumerate_arborescences(t, r):
            cols = {gamma.colors[arc_id(n, u, v)] for u, v in tree.tree_arcs()}
            if len(cols) == n - 1:
                return True
    return False


@dataclass(frozen=True)
class ProofDigraph:
    arcs: tuple[int, ...]
    anchor_pair: tuple[int, int]
    k_xy: int
    total_colors: int = field(default=0)

    def pairs(self, t: Tournament) -> list[tuple[int, int]]:
        return [t.arcs[a] for a in self.arcs]


def proof_digraph(t: Tournament, gamma: ArcColoring, x: int, y: int) -> ProofDigraph:
    """Greedy maximal heterochromatic subdigraph containing x->y and no other
    in-arc of x or y.  Arcs are scanned in arc-id order and kept when their
    color is still unused."""
    if gamma.m != t.m:
        raise DomainError("coloring does not match tournament")
    t._check_vertex(x)
    t._check_vertex(y)
    if x == y or not t.has_arc(x, y):
        raise DomainError(f"({x}, {y}) is not an arc of the tournament")
    anchor = arc_id(t.n, x, y)
    used = {gamma.colors[anchor]}
    kept = [anchor]
    for a, (_, v) in enumerate(t.arcs):
        if v in (x, y):
            continue
        c = gamma.colors[a]
        if c not in used:
            used.add(c)
            kept.append(a)
    kept.sort()
    return ProofDigraph(tuple(kept), (x, y), gamma.k - len(kept), gamma.k)
