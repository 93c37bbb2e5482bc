import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antiramsey import (
    ArcColoring,
    DomainError,
    ResourceError,
    Tournament,
    count_arborescences,
    delta3_minus,
    enumerate_arborescences,
    enumerate_colorings,
    enumerate_tournaments,
    extremal_coloring,
    h_value,
    has_rainbow_arborescence,
    proof_digraph,
    random_tournament,
    reachable_set,
)
from antiramsey.arborescence import (
    Arborescence,
    bareiss_determinant,
    is_arborescence,
    rainbow_exists_bruteforce,
)
from antiramsey.coloring import random_coloring
from antiramsey.tournament import make_rng


def subset_trees(t, root):
    """Oracle: all (n-1)-subsets of arcs forming an out-tree at root."""
    out = []
    for subset in itertools.combinations(t.arcs, t.n - 1):
        heads = [v for _, v in subset]
        if root in heads or len(set(heads)) != t.n - 1:
            continue
        if reachable_set(t.n, subset, root) == set(range(t.n)):
            out.append(frozenset(subset))
    return out


def validate_witness(t, gamma, tree):
    assert is_arborescence(t, tree)
    colors = [gamma.colors[a] for a in tree.arc_ids(t)]
    assert len(colors) == len(set(colors)) == t.n - 1


def test_enumeration_examples(cycle3, transitive3):
    trees = list(enumerate_arborescences(cycle3, 0))
    assert [tr.tree_arcs() for tr in trees] == [[(0, 1), (1, 2)]]
    assert len(list(enumerate_arborescences(transitive3, 0))) == 2
    assert list(enumerate_arborescences(transitive3, 1)) == []


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_subset_oracle(n):
    for t in enumerate_tournaments(n):
        for r in range(n):
            got = [frozenset(tr.tree_arcs()) for tr in enumerate_arborescences(t, r)]
            assert len(got) == len(set(got))
            assert set(got) == set(subset_trees(t, r))


def test_enumeration_cap():
    with pytest.raises(ResourceError):
        next(enumerate_arborescences(random_tournament(8, 0), 0))


def test_count_examples(cycle3, transitive3):
    assert [count_arborescences(cycle3, r) for r in range(3)] == [1, 1, 1]
    assert [count_arborescences(transitive3, r) for r in range(3)] == [2, 0, 0]


def test_count_matches_enumeration_iso_classes():
    for n in range(1, 7):
        for t in enumerate_tournaments(n, up_to_iso=True):
            for r in range(n):
                assert count_arborescences(t, r) == sum(1 for _ in enumerate_arborescences(t, r))


@settings(max_examples=50)
@given(st.integers(1, 30), st.integers(0, 2**63))
def test_some_root_has_a_tree(n, seed):
    t = random_tournament(n, seed)
    assert sum(count_arborescences(t, r) for r in range(n)) >= 1


def test_bareiss_known_values():
    assert bareiss_determinant([]) == 1
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == 0
    assert bareiss_determinant([[0, 2, 1], [3, 0, 0], [1, 1, 5]]) == -27
    m = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    assert bareiss_determinant(m) == -3


def test_rainbow_found_on_rainbow_coloring():
    for t in enumerate_tournaments(4):
        outcome = has_rainbow_arborescence(t, ArcColoring.rainbow(6))
        assert outcome.found
        validate_witness(t, ArcColoring.rainbow(6), outcome.witness)


def test_monochromatic_has_none(regular5):
    outcome = has_rainbow_arborescence(regular5, ArcColoring.monochromatic(10))
    assert not outcome.found and not outcome.exhausted


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_extremal_has_none(n):
    for t in enumerate_tournaments(n, up_to_iso=True):
        for tri in delta3_minus(t)[1]:
            assert not has_rainbow_arborescence(t, extremal_coloring(t, tri)).found


def test_trivial_orders():
    t1 = Tournament(1, 0)
    assert has_rainbow_arborescence(t1, ArcColoring(())).found
    t2 = Tournament(2, 1)
    outcome = has_rainbow_arborescence(t2, ArcColoring((0,)))
    assert outcome.found and outcome.witness.root == 0


def test_length_mismatch(cycle3):
    with pytest.raises(DomainError):
        has_rainbow_arborescence(cycle3, ArcColoring.rainbow(4))


def test_budget_zero_is_inconclusive(regular5):
    gamma = extremal_coloring(regular5, (0, 1, 2))
    outcome = has_rainbow_arborescence(regular5, gamma, budget=0)
    assert outcome.exhausted and not outcome.found
    assert outcome.status == "inconclusive"


def test_search_deterministic():
    t = random_tournament(6, 77)
    gamma = random_coloring(t.m, h_value(t) - 1, make_rng(3))
    assert has_rainbow_arborescence(t, gamma) == has_rainbow_arborescence(t, gamma)


@pytest.mark.parametrize("n", [3, 4])
def test_search_agrees_with_oracle_exhaustive(n):
    for t in enumerate_tournaments(n, up_to_iso=True):
        for k in range(1, t.m + 1):
            for gamma in enumerate_colorings(t.m, k):
                outcome = has_rainbow_arborescence(t, gamma)
                assert outcome.found == rainbow_exists_bruteforce(t, gamma)
                if outcome.found:
                    validate_witness(t, gamma, outcome.witness)


def test_witness_json(transitive4):
    gamma = ArcColoring.rainbow(6)
    tree = has_rainbow_arborescence(transitive4, gamma).witness
    obj = json.loads(json.dumps(tree.to_json(transitive4, gamma)))
    assert set(obj) == {"root", "parents", "colors_used"}
    assert Arborescence(obj["root"], tuple(obj["parents"])) == tree
    assert len(obj["colors_used"]) == 3


def test_is_arborescence_rejects():
    t = Tournament.transitive(3)
    assert not is_arborescence(t, Arborescence(0, (None, 0, None)))
    assert not is_arborescence(t, Arborescence(0, (None, 2, 0)))  # 2->1 is not an arc
    assert is_arborescence(t, Arborescence(0, (None, 0, 1)))


def test_proof_digraph_rainbow(transitive4):
    gamma = ArcColoring.rainbow(6)
    d = proof_digraph(transitive4, gamma, 1, 2)
    # In-arcs of 1 and 2 other than 1->2: 0->1 and 0->2.
    assert d.k_xy == 2 == transitive4.in_degree(1) + transitive4.in_degree(2) - 1
    assert set(d.pairs(transitive4)) == {(1, 2), (0, 3), (1, 3), (2, 3)}


def test_proof_digraph_monochromatic(regular5):
    d = proof_digraph(regular5, ArcColoring.monochromatic(10), 0, 1)
    assert d.pairs(regular5) == [(0, 1)]
    assert d.k_xy == 0


def test_proof_digraph_extremal(regular5):
    gamma = extremal_coloring(regular5, (0, 1, 2))
    d = proof_digraph(regular5, gamma, 0, 1)
    assert len(d.arcs) == 10 - 6 + 1 == h_value(regular5) - 1
    assert d.k_xy == 0
    reach = reachable_set(5, d.pairs(regular5), 0)
    assert reach != set(range(5)) and 2 not in reach


def test_proof_digraph_not_an_arc(regular5):
    with pytest.raises(DomainError):
        proof_digraph(regular5, ArcColoring.rainbow(10), 1, 0)


@settings(max_examples=100)
@given(st.integers(3, 7), st.integers(0, 2**63), st.data())
def test_proof_digraph_maximal(n, seed, data):
    t = random_tournament(n, seed)
    k = data.draw(st.integers(1, t.m))
    gamma = random_coloring(t.m, k, make_rng(seed))
    x, y = data.draw(st.sampled_from(t.arcs))
    d = proof_digraph(t, gamma, x, y)
    colors = [gamma.colors[a] for a in d.arcs]
    assert len(colors) == len(set(colors))
    pairs = d.pairs(t)
    assert (x, y) in pairs
    assert all(v not in (x, y) or (u, v) == (x, y) for u, v in pairs)
    for a, (_, v) in enumerate(t.arcs):
        if v not in (x, y) and a not in d.arcs:
            assert gamma.colors[a] in colors
    # k_xy counts colors living only on in-arcs of x, y other than x->y.
    eligible = {gamma.colors[a] for a, (_, v) in enumerate(t.arcs) if v not in (x, y)}
    eligible.add(gamma.colors[t.arcs.index((x, y))])
    assert d.k_xy == gamma.k - len(eligible)
