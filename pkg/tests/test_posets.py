from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagtorsion.canon import are_isomorphic
from flagtorsion.graph import Graph
from flagtorsion.posets import (
    Poset,
    comparability_graph,
    enumerate_posets,
    obstructs_comparability,
    poset_code,
    poset_levels,
    poset_report,
    relation_problem,
    verify_small_posets,
)


def natural_posets(n):
    """Every transitive relation i < j compatible with the order 0 < 1 < ... < n-1."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rel = {p for k, p in enumerate(pairs) if mask >> k & 1}
        if all((a, c) in rel for a, b in rel for b2, c in rel if b == b2):
            yield rel


def brute_classes(n):
    reps: dict[str, list[nx.DiGraph]] = {}
    for rel in natural_posets(n):
        d = nx.DiGraph()
        d.add_nodes_from(range(n))
        d.add_edges_from(rel)
        bucket = reps.setdefault(nx.weisfeiler_lehman_graph_hash(d, iterations=3), [])
        if not any(nx.is_isomorphic(d, e) for e in bucket):
            bucket.append(d)
    return sum(len(b) for b in reps.values())


@pytest.mark.parametrize("n", range(1, 7))
def test_counts_match_brute_force(n):
    assert enumerate_posets(n) == brute_classes(n)


def test_counts_up_to_seven():
    assert [len(level) for level in poset_levels(7)] == [1, 2, 5, 16, 63, 318, 2045]


def test_every_enumerated_relation_is_a_poset():
    for level in poset_levels(5):
        for p in level:
            assert relation_problem(p.n, p.leq) is None


def test_axioms():
    assert "reflexivity" in relation_problem(2, (0b01, 0b00))
    assert "antisymmetry" in relation_problem(2, (0b11, 0b11))
    assert "transitivity" in relation_problem(3, (0b011, 0b110, 0b100))
    with pytest.raises(ValueError):
        Poset(2, (0b11, 0b11))


def test_boolean_lattice_b2():
    b2 = Poset.from_relations(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    g = comparability_graph(b2)
    c4_with_chord = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    assert are_isomorphic(g, c4_with_chord)
    assert b2.upper_covers() == [[1, 2], [3], [3], []]


def test_text_round_trip():
    p = Poset.from_relations(5, [(0, 2), (1, 2), (2, 3), (2, 4)])
    assert Poset.from_text(p.to_text()) == p
    assert p.to_text().splitlines()[0] == "5"


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=10))
def test_isomorphic_posets_share_a_code(pairs):
    pairs = [(a, b) for a, b in pairs if a < b]
    p = Poset.from_relations(6, pairs)
    perm = [3, 5, 0, 4, 1, 2]
    q = Poset.from_relations(6, [(perm[a], perm[b]) for a, b in pairs])
    assert poset_code(p) == poset_code(q)
    assert not obstructs_comparability(comparability_graph(p))


def test_chain_and_antichain():
    assert are_isomorphic(comparability_graph(Poset.chain(5)), Graph.complete(5))
    assert comparability_graph(Poset.antichain(3)) == Graph.empty(3)
    assert poset_code(Poset.chain(4)) != poset_code(Poset.antichain(4))
    assert obstructs_comparability(Graph.cycle(5))


def test_small_report():
    report = poset_report(6)
    assert report.classes == [1, 2, 5, 16, 63, 318]
    assert report.torsion_free and not report.induced_c5
    assert verify_small_posets(5)
