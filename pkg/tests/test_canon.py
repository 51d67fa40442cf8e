import random
from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, random_graph
from flagtorsion.canon import (
    CanonicalSet,
    are_isomorphic,
    automorphism_orbits,
    build_canonical_set,
    canonical_form,
    canonical_graph,
    canonical_relations,
    count_connected_graphs,
    count_graphs,
    generate_graphs,
    iter_graphs,
)
from flagtorsion.graph import Graph, from_graph6, is_connected, to_graph6

ALL_GRAPHS = [1, 1, 2, 4, 11, 34, 156, 1044, 12346]
CONNECTED = [1, 1, 1, 2, 6, 21, 112, 853, 11117]


def brute_canon(g: Graph) -> str:
    return min(to_graph6(g.relabel(p)) for p in permutations(range(g.n)))


@settings(max_examples=200)
@given(graphs(min_n=1, max_n=12), st.randoms(use_true_random=False))
def test_invariant_under_relabelling(g, r):
    perm = list(range(g.n))
    r.shuffle(perm)
    assert canonical_form(g.relabel(perm)) == canonical_form(g)


@settings(max_examples=100)
@given(graphs(min_n=1, max_n=12))
def test_canonical_graph_is_isomorphic_and_fixed(g):
    c = canonical_graph(g)
    assert canonical_form(c) == canonical_form(g)
    assert to_graph6(c).encode() == canonical_form(g)
    assert nx.is_isomorphic(nx.from_graph6_bytes(to_graph6(c).encode()),
                            nx.from_graph6_bytes(to_graph6(g).encode()))


def test_soundness_against_permutation_oracle():
    rng = random.Random(5)
    for n in range(1, 7):
        pool = [random_graph(rng, n, p) for p in (0.3, 0.5, 0.7) for _ in range(15)]
        for a in pool[:20]:
            for b in pool:
                same = brute_canon(a) == brute_canon(b)
                assert (canonical_form(a) == canonical_form(b)) == same


def test_separates_all_classes_up_to_seven_vertices():
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() >= 1]
    codes = {canonical_form(from_graph6(nx.to_graph6_bytes(h, header=False).strip())) for h in atlas}
    assert len(codes) == len(atlas) == 1252


def test_orbits():
    assert automorphism_orbits(Graph.path(4)) == [0, 1, 1, 0]
    assert automorphism_orbits(Graph.cycle(7)) == [0] * 7
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert automorphism_orbits(star) == [0, 1, 1, 1, 1]


def test_relation_canon_distinguishes_direction():
    up = [0b10, 0]
    down = [0, 0b01]
    a = canonical_relations([up, down]).code
    b = canonical_relations([[0, 0b01], [0b10, 0]]).code
    assert a == b
    chain3 = canonical_relations([[0b110, 0b100, 0], [0, 0b001, 0b011]]).code
    v_shape = canonical_relations([[0b110, 0, 0], [0, 0b001, 0b001]]).code
    assert chain3 != v_shape


@pytest.mark.parametrize("n", range(1, 9))
def test_generation_counts(n):
    assert generate_graphs(n, connected=False).emitted == ALL_GRAPHS[n]
    assert generate_graphs(n).emitted == CONNECTED[n]


def test_generation_matches_atlas():
    for n in range(1, 8):
        atlas = {canonical_form(from_graph6(nx.to_graph6_bytes(h, header=False).strip()))
                 for h in nx.graph_atlas_g() if h.number_of_nodes() == n}
        ours = [canonical_form(g) for g in iter_graphs(n, connected=False)]
        assert len(ours) == len(set(ours))
        assert set(ours) == atlas


def test_formula_counts():
    assert [count_graphs(n) for n in range(9)] == ALL_GRAPHS
    assert [count_connected_graphs(n) for n in range(1, 9)] == CONNECTED[1:]
    assert count_connected_graphs(9) == 261080
    assert count_connected_graphs(10) == 11716571
    assert count_connected_graphs(11) == 1006700565
    assert count_connected_graphs(12) == 164059830476


@pytest.mark.parametrize("n, dmin, dmax", [(8, 4, 4), (8, 2, 5), (9, 4, 5), (7, 0, 3)])
def test_degree_bounds_equal_filtering(n, dmin, dmax):
    bounded = build_canonical_set(iter_graphs(n, dmin, dmax))
    filtered = build_canonical_set(
        g for g in iter_graphs(n) if all(dmin <= d <= dmax for d in g.degrees())
    ) if n <= 8 else None
    if filtered is not None:
        assert bounded.codes == filtered.codes
    assert all(is_connected(from_graph6(c)) for c in bounded)


def test_tame_nine_matches_filtered_all_connected():
    got = []
    generate_graphs(9, 4, 5, got.append)
    assert len(got) == 634
    kept = []
    generate_graphs(9, sink=lambda g: kept.append(g) if all(4 <= d <= 5 for d in g.degrees()) else None)
    assert build_canonical_set(got).codes == build_canonical_set(kept).codes


def test_split_partition_covers_everything():
    whole = generate_graphs(8, 2, 6).emitted
    parts = [generate_graphs(8, 2, 6, res=r, mod=3).emitted for r in range(3)]
    assert sum(parts) == whole
    ranged = generate_graphs(8, 2, 6, start_subtree=0, stop_subtree=5).emitted
    ranged += generate_graphs(8, 2, 6, start_subtree=5).emitted
    assert ranged == whole


def test_degenerate_bounds_are_empty():
    assert generate_graphs(6, 4, 3).emitted == 0
    assert generate_graphs(5, 5, 6).emitted == 0
    assert generate_graphs(1).emitted == 1
    with pytest.raises(ValueError):
        generate_graphs(17)


def test_canonical_set_files(tmp_path):
    c8 = CanonicalSet(canonical_form(g) for g in iter_graphs(5, connected=False))
    assert len(c8) == 34
    path = tmp_path / "set.g6"
    c8.save(path)
    lines = path.read_bytes().splitlines()
    assert lines == sorted(lines)
    loaded = CanonicalSet.load(path)
    assert loaded.codes == c8.codes
    c4_plus_one = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert c4_plus_one in loaded
    assert Graph.complete(6) not in loaded


def test_are_isomorphic():
    assert are_isomorphic(Graph.cycle(6), Graph.cycle(6).relabel([3, 1, 4, 0, 5, 2]))
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert not are_isomorphic(Graph.cycle(6), two_triangles)
    with pytest.raises(ValueError):
        canonical_form(Graph.empty(0))
