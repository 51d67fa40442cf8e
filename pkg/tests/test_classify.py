from pathlib import Path

from flagtorsion.classify import (
    ClassLabel,
    classification_row,
    classify_complex,
    collapse_sequence,
    collapse_to_rp2,
    free_faces,
    greedy_collapse,
    icosahedron_rp2,
    surface_check,
)
from flagtorsion.graph import Graph, complement, read_graph6_file
from flagtorsion.homology import SimplicialComplex, clique_complex, homology_all

DATA = Path(__file__).parent / "data"
TETRA_BOUNDARY = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def flag_rp2() -> Graph:
    return next(read_graph6_file(DATA / "flag_rp2_n11.g6"))


def add_vertex(g: Graph, nbrs) -> Graph:
    return Graph.from_edges(g.n + 1, g.edges() + [(v, g.n) for v in nbrs])


def test_surface_reports():
    sphere = surface_check(SimplicialComplex.from_facets(TETRA_BOUNDARY))
    assert sphere.is_closed_surface and sphere.orientable and sphere.euler == 2
    assert not sphere.is_rp2
    rp2 = surface_check(icosahedron_rp2())
    assert rp2.is_closed_surface and not rp2.orientable and rp2.euler == 1 and rp2.is_rp2
    disk = surface_check(SimplicialComplex.from_facets([(0, 1, 2), (0, 2, 3)]))
    assert disk.is_pure_2d and not disk.is_closed_surface


def test_pinched_complex_is_not_a_surface():
    # two tetrahedron boundaries sharing a vertex: edges fine, vertex link is two cycles
    second = [tuple(v + 3 if v else 0 for v in f) for f in TETRA_BOUNDARY]
    rep = surface_check(SimplicialComplex.from_facets(TETRA_BOUNDARY + second))
    assert rep.is_pure_2d and not rep.is_closed_surface


def test_collapses():
    simplex = SimplicialComplex.from_facets([tuple(range(5))])
    assert greedy_collapse(simplex).facets == ((4,),)
    faces, pairs = collapse_sequence(simplex)
    assert len(faces) == 1 and len(pairs) == (31 - 1) // 2
    assert free_faces(icosahedron_rp2()) == []
    assert greedy_collapse(icosahedron_rp2()) == icosahedron_rp2()


def test_collapse_preserves_homology():
    g = complement(Graph.cycle(7))
    c = clique_complex(g)
    assert homology_all(greedy_collapse(c))[:2] == homology_all(c)[:2]


def test_flag_rp2_is_homeomorphic():
    g = flag_rp2()
    assert surface_check(clique_complex(g)).is_rp2
    assert classify_complex(g) is ClassLabel.RP2_HOMEOMORPHIC


def test_cone_over_a_triangle_collapses():
    g = flag_rp2()
    a = 0
    b = next(v for v in range(g.n) if g.has_edge(a, v))
    c = next(v for v in range(g.n) if g.has_edge(a, v) and g.has_edge(b, v))
    h = add_vertex(g, [a, b, c])
    assert not surface_check(clique_complex(h)).is_closed_surface
    assert collapse_to_rp2(clique_complex(h)) is not None
    assert classify_complex(h) is ClassLabel.COLLAPSES_TO_RP2


def test_wedge_with_circle():
    g = flag_rp2()
    # hang a 4-cycle 0-11-12-13-0 off vertex 0
    h = Graph.from_edges(14, g.edges() + [(0, 11), (11, 12), (12, 13), (13, 0)])
    assert classify_complex(h) is ClassLabel.RP2_WEDGE_S1_HOMOLOGY
    row = classification_row(h).split("\t")
    assert row[1:5] == ["RP2_WEDGE_S1_HOMOLOGY", "Z", "Z + Z/2", "0"]


def test_other():
    octahedron = complement(Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)]))
    assert classify_complex(octahedron) is ClassLabel.OTHER
    assert classify_complex(Graph.cycle(5)) is ClassLabel.OTHER
