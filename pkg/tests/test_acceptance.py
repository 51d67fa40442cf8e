"""Acceptance criteria, one PASS/FAIL line each.

The n = 11 row is opt-in: point FLAGTORSION_N11_DIR at a finished run
directory (``scripts/run_extended.py 11 DIR``) to have its row checked. The
four n = 11 survivors themselves ship in ``tests/data`` and are always checked.
Set FLAGTORSION_FULL=1 to generate the n = 10 connected column instead of
taking it from the cycle-index count.
"""

import os
import random
from collections import Counter
from pathlib import Path

import pytest

from oracles import naive_smith
from flagtorsion.canon import canonical_form, generate_graphs, iter_graphs
from flagtorsion.classify import ClassLabel, classify_complex
from flagtorsion.graph import Graph, has_induced_c5, read_graph6_file
from flagtorsion.homology import (
    IntMatrix,
    SimplicialComplex,
    boundary_matrix,
    clique_complex,
    h1_clique,
    h1_nontrivial,
    homology,
    homology_all,
    smith_normal_form,
)
from flagtorsion.pipeline import Manifest, STAGES, survivor_check, run_stage_table
from flagtorsion.posets import poset_report

DATA = Path(__file__).parent / "data"

TABLE = {
    8: (11117, 6, 0, 0, 0),
    9: (261080, 634, 2, 0, 0),
    10: (11716571, 194917, 492, 0, 0),
}
ROW_11 = (1006700565, 64434518, 207839, 4, 4)


@pytest.fixture
def report(criterion):
    def check(name: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        criterion(line)
        assert ok, line

    def skip(name: str, why: str) -> None:
        criterion(f"[SKIP] {name}: {why}")
        pytest.skip(why)

    check.skip = skip
    return check


@pytest.mark.parametrize("n", sorted(TABLE))
def test_table_row(n, tmp_path, report):
    source = "generate" if n <= 9 or os.environ.get("FLAGTORSION_FULL") else "formula"
    stats = run_stage_table(n, tmp_path, connected_source=source, fuse_links=n >= 10)
    got = stats.row()[1:]
    report(f"table row n={n} (connected via {source})", got == TABLE[n], f"{got}")


def n11_survivors() -> list[Graph]:
    return list(read_graph6_file(DATA / "irreducible_n11.g6"))


def test_n11_survivors(report):
    graphs = n11_survivors()
    labels = Counter(classify_complex(g) for g in graphs)
    ok = (
        len(graphs) == 4
        and all(has_induced_c5(g) for g in graphs)
        and labels == {ClassLabel.RP2_HOMEOMORPHIC: 2, ClassLabel.COLLAPSES_TO_RP2: 2}
    )
    detail = ", ".join(f"{k.value} x{v}" for k, v in sorted(labels.items(), key=lambda kv: kv[0].value))
    report("n=11 survivors: induced C5 in all, 2 homeomorphic + 2 collapsing", ok, detail)


def test_n11_row(report):
    run_dir = os.environ.get("FLAGTORSION_N11_DIR")
    if not run_dir:
        report.skip("table row n=11", "set FLAGTORSION_N11_DIR to a finished extended run")
    m = Manifest(Path(run_dir) / "manifest_n11.txt")
    got = tuple(int(m.get(f"{s}.count", -1)) for s in STAGES)
    survivors = sorted(canonical_form(g) for g in read_graph6_file(Path(run_dir) / "irreducible_n11.g6"))
    shipped = sorted(canonical_form(g) for g in n11_survivors())
    report("table row n=11 (extended)", got == ROW_11 and survivors == shipped, f"{got}")


def test_c8_link_classes(report):
    seen = nontrivial = 0

    def sink(g):
        nonlocal seen, nontrivial
        seen += 1
        nontrivial += h1_nontrivial(g)

    generate_graphs(8, sink=sink, connected=False)
    report("C8: classes on 8 vertices / with nontrivial H1", (seen, nontrivial) == (12346, 7702),
           f"{seen} / {nontrivial}")


def test_smith_against_naive(report):
    rng = random.Random(2024)
    bad = 0
    for _ in range(10_000):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        bad += smith_normal_form(IntMatrix.from_rows(a))[1] != naive_smith(a)
    report("Smith form vs naive oracle, 10^4 matrices up to 8x8", bad == 0, f"{bad} mismatches")


def test_chain_complex_identities(report):
    failures = Counter()
    total = 0
    for n in range(1, 7):
        for g in iter_graphs(n, connected=False):
            total += 1
            c = clique_complex(g)
            for k in range(2, c.dim + 1):
                if not (boundary_matrix(k - 1, c) @ boundary_matrix(k, c)).is_zero():
                    failures["boundary"] += 1
            hs = homology_all(c)
            if c.euler_characteristic() != sum((-1) ** k * h.betti for k, h in enumerate(hs)):
                failures["euler"] += 1
            h1 = homology(c, 1)
            if homology(clique_complex(g, max_dim=2), 1) != h1 or h1_clique(g) != h1:
                failures["truncation"] += 1
    report("boundary^2 = 0, Euler, H1 truncation for all graphs n<=6", not failures,
           f"{total} graphs, failures {dict(failures)}")


def test_max_degree_forces_torsion_free(report):
    bad = checked = 0
    for n in range(1, 8):
        for g in iter_graphs(n, connected=False):
            if max(g.degrees()) >= n - 3:
                checked += 1
                bad += h1_clique(g).has_torsion
    report("max degree >= n-3 gives torsion-free H1, all graphs n<=7", bad == 0, f"{checked} checked")


def test_rp2_six(report):
    rp2 = SimplicialComplex.from_facets(
        [(0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (0, 4, 5),
         (1, 2, 5), (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 3, 5)]
    )
    hs = [str(h) for h in homology_all(rp2)]
    report("RP2_6 homology Z, Z/2, 0", hs == ["Z", "Z/2", "0"], ", ".join(hs))


def test_canonical_invariance(report):
    rng = random.Random(7)
    bad = 0
    for n in range(1, 13):
        for _ in range(1000):
            p = rng.random()
            g = Graph.from_edges(n, [(u, v) for v in range(n) for u in range(v) if rng.random() < p])
            perm = list(range(n))
            rng.shuffle(perm)
            bad += canonical_form(g) != canonical_form(g.relabel(perm))
    report("canonical form invariant, 10^3 (graph, perm) pairs per n<=12", bad == 0, f"{bad} mismatches")


def test_torsion_survivors_pass_structure_check(report):
    graphs = n11_survivors() + list(read_graph6_file(DATA / "flag_rp2_n11.g6"))
    problems = []
    for g in graphs:
        try:
            survivor_check(g)
        except AssertionError as exc:
            problems.append(str(exc))
    report("connected/tame/cyclic-links cross-check on torsion survivors", not problems,
           f"{len(graphs)} graphs" if not problems else problems[0])


def test_poset_counts(report):
    result = poset_report(8)
    counts = result.classes
    ok = counts == [1, 2, 5, 16, 63, 318, 2045, 16999] and result.torsion_free and not result.induced_c5
    report("poset classes n=1..8 and no torsion in their order complexes", ok, " ".join(map(str, counts)))
