"""Recognise RP^2 among the torsion complexes.

A clique complex is labelled by the first test it passes:

1. it is itself a closed connected non-orientable surface with Euler
   characteristic 1 (a triangulated RP^2);
2. a deterministic sequence of elementary collapses reduces it to one;
3. its homology is that of RP^2 v S^1 (H0 = Z, H1 = Z + Z/2, H2 = 0).

The third label is homology-level evidence only.
"""

from __future__ import annotations

import enum
from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .graph import Graph, to_graph6
from .homology import HomologyGroup, SimplicialComplex, clique_complex, homology


class ClassLabel(enum.Enum):
    RP2_HOMEOMORPHIC = "RP2_HOMEOMORPHIC"
    COLLAPSES_TO_RP2 = "COLLAPSES_TO_RP2"
    RP2_WEDGE_S1_HOMOLOGY = "RP2_WEDGE_S1_HOMOLOGY"
    OTHER = "OTHER"


@dataclass(frozen=True)
class SurfaceReport:
    is_pure_2d: bool
    is_closed_surface: bool
    orientable: bool
    euler: int
    connected: bool

    @property
    def is_rp2(self) -> bool:
        return self.is_closed_surface and self.connected and not self.orientable and self.euler == 1


def _cycle_graph_is_single_cycle(edges: list[tuple[int, int]]) -> bool:
    nbrs: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    if not nbrs or any(len(v) != 2 for v in nbrs.values()):
        return False
    start = next(iter(nbrs))
    seen = {start}
    todo = [start]
    while todo:
        for u in nbrs[todo.pop()]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return len(seen) == len(nbrs)


def _connected(facets: Iterable[tuple[int, ...]]) -> bool:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in facets:
        for v in f[1:]:
            parent[find(v)] = find(f[0])
        find(f[0])
    return len({find(v) for v in parent}) <= 1


def _orientable(triangles: list[tuple[int, ...]]) -> bool:
    """Propagate orientations across shared edges; assumes every edge has <= 2 triangles."""
    by_edge: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, t in enumerate(triangles):
        for e in combinations(t, 2):
            by_edge[e].append(i)
    # orientation[i] = +1 keeps the sorted order (a, b, c), -1 reverses it
    orientation: dict[int, int] = {}
    for seed in range(len(triangles)):
        if seed in orientation:
            continue
        orientation[seed] = 1
        todo = deque([seed])
        while todo:
            i = todo.popleft()
            for e in combinations(triangles[i], 2):
                for j in by_edge[e]:
                    if j == i:
                        continue
                    # the shared edge must be traversed in opposite directions
                    want = -orientation[i] * _edge_sign(triangles[i], e) * _edge_sign(triangles[j], e)
                    if j not in orientation:
                        orientation[j] = want
                        todo.append(j)
                    elif orientation[j] != want:
                        return False
    return True


def _edge_sign(tri: tuple[int, ...], edge: tuple[int, int]) -> int:
    """+1 if the sorted triangle boundary runs along ``edge`` as a -> b, else -1."""
    a, b, c = tri
    cycle = [(a, b), (b, c), (c, a)]
    return 1 if edge in cycle else -1


def surface_check(c: SimplicialComplex) -> SurfaceReport:
    facets = c.facets
    pure = bool(facets) and all(len(f) == 3 for f in facets)
    vertices = {v for f in facets for v in f}
    euler = c.euler_characteristic()
    connected = _connected(facets)
    if not pure:
        return SurfaceReport(False, False, False, euler, connected)
    per_edge: dict[tuple[int, int], int] = defaultdict(int)
    for t in facets:
        for e in combinations(t, 2):
            per_edge[e] += 1
    closed = all(k == 2 for k in per_edge.values())
    if closed:
        links: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for t in facets:
            for v in t:
                links[v].append(tuple(u for u in t if u != v))
        closed = all(_cycle_graph_is_single_cycle(links[v]) for v in vertices)
    orientable = closed and _orientable(list(facets))
    return SurfaceReport(True, closed, orientable, euler, connected)


# ---------------------------------------------------------------- collapses


def _closure(c: SimplicialComplex) -> set[tuple[int, ...]]:
    faces: set[tuple[int, ...]] = set()
    for f in c.facets:
        for k in range(1, len(f) + 1):
            faces.update(combinations(f, k))
    return faces


def _cofaces(faces: set[tuple[int, ...]]) -> dict[tuple[int, ...], set[tuple[int, ...]]]:
    up: dict[tuple[int, ...], set[tuple[int, ...]]] = {f: set() for f in faces}
    for f in faces:
        if len(f) > 1:
            for i in range(len(f)):
                up[f[:i] + f[i + 1:]].add(f)
    return up


def _facets_of(faces: set[tuple[int, ...]], n: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets(faces, n)


def collapse_sequence(c: SimplicialComplex):
    """Greedy elementary collapses; returns (remaining faces, removed (free, coface) pairs).

    At each step the lexicographically least free face is collapsed.
    """
    faces = _closure(c)
    up = _cofaces(faces)
    free = {f for f, cof in up.items() if len(cof) == 1}
    pairs = []
    while free:
        sigma = min(free)
        (tau,) = up[sigma]
        for f in (tau, sigma):
            faces.discard(f)
            free.discard(f)
            for i in range(len(f)) if len(f) > 1 else ():
                sub = f[:i] + f[i + 1:]
                up[sub].discard(f)
                k = len(up[sub])
                if k == 1 and sub in faces:
                    free.add(sub)
                else:
                    free.discard(sub)
            del up[f]
        pairs.append((sigma, tau))
    return faces, pairs


def greedy_collapse(c: SimplicialComplex) -> SimplicialComplex:
    """Collapse free faces, least first, until none remain."""
    faces, _ = collapse_sequence(c)
    return _facets_of(faces, c.n)


def free_faces(c: SimplicialComplex) -> list[tuple[int, ...]]:
    up = _cofaces(_closure(c))
    return sorted(f for f, cof in up.items() if len(cof) == 1)


def collapse_to_rp2(c: SimplicialComplex, depth: int = 2) -> SimplicialComplex | None:
    """Find a collapse of ``c`` onto a triangulated RP^2, greedy first.

    If the greedy core is not RP^2, every free face is tried as the next move
    (then greedy), recursively up to ``depth`` forced moves.
    """
    core = greedy_collapse(c)
    if surface_check(core).is_rp2:
        return core
    if depth <= 0:
        return None
    for f in free_faces(c):
        nxt = _single_collapse(c, f)
        found = collapse_to_rp2(nxt, depth - 1)
        if found is not None:
            return found
    return None


def _single_collapse(c: SimplicialComplex, sigma: tuple[int, ...]) -> SimplicialComplex:
    faces = _closure(c)
    up = _cofaces(faces)
    if len(up[sigma]) != 1:
        raise ValueError(f"{sigma} is not a free face")
    (tau,) = up[sigma]
    faces -= {sigma, tau}
    return _facets_of(faces, c.n)


# ---------------------------------------------------------------- labels


RP2_HOMOLOGY = (HomologyGroup(1), HomologyGroup(0, (2,)), HomologyGroup(0))
RP2_WEDGE_S1 = (HomologyGroup(1), HomologyGroup(1, (2,)), HomologyGroup(0))


def homology_signature(c: SimplicialComplex) -> tuple[HomologyGroup, HomologyGroup, HomologyGroup]:
    return homology(c, 0), homology(c, 1), homology(c, 2)


def classify_complex(g: Graph, backtrack_depth: int = 2) -> ClassLabel:
    cl = clique_complex(g)
    if surface_check(cl).is_rp2:
        return ClassLabel.RP2_HOMEOMORPHIC
    signature = homology_signature(cl)
    # collapses preserve homology, so only RP^2-like complexes can collapse onto RP^2
    if signature == RP2_HOMOLOGY and collapse_to_rp2(cl, backtrack_depth) is not None:
        return ClassLabel.COLLAPSES_TO_RP2
    if signature == RP2_WEDGE_S1:
        return ClassLabel.RP2_WEDGE_S1_HOMOLOGY
    return ClassLabel.OTHER


def classification_row(g: Graph) -> str:
    """One TSV line: graph6, label, H0/H1/H2, surface flags of the clique complex."""
    cl = clique_complex(g)
    rep = surface_check(cl)
    h = homology_signature(cl)
    flags = f"pure2d={int(rep.is_pure_2d)},closed={int(rep.is_closed_surface)},orientable={int(rep.orientable)},euler={rep.euler}"
    return "\t".join([to_graph6(g), classify_complex(g).value, str(h[0]), str(h[1]), str(h[2]), flags])


# ---------------------------------------------------------------- reference complexes


def icosahedron_rp2() -> SimplicialComplex:
    """Six-vertex RP^2: the icosahedron with antipodal vertices identified."""
    phi = (1 + 5**0.5) / 2
    pts = []
    for a in (-1, 1):
        for b in (-phi, phi):
            pts += [(0, a, b), (a, b, 0), (b, 0, a)]
    pts = np.array(pts)
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    near = np.isclose(dist, 2.0)
    antipode = [int(np.argmin(np.linalg.norm(pts + p, axis=1))) for p in pts]
    cls: dict[int, int] = {}
    for i in range(12):
        if i not in cls:
            cls[i] = cls[antipode[i]] = len(cls) // 2
    tris = set()
    for a, b, c in combinations(range(12), 3):
        if near[a, b] and near[b, c] and near[a, c]:
            tris.add(tuple(sorted((cls[a], cls[b], cls[c]))))
    return SimplicialComplex.from_facets(tris, 6)
