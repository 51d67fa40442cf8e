"""Canonical labelling and isomorph-free generation of small graphs.

Canonical labelling follows the individualise/refine scheme: an equitable
partition is refined from an invariant colouring, and a search tree over
individualised vertices is walked with automorphism pruning. The canonical
form is the lexicographically least graph6 string among the leaves.

Generation is canonical augmentation by one vertex at a time (McKay 1998),
restricted to the hereditary family of graphs whose degrees can still end
inside ``[dmin, dmax]``.
"""

from __future__ import annotations

import bisect
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Callable, Iterable, Sequence

from .graph import BIT_POSITIONS, Graph, _trusted, bits, component_count

CanonicalCode = bytes


# ---------------------------------------------------------------- refinement


def _refine(rels: Sequence[Sequence[int]], cells: list[int], splitters: Iterable[int]) -> list[int]:
    """Refine the ordered partition ``cells`` to the coarsest equitable one.

    ``rels`` is a list of adjacency-mask tables; with several tables (digraphs,
    posets) the split key is the vector of neighbour counts in each table.
    Fragments are ordered by key, so the result depends only on structure.
    """
    n = len(rels[0])
    pending = deque(splitters)
    queued = set(pending)
    single = len(rels) == 1
    adj = rels[0]
    base = n + 1
    while pending and len(cells) < n:
        w = pending.popleft()
        queued.discard(w)
        out: list[int] = []
        changed = False
        for x in cells:
            if not x & (x - 1):
                out.append(x)
                continue
            groups: dict[int, int] = {}
            if single:
                for v in BIT_POSITIONS[x]:
                    key = (adj[v] & w).bit_count()
                    groups[key] = groups.get(key, 0) | (1 << v)
            else:
                for v in BIT_POSITIONS[x]:
                    key = 0
                    for r in rels:
                        key = key * base + (r[v] & w).bit_count()
                    groups[key] = groups.get(key, 0) | (1 << v)
            if len(groups) == 1:
                out.append(x)
                continue
            changed = True
            frags = [groups[k] for k in sorted(groups)]
            out.extend(frags)
            if x in queued:
                add = frags
            else:
                sizes = [f.bit_count() for f in frags]
                skip = sizes.index(max(sizes))
                add = frags[:skip] + frags[skip + 1:]
            for f in add:
                if f not in queued:
                    queued.add(f)
                    pending.append(f)
        if changed:
            cells = out
    return cells


# ---------------------------------------------------------------- leaf codes


def _graph_code(adj: Sequence[int], lab: Sequence[int]) -> int:
    """Integer whose bits, MSB first, are the graph6 payload bits of the relabelled graph."""
    n = len(lab)
    pos = [0] * n
    for i, v in enumerate(lab):
        pos[v] = i
    code = 0
    for j in range(1, n):
        col = 0
        for u in BIT_POSITIONS[adj[lab[j]]]:
            i = pos[u]
            if i < j:
                col |= 1 << (j - 1 - i)
        code = (code << j) | col
    return code


def _relation_code(rels: Sequence[Sequence[int]], lab: Sequence[int]) -> int:
    """Full-matrix code for directed relations, relation by relation, row-major."""
    n = len(lab)
    pos = [0] * n
    for i, v in enumerate(lab):
        pos[v] = i
    code = 0
    for r in rels:
        for i in range(n):
            row = 0
            for u in bits(r[lab[i]]):
                row |= 1 << (n - 1 - pos[u])
            code = (code << n) | row
    return code


def code_to_graph6(n: int, code: int) -> bytes:
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    code <<= 6 * nchars - nbits
    out = bytearray([n + 63])
    for k in range(nchars - 1, -1, -1):
        out.append((code >> (6 * k) & 63) + 63)
    return bytes(out)


# ---------------------------------------------------------------- search


@dataclass
class CanonResult:
    code: int
    lab: list[int]  # lab[i] = original vertex placed at canonical position i
    generators: list[tuple[int, ...]]
    orbits: list[int]  # orbits[v] = least vertex in the orbit of v

    @property
    def group_is_trivial(self) -> bool:
        return not self.generators


def _orbit_reps(n: int, gens: Iterable[Sequence[int]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(v) for v in range(n)]


class _Search:
    def __init__(self, rels: Sequence[Sequence[int]], code_fn: Callable[[Sequence[int]], int]):
        self.rels = rels
        self.n = len(rels[0])
        self.code_fn = code_fn
        self.gens: list[tuple[int, ...]] = []
        self.first_path: list[int] | None = None
        self.first_code = 0
        self.first_lab: list[int] = []
        self.best_code = 0
        self.best_lab: list[int] = []
        self.best_path: list[int] = []

    def run(self, cells: list[int]) -> CanonResult:
        cells = _refine(self.rels, cells, list(cells))
        self._visit(cells, [])
        return CanonResult(
            self.best_code, self.best_lab, self.gens, _orbit_reps(self.n, self.gens)
        )

    def _leaf(self, cells: list[int], path: list[int]) -> int | None:
        lab = [c.bit_length() - 1 for c in cells]
        code = self.code_fn(lab)
        if self.first_path is None:
            self.first_path = list(path)
            self.first_code = self.best_code = code
            self.first_lab = self.best_lab = lab
            self.best_path = list(path)
            return None
        if code == self.first_code:
            self._add_automorphism(self.first_lab, lab)
            return _common_prefix(path, self.first_path)
        if code == self.best_code:
            self._add_automorphism(self.best_lab, lab)
            return _common_prefix(path, self.best_path)
        if code < self.best_code:
            self.best_code = code
            self.best_lab = lab
            self.best_path = list(path)
        return None

    def _add_automorphism(self, src: list[int], dst: list[int]) -> None:
        perm = [0] * self.n
        for a, b in zip(src, dst):
            perm[a] = b
        self.gens.append(tuple(perm))

    def _visit(self, cells: list[int], path: list[int]) -> int | None:
        n = self.n
        if len(cells) == n:
            return self._leaf(cells, path)
        depth = len(path)
        t = -1
        size = n + 1
        for k, c in enumerate(cells):
            s = c.bit_count()
            if 1 < s < size:
                t, size = k, s
                if s == 2:
                    break
        target = cells[t]
        tried: list[int] = []
        orbits: list[int] | None = None
        ngens = -1
        for u in bits(target):
            if tried:
                if ngens != len(self.gens):
                    ngens = len(self.gens)
                    fixing = [g for g in self.gens if all(g[p] == p for p in path)]
                    orbits = _orbit_reps(n, fixing)
                if any(orbits[u] == orbits[w] for w in tried):
                    continue
            tried.append(u)
            low = 1 << u
            child = cells[:t] + [low, target ^ low] + cells[t + 1:]
            child = _refine(self.rels, child, [low])
            path.append(u)
            jump = self._visit(child, path)
            path.pop()
            if jump is not None and jump < depth:
                return jump
        return None


def _common_prefix(a: Sequence[int], b: Sequence[int]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def _cells_from_keys(keys: Sequence) -> list[int]:
    groups: dict = {}
    for v, key in enumerate(keys):
        groups[key] = groups.get(key, 0) | (1 << v)
    return [groups[k] for k in sorted(groups)]


def canonical_search(adj: Sequence[int], keys: Sequence | None = None) -> CanonResult:
    """Canonical labelling of an undirected graph given as masks.

    ``keys`` is an optional isomorphism-invariant vertex colouring; cells are
    ordered by key, so the last canonical vertex always has the largest key.
    """
    n = len(adj)
    if n == 0:
        return CanonResult(0, [], [], [])
    if keys is None:
        cells = _cells_from_keys([row.bit_count() for row in adj])
    else:
        cells = _cells_from_keys(keys)
    return _Search([adj], lambda lab: _graph_code(adj, lab)).run(cells)


def canonical_relations(rels: Sequence[Sequence[int]], keys: Sequence | None = None) -> CanonResult:
    """Canonical labelling of a structure made of several (possibly directed) relations."""
    n = len(rels[0])
    if n == 0:
        return CanonResult(0, [], [], [])
    if keys is None:
        keys = [tuple(r[v].bit_count() for r in rels) for v in range(n)]
    cells = _cells_from_keys(keys)
    return _Search(rels, lambda lab: _relation_code(rels, lab)).run(cells)


def canonical_int(adj: Sequence[int]) -> int:
    return canonical_search(adj).code


def canonical_form(g: Graph) -> CanonicalCode:
    """graph6 bytes of the canonically relabelled graph."""
    if g.n < 1:
        raise ValueError("canonical form is undefined for the empty graph")
    return code_to_graph6(g.n, canonical_search(g.adj).code)


def canonical_graph(g: Graph) -> Graph:
    res = canonical_search(g.adj)
    pos = [0] * g.n
    for i, v in enumerate(res.lab):
        pos[v] = i
    return g.relabel(pos)


def automorphism_orbits(g: Graph) -> list[int]:
    return canonical_search(g.adj).orbits


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges() != h.num_edges():
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)


# ---------------------------------------------------------------- lookup sets


class CanonicalSet:
    """Sorted, deduplicated canonical codes with binary-search membership."""

    def __init__(self, codes: Iterable[CanonicalCode] = ()):
        self.codes: list[CanonicalCode] = sorted(set(codes))

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def has_code(self, code: CanonicalCode) -> bool:
        i = bisect.bisect_left(self.codes, code)
        return i < len(self.codes) and self.codes[i] == code

    def __contains__(self, g: Graph) -> bool:
        return self.has_code(canonical_form(g))

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            for c in self.codes:
                fh.write(c + b"\n")

    @classmethod
    def load(cls, path) -> "CanonicalSet":
        with open(path, "rb") as fh:
            return cls(line.rstrip(b"\r\n") for line in fh if line.strip())


def build_canonical_set(graphs: Iterable[Graph]) -> CanonicalSet:
    return CanonicalSet(canonical_form(g) for g in graphs)


def contains(cset: CanonicalSet, g: Graph) -> bool:
    return g in cset


# ---------------------------------------------------------------- generation


@dataclass
class GenerationSummary:
    n: int
    dmin: int
    dmax: int
    connected: bool
    emitted: int = 0
    subtrees: int = 0  # split-level subtrees visited by this worker
    seconds: float = 0.0
    nodes: list[int] = field(default_factory=list)  # accepted graphs per level

    def merge(self, other: "GenerationSummary") -> "GenerationSummary":
        nodes = [a + b for a, b in zip(self.nodes, other.nodes)]
        return GenerationSummary(
            self.n, self.dmin, self.dmax, self.connected,
            self.emitted + other.emitted, self.subtrees + other.subtrees,
            self.seconds + other.seconds, nodes,
        )


def _mask_orbit(mask: int, gens: Sequence[Sequence[int]]) -> set[int]:
    orbit = {mask}
    todo = [mask]
    while todo:
        m = todo.pop()
        for g in gens:
            image = 0
            for u in bits(m):
                image |= 1 << g[u]
            if image not in orbit:
                orbit.add(image)
                todo.append(image)
    return orbit


class _Generator:
    def __init__(self, n, dmin, dmax, connected, sink, res, mod, split_level, start, stop, on_subtree):
        self.n = n
        self.dmin = dmin
        self.dmax = dmax
        self.connected = connected
        self.sink = sink
        self.res = res
        self.mod = mod
        self.split_level = split_level
        self.start = start
        self.stop = stop
        self.on_subtree = on_subtree
        self.subtree_index = 0
        self.summary = GenerationSummary(n, dmin, dmax, connected, nodes=[0] * (n + 1))

    def run(self) -> None:
        self._node([0], [0], ())

    def _node(self, adj: list[int], degs: list[int], gens: Sequence[tuple[int, ...]]) -> None:
        m = len(adj)
        self.summary.nodes[m] += 1
        if m == self.split_level:
            idx = self.subtree_index
            self.subtree_index += 1
            if idx % self.mod != self.res or not self.start <= idx < self.stop:
                return
            self.summary.subtrees += 1
            self._children(adj, degs, gens)
            if self.on_subtree is not None:
                self.on_subtree(idx, self.summary)
            return
        if m == self.n:
            if self.connected and component_count(adj, m) != 1:
                return
            self.summary.emitted += 1
            self.sink(_trusted(m, adj))
            return
        self._children(adj, degs, gens)

    def _children(self, adj: list[int], degs: list[int], gens) -> None:
        n, dmax = self.n, self.dmax
        m = len(adj)
        if m == n:
            # split level coincides with the leaf level
            self._leaf(adj)
            return
        lo = self.dmin - (n - m - 1)  # degree floor once the child has m+1 vertices
        must = forbid = 0
        for u in range(m):
            if degs[u] < lo:
                must |= 1 << u
            if degs[u] >= dmax:
                forbid |= 1 << u
        if must & forbid:
            return
        free = ((1 << m) - 1) & ~must & ~forbid
        need = must.bit_count()
        smin = max(lo, 0)
        maxdeg_parent = max(degs)
        seen: set[int] | None = set() if gens else None
        sub = 0
        while True:
            mask = must | sub
            size = need + sub.bit_count()
            if smin <= size <= dmax and size >= maxdeg_parent:
                if seen is None or mask not in seen:
                    if seen is not None:
                        seen |= _mask_orbit(mask, gens)
                    self._try_child(adj, degs, mask, size)
            if sub == free:
                break
            sub = (sub - free) & free
        return

    def _leaf(self, adj):
        if self.connected and component_count(adj, len(adj)) != 1:
            return
        self.summary.emitted += 1
        self.sink(_trusted(len(adj), adj))

    def _try_child(self, adj: list[int], degs: list[int], mask: int, size: int) -> None:
        m = len(adj)
        cdeg = degs + [size]
        for u in bits(mask):
            cdeg[u] += 1
        top = max(cdeg)
        if size < top:
            return
        tied = [u for u in range(m) if cdeg[u] == size]
        cadj = adj + [mask]
        for u in bits(mask):
            cadj[u] = adj[u] | (1 << m)
        gens: Sequence[tuple[int, ...]] | None = None
        if tied:
            nsum = {}
            for v in tied + [m]:
                s = 0
                for u in BIT_POSITIONS[cadj[v]]:
                    s += cdeg[u]
                nsum[v] = s
            mine = nsum[m]
            if any(nsum[u] > mine for u in tied):
                return
            if any(nsum[u] == mine for u in tied):
                keys = [(cdeg[v], sum(cdeg[u] for u in BIT_POSITIONS[cadj[v]])) for v in range(m + 1)]
                res = canonical_search(cadj, keys)
                w = res.lab[-1]
                if res.orbits[w] != res.orbits[m]:
                    return
                gens = res.generators
        if m + 1 < self.n and gens is None:
            gens = _automorphisms(cadj, cdeg)
        self._node(cadj, cdeg, gens or ())


def _automorphisms(adj: list[int], degs: list[int]) -> list[tuple[int, ...]]:
    cells = _refine([adj], _cells_from_keys(degs), _cells_from_keys(degs))
    if len(cells) == len(adj):
        return []
    return _Search([adj], lambda lab: _graph_code(adj, lab)).run(cells).generators


def generate_graphs(
    n: int,
    dmin: int = 0,
    dmax: int | None = None,
    sink: Callable[[Graph], None] | None = None,
    *,
    connected: bool = True,
    res: int = 0,
    mod: int = 1,
    split_level: int | None = None,
    start_subtree: int = 0,
    stop_subtree: int | None = None,
    on_subtree: Callable[[int, GenerationSummary], None] | None = None,
) -> GenerationSummary:
    """Emit one graph per isomorphism class on ``n`` vertices with degrees in ``[dmin, dmax]``.

    Subtrees rooted at ``split_level`` vertices are numbered in search order;
    this call handles those with ``index % mod == res`` and
    ``start_subtree <= index < stop_subtree``.
    ``on_subtree`` runs after each finished subtree (checkpoint hook).
    """
    if dmax is None:
        dmax = n - 1
    if not 1 <= n <= 16:
        raise ValueError(f"n={n} outside 1..16")
    if split_level is None:
        split_level = max(1, min(n, n - 3))
    if not 1 <= split_level <= n:
        raise ValueError("split_level must lie in 1..n")
    sink = sink or (lambda g: None)
    stop = 1 << 62 if stop_subtree is None else stop_subtree
    gen = _Generator(n, dmin, dmax, connected, sink, res, mod, split_level, start_subtree, stop, on_subtree)
    t0 = time.perf_counter()
    if dmin <= dmax and dmin <= n - 1 and dmax >= 0 and not (n > 1 and connected and dmax < 1):
        gen.run()
    gen.summary.seconds = time.perf_counter() - t0
    return gen.summary


def generate_connected(n: int, dmin: int = 0, dmax: int | None = None, sink=None, **kw) -> GenerationSummary:
    return generate_graphs(n, dmin, dmax, sink, connected=True, **kw)


def iter_graphs(n: int, dmin: int = 0, dmax: int | None = None, connected: bool = True) -> list[Graph]:
    out: list[Graph] = []
    generate_graphs(n, dmin, dmax, out.append, connected=connected)
    return out


# ---------------------------------------------------------------- counting


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def count_graphs(n: int) -> int:
    """Number of isomorphism classes of graphs on ``n`` vertices (cycle-index count)."""
    total = Fraction(0)
    for part in _partitions(n):
        mult = Counter(part)
        z = 1
        for k, m in mult.items():
            z *= k**m * factorial(m)
        e = 0
        for k, m in mult.items():
            e += m * (k // 2) + k * m * (m - 1) // 2
        ks = sorted(mult)
        for a in range(len(ks)):
            for b in range(a + 1, len(ks)):
                e += mult[ks[a]] * mult[ks[b]] * gcd(ks[a], ks[b])
        total += Fraction(2**e, z)
    assert total.denominator == 1
    return int(total)


def count_connected_graphs(n: int) -> int:
    """Connected classes on ``n`` vertices via the inverse Euler transform of :func:`count_graphs`."""
    if n < 1:
        raise ValueError("n must be positive")
    b = [count_graphs(k) for k in range(n + 1)]
    d = [0] * (n + 1)
    c = [0] * (n + 1)
    for m in range(1, n + 1):
        d[m] = m * b[m] - sum(d[k] * b[m - k] for k in range(1, m))
        c[m] = (d[m] - sum(q * c[q] for q in range(1, m) if m % q == 0)) // m
    return c[n]
