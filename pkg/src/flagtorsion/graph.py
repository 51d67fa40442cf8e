"""Small undirected graphs stored as per-vertex neighbour bit masks.

Vertices are ``0..n-1`` with ``n <= 16``; ``adj[v]`` has bit ``u`` set when
``u`` and ``v`` are adjacent. Everything here is a pure function on immutable
values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 16


class Graph6Error(ValueError):
    """Raised for a line that is not valid short-form graph6."""


BIT_POSITIONS: list[tuple[int, ...]] = [()]
for _k in range(MAX_VERTICES):
    BIT_POSITIONS += [p + (_k,) for p in BIT_POSITIONS]
del _k


def bits(mask: int) -> tuple[int, ...]:
    """Positions of the set bits of a 16-bit ``mask`` in increasing order."""
    return BIT_POSITIONS[mask]


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        n, adj = self.n, self.adj
        if not 0 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count {n} outside 0..{MAX_VERTICES}")
        if len(adj) != n:
            raise ValueError("adjacency length does not match n")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbour >= n")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise ValueError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in bits(self.adj[v] & ((1 << v) - 1))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        adj = [0] * self.n
        for v, row in enumerate(self.adj):
            image = 0
            for u in bits(row):
                image |= 1 << perm[u]
            adj[perm[v]] = image
        return _trusted(self.n, adj)

    def __str__(self) -> str:
        return to_graph6(self)


def _trusted(n: int, adj: Sequence[int]) -> Graph:
    # Skips validation; callers guarantee the Graph invariants.
    g = object.__new__(Graph)
    object.__setattr__(g, "n", n)
    object.__setattr__(g, "adj", tuple(adj))
    return g


def from_graph6(line: str | bytes) -> Graph:
    """Decode one short-form graph6 line (optionally newline-terminated)."""
    if isinstance(line, bytes):
        line = line.decode("ascii")
    text = line.rstrip("\r\n")
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    if not text:
        raise Graph6Error("empty graph6 line")
    for ch in text:
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range 63..126")
    n = ord(text[0]) - 63
    if n == 63:
        raise Graph6Error("long-form graph6 header (n > 62) is not supported")
    if n > MAX_VERTICES:
        raise Graph6Error(f"graph on {n} vertices exceeds the {MAX_VERTICES}-vertex cap")
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    payload = text[1:]
    if len(payload) < nchars:
        raise Graph6Error(f"truncated payload: need {nchars} characters, got {len(payload)}")
    if len(payload) > nchars:
        raise Graph6Error(f"trailing data: need {nchars} characters, got {len(payload)}")
    value = 0
    for ch in payload:
        value = (value << 6) | (ord(ch) - 63)
    pad = 6 * nchars - nbits
    if value & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits")
    value >>= pad
    adj = [0] * n
    pos = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if value >> pos & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            pos -= 1
    return _trusted(n, adj)


def to_graph6(g: Graph) -> str:
    """Encode ``g`` as short-form graph6 without the trailing newline."""
    n = g.n
    value = 0
    for j in range(1, n):
        col = g.adj[j]
        for i in range(j):
            value = (value << 1) | (col >> i & 1)
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    value <<= 6 * nchars - nbits
    chars = [chr(n + 63)]
    for k in range(nchars - 1, -1, -1):
        chars.append(chr((value >> (6 * k) & 63) + 63))
    return "".join(chars)


def read_graph6_file(path) -> Iterator[Graph]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield from_graph6(line)
            except Graph6Error as exc:
                raise Graph6Error(f"{path}:{lineno}: {exc}") from None


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return _trusted(g.n, [full & ~row & ~(1 << v) for v, row in enumerate(g.adj)])


def induced_adj(adj: Sequence[int], mask: int) -> list[int]:
    """Adjacency of the subgraph induced on ``mask``, relabelled in index order."""
    verts = BIT_POSITIONS[mask]
    place = [0] * MAX_VERTICES
    for k, v in enumerate(verts):
        place[v] = 1 << k
    out = []
    for v in verts:
        image = 0
        for u in BIT_POSITIONS[adj[v] & mask]:
            image |= place[u]
        out.append(image)
    return out


def induced(g: Graph, mask: int) -> Graph:
    """Subgraph induced on the vertex set ``mask``.

    An empty mask gives the 0-vertex graph, which the pipeline predicates reject.
    """
    if mask >> g.n:
        raise ValueError("vertex set contains vertices outside the graph")
    return _trusted(mask.bit_count(), induced_adj(g.adj, mask))


def delete_vertex(g: Graph, v: int) -> Graph:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    if g.n < 2:
        raise ValueError("cannot delete the only vertex")
    return induced(g, ((1 << g.n) - 1) ^ (1 << v))


def link_padded_adj(adj: Sequence[int], n: int, v: int) -> list[int]:
    """Link of ``v`` relabelled onto its first vertices, padded with isolated vertices."""
    out = induced_adj(adj, adj[v])
    out.extend([0] * (n - len(out)))
    return out


def link_padded(g: Graph, v: int) -> Graph:
    """The graph G_v: the link of ``v`` plus ``n - deg(v)`` isolated vertices."""
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    return _trusted(g.n, link_padded_adj(g.adj, g.n, v))


def link(g: Graph, v: int) -> Graph:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    return induced(g, g.adj[v])


def component_count(adj: Sequence[int], n: int) -> int:
    seen = 0
    count = 0
    for start in range(n):
        if seen >> start & 1:
            continue
        count += 1
        frontier = 1 << start
        seen |= frontier
        while frontier:
            reach = 0
            for u in bits(frontier):
                reach |= adj[u]
            frontier = reach & ~seen
            seen |= frontier
    return count


def is_connected(g: Graph) -> bool:
    if g.n < 1:
        raise ValueError("connectivity is undefined for the empty graph")
    return component_count(g.adj, g.n) == 1


def is_tame(g: Graph) -> bool:
    """Every degree lies in ``[4, n - 4]``."""
    if g.n < 1:
        raise ValueError("tameness is undefined for the empty graph")
    lo, hi = 4, g.n - 4
    return all(lo <= row.bit_count() <= hi for row in g.adj)


def _is_c5(adj: Sequence[int], verts: tuple[int, ...]) -> bool:
    mask = 0
    for v in verts:
        mask |= 1 << v
    return all((adj[v] & mask).bit_count() == 2 for v in verts) and (
        component_count(induced_adj(adj, mask), 5) == 1
    )


def find_induced_c5(g: Graph) -> tuple[int, ...] | None:
    """Return a 5-subset inducing a 5-cycle, or None."""
    adj = g.adj
    # A vertex of an induced C5 has degree >= 2 in G.
    candidates = [v for v in range(g.n) if adj[v].bit_count() >= 2]
    for verts in combinations(candidates, 5):
        if _is_c5(adj, verts):
            return verts
    return None


def has_induced_c5(g: Graph) -> bool:
    return find_induced_c5(g) is not None
