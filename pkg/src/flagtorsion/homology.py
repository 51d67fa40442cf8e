"""Integral homology of small simplicial complexes.

Boundary matrices are reduced to Smith normal form with exact Python integers,
so entry growth can never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .graph import Graph, bits, component_count


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    facets: tuple[tuple[int, ...], ...]

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], n: int | None = None) -> "SimplicialComplex":
        """Build a complex, dropping facets contained in other facets."""
        sets = {tuple(sorted(set(f))) for f in facets}
        sets.discard(())
        ordered = sorted(sets, key=lambda f: (-len(f), f))
        kept: list[tuple[int, ...]] = []
        masks: list[int] = []
        for f in ordered:
            m = _mask(f)
            if not any(m & k == m for k in masks):
                kept.append(f)
                masks.append(m)
        if n is None:
            n = 1 + max((v for f in kept for v in f), default=-1)
        if any(v >= n or v < 0 for f in kept for v in f):
            raise ValueError("facet vertex outside 0..n-1")
        return cls(n, tuple(sorted(kept)))

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def faces(self, k: int) -> list[tuple[int, ...]]:
        """All k-dimensional faces in lexicographic order."""
        out: set[tuple[int, ...]] = set()
        for f in self.facets:
            if len(f) > k:
                out.update(combinations(f, k + 1))
        return sorted(out)

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def to_text(self) -> str:
        return "".join(" ".join(map(str, f)) + "\n" for f in self.facets)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "SimplicialComplex":
        facets = [tuple(int(x) for x in line.split()) for line in text.splitlines() if line.strip()]
        return cls.from_facets(facets, n)


def _mask(face: Iterable[int]) -> int:
    m = 0
    for v in face:
        m |= 1 << v
    return m


def cliques(g: Graph, max_size: int | None = None) -> list[tuple[int, ...]]:
    """All nonempty cliques of ``g`` with at most ``max_size`` vertices, lexicographic."""
    out: list[tuple[int, ...]] = []
    adj = g.adj
    limit = g.n if max_size is None else max_size

    def grow(clique: tuple[int, ...], cand: int) -> None:
        out.append(clique)
        if len(clique) == limit:
            return
        for v in bits(cand):
            grow(clique + (v,), cand & adj[v] & ~((2 << v) - 1))

    for v in range(g.n):
        grow((v,), adj[v] & ~((2 << v) - 1))
    out.sort()
    return out


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    adj = g.adj

    def bron_kerbosch(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(tuple(bits(r)))
            return
        pivot_pool = p | x
        pivot = max(bits(pivot_pool), key=lambda u: (adj[u] & p).bit_count())
        for v in bits(p & ~adj[pivot]):
            bron_kerbosch(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    if g.n:
        bron_kerbosch(0, (1 << g.n) - 1, 0)
    return sorted(out)


def clique_complex(g: Graph, max_dim: int | None = None) -> SimplicialComplex:
    """Clique complex of ``g``, optionally truncated to faces of dimension <= ``max_dim``."""
    if max_dim is None:
        return SimplicialComplex(g.n, tuple(maximal_cliques(g)))
    faces = cliques(g, max_dim + 1)
    return SimplicialComplex.from_facets(faces, g.n)


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)


def _boundary_columns(k: int, c: SimplicialComplex) -> tuple[list[tuple], list[dict[int, int]]]:
    """Sparse columns of the k-th boundary map: rows are (k-1)-faces."""
    lower = c.faces(k - 1)
    index = {f: i for i, f in enumerate(lower)}
    cols = []
    for face in c.faces(k):
        col = {}
        for i in range(len(face)):
            col[index[face[:i] + face[i + 1:]]] = -1 if i % 2 else 1
        cols.append(col)
    return lower, cols


def boundary_matrix(k: int, c: SimplicialComplex) -> IntMatrix:
    if k < 1:
        raise ValueError("boundary maps start at k = 1")
    lower, cols = _boundary_columns(k, c)
    grid = [[0] * len(cols) for _ in lower]
    for j, col in enumerate(cols):
        for i, v in col.items():
            grid[i][j] = v
    return IntMatrix(len(lower), len(cols), tuple(tuple(r) for r in grid))


# ---------------------------------------------------------------- Smith form


def _normalise_diagonal(diag: list[int]) -> list[int]:
    """Turn any nonzero diagonal into its invariant factors d1 | d2 | ..."""
    d = sorted(abs(x) for x in diag)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            if b % a:
                g = gcd(a, b)
                d[i], d[j] = g, a // g * b
    return d


def smith_sparse(rows: dict[int, dict[int, int]]) -> list[int]:
    """Diagonalise a sparse integer matrix in place; returns invariant factors.

    ``rows`` maps row index to ``{col: value}`` with no stored zeros. Pivots are
    entries of least absolute value, ties broken by lowest row then column.
    """
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    diag: list[int] = []

    def axpy_row(dst: int, src: int, q: int) -> None:
        rd, rs = rows[dst], rows[src]
        for j, v in rs.items():
            nv = rd.get(j, 0) - q * v
            if nv:
                if j not in rd:
                    cols[j].add(dst)
                rd[j] = nv
            elif j in rd:
                del rd[j]
                cols[j].discard(dst)

    def axpy_col(dst: int, src: int, q: int) -> None:
        for i in list(cols[src]):
            r = rows[i]
            nv = r.get(dst, 0) - q * r[src]
            if nv:
                if dst not in r:
                    cols.setdefault(dst, set()).add(i)
                r[dst] = nv
            elif dst in r:
                del r[dst]
                cols[dst].discard(i)

    while True:
        best = None
        for i in sorted(rows):
            for j, v in rows[i].items():
                a = abs(v)
                if best is None or a < best[0] or (a == best[0] and (i, j) < best[1:]):
                    best = (a, i, j)
        if best is None:
            break
        _, pi, pj = best
        while True:
            p = rows[pi][pj]
            dirty = False
            for i in sorted(cols[pj] - {pi}):
                q = rows[i][pj] // p
                axpy_row(i, pi, q)
                if pj in rows[i]:
                    dirty = True
            for j in sorted(set(rows[pi]) - {pj}):
                q = rows[pi][j] // p
                axpy_col(j, pj, q)
                if j in rows[pi]:
                    dirty = True
            if not dirty:
                break
            # a remainder survived: move the pivot to the smallest entry in its row/column
            cand = [(abs(rows[i][pj]), i, pj) for i in cols[pj]]
            cand += [(abs(v), pi, j) for j, v in rows[pi].items()]
            _, pi, pj = min(cand)
        diag.append(rows[pi][pj])
        del rows[pi]
        cols[pj].discard(pi)
        del cols[pj]
        for i in [i for i, r in rows.items() if not r]:
            del rows[i]
    return _normalise_diagonal(diag)


def smith_normal_form(m: IntMatrix) -> tuple[int, list[int]]:
    """Rank and invariant factors ``d1 | d2 | ... | d_rank`` of ``m``."""
    rows = {}
    for i, r in enumerate(m.entries):
        d = {j: v for j, v in enumerate(r) if v}
        if d:
            rows[i] = d
    factors = smith_sparse(rows)
    return len(factors), factors


# ---------------------------------------------------------------- homology


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = self.torsion
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"invalid torsion coefficients {t}")

    @property
    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    @property
    def has_torsion(self) -> bool:
        return bool(self.torsion)

    def __add__(self, other: "HomologyGroup") -> "HomologyGroup":
        merged = _normalise_diagonal(list(self.torsion + other.torsion))
        return HomologyGroup(self.betti + other.betti, tuple(d for d in merged if d > 1))

    def __str__(self) -> str:
        parts = [f"Z^{self.betti}" if self.betti > 1 else "Z"] if self.betti else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _rank_and_torsion(k: int, c: SimplicialComplex) -> tuple[int, list[int]]:
    if k < 1:
        return 0, []
    lower, cols = _boundary_columns(k, c)
    rows: dict[int, dict[int, int]] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    factors = smith_sparse(rows)
    return len(factors), [d for d in factors if d > 1]


def homology(c: SimplicialComplex, k: int) -> HomologyGroup:
    """H_k(c; Z) from the ranks of the k-th and (k+1)-th boundary maps."""
    if k < 0:
        raise ValueError("homology degree must be nonnegative")
    nk = len(c.faces(k))
    rank_k, _ = _rank_and_torsion(k, c)
    rank_next, torsion = _rank_and_torsion(k + 1, c)
    return HomologyGroup(nk - rank_k - rank_next, tuple(torsion))


def homology_all(c: SimplicialComplex) -> list[HomologyGroup]:
    return [homology(c, k) for k in range(c.dim + 1)]


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    adj = g.adj
    out = []
    for a in range(g.n):
        for b in bits(adj[a] & ~((2 << a) - 1)):
            for c in bits(adj[a] & adj[b] & ~((2 << b) - 1)):
                out.append((a, b, c))
    return out


def h1_clique(g: Graph) -> HomologyGroup:
    """H_1 of the clique complex, computed on its 2-skeleton.

    rank of the edge boundary is ``n - components``; only the triangle boundary
    needs a Smith form.
    """
    if g.n < 1:
        raise ValueError("homology of the empty graph is not defined here")
    edges = g.edges()
    if not edges:
        return HomologyGroup(0)
    index = {e: i for i, e in enumerate(edges)}
    rows: dict[int, dict[int, int]] = {}
    ntri = 0
    for j, (a, b, c) in enumerate(triangles(g)):
        ntri += 1
        # boundary (b,c) - (a,c) + (a,b); edges stored as (low, high)
        for e, s in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
            rows.setdefault(index[e], {})[j] = s
    factors = smith_sparse(rows) if ntri else []
    rank1 = g.n - component_count(g.adj, g.n)
    betti = len(edges) - rank1 - len(factors)
    return HomologyGroup(betti, tuple(d for d in factors if d > 1))


def has_h1_torsion(g: Graph) -> bool:
    return h1_clique(g).has_torsion


def h1_nontrivial(g: Graph) -> bool:
    return not h1_clique(g).is_trivial


def reduced_betti0(g: Graph) -> int:
    return component_count(g.adj, g.n) - 1
