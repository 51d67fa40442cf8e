"""Finite posets, their comparability graphs, and small-poset sanity checks.

The order complex of a poset is the clique complex of its comparability graph,
and a comparability graph never contains an induced odd cycle longer than a
triangle. An induced 5-cycle therefore certifies that a graph is not a
comparability graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .canon import canonical_relations, canonical_search
from .graph import BIT_POSITIONS, Graph, _trusted, has_induced_c5
from .homology import h1_clique


@dataclass(frozen=True)
class Poset:
    """``leq[x]`` is the mask of all ``y`` with ``x <= y`` (reflexive)."""

    n: int
    leq: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.leq) != self.n:
            raise ValueError("relation length does not match n")
        problem = relation_problem(self.n, self.leq)
        if problem:
            raise ValueError(problem)

    @classmethod
    def from_relations(cls, n: int, pairs: Sequence[tuple[int, int]]) -> "Poset":
        """Transitive closure of the strict relations ``x < y`` in ``pairs``."""
        up = [1 << x for x in range(n)]
        for x, y in pairs:
            up[x] |= 1 << y
        changed = True
        while changed:
            changed = False
            for x in range(n):
                reach = up[x]
                for y in BIT_POSITIONS[up[x]]:
                    reach |= up[y]
                if reach != up[x]:
                    up[x] = reach
                    changed = True
        return cls(n, tuple(up))

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls.from_relations(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(n, tuple(1 << x for x in range(n)))

    def strict_up(self) -> list[int]:
        return [m & ~(1 << x) for x, m in enumerate(self.leq)]

    def strict_down(self) -> list[int]:
        down = [0] * self.n
        for x, m in enumerate(self.leq):
            for y in BIT_POSITIONS[m & ~(1 << x)]:
                down[y] |= 1 << x
        return down

    def upper_covers(self) -> list[list[int]]:
        up = self.strict_up()
        out = []
        for x in range(self.n):
            above = 0
            for z in BIT_POSITIONS[up[x]]:
                above |= up[z]
            out.append(list(BIT_POSITIONS[up[x] & ~above]))
        return out

    def to_text(self) -> str:
        lines = [str(self.n)] + [" ".join(map(str, c)) for c in self.upper_covers()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Poset":
        rows = text.splitlines()
        n = int(rows[0])
        pairs = [(x, int(y)) for x, row in enumerate(rows[1 : n + 1]) for y in row.split()]
        return cls.from_relations(n, pairs)


def relation_problem(n: int, leq: Sequence[int]) -> str | None:
    """Describe the first violated poset axiom, or None."""
    for x in range(n):
        if leq[x] >> n:
            return f"element {x} relates to an element >= n"
        if not leq[x] >> x & 1:
            return f"reflexivity fails at {x}"
    for x in range(n):
        for y in BIT_POSITIONS[leq[x] & ~(1 << x)]:
            if leq[y] >> x & 1:
                return f"antisymmetry fails for {x}, {y}"
            if leq[y] & ~leq[x]:
                return f"transitivity fails through {x} <= {y}"
    return None


def comparability_graph(p: Poset) -> Graph:
    up = p.strict_up()
    down = p.strict_down()
    return _trusted(p.n, [u | d for u, d in zip(up, down)])


def obstructs_comparability(g: Graph) -> bool:
    """True when an induced 5-cycle shows ``g`` is not a comparability graph."""
    return has_induced_c5(g)


def poset_code(p: Poset) -> int:
    return canonical_relations([p.strict_up(), p.strict_down()]).code


def _ideals(p: Poset) -> Iterator[int]:
    """Down-closed subsets of ``p`` as masks, in increasing order."""
    down = p.strict_down()
    for s in range(1 << p.n):
        if all(down[z] & ~s == 0 for z in BIT_POSITIONS[s]):
            yield s


def _add_maximal(p: Poset, ideal: int) -> Poset:
    new = p.n
    leq = [m | (1 << new) if ideal >> x & 1 else m for x, m in enumerate(p.leq)]
    leq.append(1 << new)
    return _unchecked(p.n + 1, leq)


def _unchecked(n: int, leq: Sequence[int]) -> Poset:
    # Skips the axiom check; adding a maximal element above an ideal keeps a poset.
    p = object.__new__(Poset)
    object.__setattr__(p, "n", n)
    object.__setattr__(p, "leq", tuple(leq))
    return p


def poset_levels(n: int) -> list[list[Poset]]:
    """Isomorphism-class representatives of posets on 1..n elements.

    Each class on m elements arises by adding a new maximal element above an
    order ideal of a poset on m - 1 elements; duplicates are removed by
    canonical form.
    """
    if not 1 <= n <= 8:
        raise ValueError("poset enumeration is limited to n <= 8")
    levels = [[Poset(1, (1,))]]
    for _ in range(2, n + 1):
        seen: dict[int, Poset] = {}
        for p in levels[-1]:
            for ideal in _ideals(p):
                q = _add_maximal(p, ideal)
                seen.setdefault(poset_code(q), q)
        levels.append([seen[k] for k in sorted(seen)])
    return levels


def enumerate_posets(n: int, sink: Callable[[Poset], None] | None = None) -> int:
    """Emit one poset per isomorphism class on ``n`` elements; return the class count."""
    reps = poset_levels(n)[-1]
    if sink is not None:
        for p in reps:
            sink(p)
    return len(reps)


@dataclass
class PosetReport:
    n: int
    classes: list[int] = field(default_factory=list)  # per size 1..n
    torsion: list[Poset] = field(default_factory=list)
    induced_c5: list[Poset] = field(default_factory=list)

    @property
    def torsion_free(self) -> bool:
        return not self.torsion


def poset_report(n: int) -> PosetReport:
    """H1 of every order complex on at most ``n`` elements, plus the C5 obstruction check."""
    report = PosetReport(n)
    h1_memo: dict[tuple[int, int], bool] = {}
    for level in poset_levels(n):
        report.classes.append(len(level))
        for p in level:
            g = comparability_graph(p)
            key = (g.n, canonical_search(g.adj).code)
            if key not in h1_memo:
                h1_memo[key] = h1_clique(g).has_torsion
                if has_induced_c5(g):
                    report.induced_c5.append(p)
            if h1_memo[key]:
                report.torsion.append(p)
    return report


def verify_small_posets(n: int) -> bool:
    """No poset on at most ``n`` elements has torsion in H1 of its order complex."""
    return poset_report(n).torsion_free
