"""The filter cascade connected -> tame -> cyclic links -> H1-torsion -> irreducible.

Every stage after generation is a filter over a graph6 file. Stage outputs and a
plain-text manifest live in a work directory so an interrupted run resumes at
the last checkpoint instead of starting over.
"""

from __future__ import annotations

import logging
import os
import time
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .canon import (
    CanonicalSet,
    are_isomorphic,
    canonical_search,
    code_to_graph6,
    count_connected_graphs,
    generate_graphs,
)
from .graph import (
    Graph,
    delete_vertex,
    from_graph6,
    induced_adj,
    is_connected,
    is_tame,
    link,
    to_graph6,
)
from .homology import h1_nontrivial, has_h1_torsion

log = logging.getLogger(__name__)

STAGES = ("connected", "tame", "cyclic_links", "torsion", "irreducible")
TABLE_HEADER = ("n",) + STAGES


class PipelineAssertionError(AssertionError):
    """A structural cross-check failed on real pipeline output."""


# ---------------------------------------------------------------- link oracle


@dataclass
class LinkOracle:
    """Canonical codes of every n-vertex graph H + (n - k) with H1(Cl(H)) != 0."""

    n: int
    k: int
    cset: CanonicalSet
    base_size: int
    classes_scanned: int
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def link_is_cyclic(self, adj: Sequence[int], v: int) -> bool:
        sub = tuple(induced_adj(adj, adj[v]))
        hit = self._memo.get(sub)
        if hit is None:
            padded = list(sub) + [0] * (self.n - len(sub))
            code = code_to_graph6(self.n, canonical_search(padded).code)
            hit = self._memo[sub] = self.cset.has_code(code)
        return hit


def build_link_oracle(n: int, k: int | None = None) -> LinkOracle:
    """Scan all k-vertex classes (default ``k = n - 4``) and keep those with nontrivial H1."""
    if k is None:
        k = n - 4
    if not 1 <= k <= n <= 16:
        raise ValueError(f"need 1 <= k <= n <= 16, got k={k}, n={n}")
    codes = []
    scanned = 0

    def keep(h: Graph) -> None:
        nonlocal scanned
        scanned += 1
        if h1_nontrivial(h):
            padded = list(h.adj) + [0] * (n - k)
            codes.append(code_to_graph6(n, canonical_search(padded).code))

    generate_graphs(k, 0, k - 1, keep, connected=False)
    return LinkOracle(n, k, CanonicalSet(codes), len(codes), scanned)


@lru_cache(maxsize=None)
def _oracle_for(n: int) -> LinkOracle:
    return build_link_oracle(n)


def has_cyclic_links(g: Graph, oracle: LinkOracle) -> bool:
    """Every vertex link has nontrivial H1, decided by lookup of the padded link G_v."""
    if g.n != oracle.n:
        raise ValueError(f"graph has {g.n} vertices, oracle expects {oracle.n}")
    if not is_tame(g):
        raise ValueError("cyclic-links lookup requires a tame graph")
    return all(oracle.link_is_cyclic(g.adj, v) for v in range(g.n))


def has_cyclic_links_direct(g: Graph) -> bool:
    """Same predicate computed from the homology of each link, no lookup table."""
    return all(g.degree(v) > 0 and h1_nontrivial(link(g, v)) for v in range(g.n))


def is_irreducible_torsion(g: Graph) -> bool:
    if g.n < 1:
        raise ValueError("empty graph")
    if not has_h1_torsion(g):
        return False
    return g.n == 1 or not any(has_h1_torsion(delete_vertex(g, v)) for v in range(g.n))


def heuristic_expectation(n: int, base_size: int = 7702, total_classes: int = 12346) -> float:
    """Chance that n independent uniformly random link classes are all cyclic."""
    return (base_size / total_classes) ** n


def survivor_check(g: Graph) -> None:
    """Raise if a torsion survivor is not connected, tame and with cyclic links."""
    if not is_connected(g):
        raise PipelineAssertionError(f"torsion graph {to_graph6(g)} is disconnected")
    if not is_tame(g):
        raise PipelineAssertionError(f"torsion graph {to_graph6(g)} is not tame")
    if not has_cyclic_links_direct(g):
        raise PipelineAssertionError(f"torsion graph {to_graph6(g)} has an acyclic link")


# ---------------------------------------------------------------- run state


@dataclass
class PipelineStats:
    n: int
    counts: dict[str, int] = field(default_factory=dict)
    seconds: dict[str, float] = field(default_factory=dict)

    def row(self) -> tuple:
        return (self.n,) + tuple(self.counts.get(s) for s in STAGES)

    def check_monotone(self) -> None:
        vals = [self.counts[s] for s in STAGES if s in self.counts]
        if any(b > a for a, b in zip(vals, vals[1:])):
            raise PipelineAssertionError(f"stage counts increase for n={self.n}: {vals}")

    def tsv_row(self) -> str:
        cells = [str(self.n)] + ["" if self.counts.get(s) is None else str(self.counts[s]) for s in STAGES]
        cells += [f"{self.seconds.get(s, 0.0):.2f}" for s in STAGES]
        return "\t".join(cells)


def tsv_header() -> str:
    return "\t".join(TABLE_HEADER + tuple(f"seconds_{s}" for s in STAGES))


class Manifest:
    """Key/value run state, one ``key<TAB>value`` per line, rewritten atomically."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.data: dict[str, str] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if "\t" in line:
                    k, v = line.split("\t", 1)
                    self.data[k] = v

    def get(self, key: str, default=None):
        return self.data.get(key, default)

    def set(self, **items) -> None:
        for k, v in items.items():
            self.data[k] = str(v)
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text("".join(f"{k}\t{v}\n" for k, v in self.data.items()))
        os.replace(tmp, self.path)

    def drop(self, *keys: str) -> None:
        for k in keys:
            self.data.pop(k, None)
        self.set()


def stage_path(workdir: Path, stage: str, n: int) -> Path:
    return Path(workdir) / f"{stage}_n{n}.g6"


def read_graphs(path: Path) -> Iterator[Graph]:
    with open(path) as fh:
        for line in fh:
            if line.strip():
                yield from_graph6(line)


# ---------------------------------------------------------------- generation


def _gen_block(args) -> tuple[int, list[str], int]:
    n, dmin, dmax, start, stop, split, collect, links = args
    lines: list[str] = []
    emitted = 0
    oracle = _oracle_for(n) if links else None

    def sink(g: Graph) -> None:
        nonlocal emitted
        emitted += 1
        if not collect:
            return
        if oracle is not None and not has_cyclic_links(g, oracle):
            return
        lines.append(to_graph6(g))

    summary = generate_graphs(
        n, dmin, dmax, sink, split_level=split, start_subtree=start, stop_subtree=stop
    )
    return emitted, lines, summary.subtrees


def count_subtrees(n: int, dmin: int, dmax: int, split: int) -> int:
    s = generate_graphs(n, dmin, dmax, split_level=split, start_subtree=1 << 62)
    return s.nodes[split]


def run_generation(
    n: int,
    dmin: int,
    dmax: int,
    out_path: Path | None,
    manifest: Manifest,
    key: str,
    *,
    workers: int = 1,
    block: int = 64,
    fuse_links: bool = False,
) -> int:
    """Generate connected graphs into ``out_path`` (or just count), checkpointing per block.

    Output is written in subtree order whatever the worker count, so reruns
    and resumed runs produce identical files.
    """
    split = max(1, n - 3)
    total = count_subtrees(n, dmin, dmax, split)
    cursor = int(manifest.get(f"{key}.cursor", 0))
    emitted = int(manifest.get(f"{key}.emitted", 0))
    kept = int(manifest.get(f"{key}.kept", 0))
    offset = int(manifest.get(f"{key}.offset", 0))
    fh = None
    if out_path is not None:
        fh = open(out_path, "r+" if out_path.exists() else "w")
        fh.truncate(offset)
        fh.seek(offset)
    tasks = [
        (n, dmin, dmax, s, min(s + block, total), split, out_path is not None, fuse_links)
        for s in range(cursor, total, block)
    ]
    try:
        with _pool(workers) as imap:
            for task, (cnt, lines, _) in zip(tasks, imap(_gen_block, tasks)):
                emitted += cnt
                kept += len(lines)
                if fh is not None:
                    fh.write("".join(line + "\n" for line in lines))
                    fh.flush()
                    offset = fh.tell()
                manifest.set(**{f"{key}.cursor": task[4], f"{key}.emitted": emitted,
                                f"{key}.kept": kept, f"{key}.offset": offset})
                log.info("%s: subtree %d/%d, %d graphs", key, task[4], total, emitted)
    finally:
        if fh is not None:
            fh.close()
    return emitted


class _pool:
    """``imap`` over a worker pool, or plain ``map`` when running single-worker."""

    def __init__(self, workers: int):
        self.workers = workers
        self.pool = None

    def __enter__(self) -> Callable:
        if self.workers <= 1:
            return map
        self.pool = Pool(self.workers)
        return lambda fn, it: self.pool.imap(fn, it, chunksize=1)

    def __exit__(self, *exc) -> None:
        if self.pool is not None:
            self.pool.terminate()


# ---------------------------------------------------------------- filters


def _links_pred(line: str) -> bool:
    g = from_graph6(line)
    return has_cyclic_links(g, _oracle_for(g.n))


def _torsion_pred(line: str) -> bool:
    return has_h1_torsion(from_graph6(line))


def _irreducible_pred(line: str) -> bool:
    return is_irreducible_torsion(from_graph6(line))


def _filter_chunk(args) -> list[str]:
    pred, lines = args
    return [line for line in lines if pred(line)]


def _chunks(fh, size: int) -> Iterator[list[str]]:
    buf: list[str] = []
    for line in fh:
        line = line.strip()
        if line:
            buf.append(line)
            if len(buf) == size:
                yield buf
                buf = []
    if buf:
        yield buf


def run_filter(
    in_path: Path,
    out_path: Path,
    pred: Callable[[str], bool],
    manifest: Manifest,
    key: str,
    *,
    workers: int = 1,
    chunk: int = 20000,
) -> int:
    """Stream ``in_path`` through ``pred`` into ``out_path``, checkpointing per chunk."""
    done = int(manifest.get(f"{key}.read", 0))
    kept = int(manifest.get(f"{key}.kept", 0))
    offset = int(manifest.get(f"{key}.offset", 0))
    sizes: deque[int] = deque()

    def tasks(src) -> Iterator[tuple]:
        for lines in _chunks(src, chunk):
            sizes.append(len(lines))
            yield pred, lines

    with open(in_path) as src, open(out_path, "r+" if out_path.exists() else "w") as dst:
        dst.truncate(offset)
        dst.seek(offset)
        for _ in range(done):
            next(src)
        with _pool(workers) as imap:
            for out in imap(_filter_chunk, tasks(src)):
                done += sizes.popleft()
                kept += len(out)
                dst.write("".join(line + "\n" for line in out))
                dst.flush()
                offset = dst.tell()
                manifest.set(**{f"{key}.read": done, f"{key}.kept": kept, f"{key}.offset": offset})
    return kept


# ---------------------------------------------------------------- driver


def run_stage(
    stage: str,
    n: int,
    workdir: Path,
    *,
    workers: int = 1,
    connected_source: str = "auto",
    fuse_links: bool = False,
    checkpoint_every: int = 64,
) -> int:
    """Run one stage (resuming if a checkpoint exists) and return its count."""
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(workdir / f"manifest_n{n}.txt")
    if manifest.get(f"{stage}.done") is not None:
        return int(manifest.get(f"{stage}.count"))
    t0 = time.perf_counter()
    if stage == "connected":
        source = connected_source
        if source == "auto":
            source = "generate" if n <= 10 else "formula"
        if source == "formula":
            count = count_connected_graphs(n)
        elif source == "generate":
            count = run_generation(n, 0, n - 1, None, manifest, stage, workers=workers, block=checkpoint_every)
        else:
            raise ValueError(f"unknown connected_source {connected_source!r}")
        manifest.set(**{f"{stage}.source": source})
    elif stage == "tame":
        if fuse_links:
            # cyclic-links survivors are written directly; the tame set is only counted
            out = stage_path(workdir, "cyclic_links", n)
            count = run_generation(n, 4, n - 4, out, manifest, stage, workers=workers,
                                   block=checkpoint_every, fuse_links=True)
            manifest.set(**{"cyclic_links.done": 1, "cyclic_links.count": manifest.get("tame.kept"),
                            "cyclic_links.fused": 1})
        else:
            out = stage_path(workdir, "tame", n)
            count = run_generation(n, 4, n - 4, out, manifest, stage, workers=workers, block=checkpoint_every)
    else:
        prev = STAGES[STAGES.index(stage) - 1]
        src = stage_path(workdir, prev, n)
        if manifest.get(f"{prev}.done") is None or not src.exists():
            raise FileNotFoundError(f"stage {stage} needs the {prev} output {src}")
        pred = {"cyclic_links": _links_pred, "torsion": _torsion_pred, "irreducible": _irreducible_pred}[stage]
        count = run_filter(src, stage_path(workdir, stage, n), pred, manifest, stage, workers=workers)
        if stage == "torsion":
            for g in read_graphs(stage_path(workdir, stage, n)):
                survivor_check(g)
        if stage == "irreducible":
            _check_reducible(n, workdir)
    manifest.set(**{f"{stage}.done": 1, f"{stage}.count": count,
                    f"{stage}.seconds": f"{time.perf_counter() - t0:.3f}"})
    return count


def irreducible_core(g: Graph) -> Graph:
    """Delete vertices while H1 torsion survives; the result is irreducible."""
    if not has_h1_torsion(g):
        raise ValueError(f"{to_graph6(g)} has no H1 torsion")
    shrunk = True
    while shrunk and g.n > 1:
        shrunk = False
        for v in range(g.n):
            h = delete_vertex(g, v)
            if has_h1_torsion(h):
                g, shrunk = h, True
                break
    return g


def _check_reducible(n: int, workdir: Path) -> None:
    """Each reducible torsion graph must shrink to an irreducible graph found earlier."""
    irreducible = {to_graph6(g) for g in read_graphs(stage_path(workdir, "irreducible", n))}
    for g in read_graphs(stage_path(workdir, "torsion", n)):
        if to_graph6(g) in irreducible:
            continue
        core = irreducible_core(g)
        known = stage_path(workdir, "irreducible", core.n)
        if not known.exists():
            log.warning("no %s; cannot cross-check the core of %s", known.name, to_graph6(g))
            continue
        if not any(are_isomorphic(core, k) for k in read_graphs(known)):
            raise PipelineAssertionError(
                f"irreducible core {to_graph6(core)} of {to_graph6(g)} is missing from {known.name}"
            )


def run_stage_table(n: int, workdir: Path, *, extended: bool = False, **kw) -> PipelineStats:
    """Run (or resume) every stage for ``n`` and return its stage-count row."""
    if not 1 <= n <= 12:
        raise ValueError("the cascade is defined for n <= 12")
    if n >= 11 and not extended:
        raise ValueError(f"n={n} is an extended run; pass extended=True")
    stats = PipelineStats(n)
    workdir = Path(workdir)
    for stage in STAGES:
        stats.counts[stage] = run_stage(stage, n, workdir, **kw)
    manifest = Manifest(workdir / f"manifest_n{n}.txt")
    for stage in STAGES:
        stats.seconds[stage] = float(manifest.get(f"{stage}.seconds", 0.0))
    stats.check_monotone()
    return stats
