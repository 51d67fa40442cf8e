"""Command line entry point: ``flagtorsion <command> [options]``.

Stage commands work inside a run directory (``--out``, default
``$FLAGTORSION_SCRATCH`` or ``./runs``) holding ``<stage>_n<N>.g6`` files, a
resumable ``manifest_n<N>.txt`` and an appended ``stats.tsv``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .canon import generate_graphs
from .classify import ClassLabel, classification_row
from .graph import Graph6Error, find_induced_c5, is_tame, read_graph6_file, to_graph6
from .pipeline import (
    PipelineAssertionError,
    build_link_oracle,
    run_stage,
    run_stage_table,
    stage_path,
    tsv_header,
)
from .posets import poset_report

STAGE_COMMANDS = {"tame": "tame", "links": "cyclic_links", "torsion": "torsion", "irreducible": "irreducible"}
SCRATCH_ENV = "FLAGTORSION_SCRATCH"


@dataclass
class RunConfig:
    n: int | None = None
    ns: list[int] = field(default_factory=list)  # table only
    dmin: int | None = None
    dmax: int | None = None
    stage: str = "all"
    inp: Path | None = None
    out: Path | None = None
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    checkpoint_every: int = 64
    extended: bool = False
    connected_source: str = "auto"
    fuse_links: bool = False

    def __post_init__(self) -> None:
        for n in ([self.n] if self.n is not None else []) + self.ns:
            if not 1 <= n <= 16:
                raise ValueError(f"n={n} outside 1..16")
        if self.workers < 1 or self.checkpoint_every < 1:
            raise ValueError("--workers and --checkpoint-every must be positive")

    def check_extended(self) -> None:
        for n in ([self.n] if self.n is not None else []) + self.ns:
            if n >= 11 and not self.extended:
                raise ValueError(f"n={n} is an extended run; add --extended")

    @property
    def workdir(self) -> Path:
        return self.out if self.out is not None else Path(os.environ.get(SCRATCH_ENV, "runs"))

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        kw = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__ and v is not None}
        if isinstance(kw.get("n"), list):
            kw["ns"] = kw.pop("n")
        for key in ("inp", "out"):
            if key in kw:
                kw[key] = Path(kw[key])
        return cls(**kw)


def _append_stats(workdir: Path, n: int, stage: str, count: int, seconds: float) -> None:
    path = workdir / "stats.tsv"
    new = not path.exists()
    with open(path, "a") as fh:
        if new:
            fh.write("n\tstage\tcount\tseconds\n")
        fh.write(f"{n}\t{stage}\t{count}\t{seconds:.3f}\n")


def cmd_gen(cfg: RunConfig) -> int:
    cfg.check_extended()
    n = cfg.n
    dmin = 0 if cfg.dmin is None else cfg.dmin
    dmax = n - 1 if cfg.dmax is None else cfg.dmax
    out = cfg.out or Path(f"gen_n{n}_d{dmin}_{dmax}.g6")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        summary = generate_graphs(n, dmin, dmax, lambda g: fh.write(to_graph6(g) + "\n"))
    _append_stats(out.parent, n, f"gen[{dmin},{dmax}]", summary.emitted, summary.seconds)
    print(f"{summary.emitted} graphs -> {out}")
    return 0


def cmd_stage(cfg: RunConfig) -> int:
    """Run the single stage ``cfg.stage``; ``tame`` with an input file filters it instead."""
    workdir = cfg.workdir
    if cfg.stage == "tame" and cfg.inp is not None:
        return _filter_tame(cfg, workdir)
    cfg.check_extended()
    t0 = time.perf_counter()
    count = run_stage(cfg.stage, cfg.n, workdir, workers=cfg.workers,
                      checkpoint_every=cfg.checkpoint_every, fuse_links=cfg.fuse_links,
                      connected_source=cfg.connected_source)
    _append_stats(workdir, cfg.n, cfg.stage, count, time.perf_counter() - t0)
    print(f"{cfg.stage} n={cfg.n}: {count} graphs -> {stage_path(workdir, cfg.stage, cfg.n)}")
    return 0


def _filter_tame(cfg: RunConfig, workdir: Path) -> int:
    workdir.mkdir(parents=True, exist_ok=True)
    out = stage_path(workdir, "tame", cfg.n)
    kept = 0
    with open(out, "w") as fh:
        for g in read_graph6_file(cfg.inp):
            if is_tame(g):
                fh.write(to_graph6(g) + "\n")
                kept += 1
    print(f"tame n={cfg.n}: {kept} graphs -> {out}")
    return 0


def cmd_run(cfg: RunConfig) -> int:
    if cfg.stage != "all":
        return cmd_stage(cfg)
    return cmd_table(RunConfig(**{**vars(cfg), "n": None, "ns": [cfg.n]}))


def cmd_table(cfg: RunConfig) -> int:
    cfg.check_extended()
    print(tsv_header())
    for n in cfg.ns:
        stats = run_stage_table(n, cfg.workdir, extended=cfg.extended, workers=cfg.workers,
                                checkpoint_every=cfg.checkpoint_every,
                                connected_source=cfg.connected_source, fuse_links=cfg.fuse_links)
        print(stats.tsv_row(), flush=True)
    return 0


def cmd_classify(cfg: RunConfig) -> int:
    graphs = list(read_graph6_file(cfg.inp))
    out = open(cfg.out, "w") if cfg.out else sys.stdout
    tally: Counter = Counter()
    try:
        out.write("graph6\tlabel\tH0\tH1\tH2\tsurface\n")
        for g in graphs:
            row = classification_row(g)
            tally[row.split("\t")[1]] += 1
            out.write(row + "\n")
        out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    print(", ".join(f"{label.value}: {tally[label.value]}" for label in ClassLabel), file=sys.stderr)
    return 0


def cmd_c5check(cfg: RunConfig) -> int:
    graphs = list(read_graph6_file(cfg.inp))
    hits = 0
    for g in graphs:
        c5 = find_induced_c5(g)
        hits += c5 is not None
        print(f"{to_graph6(g)}\t{'C5 ' + ','.join(map(str, c5)) if c5 else 'no induced C5'}")
    print(f"{hits}/{len(graphs)} contain an induced C5")
    return 0


def cmd_posets(cfg: RunConfig) -> int:
    report = poset_report(cfg.n)
    print(f"classes per size: {' '.join(map(str, report.classes))}")
    print(f"comparability graphs with induced C5: {len(report.induced_c5)}")
    print(f"torsion-free: {'yes' if report.torsion_free else 'no'}, classes: {report.classes[-1]}")
    if not report.torsion_free or report.induced_c5:
        raise PipelineAssertionError(f"poset check failed for n <= {cfg.n}")
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    oracle = build_link_oracle(cfg.n)
    print(f"k={oracle.k}: {oracle.base_size} of {oracle.classes_scanned} classes have nontrivial H1")
    if cfg.out:
        oracle.cset.save(cfg.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flagtorsion", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_flags(p, many=False):
        if many:
            p.add_argument("--n", type=int, nargs="*", default=[])
        else:
            p.add_argument("--n", type=int, required=True)
        p.add_argument("--out", help=f"output file or run directory (default ${SCRATCH_ENV} or ./runs)")
        p.add_argument("--workers", type=int)
        p.add_argument("--checkpoint-every", type=int, help="generation subtrees per checkpoint")
        p.add_argument("--extended", action="store_true", help="allow n >= 11")

    def cascade_flags(p):
        p.add_argument("--connected-source", choices=("auto", "generate", "formula"))
        p.add_argument("--fuse-links", action="store_true",
                       help="filter links during generation and skip the tame file")

    p = sub.add_parser("gen", help="generate connected graphs with degree bounds")
    run_flags(p)
    p.add_argument("--dmin", type=int)
    p.add_argument("--dmax", type=int)
    p.set_defaults(func=cmd_gen)

    for name, stage in STAGE_COMMANDS.items():
        p = sub.add_parser(name, help=f"run the {stage} stage")
        run_flags(p)
        p.add_argument("--in", dest="inp", help="filter this graph6 file instead (tame only)")
        p.set_defaults(func=cmd_stage, stage=stage)

    p = sub.add_parser("run", help="all stages for one n, or one stage with --stage")
    run_flags(p)
    cascade_flags(p)
    p.add_argument("--stage", choices=("all", "connected") + tuple(STAGE_COMMANDS.values()))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("table", help="stage-count rows as TSV")
    run_flags(p, many=True)
    cascade_flags(p)
    p.set_defaults(func=cmd_table)

    for name, func, helptext in (
        ("classify", cmd_classify, "RP^2 classification report"),
        ("c5check", cmd_c5check, "induced 5-cycle certificate per graph"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="inp", required=True)
        if name == "classify":
            p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("posets", help="exhaustive small-poset torsion check")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_posets)

    p = sub.add_parser("oracle", help="build the cyclic-link lookup set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        return args.func(RunConfig.from_args(args))
    except PipelineAssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 2
    except (OSError, Graph6Error, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
