"""Resumable extended run of the cascade for n = 11 (or 12).

    python scripts/run_extended.py 11 runs/n11

Generation of the tame graphs is fused with the cyclic-links filter, so only
the survivors are written to disk. Re-running the same command resumes from the
manifest in the work directory.
"""

import logging
import sys
from pathlib import Path

from flagtorsion.pipeline import run_stage_table, tsv_header


def main() -> None:
    n = int(sys.argv[1])
    workdir = Path(sys.argv[2])
    workdir.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        filename=workdir / "run.log",
        level=logging.INFO,
        format="%(asctime)s %(message)s",
    )
    stats = run_stage_table(n, workdir, extended=True, fuse_links=True, checkpoint_every=256)
    print(tsv_header())
    print(stats.tsv_row())


if __name__ == "__main__":
    main()
