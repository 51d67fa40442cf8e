"""Classification TSV and induced-C5 certificates for a finished run.

    python scripts/classify_survivors.py runs/n11 11
"""

import sys
from pathlib import Path

from flagtorsion.classify import classification_row
from flagtorsion.graph import find_induced_c5, read_graph6_file
from flagtorsion.pipeline import stage_path


def main() -> None:
    workdir, n = Path(sys.argv[1]), int(sys.argv[2])
    graphs = list(read_graph6_file(stage_path(workdir, "irreducible", n)))
    out = workdir / f"classification_n{n}.tsv"
    with open(out, "w") as fh:
        fh.write("graph6\tlabel\tH0\tH1\tH2\tsurface\tinduced_c5\n")
        for g in graphs:
            c5 = find_induced_c5(g)
            fh.write(f"{classification_row(g)}\t{','.join(map(str, c5)) if c5 else '-'}\n")
    print(out.read_text(), end="")


if __name__ == "__main__":
    main()
