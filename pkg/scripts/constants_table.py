"""Table of the scalar constants for n = 2..10 (CSV on stdout)."""

import argparse
import csv
import sys
from dataclasses import dataclass

from sphereiso import constants as K


@dataclass
class TableConfig:
    n_min: int = 2
    n_max: int = 10
    s: float = 0.0


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-min", type=int, default=TableConfig.n_min)
    p.add_argument("--n-max", type=int, default=TableConfig.n_max)
    p.add_argument("--s", type=float, default=TableConfig.s)
    cfg = TableConfig(**vars(p.parse_args(argv)))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "s", "C2", "argmin_r", "C0", "C_main_csc", "branch", "tildeC", "volume_gap_factor", "epsilon_lower"])
    for n in range(cfg.n_min, cfg.n_max + 1):
        rep = K.constants_report(n, cfg.s)
        w.writerow(
            [n, cfg.s, f"{rep.C2:.10f}", f"{rep.argmin_r:.6f}", f"{rep.C0:.8f}", f"{rep.C_main:.8f}", rep.branch,
             f"{rep.tildeC:.6g}", f"{rep.volume_gap_factor:.10f}", f"{rep.epsilon_lower:.10f}"]
        )


if __name__ == "__main__":
    main()
