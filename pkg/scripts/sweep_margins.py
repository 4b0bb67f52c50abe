"""Margin sweeps of the level-set checks for several surfaces (CSV + SVG per surface)."""

import argparse
from dataclasses import dataclass

from sphereiso.cli import main as cli_main


@dataclass
class SweepRun:
    surfaces: tuple[str, ...] = ("clifford:1,1", "clifford:1,2", "clifford:2,2")
    s: str = "0:0.7:0.05"
    axes: str = "basis"
    out: str = "sweeps"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--surfaces", nargs="+", default=list(SweepRun.surfaces))
    p.add_argument("--s", default=SweepRun.s)
    p.add_argument("--axes", default=SweepRun.axes)
    p.add_argument("--out", default=SweepRun.out)
    a = p.parse_args(argv)
    cfg = SweepRun(tuple(a.surfaces), a.s, a.axes, a.out)
    worst = 0
    for desc in cfg.surfaces:
        worst = max(worst, cli_main(["sweep", "--surface", desc, "--s", cfg.s, "--axes", cfg.axes, "--out", cfg.out]))
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
