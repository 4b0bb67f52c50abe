"""Run every check on the small catalog members and print a verdict count per surface."""

import argparse
import time
from dataclasses import dataclass

from sphereiso.geometry import parse_surface
from sphereiso.verify import CHECKS, Verdict, parse_axes, run_checks


@dataclass
class CatalogRun:
    surfaces: tuple[str, ...] = ("equator:2", "equator:3", "clifford:1,1", "clifford:1,2", "clifford:2,2")
    axes: str = "random:8:42"
    seed: int = 42


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--surfaces", nargs="+", default=list(CatalogRun.surfaces))
    p.add_argument("--axes", default=CatalogRun.axes, help="axis set; basis axes are always added")
    p.add_argument("--seed", type=int, default=CatalogRun.seed)
    args = p.parse_args(argv)
    cfg = CatalogRun(tuple(args.surfaces), args.axes, args.seed)
    print(f"{'surface':<14} {'PASS':>6} {'INCONCL':>8} {'FAIL':>5} {'skipped':>8} {'sec':>6}")
    for desc in cfg.surfaces:
        M = parse_surface(desc)
        axes = parse_axes("basis", M.ambient_dim) + parse_axes(cfg.axes, M.ambient_dim, cfg.seed)
        t0 = time.perf_counter()
        res = run_checks(M, CHECKS, axes)
        dt = time.perf_counter() - t0
        n = {v: sum(r.verdict is v for r in res.reports) for v in Verdict}
        print(
            f"{desc:<14} {n[Verdict.PASS]:>6} {n[Verdict.INCONCLUSIVE]:>8} {n[Verdict.FAIL]:>5} "
            f"{len(res.skipped):>8} {dt:>6.1f}"
        )


if __name__ == "__main__":
    main()
