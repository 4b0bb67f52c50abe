"""Command-line front end: ``catalog``, ``constants``, ``verify`` and ``sweep``.

Exit codes: 0 when no check FAILs, 2 when any does, 1 on usage or input
errors. ``SPHEREISO_OUT`` names the default output directory.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import constants as K
from .geometry import GeometryError, Hypersurface, make_clifford, make_equator, parse_surface
from .integrate import IntegrationError, MonteCarlo, parse_quad
from .levelset import LevelSetError
from .svg import Marker, Plot, Series, render
from .verify import CHECKS, HypothesisError, RunResult, Verdict, parse_axes, parse_checks, run_checks

OUT_ENV = "SPHEREISO_OUT"
SWEEP_CHECKS = ("thm_main_i", "cor_csc", "cor_ie")
USER_ERRORS = (GeometryError, LevelSetError, K.ConstantsError, IntegrationError, HypothesisError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# config


@dataclasses.dataclass
class RunConfig:
    """Flat key=value run description; flags override values read from a file."""

    surface: str = "clifford:1,1"
    axes: str = "default"
    quad: str = "auto"
    s_grid: str = "0:0.7:0.1"
    checks: str = "all"
    format: str = "json"
    out: str = ""
    seed: int = 42
    workers: int = 1

    def to_text(self) -> str:
        return "".join(f"{f.name}={getattr(self, f.name)}\n" for f in dataclasses.fields(self))

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        kinds = {f.name: f.type for f in dataclasses.fields(cls)}
        vals = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"config line {lineno}: expected key=value, got {raw!r}")
            key, value = (t.strip() for t in line.split("=", 1))
            if key not in kinds:
                raise UsageError(f"config line {lineno}: unknown key {key!r}")
            if kinds[key] in (int, "int"):
                try:
                    vals[key] = int(value)
                except ValueError:
                    raise UsageError(f"config line {lineno}: {key} must be an integer") from None
            else:
                vals[key] = value
        return cls(**vals)

    def digest(self) -> str:
        """sha256 of the canonical text, ignoring where and how the output is written."""
        canon = dataclasses.replace(self, out="", format="")
        return hashlib.sha256(canon.to_text().encode()).hexdigest()


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive stop) or a comma list."""
    t = text.strip()
    if t.startswith("s="):
        t = t[2:]
    try:
        if ":" in t:
            a, b, h = (float(v) for v in t.split(":"))
            if h <= 0 or b < a:
                raise ValueError
            k = int(math.floor((b - a) / h + 1e-9))
            return [round(a + i * h, 12) for i in range(k + 1)]
        vals = [float(v) for v in t.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}; use start:stop:step or a comma list") from None
    if not vals:
        raise UsageError("empty grid")
    return vals


# ---------------------------------------------------------------------------
# output helpers


def jsonable(v):
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, (np.floating, np.integer)):
        return jsonable(v.item())
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
        return v.value
    return v


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def header(cfg: RunConfig | None, seeds: dict, command: str) -> dict:
    return {
        "tool": "sphereiso",
        "version": __version__,
        "command": command,
        "config_sha256": cfg.digest() if cfg is not None else None,
        "seeds": seeds,
        # the output location is not part of the computation
        "config": {k: v for k, v in dataclasses.asdict(cfg).items() if k != "out"} if cfg is not None else None,
    }


def header_lines(h: dict) -> str:
    keys = ("tool", "version", "command", "config_sha256")
    lines = [f"# {k}: {h[k]}" for k in keys]
    lines.append("# seeds: " + ", ".join(f"{k}={v}" for k, v in h["seeds"].items()))
    return "\n".join(lines) + "\n"


def out_dir(flag: str | None) -> Path:
    d = Path(flag or os.environ.get(OUT_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# catalog


_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sphere_coefficient(k: int) -> tuple[Fraction, int]:
    """``Vol(S^k) = c * pi^m`` with rational ``c``."""
    if k % 2:
        j = (k + 1) // 2
        return Fraction(2, math.factorial(j - 1)), j
    j = k // 2
    return Fraction(2 * 4**j * math.factorial(j), math.factorial(2 * j)), j


def _square_part(N: int) -> tuple[int, int]:
    s, r, f = 1, N, 2
    while f * f <= r:
        while r % (f * f) == 0:
            r //= f * f
            s *= f
        f += 1
    return s, r


def symbolic_volume(M: Hypersurface) -> str:
    """Closed-form volume as text, e.g. ``2π²`` or ``16√3π²/9``."""
    c, rad, m = Fraction(1), Fraction(1), 0
    for k in M.dims:
        sc, sm = _sphere_coefficient(k)
        c *= sc
        m += sm
        r2 = Fraction(k, M.n) if M.variant == "clifford" else Fraction(1)
        c *= r2 ** (k // 2)
        if k % 2:
            rad *= r2
    s, r = _square_part(rad.numerator * rad.denominator)
    c = c * s / rad.denominator
    text = "" if c.numerator == 1 and r == 1 else str(c.numerator)
    if r > 1:
        text += f"√{r}"
    text += "π" + (str(m).translate(_SUP) if m > 1 else "")
    if c.denominator > 1:
        text += f"/{c.denominator}"
    return text


def catalog_members(max_n: int = 6) -> list[Hypersurface]:
    out = [make_equator(n) for n in range(2, max_n + 1)]
    out += [make_clifford(p, n - p) for n in range(2, max_n + 1) for p in range(1, n // 2 + 1)]
    return out


def catalog_entry(M: Hypersurface) -> dict:
    iso = M.isoparametric
    return {
        "descriptor": M.descriptor,
        "n": M.n,
        "S": M.S_const,
        "volume": M.closed_form_volume,
        "volume_symbolic": symbolic_volume(M),
        "radii": list(M.radii),
        "csc": M.csc,
        "radially_symmetric": M.radially_symmetric,
        "totally_geodesic": M.totally_geodesic,
        "lambda1": M.lambda1,
        "isoparametric_g": iso.g if iso else None,
    }


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.6g}"


def cmd_catalog(args) -> int:
    members = catalog_members(args.max_n)
    if args.json:
        sys.stdout.write(dumps({"header": header(None, {}, "catalog"), "members": [catalog_entry(M) for M in members]}))
        return 0
    width = max(len(M.descriptor) for M in members)
    for M in members:
        flags = [f for f, on in (("csc", M.csc), ("radial", M.radially_symmetric), ("totally-geodesic", M.totally_geodesic)) if on]
        print(
            f"{M.descriptor:<{width}}  n={M.n} S={_num(M.S_const)} Vol={symbolic_volume(M)} "
            + " ".join(flags)
            + f" λ₁={_num(M.lambda1)}"
        )
    return 0


# ---------------------------------------------------------------------------
# constants


def _constants_table(rep: K.ConstantsReport) -> str:
    d = rep.to_dict()
    w = max(len(k) for k in d)
    return "".join(f"{k:<{w}}  {_fmt(v)}\n" for k, v in d.items())


def cmd_constants(args) -> int:
    surface = parse_surface(args.surface) if args.surface else None
    n = surface.n if surface is not None else args.n
    if n is None:
        raise UsageError("constants needs --n or --surface")
    if n < 2:
        raise UsageError("n must be >= 2")
    if args.sweep is None:
        rep = K.constants_report(n, args.s, surface)
        if args.format == "json":
            sys.stdout.write(dumps({"header": header(None, {}, "constants"), "constants": rep.to_dict()}))
        else:
            sys.stdout.write(_constants_table(rep))
        return 0

    grid = parse_grid(args.sweep)
    if surface is not None:
        t1, t2, _ = K.surface_thetas(surface)
        C1 = max(t1, t2)
    else:
        C1 = 1.0 / (2 * n)
    rows, curves, marks = [], [], []
    for s in grid:
        c2, r, _ = K.C2(n, s)
        C, br = K.C_main(n, s, C1, c2)
        rows.append((s, c2, C, br.value))
        rs = np.linspace(s, 1.0, 401)[1:-1]
        curves.append(Series(f"s={s:g}", list(rs), list(K.lemma_coefficient(n, s, rs))))
        marks.append(Marker(r, c2, "" if len(grid) > 3 else f"r*={r:.4f}"))
    h = header(None, {}, "constants --sweep")
    buf = io.StringIO()
    buf.write(header_lines(h))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "C2", "C_main", "branch"])
    for s, c2, C, br in rows:
        w.writerow([repr(s), repr(c2), repr(C), br])
    sys.stdout.write(buf.getvalue())
    d = out_dir(args.out)
    if args.out:
        (d / f"constants_n{n}.csv").write_text(buf.getvalue())
    plot = Plot(
        title=f"f(r) = (2 + n r L)/(2 + n L), n = {n}",
        xlabel="r",
        ylabel="f(r)",
        series=curves,
        markers=marks,
        header=header_lines(h),
    )
    svg_path = d / f"constants_n{n}_f.svg"
    svg_path.write_text(render(plot))
    print(f"wrote {svg_path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# verify


def _merge_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            cfg = RunConfig.from_text(Path(args.config).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg


def _resolve(cfg: RunConfig):
    M = parse_surface(cfg.surface)
    axes = parse_axes(cfg.axes, M.ambient_dim, cfg.seed)
    quad = None if cfg.quad == "auto" else parse_quad(cfg.quad)
    checks = parse_checks(cfg.checks)
    grid = parse_grid(cfg.s_grid)
    seeds = {"axes": cfg.seed, "quadrature": quad.seed if isinstance(quad, MonteCarlo) else None}
    return M, axes, quad, checks, grid, seeds


CSV_COLUMNS = (
    "name",
    "surface",
    "axis",
    "params",
    "lhs",
    "rhs",
    "lhs_error",
    "rhs_error",
    "margin",
    "tolerance",
    "verdict",
    "branch",
    "outcome",
    "notes",
)


def reports_csv(result: RunResult, h: dict) -> str:
    buf = io.StringIO()
    buf.write(header_lines(h))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in result.reports:
        d = r.to_dict()
        d["params"] = ";".join(f"{k}={v!r}" for k, v in r.params.items())
        d["notes"] = " | ".join(r.notes)
        w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def reports_table(result: RunResult) -> str:
    rows = [("check", "axis", "params", "margin", "verdict")]
    for r in result.reports:
        p = " ".join(f"{k}={v:g}" for k, v in r.params.items())
        rows.append((r.name, r.axis or "", p, f"{r.margin:.6g}", r.verdict.value))
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in rows)


def summary_table(result: RunResult) -> str:
    agg: dict[str, list] = {}
    for r in result.reports:
        key = r.name.split(":")[0] if r.name.startswith(("divergence",)) else r.name
        a = agg.setdefault(key, [0, 0, 0, math.inf])
        a[{"PASS": 0, "INCONCLUSIVE": 1, "FAIL": 2}[r.verdict.value]] += 1
        if math.isfinite(r.margin):
            a[3] = min(a[3], r.margin)
    rows = [("check", "PASS", "INCONCLUSIVE", "FAIL", "min margin")]
    for k, (p, i, f, m) in agg.items():
        rows.append((k, str(p), str(i), str(f), f"{m:.6g}"))
    for name, msg in result.skipped:
        rows.append((name, "-", "-", "-", "skipped"))
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in rows)


def verify_document(cfg: RunConfig, result: RunResult, seeds: dict) -> dict:
    counts = {v.value: sum(r.verdict is v for r in result.reports) for v in Verdict}
    return {
        "header": header(cfg, seeds, "verify"),
        "summary": counts,
        "reports": [r.to_dict() for r in result.reports],
        "skipped": [{"check": c, "reason": m} for c, m in result.skipped],
    }


def cmd_verify(args) -> int:
    cfg = _merge_config(args)
    if cfg.format not in ("json", "csv", "table"):
        raise UsageError(f"unknown format {cfg.format!r}")
    M, axes, quad, checks, grid, seeds = _resolve(cfg)
    result = run_checks(M, checks, axes, quad, s_grid=grid, workers=cfg.workers)
    explicit = cfg.checks.strip() != "all"
    for name, msg in result.skipped:
        print(f"hypothesis rejected: {msg}", file=sys.stderr)
    if cfg.format == "json":
        text = dumps(verify_document(cfg, result, seeds))
    elif cfg.format == "csv":
        text = reports_csv(result, header(cfg, seeds, "verify"))
    else:
        text = header_lines(header(cfg, seeds, "verify")) + reports_table(result)
    target = cfg.out or (
        str(Path(os.environ[OUT_ENV]) / f"verify_{M.descriptor.replace(':', '_').replace(',', '-')}.{cfg.format}")
        if os.environ.get(OUT_ENV)
        else ""
    )
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text)
        sys.stdout.write(summary_table(result))
    else:
        sys.stdout.write(text)
        sys.stderr.write(summary_table(result))
    if explicit and result.skipped:
        return 1
    return 2 if result.any_fail else 0


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    cfg = _merge_config(args)
    if args.s is not None:
        cfg.s_grid = args.s
    if args.checks is None:
        cfg.checks = ",".join(SWEEP_CHECKS)
    if args.axes is None:
        cfg.axes = "basis"
    M, axes, quad, checks, grid, seeds = _resolve(cfg)
    checks = [c for c in checks if c in SWEEP_CHECKS]
    if not checks:
        raise UsageError(f"sweep supports the level-set checks {', '.join(SWEEP_CHECKS)}")
    result = run_checks(M, checks, axes, quad, s_grid=grid, workers=cfg.workers)
    for name, msg in result.skipped:
        print(f"hypothesis rejected: {msg}", file=sys.stderr)
    active = [c for c in checks if c not in {n for n, _ in result.skipped}]
    table: dict[tuple[str, float], dict] = {}
    for r in result.reports:
        row = table.setdefault((r.axis, r.params["s"]), {})
        row[r.name] = r
    h = header(cfg, seeds, "sweep")
    buf = io.StringIO()
    buf.write(header_lines(h))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["axis", "s"] + [f"margin_{c}" for c in active] + [f"verdict_{c}" for c in active] + ["near_critical"])
    for a in axes:
        for s in grid:
            row = table.get((a.describe(), s), {})
            flagged = any(any(n.startswith("flag:") for n in r.notes) for r in row.values())
            w.writerow(
                [a.describe(), repr(s)]
                + [_fmt(row[c].margin) if c in row else "" for c in active]
                + [row[c].verdict.value if c in row else "" for c in active]
                + [int(flagged)]
            )
    d = out_dir(cfg.out or None)
    stem = f"sweep_{M.descriptor.replace(':', '_').replace(',', '-')}"
    (d / f"{stem}.csv").write_text(buf.getvalue())
    for c in active:
        series, marks = [], []
        for a in axes:
            xs, ys = [], []
            for s in grid:
                r = table.get((a.describe(), s), {}).get(c)
                xs.append(s)
                ys.append(r.margin if r is not None else math.nan)
                if r is not None and r.verdict is not Verdict.PASS:
                    marks.append(Marker(s, r.margin if math.isfinite(r.margin) else 0.0, "", "cross"))
            series.append(Series(a.describe(), xs, ys))
        plot = Plot(
            title=f"{c} margins on {M.descriptor} (x: not PASS)",
            xlabel="s",
            ylabel="margin lhs - rhs",
            series=series,
            markers=marks,
            header=header_lines(h),
            zero_line=True,
        )
        (d / f"{stem}_{c}.svg").write_text(render(plot))
    sys.stdout.write(buf.getvalue())
    print(f"wrote {d / stem}.csv and {len(active)} svg file(s)", file=sys.stderr)
    return 2 if result.any_fail else 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sphereiso", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sphereiso {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list catalog members")
    c.add_argument("--json", action="store_true")
    c.add_argument("--max-n", type=int, default=6)
    c.set_defaults(func=cmd_catalog)

    k = sub.add_parser("constants", help="constants report or s-sweep")
    k.add_argument("--n", type=int)
    k.add_argument("--s", type=float, default=0.0)
    k.add_argument("--surface")
    k.add_argument("--format", choices=("json", "table"), default="table")
    k.add_argument("--sweep", help="s=start:stop:step")
    k.add_argument("--out", help="directory for sweep files")
    k.set_defaults(func=cmd_constants)

    def run_flags(q):
        q.add_argument("--config", help="key=value file; flags override it")
        q.add_argument("--surface")
        q.add_argument("--axes", help="default | basis | random:<k>:<seed> | ';'-separated axes")
        q.add_argument("--quad", help="auto | gauss:<order> | mc:<samples>:<seed>")
        q.add_argument("--checks", help="all | " + ",".join(CHECKS))
        q.add_argument("--seed", type=int)
        q.add_argument("--workers", type=int)
        q.add_argument("--out")

    v = sub.add_parser("verify", help="run inequality checks")
    run_flags(v)
    v.add_argument("--s-grid", dest="s_grid")
    v.add_argument("--format", choices=("json", "csv", "table"))
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="margins of the level-set checks against s")
    run_flags(s)
    s.add_argument("--s", help="start:stop:step")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sphereiso: {exc}", file=sys.stderr)
        return 1
    except USER_ERRORS as exc:
        print(f"sphereiso: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
