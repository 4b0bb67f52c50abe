"""Surface integration on catalog hypersurfaces.

Two engines are provided:

``integrate``
    Generic scalar fields evaluated on chart points. Tensor Gauss-Legendre
    quadrature over the angle box, or seeded Monte Carlo sampling of the box
    with the chart volume density as importance weight.

``integrate_height``
    Fields that depend on the point only through the height data of one axis
    (``phi_a``, ``psi_a``, ``|a^T|^2`` and the per-factor projections). Every
    catalog member is invariant under ``O(p+1) x O(q+1)`` (resp. ``O(n+1)``),
    which reduces such integrals to at most two polar angles. Kinks of the
    integrand at prescribed values of ``phi_a`` are then located in closed
    form and the quadrature is split there, for every axis, not only
    coordinate-aligned ones.

All reductions are fixed-order ``numpy`` sums (pairwise summation), blocks
and charts combined in declaration order, so results do not depend on the
number of worker threads.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .geometry import Axis, Chart, Hypersurface, embed, factor_projections, sphere_volume

EPS = np.finfo(float).eps
BLOCK_POINTS = 1 << 17
MC_BLOCK = 1 << 16


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TensorGauss:
    orders: tuple[int, ...]

    def __post_init__(self):
        if not self.orders or min(self.orders) < 2:
            raise ValueError("TensorGauss orders must be >= 2 in every dimension")

    def order(self, dim: int) -> int:
        return self.orders[dim] if dim < len(self.orders) else self.orders[-1]

    def lowered(self) -> "TensorGauss":
        return TensorGauss(tuple(o - 1 for o in self.orders))

    def __str__(self) -> str:
        return "gauss:" + "x".join(str(o) for o in self.orders)


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 100:
            raise ValueError("MonteCarlo needs at least 100 samples")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def __str__(self) -> str:
        return f"mc:{self.samples}:{self.seed}"


QuadratureSpec = TensorGauss | MonteCarlo

DEFAULT_MC = MonteCarlo(1_000_000, 42)


def parse_quad(text: str) -> QuadratureSpec:
    t = text.strip()
    m = re.fullmatch(r"gauss:(\d+(?:x\d+)*)", t)
    if m:
        return TensorGauss(tuple(int(o) for o in m.group(1).split("x")))
    m = re.fullmatch(r"mc:(\d+):(\d+)", t)
    if m:
        return MonteCarlo(int(m.group(1)), int(m.group(2)))
    raise ValueError(f"bad quadrature spec {text!r}; use gauss:<order> or mc:<samples>:<seed>")


def default_quad(M: Hypersurface) -> QuadratureSpec:
    return TensorGauss((64,)) if M.n <= 3 else DEFAULT_MC


def default_height_quad(M: Hypersurface) -> QuadratureSpec:
    # height-only integrands reduce to a 2-D orbit integral whatever n is
    return TensorGauss((64,))


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error: float
    method_tag: str
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError(f"error must be non-negative, got {self.error}")

    def scaled(self, c: float) -> "IntegralEstimate":
        return IntegralEstimate(c * self.value, abs(c) * self.error, self.method_tag, self.flags)

    def __add__(self, other: "IntegralEstimate") -> "IntegralEstimate":
        tag = self.method_tag if self.method_tag == other.method_tag else f"{self.method_tag}+{other.method_tag}"
        return IntegralEstimate(
            self.value + other.value, self.error + other.error, tag, tuple(dict.fromkeys(self.flags + other.flags))
        )

    def __sub__(self, other: "IntegralEstimate") -> "IntegralEstimate":
        return self + other.scaled(-1.0)

    @property
    def certified(self) -> bool:
        return math.isfinite(self.error)


@dataclass
class FrameBatch:
    """Vectorized frames at a batch of chart points."""

    coords: np.ndarray
    x: np.ndarray
    nu: np.ndarray
    jac: np.ndarray

    def phi(self, a: Axis) -> np.ndarray:
        return self.x @ a.array

    def psi(self, a: Axis) -> np.ndarray:
        return self.nu @ a.array

    def tangent_sq(self, a: Axis) -> np.ndarray:
        p, s = self.phi(a), self.psi(a)
        return np.clip(1.0 - p * p - s * s, 0.0, 1.0)


@dataclass
class HeightData:
    """Height data of one axis at a batch of points (all arrays broadcast together)."""

    phi: np.ndarray
    psi: np.ndarray
    tan2: np.ndarray
    proj: tuple
    rho: tuple[float, ...]


Field = Callable[[FrameBatch], np.ndarray]
HeightField = Callable[[HeightData], np.ndarray]


# ---------------------------------------------------------------------------
# generic chart integration


@lru_cache(maxsize=None)
def _leggauss(m: int):
    return np.polynomial.legendre.leggauss(m)


def _check_finite(vals, coords, chart_id):
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise IntegrationError(f"non-finite integrand {vals[i]!r} at chart {chart_id}, coords {tuple(coords[i])}")


def _nodes_1d(lo, hi, m):
    x, w = _leggauss(m)
    half = 0.5 * (hi - lo)
    return 0.5 * (hi + lo) + half * x, half * w


def _gauss_box(M, f, chart, chart_id, lo, hi, spec: TensorGauss, workers: int):
    dims = len(lo)
    nodes = [_nodes_1d(lo[d], hi[d], spec.order(d)) for d in range(dims)]
    rest_pts = int(np.prod([len(nodes[d][0]) for d in range(1, dims)])) if dims > 1 else 1
    chunk = max(1, BLOCK_POINTS // rest_pts)
    lead_x, lead_w = nodes[0]
    if dims > 1:
        rest_grid = np.meshgrid(*[nodes[d][0] for d in range(1, dims)], indexing="ij")
        rest_x = np.stack([g.ravel() for g in rest_grid], axis=1)
        rest_wgrid = np.meshgrid(*[nodes[d][1] for d in range(1, dims)], indexing="ij")
        rest_w = np.prod(np.stack([g.ravel() for g in rest_wgrid], axis=1), axis=1)
    else:
        rest_x, rest_w = np.zeros((1, 0)), np.ones(1)

    def block(start):
        lx, lw = lead_x[start : start + chunk], lead_w[start : start + chunk]
        coords = np.concatenate([np.repeat(lx, len(rest_w))[:, None], np.tile(rest_x, (len(lx), 1))], axis=1)
        w = np.repeat(lw, len(rest_w)) * np.tile(rest_w, len(lx))
        x, nu, jac = embed(M, coords, chart)
        vals = np.asarray(f(FrameBatch(coords, x, nu, jac)), dtype=float) * np.ones(len(w))
        _check_finite(vals, coords, chart_id)
        contrib = vals * jac * w
        return np.sum(contrib), np.sum(np.abs(contrib))

    starts = list(range(0, len(lead_x), chunk))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(block, starts))
    else:
        parts = [block(s) for s in starts]
    parts = np.array(parts)
    return np.sum(parts[:, 0]), np.sum(parts[:, 1])


def _split_box(lo, hi, dim, cuts):
    inner = sorted(c for c in cuts if lo[dim] < c < hi[dim])
    edges = [lo[dim], *inner, hi[dim]]
    for a, b in zip(edges[:-1], edges[1:]):
        l2, h2 = list(lo), list(hi)
        l2[dim], h2[dim] = a, b
        yield tuple(l2), tuple(h2)


def _aligned_cuts(M: Hypersurface, axis: Axis, values):
    """Chart and angle cuts making ``phi_axis - c`` sign-definite on every sub-box."""
    found = M.aligned_chart(axis)
    if found is None:
        return None
    chart, i, dim = found
    sign = axis.components[axis.aligned_index()]
    r = M.radii[i]
    cuts = []
    for c in values:
        w = c / (sign * r)
        if -1.0 < w < 1.0:
            t = math.acos(w)
            cuts.append(t)
            if M.dims[i] == 1:
                cuts.append(2.0 * math.pi - t)
    return chart, dim, cuts


def _gauss_integrate(M, f, spec, kinks, workers):
    boxes = []
    if kinks is not None:
        axis, values = kinks
        chart, dim, cuts = _aligned_cuts(M, axis, values)
        boxes = [(chart, lo, hi) for lo, hi in _split_box(chart.lower, chart.upper, dim, cuts)]
    else:
        boxes = [(ch, ch.lower, ch.upper) for ch in M.charts]
    sums, mags = [], []
    for chart, lo, hi in boxes:
        s, a = _gauss_box(M, f, chart, 0, lo, hi, spec, workers)
        sums.append(s)
        mags.append(a)
    return float(np.sum(sums)), float(np.sum(mags))


def _mc_blocks(samples: int):
    nb = -(-samples // MC_BLOCK)
    return [(b, min(MC_BLOCK, samples - b * MC_BLOCK)) for b in range(nb)]


def _mc_coords(chart: Chart, chart_id: int, seed: int, block: int, size: int):
    # counter-based stream per (chart, block): Philox jumped by a distinct offset
    bitgen = np.random.Philox(key=seed).jumped(chart_id * (1 << 32) + block)
    rng = np.random.Generator(bitgen)
    lo, hi = np.array(chart.lower), np.array(chart.upper)
    return lo + (hi - lo) * rng.random((size, len(lo)))


def _mc_integrate(M, f, spec: MonteCarlo, workers):
    total_s1, total_s2 = [], []
    for cid, chart in enumerate(M.charts):
        vol = chart.volume

        def block(bs, chart=chart, cid=cid, vol=vol):
            b, size = bs
            coords = _mc_coords(chart, cid, spec.seed, b, size)
            x, nu, jac = embed(M, coords, chart)
            vals = np.asarray(f(FrameBatch(coords, x, nu, jac)), dtype=float) * np.ones(size)
            _check_finite(vals, coords, cid)
            y = vals * jac * vol
            return np.sum(y), np.sum(y * y)

        blocks = _mc_blocks(spec.samples)
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                parts = list(ex.map(block, blocks))
        else:
            parts = [block(b) for b in blocks]
        parts = np.array(parts)
        total_s1.append(np.sum(parts[:, 0]))
        total_s2.append(np.sum(parts[:, 1]))
    N = spec.samples
    means = np.array(total_s1) / N
    var = (np.array(total_s2) - N * means**2) / (N - 1)
    value = float(np.sum(means))
    error = 3.0 * math.sqrt(max(float(np.sum(var)), 0.0) / N)
    return value, error


def integrate(
    M: Hypersurface,
    f: Field,
    quad: QuadratureSpec,
    kinks: tuple[Axis, tuple[float, ...]] | None = None,
    workers: int = 1,
) -> IntegralEstimate:
    """Integrate a pointwise field ``f(batch)`` over ``M``.

    ``kinks=(axis, values)`` declares that ``f`` may be non-smooth where
    ``phi_axis`` takes one of ``values``. Under Gauss quadrature the chart box
    is then split along those level sets when the axis is a signed basis
    vector; for other axes the estimate falls back to Monte Carlo.
    """
    if isinstance(quad, TensorGauss):
        if kinks is not None and M.aligned_chart(kinks[0]) is None:
            v, e = _mc_integrate(M, f, DEFAULT_MC, workers)
            return IntegralEstimate(v, e, str(DEFAULT_MC), ("gauss-fallback-mc",))
        hi, mag = _gauss_integrate(M, f, quad, kinks, workers)
        lo, _ = _gauss_integrate(M, f, quad.lowered(), kinks, workers)
        err = abs(hi - lo) + 16 * EPS * mag
        return IntegralEstimate(hi, float(err), str(quad))
    v, e = _mc_integrate(M, f, quad, workers)
    return IntegralEstimate(v, e, str(quad))


# ---------------------------------------------------------------------------
# height-function integration


def _height_from_frames(M: Hypersurface, a: Axis, x, nu) -> HeightData:
    av = a.array
    phi, psi = x @ av, nu @ av
    proj, rho = factor_projections(M, x, a)
    tan2 = sum(np.clip(rh * rh - pr * pr, 0.0, None) for pr, rh in zip(proj, rho))
    return HeightData(phi, psi, tan2, proj, rho)


@lru_cache(maxsize=2)
def _mc_frames(M: Hypersurface, spec: MonteCarlo):
    xs, nus, ws = [], [], []
    for cid, chart in enumerate(M.charts):
        for b, size in _mc_blocks(spec.samples):
            coords = _mc_coords(chart, cid, spec.seed, b, size)
            x, nu, jac = embed(M, coords, chart)
            xs.append(x)
            nus.append(nu)
            ws.append(jac * chart.volume)
    return np.concatenate(xs), np.concatenate(nus), np.concatenate(ws)


def height_samples(M: Hypersurface, a: Axis, spec: MonteCarlo) -> tuple[HeightData, np.ndarray]:
    """Monte Carlo sample of height data with importance weights (same points as ``integrate``)."""
    x, nu, w = _mc_frames(M, spec)
    return _height_from_frames(M, a, x, nu), w


def _orbit_setup(M: Hypersurface, a: Axis):
    _, rho = factor_projections(M, np.zeros((1, M.ambient_dim)), a)
    amps = [r * rh for r, rh in zip(M.radii, rho)]
    const = 1.0
    for k, r in zip(M.dims, M.radii):
        const *= r**k * sphere_volume(k - 1)
    return rho, amps, const


def _height_at(M, a, rho, cosines, sines2):
    proj = tuple(rh * c for rh, c in zip(rho, cosines))
    if M.variant == "equator":
        phi = proj[0]
        psi = np.full_like(phi, a.components[-1])
    else:
        r1, r2 = M.radii
        phi = r1 * proj[0] + r2 * proj[1]
        psi = -r2 * proj[0] + r1 * proj[1]
    tan2 = sum(rh * rh * s2 for rh, s2 in zip(rho, sines2))
    return HeightData(phi, psi, tan2, proj, rho)


def _inner_edges(shift, amp, breaks):
    """Polar angles where ``amp * cos(alpha) + shift`` crosses each break value.

    Out-of-range crossings clip to 0 or pi and yield empty pieces.
    """
    shift = np.asarray(shift, dtype=float)
    cols = [np.zeros_like(shift), np.full_like(shift, math.pi)]
    if amp > 0:
        for b in breaks:
            cols.append(np.arccos(np.clip((b - shift) / amp, -1.0, 1.0)))
    return np.sort(np.stack(cols, axis=-1), axis=-1)


def _cosine_map_nodes(A, B, m):
    # beta = A + (B - A)(1 - cos(pi tau))/2 smooths sqrt-type endpoint behaviour
    x, w = _leggauss(m)
    tau = 0.5 * (x + 1.0)
    beta = A + (B - A) * 0.5 * (1.0 - np.cos(math.pi * tau))
    wb = 0.5 * w * (B - A) * 0.5 * math.pi * np.sin(math.pi * tau)
    return beta, wb


def _support_columns(breaks, support, amp):
    """Inner pieces whose phi-range meets ``support``.

    Edges from ``_inner_edges`` sort by polar angle, i.e. by decreasing break
    value, so piece ``k`` always spans the same phi-interval between
    consecutive breaks whatever the outer angle is.
    """
    if support is None or amp <= 0:
        return None
    bd = sorted(breaks, reverse=True)
    tops = [math.inf] + bd
    bottoms = bd + [-math.inf]
    keep = [k for k, (top, bot) in enumerate(zip(tops, bottoms)) if any(lo < top and bot < hi for lo, hi in support)]
    return np.array(keep, dtype=int)


def _orbit_integral(M: Hypersurface, a: Axis, g: HeightField, breaks, m: int, support=None):
    rho, amps, const = _orbit_setup(M, a)
    xg, wg = _leggauss(m)
    if len(M.dims) == 1:
        k = M.dims[0]
        edges = _inner_edges(np.zeros(1), amps[0], breaks)[0]
        lo, hi = edges[:-1], edges[1:]
        cols = _support_columns(breaks, support, amps[0])
        if cols is not None:
            lo, hi = lo[cols], hi[cols]
        al = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * xg
        wt = 0.5 * (hi - lo)[:, None] * wg * np.sin(al) ** (k - 1)
        h = _height_at(M, a, rho, (np.cos(al),), (np.sin(al) ** 2,))
        vals = np.asarray(g(h), dtype=float) * np.ones_like(al)
        contrib = vals * wt
        return const * float(np.sum(contrib)), const * float(np.sum(np.abs(contrib)))

    inner = 0 if amps[0] >= amps[1] else 1
    outer = 1 - inner
    ki, ko = M.dims[inner], M.dims[outer]
    ai, ao = amps[inner], amps[outer]
    outer_cuts = [0.0, math.pi]
    if ao > 0:
        for b in breaks:
            for sgn in (1.0, -1.0):
                w = (b - sgn * ai) / ao
                if -1.0 < w < 1.0:
                    outer_cuts.append(math.acos(w))
    outer_cuts = sorted(set(outer_cuts))
    betas, wbs = [], []
    for A, B in zip(outer_cuts[:-1], outer_cuts[1:]):
        bt, wb = _cosine_map_nodes(A, B, m)
        betas.append(bt)
        wbs.append(wb)
    beta = np.concatenate(betas)
    wbeta = np.concatenate(wbs) * np.sin(beta) ** (ko - 1)

    edges = _inner_edges(ao * np.cos(beta), ai, breaks)  # (J, K+1)
    lo, hi = edges[:, :-1, None], edges[:, 1:, None]
    cols = _support_columns(breaks, support, ai)
    if cols is not None:
        lo, hi = lo[:, cols], hi[:, cols]
    al = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xg  # (J, K, m)
    wal = 0.5 * (hi - lo) * wg * np.sin(al) ** (ki - 1)
    b3 = beta[:, None, None]
    cos = [None, None]
    sin2 = [None, None]
    cos[inner], sin2[inner] = np.cos(al), np.sin(al) ** 2
    cos[outer], sin2[outer] = np.cos(b3), np.sin(b3) ** 2
    h = _height_at(M, a, rho, tuple(cos), tuple(sin2))
    vals = np.asarray(g(h), dtype=float) * np.ones_like(al)
    contrib = vals * wal * wbeta[:, None, None]
    return const * float(np.sum(contrib)), const * float(np.sum(np.abs(contrib)))


def integrate_height(
    M: Hypersurface,
    a: Axis,
    g: HeightField,
    quad: QuadratureSpec,
    breaks: tuple[float, ...] = (),
    support: tuple[tuple[float, float], ...] | None = None,
) -> IntegralEstimate:
    """Integrate ``g(height data)`` over ``M``; ``g`` may kink where ``phi_a`` hits ``breaks``.

    ``support`` optionally lists phi-intervals outside of which ``g`` is known
    to vanish; the orbit rule then skips the pieces in between.
    """
    if isinstance(quad, TensorGauss):
        m = max(quad.orders)
        hi, mag = _orbit_integral(M, a, g, breaks, m, support)
        lo, _ = _orbit_integral(M, a, g, breaks, m - 1, support)
        if not (math.isfinite(hi) and math.isfinite(lo)):
            raise IntegrationError(f"non-finite height integrand on {M} for axis {a.describe()}")
        return IntegralEstimate(hi, float(abs(hi - lo) + 16 * EPS * mag), f"orbit-{quad}")
    h, w = height_samples(M, a, quad)
    vals = np.asarray(g(h), dtype=float) * np.ones_like(w)
    if not np.all(np.isfinite(vals)):
        raise IntegrationError(f"non-finite height integrand on {M} for axis {a.describe()}")
    y = vals * w
    N = len(y)
    mean = float(np.sum(y)) / N
    var = max(float(np.sum((y - mean) ** 2)) / (N - 1), 0.0)
    return IntegralEstimate(mean, 3.0 * math.sqrt(var / N), str(quad))


# ---------------------------------------------------------------------------
# basic integral quantities


def volume(M: Hypersurface, quad: QuadratureSpec) -> IntegralEstimate:
    return integrate(M, lambda b: np.ones(len(b.jac)), quad)


def moment2(M: Hypersurface, a: Axis, quad: QuadratureSpec) -> IntegralEstimate:
    return integrate_height(M, a, lambda h: h.phi**2, quad)


def moment_abs(M: Hypersurface, a: Axis, quad: QuadratureSpec) -> IntegralEstimate:
    return integrate_height(M, a, lambda h: np.abs(h.phi), quad, breaks=(0.0,))


def s_integrals(M: Hypersurface, quad: QuadratureSpec | None = None) -> tuple[float, float, float]:
    """``(int S, int S^2, S_max)``; exact for constant-``S`` members."""
    S = M.S_const
    vol = M.closed_form_volume
    return S * vol, S * S * vol, S


def simons_integral(M: Hypersurface) -> float:
    """``int S (S - n)``, evaluated analytically for constant ``S``."""
    S = M.S_const
    return S * (S - M.n) * M.closed_form_volume
