"""Volumes of level and superlevel sets of height functions.

Two estimators are available. ``AnalyticSlice`` applies when the axis is a
signed ambient basis vector: the height is then ``r * cos(alpha)`` in the
polar angle of one factor sphere and level sets are products of latitude
spheres. ``CoareaBand`` applies to any axis and uses the co-area formula,

    (1 / 2 eps) * int_{band of half-width eps around the level} g |a^T| dV
        -> int_{level} g dsigma,

with optional Richardson extrapolation in ``eps**2``.

Convention: for ``s > 0`` level quantities count both sheets ``phi = +s`` and
``phi = -s``; for ``s = 0`` they count the single nodal set ``phi = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Axis, Hypersurface, critical_values, sphere_volume
from .integrate import (
    EPS,
    HeightData,
    IntegralEstimate,
    QuadratureSpec,
    _leggauss,
    default_height_quad,
    integrate_height,
)

CRITICAL_GRAD = 1e-6
CRITICAL_FRACTION = 1e-3
NEAR_CRITICAL = "near-critical level"


class LevelSetError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyticSlice:
    def __str__(self) -> str:
        return "analytic"


@dataclass(frozen=True)
class CoareaBand:
    half_widths: tuple[float, ...] = (0.02, 0.01, 0.005)
    richardson: bool = True

    def __post_init__(self):
        hw = self.half_widths
        if not hw or any(e <= 0 for e in hw) or any(b >= a for a, b in zip(hw, hw[1:])):
            raise LevelSetError("band half-widths must be positive and strictly decreasing")

    def __str__(self) -> str:
        return "band:" + ",".join(repr(e) for e in self.half_widths)


LevelMethod = AnalyticSlice | CoareaBand


@dataclass(frozen=True)
class LevelQuery:
    surface: Hypersurface
    axis: Axis
    s: float
    method: LevelMethod = field(default_factory=CoareaBand)
    quad: QuadratureSpec | None = None

    def __post_init__(self):
        if not 0.0 <= self.s < 1.0:
            raise LevelSetError(f"level s must lie in [0, 1), got {self.s}")
        if self.axis.dim != self.surface.ambient_dim:
            raise LevelSetError("axis dimension does not match the ambient space")
        if isinstance(self.method, AnalyticSlice) and self.axis.aligned_index() is None:
            raise LevelSetError("AnalyticSlice needs an axis aligned with one ambient coordinate")

    @property
    def quadrature(self) -> QuadratureSpec:
        return self.quad if self.quad is not None else default_height_quad(self.surface)


def auto_method(a: Axis, band: CoareaBand | None = None) -> LevelMethod:
    return AnalyticSlice() if a.aligned_index() is not None else (band or CoareaBand())


def _aligned_factor(M: Hypersurface, a: Axis):
    """``(factor index, radius)`` for a basis axis, or ``None`` if it is normal to ``M``'s span."""
    k = a.aligned_index()
    for i, sl in enumerate(M.factor_slices):
        if sl.start <= k < sl.stop:
            return i, M.radii[i]
    return None


def _other_volume(M: Hypersurface, i: int) -> float:
    vol = 1.0
    for j, (k, r) in enumerate(zip(M.dims, M.radii)):
        if j != i:
            vol *= r**k * sphere_volume(k)
    return vol


def _cap_integral(k: int, top: float):
    """``int_0^top sin^(k-1)`` at Gauss orders 64 and 63."""
    out = []
    for m in (64, 63):
        x, w = _leggauss(m)
        t = 0.5 * top * (x + 1.0)
        out.append(0.5 * top * float(np.sum(w * np.sin(t) ** (k - 1))))
    return out


def _is_critical_ratio(c: float) -> bool:
    return abs(c - 1.0) <= 1e-12


def _analytic_superlevel(M: Hypersurface, a: Axis, s: float) -> IntegralEstimate:
    found = _aligned_factor(M, a)
    if found is None:
        # phi is identically zero
        v = M.closed_form_volume if s == 0.0 else 0.0
        return IntegralEstimate(v, 0.0, "analytic")
    i, r = found
    c = s / r
    if c >= 1.0:
        return IntegralEstimate(0.0, 0.0, "analytic")
    k = M.dims[i]
    hi, lo = _cap_integral(k, math.acos(c))
    scale = 2.0 * _other_volume(M, i) * r**k * sphere_volume(k - 1)
    return IntegralEstimate(scale * hi, scale * (abs(hi - lo) + 16 * EPS * hi), "analytic")


def _analytic_level(M: Hypersurface, a: Axis, s: float) -> IntegralEstimate:
    found = _aligned_factor(M, a)
    if found is None:
        if s == 0.0:
            return IntegralEstimate(math.inf, math.inf, "analytic", (NEAR_CRITICAL,))
        return IntegralEstimate(0.0, 0.0, "analytic")
    i, r = found
    c = s / r
    flags: tuple[str, ...] = ()
    if c > 1.0 and not _is_critical_ratio(c):
        return IntegralEstimate(0.0, 0.0, "analytic")
    err = 0.0
    if _is_critical_ratio(c):
        c, err, flags = 1.0, math.inf, (NEAR_CRITICAL,)
    k = M.dims[i]
    sheets = 1 if s == 0.0 else 2
    radius = r * math.sqrt(max(0.0, 1.0 - c * c))
    v = sheets * _other_volume(M, i) * sphere_volume(k - 1) * radius ** (k - 1)
    return IntegralEstimate(v, err, "analytic", flags)


def superlevel_volume(q: LevelQuery) -> IntegralEstimate:
    """``Vol{|phi_a| >= s}``."""
    if isinstance(q.method, AnalyticSlice):
        return _analytic_superlevel(q.surface, q.axis, q.s)
    s = q.s
    return integrate_height(
        q.surface,
        q.axis,
        lambda h: (np.abs(h.phi) >= s).astype(float),
        q.quadrature,
        breaks=(s, -s) if s > 0 else (),
        support=((s, math.inf), (-math.inf, -s)) if s > 0 else None,
    )


def _band_indicator(phi, s, eps):
    if s == 0.0:
        return (np.abs(phi) <= eps).astype(float)
    return (np.abs(phi - s) <= eps).astype(float) + (np.abs(phi + s) <= eps).astype(float)


def _band_breaks(s, eps):
    if s == 0.0:
        return (-eps, eps)
    return (s - eps, s + eps, -s - eps, -s + eps)


def _band_support(s, eps):
    if s == 0.0:
        return ((-eps, eps),)
    return ((s - eps, s + eps), (-s - eps, -s + eps))


def _band_estimate(M, a, s, eps, weight, quad):
    def g(h: HeightData):
        return weight(h) * np.sqrt(h.tan2) * _band_indicator(h.phi, s, eps) / (2.0 * eps)

    return integrate_height(M, a, g, quad, breaks=_band_breaks(s, eps), support=_band_support(s, eps))


def _near_critical(M, a, s, eps, quad) -> bool:
    crit = critical_values(M, a)
    if any(abs(abs(c) - s) <= eps for c in crit):
        return True
    brk, sup = _band_breaks(s, eps), _band_support(s, eps)
    band = integrate_height(M, a, lambda h: _band_indicator(h.phi, s, eps), quad, breaks=brk, support=sup)
    if band.value <= 0.0:
        return False
    flat = integrate_height(
        M,
        a,
        lambda h: _band_indicator(h.phi, s, eps) * (h.tan2 < CRITICAL_GRAD**2),
        quad,
        breaks=brk,
        support=sup,
    )
    return flat.value / band.value > CRITICAL_FRACTION


def _richardson(e_a, e_b, eps_a, eps_b):
    d = eps_a**2 - eps_b**2
    v = (eps_a**2 * e_b.value - eps_b**2 * e_a.value) / d
    err = (eps_a**2 * e_b.error + eps_b**2 * e_a.error) / d
    return v, err


def level_integral(
    M: Hypersurface,
    a: Axis,
    s: float,
    weight: Callable[[HeightData], np.ndarray] | None = None,
    band: CoareaBand | None = None,
    quad: QuadratureSpec | None = None,
) -> IntegralEstimate:
    """Band estimate of ``int_{|phi_a| = s} weight dsigma`` (weight defaults to 1)."""
    band = band or CoareaBand()
    quad = quad if quad is not None else default_height_quad(M)
    weight = weight or (lambda h: 1.0)
    hw = band.half_widths
    ests = [_band_estimate(M, a, s, e, weight, quad) for e in hw]
    tag = f"{band}/{ests[-1].method_tag}"
    if band.richardson and len(hw) >= 2:
        v1, e1 = _richardson(ests[-2], ests[-1], hw[-2], hw[-1])
        if len(hw) >= 3:
            v0, _ = _richardson(ests[-3], ests[-2], hw[-3], hw[-2])
            bias = abs(v1 - v0)
        else:
            bias = abs(v1 - ests[-1].value)
        value, error = v1, e1 + bias
    else:
        value = ests[-1].value
        error = ests[-1].error + (abs(ests[-1].value - ests[-2].value) if len(hw) >= 2 else 0.0)
    flags: tuple[str, ...] = ()
    if _near_critical(M, a, s, hw[0], quad):
        error, flags = math.inf, (NEAR_CRITICAL,)
    return IntegralEstimate(value, error, tag, flags)


def level_volume(q: LevelQuery) -> IntegralEstimate:
    """``(n-1)``-volume of ``{|phi_a| = s}`` (both sheets for ``s > 0``)."""
    if isinstance(q.method, AnalyticSlice):
        return _analytic_level(q.surface, q.axis, q.s)
    return level_integral(q.surface, q.axis, q.s, band=q.method, quad=q.quadrature)


def signed_balance_estimate(M: Hypersurface, a: Axis, quad: QuadratureSpec) -> IntegralEstimate:
    return integrate_height(M, a, lambda h: np.sign(h.phi), quad, breaks=(0.0,))


def signed_balance(M: Hypersurface, a: Axis, quad: QuadratureSpec) -> float:
    """``Vol{phi_a > 0} - Vol{phi_a < 0}``."""
    return signed_balance_estimate(M, a, quad).value


@dataclass(frozen=True)
class CheegerEstimate:
    value: float
    error: float
    axis: Axis
    nodal_volume: IntegralEstimate
    volume: float


def cheeger_upper_detail(
    M: Hypersurface, axes, quad: QuadratureSpec, band: CoareaBand | None = None
) -> CheegerEstimate:
    """Smallest ``2 Vol{phi_a = 0} / Vol(M)`` over balanced axes, an upper bound for ``h(M)``."""
    axes = list(axes)
    if not axes:
        raise LevelSetError("cheeger estimate needs at least one axis")
    vol = M.closed_form_volume
    best = None
    for a in axes:
        if not M.radially_symmetric:
            bal = signed_balance_estimate(M, a, quad)
            if abs(bal.value) > bal.error:
                raise LevelSetError(f"axis {a.describe()} is not balanced on {M}")
        nodal = level_volume(LevelQuery(M, a, 0.0, auto_method(a, band), quad))
        if not nodal.certified:
            continue
        h = 2.0 * nodal.value / vol
        if best is None or h < best.value:
            best = CheegerEstimate(h, 2.0 * nodal.error / vol, a, nodal, vol)
    if best is None:
        raise LevelSetError("no axis gave a certified nodal volume")
    return best


def cheeger_upper_estimate(M: Hypersurface, axes, quad: QuadratureSpec) -> float:
    return cheeger_upper_detail(M, axes, quad).value
