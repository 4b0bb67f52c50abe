"""Catalog of closed minimal hypersurfaces in the unit sphere and their pointwise geometry.

Two families are available:

* ``equator:<n>``  -- the totally geodesic ``S^n`` sitting in the first ``n+1``
  ambient coordinates of ``S^{n+1}``, with constant unit normal ``e_{n+2}``.
* ``clifford:<p>,<q>`` -- the minimal product ``S^p(r1) x S^q(r2)`` with
  ``r1 = sqrt(p/n)``, ``r2 = sqrt(q/n)``, ``n = p + q``.

Every member is isoparametric, so the shape operator is stored as a list of
``(principal curvature, multiplicity)`` pairs and all pointwise quantities are
closed form. Points are addressed through hyperspherical angle charts on each
factor sphere.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Invalid surface, axis or chart point."""


def sphere_volume(k: int) -> float:
    """Volume of the unit round sphere ``S^k`` (``S^0`` is two points)."""
    return 2.0 * math.pi ** ((k + 1) / 2) / math.gamma((k + 1) / 2)


@dataclass(frozen=True)
class Axis:
    """Unit vector of the ambient space defining the height functions."""

    components: tuple[float, ...]

    def __post_init__(self):
        norm = math.sqrt(math.fsum(c * c for c in self.components))
        if abs(norm - 1.0) > 1e-12:
            raise GeometryError(f"axis must have unit norm, got |a| = {norm!r}")

    @classmethod
    def from_vector(cls, v) -> "Axis":
        v = np.asarray(v, dtype=float)
        norm = float(np.linalg.norm(v))
        if not np.isfinite(norm) or norm == 0.0:
            raise GeometryError("cannot normalize a zero or non-finite vector")
        return cls(tuple(float(c) for c in v / norm))

    @classmethod
    def basis(cls, dim: int, k: int, sign: int = 1) -> "Axis":
        """Signed ambient basis vector; ``k`` is 1-based."""
        if not 1 <= k <= dim:
            raise GeometryError(f"basis index {k} outside 1..{dim}")
        v = [0.0] * dim
        v[k - 1] = float(sign)
        return cls(tuple(v))

    @classmethod
    def random(cls, dim: int, seed: int) -> "Axis":
        rng = np.random.default_rng(seed)
        return cls.from_vector(rng.standard_normal(dim))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.components)

    @property
    def dim(self) -> int:
        return len(self.components)

    def __neg__(self) -> "Axis":
        return Axis(tuple(-c for c in self.components))

    def aligned_index(self) -> int | None:
        """0-based index ``k`` if the axis is ``+-e_k``, else ``None``."""
        nz = [i for i, c in enumerate(self.components) if c != 0.0]
        if len(nz) == 1 and abs(abs(self.components[nz[0]]) - 1.0) <= 1e-12:
            return nz[0]
        return None

    def describe(self) -> str:
        k = self.aligned_index()
        if k is not None:
            return ("-" if self.components[k] < 0 else "") + f"e{k + 1}"
        return ",".join(repr(c) for c in self.components)


@dataclass(frozen=True)
class ChartPoint:
    chart_id: int
    coords: tuple[float, ...]


@dataclass(frozen=True)
class Chart:
    """Hyperspherical angle box.

    ``poles`` names, per factor sphere, which of its ambient coordinates plays
    the role of the polar axis (the first angle is measured from it). Charts
    differing only in their poles parametrize the same surface.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    poles: tuple[int, ...]
    overlap: str = "boundary faces only (measure zero)"

    def contains(self, coords) -> bool:
        c = np.asarray(coords, dtype=float)
        lo, hi = np.array(self.lower), np.array(self.upper)
        return bool(np.all(c >= lo) and np.all(c <= hi))

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.upper, self.lower)))


@dataclass(frozen=True)
class PointFrame:
    position: np.ndarray
    normal: np.ndarray
    principal_curvatures: tuple[tuple[float, int], ...]
    S: float
    H: float
    metric_jacobian: float


@dataclass(frozen=True)
class IsoparametricMeta:
    n: int
    g: int

    def __post_init__(self):
        if not 2 <= self.g <= 6:
            raise GeometryError(f"isoparametric g must lie in 2..6, got {self.g}")

    @property
    def S(self) -> float:
        return float((self.g - 1) * self.n)

    @property
    def delta(self) -> float:
        return math.sqrt(self.g - 2)


@dataclass(frozen=True)
class Hypersurface:
    variant: str
    dims: tuple[int, ...]

    def __post_init__(self):
        if self.variant == "equator":
            if len(self.dims) != 1 or self.dims[0] < 2:
                raise GeometryError("equator requires n >= 2")
        elif self.variant == "clifford":
            if len(self.dims) != 2 or min(self.dims) < 1:
                raise GeometryError("clifford requires p >= 1 and q >= 1")
        else:
            raise GeometryError(f"unknown variant {self.variant!r}")

    @property
    def n(self) -> int:
        return sum(self.dims)

    @property
    def ambient_dim(self) -> int:
        return self.n + 2

    @property
    def radii(self) -> tuple[float, ...]:
        if self.variant == "equator":
            return (1.0,)
        return tuple(math.sqrt(k / self.n) for k in self.dims)

    @property
    def factor_slices(self) -> tuple[slice, ...]:
        out, start = [], 0
        for k in self.dims:
            out.append(slice(start, start + k + 1))
            start += k + 1
        return tuple(out)

    @property
    def totally_geodesic(self) -> bool:
        return self.variant == "equator"

    @property
    def csc(self) -> bool:
        return True

    @property
    def radially_symmetric(self) -> bool:
        return True

    @property
    def S_const(self) -> float:
        return 0.0 if self.totally_geodesic else float(self.n)

    @property
    def principal_curvatures(self) -> tuple[tuple[float, int], ...]:
        """Per-factor ``(value, multiplicity)``; ordered like ``dims``."""
        if self.variant == "equator":
            return ((0.0, self.n),)
        p, q = self.dims
        r1, r2 = self.radii
        return ((r2 / r1, p), (-r1 / r2, q))

    @property
    def lambda1(self) -> float:
        # first eigenvalue: n for minimal isoparametric hypersurfaces and for round S^n
        return float(self.n)

    @property
    def isoparametric(self) -> IsoparametricMeta | None:
        if self.variant == "clifford":
            return IsoparametricMeta(self.n, 2)
        return None

    @property
    def descriptor(self) -> str:
        return f"{self.variant}:" + ",".join(str(k) for k in self.dims)

    @property
    def closed_form_volume(self) -> float:
        vol = 1.0
        for k, r in zip(self.dims, self.radii):
            vol *= r**k * sphere_volume(k)
        return vol

    def chart_box(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        lo, hi = [], []
        for k in self.dims:
            lo += [0.0] * k
            hi += [math.pi] * (k - 1) + [TWO_PI]
        return tuple(lo), tuple(hi)

    @property
    def charts(self) -> tuple[Chart, ...]:
        lo, hi = self.chart_box()
        return (Chart(lo, hi, (0,) * len(self.dims)),)

    def aligned_chart(self, axis: Axis) -> tuple[Chart, int, int] | None:
        """Chart whose first angle of one factor is the polar angle about ``axis``.

        Returns ``(chart, factor index, angle index in coords)`` for
        ``axis = +-e_k`` with ``k`` inside a factor, else ``None``.
        """
        k = axis.aligned_index()
        if k is None:
            return None
        lo, hi = self.chart_box()
        offset = 0
        for i, sl in enumerate(self.factor_slices):
            if sl.start <= k < sl.stop:
                poles = [0] * len(self.dims)
                poles[i] = k - sl.start
                return Chart(lo, hi, tuple(poles)), i, offset
            offset += self.dims[i]
        return None

    def __str__(self) -> str:
        return self.descriptor


def make_clifford(p: int, q: int) -> Hypersurface:
    if p < 1 or q < 1:
        raise GeometryError(f"clifford:{p},{q} needs p >= 1 and q >= 1")
    return Hypersurface("clifford", (int(p), int(q)))


def make_equator(n: int) -> Hypersurface:
    if n < 2:
        raise GeometryError(f"equator needs n >= 2, got {n}")
    return Hypersurface("equator", (int(n),))


_SURFACE_RE = re.compile(r"^\s*(equator|clifford)\s*:\s*([0-9,\s]+)$")


def parse_surface(text: str) -> Hypersurface:
    m = _SURFACE_RE.match(text)
    if not m:
        raise GeometryError(f"bad surface descriptor {text!r}; use equator:<n> or clifford:<p>,<q>")
    nums = [int(t) for t in m.group(2).split(",") if t.strip()]
    if m.group(1) == "equator":
        if len(nums) != 1:
            raise GeometryError("equator takes a single dimension")
        return make_equator(nums[0])
    if len(nums) != 2:
        raise GeometryError("clifford takes two dimensions p,q")
    return make_clifford(*nums)


def parse_axis(text: str, dim: int) -> Axis:
    """Parse ``e<k>``, ``-e<k>``, ``random:<seed>`` or comma-separated components."""
    t = text.strip()
    m = re.fullmatch(r"(-?)e(\d+)", t)
    if m:
        return Axis.basis(dim, int(m.group(2)), -1 if m.group(1) else 1)
    m = re.fullmatch(r"random:(\d+)", t)
    if m:
        return Axis.random(dim, int(m.group(1)))
    try:
        comps = [float(c) for c in t.split(",")]
    except ValueError:
        raise GeometryError(f"bad axis descriptor {text!r}") from None
    if len(comps) != dim:
        raise GeometryError(f"axis has {len(comps)} components, ambient dimension is {dim}")
    return Axis.from_vector(comps)


# ---------------------------------------------------------------------------
# hyperspherical charts


def sphere_from_angles(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map ``(N, k)`` angles to ``(N, k+1)`` points of ``S^k`` plus the volume density."""
    t = np.atleast_2d(t)
    N, k = t.shape
    u = np.empty((N, k + 1))
    sin_prod = np.ones(N)
    jac = np.ones(N)
    for j in range(k - 1):
        u[:, j] = sin_prod * np.cos(t[:, j])
        s = np.sin(t[:, j])
        jac *= s ** (k - 1 - j)
        sin_prod = sin_prod * s
    u[:, k - 1] = sin_prod * np.cos(t[:, k - 1])
    u[:, k] = sin_prod * np.sin(t[:, k - 1])
    return u, jac


def angles_from_sphere(u: np.ndarray) -> np.ndarray:
    u = np.atleast_2d(u)
    k = u.shape[1] - 1
    t = np.empty((u.shape[0], k))
    for j in range(k - 1):
        tail = np.linalg.norm(u[:, j + 1 :], axis=1)
        t[:, j] = np.arctan2(tail, u[:, j])
    t[:, k - 1] = np.mod(np.arctan2(u[:, k], u[:, k - 1]), TWO_PI)
    return t


def _apply_pole(u: np.ndarray, pole: int) -> np.ndarray:
    if pole == 0:
        return u
    u = u.copy()
    u[:, [0, pole]] = u[:, [pole, 0]]
    return u


def embed(M: Hypersurface, coords, chart: Chart | None = None):
    """Positions, unit normals and volume densities for ``(N, n)`` chart coordinates."""
    chart = chart or M.charts[0]
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    if coords.shape[1] != M.n:
        raise GeometryError(f"expected {M.n} chart coordinates, got {coords.shape[1]}")
    N = coords.shape[0]
    jac = np.ones(N)
    parts = []
    off = 0
    for i, (k, r) in enumerate(zip(M.dims, M.radii)):
        u, ju = sphere_from_angles(coords[:, off : off + k])
        parts.append(_apply_pole(u, chart.poles[i]))
        jac *= ju * r**k
        off += k
    if M.variant == "equator":
        x = np.concatenate([parts[0], np.zeros((N, 1))], axis=1)
        nu = np.zeros_like(x)
        nu[:, -1] = 1.0
    else:
        r1, r2 = M.radii
        u, v = parts
        x = np.concatenate([r1 * u, r2 * v], axis=1)
        nu = np.concatenate([-r2 * u, r1 * v], axis=1)
    return x, nu, jac


def _check_point(M: Hypersurface, p: ChartPoint) -> Chart:
    if not 0 <= p.chart_id < len(M.charts):
        raise GeometryError(f"unknown chart id {p.chart_id}")
    chart = M.charts[p.chart_id]
    if len(p.coords) != M.n or not chart.contains(p.coords):
        raise GeometryError(f"point {p.coords} outside chart {p.chart_id} domain")
    return chart


def eval_frame(M: Hypersurface, p: ChartPoint) -> PointFrame:
    chart = _check_point(M, p)
    x, nu, jac = embed(M, [p.coords], chart)
    return PointFrame(
        position=x[0],
        normal=nu[0],
        principal_curvatures=M.principal_curvatures,
        S=M.S_const,
        H=0.0,
        metric_jacobian=float(jac[0]),
    )


def invert_chart(M: Hypersurface, x, chart_id: int = 0) -> ChartPoint:
    """Chart coordinates of an ambient point lying on ``M``."""
    x = np.asarray(x, dtype=float)
    chart = M.charts[chart_id]
    coords = []
    for i, (sl, r) in enumerate(zip(M.factor_slices, M.radii)):
        u = _apply_pole(x[None, sl] / r, chart.poles[i])
        coords.extend(angles_from_sphere(u)[0])
    return ChartPoint(chart_id, tuple(float(c) for c in coords))


# ---------------------------------------------------------------------------
# height functions and curvature quantities


def _frame(M, p):
    f = eval_frame(M, p)
    return f.position, f.normal


def height(M: Hypersurface, p: ChartPoint, a: Axis) -> float:
    x, _ = _frame(M, p)
    return float(x @ a.array)


def normal_height(M: Hypersurface, p: ChartPoint, a: Axis) -> float:
    _, nu = _frame(M, p)
    return float(nu @ a.array)


def tangent_norm_sq(M: Hypersurface, p: ChartPoint, a: Axis) -> float:
    """``|a^T|^2`` through the identity ``|a^T|^2 + phi^2 + psi^2 = 1``."""
    x, nu = _frame(M, p)
    phi, psi = x @ a.array, nu @ a.array
    return float(min(1.0, max(0.0, 1.0 - phi * phi - psi * psi)))


def laplacian_height(M: Hypersurface, p: ChartPoint, a: Axis) -> float:
    x, nu = _frame(M, p)
    H = 0.0
    return float(-M.n * (x @ a.array) + M.n * H * (nu @ a.array))


def laplacian_normal_height(M: Hypersurface, p: ChartPoint, a: Axis) -> float:
    x, nu = _frame(M, p)
    H, grad_H_dot_a = 0.0, 0.0
    return float(-M.n * grad_H_dot_a + M.n * H * (x @ a.array) - M.S_const * (nu @ a.array))


def factor_projections(M: Hypersurface, x: np.ndarray, a: Axis):
    """Per-factor ``<u_i, a_i>`` for ``(N, n+2)`` positions, and the norms ``|a_i|``.

    ``u_i`` is the unit point of the i-th factor sphere and ``a_i`` the part of
    ``a`` in that factor's coordinates.
    """
    x = np.atleast_2d(x)
    av = a.array
    proj, rho = [], []
    for sl, r in zip(M.factor_slices, M.radii):
        proj.append(x[:, sl] @ av[sl] / r)
        rho.append(float(np.linalg.norm(av[sl])))
    return tuple(proj), tuple(rho)


def ricci_coefficients(M: Hypersurface) -> tuple[float, ...]:
    """``S/n - lambda_i^2`` for each principal family."""
    return tuple(M.S_const / M.n - lam * lam for lam, _ in M.principal_curvatures)


def ricci_quadratic_from_projections(M: Hypersurface, proj, rho):
    """Vectorized ``(Ric - (R/n) g)(a^T, a^T)`` from per-factor projections."""
    total = 0.0
    for c, pr, rh in zip(ricci_coefficients(M), proj, rho):
        total = total + c * np.clip(rh * rh - pr * pr, 0.0, None)
    return total


def ricci_quadratic(M: Hypersurface, p: ChartPoint, a: Axis) -> float:
    x, _ = _frame(M, p)
    proj, rho = factor_projections(M, x, a)
    return float(np.asarray(ricci_quadratic_from_projections(M, proj, rho)).ravel()[0])


def critical_values(M: Hypersurface, a: Axis) -> tuple[float, ...]:
    """Critical values of ``phi_a`` on ``M`` (where ``a^T`` vanishes)."""
    _, rho = factor_projections(M, np.zeros((1, M.ambient_dim)), a)
    amps = [r * rh for r, rh in zip(M.radii, rho)]
    vals = {0.0} if all(c == 0.0 for c in amps) else set()
    if len(amps) == 1:
        vals |= {amps[0], -amps[0]}
    else:
        for s1 in (1, -1):
            for s2 in (1, -1):
                vals.add(s1 * amps[0] + s2 * amps[1])
    return tuple(sorted(vals))
