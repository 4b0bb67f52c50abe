"""Scalar constants of the special isoperimetric inequalities.

The central object is the one-parameter family

    f(r) = (2 + n r L) / (2 + n L),    L = ln((1 - s^2) / (1 - r^2)),

whose infimum over ``r in (s, 1)`` is ``C2(n, s)``. ``f`` equals 1 at both
ends of the interval and is strictly smaller inside, so the infimum is an
interior minimum located by a dense grid followed by golden-section search.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import optimize

from .geometry import GeometryError, Hypersurface

GRID_POINTS = 10_000
XTOL = 1e-10
DUAL_TOL = 1e-9


class ConstantsError(ValueError):
    pass


class Branch(str, enum.Enum):
    S_ZERO = "S_ZERO"
    SMALL_S = "SMALL_S"
    LARGE_S = "LARGE_S"


def scalar_minimize(
    f, bracket, tol: float = XTOL, grid: int = GRID_POINTS, vectorized: bool = False
) -> tuple[float, float]:
    """Global minimum of a continuous ``f`` on ``bracket``.

    A dense grid brackets the best local minimum, golden-section search
    refines it until the bracket is narrower than ``tol``. A minimum sitting
    at a grid end is returned as is (monotone ``f``).
    """
    a, b = bracket
    xs = np.linspace(a, b, grid)
    ys = np.asarray(f(xs), dtype=float) if vectorized else np.array([f(x) for x in xs], dtype=float)
    if not np.all(np.isfinite(ys)):
        bad = int(np.argmax(~np.isfinite(ys)))
        raise ConstantsError(f"non-finite objective {ys[bad]!r} at x = {xs[bad]!r}")
    i = int(np.argmin(ys))
    if i == 0 or i == grid - 1:
        return float(xs[i]), float(ys[i])
    # scipy's golden uses a relative tolerance
    rel = tol / max(abs(xs[i]), 1e-300)
    res = optimize.minimize_scalar(
        lambda x: float(f(x)),
        bracket=(xs[i - 1], xs[i], xs[i + 1]),
        method="golden",
        options={"xtol": rel, "maxiter": 10_000},
    )
    x, y = float(res.x), float(res.fun)
    if y > ys[i]:
        return float(xs[i]), float(ys[i])
    return x, y


def log_ratio(s: float, r):
    """``ln((1 - s^2) / (1 - r^2))``, written to stay accurate near ``r -> 1``."""
    return np.log1p(-s * s) - np.log1p(-np.asarray(r) ** 2)


def lemma_coefficient(n: int, s: float, r):
    """``f(r) = (2 + n r L)/(2 + n L)``; equals 1 at ``r = s`` and in the limit ``r -> 1``."""
    r = np.asarray(r, dtype=float)
    out = np.ones_like(r)
    inside = (r > s) & (r < 1.0)
    L = log_ratio(s, r[inside])
    out[inside] = (2.0 + n * r[inside] * L) / (2.0 + n * L)
    return out if out.ndim else float(out)


def _check_s(s: float):
    if not 0.0 <= s < 1.0:
        raise ConstantsError(f"s must lie in [0, 1), got {s}")


def u0(n: int, s: float, r: float) -> float:
    L = float(log_ratio(s, r))
    return n * L / (2.0 + n * L)


def C2(n: int, s: float) -> tuple[float, float, float]:
    """``(inf f, argmin r, u0 at the argmin)`` over ``r in (s, 1)``."""
    _check_s(s)
    if n < 1:
        raise ConstantsError("n must be positive")
    h = (1.0 - s) / (GRID_POINTS + 1)
    r, v = scalar_minimize(lambda r: lemma_coefficient(n, s, r), (s + h, 1.0 - h), vectorized=True)
    return v, r, u0(n, s, r)


def C0(n: int) -> float:
    if n < 2:
        raise ConstantsError("C0 needs n >= 2")
    return 4.0 * C2(n, 0.0)[0]


def theta1(int_S: float, S_max: float, vol: float, n: int) -> float:
    if S_max <= 0:
        raise ConstantsError("theta1 undefined for S_max = 0 (totally geodesic surface)")
    if vol <= 0:
        raise ConstantsError("volume must be positive")
    return int_S / (2.0 * n * S_max * vol)


def theta2(int_S: float, int_S2: float, vol: float, n: int) -> float:
    if int_S2 <= 0:
        raise ConstantsError("theta2 undefined for int S^2 = 0 (totally geodesic surface)")
    return n / (4.0 * n * n - 3.0 * n + 1.0) * int_S**2 / (vol * int_S2)


def branch_threshold(C1: float, C2v: float) -> float:
    return min(math.sqrt(C1), C1 / C2v)


def C_main(n: int, s: float, C1: float, C2v: float) -> tuple[float, Branch]:
    """Piecewise constant of the main level-set inequality."""
    _check_s(s)
    if s == 0.0:
        return n * C1 / (2.0 * C2v), Branch.S_ZERO
    if s <= branch_threshold(C1, C2v):
        return n * C1 / (C2v * math.sqrt(1.0 - s * s)), Branch.SMALL_S
    return n * s / math.sqrt(1.0 - s * s), Branch.LARGE_S


def _gamma_cf(a: float, x: float, rtol: float, max_iter: int) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < rtol:
            return math.exp(-x + a * math.log(x)) * h
    raise ConstantsError(f"continued fraction for Gamma({a}, {x}) did not converge")


def upper_incomplete_gamma(a: float, x: float = 1.0, rtol: float = 1e-15, max_iter: int = 10_000) -> float:
    """``Gamma(a, x)`` for ``x > 0``.

    The modified Lentz continued fraction is only reliable for ``a <= x + 1``;
    larger ``a`` start from ``a - k`` in that range and climb with the
    recurrence ``Gamma(a + 1, x) = a Gamma(a, x) + x^a e^-x``, which only adds
    positive terms.
    """
    if a <= 0 or x <= 0:
        raise ConstantsError("upper_incomplete_gamma needs a > 0 and x > 0")
    k = max(0, math.ceil(a - x - 1.0))
    b = a - k
    g = _gamma_cf(b, x, rtol, max_iter)
    for _ in range(k):
        g = b * g + math.exp(b * math.log(x) - x)
        b += 1.0
    return g


def cheng_li_yau(n: int) -> tuple[float, float, float]:
    """``(tilde C_n, log tilde B_n, 1 + 3 / tilde B_n)``; ``tilde B_n`` kept in log space."""
    if n < 2:
        raise ConstantsError("n must be >= 2")
    log_tC = math.log(0.5) + 0.5 * n * math.log(n) + 1.0 + math.log(upper_incomplete_gamma(n / 2.0, 1.0))
    tC = math.exp(log_tC) if log_tC < 709.0 else math.inf
    # log(2n + 3 + 2 exp(2n tC)) via log-sum-exp
    big = math.log(2.0) + 2.0 * n * tC
    small = math.log(2.0 * n + 3.0)
    hi, lo = max(big, small), min(big, small)
    log_B = hi + math.log1p(math.exp(lo - hi))
    ratio = math.log(3.0) - log_B
    factor = 1.0 + (math.exp(ratio) if ratio > -745.0 else 0.0)
    return tC, log_B, factor


def epsilon_lower(n: int) -> float:
    """Lower bound for the uniform nodal-volume constant; checked against a direct supremum."""
    _, _, factor = cheng_li_yau(n)
    c0 = C0(n)
    h = 1.0 / (GRID_POINTS + 1)
    _, neg_sup = scalar_minimize(lambda r: -1.0 / lemma_coefficient(n, 0.0, r), (h, 1.0 - h), vectorized=True)
    direct = 0.25 * factor * (-neg_sup)
    via_inf = factor / c0
    if abs(direct - via_inf) > DUAL_TOL:
        raise ConstantsError(f"sup/inf disagreement {direct!r} vs {via_inf!r}")
    return via_inf


def cheeger_embedded_lower(n: int, S_max: float) -> tuple[float, float]:
    if S_max < n:
        raise ConstantsError(
            f"S_max = {S_max} < n = {n}: impossible for a non-totally geodesic minimal "
            "hypersurface by Simons' inequality int S(S - n) >= 0"
        )
    delta = math.sqrt((S_max - n) / n)
    a = delta * (n - 1)
    return (-a + math.sqrt(a * a + 5.0 * n)) / 10.0, delta


def buser_rhs(n: int, delta: float, h: float) -> float:
    if delta < 0 or h < 0:
        raise ConstantsError("buser_rhs needs delta >= 0 and h >= 0")
    return 2.0 * delta * (n - 1) * h + 10.0 * h * h


def isoparametric_lower(n: int, g: int) -> float:
    if not 2 <= g <= 6:
        raise GeometryError(f"g must lie in 2..6, got {g}")
    a = math.sqrt(g - 2) * (n - 1)
    return (-a + math.sqrt((g - 2) * (n - 1) ** 2 + 10.0 * n)) / 10.0


@dataclass(frozen=True)
class ConstantsReport:
    n: int
    s: float
    theta1: float
    theta2: float
    C1: float
    C2: float
    argmin_r: float
    u0_at_min: float
    C_main: float
    branch: str
    threshold: float
    C_main_at_zero: float
    C0: float
    tildeC: float
    log_tildeB: float
    volume_gap_factor: float
    epsilon_lower: float
    cheeger_embedded_lower: float
    delta: float
    isoparametric_lower: float | None
    muto_bound: float | None
    surface: str | None

    def to_dict(self) -> dict:
        return asdict(self)


def surface_thetas(M: Hypersurface) -> tuple[float, float, float]:
    """``(theta1, theta2, S_max)`` from the S-integrals of a catalog member."""
    from .integrate import s_integrals

    int_S, int_S2, S_max = s_integrals(M)
    vol = M.closed_form_volume
    return theta1(int_S, S_max, vol, M.n), theta2(int_S, int_S2, vol, M.n), S_max


def constants_report(n: int, s: float, surface: Hypersurface | None = None) -> ConstantsReport:
    """All constants for ``(n, s)``; without a surface the CSC values ``S = n`` are used."""
    _check_s(s)
    if surface is not None:
        if surface.totally_geodesic:
            raise ConstantsError(f"{surface} is totally geodesic; the constants are undefined")
        n = surface.n
        t1, t2, S_max = surface_thetas(surface)
        g = surface.isoparametric.g if surface.isoparametric else None
    else:
        t1, t2, S_max, g = 1.0 / (2 * n), n / (4.0 * n * n - 3.0 * n + 1.0), float(n), 2
    C1 = max(t1, t2)
    c2, r, u = C2(n, s)
    cm, br = C_main(n, s, C1, c2)
    c2_zero = c2 if s == 0.0 else C2(n, 0.0)[0]
    tC, logB, factor = cheng_li_yau(n)
    h_low, delta = cheeger_embedded_lower(n, S_max)
    return ConstantsReport(
        n=n,
        s=s,
        theta1=t1,
        theta2=t2,
        C1=C1,
        C2=c2,
        argmin_r=r,
        u0_at_min=u,
        C_main=cm,
        branch=br.value,
        threshold=branch_threshold(C1, c2),
        C_main_at_zero=C_main(n, 0.0, C1, c2_zero)[0],
        C0=4.0 * c2_zero,
        tildeC=tC,
        log_tildeB=logB,
        volume_gap_factor=factor,
        epsilon_lower=epsilon_lower(n),
        cheeger_embedded_lower=h_low,
        delta=delta,
        isoparametric_lower=isoparametric_lower(n, g) if g else None,
        muto_bound=None,
        surface=surface.descriptor if surface is not None else None,
    )
