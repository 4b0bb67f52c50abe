"""Named inequality checks with explicit margins and verdicts.

Every report is oriented so that the inequality reads ``lhs >= rhs``; the
margin is ``lhs - rhs``. Errors come from the underlying ``IntegralEstimate``
objects, the tolerance is a fixed slack (``CONST_TOL`` for constants-only
checks, ``INTEGRAL_SLACK`` for integral checks).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import constants as K
from .geometry import Axis, GeometryError, Hypersurface, parse_axis, ricci_quadratic_from_projections, sphere_volume
from .integrate import IntegralEstimate, QuadratureSpec, default_height_quad, integrate_height, moment2, simons_integral
from .levelset import (
    LevelQuery,
    LevelSetError,
    auto_method,
    cheeger_upper_detail,
    level_integral,
    level_volume,
    superlevel_volume,
)

CONST_TOL = 1e-6
INTEGRAL_SLACK = 1e-8
IE_TOL = 1e-6
DEFAULT_AXIS_COUNT = 64
DEFAULT_SEED = 42
DEFAULT_S_GRID = tuple(round(0.1 * i, 10) for i in range(8))
DEFAULT_T_LIST = (0.1, 0.3, 0.5)
LEMMA_S = tuple(round(0.1 * i, 10) for i in range(6))
LEMMA_R = tuple(round(0.5 + 0.1 * i, 10) for i in range(6))

CHECKS = (
    "simons",
    "divergence",
    "lemma_moment",
    "lemma_integral",
    "thm_main_i",
    "thm_main_ii",
    "cor_csc",
    "ie",
    "cor_ie",
    "cor_epsilon",
    "cheeger",
)


class HypothesisError(ValueError):
    """The surface does not satisfy the hypotheses of a check."""


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


def decide(margin: float, lhs_error: float, rhs_error: float, tolerance: float) -> Verdict:
    if not (math.isfinite(lhs_error) and math.isfinite(rhs_error) and math.isfinite(margin)):
        return Verdict.INCONCLUSIVE
    if margin > -(lhs_error + rhs_error + tolerance):
        return Verdict.PASS
    if margin < -(lhs_error + rhs_error) - 10.0 * tolerance:
        return Verdict.FAIL
    return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class InequalityReport:
    name: str
    surface: str
    lhs: float
    rhs: float
    lhs_error: float
    rhs_error: float
    margin: float
    tolerance: float
    verdict: Verdict
    notes: tuple[str, ...] = ()
    axis: str | None = None
    params: dict = field(default_factory=dict)
    branch: str | None = None
    outcome: str | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "surface": self.surface,
            "axis": self.axis,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_error": self.lhs_error,
            "rhs_error": self.rhs_error,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "branch": self.branch,
            "outcome": self.outcome,
            "notes": list(self.notes),
            "details": dict(self.details),
        }


def make_report(
    name: str,
    M: Hypersurface,
    lhs: float,
    rhs: float,
    lhs_error: float = 0.0,
    rhs_error: float = 0.0,
    tolerance: float = INTEGRAL_SLACK,
    notes=(),
    verdict: Verdict | None = None,
    **context,
) -> InequalityReport:
    lhs, rhs = float(lhs), float(rhs)
    lhs_error, rhs_error = float(lhs_error), float(rhs_error)
    margin = lhs - rhs if math.isfinite(lhs) and math.isfinite(rhs) else math.nan
    if verdict is None:
        verdict = decide(margin, lhs_error, rhs_error, tolerance)
    return InequalityReport(
        name=name,
        surface=M.descriptor,
        lhs=lhs,
        rhs=rhs,
        lhs_error=lhs_error,
        rhs_error=rhs_error,
        margin=margin,
        tolerance=tolerance,
        verdict=verdict,
        notes=tuple(notes),
        **context,
    )


# ---------------------------------------------------------------------------
# axis sets


def basis_axes(dim: int) -> list[Axis]:
    return [Axis.basis(dim, k, sgn) for k in range(1, dim + 1) for sgn in (1, -1)]


def random_axes(dim: int, k: int, seed: int) -> list[Axis]:
    rng = np.random.default_rng(seed)
    return [Axis.from_vector(v) for v in rng.standard_normal((k, dim))]


def default_axes(dim: int, seed: int = DEFAULT_SEED, total: int = DEFAULT_AXIS_COUNT) -> list[Axis]:
    """Signed basis vectors first, then seeded uniform axes up to ``total``."""
    out = basis_axes(dim)
    return out + random_axes(dim, max(0, total - len(out)), seed)


def parse_axes(text: str, dim: int, seed: int = DEFAULT_SEED) -> list[Axis]:
    """``default``, ``basis``, ``random:<k>:<seed>`` or a ``;``-separated list of axis descriptors."""
    t = text.strip()
    if t == "default":
        return default_axes(dim, seed)
    if t == "basis":
        return basis_axes(dim)
    if t.startswith("random:") and t.count(":") == 2:
        _, k, sd = t.split(":")
        try:
            k, sd = int(k), int(sd)
        except ValueError:
            raise GeometryError(f"bad axis set {text!r}") from None
        if k < 1:
            raise GeometryError("random axis set needs k >= 1")
        return random_axes(dim, k, sd)
    parts = [p for p in t.split(";") if p.strip()]
    if not parts:
        raise GeometryError("empty axis set")
    return [parse_axis(p, dim) for p in parts]


# ---------------------------------------------------------------------------
# shared cached estimates


def _q(M: Hypersurface, quad: QuadratureSpec | None) -> QuadratureSpec:
    return quad if quad is not None else default_height_quad(M)


@lru_cache(maxsize=4096)
def _level_pair(M, a, s, quad) -> tuple[IntegralEstimate, IntegralEstimate]:
    q = LevelQuery(M, a, s, auto_method(a), _q(M, quad))
    return level_volume(q), superlevel_volume(q)


def _nodal(M, a, quad) -> IntegralEstimate:
    return _level_pair(M, a, 0.0, quad)[0]


@lru_cache(maxsize=4096)
def _restricted_moments(M, a, s, quad) -> tuple[IntegralEstimate, IntegralEstimate]:
    """``(int_{|phi|>=s} phi^2, int_{|phi|>=s} |phi|)``."""
    brk = (s, -s) if s > 0 else (0.0,)
    sup = ((s, math.inf), (-math.inf, -s)) if s > 0 else None
    q = _q(M, quad)
    sq = integrate_height(M, a, lambda h: h.phi**2 * (np.abs(h.phi) >= s), q, breaks=brk, support=sup)
    ab = integrate_height(M, a, lambda h: np.abs(h.phi) * (np.abs(h.phi) >= s), q, breaks=brk, support=sup)
    return sq, ab


@lru_cache(maxsize=4096)
def _moment2(M, a, quad) -> IntegralEstimate:
    return moment2(M, a, _q(M, quad))


def _require_nontrivial(M: Hypersurface, check: str):
    if M.totally_geodesic:
        raise HypothesisError(f"{check}: {M} is totally geodesic; the statement assumes a non-totally geodesic surface")


def _require_csc(M: Hypersurface, check: str):
    if not M.csc:
        raise HypothesisError(f"{check}: {M} does not have constant scalar curvature")


def _C1(M: Hypersurface) -> float:
    t1, t2, _ = K.surface_thetas(M)
    return max(t1, t2)


def _phi_vanishes(M: Hypersurface, a: Axis) -> bool:
    av = a.array
    return all(float(np.linalg.norm(av[sl])) == 0.0 for sl in M.factor_slices)


# ---------------------------------------------------------------------------
# checks


def check_divergence_identity(M: Hypersurface, a: Axis, t_list=DEFAULT_T_LIST, quad=None) -> list[InequalityReport]:
    """``n int_{|phi|>=t} |phi| = int_{|phi|=t} |a^T|`` as two one-sided reports per ``t``.

    At ``t = 0`` the single nodal set is counted twice, matching both sheets
    of the limit ``t -> 0+``.
    """
    out = []
    for t in t_list:
        if not 0.0 <= t < 1.0:
            raise LevelSetError(f"t must lie in [0, 1), got {t}")
        if _phi_vanishes(M, a):
            lhs = rhs = IntegralEstimate(0.0, 0.0, "exact")
            notes = ["phi_a vanishes identically, so does a^T"]
        else:
            _, ab = _restricted_moments(M, a, t, quad)
            lhs = ab.scaled(M.n)
            lev = level_integral(M, a, t, weight=lambda h: np.sqrt(h.tan2), quad=_q(M, quad))
            rhs = lev.scaled(2.0) if t == 0.0 else lev
            notes = [f"lhs: n * restricted moment_abs [{ab.method_tag}]", f"rhs: level integral of |a^T| [{lev.method_tag}]"]
            notes += [f"flag: {f}" for f in rhs.flags]
        ctx = dict(axis=a.describe(), params={"t": t}, details={"relative_band_error": _rel(rhs)})
        out.append(make_report("divergence:ge", M, lhs.value, rhs.value, lhs.error, rhs.error, notes=notes, **ctx))
        out.append(make_report("divergence:le", M, rhs.value, lhs.value, rhs.error, lhs.error, notes=notes, **ctx))
    return out


def _rel(e: IntegralEstimate) -> float:
    return e.error / abs(e.value) if e.value != 0 else (0.0 if e.error == 0 else math.inf)


def moment_form(M: Hypersurface, quad=None) -> tuple[np.ndarray, np.ndarray]:
    """Matrix ``Q`` with ``int phi_a^2 = a^T Q a`` and entrywise error bounds.

    Built from basis and diagonal axes; the minimum of ``int phi_a^2`` over
    all unit ``a`` is the smallest eigenvalue of ``Q``.
    """
    d = M.ambient_dim
    Q = np.zeros((d, d))
    E = np.zeros((d, d))
    for i in range(d):
        e = _moment2(M, Axis.basis(d, i + 1), quad)
        Q[i, i], E[i, i] = e.value, e.error
    for i in range(d):
        for j in range(i + 1, d):
            v = np.zeros(d)
            v[i] = v[j] = 1.0
            e = _moment2(M, Axis.from_vector(v), quad)
            Q[i, j] = Q[j, i] = e.value - 0.5 * (Q[i, i] + Q[j, j])
            E[i, j] = E[j, i] = e.error + 0.5 * (E[i, i] + E[j, j])
    return Q, E


def check_lemma_moment_bound(M: Hypersurface, axes, quad=None) -> InequalityReport:
    """``inf_a int phi_a^2 >= C1 Vol(M)``.

    The infimum is the smallest eigenvalue of the moment form, so no
    sampling bias enters; the sampled minimum over ``axes`` is logged.
    """
    _require_nontrivial(M, "lemma_moment")
    Q, E = moment_form(M, quad)
    lam = float(np.linalg.eigvalsh(Q)[0])
    lam_err = float(np.linalg.norm(E, 2))  # Weyl: |dlambda| <= ||dQ||_2
    t1, t2, _ = K.surface_thetas(M)
    vol = M.closed_form_volume
    sampled = min((_moment2(M, a, quad) for a in axes), key=lambda e: e.value)
    notes = [
        "lhs: smallest eigenvalue of the moment form",
        f"sampled min over {len(axes)} axes = {sampled.value!r}",
        f"theta1 * Vol = {t1 * vol!r}",
        f"theta2 * Vol = {t2 * vol!r}",
    ]
    return make_report(
        "lemma_moment",
        M,
        lam,
        max(t1, t2) * vol,
        lam_err,
        0.0,
        notes=notes,
        details={"theta1": t1, "theta2": t2, "inf_over_vol": lam / vol, "sampled_min": sampled.value},
    )


def check_lemma_integral_inequality(
    M: Hypersurface, a: Axis, s_r_grid=None, quad=None
) -> list[InequalityReport]:
    """``f(r) int_{|phi|>=s} |phi| >= int_{|phi|>=s} phi^2`` for ``s <= r``."""
    grid = s_r_grid if s_r_grid is not None else [(s, r) for s in LEMMA_S for r in LEMMA_R]
    out = []
    for s, r in grid:
        if not 0.0 <= s <= r <= 1.0:
            raise LevelSetError(f"need 0 <= s <= r <= 1, got s={s}, r={r}")
        sq, ab = _restricted_moments(M, a, s, quad)
        c = float(K.lemma_coefficient(M.n, s, r))
        out.append(
            make_report(
                "lemma_integral",
                M,
                c * ab.value,
                sq.value,
                c * ab.error,
                sq.error,
                notes=[f"coefficient f(r) = {c!r}", f"moments [{ab.method_tag}]"],
                axis=a.describe(),
                params={"s": s, "r": r},
            )
        )
    return out


def _level_suite(name, M, a, s_grid, quad, C1) -> list[InequalityReport]:
    out = []
    for s in s_grid:
        c2 = K.C2(M.n, s)[0]
        C, br = K.C_main(M.n, s, C1, c2)
        lev, sup = _level_pair(M, a, s, quad)
        notes = [f"lhs: level volume [{lev.method_tag}]", f"rhs: C = {C!r} x superlevel volume [{sup.method_tag}]"]
        notes += [f"flag: {f}" for f in lev.flags + sup.flags]
        out.append(
            make_report(
                name,
                M,
                lev.value,
                C * sup.value,
                lev.error,
                C * sup.error,
                notes=notes,
                axis=a.describe(),
                params={"s": s},
                branch=br.value,
                details={"C": C, "C1": C1, "C2": c2, "threshold": K.branch_threshold(C1, c2)},
            )
        )
    return out


def check_theorem_main_i(M: Hypersurface, a: Axis, s_grid=DEFAULT_S_GRID, quad=None) -> list[InequalityReport]:
    """``Vol{|phi_a| = s} >= C(n, s, S) Vol{|phi_a| >= s}``."""
    _require_nontrivial(M, "thm_main_i")
    return _level_suite("thm_main_i", M, a, s_grid, quad, _C1(M))


def check_corollary_csc(M: Hypersurface, a: Axis, s_grid=DEFAULT_S_GRID, quad=None) -> list[InequalityReport]:
    _require_nontrivial(M, "cor_csc")
    _require_csc(M, "cor_csc")
    return _level_suite("cor_csc", M, a, s_grid, quad, 1.0 / (2 * M.n))


def ambient_ratio(n: int) -> float:
    """``(n + 1) Vol(S^{n+1}) / (n Vol(S^n))``."""
    return (n + 1) * sphere_volume(n + 1) / (n * sphere_volume(n))


def _certified_nodal(M, axes, quad):
    pairs = [(a, _nodal(M, a, quad)) for a in axes]
    good = [(a, e) for a, e in pairs if e.certified]
    return good, len(pairs) - len(good)


def check_theorem_main_ii(M: Hypersurface, axes, quad=None) -> InequalityReport:
    """``ratio * sup_a Vol{phi_a = 0} >= Vol(M)``; the sampled max only lowers the lhs."""
    _require_nontrivial(M, "thm_main_ii")
    good, skipped = _certified_nodal(M, axes, quad)
    if not good:
        raise LevelSetError("no axis gave a certified nodal volume")
    a, best = max(good, key=lambda p: p[1].value)
    fac = ambient_ratio(M.n)
    vol = M.closed_form_volume
    notes = [f"ambient factor {fac!r}", f"max over {len(good)} axes, attained at {a.describe()}"]
    if skipped:
        notes.append(f"{skipped} axes skipped (near-critical nodal set)")
    return make_report(
        "thm_main_ii",
        M,
        fac * best.value,
        vol,
        fac * best.error,
        0.0,
        notes=notes,
        axis=a.describe(),
        details={"ratio": fac * best.value / vol},
    )


def check_ie(M: Hypersurface, axes, quad=None) -> InequalityReport:
    """Integral-Einstein test; ``outcome`` carries the classification.

    The lhs is the larger of the two discrepancies, which is non-negative by
    construction, so the verdict only certifies the computation itself.
    """
    vol = M.closed_form_volume
    q = _q(M, quad)
    ric_max, ric_err, mom_max, mom_err = 0.0, 0.0, 0.0, 0.0
    for a in axes:
        ric = integrate_height(M, a, lambda h: ricci_quadratic_from_projections(M, h.proj, h.rho), q)
        if abs(ric.value) / vol >= ric_max:
            ric_max, ric_err = abs(ric.value) / vol, ric.error / vol
        m2 = _moment2(M, a, quad)
        d = abs(m2.value / vol - 1.0 / (M.n + 2))
        if d >= mom_max:
            mom_max, mom_err = d, m2.error / vol
    notes = [f"max |int Ric_0(a^T, a^T)| / Vol = {ric_max!r}"]
    tests = [(ric_max, ric_err)]
    if M.totally_geodesic:
        notes.append("moment form not applicable to a totally geodesic surface")
    else:
        notes.append(f"max |moment2 / Vol - 1/(n+2)| = {mom_max!r}")
        tests.append((mom_max, mom_err))
    if all(v + e < IE_TOL for v, e in tests):
        outcome = "IE"
    elif any(v - e > IE_TOL for v, e in tests):
        outcome = "not IE"
    else:
        outcome = "undetermined"
    lhs, err = max(tests)
    return make_report(
        "ie",
        M,
        lhs,
        0.0,
        err,
        0.0,
        tolerance=CONST_TOL,
        notes=notes,
        outcome=outcome,
        details={"ricci_max": ric_max, "moment_max": mom_max if not M.totally_geodesic else None},
    )


def check_corollary_ie(M: Hypersurface, a: Axis, s_grid=DEFAULT_S_GRID, quad=None, axes=None) -> list[InequalityReport]:
    _require_nontrivial(M, "cor_ie")
    _require_csc(M, "cor_ie")
    ie = check_ie(M, axes if axes is not None else basis_axes(M.ambient_dim), quad)
    if ie.outcome != "IE":
        raise HypothesisError(f"cor_ie: {M} is not integral-Einstein ({ie.outcome})")
    return _level_suite("cor_ie", M, a, s_grid, quad, 1.0 / (M.n + 2))


def check_corollary_epsilon(M: Hypersurface, axes, quad=None) -> InequalityReport:
    """``Vol{phi_a = 0} >= eps_lower(n) Vol(S^n)`` at every sampled axis (reported at the worst)."""
    _require_nontrivial(M, "cor_epsilon")
    _require_csc(M, "cor_epsilon")
    good, skipped = _certified_nodal(M, axes, quad)
    if not good:
        raise LevelSetError("no axis gave a certified nodal volume")
    a, worst = min(good, key=lambda p: p[1].value)
    eps = K.epsilon_lower(M.n)
    notes = [f"epsilon_lower = {eps!r}", f"min over {len(good)} axes"]
    if skipped:
        notes.append(f"{skipped} axes skipped (near-critical nodal set)")
    return make_report(
        "cor_epsilon", M, worst.value, eps * sphere_volume(M.n), worst.error, 0.0, notes=notes, axis=a.describe()
    )


def check_cheeger_chain(M: Hypersurface, axes, quad=None) -> list[InequalityReport]:
    """Cheeger chain with the upper estimate ``h_hat >= h(M)`` substituted.

    Replacing ``h`` by ``h_hat + error`` enlarges the rhs of both displays,
    so a PASS certifies the instance while a FAIL proves nothing and is
    reported as INCONCLUSIVE.
    """
    _require_nontrivial(M, "cheeger")
    est = cheeger_upper_detail(M, axes, _q(M, quad))
    h_hat, h_err = est.value, est.error
    h_up = h_hat + h_err
    vol = M.closed_form_volume
    _, _, S_max = K.surface_thetas(M)
    h_low, delta = K.cheeger_embedded_lower(M.n, S_max)
    good, _ = _certified_nodal(M, axes, quad)
    a_min, nod = min(good, key=lambda p: p[1].value)
    C1, C0 = _C1(M), K.C0(M.n)
    coef = 2.0 * math.sqrt(M.n + 1) * C1 / C0
    ctx = dict(details={"h_hat": h_hat, "h_hat_error": h_err, "delta": delta})
    out = []

    def downgrade(r: InequalityReport) -> InequalityReport:
        if r.verdict is not Verdict.FAIL:
            return r
        return make_report(
            r.name, M, r.lhs, r.rhs, r.lhs_error, r.rhs_error, notes=r.notes + ("FAIL downgraded: h_hat only bounds h from above",),
            verdict=Verdict.INCONCLUSIVE, axis=r.axis, details=r.details,
        )

    notes = [f"h_hat = {h_hat!r} from axis {est.axis.describe()}", f"coefficient 2 sqrt(n+1) C1 / C0 = {coef!r}"]
    out.append(
        downgrade(
            make_report(
                "cheeger:main", M, nod.value, coef * h_up * vol, nod.error, 0.0, notes=notes, axis=a_min.describe(), **ctx
            )
        )
    )
    if M.radially_symmetric:
        notes_ii = [
            f"h_hat = {h_hat!r}",
            "tight by construction: h_hat is the smallest 2 Vol{phi_a = 0} / Vol over the same axes",
        ]
        out.append(
            downgrade(
                make_report(
                    "cheeger:radial", M, nod.value, 0.5 * h_up * vol, nod.error, 0.0, notes=notes_ii, axis=a_min.describe(), **ctx
                )
            )
        )
    sandwich = "consistency only: lower <= h(M) <= h_hat"
    out.append(make_report("cheeger:embedded_lower", M, h_hat, h_low, h_err, 0.0, tolerance=CONST_TOL, notes=[sandwich], **ctx))
    if M.isoparametric is not None:
        iso = K.isoparametric_lower(M.n, M.isoparametric.g)
        out.append(
            make_report("cheeger:isoparametric_lower", M, h_hat, iso, h_err, 0.0, tolerance=CONST_TOL, notes=[sandwich], **ctx)
        )
    rhs_b = K.buser_rhs(M.n, delta, h_up)
    out.append(
        make_report(
            "cheeger:buser",
            M,
            rhs_b,
            M.lambda1,
            rhs_b - K.buser_rhs(M.n, delta, h_hat),
            0.0,
            tolerance=CONST_TOL,
            notes=[f"lambda1 = {M.lambda1!r} from catalog metadata", "consistency only: h_hat >= h enlarges the rhs"],
            **ctx,
        )
    )
    return out


def check_simons(M: Hypersurface, quad=None) -> InequalityReport:
    """``int S (S - n) >= 0``, exact for constant ``S``."""
    val = simons_integral(M)
    return make_report("simons", M, val, 0.0, 0.0, 0.0, tolerance=CONST_TOL, notes=["analytic: S constant"])


# ---------------------------------------------------------------------------
# runner


@dataclass(frozen=True)
class RunResult:
    reports: tuple[InequalityReport, ...]
    skipped: tuple[tuple[str, str], ...]

    @property
    def any_fail(self) -> bool:
        return any(r.verdict is Verdict.FAIL for r in self.reports)


def parse_checks(text: str) -> list[str]:
    t = text.strip()
    if t == "all":
        return list(CHECKS)
    names = [c.strip() for c in t.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad or not names:
        raise ValueError(f"unknown check(s) {bad or text!r}; choose from {', '.join(CHECKS)}")
    return [c for c in CHECKS if c in names]


def _job(name, M, axes, quad, s_grid, t_list, lemma_grid):
    per_axis = lambda fn, **kw: [r for a in axes for r in fn(M, a, quad=quad, **kw)]  # noqa: E731
    if name == "simons":
        return [check_simons(M, quad)]
    if name == "divergence":
        return per_axis(check_divergence_identity, t_list=t_list)
    if name == "lemma_moment":
        return [check_lemma_moment_bound(M, axes, quad)]
    if name == "lemma_integral":
        return per_axis(check_lemma_integral_inequality, s_r_grid=lemma_grid)
    if name == "thm_main_i":
        return per_axis(check_theorem_main_i, s_grid=s_grid)
    if name == "thm_main_ii":
        return [check_theorem_main_ii(M, axes, quad)]
    if name == "cor_csc":
        return per_axis(check_corollary_csc, s_grid=s_grid)
    if name == "ie":
        return [check_ie(M, axes, quad)]
    if name == "cor_ie":
        return per_axis(check_corollary_ie, s_grid=s_grid, axes=axes)
    if name == "cor_epsilon":
        return [check_corollary_epsilon(M, axes, quad)]
    if name == "cheeger":
        return check_cheeger_chain(M, axes, quad)
    raise ValueError(f"unknown check {name!r}")


def run_checks(
    M: Hypersurface,
    checks,
    axes,
    quad: QuadratureSpec | None = None,
    s_grid=DEFAULT_S_GRID,
    t_list=DEFAULT_T_LIST,
    lemma_grid=None,
    workers: int = 1,
    strict: bool = False,
) -> RunResult:
    """Run checks concurrently and merge their reports in the declared order.

    Hypothesis violations are collected in ``skipped``; with ``strict`` they
    propagate instead.
    """
    checks = [c for c in CHECKS if c in set(checks)]
    axes = list(axes)

    def run(name):
        try:
            return name, _job(name, M, axes, quad, tuple(s_grid), tuple(t_list), lemma_grid), None
        except HypothesisError as exc:
            if strict:
                raise
            return name, [], str(exc)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(run, checks))
    reports = tuple(r for _, rs, _ in results for r in rs)
    skipped = tuple((name, msg) for name, _, msg in results if msg is not None)
    return RunResult(reports, skipped)
