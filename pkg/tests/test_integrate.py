import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as si

from conftest import CATALOG, VOL_T11
from sphereiso.geometry import Axis, make_clifford, make_equator
from sphereiso.integrate import (
    IntegralEstimate,
    IntegrationError,
    MonteCarlo,
    TensorGauss,
    default_quad,
    integrate,
    integrate_height,
    moment2,
    moment_abs,
    parse_quad,
    s_integrals,
    simons_integral,
    volume,
)

G64 = TensorGauss((64,))
G32 = TensorGauss((32,))


def alpha_oracle(M, a):
    """Closed-form ``int phi_a^2``: the mean of <u, b>^2 over S^k is |b|^2 / (k + 1)."""
    av = a.array
    total = 0.0
    for sl, k, r in zip(M.factor_slices, M.dims, M.radii):
        total += r * r * float(av[sl] @ av[sl]) / (k + 1)
    return total * M.closed_form_volume


def test_volumes():
    assert volume(make_clifford(1, 1), G64).value == pytest.approx(VOL_T11, rel=1e-13)
    assert volume(make_equator(2), G64).value == pytest.approx(4 * math.pi, rel=1e-13)
    assert volume(make_equator(3), G64).value == pytest.approx(2 * math.pi**2, rel=1e-13)
    want = 16 * math.pi**2 / 3 * math.sqrt(1 / 3)
    assert volume(make_clifford(1, 2), G64).value == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("M", [make_clifford(1, 2), make_equator(2)], ids=str)
def test_doubling_order_stays_within_error(M):
    a = Axis.random(M.ambient_dim, 3)
    for f in (lambda b: np.ones(len(b.jac)), lambda b: b.phi(a) ** 2):
        lo, hi = integrate(M, f, G32), integrate(M, f, G64)
        assert abs(hi.value - lo.value) <= lo.error


def test_monte_carlo_seed_determinism(t12):
    a = Axis.random(5, 1)
    spec = MonteCarlo(20_000, 7)
    f = lambda b: b.phi(a) ** 2  # noqa: E731
    r1, r2 = integrate(t12, f, spec), integrate(t12, f, spec)
    assert r1.value == r2.value and r1.error == r2.error
    assert integrate(t12, f, MonteCarlo(20_000, 8)).value != r1.value
    assert integrate_height(t12, a, lambda h: h.phi**2, spec).value == integrate_height(t12, a, lambda h: h.phi**2, spec).value


def test_monte_carlo_error_shrinks_with_samples(t12):
    a = Axis.random(5, 2)
    f = lambda b: b.phi(a) ** 2  # noqa: E731
    for seed in range(4):
        small = integrate(t12, f, MonteCarlo(4_000, seed))
        big = integrate(t12, f, MonteCarlo(64_000, seed))
        assert big.error < small.error
        assert abs(big.value - alpha_oracle(t12, a)) < big.error


@pytest.mark.parametrize("M", CATALOG, ids=str)
def test_height_mean_vanishes(M):
    for k in range(20):
        a = Axis.random(M.ambient_dim, 100 + k)
        e = integrate_height(M, a, lambda h: h.phi, G64)
        assert abs(e.value) <= e.error


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_moment2_closed_form(p, q, seed):
    M = make_clifford(p, q)
    a = Axis.random(M.ambient_dim, seed)
    e = moment2(M, a, G64)
    assert abs(e.value - alpha_oracle(M, a)) <= max(1e-8, e.error)


def test_moment2_special_cases():
    for p in (1, 2, 3):
        M = make_clifford(p, p)
        a = Axis.random(M.ambient_dim, p)
        assert moment2(M, a, G64).value == pytest.approx(M.closed_form_volume / (M.n + 2), rel=1e-12)
    for n in (2, 3, 4):
        M = make_clifford(1, n - 1)
        assert moment2(M, Axis.basis(n + 2, 1), G64).value == pytest.approx(M.closed_form_volume / (2 * n), rel=1e-12)


def test_moment2_generic_integrator_agrees(t12):
    a = Axis.random(5, 4)
    e = integrate(t12, lambda b: b.phi(a) ** 2, G64)
    assert abs(e.value - alpha_oracle(t12, a)) <= max(1e-8, e.error)


def test_moment_abs_basis_axis(t11):
    r1, r2 = t11.radii
    inner, _ = si.quad(lambda t: abs(r1 * math.cos(t)) * r1, 0, 2 * math.pi, points=[math.pi / 2, 3 * math.pi / 2])
    want = inner * 2 * math.pi * r2
    e = moment_abs(t11, Axis.basis(4, 1), G64)
    assert abs(e.value - want) <= max(1e-10, e.error)
    assert want == pytest.approx(2 * math.sqrt(2) * math.pi, rel=1e-12)


def test_moment_abs_generic_axis(t11):
    a = Axis.random(4, 21)
    r1, r2 = t11.radii
    c = a.components

    def phi(t2, t1):
        return r1 * (c[0] * math.cos(t1) + c[1] * math.sin(t1)) + r2 * (c[2] * math.cos(t2) + c[3] * math.sin(t2))

    want, _ = si.dblquad(lambda t2, t1: abs(phi(t2, t1)) * r1 * r2, 0, 2 * math.pi, 0, 2 * math.pi, epsabs=1e-10, epsrel=1e-10)
    e = moment_abs(t11, a, G64)
    assert e.value == pytest.approx(want, abs=max(1e-7, e.error))


def test_moment_abs_bounds_moment2():
    for M in CATALOG:
        a = Axis.random(M.ambient_dim, 5)
        assert moment2(M, a, G64).value <= moment_abs(M, a, G64).value
    E = make_equator(2)
    assert moment_abs(E, Axis.basis(4, 4), G64).value == 0.0


def test_s_integrals_and_simons():
    assert s_integrals(make_clifford(1, 2)) == pytest.approx((3 * make_clifford(1, 2).closed_form_volume, 9 * make_clifford(1, 2).closed_form_volume, 3))
    assert s_integrals(make_clifford(1, 1)) == pytest.approx((2 * VOL_T11, 4 * VOL_T11, 2))
    assert s_integrals(make_equator(3)) == (0.0, 0.0, 0.0)
    for M in CATALOG:
        assert simons_integral(M) == 0.0


def test_non_finite_integrand_raises(t11):
    with np.errstate(all="ignore"), pytest.raises(IntegrationError, match="non-finite"):
        integrate(t11, lambda b: 1.0 / (b.coords[:, 0] - b.coords[:, 0]), G64)
    with np.errstate(all="ignore"), pytest.raises(IntegrationError):
        integrate_height(t11, Axis.basis(4, 1), lambda h: np.log(h.phi * 0.0), G64)


def test_estimate_arithmetic():
    a = IntegralEstimate(1.0, 0.1, "x", ("f",))
    b = IntegralEstimate(2.0, 0.2, "y")
    d = b - a
    assert d.value == 1.0 and d.error == pytest.approx(0.3)
    assert d.flags == ("f",) and d.method_tag == "y+x"
    assert a.scaled(-2).error == pytest.approx(0.2)
    assert not IntegralEstimate(0.0, math.inf, "x").certified
    with pytest.raises(ValueError):
        IntegralEstimate(0.0, -1.0, "x")
    with pytest.raises(ValueError):
        IntegralEstimate(0.0, math.nan, "x")


def test_quad_parsing():
    assert parse_quad("gauss:16") == TensorGauss((16,))
    assert parse_quad("gauss:8x12") == TensorGauss((8, 12))
    assert parse_quad("mc:1000:3") == MonteCarlo(1000, 3)
    assert str(parse_quad("mc:1000:3")) == "mc:1000:3"
    for bad in ("gauss:", "gauss:1", "mc:10:1", "simpson:4", "mc:1000"):
        with pytest.raises(ValueError):
            parse_quad(bad)
    assert default_quad(make_clifford(1, 1)) == G64
    assert isinstance(default_quad(make_clifford(2, 2)), MonteCarlo)
