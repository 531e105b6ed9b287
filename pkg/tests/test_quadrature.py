import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rho_theta_quad
from tracegym import DomainError, build_quadrature, rho_theta_density
from tracegym.quadrature import rho_tail_mass


def test_rho_zero_at_origin():
    assert rho_theta_density(0.0, 0.0) == pytest.approx(math.pi / 4, rel=1e-15)


def test_rho_half_is_sech():
    s = np.linspace(-5, 5, 41)
    assert np.allclose(rho_theta_density(0.5, s), 1 / np.cosh(math.pi * s), rtol=1e-13)


def test_rho_decay():
    assert rho_theta_density(0.5, 10.0) < 1e-12
    assert np.isfinite(rho_theta_density(0.3, 1e4)) and rho_theta_density(0.3, 1e4) == 0


@pytest.mark.parametrize("theta", [0.0, 0.25, 0.5, 0.75, 0.95])
def test_rho_unit_mass(theta):
    assert rho_theta_quad(theta, lambda s: 1.0) == pytest.approx(1.0, abs=1e-10)


@given(st.floats(0.0, 0.99), st.floats(0.0, 8.0))
def test_tail_mass_oracle(theta, S):
    from scipy.integrate import quad

    val, _ = quad(lambda s: float(rho_theta_density(theta, s)), S, np.inf, epsabs=1e-14, epsrel=1e-10)
    assert rho_tail_mass(theta, S) == pytest.approx(2 * val, rel=1e-7, abs=1e-13)


def test_build_theta_zero_budget():
    q = build_quadrature(0.0, 1e-8)
    assert q.captured_mass >= 1 - 1e-8
    assert abs(np.sum(q.density_weights) - 1) <= 1e-8


def test_build_theta_half_mass():
    q = build_quadrature(0.5, 1e-8)
    assert 1 - 1e-8 <= np.sum(q.density_weights) <= 1 + 1e-8


def test_build_theta_one_point_mass():
    q = build_quadrature(1.0)
    assert q.is_point_mass and q.n_nodes == 0 and q.captured_mass == 1.0
    assert q.refined() is q


def test_build_rejects_bad_theta():
    with pytest.raises(DomainError):
        build_quadrature(1.5)
    with pytest.raises(DomainError):
        build_quadrature(0.5, 0.0)


@pytest.mark.parametrize("theta", [0.0, 0.25, 0.75])
def test_integrates_smooth_function(theta):
    f = lambda s: np.log(2 + np.cos(s)) + s**2 / (1 + s**2)
    q = build_quadrature(theta, 1e-8)
    assert q.integrate(f(q.nodes)) == pytest.approx(rho_theta_quad(theta, f), abs=1e-8)


def test_summary_fields():
    q = build_quadrature(0.25)
    s = q.summary()
    assert set(s) == {"theta", "S", "nodes", "panels", "captured_mass"}
    assert s["nodes"] == q.n_nodes == q.panels * q.order
    assert q.refined().n_nodes == 2 * q.n_nodes


@pytest.mark.parametrize("theta", [round(0.1 * k, 1) for k in range(10)])
def test_density_normalization(theta):
    q = build_quadrature(theta)
    total = float(np.sum(q.density_weights))
    assert 1 - 1e-8 <= total <= 1
    assert 1 - 1e-6 < q.captured_mass <= 1
    assert np.all(q.weights > 0)
    assert np.allclose(np.sort(q.nodes), -np.sort(q.nodes)[::-1], atol=1e-12)


@pytest.mark.parametrize("theta", [1e-300, 1e-12, 1e-9, 2e-8])
def test_tiny_theta_matches_limit(theta):
    assert rho_tail_mass(theta, 1.0) == pytest.approx(rho_tail_mass(0.0, 1.0), rel=1e-14)
    assert rho_theta_density(theta, 0.3) == pytest.approx(float(rho_theta_density(0.0, 0.3)), rel=1e-14)
