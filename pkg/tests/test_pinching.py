import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from oracles import pauli
from tracegym import (
    DenseTensor,
    Shape,
    eig_hermitian,
    identity_tensor,
    mu_delta_density,
    mu_delta_transform,
    pinch,
    pinch_via_integral,
)
from tracegym.errors import DegenerateSpectrumError
from tracegym.generators import commuting_hermitian, random_hermitian
from tracegym.pinching import fejer_tail_transform, pinch_phase_average


def test_pinch_pauli_z_zeroes_off_diagonal(rng):
    _, _, Z = pauli()
    X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    P = pinch(DenseTensor.from_matrix(Z), DenseTensor.from_matrix(X)).matrix
    assert np.array_equal(P, np.diag(np.diag(X)))


def test_pinch_identity_is_noop(rng):
    s = Shape.parse("2,2")
    X = random_hermitian(rng, s)
    assert np.allclose(pinch(identity_tensor(s), X).matrix, X.matrix, atol=1e-14)


@given(st.integers(0, 2**32 - 1))
def test_pinch_phase_average_oracle(seed):
    rng = np.random.default_rng(seed)
    s = Shape.parse("2,2")
    H, X = random_hermitian(rng, s), random_hermitian(rng, s)
    assert np.allclose(pinch(H, X).matrix, pinch_phase_average(H, X).matrix, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_pinch_invariants(seed):
    rng = np.random.default_rng(seed)
    s = Shape.parse("2,2")
    H, X = random_hermitian(rng, s), random_hermitian(rng, s)
    D = eig_hermitian(H)
    P = pinch(D, X).matrix
    Hm = H.matrix
    assert np.linalg.norm(P @ Hm - Hm @ P) <= 1e-10 * np.linalg.norm(Hm) * np.linalg.norm(X.matrix)
    assert abs(np.trace(P @ Hm) - np.trace(X.matrix @ Hm)) <= 1e-10 * np.linalg.norm(Hm) * np.linalg.norm(X.matrix)
    assert np.allclose(pinch(D, pinch(D, X)).matrix, P, atol=1e-12)


def test_mu_delta_values():
    assert mu_delta_density(2 * math.pi, 0.0) == pytest.approx(1.0)
    assert mu_delta_density(1.0, 0.0) == pytest.approx(1 / (2 * math.pi))
    assert mu_delta_transform(1.3, 0.0) == 1.0
    assert mu_delta_transform(1.3, 1.3) == 0.0
    assert mu_delta_transform(1.3, 2.0) == 0.0


def test_mu_delta_unit_mass():
    f = lambda s: float(mu_delta_density(1.0, s))
    total = 2 * sum(quad(f, 2 * math.pi * k, 2 * math.pi * (k + 1), epsabs=1e-14)[0] for k in range(2000))
    # remaining tail beyond 4000 pi is bounded by 4 / (pi * 4000 pi)
    assert total == pytest.approx(1.0, abs=1e-4)
    tail = float(fejer_tail_transform(1.0, 0.0, 4000 * math.pi))
    assert total + tail == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("omega", [0.0, 0.3, 1.0, 2.5])
def test_fejer_tail_closed_form(omega):
    delta, S = 1.0, 20.0
    f = lambda s: math.cos(omega * s) * float(mu_delta_density(delta, s))
    val = 2 * quad(f, S, 400 * S, limit=4000, epsabs=1e-13)[0]
    far = 2 / (math.pi * delta) * 2 / (400 * S)  # |tail beyond 400 S| bound
    assert float(fejer_tail_transform(delta, omega, S)) == pytest.approx(val, abs=far + 1e-10)


def test_pinch_integral_pauli():
    X, _, Z = pauli()
    Y = pinch_via_integral(DenseTensor.from_matrix(Z), DenseTensor.from_matrix(X))
    assert np.linalg.norm(Y.matrix) <= 1e-6


def test_pinch_integral_commuting(rng):
    s = Shape.parse("2,2")
    H, X = commuting_hermitian(rng, s, 2)
    Y = pinch_via_integral(H, X)
    assert np.linalg.norm(Y.matrix - X.matrix) <= 1e-6


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["2", "2,2"]))
def test_pinch_integral_matches_exact(seed, text):
    rng = np.random.default_rng(seed)
    s = Shape.parse(text)
    H, X = random_hermitian(rng, s), random_hermitian(rng, s)
    Y, info = pinch_via_integral(H, X, return_info=True)
    assert np.linalg.norm(Y.matrix - pinch(H, X).matrix) <= 1e-6
    assert info["nodes"] > 0 and info["delta"] > 0


def test_pinch_integral_needs_gap():
    s = Shape.parse("2")
    with pytest.raises(DegenerateSpectrumError):
        pinch_via_integral(identity_tensor(s), identity_tensor(s))
