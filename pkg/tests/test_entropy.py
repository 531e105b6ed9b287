import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from tracegym import DenseTensor, DomainError, Shape, identity_tensor, relative_entropy, variational_gap
from tracegym.entropy import gibbs_maximizer
from tracegym.generators import commuting_pd, random_density, random_pd

S22 = Shape.parse("2,2")


def diag(*vals):
    return DenseTensor.from_matrix(np.diag(vals))


def test_self_entropy_zero(rng):
    A = random_density(rng, S22)
    assert abs(relative_entropy(A, A)) <= 1e-12


def test_diagonal_closed_form():
    A = diag(0.5, 0.5)
    for c in (1.0, 3.0, 0.2):
        B = diag(c / 3, 2 * c / 3)
        expected = 0.5 * (math.log(0.5) - math.log(c / 3)) + 0.5 * (math.log(0.5) - math.log(2 * c / 3))
        assert relative_entropy(A, B) == pytest.approx(expected, rel=1e-14)


def test_commuting_pair_scalar_sum(rng):
    A, B = commuting_pd(rng, S22, 2)
    A = A / np.trace(A.matrix).real
    a = np.linalg.eigvalsh(A.matrix)
    # a shared eigenbasis: read B's eigenvalues in A's basis
    _, V = np.linalg.eigh(A.matrix)
    b = np.real(np.diag(V.conj().T @ B.matrix @ V))
    assert relative_entropy(A, B) == pytest.approx(np.sum(a * (np.log(a) - np.log(b))), rel=1e-10)


def test_rank_deficient_state():
    assert relative_entropy(diag(1.0, 0.0), diag(0.5, 0.5)) == pytest.approx(math.log(2), rel=1e-14)


def test_matches_scipy_logm(rng):
    A, B = random_density(rng, S22), random_pd(rng, S22)
    a, b = A.matrix, B.matrix
    oracle = np.trace(a @ (scipy.linalg.logm(a) - scipy.linalg.logm(b))).real
    assert relative_entropy(A, B) == pytest.approx(oracle, abs=1e-10)


def test_domain_errors(rng):
    with pytest.raises(DomainError):
        relative_entropy(diag(1.0, 1.0), diag(1.0, 1.0))
    with pytest.raises(DomainError):
        relative_entropy(diag(0.5, 0.5), diag(1.0, 0.0))


def test_maximizer_attains(rng):
    A, B = random_density(rng, S22), random_pd(rng, S22)
    g = variational_gap(A, B, gibbs_maximizer(A, B))
    assert abs(g.g1) <= 1e-7


def test_identity_x():
    A, B = diag(0.25, 0.75), diag(2.0, 0.5)
    g = variational_gap(A, B, identity_tensor(Shape.parse("2")))
    D = relative_entropy(A, B)
    assert g.g1 == pytest.approx(D + math.log(2.5), rel=1e-14)
    assert g.g1 >= 0


@given(st.integers(0, 2**32 - 1))
def test_gaps_nonnegative(seed):
    rng = np.random.default_rng(seed)
    A, B, X = random_density(rng, S22), random_pd(rng, S22), random_pd(rng, S22)
    g = variational_gap(A, B, X)
    assert min(g.g1, g.g2, g.g3) >= -1e-8
    assert g.g1 == pytest.approx(g.g3, abs=1e-10)
    assert g.g2 >= g.g1 - 1e-10
