import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import loop_einstein
from tracegym import (
    DenseTensor,
    Shape,
    ShapeError,
    conj_transpose,
    dematricize,
    einstein_product,
    frobenius_inner,
    identity_tensor,
    kronecker_product,
    kronecker_sum,
    matricize,
    trace,
    zero_tensor,
)
from tracegym.errors import NumericalError
from tracegym.tensor import tensor_from_json, tensor_to_json


def rand_tensor(rng, shape):
    return DenseTensor(rng.normal(size=shape.dims) + 1j * rng.normal(size=shape.dims), shape)


def diag(*vals):
    return DenseTensor.from_matrix(np.diag(vals))


def test_shape_parse():
    assert Shape.parse("2,3") == Shape((2, 3), (2, 3))
    assert Shape.parse("2,2;3") == Shape((2, 2), (3,))
    assert str(Shape.parse("2,2;2,2")) == "2,2;2,2"
    with pytest.raises(ShapeError):
        Shape.parse("2;2;2")
    with pytest.raises(ShapeError):
        Shape.parse("a")
    with pytest.raises(ShapeError):
        Shape((0,), (2,))


def test_cubical():
    assert Shape.parse("2,2").is_cubical
    assert not Shape.parse("2,3").is_cubical
    assert not Shape.parse("2;3").is_cubical


def test_identity():
    assert np.array_equal(identity_tensor(Shape.parse("2")).matrix, np.eye(2))
    assert np.array_equal(identity_tensor(Shape.parse("2,3")).matrix, np.eye(6))
    assert trace(identity_tensor(Shape.parse("2,3"))) == 6
    assert trace(identity_tensor(Shape.parse("2,2"))) == 4


def test_entries_must_be_finite():
    with pytest.raises(NumericalError):
        DenseTensor.from_matrix(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(ShapeError):
        DenseTensor(np.zeros(5), Shape.parse("2"))


def test_einstein_identity(rng):
    s = Shape.parse("2,2")
    A = rand_tensor(rng, s)
    assert np.allclose(einstein_product(identity_tensor(s), A).data, A.data, atol=0)


def test_einstein_diagonal():
    assert np.array_equal(einstein_product(diag(1, 2), diag(3, 4)).matrix, np.diag([3, 8]))


def test_einstein_loop_oracle(rng):
    s = Shape.parse("2,3")
    A, B = rand_tensor(rng, s), rand_tensor(rng, s)
    assert np.allclose(einstein_product(A, B).data, loop_einstein(A.data, B.data, 2), rtol=0, atol=1e-12)


def test_einstein_rectangular_loop_oracle(rng):
    A = rand_tensor(rng, Shape((2, 3), (4,)))
    B = rand_tensor(rng, Shape((4,), (3, 2)))
    C = einstein_product(A, B)
    assert C.shape == Shape((2, 3), (3, 2))
    assert np.allclose(C.data, loop_einstein(A.data, B.data, 1), atol=1e-12)


def test_einstein_shape_mismatch(rng):
    with pytest.raises(ShapeError):
        einstein_product(rand_tensor(rng, Shape.parse("2;3")), rand_tensor(rng, Shape.parse("2;3")))


@given(st.integers(0, 2**32 - 1), st.sampled_from(["2;2", "2,2;2,2", "2,3;2,3", "3;3"]))
def test_matricize_homomorphism(seed, text):
    rng = np.random.default_rng(seed)
    s = Shape.parse(text)
    A, B = rand_tensor(rng, s), rand_tensor(rng, s)
    lhs = matricize(einstein_product(A, B))
    rhs = matricize(A) @ matricize(B)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(matricize(A)) * np.linalg.norm(matricize(B))


def test_conj_transpose(rng):
    M = rng.normal(size=(4, 4))
    S = DenseTensor.from_matrix(M + M.T, Shape.parse("2,2"))
    assert np.array_equal(conj_transpose(S).data, S.data)
    A = rand_tensor(rng, Shape((2, 2), (3,)))
    assert np.array_equal(conj_transpose(conj_transpose(A)).data, A.data)
    assert np.array_equal(conj_transpose(A).matrix, A.matrix.conj().T)
    assert conj_transpose(A).shape == Shape((3,), (2, 2))


@given(st.integers(0, 2**32 - 1))
def test_trace_cyclic(seed):
    rng = np.random.default_rng(seed)
    s = Shape.parse("2,2")
    A, B = rand_tensor(rng, s), rand_tensor(rng, s)
    t1, t2 = trace(A @ B), trace(B @ A)
    assert abs(t1 - t2) <= 1e-10 * max(1.0, abs(t1))


def test_kron_trace_paper_value():
    assert trace(kronecker_product(diag(1, 2), diag(3, 4))) == 21


def test_frobenius_inner(rng):
    I = identity_tensor(Shape.parse("2"))
    assert frobenius_inner(I, I) == 2
    s = Shape.parse("2,2")
    A, B = rand_tensor(rng, s), rand_tensor(rng, s)
    assert np.isclose(frobenius_inner(A, B), np.conj(frobenius_inner(B, A)), rtol=1e-14)
    oracle = sum(np.conj(a) * b for a, b in zip(A.data.ravel(), B.data.ravel()))
    assert np.isclose(frobenius_inner(A, B), oracle, rtol=1e-13)


def test_kronecker_matches_numpy(rng):
    A = rand_tensor(rng, Shape((2,), (3,)))
    B = rand_tensor(rng, Shape((2, 2), (2,)))
    K = kronecker_product(A, B)
    assert K.shape == Shape((2, 2, 2), (3, 2))
    assert np.allclose(K.matrix, np.kron(A.matrix, B.matrix), atol=0)


def test_kronecker_scalar_identity(rng):
    A = rand_tensor(rng, Shape.parse("2,2"))
    one = identity_tensor(Shape.parse("1"))
    K = kronecker_product(A, one)
    assert np.array_equal(K.matrix, A.matrix)


def test_kronecker_sum():
    s = Shape.parse("2")
    O = zero_tensor(s)
    assert np.array_equal(kronecker_sum(O, O).matrix, np.zeros((4, 4)))
    w = np.linalg.eigvalsh(kronecker_sum(diag(1, 2), diag(10, 20)).matrix)
    assert np.allclose(w, [11, 12, 21, 22])


def test_kronecker_sum_spectrum(rng):
    def herm():
        G = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        return DenseTensor.from_matrix((G + G.conj().T) / 2)

    A, B = herm(), herm()
    la, lb = np.linalg.eigvalsh(A.matrix), np.linalg.eigvalsh(B.matrix)
    expected = np.sort(np.add.outer(la, lb).ravel())
    assert np.allclose(np.linalg.eigvalsh(kronecker_sum(A, B).matrix), expected, atol=1e-12)


def test_matricize_round_trip(rng):
    s = Shape((2, 3), (4,))
    A = rand_tensor(rng, s)
    assert np.array_equal(dematricize(matricize(A), s).data, A.data)
    assert np.array_equal(matricize(identity_tensor(Shape.parse("2,3"))), np.eye(6))


def test_json_round_trip(rng):
    A = rand_tensor(rng, Shape((2, 2), (3,)))
    B = tensor_from_json(tensor_to_json(A))
    assert B.shape == A.shape and np.array_equal(B.data, A.data)
    with pytest.raises(ShapeError):
        tensor_from_json({"row_dims": [2]})
