"""Dense square-tensor arithmetic under the Einstein product.

A tensor of shape ``(I_1..I_M; J_1..J_N)`` is stored as a complex numpy
array with ``M + N`` axes.  Its matricization flattens the row indices and
the column indices separately in row-major (C) order, so the flat row index
of ``(i_1, .., i_M)`` is the usual mixed-radix number with ``i_M`` varying
fastest.  Every identity in this package is stated against that one
bijection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalError, ShapeError

__all__ = [
    "Shape",
    "DenseTensor",
    "identity_tensor",
    "zero_tensor",
    "einstein_product",
    "conj_transpose",
    "trace",
    "frobenius_inner",
    "frobenius_norm",
    "kronecker_product",
    "kronecker_sum",
    "kronecker_power",
    "matricize",
    "dematricize",
    "hermitian_part",
    "is_hermitian",
    "tensor_to_json",
    "tensor_from_json",
]


@dataclass(frozen=True)
class Shape:
    row_dims: tuple[int, ...]
    col_dims: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(d) for d in self.row_dims)
        cols = tuple(int(d) for d in self.col_dims)
        if not rows or not cols:
            raise ShapeError("row_dims and col_dims must be non-empty")
        if any(d < 1 for d in rows + cols):
            raise ShapeError(f"dimensions must be >= 1, got {rows};{cols}")
        object.__setattr__(self, "row_dims", rows)
        object.__setattr__(self, "col_dims", cols)

    @classmethod
    def square(cls, dims: Sequence[int]) -> "Shape":
        dims = tuple(dims)
        return cls(dims, dims)

    @classmethod
    def parse(cls, text: str) -> "Shape":
        """Parse ``"2,3"`` (square) or ``"2,3;2,3"``."""
        try:
            parts = [tuple(int(x) for x in p.split(",") if x.strip()) for p in text.split(";")]
        except ValueError as exc:
            raise ShapeError(f"cannot parse shape {text!r}") from exc
        if len(parts) == 1:
            return cls(parts[0], parts[0])
        if len(parts) == 2:
            return cls(parts[0], parts[1])
        raise ShapeError(f"cannot parse shape {text!r}")

    @property
    def is_square(self) -> bool:
        return self.row_dims == self.col_dims

    @property
    def is_cubical(self) -> bool:
        """Square with every mode of the same size (``|I_i| = N``)."""
        return self.is_square and len(set(self.row_dims)) == 1

    @property
    def n_rows(self) -> int:
        return math.prod(self.row_dims)

    @property
    def n_cols(self) -> int:
        return math.prod(self.col_dims)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.row_dims + self.col_dims

    def __str__(self):
        return ",".join(map(str, self.row_dims)) + ";" + ",".join(map(str, self.col_dims))


class DenseTensor:
    """Immutable complex tensor with a row/column split of its axes.

    ``data`` has shape ``row_dims + col_dims``.  Arithmetic operators are
    provided for convenience: ``+``, ``-``, scalar ``*`` and ``/``, and ``@``
    for the Einstein product.
    """

    __slots__ = ("_data", "shape")

    def __init__(self, data, shape: Shape | None = None):
        arr = np.array(data, dtype=np.complex128, copy=True)
        if shape is None:
            if arr.ndim != 2:
                raise ShapeError("shape is required unless data is a matrix")
            shape = Shape((arr.shape[0],), (arr.shape[1],))
        if arr.size != shape.n_rows * shape.n_cols:
            raise ShapeError(f"{arr.size} entries do not fit shape {shape}")
        arr = arr.reshape(shape.dims)
        if not np.all(np.isfinite(arr)):
            raise NumericalError("tensor entries must be finite")
        arr.flags.writeable = False
        self._data = arr
        self.shape = shape

    @classmethod
    def from_matrix(cls, matrix, shape: Shape | None = None) -> "DenseTensor":
        matrix = np.asarray(matrix)
        if matrix.ndim != 2:
            raise ShapeError("expected a 2-D matrix")
        if shape is None:
            shape = Shape((matrix.shape[0],), (matrix.shape[1],))
        if matrix.shape != (shape.n_rows, shape.n_cols):
            raise ShapeError(f"matrix {matrix.shape} does not match shape {shape}")
        return cls(matrix, shape)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def matrix(self) -> np.ndarray:
        return self._data.reshape(self.shape.n_rows, self.shape.n_cols)

    @property
    def H(self) -> "DenseTensor":
        return conj_transpose(self)

    def _like(self, other) -> "DenseTensor":
        if not isinstance(other, DenseTensor):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")
        return other

    def __add__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        return DenseTensor(self._data + other._data, self.shape)

    def __sub__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        return DenseTensor(self._data - other._data, self.shape)

    def __neg__(self):
        return DenseTensor(-self._data, self.shape)

    def __mul__(self, scalar):
        if isinstance(scalar, DenseTensor):
            return NotImplemented
        return DenseTensor(self._data * complex(scalar), self.shape)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return DenseTensor(self._data / complex(scalar), self.shape)

    def __matmul__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return einstein_product(self, other)

    def __repr__(self):
        return f"DenseTensor(shape={self.shape})"


def _check_square(A: DenseTensor, what="tensor"):
    if not A.shape.is_square:
        raise ShapeError(f"{what} must be square, got shape {A.shape}")


def identity_tensor(shape: Shape) -> DenseTensor:
    if not shape.is_square:
        raise ShapeError(f"identity needs a square shape, got {shape}")
    return DenseTensor(np.eye(shape.n_rows), shape)


def zero_tensor(shape: Shape) -> DenseTensor:
    return DenseTensor(np.zeros(shape.dims), shape)


def einstein_product(A: DenseTensor, B: DenseTensor) -> DenseTensor:
    """Contract the column indices of ``A`` with the row indices of ``B``."""
    if A.shape.col_dims != B.shape.row_dims:
        raise ShapeError(f"cannot contract {A.shape} with {B.shape}")
    m = len(A.shape.row_dims)
    k = len(A.shape.col_dims)
    out = np.tensordot(A.data, B.data, axes=(list(range(m, m + k)), list(range(k))))
    return DenseTensor(out, Shape(A.shape.row_dims, B.shape.col_dims))


def conj_transpose(A: DenseTensor) -> DenseTensor:
    m = len(A.shape.row_dims)
    n = len(A.shape.col_dims)
    perm = list(range(m, m + n)) + list(range(m))
    return DenseTensor(np.conj(A.data).transpose(perm), Shape(A.shape.col_dims, A.shape.row_dims))


def trace(A: DenseTensor) -> complex:
    _check_square(A)
    return complex(np.trace(A.matrix))


def frobenius_inner(A: DenseTensor, B: DenseTensor) -> complex:
    """``Tr(A^H * B)``, computed as the entrywise sum of ``conj(a) b``."""
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch: {A.shape} vs {B.shape}")
    return complex(np.vdot(A.data, B.data))


def frobenius_norm(A: DenseTensor) -> float:
    return float(np.linalg.norm(A.data.ravel()))


def kronecker_product(A: DenseTensor, B: DenseTensor) -> DenseTensor:
    """Tensor Kronecker product with ``B`` nested inside each entry of ``A``.

    The result has row dims ``A.row_dims + B.row_dims`` and column dims
    ``A.col_dims + B.col_dims``; under row-major flattening its
    matricization equals ``np.kron(matricize(A), matricize(B))``.
    """
    ma, na = len(A.shape.row_dims), len(A.shape.col_dims)
    mb, nb = len(B.shape.row_dims), len(B.shape.col_dims)
    outer = np.multiply.outer(A.data, B.data)
    # (a_rows, a_cols, b_rows, b_cols) -> (a_rows, b_rows, a_cols, b_cols)
    perm = (
        list(range(ma))
        + list(range(ma + na, ma + na + mb))
        + list(range(ma, ma + na))
        + list(range(ma + na + mb, ma + na + mb + nb))
    )
    shape = Shape(A.shape.row_dims + B.shape.row_dims, A.shape.col_dims + B.shape.col_dims)
    return DenseTensor(outer.transpose(perm), shape)


def kronecker_sum(A: DenseTensor, B: DenseTensor) -> DenseTensor:
    _check_square(A, "A")
    _check_square(B, "B")
    return kronecker_product(A, identity_tensor(B.shape)) + kronecker_product(identity_tensor(A.shape), B)


def kronecker_power(A: DenseTensor, m: int) -> DenseTensor:
    if m < 1:
        raise ValueError("m must be >= 1")
    out = A
    for _ in range(m - 1):
        out = kronecker_product(out, A)
    return out


def matricize(A: DenseTensor) -> np.ndarray:
    """Return the ``n_rows x n_cols`` matricization (a read-only view)."""
    return A.matrix


def dematricize(matrix, shape: Shape) -> DenseTensor:
    matrix = np.asarray(matrix)
    if matrix.size != shape.n_rows * shape.n_cols:
        raise ShapeError(f"{matrix.size} entries do not fit shape {shape}")
    return DenseTensor(matrix.reshape(shape.n_rows, shape.n_cols), shape)


def hermitian_part(A: DenseTensor) -> DenseTensor:
    """``Re(A) = (A + A^H) / 2``."""
    _check_square(A)
    M = A.matrix
    return DenseTensor.from_matrix((M + M.conj().T) / 2, A.shape)


def is_hermitian(A: DenseTensor, rtol: float = 1e-10) -> bool:
    if not A.shape.is_square:
        return False
    M = A.matrix
    return np.linalg.norm(M - M.conj().T) <= rtol * max(np.linalg.norm(M), np.finfo(float).tiny)


def tensor_to_json(A: DenseTensor) -> dict:
    flat = A.data.ravel()
    return {
        "row_dims": list(A.shape.row_dims),
        "col_dims": list(A.shape.col_dims),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def tensor_from_json(obj: dict) -> DenseTensor:
    try:
        shape = Shape(tuple(obj["row_dims"]), tuple(obj["col_dims"]))
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"malformed tensor JSON: {exc}") from exc
    if re.shape != im.shape:
        raise ShapeError("re and im must have the same length")
    return DenseTensor(re + 1j * im, shape)


def stack_matrices(tensors: Iterable[DenseTensor]) -> np.ndarray:
    return np.stack([t.matrix for t in tensors])
