"""Random instance families used by the suites and the tests."""
from __future__ import annotations

import math

import numpy as np

from .tensor import DenseTensor, Shape

# diagonal shift keeping generated positive-definite tensors well conditioned
PD_SHIFT = 0.05


def ginibre(rng: np.random.Generator, d: int) -> np.ndarray:
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    Q, R = np.linalg.qr(ginibre(rng, d))
    diag = np.diagonal(R)
    return Q * (diag / np.abs(diag))


def random_complex(rng: np.random.Generator, shape: Shape) -> DenseTensor:
    return DenseTensor.from_matrix(ginibre(rng, shape.n_rows), shape)


def random_hermitian(rng: np.random.Generator, shape: Shape, scale: float = 1.0) -> DenseTensor:
    """``scale * (G + G^H) / 2`` for a complex Ginibre ``G``."""
    G = ginibre(rng, shape.n_rows)
    return DenseTensor.from_matrix(scale * (G + G.conj().T) / 2, shape)


def random_pd(rng: np.random.Generator, shape: Shape, shift: float = PD_SHIFT) -> DenseTensor:
    """``G^H G + shift * I`` rescaled to unit average eigenvalue."""
    d = shape.n_rows
    G = ginibre(rng, d)
    A = G.conj().T @ G + shift * np.eye(d)
    A = (A + A.conj().T) / 2
    return DenseTensor.from_matrix(A * d / np.trace(A).real, shape)


def random_density(rng: np.random.Generator, shape: Shape) -> DenseTensor:
    A = random_pd(rng, shape)
    return A / np.trace(A.matrix).real


def commuting_hermitian(rng: np.random.Generator, shape: Shape, k: int,
                        scale: float = 1.0) -> list[DenseTensor]:
    """``k`` Hermitian tensors sharing one Haar eigenbasis."""
    d = shape.n_rows
    U = haar_unitary(rng, d)
    out = []
    for _ in range(k):
        lam = scale * rng.standard_normal(d)
        out.append(DenseTensor.from_matrix((U * lam) @ U.conj().T, shape))
    return out


def commuting_pd(rng: np.random.Generator, shape: Shape, k: int) -> list[DenseTensor]:
    """``k`` positive-definite tensors sharing one Haar eigenbasis."""
    d = shape.n_rows
    U = haar_unitary(rng, d)
    out = []
    for _ in range(k):
        lam = rng.uniform(PD_SHIFT, 2.0, size=d)
        out.append(DenseTensor.from_matrix((U * lam) @ U.conj().T, shape))
    return out
