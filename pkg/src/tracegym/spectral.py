"""Hermitian spectral calculus on square tensors.

All functions act through the matricization: a Hermitian tensor is
diagonalised once with ``numpy.linalg.eigh`` and functions are applied to
its eigenvalues.  Eigenvalues closer than ``cluster_tol`` are merged into a
single spectral projector (single linkage on the sorted spectrum).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateSpectrumError,
    DomainError,
    HermitianityError,
    NumericalError,
    ResourceError,
    ShapeError,
)
from .tensor import DenseTensor, Shape, kronecker_power

HERMITIAN_RTOL = 1e-10
PSD_RTOL = 1e-10

__all__ = [
    "SpectralDecomposition",
    "eig_hermitian",
    "apply_spectral_function",
    "expm",
    "logm",
    "powm",
    "expm_general",
    "complex_power",
    "schatten_norm",
    "abs_tensor",
    "loewner_geq",
    "spectral_gap",
    "eigcount_growth",
    "paper_type_count",
    "GrowthRecord",
]


def hermitian_matrix(H: DenseTensor, what: str = "tensor") -> np.ndarray:
    """Return the symmetrised matricization of ``H`` or raise."""
    if not H.shape.is_square:
        raise ShapeError(f"{what} must be square, got {H.shape}")
    M = H.matrix
    scale = np.linalg.norm(M)
    if np.linalg.norm(M - M.conj().T) > HERMITIAN_RTOL * scale:
        raise HermitianityError(f"{what} is not Hermitian")
    return (M + M.conj().T) / 2


def eigh_matrix(M: np.ndarray):
    try:
        return np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc


def psd_eigh(A: DenseTensor, what: str = "tensor"):
    """Eigendecomposition of a PSD tensor with roundoff negatives clipped to 0."""
    w, V = eigh_matrix(hermitian_matrix(A, what))
    top = max(float(np.max(np.abs(w))), 0.0) if w.size else 0.0
    if w.size and w[0] < -PSD_RTOL * max(top, 1e-300):
        raise DomainError(f"{what} is not positive semi-definite (min eigenvalue {w[0]:.3e})")
    return np.clip(w, 0.0, None), V


def _rebuild(V: np.ndarray, values: np.ndarray) -> np.ndarray:
    return (V * values) @ V.conj().T


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (ascending) with their orthogonal projectors."""

    eigenvalues: np.ndarray
    projectors: tuple[DenseTensor, ...]
    cluster_tol: float
    bases: tuple[np.ndarray, ...]  # orthonormal columns spanning each eigenspace
    shape: Shape

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def ranks(self) -> list[int]:
        return [b.shape[1] for b in self.bases]

    def reconstruct(self) -> DenseTensor:
        M = sum(lam * (B @ B.conj().T) for lam, B in zip(self.eigenvalues, self.bases))
        return DenseTensor.from_matrix(M, self.shape)


def default_cluster_tol(M: np.ndarray) -> float:
    return 1e-8 * max(1.0, float(np.linalg.norm(M)))


def cluster_eigenvalues(w: np.ndarray, tol: float) -> list[np.ndarray]:
    """Single-linkage groups of indices into the ascending array ``w``."""
    groups, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            groups.append(np.arange(start, i))
            start = i
    return groups


def eig_hermitian(H: DenseTensor, cluster_tol: float | None = None) -> SpectralDecomposition:
    M = hermitian_matrix(H)
    tol = default_cluster_tol(M) if cluster_tol is None else float(cluster_tol)
    w, V = eigh_matrix(M)
    values, projectors, bases = [], [], []
    for idx in cluster_eigenvalues(w, tol):
        B = V[:, idx]
        values.append(float(np.mean(w[idx])))
        bases.append(B)
        projectors.append(DenseTensor.from_matrix(B @ B.conj().T, H.shape))
    return SpectralDecomposition(np.array(values), tuple(projectors), tol, tuple(bases), H.shape)


def _pow_values(w: np.ndarray, alpha: float) -> np.ndarray:
    alpha = float(alpha)
    if alpha.is_integer():
        if alpha < 0 and np.any(w == 0):
            raise DomainError("negative integer power of a singular tensor")
        return w**alpha
    top = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] < -PSD_RTOL * max(top, 1e-300):
        raise DomainError("fractional power needs a positive semi-definite tensor")
    w = np.clip(w, 0.0, None)
    if alpha < 0 and np.any(w == 0):
        raise DomainError("negative power of a singular tensor")
    return w**alpha


def apply_spectral_function(H: DenseTensor, f: str, alpha: float | None = None) -> DenseTensor:
    """Apply ``exp``, ``log`` or ``pow`` (with exponent ``alpha``) to a Hermitian tensor."""
    M = hermitian_matrix(H)
    if f == "pow" and alpha is not None and float(alpha) == 1.0:
        return DenseTensor.from_matrix(M, H.shape)
    w, V = eigh_matrix(M)
    if f == "exp":
        vals = np.exp(w)
    elif f == "log":
        if w[0] <= 0:
            raise DomainError("log needs a positive definite tensor")
        vals = np.log(w)
    elif f == "pow":
        if alpha is None:
            raise ValueError("pow requires alpha")
        vals = _pow_values(w, alpha)
    else:
        raise ValueError(f"unknown spectral function {f!r}")
    return DenseTensor.from_matrix(_rebuild(V, vals), H.shape)


def expm(H: DenseTensor) -> DenseTensor:
    return apply_spectral_function(H, "exp")


def logm(H: DenseTensor) -> DenseTensor:
    return apply_spectral_function(H, "log")


def powm(H: DenseTensor, alpha: float) -> DenseTensor:
    return apply_spectral_function(H, "pow", alpha)


def expm_general(A: DenseTensor) -> DenseTensor:
    """Exponential of an arbitrary square tensor (Pade scaling and squaring)."""
    if not A.shape.is_square:
        raise ShapeError(f"tensor must be square, got {A.shape}")
    return DenseTensor.from_matrix(scipy.linalg.expm(A.matrix), A.shape)


def phase_powers(w: np.ndarray, V: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Stack of ``V diag(w**z_i) V^H`` for a PSD spectrum ``w`` and exponents ``z``.

    ``0**z`` is taken as 0 (continuous extension for ``Re z > 0``).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    with np.errstate(divide="ignore"):
        logw = np.log(w)
    vals = np.where(w > 0, np.exp(np.multiply.outer(z, np.where(w > 0, logw, 0.0))), 0.0)
    return np.einsum("ab,sb,cb->sac", V, vals, V.conj(), optimize=True)


def complex_power(A: DenseTensor, z: complex) -> DenseTensor:
    """``A**z`` for PSD ``A``; zero eigenvalues map to 0 when ``Re z > 0``."""
    w, V = psd_eigh(A)
    z = complex(z)
    if z.real <= 0 and np.any(w == 0):
        raise DomainError("A must be positive definite when Re(z) <= 0")
    return DenseTensor.from_matrix(phase_powers(w, V, np.array([z]))[0], A.shape)


def _parse_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "oo"):
            return math.inf
        p = float(p)
    p = float(p)
    if not p > 0:
        raise DomainError(f"Schatten order must be positive, got {p}")
    return p


def schatten_from_singular(s: np.ndarray, p: float) -> np.ndarray:
    """Schatten norm along the last axis of an array of singular values."""
    if math.isinf(p):
        return np.max(s, axis=-1)
    top = np.max(s, axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return np.squeeze(safe, -1) * np.sum((s / safe) ** p, axis=-1) ** (1.0 / p)


def schatten_norm(X: DenseTensor, p) -> float:
    """Schatten ``p``-(quasi-)norm of the matricization; ``p`` may be ``inf``."""
    p = _parse_p(p)
    if not X.shape.is_square:
        raise ShapeError(f"tensor must be square, got {X.shape}")
    s = np.linalg.svd(X.matrix, compute_uv=False)
    return float(schatten_from_singular(s, p))


def abs_tensor(X: DenseTensor) -> DenseTensor:
    """``|X| = (X^H X)^{1/2}``, built from the SVD of the matricization."""
    if not X.shape.is_square:
        raise ShapeError(f"tensor must be square, got {X.shape}")
    _, s, Vh = np.linalg.svd(X.matrix)
    return DenseTensor.from_matrix((Vh.conj().T * s) @ Vh, X.shape)


def loewner_geq(A: DenseTensor, B: DenseTensor, tol: float = 1e-9) -> bool:
    """True iff ``A - B`` is PSD up to ``tol * (1 + |A|_F + |B|_F)``."""
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch: {A.shape} vs {B.shape}")
    D = hermitian_matrix(A, "A") - hermitian_matrix(B, "B")
    lam_min = np.linalg.eigvalsh(D)[0]
    return bool(lam_min >= -tol * (1 + np.linalg.norm(A.matrix) + np.linalg.norm(B.matrix)))


def spectral_gap(D: SpectralDecomposition) -> float:
    if len(D.eigenvalues) < 2:
        raise DegenerateSpectrumError("spectral gap needs at least two distinct eigenvalues")
    return float(np.min(np.diff(np.sort(D.eigenvalues))))


class GrowthRecord(NamedTuple):
    m: int
    count: int
    bound: int


def paper_type_count(shape: Shape) -> int:
    """The ``N (M-1)^(N-1)`` symbol count quoted for cubical shapes (0 when M = 1)."""
    if not shape.is_cubical:
        raise ShapeError("type count is defined for cubical shapes only")
    M = len(shape.row_dims)
    N = shape.row_dims[0]
    return N * (M - 1) ** (N - 1)


def eigcount_growth(A: DenseTensor, m_max: int, cluster_tol: float | None = None,
                    max_size: int = 4096) -> list[GrowthRecord]:
    """Distinct-eigenvalue counts of ``A^{(x)m}`` for ``m = 1..m_max``.

    The bound is the number of multisets of size ``m`` drawn from the ``e``
    distinct eigenvalues of ``A``, ``C(m + e - 1, e - 1)``.
    """
    hermitian_matrix(A)
    if A.shape.n_rows ** m_max > max_size:
        raise ResourceError(f"{A.shape.n_rows}^{m_max} exceeds the size cap {max_size}")
    e = len(eig_hermitian(A, cluster_tol))
    out = []
    for m in range(1, m_max + 1):
        Am = kronecker_power(A, m)
        count = len(eig_hermitian(Am, cluster_tol))
        out.append(GrowthRecord(m, count, math.comb(m + e - 1, e - 1)))
    return out


def spectrum_list(tensors: Sequence[DenseTensor]):
    return [eigh_matrix(hermitian_matrix(t)) for t in tensors]
