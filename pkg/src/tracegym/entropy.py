"""Relative entropy between tensors and its variational expressions."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DomainError, ShapeError
from .spectral import PSD_RTOL, eigh_matrix, hermitian_matrix, psd_eigh
from .tensor import DenseTensor

__all__ = ["relative_entropy", "variational_gap", "VariationalGap", "gibbs_maximizer"]


def _pd_log(T: DenseTensor, what: str) -> np.ndarray:
    w, V = psd_eigh(T, what)
    if w[0] <= 0:
        raise DomainError(f"{what} must be positive definite")
    return (V * np.log(w)) @ V.conj().T


def _state_log_terms(A: DenseTensor):
    """Eigenvalues and vectors of a unit-trace PSD ``A`` with the trace checked."""
    w, V = psd_eigh(A, "A")
    if abs(float(np.sum(w)) - 1) > 1e-9:
        raise DomainError(f"A must have unit trace, got {np.sum(w):.12g}")
    return w, V


def relative_entropy(A: DenseTensor, B: DenseTensor) -> float:
    """``Tr A (log A - log B)`` with ``0 log 0 = 0`` on the kernel of ``A``.

    ``A`` is a unit-trace PSD tensor and ``B`` is positive definite, so the
    support condition holds automatically; a singular ``B`` raises.
    """
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch: {A.shape} vs {B.shape}")
    w, V = _state_log_terms(A)
    logB = _pd_log(B, "B")
    pos = w > PSD_RTOL * w[-1]
    ent = float(np.sum(w[pos] * np.log(w[pos])))
    cross = np.einsum("ai,ab,bi->i", V.conj(), logB, V)
    val = ent - complex(np.sum(w * cross))
    if abs(val.imag) > 1e-10 * (1 + abs(val.real)):
        raise DomainError("relative entropy came out complex; inputs are not Hermitian")
    return float(val.real)


def _log_trace_exp(M: np.ndarray) -> float:
    w = eigh_matrix((M + M.conj().T) / 2)[0]
    top = float(w[-1])
    return top + float(np.log(np.sum(np.exp(w - top))))


class VariationalGap(NamedTuple):
    """Slack in the three variational bounds; each should be ``>= 0``."""

    g1: float
    g2: float
    g3: float
    relative_entropy: float


def variational_gap(A: DenseTensor, B: DenseTensor, X: DenseTensor) -> VariationalGap:
    """Gaps between ``D(A||B)`` and the variational lower bounds at ``X``.

    With ``H = log X``::

        g1 = D - [Tr(A H) - log Tr exp(log B + H)]
        g2 = D - [Tr(A H) + 1 - Tr exp(log B + H)]
        g3 = log Tr exp(H + log B) - [Tr(A H) - D]

    ``g1`` and ``g3`` are the same quantity written two ways; ``g1`` vanishes
    at ``X = exp(log A - log B)`` for full-rank ``A``.
    """
    if not (A.shape == B.shape == X.shape):
        raise ShapeError("A, B and X must share one shape")
    D = relative_entropy(A, B)
    H = _pd_log(X, "X")
    logB = _pd_log(B, "B")
    MA = hermitian_matrix(A, "A")
    tr_ah = float(np.trace(MA @ H).real)
    ltr = _log_trace_exp(logB + H)
    tr_exp = float(np.sum(np.exp(eigh_matrix((logB + H + (logB + H).conj().T) / 2)[0])))
    return VariationalGap(
        g1=D - (tr_ah - ltr),
        g2=D - (tr_ah + 1 - tr_exp),
        g3=ltr - (tr_ah - D),
        relative_entropy=D,
    )


def gibbs_maximizer(A: DenseTensor, B: DenseTensor) -> DenseTensor:
    """``exp(log A - log B)``, the maximiser of the supremum form."""
    M = _pd_log(A, "A") - _pd_log(B, "B")
    w, V = eigh_matrix((M + M.conj().T) / 2)
    return DenseTensor.from_matrix((V * np.exp(w)) @ V.conj().T, A.shape)
