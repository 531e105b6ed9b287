"""Spectral pinching: exact projector form and its Fourier integral representation."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import sici

from .errors import ConvergenceError, DegenerateSpectrumError, DomainError, ShapeError
from .quadrature import GL_ORDER, gauss_legendre_panels
from .spectral import SpectralDecomposition, eig_hermitian, hermitian_matrix, spectral_gap
from .tensor import DenseTensor

__all__ = [
    "pinch",
    "mu_delta_density",
    "mu_delta_transform",
    "pinch_via_integral",
    "pinch_phase_average",
]


def _decomposition(H) -> SpectralDecomposition:
    return H if isinstance(H, SpectralDecomposition) else eig_hermitian(H)


def pinch(H, X: DenseTensor) -> DenseTensor:
    """``sum_lambda U_lambda X U_lambda`` over the spectral projectors of ``H``.

    ``H`` may be a Hermitian tensor or a precomputed decomposition.
    """
    D = _decomposition(H)
    if X.shape != D.shape:
        raise ShapeError(f"shape mismatch: {D.shape} vs {X.shape}")
    Xm = X.matrix
    out = np.zeros_like(Xm)
    for B in D.bases:
        P = B @ B.conj().T
        out += P @ Xm @ P
    return DenseTensor.from_matrix(out, X.shape)


def pinch_phase_average(H, X: DenseTensor) -> DenseTensor:
    """Discrete Fourier form ``(1/L) sum_k V_k X V_k^H`` with ``V_k = sum_j e^{2 pi i jk/L} U_j``."""
    D = _decomposition(H)
    L = len(D)
    projs = [B @ B.conj().T for B in D.bases]
    Xm = X.matrix
    out = np.zeros_like(Xm)
    for k in range(1, L + 1):
        V = sum(np.exp(2j * math.pi * j * k / L) * P for j, P in enumerate(projs, start=1))
        out += V @ Xm @ V.conj().T
    return DenseTensor.from_matrix(out / L, X.shape)


def mu_delta_density(delta: float, s):
    """Fejer kernel ``(delta / 2 pi) (sin(delta s / 2) / (delta s / 2))**2``.

    A probability density whose Fourier transform ``max(0, 1 - |w| / delta)``
    equals 1 at the origin and vanishes exactly when ``|w| >= delta``.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    x = np.asarray(s, dtype=float) * delta / 2
    return delta / (2 * math.pi) * np.sinc(x / math.pi) ** 2


def mu_delta_transform(delta: float, omega):
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(omega, dtype=float)) / delta)


def _cos_over_s2_tail(a, S):
    """``int_S^inf cos(a s) / s**2 ds``."""
    a = np.abs(np.asarray(a, dtype=float))
    si, _ = sici(a * S)
    return np.cos(a * S) / S - a * (math.pi / 2 - si)


def fejer_tail_transform(delta: float, omega, S: float):
    """``int_{|s| > S} exp(i w s) mu_delta(s) ds`` in closed form."""
    omega = np.asarray(omega, dtype=float)
    c = (_cos_over_s2_tail(omega, S) - 0.5 * _cos_over_s2_tail(omega - delta, S)
         - 0.5 * _cos_over_s2_tail(omega + delta, S))
    return 2 / (math.pi * delta) * c


def pinch_via_integral(H: DenseTensor, X: DenseTensor, error_budget: float = 1e-6,
                       periods: int = 4, max_nodes: int = 1 << 16,
                       cluster_tol: float | None = None, return_info: bool = False):
    """Evaluate ``int exp(isH) X exp(-isH) mu_Delta(s) ds`` with ``Delta`` the spectral gap of ``H``.

    The window ``|s| <= S`` with ``S = 2 pi periods / Delta`` is integrated by
    composite Gauss-Legendre quadrature of the tensor-valued integrand,
    doubling panels until successive estimates differ by less than
    ``0.1 * error_budget * (1 + |X|_F)``.  The Fejer kernel decays only like
    ``1/s**2``, so the contribution from ``|s| > S`` is added in closed form
    (sine/cosine integrals) per spectral frequency instead of being dropped.
    """
    D = eig_hermitian(H, cluster_tol)
    if len(D) < 2:
        raise DegenerateSpectrumError("integral representation needs two distinct eigenvalues")
    if X.shape != H.shape:
        raise ShapeError(f"shape mismatch: {H.shape} vs {X.shape}")
    Xm = hermitian_matrix(X, "X")
    Hm = hermitian_matrix(H, "H")
    delta = spectral_gap(D)
    S = 2 * math.pi * periods / delta
    w, V = np.linalg.eigh(Hm)
    spread = float(w[-1] - w[0])
    # keep |omega| * panel_width <= 4 for the highest frequency in the window
    panels = max(8, int(math.ceil(2 * S * (spread + delta) / 4)))
    tol = 0.1 * error_budget * (1 + np.linalg.norm(Xm))

    def window(npanels):
        nodes, weights = gauss_legendre_panels(S, npanels, GL_ORDER)
        dw = weights * mu_delta_density(delta, nodes)
        U = np.einsum("ab,sb,cb->sac", V, np.exp(1j * np.multiply.outer(nodes, w)), V.conj(), optimize=True)
        integrand = U @ Xm @ np.conj(np.swapaxes(U, -1, -2))
        return np.tensordot(dw, integrand, axes=(0, 0))

    current = window(panels)
    while True:
        if 2 * panels * GL_ORDER > max_nodes:
            raise ConvergenceError(f"pinching integral did not settle within {max_nodes} nodes")
        finer = window(2 * panels)
        panels *= 2
        settled = np.linalg.norm(finer - current) < tol
        current = finer
        if settled:
            break

    tail = np.zeros_like(Xm)
    freqs = [float(a) for a in D.eigenvalues]
    projs = [B @ B.conj().T for B in D.bases]
    for lj, Pj in zip(freqs, projs):
        for lk, Pk in zip(freqs, projs):
            tail += float(fejer_tail_transform(delta, lj - lk, S)) * (Pj @ Xm @ Pk)
    result = DenseTensor.from_matrix(current + tail, X.shape)
    if return_info:
        return result, {"delta": delta, "S": S, "nodes": panels * GL_ORDER,
                        "tail_mass": float(fejer_tail_transform(delta, 0.0, S))}
    return result
