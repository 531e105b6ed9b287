"""Numerical checkers for tensor trace inequalities.

Every checker returns an :class:`InequalityReport`.  Integrals against
``rho_theta`` start from the given :class:`QuadratureScheme` and double its
panels until two successive estimates of the right-hand side differ by less
than ``0.1 * error_budget``; the report records the rule actually used.
Integrands are evaluated in batches: each factor is diagonalised once and
all of its complex powers come from the same eigenbasis.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DomainError, NumericalError, ShapeError
from .quadrature import DEFAULT_BUDGET, QuadratureScheme, build_quadrature
from .reports import InequalityReport, make_report, residual_report
from .spectral import (
    _parse_p,
    eigh_matrix,
    hermitian_matrix,
    phase_powers,
    psd_eigh,
    schatten_from_singular,
)
from .tensor import DenseTensor

__all__ = [
    "check_gt_two",
    "check_alt_two",
    "check_alt_multi",
    "check_gt_multi",
    "check_gt_multi_general",
    "check_log_trace_multi",
    "lie_product_error",
    "lie_error_slope",
    "PD_FLOOR",
    "CHECKER_MAX_NODES",
]

# relative eigenvalue floor used when a statement extends to PSD by continuity
PD_FLOOR = 1e-12
# ceiling on quadrature nodes for the adaptive doubling inside the checkers
CHECKER_MAX_NODES = 1 << 15
_CHUNK = 1024


def _common_shape(tensors: Sequence[DenseTensor], what: str = "tensors"):
    if len(tensors) == 0:
        raise DomainError(f"need at least one of {what}")
    shape = tensors[0].shape
    if not shape.is_square:
        raise ShapeError(f"{what} must be square, got {shape}")
    for t in tensors[1:]:
        if t.shape != shape:
            raise ShapeError(f"shape mismatch among {what}: {shape} vs {t.shape}")
    return shape


def _schatten_order(p) -> float:
    p = _parse_p(p)
    if p < 1:
        raise DomainError(f"Schatten order must be >= 1 here, got {p}")
    return p


def _p_label(p: float):
    return "inf" if math.isinf(p) else p


def _log_schatten_stack(P: np.ndarray, p: float) -> np.ndarray:
    s = np.linalg.svd(P, compute_uv=False)
    with np.errstate(divide="ignore"):
        return np.log(schatten_from_singular(s, p))


def _batched(fn: Callable[[np.ndarray], np.ndarray], nodes: np.ndarray) -> np.ndarray:
    if len(nodes) <= _CHUNK:
        return fn(nodes)
    return np.concatenate([fn(nodes[i:i + _CHUNK]) for i in range(0, len(nodes), _CHUNK)])


def _integrate(scheme: QuadratureScheme, integrand, adaptive: bool, max_nodes: int | None):
    """Integrate ``integrand(nodes)`` against ``rho_theta``, doubling panels if asked."""
    value = scheme.integrate(_batched(integrand, scheme.nodes))
    if not adaptive:
        return float(value), scheme
    cap = max_nodes or max(scheme.max_nodes, CHECKER_MAX_NODES)
    tol = 0.1 * scheme.error_budget
    while True:
        finer = scheme.refined()
        if finer.n_nodes > cap:
            raise ConvergenceError(f"right-hand side did not settle within {cap} nodes")
        finer_value = finer.integrate(_batched(integrand, finer.nodes))
        if abs(finer_value - value) < tol:
            return float(finer_value), finer
        scheme, value = finer, finer_value


def _default_scheme(quad: QuadratureScheme | None, theta: float) -> QuadratureScheme:
    if quad is None:
        return build_quadrature(theta, DEFAULT_BUDGET)
    if quad.theta != theta:
        raise DomainError(f"quadrature built for theta={quad.theta}, expected {theta}")
    return quad


def _floored_spectrum(A: DenseTensor, floor: bool):
    """PSD eigendecomposition; eigenvalues below ``PD_FLOOR * max`` are raised if ``floor``."""
    w, V = psd_eigh(A)
    eps = PD_FLOOR * float(w[-1]) if w.size else 0.0
    if w[-1] <= 0:
        raise DomainError("tensor is zero; nothing to floor against")
    hit = bool(np.any(w < eps))
    if hit and floor:
        w = np.maximum(w, eps)
    return w, V, hit


# two-tensor forms ---------------------------------------------------------

def check_gt_two(H1: DenseTensor, H2: DenseTensor) -> InequalityReport:
    """Golden-Thompson: ``Tr exp(H1 + H2) <= Tr(exp(H1) * exp(H2))``."""
    _common_shape([H1, H2])
    M1, M2 = hermitian_matrix(H1, "H1"), hermitian_matrix(H2, "H2")
    lhs = float(np.sum(np.exp(eigh_matrix(M1 + M2)[0])))
    w1, V1 = eigh_matrix(M1)
    w2, V2 = eigh_matrix(M2)
    E1 = (V1 * np.exp(w1)) @ V1.conj().T
    E2 = (V2 * np.exp(w2)) @ V2.conj().T
    rhs_c = np.trace(E1 @ E2)
    if abs(rhs_c.imag) > 1e-10 * max(abs(rhs_c), 1e-300):
        raise NumericalError(f"Tr(exp(H1) exp(H2)) has imaginary residue {rhs_c.imag:.3e}")
    return make_report("gt_two", lhs, rhs_c.real, tensors=[H1, H2])


def _alt_trace(w1, V1, M2, r: float, q: float) -> float:
    """``Tr((A1^{r/2} A2^r A1^{r/2})^{q/r})`` from the spectrum of ``A1``."""
    half = (V1 * w1 ** (r / 2)) @ V1.conj().T
    if r == 1.0:
        A2r = M2
    else:
        w2, V2 = eigh_matrix(M2)
        A2r = (V2 * np.clip(w2, 0.0, None) ** r) @ V2.conj().T
    X = half @ A2r @ half
    mu = np.clip(eigh_matrix((X + X.conj().T) / 2)[0], 0.0, None)
    return float(np.sum(mu ** (q / r)))


def check_alt_two(A1: DenseTensor, A2: DenseTensor, r: float, q: float) -> InequalityReport:
    """Araki-Lieb-Thirring for two PSD tensors.

    ``lhs = Tr((A1^{r/2} A2^r A1^{r/2})^{q/r})`` and
    ``rhs = Tr((A1^{1/2} A2 A1^{1/2})^q)``; the asserted relation is
    ``lhs <= rhs`` for ``r <= 1`` and ``lhs >= rhs`` for ``r >= 1``.
    """
    r, q = float(r), float(q)
    if not (r > 0 and q > 0):
        raise DomainError("r and q must be positive")
    _common_shape([A1, A2])
    w1, V1 = psd_eigh(A1, "A1")
    psd_eigh(A2, "A2")
    M2 = hermitian_matrix(A2, "A2")
    lhs = _alt_trace(w1, V1, M2, r, q)
    rhs = _alt_trace(w1, V1, M2, 1.0, q)
    relation = "<=" if r <= 1 else ">="
    return make_report("alt_two", lhs, rhs, relation=relation, tensors=[A1, A2],
                       params={"r": r, "q": q})


# multivariate forms -------------------------------------------------------

def check_alt_multi(A: Sequence[DenseTensor], theta: float, p=2,
                    quad: QuadratureScheme | None = None, *, adaptive: bool = True,
                    max_nodes: int | None = None) -> InequalityReport:
    """Multivariate Araki-Lieb-Thirring.

    ``lhs = log || |prod_k A_k^theta|^{1/theta} ||_p`` and
    ``rhs = int log || prod_k A_k^{1+is} ||_p rho_theta(s) ds``.
    For ``theta = 1`` the two sides coincide and the rule is a point mass.
    Singular inputs with ``theta < 1`` are floored at ``PD_FLOOR * lambda_max``
    and the report notes it.
    """
    theta = float(theta)
    if not 0 < theta <= 1:
        raise DomainError(f"theta must lie in (0, 1], got {theta}")
    p = _schatten_order(p)
    shape = _common_shape(A)
    spectra, floored = [], False
    for Ak in A:
        w, V, hit = _floored_spectrum(Ak, floor=theta < 1)
        spectra.append((w, V))
        floored |= hit
    d = shape.n_rows

    X = np.eye(d, dtype=complex)
    for w, V in spectra:
        X = X @ ((V * w ** theta) @ V.conj().T)
    sx = np.linalg.svd(X, compute_uv=False)
    params = {"theta": theta, "p": _p_label(p), "n": len(A)}
    notes = {"floored": floored}

    if theta == 1.0:
        value = float(np.log(schatten_from_singular(sx, p)))
        scheme = build_quadrature(1.0) if quad is None else quad
        return make_report("alt_multi", value, value, budget=scheme.error_budget,
                           tensors=A, params=params, quad=scheme.summary(), notes=notes)

    lhs = float(np.log(schatten_from_singular(sx ** (1 / theta), p)))
    scheme = _default_scheme(quad, theta)
    # scale each factor by its top eigenvalue; the log-norm picks the scales back up
    shift = sum(math.log(w[-1]) for w, _ in spectra)
    scaled = [(w / w[-1], V) for w, V in spectra]

    def integrand(s):
        z = 1 + 1j * s
        P = None
        for w, V in scaled:
            F = phase_powers(w, V, z)
            P = F if P is None else P @ F
        return _log_schatten_stack(P, p) + shift

    rhs, used = _integrate(scheme, integrand, adaptive, max_nodes)
    return make_report("alt_multi", lhs, rhs, budget=scheme.error_budget, tensors=A,
                       params=params, quad=used.summary(), notes=notes)


def _exp_factors(Ms: Sequence[np.ndarray]):
    """Spectra of Hermitian matrices, shifted so the top eigenvalue is 0."""
    out, shift = [], 0.0
    for M in Ms:
        w, V = eigh_matrix(M)
        out.append((w - w[-1], V))
        shift += float(w[-1])
    return out, shift


def _gt_integrand(factors, shift: float, p: float):
    def integrand(s):
        z = 1 + 1j * s
        P = None
        for w, V in factors:
            vals = np.exp(np.multiply.outer(z, w))
            F = np.einsum("ab,sb,cb->sac", V, vals, V.conj(), optimize=True)
            P = F if P is None else P @ F
        return _log_schatten_stack(P, p) + shift
    return integrand


def _log_norm_exp_sum(total: np.ndarray, p: float, hermitian: bool) -> float:
    if hermitian:
        w = eigh_matrix((total + total.conj().T) / 2)[0]
        top = float(w[-1])
        return top + float(np.log(schatten_from_singular(np.exp(w - top), p)))
    s = np.linalg.svd(scipy.linalg.expm(total), compute_uv=False)
    return float(np.log(schatten_from_singular(s, p)))


def check_gt_multi(H: Sequence[DenseTensor], p=2, quad: QuadratureScheme | None = None, *,
                   adaptive: bool = True, max_nodes: int | None = None) -> InequalityReport:
    """Multivariate Golden-Thompson for Hermitian tensors.

    ``lhs = log ||exp(sum_k H_k)||_p`` and
    ``rhs = int log ||prod_k exp((1+is) H_k)||_p rho_0(s) ds``.
    """
    p = _schatten_order(p)
    _common_shape(H)
    Ms = [hermitian_matrix(Hk, f"H[{k}]") for k, Hk in enumerate(H)]
    lhs = _log_norm_exp_sum(sum(Ms), p, hermitian=True)
    scheme = _default_scheme(quad, 0.0)
    factors, shift = _exp_factors(Ms)
    rhs, used = _integrate(scheme, _gt_integrand(factors, shift, p), adaptive, max_nodes)
    return make_report("gt_multi", lhs, rhs, budget=scheme.error_budget, tensors=H,
                       params={"p": _p_label(p), "n": len(H)}, quad=used.summary())


def check_gt_multi_general(A: Sequence[DenseTensor], p=2, quad: QuadratureScheme | None = None,
                           *, adaptive: bool = True,
                           max_nodes: int | None = None) -> InequalityReport:
    """Multivariate Golden-Thompson for arbitrary square tensors.

    ``lhs = log ||exp(sum_k A_k)||_p`` and the integrand uses the Hermitian
    parts ``Re(A_k) = (A_k + A_k^H) / 2``.
    """
    p = _schatten_order(p)
    _common_shape(A)
    mats = [Ak.matrix for Ak in A]
    lhs = _log_norm_exp_sum(sum(mats), p, hermitian=False)
    scheme = _default_scheme(quad, 0.0)
    factors, shift = _exp_factors([(M + M.conj().T) / 2 for M in mats])
    rhs, used = _integrate(scheme, _gt_integrand(factors, shift, p), adaptive, max_nodes)
    return make_report("gt_multi_general", lhs, rhs, budget=scheme.error_budget, tensors=A,
                       params={"p": _p_label(p), "n": len(A)}, quad=used.summary())


# logarithmic trace inequality ---------------------------------------------

LOG_TRACE_VARIANTS = ("display", "proof")


def _log_trace_integrand(spectra, M1: np.ndarray, q: float, variant: str):
    """``s -> Tr A1 log(Y A1^q Y^H)`` with ``Y = A_n^{q(1+is)/2} ... A_2^{e_2}``.

    ``e_2 = q/2`` for the ``display`` variant and ``q(1+is)/2`` for ``proof``.
    """
    w1, V1 = spectra[0]
    A1q = (V1 * w1 ** q) @ V1.conj().T
    rest = spectra[1:]

    def integrand(s):
        Y = None
        for k in range(len(rest) - 1, -1, -1):
            w, V = rest[k]
            if k == 0 and variant == "display":
                z = np.full(len(s), q / 2, dtype=complex)
            else:
                z = q * (1 + 1j * s) / 2
            F = phase_powers(w, V, z)
            Y = F if Y is None else Y @ F
        Z = Y @ A1q @ np.conj(np.swapaxes(Y, -1, -2))
        norm = np.linalg.norm(Z, axis=(-2, -1))
        resid = np.linalg.norm(Z - np.conj(np.swapaxes(Z, -1, -2)), axis=(-2, -1))
        if np.any(resid > 1e-10 * norm):
            raise NumericalError("log argument is not Hermitian to working precision")
        mu, U = np.linalg.eigh((Z + np.conj(np.swapaxes(Z, -1, -2))) / 2)
        if np.any(mu[:, 0] <= 0):
            raise NumericalError("log argument lost positive definiteness")
        diag = np.einsum("sai,ab,sbi->si", U.conj(), M1, U, optimize=True)
        vals = np.sum(np.log(mu) * diag, axis=-1)
        if np.any(np.abs(vals.imag) > 1e-8 * (1 + np.abs(vals.real))):
            raise NumericalError("Tr A1 log(...) has a non-negligible imaginary part")
        return vals.real

    return integrand


def check_log_trace_multi(A: Sequence[DenseTensor], q: float = 1.0,
                          quad: QuadratureScheme | None = None, *, variant: str = "display",
                          adaptive: bool = True, max_nodes: int | None = None) -> InequalityReport:
    """Multivariate logarithmic trace inequality.

    ``lhs = sum_k Tr A1 log A_k`` and
    ``rhs = (1/q) int Tr A1 log(A_n^{q(1+is)/2} ... A_2^{e_2} A1^q A_2^{e_2*} ... ) rho_0(s) ds``;
    the asserted relation is ``lhs >= rhs``.  ``variant`` picks the exponent on
    ``A_2`` (see :func:`_log_trace_integrand`); the margin of the other variant
    is stored under ``notes["other_variant_margin"]``.
    """
    if variant not in LOG_TRACE_VARIANTS:
        raise ValueError(f"variant must be one of {LOG_TRACE_VARIANTS}")
    q = float(q)
    if not 0 < q <= 1:
        raise DomainError(f"q must lie in (0, 1], got {q}")
    if len(A) < 2:
        raise DomainError("need at least two tensors")
    _common_shape(A)
    spectra = []
    for k, Ak in enumerate(A):
        w, V = psd_eigh(Ak, f"A[{k}]")
        if w[0] <= 0:
            raise DomainError(f"A[{k}] must be positive definite")
        spectra.append((w, V))
    M1 = hermitian_matrix(A[0], "A[0]")
    if abs(np.trace(M1).real - 1) > 1e-9:
        raise DomainError("A[0] must have unit trace")

    lhs = 0.0
    for w, V in spectra:
        diag = np.einsum("ai,ab,bi->i", V.conj(), M1, V).real
        lhs += float(np.sum(np.log(w) * diag))

    scheme = _default_scheme(quad, 0.0)
    results = {}
    for var in (variant,) + tuple(v for v in LOG_TRACE_VARIANTS if v != variant):
        integral, used = _integrate(scheme, _log_trace_integrand(spectra, M1, q, var),
                                    adaptive, max_nodes)
        results[var] = (integral / q, used)
    rhs, used = results[variant]
    other = next(v for v in LOG_TRACE_VARIANTS if v != variant)
    notes = {"variant": variant, "other_variant": other,
             "other_variant_margin": lhs - results[other][0]}
    return make_report("log_trace_multi", lhs, rhs, budget=scheme.error_budget / q,
                       relation=">=", tensors=A,
                       params={"q": q, "n": len(A), "variant": variant},
                       quad=used.summary(), notes=notes)


# Lie product formula -------------------------------------------------------

def lie_product_error(L: Sequence[DenseTensor], n: int) -> float:
    """``|| (prod_k exp(L_k / n))^n - exp(sum_k L_k) ||_F``."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    _common_shape(L)
    mats = [Lk.matrix for Lk in L]
    step = np.eye(mats[0].shape[0], dtype=complex)
    for M in mats:
        step = step @ scipy.linalg.expm(M / n)
    approx = np.linalg.matrix_power(step, n)
    exact = scipy.linalg.expm(sum(mats))
    return float(np.linalg.norm(approx - exact))


def lie_error_slope(L: Sequence[DenseTensor], ns: Sequence[int] | None = None,
                    floor: float = 1e-12):
    """Least-squares slope of ``log error`` against ``log n``.

    Points at or below ``floor`` are roundoff and left out of the fit; the
    slope is ``nan`` when fewer than two points remain.
    """
    ns = [2**k for k in range(9)] if ns is None else list(ns)
    errors = np.array([lie_product_error(L, n) for n in ns])
    keep = errors > floor
    if keep.sum() < 2:
        return float("nan"), errors
    slope = np.polyfit(np.log(np.asarray(ns, dtype=float)[keep]), np.log(errors[keep]), 1)[0]
    return float(slope), errors


def lie_report(L: Sequence[DenseTensor], ns: Sequence[int] | None = None) -> InequalityReport:
    """Report whether the Lie error decays at rate ``1/n`` (slope in ``[-1.3, -0.7]``)."""
    slope, errors = lie_error_slope(L, ns)
    deviation = abs(slope + 1.0) if math.isfinite(slope) else 0.0
    return residual_report("lie_rate", deviation, 0.3, tensors=L,
                           params={"n": len(L)},
                           notes={"slope": slope, "errors": [float(e) for e in errors]})
