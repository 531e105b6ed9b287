"""Random Hermitian tensor models, their MGFs, and Chernoff-type tail bounds.

Expectations are exact for finite-support models and Monte Carlo averages
otherwise.  Monte Carlo draws come from a counter-based generator (Philox)
keyed by ``(seed, tag)``, so identical seeds give bit-identical results and
blocks of trials can be drawn in any order.

Tail bounds work in the log domain: every model's expectations are scaled
by ``exp(-z c)`` with ``c`` the largest eigenvalue in its support, which
keeps ``E exp(tX)`` finite for ``t`` up to ``1e3``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp
from scipy.stats import beta

from .errors import ConvergenceError, DomainError, NumericalError, ShapeError
from .quadrature import DEFAULT_BUDGET, QuadratureScheme, build_quadrature
from .spectral import hermitian_matrix
from .tensor import DenseTensor, Shape, identity_tensor, tensor_from_json, tensor_to_json

__all__ = [
    "KINDS",
    "RandomTensorModel",
    "TailBoundReport",
    "sample_model",
    "sample_batch",
    "estimate_mgf",
    "tensor_cumulants",
    "laplace_tail_bound",
    "master_tail_bound",
    "tail_bound_sweep",
    "empirical_tail",
    "exact_tail",
    "support_spectrum_range",
    "dimension_constant",
    "model_to_json",
    "model_from_json",
]

KINDS = ("gaussian-hermitian", "bounded-spectrum", "rademacher-dilation", "finite-mixture")
MAX_JOINT_SUPPORT = 4096
DEFAULT_MC_SAMPLES = 2048
T_RANGE = (1e-3, 1e3)
GRID_PER_DECADE = 25
_BLOCK = 1024
_TIE_RTOL = 1e-12


def _generator(seed: int, *tags: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *tags])))


@dataclass(frozen=True)
class RandomTensorModel:
    """Law of a random Hermitian tensor.

    ``atoms``/``probs`` describe the finite-support kinds (a Rademacher
    dilation stores its single tensor ``A`` and draws ``+A`` or ``-A``).
    ``scale`` is the entry scale of the Gaussian kind and ``low``/``high``
    bound the eigenvalues of the bounded-spectrum kind, whose eigenvectors
    are Haar distributed.
    """

    shape: Shape
    kind: str
    atoms: tuple[DenseTensor, ...] = ()
    probs: tuple[float, ...] = ()
    scale: float = 1.0
    low: float = -1.0
    high: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown model kind {self.kind!r}")
        if not self.shape.is_square:
            raise ShapeError(f"model shape must be square, got {self.shape}")
        for a in self.atoms:
            if a.shape != self.shape:
                raise ShapeError(f"atom shape {a.shape} differs from model shape {self.shape}")
            hermitian_matrix(a, "atom")
        if self.kind == "rademacher-dilation" and len(self.atoms) != 1:
            raise DomainError("a Rademacher dilation takes exactly one tensor")
        if self.kind == "finite-mixture":
            if len(self.atoms) == 0 or len(self.atoms) != len(self.probs):
                raise DomainError("a mixture needs one probability per atom")
            p = np.asarray(self.probs, dtype=float)
            if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
                raise DomainError("mixture probabilities must be non-negative and sum to 1")
        if self.kind == "gaussian-hermitian" and not self.scale > 0:
            raise DomainError("scale must be positive")
        if self.kind == "bounded-spectrum" and not self.low <= self.high:
            raise DomainError("bounded spectrum needs low <= high")

    # constructors
    @classmethod
    def gaussian_hermitian(cls, shape: Shape, scale: float = 1.0) -> "RandomTensorModel":
        return cls(shape, "gaussian-hermitian", scale=float(scale))

    @classmethod
    def bounded_spectrum(cls, shape: Shape, low: float, high: float) -> "RandomTensorModel":
        return cls(shape, "bounded-spectrum", low=float(low), high=float(high))

    @classmethod
    def rademacher(cls, A: DenseTensor) -> "RandomTensorModel":
        return cls(A.shape, "rademacher-dilation", atoms=(A,))

    @classmethod
    def mixture(cls, atoms: Sequence[DenseTensor], probs: Sequence[float]) -> "RandomTensorModel":
        return cls(atoms[0].shape, "finite-mixture", atoms=tuple(atoms),
                   probs=tuple(float(p) for p in probs))

    @classmethod
    def deterministic(cls, A: DenseTensor) -> "RandomTensorModel":
        return cls.mixture([A], [1.0])

    @property
    def is_finite(self) -> bool:
        return self.kind in ("rademacher-dilation", "finite-mixture")

    @property
    def dim(self) -> int:
        return self.shape.n_rows

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Probabilities and symmetrised atom matrices of a finite-support law."""
        if self.kind == "rademacher-dilation":
            A = hermitian_matrix(self.atoms[0])
            return np.array([0.5, 0.5]), np.stack([A, -A])
        if self.kind == "finite-mixture":
            return (np.asarray(self.probs, dtype=float),
                    np.stack([hermitian_matrix(a) for a in self.atoms]))
        raise DomainError(f"{self.kind} has no finite support")


def _haar_unitaries(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    G = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))) / math.sqrt(2)
    Q, R = np.linalg.qr(G)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    return Q * (diag / np.abs(diag))[:, None, :]


def sample_batch(model: RandomTensorModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` samples as an ``(n, d, d)`` stack of Hermitian matrices."""
    d = model.dim
    if model.is_finite:
        probs, mats = model.support()
        idx = np.searchsorted(np.cumsum(probs), rng.random(n), side="right")
        return mats[np.minimum(idx, len(probs) - 1)]
    if model.kind == "gaussian-hermitian":
        G = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
        return model.scale * (G + np.conj(np.swapaxes(G, -1, -2))) / 2
    U = _haar_unitaries(rng, n, d)
    lam = rng.uniform(model.low, model.high, size=(n, d))
    X = np.einsum("nab,nb,ncb->nac", U, lam, U.conj())
    return (X + np.conj(np.swapaxes(X, -1, -2))) / 2


def sample_model(model: RandomTensorModel, seed: int, trial: int = 0) -> DenseTensor:
    """One sample keyed by ``(seed, trial)``; bit-identical on every call."""
    return DenseTensor.from_matrix(sample_batch(model, 1, _generator(seed, 0, trial))[0], model.shape)


def _atoms(model: RandomTensorModel, n_samples: int, seed: int):
    """Weights and matrices: the exact support, or ``n_samples`` equally weighted draws."""
    if model.is_finite:
        return model.support()
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    mats = sample_batch(model, n_samples, _generator(seed, 1))
    return np.full(n_samples, 1.0 / n_samples), mats


class _Spectra:
    """Eigendecompositions of a model's atoms with the log-domain shift ``c``."""

    def __init__(self, model: RandomTensorModel, n_samples: int, seed: int):
        self.probs, mats = _atoms(model, n_samples, seed)
        self.w, self.V = np.linalg.eigh(mats)
        self.c = float(np.max(self.w))
        self.spread = float(np.max(self.w) - np.min(self.w))
        self.exact = model.is_finite

    def atomwise(self, z: np.ndarray) -> np.ndarray:
        """``exp(z (X_a - c))`` for every atom ``a``; shape ``(K, len(z), d, d)``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        vals = np.exp(z[None, :, None] * (self.w - self.c)[:, None, :])
        return np.einsum("kab,ksb,kcb->ksac", self.V, vals, self.V.conj(), optimize=True)

    def scaled_mgf(self, z: np.ndarray) -> np.ndarray:
        """``exp(-z c) E exp(z X)`` for a vector of complex ``z``; shape ``(len(z), d, d)``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        vals = np.exp(z[:, None, None] * (self.w - self.c)[None])
        return np.einsum("kab,skb,kcb->sac", self.V * self.probs[:, None, None], vals,
                         self.V.conj(), optimize=True)

    def log_trace_mgf(self, t: float) -> float:
        """``log E Tr exp(t X)``."""
        return float(logsumexp(t * self.w, b=np.broadcast_to(self.probs[:, None], self.w.shape)))


def estimate_mgf(model: RandomTensorModel, t: float, n_samples: int = DEFAULT_MC_SAMPLES,
                 seed: int = 0) -> DenseTensor:
    """``E exp(tX)``: exact sum over the support, or a Monte Carlo mean."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    if t == 0.0:
        return identity_tensor(model.shape)
    sp = _Spectra(model, n_samples, seed)
    M = sp.scaled_mgf(np.array([t]))[0] * math.exp(t * sp.c)
    if not np.all(np.isfinite(M)):
        raise NumericalError(f"E exp(tX) overflows at t={t}")
    return DenseTensor.from_matrix((M + M.conj().T) / 2, model.shape)


def tensor_cumulants(model: RandomTensorModel, n_samples: int = DEFAULT_MC_SAMPLES,
                     seed: int = 0) -> tuple[DenseTensor, DenseTensor]:
    """First two cumulants ``E X`` and ``E X^2 - (E X)^2``."""
    probs, mats = _atoms(model, n_samples, seed)
    m1 = np.tensordot(probs, mats, axes=1)
    m2 = np.tensordot(probs, mats @ mats, axes=1)
    phi2 = m2 - m1 @ m1
    sym = lambda M: DenseTensor.from_matrix((M + M.conj().T) / 2, model.shape)
    return sym(m1), sym(phi2)


def dimension_constant(shape: Shape, mode: str = "paper") -> float:
    """Leading constant of the tail bounds.

    ``paper`` gives ``(2M - 1)^N`` for a cubical shape with ``M`` modes of
    size ``N`` on each side; ``matricized`` gives 1.
    """
    if mode == "matricized":
        return 1.0
    if mode != "paper":
        raise DomainError(f"unknown constant mode {mode!r}")
    if not shape.is_cubical:
        raise ShapeError(f"paper constant needs a cubical shape, got {shape}")
    M, N = len(shape.row_dims), shape.row_dims[0]
    return float((2 * M - 1) ** N)


@dataclass
class TailBoundReport:
    """Chernoff-type bound on ``P(lambda_max(sum X_k) >= zeta)``.

    ``bound`` is clipped to 1; ``raw_bound`` is the unclipped value and
    ``bound_matricized`` the same infimum with constant 1.
    """

    zeta: float
    t_star: float
    bound: float
    raw_bound: float
    bound_matricized: float
    c_dim: float
    method: str
    n_models: int
    constant_mode: str = "paper"
    coupling: str = "independent"
    empirical_tail: float | None = None
    n_trials: int = 0
    clopper_pearson_upper: float | None = None
    quad: dict | None = None
    exact_expectations: bool = True

    @property
    def sound(self) -> bool | None:
        """Whether the bound covers the empirical tail (``None`` if not computed)."""
        if self.empirical_tail is None:
            return None
        return self.bound + 1e-9 >= self.empirical_tail

    def to_dict(self) -> dict:
        return asdict(self)


# tail bound machinery -----------------------------------------------------

class _LogProfile:
    """Cached ``t -> log E-integral`` shared by every ``zeta`` of one instance.

    Values that underflowed come back as ``+inf`` so the search skips that
    ``t``; skipping can only raise the reported bound.
    """

    def __init__(self, fn):
        self._fn = fn
        self._cache: dict[float, float] = {}

    def __call__(self, t: float) -> float:
        t = float(t)
        if t not in self._cache:
            val = self._fn(t)
            if val == math.inf:
                raise NumericalError(f"expectation overflows at t={t}")
            self._cache[t] = val if math.isfinite(val) else math.inf
        return self._cache[t]


def _t_grid() -> np.ndarray:
    lo, hi = np.log10(T_RANGE[0]), np.log10(T_RANGE[1])
    return np.logspace(lo, hi, int(round((hi - lo) * GRID_PER_DECADE)) + 1)


def _minimize(profile: _LogProfile, zeta: float):
    """Minimise ``log E(t) - zeta t`` over ``t`` in ``T_RANGE``; returns ``(t, value)``."""
    grid = _t_grid()
    vals = np.array([profile(t) - zeta * t for t in grid])
    i = int(np.argmin(vals))
    best_t, best = float(grid[i]), float(vals[i])
    if 0 < i < len(grid) - 1:
        f = lambda u: profile(math.exp(u)) - zeta * math.exp(u)
        bracket = (math.log(grid[i - 1]), math.log(grid[i]), math.log(grid[i + 1]))
        try:
            res = minimize_scalar(f, bracket=bracket, method="golden", tol=1e-7)
            if res.fun < best and T_RANGE[0] <= math.exp(res.x) <= T_RANGE[1]:
                best_t, best = float(math.exp(res.x)), float(res.fun)
        except ValueError:
            pass
    return best_t, best


def _finish(profile, zeta, c_dim, mode, method, n_models, coupling, quad, exact) -> TailBoundReport:
    t_star, log_val = _minimize(profile, float(zeta))
    raw_matricized = math.exp(min(log_val, 700.0))
    raw = c_dim * raw_matricized
    return TailBoundReport(
        zeta=float(zeta), t_star=t_star, bound=min(1.0, raw), raw_bound=raw,
        bound_matricized=min(1.0, raw_matricized), c_dim=c_dim, method=method,
        n_models=n_models, constant_mode=mode, coupling=coupling, quad=quad,
        exact_expectations=exact,
    )


def _as_list(zeta):
    arr = np.atleast_1d(np.asarray(zeta, dtype=float))
    return [float(z) for z in arr], np.ndim(zeta) == 0


def laplace_tail_bound(model: RandomTensorModel, zeta, *, constant_mode: str = "paper",
                       n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0):
    """``C_dim * inf_t exp(-zeta t) E Tr exp(tY)`` for a single model.

    ``zeta`` may be a scalar or a sequence; a list of reports is returned
    for a sequence.
    """
    c_dim = dimension_constant(model.shape, constant_mode)
    sp = _Spectra(model, n_samples, seed)
    profile = _LogProfile(sp.log_trace_mgf)
    zetas, scalar = _as_list(zeta)
    out = [_finish(profile, z, c_dim, constant_mode, "laplace", 1, "independent", None, sp.exact)
           for z in zetas]
    return out[0] if scalar else out


# integrals below this are treated as underflowed and their t is skipped
_UNDERFLOW = 1e-280


def _master_log_integrand(factors: list, weights: np.ndarray, shift: float, t: float,
                          scheme: QuadratureScheme, max_nodes: int):
    """``log sum_o w_o int Tr[E1 G En G^H] rho_0(s) ds``, ``G = prod_{k=2}^{n-1} F_k((1+is) t / 2)``.

    ``factors[k](z)`` returns an ``(O, len(z), d, d)`` stack of scaled
    exponentials for the ``O`` coupled outcomes; ``shift`` undoes the
    scaling.  A result that underflows is returned as ``nan`` so the caller
    can skip this ``t``.
    """
    first, last, middle = factors[0], factors[-1], factors[1:-1]
    E1 = first(np.array([t]))[:, 0]
    En = last(np.array([t]))[:, 0]

    def values(nodes):
        z = (1 + 1j * nodes) * t / 2
        G = None
        for f in middle:
            F = f(z)
            G = F if G is None else G @ F
        T = np.einsum("o,oab,osbc,ocd,osad->s", weights, E1, G, En, G.conj(), optimize=True)
        if np.any(np.abs(T.imag) > 1e-8 * (1e-300 + np.abs(T.real))):
            raise NumericalError("master integrand has a non-negligible imaginary part")
        return T.real

    if not middle:
        current = float(np.einsum("o,oab,oba->", weights, E1, En).real)
        used = None
    else:
        current = scheme.integrate(values(scheme.nodes))
        while True:
            finer = scheme.refined()
            if finer.n_nodes > max_nodes:
                raise ConvergenceError(f"master integral did not settle within {max_nodes} nodes at t={t}")
            nxt = finer.integrate(values(finer.nodes))
            settled = abs(nxt - current) <= 0.1 * scheme.error_budget * abs(nxt)
            scheme, current = finer, nxt
            if settled:
                break
        used = scheme
    if not current > _UNDERFLOW:
        return math.nan, used
    return shift + math.log(current), used


def _joint_outcomes(models: Sequence[RandomTensorModel]):
    supports = [m.support() for m in models]
    size = math.prod(len(p) for p, _ in supports)
    if size > MAX_JOINT_SUPPORT:
        raise DomainError(f"joint support {size} exceeds {MAX_JOINT_SUPPORT}")
    for combo in itertools.product(*[range(len(p)) for p, _ in supports]):
        prob = math.prod(supports[k][0][i] for k, i in enumerate(combo))
        yield prob, [supports[k][1][i] for k, i in enumerate(combo)]


def _joint_index(models: Sequence[RandomTensorModel]):
    """Outcome probabilities and, per model, the atom index of every joint outcome."""
    supports = [m.support()[0] for m in models]
    size = math.prod(len(p) for p in supports)
    if size > MAX_JOINT_SUPPORT:
        raise DomainError(f"joint support {size} exceeds {MAX_JOINT_SUPPORT}")
    grids = np.meshgrid(*[np.arange(len(p)) for p in supports], indexing="ij")
    index = [g.ravel() for g in grids]
    probs = np.prod([p[i] for p, i in zip(supports, index)], axis=0)
    return probs, index


def master_tail_bound(models: Sequence[RandomTensorModel], zeta, quad: QuadratureScheme | None = None,
                      *, constant_mode: str = "paper", coupling: str = "independent",
                      n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0,
                      max_nodes: int = 1 << 14):
    """Tail bound for ``lambda_max(X_1 + ... + X_n)`` built on the multivariate GT integral.

    ``coupling="independent"`` takes each expectation factor by factor, in
    the order ``E e^{tX_1}, E e^{(1+is)tX_2/2}, ..., E e^{tX_n}, ...``.
    ``coupling="joint"`` instead averages the deterministic integrand over
    the joint outcomes (finite-support models only); this keeps the two
    half-power factors of each ``X_k`` on the same draw.
    A single model reduces to :func:`laplace_tail_bound`.
    """
    if len(models) == 0:
        raise DomainError("need at least one model")
    shape = models[0].shape
    for m in models[1:]:
        if m.shape != shape:
            raise ShapeError(f"model shapes differ: {shape} vs {m.shape}")
    if len(models) == 1:
        return laplace_tail_bound(models[0], zeta, constant_mode=constant_mode,
                                  n_samples=n_samples, seed=seed)
    if coupling not in ("independent", "joint"):
        raise DomainError(f"unknown coupling {coupling!r}")
    c_dim = dimension_constant(shape, constant_mode)
    scheme = quad if quad is not None else build_quadrature(0.0, DEFAULT_BUDGET)
    if scheme.theta != 0.0:
        raise DomainError("master bound integrates against rho_0")
    used: dict = {}

    if coupling == "independent":
        spectra = [_Spectra(m, n_samples, seed + 7919 * k) for k, m in enumerate(models)]
        factors = [lambda z, sp=sp: sp.scaled_mgf(z)[None] for sp in spectra]
        weights = np.ones(1)
    else:
        if not all(m.is_finite for m in models):
            raise DomainError("joint coupling needs finite-support models")
        spectra = [_Spectra(m, 0, seed) for m in models]
        probs, index = _joint_index(models)
        factors = [lambda z, sp=sp, idx=idx: sp.atomwise(z)[idx] for sp, idx in zip(spectra, index)]
        weights = probs
    exact = all(sp.exact for sp in spectra)
    c_total = sum(sp.c for sp in spectra)

    def log_integral(t):
        val, sch = _master_log_integrand(factors, weights, t * c_total, t, scheme, max_nodes)
        if sch is not None and sch.n_nodes > used.get("nodes", 0):
            used.update(sch.summary())
        return val

    profile = _LogProfile(log_integral)
    zetas, scalar = _as_list(zeta)
    out = []
    for z in zetas:
        rep = _finish(profile, z, c_dim, constant_mode, "master", len(models), coupling, None, exact)
        out.append(rep)
    summary = dict(used) if used else {"theta": 0.0, "S": 0.0, "nodes": 0, "panels": 0,
                                         "captured_mass": 1.0}
    for rep in out:
        rep.quad = summary
    return out[0] if scalar else out


# empirical tails -----------------------------------------------------------

def _joint_support_size(models) -> int | None:
    if not all(m.is_finite for m in models):
        return None
    return math.prod(len(m.support()[0]) for m in models)


def _tie_level(zeta: float) -> float:
    return zeta - _TIE_RTOL * (1 + abs(zeta))


def exact_tail(models: Sequence[RandomTensorModel], zeta) -> np.ndarray | float:
    """``P(lambda_max(sum X_k) >= zeta)`` by enumerating the joint support."""
    probs, top = _enumerate_lambda_max(models)
    zetas = np.atleast_1d(np.asarray(zeta, dtype=float))
    out = np.array([float(np.sum(probs[top >= _tie_level(z)])) for z in zetas])
    return float(out[0]) if np.ndim(zeta) == 0 else out


def _enumerate_lambda_max(models):
    probs, sums = [], []
    for p, xs in _joint_outcomes(models):
        probs.append(p)
        sums.append(np.sum(xs, axis=0))
    eig = np.linalg.eigvalsh(np.stack(sums))
    return np.asarray(probs), eig[:, -1]


def support_spectrum_range(models: Sequence[RandomTensorModel]) -> tuple[float, float]:
    """Smallest and largest eigenvalue of ``sum X_k`` over the joint support."""
    lo, hi = math.inf, -math.inf
    for _, xs in _joint_outcomes(models):
        w = np.linalg.eigvalsh(np.sum(xs, axis=0))
        lo, hi = min(lo, float(w[0])), max(hi, float(w[-1]))
    return lo, hi


def empirical_tail(models: Sequence[RandomTensorModel], zeta: float, n_trials: int = 10_000,
                   seed: int = 0) -> tuple[float, float]:
    """Fraction of trials with ``lambda_max(sum X_k) >= zeta`` and its 99% upper limit.

    Finite joint supports of at most 4096 outcomes are enumerated exactly
    (the upper limit then equals the probability).  Otherwise trials are
    drawn in blocks of 1024, each block keyed by ``(seed, block)``, and the
    upper limit is the one-sided Clopper-Pearson bound.
    """
    size = _joint_support_size(models)
    if size is not None and size <= MAX_JOINT_SUPPORT:
        p = exact_tail(models, float(zeta))
        return p, p
    n_trials = int(n_trials)
    if n_trials < 1:
        raise DomainError("n_trials must be >= 1")
    hits = 0
    level = _tie_level(float(zeta))
    for b, start in enumerate(range(0, n_trials, _BLOCK)):
        m = min(_BLOCK, n_trials - start)
        rng = _generator(seed, 2, b)
        total = sum(sample_batch(model, m, rng) for model in models)
        hits += int(np.sum(np.linalg.eigvalsh(total)[:, -1] >= level))
    frac = hits / n_trials
    upper = 1.0 if hits == n_trials else float(beta.ppf(0.99, hits + 1, n_trials - hits))
    return frac, upper


def tail_bound_sweep(models: Sequence[RandomTensorModel], zetas: Sequence[float], *,
                     quad: QuadratureScheme | None = None, constant_mode: str = "paper",
                     coupling: str = "independent", n_trials: int = 10_000, seed: int = 0):
    """Bounds for every ``zeta`` with the matching empirical tails filled in."""
    reports = master_tail_bound(models, list(zetas), quad, constant_mode=constant_mode,
                                coupling=coupling, seed=seed)
    size = _joint_support_size(models)
    for rep in reports:
        frac, upper = empirical_tail(models, rep.zeta, n_trials, seed)
        rep.empirical_tail = frac
        rep.clopper_pearson_upper = upper
        rep.n_trials = size if size is not None and size <= MAX_JOINT_SUPPORT else n_trials
    return reports


# model files ---------------------------------------------------------------

def model_to_json(model: RandomTensorModel) -> dict:
    out = {"kind": model.kind, "shape": str(model.shape)}
    if model.kind == "rademacher-dilation":
        out["atoms"] = [tensor_to_json(model.atoms[0])]
    elif model.kind == "finite-mixture":
        out["atoms"] = [tensor_to_json(a) for a in model.atoms]
        out["probs"] = list(model.probs)
    elif model.kind == "gaussian-hermitian":
        out["scale"] = model.scale
    else:
        out["low"], out["high"] = model.low, model.high
    return out


def model_from_json(obj: dict) -> RandomTensorModel:
    try:
        kind = obj["kind"]
        shape = Shape.parse(obj["shape"]) if isinstance(obj["shape"], str) else Shape(
            tuple(obj["shape"]["row_dims"]), tuple(obj["shape"]["col_dims"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed model specification: {exc}") from exc
    atoms = tuple(tensor_from_json(a) for a in obj.get("atoms", []))
    if kind == "rademacher-dilation":
        return RandomTensorModel(shape, kind, atoms=atoms)
    if kind == "finite-mixture":
        return RandomTensorModel(shape, kind, atoms=atoms, probs=tuple(obj.get("probs", [])))
    if kind == "gaussian-hermitian":
        return RandomTensorModel(shape, kind, scale=float(obj.get("scale", 1.0)))
    return RandomTensorModel(shape, kind, low=float(obj.get("low", -1.0)),
                             high=float(obj.get("high", 1.0)))
