"""Configuration-driven suite runner and report emitters."""
from __future__ import annotations

import csv
import hashlib
import json
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .entropy import gibbs_maximizer, variational_gap
from .errors import ConfigError, TraceGymError
from .generators import (
    commuting_hermitian,
    commuting_pd,
    random_complex,
    random_density,
    random_hermitian,
    random_pd,
)
from .inequalities import (
    check_alt_multi,
    check_alt_two,
    check_gt_multi,
    check_gt_multi_general,
    check_gt_two,
    check_log_trace_multi,
    lie_report,
)
from .pinching import pinch, pinch_via_integral
from .quadrature import build_quadrature
from .random_tensors import (
    RandomTensorModel,
    dimension_constant,
    master_tail_bound,
    support_spectrum_range,
    tail_bound_sweep,
)
from .reports import InequalityReport, make_report, residual_report
from .spectral import eig_hermitian, expm, logm
from .tensor import (
    Shape,
    conj_transpose,
    einstein_product,
    identity_tensor,
    kronecker_product,
    kronecker_sum,
    trace,
)

SCHEMA = "tracegym.suite/1"
SUITES = ("algebra", "pinching", "two-tensor", "multivariate", "log-trace", "lie", "entropy", "tails")
FAMILIES = ("random", "commuting")
DEFAULT_INSTANCES = {
    "algebra": 200,
    "pinching": 200,
    "two-tensor": 500,
    "multivariate": 300,
    "log-trace": 100,
    "lie": 20,
    "entropy": 500,
    "tails": 20,
}
ALT_R = (0.25, 0.5, 1.0, 2.0, 4.0)
ALT_Q = (0.5, 1.0, 2.0)
IDENTITY_RTOL = 1e-9
PINCH_INTEGRAL_TOL = 1e-6
ENTROPY_TOL = 1e-8
MAXIMIZER_TOL = 1e-7
TAIL_SLACK = 1e-9
TAIL_GRID = 11


@dataclass
class SuiteConfig:
    suite: str
    shape: Shape = field(default_factory=lambda: Shape.parse("2;2"))
    n_instances: int | None = None
    seed: int = 0
    theta_list: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    p_list: tuple[float, ...] = (1.0, 2.0, 3.0)
    q_list: tuple[float, ...] = (1.0, 0.5, 0.25, 0.125)
    quad_budget: float = 1e-6
    output_path: str | None = None
    family: str = "random"
    constant_mode: str = "paper"
    threads: int | None = None

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        if self.n_instances is not None and self.n_instances < 1:
            raise ConfigError("n_instances must be >= 1")
        if not self.shape.is_square:
            raise ConfigError(f"shape must be square, got {self.shape}")
        if not self.quad_budget > 0:
            raise ConfigError("quad_budget must be positive")
        if any(not 0 < t <= 1 for t in self.theta_list):
            raise ConfigError("theta values must lie in (0, 1]")
        if any(not p >= 1 for p in self.p_list):
            raise ConfigError("p values must be >= 1")
        if any(not 0 < q <= 1 for q in self.q_list):
            raise ConfigError("q values must lie in (0, 1]")
        if self.suite in ("tails", "all"):
            try:
                dimension_constant(self.shape, self.constant_mode)
            except TraceGymError as exc:
                raise ConfigError(str(exc)) from exc
        return self

    def instances_for(self, suite: str) -> int:
        return self.n_instances if self.n_instances is not None else DEFAULT_INSTANCES[suite]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["shape"] = str(self.shape)
        d.pop("output_path")
        d.pop("threads")
        for key in ("theta_list", "p_list", "q_list"):
            d[key] = list(d[key])
        return d


@dataclass
class SuiteResult:
    config: dict
    reports: list[InequalityReport]
    errors: list[dict]
    wall_time: float
    version: str

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "equality": 0}
        for r in self.reports:
            counts[r.verdict] += 1
        counts["total"] = len(self.reports)
        counts["errors"] = len(self.errors)
        return counts

    @property
    def exit_code(self) -> int:
        if self.summary["fail"]:
            return 1
        return 3 if self.errors else 0

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": self.version,
            "config": self.config,
            "summary": self.summary,
            "reports": [r.to_dict() for r in self.reports],
            "errors": self.errors,
            "wall_time": self.wall_time,
        }


# per-instance checks ------------------------------------------------------

def _rel(x: float, scale: float) -> float:
    return float(x) / max(float(scale), 1e-300)


def _algebra(rng, cfg: SuiteConfig, i: int) -> list[InequalityReport]:
    s = cfg.shape
    A, B = random_complex(rng, s), random_complex(rng, s)
    H1, H2 = random_hermitian(rng, s), random_hermitian(rng, s)
    P1, P2 = random_pd(rng, s), random_pd(rng, s)
    na, nb = np.linalg.norm(A.matrix), np.linalg.norm(B.matrix)
    out = []
    hom = np.linalg.norm(einstein_product(A, B).matrix - A.matrix @ B.matrix)
    out.append(residual_report("matricize_homomorphism", _rel(hom, na * nb), IDENTITY_RTOL, tensors=[A, B]))
    adj = np.linalg.norm(conj_transpose(A).matrix - A.matrix.conj().T)
    out.append(residual_report("adjoint", _rel(adj, na), IDENTITY_RTOL, tensors=[A]))
    cyc = abs(trace(A @ B) - trace(B @ A))
    out.append(residual_report("trace_cyclic", _rel(cyc, na * nb), IDENTITY_RTOL, tensors=[A, B]))
    tk = trace(kronecker_product(A, B))
    tt = trace(A) * trace(B)
    out.append(residual_report("kron_trace", _rel(abs(tk - tt), max(abs(tt), na * nb)), IDENTITY_RTOL,
                               tensors=[A, B]))
    lhs = kronecker_product(expm(H1), expm(H2)).matrix
    rhs = expm(kronecker_sum(H1, H2)).matrix
    out.append(residual_report("kron_exp", _rel(np.linalg.norm(lhs - rhs), np.linalg.norm(lhs)),
                               IDENTITY_RTOL, tensors=[H1, H2]))
    lhs = logm(kronecker_product(P1, P2)).matrix
    rhs = (kronecker_product(logm(P1), identity_tensor(s)) + kronecker_product(identity_tensor(s), logm(P2))).matrix
    out.append(residual_report("kron_log", _rel(np.linalg.norm(lhs - rhs), 1 + np.linalg.norm(rhs)),
                               IDENTITY_RTOL, tensors=[P1, P2]))
    return out


def _pinching(rng, cfg: SuiteConfig, i: int) -> list[InequalityReport]:
    s = cfg.shape
    H = random_hermitian(rng, s)
    X = random_hermitian(rng, s)
    Xp = random_pd(rng, s)
    D = eig_hermitian(H)
    P = pinch(D, X)
    Hm, Pm, Xm = H.matrix, P.matrix, X.matrix
    scale = np.linalg.norm(Hm) * np.linalg.norm(Xm)
    out = [
        residual_report("pinch_commutes", _rel(np.linalg.norm(Pm @ Hm - Hm @ Pm), scale),
                        IDENTITY_RTOL, tensors=[H, X]),
        residual_report("pinch_trace_identity", _rel(abs(np.trace(Pm @ Hm) - np.trace(Xm @ Hm)), scale),
                        IDENTITY_RTOL, tensors=[H, X]),
        residual_report("pinch_idempotent",
                        _rel(np.linalg.norm(pinch(D, P).matrix - Pm), np.linalg.norm(Pm)),
                        IDENTITY_RTOL, tensors=[H, X]),
        residual_report("pinch_trace_preserved",
                        _rel(abs(np.trace(Pm) - np.trace(Xm)), np.linalg.norm(Xm)),
                        IDENTITY_RTOL, tensors=[H, X]),
    ]
    Pp = pinch(D, Xp).matrix
    gap = Pp - Xp.matrix / len(D)
    lam = float(np.linalg.eigvalsh((gap + gap.conj().T) / 2)[0])
    tol = 1e-9 * (1 + np.linalg.norm(Pp) + np.linalg.norm(Xp.matrix) / len(D))
    out.append(make_report("pinching_inequality", lam, 0.0, relation=">=", tolerance=tol,
                           tensors=[H, Xp], params={"n": len(D)}))
    Y, info = pinch_via_integral(H, X, error_budget=cfg.quad_budget, return_info=True)
    out.append(residual_report("pinch_integral", float(np.linalg.norm(Y.matrix - Pm)), PINCH_INTEGRAL_TOL,
                               tensors=[H, X], notes={"nodes": info["nodes"], "delta": info["delta"]}))
    return out


def _two_tensor(rng, cfg: SuiteConfig, i: int) -> list[InequalityReport]:
    s = cfg.shape
    if cfg.family == "commuting":
        H1, H2 = commuting_hermitian(rng, s, 2)
        A1, A2 = commuting_pd(rng, s, 2)
    else:
        H1, H2 = random_hermitian(rng, s), random_hermitian(rng, s)
        A1, A2 = random_pd(rng, s), random_pd(rng, s)
    r = ALT_R[i % len(ALT_R)]
    q = ALT_Q[(i // len(ALT_R)) % len(ALT_Q)]
    return [check_gt_two(H1, H2), check_alt_two(A1, A2, r, q)]


class _Schemes:
    """Quadrature rules built up front, one per theta, shared by every instance."""

    def __init__(self, budget: float, thetas):
        self._rules = {float(t): build_quadrature(float(t), budget) for t in set(thetas) | {0.0}}

    def __call__(self, theta: float):
        return self._rules[float(theta)]


def _multivariate(rng, cfg: SuiteConfig, i: int, schemes: _Schemes) -> list[InequalityReport]:
    s = cfg.shape
    n = 2 + i % 3
    theta = cfg.theta_list[i % len(cfg.theta_list)]
    p = cfg.p_list[(i // len(cfg.theta_list)) % len(cfg.p_list)]
    if cfg.family == "commuting":
        A = commuting_pd(rng, s, n)
        H = commuting_hermitian(rng, s, n, scale=0.7)
        G = commuting_hermitian(rng, s, n, scale=0.7)
    else:
        A = [random_pd(rng, s) for _ in range(n)]
        H = [random_hermitian(rng, s, 0.7) for _ in range(n)]
        G = [random_complex(rng, s) * 0.7 for _ in range(n)]
    q0 = schemes(0.0)
    return [
        check_alt_multi(A, theta, p, schemes(theta)),
        check_gt_multi(H, p, q0),
        check_gt_multi_general(G, p, q0),
    ]


def _log_trace(rng, cfg: SuiteConfig, i: int, schemes: _Schemes) -> list[InequalityReport]:
    s = cfg.shape
    A = commuting_pd(rng, s, 3) if cfg.family == "commuting" else [random_pd(rng, s) for _ in range(3)]
    A[0] = A[0] / np.trace(A[0].matrix).real
    return [check_log_trace_multi(A, q, schemes(0.0)) for q in cfg.q_list]


def _lie(rng, cfg: SuiteConfig, i: int) -> list[InequalityReport]:
    s = cfg.shape
    if cfg.family == "commuting":
        L = commuting_hermitian(rng, s, 2)
    else:
        L = [random_complex(rng, s), random_complex(rng, s)]
    return [lie_report(L)]


def _entropy(rng, cfg: SuiteConfig, i: int) -> list[InequalityReport]:
    s = cfg.shape
    A, B, X = random_density(rng, s), random_pd(rng, s), random_pd(rng, s)
    g = variational_gap(A, B, X)
    out = [make_report(f"entropy_{name}", val, 0.0, relation=">=", tolerance=ENTROPY_TOL,
                       tensors=[A, B, X])
           for name, val in (("g1", g.g1), ("g2", g.g2), ("g3", g.g3))]
    g_star = variational_gap(A, B, gibbs_maximizer(A, B))
    out.append(residual_report("entropy_maximizer", abs(g_star.g1), MAXIMIZER_TOL, tensors=[A, B]))
    return out


def _tails(rng, cfg: SuiteConfig, i: int, schemes: _Schemes) -> list[InequalityReport]:
    s = cfg.shape
    n = 2 + i % 2
    if cfg.family == "commuting":
        atoms = commuting_hermitian(rng, s, n)
    else:
        atoms = [random_hermitian(rng, s) for _ in range(n)]
    models = [RandomTensorModel.rademacher(a) for a in atoms]
    lo, hi = support_spectrum_range(models)
    zetas = np.linspace(lo, hi, TAIL_GRID)
    reps = tail_bound_sweep(models, zetas, quad=schemes(0.0), constant_mode=cfg.constant_mode)
    joint = None
    if n >= 3:
        joint = master_tail_bound(models, list(zetas), schemes(0.0), coupling="joint",
                                  constant_mode=cfg.constant_mode)
    out = []
    for k, rep in enumerate(reps):
        notes = {"t_star": rep.t_star, "raw_bound": rep.raw_bound,
                 "bound_matricized": rep.bound_matricized, "c_dim": rep.c_dim,
                 "n_models": n, "coupling": rep.coupling}
        if joint is not None:
            notes["joint_bound"] = joint[k].bound
        out.append(make_report("master_tail", rep.empirical_tail, rep.bound, tolerance=TAIL_SLACK,
                               tensors=atoms, params={"zeta": rep.zeta, "n": n},
                               quad=rep.quad, notes=notes))
    return out


# runner --------------------------------------------------------------------

def _instance_rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), zlib.crc32(suite.encode()), i]))


def _threads(cfg: SuiteConfig) -> int:
    if cfg.threads is not None:
        return max(1, int(cfg.threads))
    env = os.environ.get("TRACEGYM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"TRACEGYM_THREADS must be an integer, got {env!r}") from exc
    return 1


def _suite_runner(suite: str, cfg: SuiteConfig) -> Callable:
    thetas = cfg.theta_list if suite == "multivariate" else ()
    schemes = _Schemes(cfg.quad_budget, thetas) if suite in ("multivariate", "log-trace", "tails") else None
    table = {
        "algebra": _algebra,
        "pinching": _pinching,
        "two-tensor": _two_tensor,
        "lie": _lie,
        "entropy": _entropy,
        "multivariate": lambda rng, c, i: _multivariate(rng, c, i, schemes),
        "log-trace": lambda rng, c, i: _log_trace(rng, c, i, schemes),
        "tails": lambda rng, c, i: _tails(rng, c, i, schemes),
    }
    return table[suite]


def _run_one(suite: str, cfg: SuiteConfig):
    fn = _suite_runner(suite, cfg)

    def task(i: int):
        try:
            return fn(_instance_rng(cfg.seed, suite, i), cfg, i), None
        except (TraceGymError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            return [], {"suite": suite, "instance": i, "type": type(exc).__name__, "message": str(exc)}

    n = cfg.instances_for(suite)
    workers = _threads(cfg)
    if workers == 1:
        results = [task(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, range(n)))
    reports, errors = [], []
    for i, (reps, err) in enumerate(results):
        for r in reps:
            r.notes = {**r.notes, "suite": suite, "instance": i}
        reports.extend(reps)
        if err is not None:
            errors.append(err)
    return reports, errors


def run_suite(config: SuiteConfig) -> SuiteResult:
    """Run one suite (or all of them) and write outputs if ``output_path`` is set."""
    cfg = config.validate()
    start = time.perf_counter()
    suites = SUITES if cfg.suite == "all" else (cfg.suite,)
    reports, errors = [], []
    for suite in suites:
        r, e = _run_one(suite, cfg)
        reports.extend(r)
        errors.extend(e)
    result = SuiteResult(cfg.to_dict(), reports, errors, time.perf_counter() - start, __version__)
    if cfg.output_path:
        out = Path(cfg.output_path)
        emit_report(result, "json", out)
        emit_report(result, "csv", out.with_suffix(".csv"))
    return result


def result_json(result: SuiteResult) -> str:
    return json.dumps(result.to_dict(), sort_keys=True, indent=2)


def canonical_digest(result: SuiteResult) -> str:
    """Hash of the JSON result with ``wall_time`` removed."""
    d = result.to_dict()
    d.pop("wall_time")
    return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()


CSV_COLUMNS = ("name", "theta", "p", "q", "lhs", "rhs", "margin", "verdict")


def emit_report(result: SuiteResult, fmt: str, path) -> Path:
    """Write ``result`` as versioned JSON or as a margins table in CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(result_json(result) + "\n")
    elif fmt == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in result.reports:
                w.writerow([r.name, r.params.get("theta", ""), r.params.get("p", ""),
                            r.params.get("q", ""), repr(r.lhs), repr(r.rhs), repr(r.margin), r.verdict])
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    return path


def load_result(path) -> dict:
    """Parse a JSON result; reports come back as :class:`InequalityReport`."""
    d = json.loads(Path(path).read_text())
    if d.get("schema") != SCHEMA:
        raise ConfigError(f"unsupported schema {d.get('schema')!r}")
    d["reports"] = [InequalityReport.from_dict(r) for r in d["reports"]]
    return d


__all__ = [
    "SuiteConfig",
    "SuiteResult",
    "run_suite",
    "emit_report",
    "load_result",
    "canonical_digest",
    "SUITES",
    "DEFAULT_INSTANCES",
]
