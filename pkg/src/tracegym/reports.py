"""Inequality reports: the one record every checker returns."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .tensor import DenseTensor

PASS = "pass"
FAIL = "fail"
EQUALITY = "equality"

REL_TOL = 1e-7


def classify(margin: float, tolerance: float) -> str:
    """``equality`` when ``|margin| <= tol``; otherwise ``pass`` iff ``margin >= -tol``."""
    if abs(margin) <= tolerance:
        return EQUALITY
    return PASS if margin >= -tolerance else FAIL


def instance_digest(tensors: Iterable[DenseTensor] = (), **extra) -> str:
    h = hashlib.sha256()
    for t in tensors:
        h.update(str(t.shape).encode())
        h.update(np.ascontiguousarray(t.matrix).tobytes())
    if extra:
        h.update(json.dumps(extra, sort_keys=True, default=str).encode())
    return h.hexdigest()[:16]


@dataclass
class InequalityReport:
    """Outcome of one numerical check.

    ``margin`` is the slack in the asserted direction: ``rhs - lhs`` when
    ``relation`` is ``"<="`` and ``lhs - rhs`` when it is ``">="``.  A
    positive margin therefore always means the inequality holds.
    """

    name: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    verdict: str
    relation: str = "<="
    instance_digest: str = ""
    params: dict = field(default_factory=dict)
    quad: dict | None = None
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        return cls(**d)


def make_report(name: str, lhs: float, rhs: float, *, budget: float = 0.0,
                tolerance: float | None = None, relation: str = "<=",
                tensors: Iterable[DenseTensor] = (), params: dict | None = None,
                quad: dict | None = None, notes: dict | None = None) -> InequalityReport:
    lhs, rhs = float(lhs), float(rhs)
    if relation not in ("<=", ">="):
        raise ValueError(f"relation must be '<=' or '>=', got {relation!r}")
    if tolerance is None:
        tolerance = REL_TOL * (1 + abs(lhs) + abs(rhs)) + budget
    margin = rhs - lhs if relation == "<=" else lhs - rhs
    params = dict(params or {})
    return InequalityReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        tolerance=float(tolerance),
        verdict=classify(margin, tolerance),
        relation=relation,
        instance_digest=instance_digest(tensors, name=name, **params),
        params=params,
        quad=quad,
        notes=dict(notes or {}),
    )


def residual_report(name: str, residual: float, bound: float, **kwargs) -> InequalityReport:
    """Report for an identity check: passes when ``residual <= bound``."""
    return make_report(name, residual, bound, tolerance=0.0, **kwargs)
