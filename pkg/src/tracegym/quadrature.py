"""Interpolation densities on the real line and their truncated quadrature.

``rho_theta`` is the family weighting imaginary-axis perturbations in the
multivariate trace inequalities::

    rho_theta(s) = sin(pi theta) / (2 theta (cosh(pi s) + cos(pi theta)))

with ``rho_0(s) = (pi/2) / (cosh(pi s) + 1)`` and ``rho_1`` a unit point
mass at 0.  Both tails decay like ``exp(-pi |s|)`` and have closed-form
masses, so the truncation half-width is chosen analytically and the
remaining integral over ``[-S, S]`` is done with composite Gauss-Legendre
panels that are doubled until the density mass settles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError

__all__ = [
    "rho_theta_density",
    "rho_tail_mass",
    "QuadratureScheme",
    "build_quadrature",
    "gauss_legendre_panels",
]

GL_ORDER = 16
DEFAULT_BUDGET = 1e-6
DEFAULT_MAX_NODES = 4097
# floor on the tail target, keeps the truncated mass comfortably below 1 - 1e-8
TAIL_FLOOR = 1e-10
# below this theta the theta = 0 formulas agree to O(theta^2) and avoid subnormal ratios
SMALL_THETA = 1e-8


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    return theta


def rho_theta_density(theta: float, s):
    """Density of the interpolation measure at ``s`` (vectorised in ``s``).

    For ``theta = 1`` the measure is a point mass at 0; the returned values
    are its distributional limit (0 off the origin, ``inf`` at 0).
    """
    theta = _check_theta(theta)
    s = np.asarray(s, dtype=float)
    if theta == 1.0:
        return np.where(s == 0, np.inf, 0.0)
    # rewritten with e = exp(-pi |s|) so large |s| never overflows cosh
    e = np.exp(-math.pi * np.abs(s))
    if theta < SMALL_THETA:
        return (math.pi / 2) * 2 * e / (1 + e) ** 2
    c = math.cos(math.pi * theta)
    pref = math.sin(math.pi * theta) / (2 * theta)
    return pref * 2 * e / (1 + 2 * c * e + e * e)


def rho_tail_mass(theta: float, S: float) -> float:
    """Mass of ``rho_theta`` outside ``[-S, S]`` (exact)."""
    theta = _check_theta(theta)
    if theta == 1.0:
        return 0.0
    e = math.exp(-math.pi * S)
    one_minus_u = 2 * e / (1 + e)  # 1 - tanh(pi S / 2), without cancellation
    if theta < SMALL_THETA:
        return one_minus_u
    tau = math.tan(math.pi * theta / 2)
    u = 1 - one_minus_u
    return (2 / (math.pi * theta)) * math.atan(tau * one_minus_u / (1 + u * tau * tau))


def gauss_legendre_panels(half_width: float, panels: int, order: int = GL_ORDER):
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on ``[-S, S]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    h = 2 * half_width / panels
    left = -half_width + h * np.arange(panels)
    nodes = (left[:, None] + (x[None, :] + 1) * h / 2).ravel()
    weights = np.tile(w * h / 2, panels)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureScheme:
    """Truncated composite Gauss-Legendre rule for integrals against ``rho_theta``.

    ``weights`` are plain Gauss-Legendre weights; ``density_weights`` fold in
    the density so that ``sum(density_weights * f(nodes))`` approximates
    ``int f(s) rho_theta(s) ds``.  ``theta == 1`` is an exact point mass and
    carries no nodes.
    """

    theta: float
    half_width: float
    panels: int
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    captured_mass: float
    error_budget: float
    max_nodes: int

    @property
    def is_point_mass(self) -> bool:
        return self.theta == 1.0

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def density_weights(self) -> np.ndarray:
        return self.weights * rho_theta_density(self.theta, self.nodes)

    def with_panels(self, panels: int) -> "QuadratureScheme":
        nodes, weights = gauss_legendre_panels(self.half_width, panels, self.order)
        mass = float(np.sum(weights * rho_theta_density(self.theta, nodes)))
        return QuadratureScheme(self.theta, self.half_width, panels, self.order, nodes, weights,
                                mass, self.error_budget, self.max_nodes)

    def refined(self) -> "QuadratureScheme":
        """The same rule with the panel count doubled."""
        if self.is_point_mass:
            return self
        return self.with_panels(2 * self.panels)

    def integrate(self, values) -> complex | float:
        """Apply the rule to integrand samples taken at ``nodes`` (last axis)."""
        values = np.asarray(values)
        if self.is_point_mass:
            raise ValueError("a point-mass scheme has no nodes; evaluate the integrand at 0")
        return np.sum(values * self.density_weights, axis=-1)

    def summary(self) -> dict:
        return {
            "theta": self.theta,
            "S": self.half_width,
            "nodes": self.n_nodes,
            "panels": self.panels,
            "captured_mass": self.captured_mass,
        }


def truncation_half_width(theta: float, target: float) -> float:
    if rho_tail_mass(theta, 0.0) <= target:
        return 0.0
    hi = 1.0
    while rho_tail_mass(theta, hi) > target:
        hi *= 2
    return brentq(lambda S: rho_tail_mass(theta, S) - target, 0.0, hi, xtol=1e-12)


def build_quadrature(theta: float, error_budget: float = DEFAULT_BUDGET,
                     max_nodes: int = DEFAULT_MAX_NODES, order: int = GL_ORDER) -> QuadratureScheme:
    """Build a truncated rule for ``rho_theta``.

    The half-width ``S`` puts less than ``min(0.1 * budget, 1e-10)`` of the
    mass outside ``[-S, S]``; panels are doubled until two successive mass
    estimates differ by less than ``0.1 * budget``.
    """
    theta = _check_theta(theta)
    if not error_budget > 0:
        raise DomainError("error_budget must be positive")
    if theta == 1.0:
        empty = np.zeros(0)
        return QuadratureScheme(1.0, 0.0, 0, order, empty, empty, 1.0, error_budget, max_nodes)
    S = truncation_half_width(theta, min(0.1 * error_budget, TAIL_FLOOR))
    panels = 4
    scheme = QuadratureScheme(theta, S, 0, order, np.zeros(0), np.zeros(0), 0.0, error_budget, max_nodes)
    scheme = scheme.with_panels(panels)
    while True:
        finer = scheme.refined()
        if finer.n_nodes > max_nodes:
            raise ConvergenceError(f"density mass did not settle within {max_nodes} nodes")
        if abs(finer.captured_mass - scheme.captured_mass) < 0.1 * error_budget:
            return finer
        scheme = finer
