"""
Quadrature - Gauss rules for the beta measure, the half line and the product-formula box

This module provides immutable node/weight sets for the three integral families
the identities need:

- jacobi_beta: the normalized beta measure t^{a-1}(1-t)^{b-1} dt / B(a, b) on (0, 1)
- semi_infinite: the weight e^{-decay s} s^{exponent} on (0, ∞)
- box: [-π/2, π/2]^dim with an optional cos^p θ weight carried by the first axis

Rules are evaluated chunk by chunk; chunk sums are reduced in chunk order so a
result does not depend on how many workers evaluated it.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.special import roots_genlaguerre, roots_jacobi, roots_legendre

from core_types import csum, csum_array
from errors import BudgetExceededError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 65536
DEFAULT_MAX_BOX_NODES = 2_000_000


class RuleKind(Enum):
    """Integration domains and weights"""

    LEGENDRE_01 = "legendre_01"  # plain dt on (0, 1)
    JACOBI_BETA = "jacobi_beta"  # normalized beta measure on (0, 1)
    SEMI_INFINITE = "semi_infinite"  # e^{-decay s} s^exponent on (0, ∞)
    COSINE_POWER = "cosine_power"  # cos^p θ on (-π/2, π/2)
    BOX = "box"  # tensor rule on [-π/2, π/2]^dim


@dataclass(frozen=True)
class QuadRule:
    """
    Immutable quadrature rule.

    nodes has shape (m,) for one-dimensional rules and (m, dim) for the box;
    weights has shape (m,).

    Usage:
        rule = beta_rule(2.0, 1.5, 32)
        value = rule.integrate(lambda t: np.exp(t))
    """

    kind: RuleKind
    nodes: np.ndarray
    weights: np.ndarray
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape[0] != weights.shape[0]:
            raise DomainError("QuadRule", "nodes and weights differ in length", f"{nodes.shape[0]} != {weights.shape[0]}")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "params", dict(self.params))

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dim(self) -> int:
        return 1 if self.nodes.ndim == 1 else int(self.nodes.shape[1])

    def total_weight(self) -> float:
        return math.fsum(self.weights.tolist())

    def param(self, name: str) -> float:
        return self.params[name]

    def integrate(
        self, integrand: Callable[[np.ndarray], np.ndarray], jobs: int = 1, chunk: int = DEFAULT_CHUNK
    ) -> complex:
        """
        Σ w_i f(node_i).

        Args:
            integrand: Vectorized function of a block of nodes returning one value per node
            jobs: Worker threads used for the chunks
            chunk: Nodes per chunk

        Returns:
            The weighted sum as a complex number
        """
        bounds: List[Tuple[int, int]] = [(start, min(start + chunk, self.size)) for start in range(0, self.size, chunk)]

        def chunk_sum(span: Tuple[int, int]) -> complex:
            start, stop = span
            values = np.asarray(integrand(self.nodes[start:stop]), dtype=complex)
            return csum_array(self.weights[start:stop] * values)

        if jobs > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as executor:
                partials = list(executor.map(chunk_sum, bounds))
        else:
            partials = [chunk_sum(span) for span in bounds]
        return csum(partials)


def legendre_01_rule(m: int) -> QuadRule:
    """Gauss–Legendre on (0, 1), weights summing to 1."""
    if m < 2:
        raise DomainError("legendre_01_rule", "need at least 2 nodes", str(m))
    x, w = roots_legendre(m)
    return QuadRule(RuleKind.LEGENDRE_01, (1.0 + x) / 2.0, w / 2.0)


def beta_rule(a: float, b: float, m: int) -> QuadRule:
    """
    Gauss–Jacobi rule for t^{a-1}(1-t)^{b-1} dt / B(a, b) on (0, 1).

    Exact for polynomials of degree ≤ 2m-1 against the normalized measure.

    Raises:
        DomainError: If an exponent is not positive or m < 2
    """
    if not (a > 0 and b > 0):
        raise DomainError("beta_rule", "both beta exponents must be positive", f"a = {a}, b = {b}")
    if m < 2:
        raise DomainError("beta_rule", "need at least 2 nodes", str(m))
    x, w = roots_jacobi(m, b - 1.0, a - 1.0)
    return QuadRule(RuleKind.JACOBI_BETA, (1.0 + x) / 2.0, w / math.fsum(w.tolist()), {"a": float(a), "b": float(b)})


def semi_infinite_rule(decay: float, m: int, exponent: float = 0.0) -> QuadRule:
    """
    Generalized Gauss–Laguerre rule for e^{-decay s} s^exponent ds on (0, ∞).

    Nodes whose weights underflow to zero are dropped.

    Raises:
        DomainError: If decay ≤ 0 or exponent ≤ -1
    """
    if not decay > 0:
        raise DomainError("semi_infinite_rule", "decay rate must be positive", f"decay = {decay}")
    if not exponent > -1:
        raise DomainError("semi_infinite_rule", "exponent must exceed -1", f"exponent = {exponent}")
    if m < 2:
        raise DomainError("semi_infinite_rule", "need at least 2 nodes", str(m))
    x, w = roots_genlaguerre(m, exponent)
    keep = w > 0
    nodes = x[keep] / decay
    weights = w[keep] / decay ** (exponent + 1.0)
    return QuadRule(RuleKind.SEMI_INFINITE, nodes, weights, {"decay": float(decay), "exponent": float(exponent)})


def cosine_power_rule(power: float, m: int) -> QuadRule:
    """
    Rule for f(θ) cos^power θ dθ on (-π/2, π/2).

    Gauss–Jacobi in x = 2θ/π with both exponents equal to power; the smooth
    factor (cos θ / (1 - x²))^power is folded into the weights.
    """
    if not power > -1:
        raise DomainError("cosine_power_rule", "cosine power must exceed -1", f"power = {power}")
    if m < 2:
        raise DomainError("cosine_power_rule", "need at least 2 nodes", str(m))
    x, w = roots_jacobi(m, power, power)
    theta = 0.5 * math.pi * x
    smooth = np.cos(theta) / (1.0 - x * x)
    weights = 0.5 * math.pi * w * smooth**power
    return QuadRule(RuleKind.COSINE_POWER, theta, weights, {"power": float(power)})


def box_rule(
    dim: int, per_axis: int, theta_power: float = 0.0, max_nodes: int = DEFAULT_MAX_BOX_NODES
) -> QuadRule:
    """
    Tensor rule on [-π/2, π/2]^dim.

    Axis 0 integrates against cos^theta_power θ; the other axes are plain
    Gauss–Legendre. With theta_power = 0 the rule is tensor Gauss–Legendre.

    Raises:
        DomainError: If dim < 2
        BudgetExceededError: If per_axis^dim exceeds max_nodes
    """
    if dim < 2:
        raise DomainError("box_rule", "box dimension must be at least 2", str(dim))
    count = per_axis**dim
    if count > max_nodes:
        raise BudgetExceededError("box_rule", count, max_nodes)

    theta = cosine_power_rule(theta_power, per_axis)
    x, w = roots_legendre(per_axis)
    phi_nodes = 0.5 * math.pi * x
    phi_weights = 0.5 * math.pi * w

    axes = [theta.nodes] + [phi_nodes] * (dim - 1)
    axis_weights = [theta.weights] + [phi_weights] * (dim - 1)
    node_grids = np.meshgrid(*axes, indexing="ij")
    weight_grids = np.meshgrid(*axis_weights, indexing="ij")
    nodes = np.stack([g.ravel() for g in node_grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in weight_grids], axis=0), axis=0)

    logger.debug(f"Box rule: dim={dim}, per_axis={per_axis}, nodes={count}")
    return QuadRule(
        RuleKind.BOX, nodes, weights, {"dim": float(dim), "per_axis": float(per_axis), "theta_power": float(theta_power)}
    )
