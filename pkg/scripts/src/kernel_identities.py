"""
Kernel Identities - Bilinear, product and diagonal generating functions

This module provides the identities whose right-hand side is a closed kernel
or an integral rather than a Laguerre multiple series:

- hardy_hille: the bilinear generating function with the regularized Bessel kernel
- product_formula: the box integral for a product of two Laguerre values
- cosine_beta: the scalar cosine-power integral behind the product formula
- diagonal_gf: the main-diagonal generating function as a Le Roy integral on (0, ∞)
- diagonal_coefficients: Taylor coefficients of that integral against the diagonal Laguerre values
- diagonal_sign: brute-force main diagonal of 1/(1−x−y)
"""

import cmath
import logging
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core_types import (
    DEFAULT_SERIES,
    CPoint,
    MultiIndex,
    SeriesControl,
    SeriesSum,
    TruncatedSeries,
    check_index_budget,
    csum,
    is_nonpositive_integer,
    log_gamma,
    pochhammer,
    reciprocal_gamma,
    shell_indices,
    sum_shells,
)
from errors import DomainError, IdentitySkipped
from hypergeometric import bessel_i, le_roy_scaled
from identity_report import DEFAULT_MAX_INDEX_COUNT, IDENTITY_SERIES, IdentityReport
from laguerre import laguerre_multi, laguerre_multi_array, laguerre_neg_shift
from quadrature import DEFAULT_MAX_BOX_NODES, QuadRule, RuleKind, box_rule, cosine_power_rule, semi_infinite_rule

logger = logging.getLogger(__name__)

# Regime in which the box quadrature can certify the product formula
PRODUCT_MAX_DIM = 2
PRODUCT_MAX_DEGREE = 6
PRODUCT_MAX_PER_AXIS = 96
PRODUCT_DEFAULT_PER_AXIS = 48

COSINE_DEFAULT_NODES = 80
DIAGONAL_DEFAULT_NODES = 200
DIAGONAL_COEFFICIENT_POINTS = 24
DIAGONAL_SERIES = SeriesControl(max_total_order=200, rel_tol=1e-13, tail_window=3)


@dataclass(frozen=True)
class HardyHilleKernel:
    """
    (u; x, y) = [⟨u∘x∘y⟩ − ⟨u⟩⟨u∘x∘y⟩ + ⟨u∘x⟩⟨u∘y⟩] / (1 − ⟨u⟩)².
    """

    u: CPoint
    x: CPoint
    y: CPoint

    def __post_init__(self):
        if not (self.u.k == self.x.k == self.y.k):
            raise DomainError("HardyHilleKernel", "u, x and y must share one dimension k")
        if self.u.angle() == 1:
            raise DomainError("HardyHilleKernel", "⟨u⟩ ≠ 1 required")

    @property
    def value(self) -> complex:
        u_angle = self.u.angle()
        uxy = self.u.hadamard(self.x).hadamard(self.y).angle()
        ux = self.u.hadamard(self.x).angle()
        uy = self.u.hadamard(self.y).angle()
        return (uxy - u_angle * uxy + ux * uy) / (1 - u_angle) ** 2


@dataclass(frozen=True)
class XiEta:
    """
    Product-formula arguments for one component:
    ξ = x e^{i(θ−φ)} cos θ / cos φ and η = y e^{i(φ−θ)} cos θ / cos φ.
    """

    x_j: complex
    y_j: complex
    theta: float
    phi: float

    def __post_init__(self):
        if not abs(self.phi) < math.pi / 2:
            raise DomainError("XiEta", "|φ| < π/2 required", f"φ = {self.phi}")

    @property
    def xi(self) -> complex:
        return self.x_j * cmath.exp(1j * (self.theta - self.phi)) * math.cos(self.theta) / math.cos(self.phi)

    @property
    def eta(self) -> complex:
        return self.y_j * cmath.exp(1j * (self.phi - self.theta)) * math.cos(self.theta) / math.cos(self.phi)

    @property
    def argument(self) -> complex:
        return self.xi + self.eta


def xi_eta_arguments(x: CPoint, y: CPoint, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    Vectorized Ξ(x, y; θ, φ) = (ξ_j + η_j)_j.

    Args:
        theta: Shape (M,)
        phi: Shape (M, k)

    Returns:
        Complex array of shape (M, k)
    """
    xs = np.asarray(x.entries, dtype=complex)
    ys = np.asarray(y.entries, dtype=complex)
    ratio = (np.cos(theta)[:, None] / np.cos(phi)).astype(complex)
    delta = theta[:, None] - phi
    return (xs * np.exp(1j * delta) + ys * np.exp(-1j * delta)) * ratio


def hardy_hille(
    alpha: complex,
    x: CPoint,
    y: CPoint,
    u: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    Σ_n n! L_n^(α)(x) L_n^(α)(y) u^n / Γ(α+1+⟨n⟩)
        = (1−⟨u⟩)^{−α−1} exp(−(⟨u∘x⟩+⟨u∘y⟩)/(1−⟨u⟩)) · Σ_m t^m/(m! Γ(α+m+1)),  t = (u; x, y).

    Raises:
        DomainError: If |u|₁ ≥ 1 or α is an integer ≤ −1
    """
    function = "hardy_hille"
    started = time.perf_counter()
    alpha = complex(alpha)
    if not (u.k == x.k == y.k):
        raise DomainError(function, "u, x and y must share one dimension k")
    if not u.l1_norm() < 1:
        raise DomainError(function, "|u₁|+…+|u_k| < 1 required", f"got {u.l1_norm():.6g}")
    if is_nonpositive_integer(alpha + 1):
        raise DomainError(function, "α must not be an integer ≤ −1", f"α = {alpha}")
    ctl = ctl or IDENTITY_SERIES
    check_index_budget(function, u.k, ctl.max_total_order, max_index_count)

    def shells():
        s = 0
        while True:
            shell = csum(
                n.factorial_float() * laguerre_multi(n, alpha, x) * laguerre_multi(n, alpha, y) * u.power(n)
                for n in shell_indices(u.k, s)
            )
            yield shell * reciprocal_gamma(alpha + 1 + s)
            s += 1

    series = sum_shells(shells(), ctl)
    rhs = _hardy_hille_kernel_side(alpha, x, y, u, inner_ctl or DEFAULT_SERIES)
    swapped = _hardy_hille_kernel_side(alpha, y, x, u, inner_ctl or DEFAULT_SERIES)
    channels = {"swap_residual": abs(rhs - swapped) / max(abs(rhs), abs(swapped), 1e-300)}
    return IdentityReport.build(function, series.value, rhs, series, started, channels)


def _hardy_hille_kernel_side(alpha: complex, x: CPoint, y: CPoint, u: CPoint, inner_ctl: SeriesControl) -> complex:
    kernel = HardyHilleKernel(u, x, y)
    u_angle = u.angle()
    exponent = -(u.hadamard(x).angle() + u.hadamard(y).angle()) / (1 - u_angle)
    bessel = bessel_i(alpha, kernel.value, inner_ctl)
    return (1 - u_angle) ** (-alpha - 1) * cmath.exp(exponent) * bessel


def _require_real(function: str, **values: complex) -> dict:
    reals = {}
    for name, value in values.items():
        value = complex(value)
        if value.imag != 0:
            raise IdentitySkipped(function, f"complex {name} cannot be certified by box quadrature")
        reals[name] = value.real
    return reals


def _require_cosine_exponents(function: str, alpha: float, beta: float):
    if not (alpha > -1 and beta > -1 and alpha + beta > -1):
        raise DomainError(function, "α > −1, β > −1 and α+β > −1 required", f"α = {alpha}, β = {beta}")


def cosine_beta(alpha: complex, beta: complex, per_axis: int = COSINE_DEFAULT_NODES) -> IdentityReport:
    """
    Γ(α+β+1)/(Γ(α+1)Γ(β+1)) = (2^{α+β}/π) ∫ e^{i(α−β)θ} cos^{α+β}θ dθ over (−π/2, π/2).
    """
    function = "cosine_beta"
    started = time.perf_counter()
    params = _require_real(function, alpha=alpha, beta=beta)
    a, b = params["alpha"], params["beta"]
    _require_cosine_exponents(function, a, b)

    lhs = cmath.exp(log_gamma(a + b + 1) - log_gamma(a + 1) - log_gamma(b + 1))
    rule = cosine_power_rule(a + b, per_axis)
    integral = rule.integrate(lambda theta: np.exp(1j * (a - b) * theta))
    rhs = 2.0 ** (a + b) / math.pi * integral
    channels = {"imag_residual": abs(rhs.imag) / max(abs(rhs.real), 1e-300)}
    return IdentityReport.build(function, lhs, rhs, None, started, channels)


def product_formula(
    m: MultiIndex,
    n: MultiIndex,
    alpha: complex,
    beta: complex,
    x: CPoint,
    y: CPoint,
    per_axis: Optional[int] = None,
    rule: Optional[QuadRule] = None,
    jobs: int = 1,
    max_box_nodes: int = DEFAULT_MAX_BOX_NODES,
) -> IdentityReport:
    """
    L_m^(α)(x)/Γ(α+1+⟨m⟩) · L_n^(β)(y)/Γ(β+1+⟨n⟩) as a box integral over [−π/2, π/2]^{k+1}.

    The θ axis carries cos^{α+β}θ in its weights; the remaining integrand is
    e^{i(α−β)θ + i⟨(m−n)∘φ⟩} Π cos^{m_j+n_j}φ_j L_{m+n}^(α+β)(Ξ) / Γ(α+β+1+⟨m+n⟩).

    Raises:
        IdentitySkipped: Complex α or β, k > 2, ⟨m+n⟩ > 6 or per_axis > 96
        DomainError: α, β or α+β ≤ −1
        BudgetExceededError: If per_axis^{k+1} exceeds max_box_nodes
    """
    function = "product_formula"
    started = time.perf_counter()
    k = x.k
    if not (m.k == n.k == k == y.k):
        raise DomainError(function, "m, n, x and y must share one dimension k")
    params = _require_real(function, alpha=alpha, beta=beta)
    a, b = params["alpha"], params["beta"]
    degree = m + n
    per_axis = per_axis or (int(rule.param("per_axis")) if rule is not None else PRODUCT_DEFAULT_PER_AXIS)
    if k > PRODUCT_MAX_DIM:
        raise IdentitySkipped(function, f"k = {k} > {PRODUCT_MAX_DIM}")
    if degree.total() > PRODUCT_MAX_DEGREE:
        raise IdentitySkipped(function, f"⟨m+n⟩ = {degree.total()} > {PRODUCT_MAX_DEGREE}")
    if per_axis > PRODUCT_MAX_PER_AXIS:
        raise IdentitySkipped(function, f"per_axis = {per_axis} > {PRODUCT_MAX_PER_AXIS}")
    _require_cosine_exponents(function, a, b)

    if rule is None:
        rule = box_rule(k + 1, per_axis, theta_power=a + b, max_nodes=max_box_nodes)
    elif rule.kind is not RuleKind.BOX or rule.dim != k + 1 or not math.isclose(rule.param("theta_power"), a + b):
        raise DomainError(function, "rule must be a box rule of dimension k+1 with θ power α+β", str(rule.params))

    lhs = (
        laguerre_multi(m, a, x)
        * reciprocal_gamma(a + 1 + m.total())
        * laguerre_multi(n, b, y)
        * reciprocal_gamma(b + 1 + n.total())
    )

    difference = np.array([m_j - n_j for m_j, n_j in zip(m, n)], dtype=float)
    powers = np.array(list(degree), dtype=float)
    normalizer = reciprocal_gamma(a + b + 1 + degree.total())

    def integrand(nodes: np.ndarray) -> np.ndarray:
        theta = nodes[:, 0]
        phi = nodes[:, 1:]
        phase = np.exp(1j * ((a - b) * theta + phi @ difference))
        cosines = np.prod(np.cos(phi) ** powers, axis=1)
        values = laguerre_multi_array(degree, a + b, xi_eta_arguments(x, y, theta, phi))
        return phase * cosines * values * normalizer

    rhs = 2.0 ** (a + b + degree.total()) / math.pi ** (k + 1) * rule.integrate(integrand, jobs=jobs)

    channels = {}
    if all(v.imag == 0 for v in x) and all(v.imag == 0 for v in y):
        channels["imag_residual"] = abs(rhs.imag) / max(abs(rhs.real), 1e-300)
    logger.debug(f"{function}: {rule.size} nodes, per_axis={per_axis}")
    return IdentityReport.build(function, lhs, rhs, None, started, channels)


def _diagonal_bound(function: str, beta: complex, k: int, u_modulus: float) -> float:
    if not beta.real > 0:
        raise DomainError(function, "Re(β) > 0 required", f"β = {beta}")
    bound = 1.0 / k**k
    if not u_modulus < bound:
        raise DomainError(function, f"|u| < 1/k^k = {bound:g} required", f"|u| = {u_modulus:g}")
    return bound


def _diagonal_rule(
    function: str, beta: complex, k: int, u_modulus: float, rule: Optional[QuadRule], nodes: Optional[int]
) -> QuadRule:
    if rule is None:
        decay = 1.0 - k * u_modulus ** (1.0 / k)
        return semi_infinite_rule(decay, nodes or DIAGONAL_DEFAULT_NODES, exponent=beta.real - 1.0)
    if rule.kind is not RuleKind.SEMI_INFINITE:
        raise DomainError(function, "rule must be a semi-infinite rule", rule.kind.value)
    return rule


def _diagonal_integral(beta: complex, x: CPoint, u: complex, rule: QuadRule) -> complex:
    """(1/Γ(β)) ∫₀^∞ e^{−s} s^{β−1} F_k((−1)ᵏ u Π(s+x_j)) ds on a semi-infinite rule."""
    k = x.k
    decay = rule.param("decay")
    residual_power = beta - 1.0 - rule.param("exponent")
    sign = (-1) ** k
    xs = list(x)

    def integrand(s_nodes: np.ndarray) -> np.ndarray:
        values = np.empty(s_nodes.shape[0], dtype=complex)
        for i, s in enumerate(s_nodes):
            argument = sign * u * math.prod(s + x_j for x_j in xs)
            values[i] = le_roy_scaled(k, argument, (1.0 - decay) * s) * cmath.exp(residual_power * math.log(s))
        return values

    return reciprocal_gamma(beta) * rule.integrate(integrand)


def diagonal_gf(
    beta: complex,
    x: CPoint,
    u: complex,
    ctl: Optional[SeriesControl] = None,
    rule: Optional[QuadRule] = None,
    nodes: Optional[int] = None,
) -> IdentityReport:
    """
    Σ_n L_{n,…,n}^(−β−kn)(x) uⁿ = (1/Γ(β)) ∫₀^∞ e^{−s} s^{β−1} F_k((−1)ᵏ u Π(s+x_j)) ds.

    The default rule uses the weight e^{−ds} s^{Re β−1} with d = 1 − k|u|^{1/k};
    the remaining e^{−(1−d)s} is absorbed into a log-scaled Le Roy value per node.
    For k = 1 the closed form (1+u)^{−β}e^{−ux} is reported as a channel.

    Raises:
        DomainError: If Re(β) ≤ 0 or |u| ≥ 1/kᵏ
    """
    function = "diagonal_gf"
    started = time.perf_counter()
    beta = complex(beta)
    u = complex(u)
    k = x.k
    _diagonal_bound(function, beta, k, abs(u))

    def shells():
        power = 1 + 0j
        n = 0
        while True:
            yield laguerre_neg_shift(MultiIndex.diagonal(k, n), beta, x) * power
            power *= u
            n += 1

    series: SeriesSum = sum_shells(shells(), ctl or DIAGONAL_SERIES)
    rule = _diagonal_rule(function, beta, k, abs(u), rule, nodes)
    rhs = _diagonal_integral(beta, x, u, rule)

    channels = {}
    if k == 1:
        closed = (1 + u) ** (-beta) * cmath.exp(-u * x[0])
        channels["closed_form_residual"] = abs(closed - rhs) / max(abs(closed), abs(rhs), 1e-300)
    return IdentityReport.build(function, series.value, rhs, series, started, channels)


def diagonal_coefficients(
    beta: complex,
    x: CPoint,
    degree: int = 3,
    points: int = DIAGONAL_COEFFICIENT_POINTS,
    nodes: Optional[int] = None,
) -> IdentityReport:
    """
    Coefficients of uⁿ, n ≤ degree, read off the integral side of diagonal_gf
    against laguerre_neg_shift((n,…,n), β, x).

    The integral is sampled at `points` equispaced u on the circle |u| = 1/(4kᵏ);
    the coefficients are the divided differences of the interpolating
    polynomial there, which on roots of unity reduce to a discrete Fourier sum.
    The coefficient with the largest relative mismatch is reported.

    Raises:
        DomainError: If Re(β) ≤ 0, degree < 0 or points ≤ degree
    """
    function = "diagonal_coefficients"
    started = time.perf_counter()
    beta = complex(beta)
    k = x.k
    radius = _diagonal_bound(function, beta, k, 0.0) / 4
    if degree < 0:
        raise DomainError(function, "degree must be nonnegative", str(degree))
    if points <= degree:
        raise DomainError(function, "points must exceed degree", f"{points} ≤ {degree}")

    rule = _diagonal_rule(function, beta, k, radius, None, nodes)
    roots = [cmath.exp(2j * math.pi * j / points) for j in range(points)]
    samples = [_diagonal_integral(beta, x, radius * w, rule) for w in roots]

    worst = None
    for n in range(degree + 1):
        extracted = csum(g * w ** (-n) for g, w in zip(samples, roots)) / (points * radius**n)
        expected = laguerre_neg_shift(MultiIndex.diagonal(k, n), beta, x)
        rel = abs(expected - extracted) / max(abs(expected), abs(extracted), 1e-300)
        if worst is None or rel > worst[0]:
            worst = (rel, n, expected, extracted)
    assert worst is not None
    _, n, expected, extracted = worst
    notes = f"worst of {degree + 1} coefficients at n = {n}; |u| = {radius:.4g}, {points} points"
    return IdentityReport.build(function, expected, extracted, None, started, notes=notes)


def diagonal_sign(terms: int = 10, u: float = 0.1) -> IdentityReport:
    """
    Decide the sign in Σ C(2n,n) uⁿ = (1 ∓ 4u)^{−1/2} from the main diagonal of 1/(1−x−y).

    The diagonal is read off a truncated bivariate expansion; lhs is its partial
    sum at u and rhs the partial sum of the confirmed closed form's Taylor
    series. The decision is recorded in notes.
    """
    function = "diagonal_sign"
    started = time.perf_counter()
    if terms < 1:
        raise DomainError(function, "terms must be positive", str(terms))
    order = 2 * (terms - 1)
    total = TruncatedSeries.linear(2, order, [1, 1])
    expansion = total.compose([1] * (order + 1))
    diagonal = [expansion.coefficient((n, n)) for n in range(terms)]

    minus = [pochhammer(0.5, n) * 4**n / math.factorial(n) for n in range(terms)]
    plus = [pochhammer(0.5, n) * (-4) ** n / math.factorial(n) for n in range(terms)]

    def mismatch(candidate):
        return max(abs(d - c) / max(abs(c), 1.0) for d, c in zip(diagonal, candidate))

    minus_residual = mismatch(minus)
    plus_residual = mismatch(plus)
    confirmed, label = (minus, "(1-4u)^(-1/2)") if minus_residual <= plus_residual else (plus, "(1+4u)^(-1/2)")
    rejected = "(1+4u)^(-1/2)" if confirmed is minus else "(1-4u)^(-1/2)"
    notes = (
        f"diagonal of 1/(1-x-y) to {terms} terms matches {label}; "
        f"{rejected} disagrees (largest coefficient mismatch {max(minus_residual, plus_residual):.3g})"
    )
    logger.info(f"{function}: {notes}")

    lhs = csum(d * u**n for n, d in enumerate(diagonal))
    rhs = csum(c * u**n for n, c in enumerate(confirmed))
    channels = {"confirmed_sign_residual": min(minus_residual, plus_residual)}
    return IdentityReport.build(function, lhs, rhs, None, started, channels, notes)
