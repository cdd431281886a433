"""
Hypergeometric - Scalar and multivariable hypergeometric functions

This module provides the functions the identities are stated in: ₁F₁, ₂F₁,
₁F₂, Humbert's Φ₁ (series and beta-measure integral), the closed forms of Φ₁ at
x = 1 and x = -1, the confluent Lauricella Φ₂⁽ᵏ⁾, the regularized modified
Bessel series and the Le Roy function F_γ.

All series are summed shell by shell through core_types.sum_shells and raise
NonConvergenceError when the tail test fails within the budget.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

import numpy as np
import scipy.special as sc

from core_types import (
    DEFAULT_SERIES,
    CPoint,
    SeriesControl,
    csum,
    csum_array,
    is_nonpositive_integer,
    log_gamma,
    reciprocal_gamma,
    sum_shells,
)
from errors import DomainError, NonConvergenceError, PoleError
from quadrature import QuadRule, RuleKind, beta_rule

logger = logging.getLogger(__name__)

# k z^{1/k} above which the Le Roy series gives way to the asymptotic form
LE_ROY_SWITCH = 35.0

# |y| above which Φ₁ is summed in its single-sum form (when |x| is small)
PHI1_SINGLE_SUM_Y = 10.0
PHI1_SINGLE_SUM_X = 0.5

UNIT_X_TOL = 1e-14


@dataclass(frozen=True)
class Phi1Params:
    """
    Parameters of Φ₁[a, b; c; x, y].

    c must not be a nonpositive integer; the integral route additionally needs
    Re(c) > Re(a) > 0.
    """

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if is_nonpositive_integer(self.c):
            raise PoleError("Phi1Params", f"c = {self.c} is a nonpositive integer")

    def in_integral_strip(self) -> bool:
        return self.c.real > self.a.real > 0


@dataclass(frozen=True)
class LeRoyParams:
    """Order of F_γ; the asymptotic path needs an integer order k ≥ 1."""

    gamma_order: complex

    def __post_init__(self):
        object.__setattr__(self, "gamma_order", complex(self.gamma_order))

    @property
    def is_integer_order(self) -> bool:
        g = self.gamma_order
        return g.imag == 0 and g.real >= 1 and g.real == round(g.real)

    @property
    def k(self) -> int:
        if not self.is_integer_order:
            raise DomainError("le_roy", "asymptotic path requires an integer order k ≥ 1", str(self.gamma_order))
        return int(round(self.gamma_order.real))

    def log_asymptotic_constant(self) -> float:
        """log C_k with C_k = (2π)^{(1-k)/2} k^{-1/2}."""
        k = self.k
        return 0.5 * (1 - k) * math.log(2 * math.pi) - 0.5 * math.log(k)


def _hypergeometric_terms(numerators: Sequence[complex], denominators: Sequence[complex], z: complex) -> Iterator[complex]:
    """Terms of pFq; stops after the last nonzero term of a terminating series."""
    stops = [-round(a.real) for a in numerators if is_nonpositive_integer(a)]
    last = min(stops) if stops else None
    term = 1 + 0j
    m = 0
    while True:
        yield term
        if last is not None and m >= last:
            return
        ratio = z / (m + 1)
        for a in numerators:
            ratio *= a + m
        for b in denominators:
            ratio /= b + m
        term *= ratio
        m += 1


def _sum_hypergeometric(
    name: str, numerators: Sequence[complex], denominators: Sequence[complex], z: complex, ctl: SeriesControl
) -> complex:
    for b in denominators:
        if is_nonpositive_integer(b):
            raise PoleError(name, f"denominator parameter {b} is a nonpositive integer")
    result = sum_shells(_hypergeometric_terms(numerators, denominators, z), ctl)
    if not result.converged:
        raise NonConvergenceError(name, "series did not converge", f"z = {z}", result.shells_used)
    return result.value


def hyp1f1(a: complex, c: complex, z: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """Kummer's ₁F₁(a; c; z); an exact polynomial when a ∈ Z≤0."""
    return _sum_hypergeometric("hyp1f1", [complex(a)], [complex(c)], complex(z), ctl)


def hyp1f2(a: complex, b1: complex, b2: complex, z: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """₁F₂(a; b1, b2; z), entire in z."""
    return _sum_hypergeometric("hyp1f2", [complex(a)], [complex(b1), complex(b2)], complex(z), ctl)


def kummer_value(a: complex, b: complex) -> complex:
    """
    ₂F₁(a, b; a-b+1; -1) = Γ(a-b+1)Γ(a/2+1) / (Γ(a/2-b+1)Γ(a+1)).

    Raises:
        DomainError: If Re(b) ≥ 1
        PoleError: If 1+a-b is a nonpositive integer
    """
    a = complex(a)
    b = complex(b)
    if not b.real < 1:
        raise DomainError("hyp2f1", "Kummer's theorem needs Re(b) < 1", f"b = {b}")
    if is_nonpositive_integer(1 + a - b):
        raise PoleError("hyp2f1", f"1+a-b = {1 + a - b} is a nonpositive integer")
    log_part = log_gamma(a - b + 1) + log_gamma(a / 2 + 1) - log_gamma(a + 1)
    return cmath.exp(log_part) * reciprocal_gamma(a / 2 - b + 1)


def hyp2f1(a: complex, b: complex, c: complex, z: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """
    Gauss ₂F₁(a, b; c; z).

    Supported: |z| < 1 (series), a terminating numerator parameter (any z),
    and z = -1 at the Kummer point c = a-b+1 (closed form).

    Raises:
        DomainError: For |z| ≥ 1 outside the supported cases
        PoleError: If c is a nonpositive integer
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if is_nonpositive_integer(c):
        raise PoleError("hyp2f1", f"c = {c} is a nonpositive integer")
    terminating = is_nonpositive_integer(a) or is_nonpositive_integer(b)
    if abs(z) < 1 or terminating:
        return _sum_hypergeometric("hyp2f1", [a, b], [c], z, ctl)
    if abs(z + 1) <= UNIT_X_TOL:
        if abs(c - (a - b + 1)) <= UNIT_X_TOL:
            return kummer_value(a, b)
        if abs(c - (b - a + 1)) <= UNIT_X_TOL:
            return kummer_value(b, a)
        raise DomainError("hyp2f1", "z = -1 is supported only at c = a-b+1", f"(a, b, c) = ({a}, {b}, {c})")
    raise DomainError("hyp2f1", "|z| < 1 required", f"z = {z}")


def _phi1_double_shells(p: Phi1Params, x: complex, y: complex) -> Iterator[complex]:
    """Shell s: (a)_s/(c)_s Σ_{m+n=s} (b)_m x^m/m! · y^n/n!."""
    b_side: List[complex] = [1 + 0j]
    y_side: List[complex] = [1 + 0j]
    ratio = 1 + 0j
    s = 0
    while True:
        yield ratio * csum(b_side[m] * y_side[s - m] for m in range(s + 1))
        ratio *= (p.a + s) / (p.c + s)
        b_side.append(b_side[s] * (p.b + s) * x / (s + 1))
        y_side.append(y_side[s] * y / (s + 1))
        s += 1


def _phi1_single_shells(p: Phi1Params, x: complex, y: complex, inner: SeriesControl) -> Iterator[complex]:
    """Term j: (a)_j/(c)_j y^j/j! ₂F₁(a+j, b; c+j; x)."""
    weight = 1 + 0j
    j = 0
    while True:
        yield weight * hyp2f1(p.a + j, p.b, p.c + j, x, inner)
        weight *= (p.a + j) * y / ((p.c + j) * (j + 1))
        j += 1


def humbert_phi1_series(
    p: Phi1Params, x: complex, y: complex, ctl: SeriesControl = DEFAULT_SERIES, method: str = "auto"
) -> complex:
    """
    Humbert's Φ₁[a, b; c; x, y] = Σ (a)_{m+n}(b)_m x^m y^n / ((c)_{m+n} m! n!).

    Args:
        method: "double" (graded shells m+n = s), "single" (sum over the y
            power with a ₂F₁ inner factor) or "auto" (single when |y| is large
            and |x| small)

    Raises:
        DomainError: If |x| ≥ 1
        NonConvergenceError: If the outer series does not converge within ctl
    """
    x, y = complex(x), complex(y)
    if not abs(x) < 1:
        raise DomainError("humbert_phi1_series", "|x| < 1 required", f"x = {x}")
    if method == "auto":
        method = "single" if abs(y) > PHI1_SINGLE_SUM_Y and abs(x) < PHI1_SINGLE_SUM_X else "double"
    if method == "double":
        shells = _phi1_double_shells(p, x, y)
    elif method == "single":
        shells = _phi1_single_shells(p, x, y, DEFAULT_SERIES)
    else:
        raise DomainError("humbert_phi1_series", "unknown method", method)

    result = sum_shells(shells, ctl)
    if not result.converged:
        raise NonConvergenceError(
            "humbert_phi1_series", "series did not converge", f"x = {x}, y = {y}, method = {method}", result.shells_used
        )
    return result.value


def _log_beta(p: complex, q: complex) -> complex:
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q)


def humbert_phi1_integral(
    p: Phi1Params, x: complex, y: complex, rule: Optional[QuadRule] = None, nodes: int = 64
) -> complex:
    """
    Φ₁ as ∫₀¹ (1-xt)^{-b} e^{yt} dμ_{a, c-a}(t).

    The Jacobi rule carries the real parts of the beta exponents; imaginary
    parts are folded into the integrand together with the ratio of beta
    normalizations.

    Raises:
        DomainError: If Re(c) > Re(a) > 0 fails, x lies on [1, ∞), or the rule
            does not match the measure
    """
    x, y = complex(x), complex(y)
    if not p.in_integral_strip():
        raise DomainError("humbert_phi1_integral", "Re(c) > Re(a) > 0 required", f"a = {p.a}, c = {p.c}")
    if x.imag == 0 and x.real >= 1:
        raise DomainError("humbert_phi1_integral", "x must avoid [1, ∞)", f"x = {x}")

    a_exp = p.a.real
    b_exp = (p.c - p.a).real
    if rule is None:
        rule = beta_rule(a_exp, b_exp, nodes)
    elif rule.kind is not RuleKind.JACOBI_BETA or not (
        math.isclose(rule.param("a"), a_exp, rel_tol=1e-12) and math.isclose(rule.param("b"), b_exp, rel_tol=1e-12)
    ):
        raise DomainError("humbert_phi1_integral", "rule does not match the beta measure", str(rule.params))

    a_imag = p.a.imag
    b_imag = (p.c - p.a).imag
    correction = 1 + 0j
    if a_imag or b_imag:
        correction = cmath.exp(_log_beta(a_exp, b_exp) - _log_beta(p.a, p.c - p.a))

    def integrand(t: np.ndarray) -> np.ndarray:
        values = np.power(1.0 - x * t, -p.b) * np.exp(y * t)
        if a_imag or b_imag:
            values = values * np.power(t, 1j * a_imag) * np.power(1.0 - t, 1j * b_imag)
        return values

    return correction * rule.integrate(integrand)


def phi1_at_unit_x(p: Phi1Params, y: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """
    Φ₁[a, b; c; 1, y] = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b)) · ₁F₁(a; c-b; y).

    Raises:
        DomainError: If Re(c-a-b) ≤ 0
        PoleError: If c-a or c-b is a nonpositive integer
    """
    a, b, c = p.a, p.b, p.c
    if not (c - a - b).real > 0:
        raise DomainError("phi1_at_unit_x", "Re(c-a-b) > 0 required", f"c-a-b = {c - a - b}")
    for label, value in (("c-a", c - a), ("c-b", c - b)):
        if is_nonpositive_integer(value):
            raise PoleError("phi1_at_unit_x", f"{label} = {value} is a nonpositive integer")
    gauss = cmath.exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) - log_gamma(c - b))
    return gauss * hyp1f1(a, c - b, y, ctl)


def phi1_neg1_split(a: complex, b: complex, y: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """
    Φ₁[a, b; a-b+1; -1, y] as a combination of two ₁F₂ values at y²/4.

    Raises:
        DomainError: If Re(b) ≥ 1
        PoleError: If a-b+1 or a is a nonpositive integer
    """
    a, b, y = complex(a), complex(b), complex(y)
    if not b.real < 1:
        raise DomainError("phi1_neg1_split", "Re(b) < 1 required", f"b = {b}")
    if is_nonpositive_integer(a - b + 1):
        raise PoleError("phi1_neg1_split", f"a-b+1 = {a - b + 1} is a nonpositive integer")
    if is_nonpositive_integer(a):
        raise PoleError("phi1_neg1_split", f"a = {a} is a nonpositive integer")

    w = y * y / 4
    prefactor = cmath.exp(log_gamma(a - b + 1) - log_gamma(a)) / 2
    even = cmath.exp(log_gamma(a / 2)) * reciprocal_gamma(a / 2 - b + 1) * hyp1f2(a / 2, 0.5, a / 2 - b + 1, w, ctl)
    odd = (
        cmath.exp(log_gamma(a / 2 + 0.5))
        * reciprocal_gamma(a / 2 - b + 1.5)
        * y
        * hyp1f2(a / 2 + 0.5, 1.5, a / 2 - b + 1.5, w, ctl)
    )
    return prefactor * (even + odd)


def lauricella_phi2k(b: CPoint, c: complex, x: CPoint, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """
    Confluent Lauricella Φ₂⁽ᵏ⁾[b; c; x] = Σ_m Π(b_i)_{m_i} / (c)_{⟨m⟩} · x^m/m!.

    Shell s collects Σ_{⟨m⟩=s} Π_i (b_i)_{m_i} x_i^{m_i}/m_i!, the degree-s
    coefficient of the product of the one-variable series. Terminates exactly
    when every b_i is a nonpositive integer.

    Raises:
        DomainError: On dimension mismatch
        PoleError: If c is a nonpositive integer
    """
    c = complex(c)
    if b.k != x.k:
        raise DomainError("lauricella_phi2k", "dimension of b must equal dimension of x", f"{b.k} != {x.k}")
    if is_nonpositive_integer(c):
        raise PoleError("lauricella_phi2k", f"c = {c} is a nonpositive integer")

    N = ctl.max_total_order
    terminating = all(is_nonpositive_integer(b_i) for b_i in b)
    last = sum(-round(b_i.real) for b_i in b) if terminating else None
    length = min(N, last) + 1 if last is not None else N + 1

    product = np.zeros(length, dtype=complex)
    product[0] = 1.0
    for b_i, x_i in zip(b, x):
        component = np.zeros(length, dtype=complex)
        term = 1 + 0j
        for m in range(length):
            component[m] = term
            term *= (b_i + m) * x_i / (m + 1)
        product = np.convolve(product, component)[:length]

    def shells() -> Iterator[complex]:
        ratio = 1 + 0j
        for s in range(length):
            yield product[s] * ratio
            ratio /= c + s

    if last is not None and last <= N:
        return csum(shells())
    result = sum_shells(shells(), ctl)
    if not result.converged:
        raise NonConvergenceError("lauricella_phi2k", "series did not converge", f"x = {x.entries}", result.shells_used)
    return result.value


def bessel_i(alpha: complex, t: complex, ctl: SeriesControl = DEFAULT_SERIES) -> complex:
    """
    Regularized modified Bessel combination I_α(2√t)/t^{α/2} = Σ t^m / (m! Γ(α+m+1)).

    Entire in t. When α+1 is a nonpositive integer the leading terms vanish and
    summation starts at the first nonzero term.
    """
    alpha, t = complex(alpha), complex(t)
    start = 0
    if is_nonpositive_integer(alpha + 1):
        start = -round((alpha + 1).real) + 1

    def terms() -> Iterator[complex]:
        m = start
        term = t**m / math.factorial(m) * reciprocal_gamma(alpha + m + 1)
        while True:
            yield term
            term *= t / ((m + 1) * (alpha + m + 1))
            m += 1

    result = sum_shells(terms(), ctl)
    if not result.converged:
        raise NonConvergenceError("bessel_i", "series did not converge", f"t = {t}", result.shells_used)
    return result.value


def _is_positive_real(z: complex) -> bool:
    return z.imag == 0 and z.real > 0


def _le_roy_asymptotic(params: LeRoyParams, z: float) -> complex:
    """C_k z^{(1-k)/(2k)} e^{k z^{1/k}} for real z > 0."""
    k = params.k
    exponent = params.log_asymptotic_constant() + (1 - k) / (2 * k) * math.log(z) + k * z ** (1.0 / k)
    if exponent > 709:
        raise DomainError("le_roy", "value overflows double precision", f"z = {z}")
    return complex(math.exp(exponent))


def le_roy(
    gamma_order: complex, z: complex, ctl: SeriesControl = DEFAULT_SERIES, method: str = "auto"
) -> complex:
    """
    Le Roy function F_γ(z) = Σ z^n / (n!)^γ.

    Args:
        method: "series", "asymptotic" (integer order, real z > 0) or "auto",
            which switches to the asymptotic form once k z^{1/k} exceeds
            LE_ROY_SWITCH

    Raises:
        DomainError: If the asymptotic path is requested outside its domain
        NonConvergenceError: If the series budget is exhausted
    """
    params = LeRoyParams(gamma_order)
    z = complex(z)
    if method not in ("auto", "series", "asymptotic"):
        raise DomainError("le_roy", "unknown method", method)
    if params.is_integer_order and params.k == 1 and method != "asymptotic":
        return cmath.exp(z)

    if method == "asymptotic":
        if not _is_positive_real(z):
            raise DomainError("le_roy", "asymptotic path requires real z > 0", f"z = {z}")
        return _le_roy_asymptotic(params, z.real)
    if method == "auto" and params.is_integer_order and _is_positive_real(z):
        k = params.k
        if k * z.real ** (1.0 / k) > LE_ROY_SWITCH:
            return _le_roy_asymptotic(params, z.real)

    order = params.gamma_order

    def terms() -> Iterator[complex]:
        term = 1 + 0j
        n = 0
        while True:
            yield term
            term *= z / cmath.exp(order * math.log(n + 1))
            n += 1

    result = sum_shells(terms(), ctl)
    if not result.converged:
        raise NonConvergenceError("le_roy", "series budget exceeded below the switch threshold", f"z = {z}", result.shells_used)
    return result.value


def le_roy_scaled(gamma_order: complex, z: complex, log_scale: float = 0.0) -> complex:
    """
    e^{-log_scale} F_γ(z), summed in log space.

    Each term is exp(n Log z - γ log n! - log_scale), so arguments whose
    F_γ(z) would overflow stay representable once scaled. The term count
    grows like |z|^{1/Re γ}.

    Raises:
        DomainError: If Re(γ) ≤ 0 or the scaled value still overflows
    """
    params = LeRoyParams(gamma_order)
    z = complex(z)
    if z == 0:
        return complex(math.exp(-log_scale))
    if params.is_integer_order and params.k == 1:
        return cmath.exp(z - log_scale)
    order = params.gamma_order
    if not order.real > 0:
        raise DomainError("le_roy_scaled", "Re(γ) > 0 required", f"γ = {order}")

    n_max = int(3 * abs(z) ** (1.0 / order.real)) + 30
    n = np.arange(n_max + 1, dtype=float)
    log_terms = n * cmath.log(z) - order * sc.gammaln(n + 1) - log_scale
    if np.max(log_terms.real) > 709:
        raise DomainError("le_roy_scaled", "scaled value overflows double precision", f"z = {z}")
    terms = np.exp(log_terms)
    value = csum_array(terms)
    peak = float(np.max(np.abs(terms)))
    if value != 0 and peak / abs(value) > 1e10:
        logger.debug(f"le_roy_scaled: cancellation {peak / abs(value):.2e} at z = {z}")
    return value
