"""
Laguerre - Univariate and multivariate Laguerre polynomials

This module provides exact finite-sum evaluators for L_n^(α)(x) in one and
several variables, the negative-shifted family L_n^(−β−⟨n⟩)(x), the multiple
Laguerre polynomials of the second kind, and the generating-function Taylor
oracle the evaluators are tested against.

The canonical multivariate evaluator groups the finite sum by ⟨j⟩:

    L_n^(α)(x) = Σ_t (α+t+1)_{N−t}/(N−t)! · c_{N−t}
    c_m = Σ_{⟨r⟩=m} m!/r! · Π_i (−x_i)^{n_i−r_i}/(n_i−r_i)!

so c_m is a binomial convolution of one array per component and no n! or
Pochhammer factor with α+1 ∈ Z≤0 ever appears in a denominator.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence

import numpy as np

from core_types import (
    CPoint,
    MultiIndex,
    SeriesControl,
    TruncatedSeries,
    check_index_budget,
    csum,
    graded_enumerate,
    is_nonpositive_integer,
    pochhammer,
)
from errors import DomainError, PoleError
from hypergeometric import lauricella_phi2k

logger = logging.getLogger(__name__)

NEG_SHIFT_ROUTES = ("auto", "factored", "rearranged")


@dataclass(frozen=True)
class LaguerreEval:
    """
    A multivariate Laguerre evaluation request L_n^(α)(x).

    Usage:
        request = LaguerreEval(MultiIndex.of(1, 1), 0.0, CPoint.of(1, 1))
        request.value()  # -1
    """

    degree: MultiIndex
    alpha: complex
    point: CPoint

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.degree.k != self.point.k:
            raise DomainError("LaguerreEval", "dimension of n must equal dimension of x", f"{self.degree.k} != {self.point.k}")

    def value(self) -> complex:
        return laguerre_multi(self.degree, self.alpha, self.point)

    def prefactor(self) -> complex:
        """(α+1)_{⟨n⟩}/n!, the value at x = 0."""
        return pochhammer(self.alpha + 1, self.degree.total()) / self.degree.factorial_float()


@lru_cache(maxsize=None)
def _binomial_row(m: int) -> tuple:
    return tuple(float(math.comb(m, r)) for r in range(m + 1))


def _binomial_convolve(a: Sequence[complex], b: Sequence[complex]) -> List[complex]:
    """out[m] = Σ_r C(m, r) a[r] b[m−r]."""
    size = len(a) + len(b) - 1
    out = []
    for m in range(size):
        row = _binomial_row(m)
        lo = max(0, m - len(b) + 1)
        hi = min(m, len(a) - 1)
        out.append(csum(row[r] * a[r] * b[m - r] for r in range(lo, hi + 1)))
    return out


def _reversed_exponential(x_i: complex, n_i: int) -> List[complex]:
    """b[r] = (−x_i)^{n_i−r}/(n_i−r)! for r = 0..n_i."""
    forward = [1 + 0j]
    for p in range(1, n_i + 1):
        forward.append(forward[-1] * (-x_i) / p)
    return forward[::-1]


def _shift_weights(alpha: complex, N: int) -> List[complex]:
    """B(t) = (α+t+1)_{N−t}/(N−t)! for t = 0..N, built downward from B(N) = 1."""
    weights = [0j] * (N + 1)
    weights[N] = 1 + 0j
    for t in range(N - 1, -1, -1):
        weights[t] = weights[t + 1] * (alpha + t + 1) / (N - t)
    return weights


def laguerre_uni(n: int, alpha: complex, x: complex) -> complex:
    """
    L_n^(α)(x) = Σ_{j≤n} (−1)^j (α+j+1)_{n−j} x^j / (j!(n−j)!).

    Valid for every complex α, including α+1 ∈ Z≤0.
    """
    if n < 0:
        raise DomainError("laguerre_uni", "degree must be nonnegative", str(n))
    alpha = complex(alpha)
    x = complex(x)
    weights = _shift_weights(alpha, n)
    terms = []
    power = 1 + 0j
    for j in range(n + 1):
        if j:
            power *= -x / j
        terms.append(weights[j] * power)
    return csum(terms)


def laguerre_multi(n: MultiIndex, alpha: complex, x: CPoint) -> complex:
    """
    Erdélyi's L_n^(α)(x) by the pole-free rearranged finite sum.

    Raises:
        DomainError: On dimension mismatch
    """
    if n.k != x.k:
        raise DomainError("laguerre_multi", "dimension of n must equal dimension of x", f"{n.k} != {x.k}")
    alpha = complex(alpha)
    N = n.total()

    convolved = [1 + 0j]
    for x_i, n_i in zip(x, n):
        convolved = _binomial_convolve(convolved, _reversed_exponential(x_i, n_i))

    weights = _shift_weights(alpha, N)
    return csum(weights[t] * convolved[N - t] for t in range(N + 1))


def laguerre_multi_array(n: MultiIndex, alpha: complex, points: np.ndarray) -> np.ndarray:
    """
    laguerre_multi over a block of points.

    Args:
        points: Complex array of shape (M, k)

    Returns:
        Array of shape (M,)
    """
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    if points.shape[1] != n.k:
        raise DomainError("laguerre_multi_array", "points must have k columns", f"{points.shape[1]} != {n.k}")
    N = n.total()
    count = points.shape[0]

    convolved = np.ones((1, count), dtype=complex)
    for i, n_i in enumerate(n):
        forward = np.empty((n_i + 1, count), dtype=complex)
        forward[0] = 1.0
        for p in range(1, n_i + 1):
            forward[p] = forward[p - 1] * (-points[:, i]) / p
        component = forward[::-1]

        size = convolved.shape[0] + n_i
        out = np.zeros((size, count), dtype=complex)
        for m in range(size):
            row = _binomial_row(m)
            for r in range(max(0, m - n_i), min(m, convolved.shape[0] - 1) + 1):
                out[m] += row[r] * convolved[r] * component[m - r]
        convolved = out

    weights = _shift_weights(complex(alpha), N)
    result = np.zeros(count, dtype=complex)
    for t in range(N + 1):
        result += weights[t] * convolved[N - t]
    return result


def laguerre_multi_factored(n: MultiIndex, alpha: complex, x: CPoint) -> complex:
    """
    (α+1)_{⟨n⟩}/n! · Φ₂⁽ᵏ⁾[−n; α+1; x], the cross-check route.

    Raises:
        PoleError: If α+1 is a nonpositive integer
    """
    alpha = complex(alpha)
    if is_nonpositive_integer(alpha + 1):
        raise PoleError("laguerre_multi_factored", f"α+1 = {alpha + 1} is a nonpositive integer")
    N = n.total()
    ctl = SeriesControl(max_total_order=max(N, 3), rel_tol=1e-16, tail_window=3)
    minus_n = CPoint(tuple(-float(n_i) for n_i in n))
    return pochhammer(alpha + 1, N) / n.factorial_float() * lauricella_phi2k(minus_n, alpha + 1, x, ctl)


def _neg_shift_factored(n: MultiIndex, beta: complex, x: CPoint) -> complex:
    N = n.total()
    c = 1 - beta - N
    if is_nonpositive_integer(c) and -round(c.real) < N:
        raise PoleError("laguerre_neg_shift", f"(1−β−⟨n⟩)_{{⟨j⟩}} vanishes for β = {beta}")

    shell = np.ones(1, dtype=complex)
    for x_i, n_i in zip(x, n):
        component = np.empty(n_i + 1, dtype=complex)
        term = 1 + 0j
        for j in range(n_i + 1):
            component[j] = term
            term *= (j - n_i) * x_i / (j + 1)
        shell = np.convolve(shell, component)

    terms = []
    ratio = 1 + 0j
    for t in range(N + 1):
        terms.append(shell[t] * ratio)
        if t < N:
            ratio /= c + t
    return (-1) ** N * pochhammer(beta, N) / n.factorial_float() * csum(terms)


def laguerre_neg_shift(n: MultiIndex, beta: complex, x: CPoint, route: str = "auto") -> complex:
    """
    L_n^(−β−⟨n⟩)(x).

    Args:
        route: "rearranged" (laguerre_multi at α = −β−⟨n⟩), "factored"
            (the (β)_{⟨n⟩} Pochhammer form) or "auto", which is the
            rearranged route

    Raises:
        DomainError: On dimension mismatch or an unknown route
        PoleError: On the factored route when (1−β−⟨n⟩)_{⟨j⟩} vanishes
    """
    if n.k != x.k:
        raise DomainError("laguerre_neg_shift", "dimension of n must equal dimension of x", f"{n.k} != {x.k}")
    beta = complex(beta)
    if route not in NEG_SHIFT_ROUTES:
        raise DomainError("laguerre_neg_shift", "unknown route", route)
    if route == "factored":
        return _neg_shift_factored(n, beta, x)
    return laguerre_multi(n, -beta - n.total(), x)


def multiple_laguerre_2nd(n: MultiIndex, alpha: complex, beta: CPoint, x: complex) -> complex:
    """L_n^(α;β)(x) = n! L_n^(α)(−β₁x, …, −β_k x)."""
    if n.k != beta.k:
        raise DomainError("multiple_laguerre_2nd", "dimension of n must equal dimension of β", f"{n.k} != {beta.k}")
    return n.factorial_float() * laguerre_multi(n, alpha, beta.scale(-complex(x)))


def gf_coefficients(
    alpha: complex, x: CPoint, N: int, max_index_count: int = 10_000_000
) -> Dict[MultiIndex, complex]:
    """
    Taylor coefficients of (1−⟨z⟩)^{−α−1} exp(−⟨x∘z⟩/(1−⟨z⟩)) up to total degree N.

    Built by composing truncated power series in z, independently of the
    closed evaluators.

    Raises:
        BudgetExceededError: If C(N+k, k) exceeds max_index_count
    """
    k = x.k
    check_index_budget("gf_coefficients", k, N, max_index_count)
    alpha = complex(alpha)

    total = TruncatedSeries.linear(k, N, [1] * k)
    weighted = TruncatedSeries.linear(k, N, list(x))
    geometric = total.compose([1] * (N + 1))
    exponent = (weighted * geometric).scale(-1)
    exponential = exponent.compose([1 / math.factorial(p) for p in range(N + 1)])
    binomial = total.compose([pochhammer(alpha + 1, m) / math.factorial(m) for m in range(N + 1)])
    series = binomial * exponential

    logger.debug(f"gf_coefficients: k={k}, N={N}, terms={len(series.coeffs)}")
    return {index: series.coefficient(index.entries) for index in graded_enumerate(k, N)}


def multiple_laguerre_gf_coefficients(
    alpha: complex, beta: CPoint, x: complex, N: int, max_index_count: int = 10_000_000
) -> Dict[MultiIndex, complex]:
    """
    n! times the coefficients of (1−⟨t⟩)^{−α−1} exp(x⟨β∘t⟩/(1−⟨t⟩)).

    Each entry is the generating-function value of multiple_laguerre_2nd.
    """
    coefficients = gf_coefficients(alpha, beta.scale(-complex(x)), N, max_index_count)
    return {index: index.factorial_float() * value for index, value in coefficients.items()}
