"""
Oracle Checks - Evaluators compared with independent constructions

Each check returns an IdentityReport whose two sides come from unrelated code
paths: generating-function Taylor coefficients against the closed Laguerre
sums, the factored Pochhammer routes against the pole-free rearranged sums,
and the Le Roy asymptotic form against its power series.
"""

import logging
import time
from typing import Dict, Optional

from core_types import DEFAULT_SERIES, CPoint, MultiIndex
from errors import DomainError
from hypergeometric import le_roy
from identity_report import DEFAULT_MAX_INDEX_COUNT, IdentityReport
from laguerre import (
    gf_coefficients,
    laguerre_multi,
    laguerre_multi_factored,
    laguerre_neg_shift,
    multiple_laguerre_2nd,
    multiple_laguerre_gf_coefficients,
)

logger = logging.getLogger(__name__)


def _worst_pair(function: str, expected: Dict[MultiIndex, complex], compute, started: float) -> IdentityReport:
    """Report the index where the coefficient table and the evaluator disagree most."""
    worst = None
    for index, coefficient in expected.items():
        value = compute(index)
        rel = abs(coefficient - value) / max(abs(coefficient), abs(value), 1e-300)
        if worst is None or rel > worst[0]:
            worst = (rel, index, coefficient, value)
    assert worst is not None
    _, index, coefficient, value = worst
    notes = f"worst of {len(expected)} coefficients at n = {index.entries}"
    return IdentityReport.build(function, coefficient, value, None, started, notes=notes)


def gf_oracle(
    alpha: complex, x: CPoint, order: int = 5, max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT
) -> IdentityReport:
    """Taylor coefficients of (1−⟨z⟩)^{−α−1}exp(−⟨x∘z⟩/(1−⟨z⟩)) against laguerre_multi for ⟨n⟩ ≤ order."""
    started = time.perf_counter()
    if order < 0:
        raise DomainError("gf_oracle", "order must be nonnegative", str(order))
    coefficients = gf_coefficients(alpha, x, order, max_index_count or DEFAULT_MAX_INDEX_COUNT)
    return _worst_pair("gf_oracle", coefficients, lambda n: laguerre_multi(n, alpha, x), started)


def multiple_gf_oracle(
    alpha: complex,
    beta: CPoint,
    x: complex,
    order: int = 5,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """n! times the coefficients of (1−⟨t⟩)^{−α−1}exp(x⟨β∘t⟩/(1−⟨t⟩)) against multiple_laguerre_2nd."""
    started = time.perf_counter()
    if order < 0:
        raise DomainError("multiple_gf_oracle", "order must be nonnegative", str(order))
    coefficients = multiple_laguerre_gf_coefficients(alpha, beta, x, order, max_index_count or DEFAULT_MAX_INDEX_COUNT)
    return _worst_pair("multiple_gf_oracle", coefficients, lambda n: multiple_laguerre_2nd(n, alpha, beta, x), started)


def laguerre_routes(n: MultiIndex, alpha: complex, x: CPoint) -> IdentityReport:
    """(α+1)_{⟨n⟩}/n! Φ₂⁽ᵏ⁾[−n; α+1; x] against the rearranged sum."""
    started = time.perf_counter()
    return IdentityReport.build(
        "laguerre_routes", laguerre_multi_factored(n, alpha, x), laguerre_multi(n, alpha, x), None, started
    )


def neg_shift_routes(n: MultiIndex, beta: complex, x: CPoint) -> IdentityReport:
    """Factored and rearranged evaluations of L_n^(−β−⟨n⟩)(x)."""
    started = time.perf_counter()
    factored = laguerre_neg_shift(n, beta, x, route="factored")
    rearranged = laguerre_neg_shift(n, beta, x, route="rearranged")
    return IdentityReport.build("neg_shift_routes", factored, rearranged, None, started)


def le_roy_asymptotic(order: int, z: float) -> IdentityReport:
    """
    Series value of F_k(z) against C_k z^{(1−k)/(2k)} e^{k z^{1/k}} at real z > 0.

    The asymptotic form is a leading-order approximation, so the residual is
    a few percent near the switch point and shrinks as z grows.
    """
    started = time.perf_counter()
    if order < 2:
        raise DomainError("le_roy_asymptotic", "integer order k ≥ 2 required", str(order))
    if not z > 0:
        raise DomainError("le_roy_asymptotic", "real z > 0 required", str(z))
    series = le_roy(order, z, DEFAULT_SERIES, method="series")
    asymptotic = le_roy(order, z, method="asymptotic")
    notes = f"k z^(1/k) = {order * z ** (1.0 / order):.4g}"
    logger.debug(f"le_roy_asymptotic: {notes}")
    return IdentityReport.build("le_roy_asymptotic", series, asymptotic, None, started, notes=notes)
