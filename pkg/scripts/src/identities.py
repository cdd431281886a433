"""
Identities - Series generating-function identities for multivariate Laguerre polynomials

This module provides one evaluator per series identity. Each evaluates the
left-hand side in closed or low-dimensional form, the right-hand side as a
truncated multiple series over graded shells, and returns an IdentityReport.

Outer series that fail their tail test are reported with converged=False;
nested scalar evaluations that fail still raise.
"""

import cmath
import logging
import time
from typing import List, Optional, Sequence, Tuple

from core_types import (
    DEFAULT_SERIES,
    CPoint,
    SeriesControl,
    SeriesSum,
    csum,
    is_nonpositive_integer,
    log_gamma,
    pochhammer_ratio,
    reciprocal_gamma,
)
from errors import DomainError, PoleError
from hypergeometric import Phi1Params, humbert_phi1_integral, humbert_phi1_series, phi1_neg1_split
from identity_report import (
    DEFAULT_MAX_INDEX_COUNT,
    IDENTITY_SERIES,
    IdentityReport,
    LaguerreLevel,
    LevelConvolution,
    sum_weighted_levels,
)
from laguerre import laguerre_uni

logger = logging.getLogger(__name__)

UNIT_SUM_TOL = 1e-14


def _require_l1_below_one(function: str, name: str, v: CPoint):
    norm = v.l1_norm()
    if not norm < 1:
        raise DomainError(function, f"|{name}₁|+…+|{name}_k| < 1 required", f"got {norm:.6g}")


def _require_off_pole(function: str, label: str, value: complex):
    if is_nonpositive_integer(value):
        raise PoleError(function, f"{label} = {complex(value)} must not be a nonpositive integer")


def _require_same_k(function: str, *vectors: CPoint):
    dims = {v.k for v in vectors}
    if len(dims) > 1:
        raise DomainError(function, "all vectors must share one dimension k", str(sorted(dims)))


def _require_angle(function: str, u: CPoint, target: float):
    angle = u.angle()
    if abs(angle - target) > UNIT_SUM_TOL:
        label = f"{target:g}".replace("-", "−")
        raise DomainError(function, f"⟨u⟩ = {label} required", f"⟨u⟩ = {angle}")


def _level_shifts(
    function: str, beta0: complex, betas: Sequence[complex], require_off_pole: bool = True
) -> List[complex]:
    """β_r − β_{r−1} for r = 1..L with β_0 = beta0; with require_off_pole each must avoid Z≤0."""
    chain = [complex(beta0)] + [complex(b) for b in betas]
    shifts = []
    for r in range(1, len(chain)):
        shift = chain[r] - chain[r - 1]
        if require_off_pole:
            _require_off_pole(function, f"β_{r}−β_{r - 1}", shift)
        shifts.append(shift)
    return shifts


def _sum_vectors(vectors: Sequence[CPoint]) -> CPoint:
    total = vectors[0]
    for v in vectors[1:]:
        total = total + v
    return total


def _outer(ctl: Optional[SeriesControl]) -> SeriesControl:
    return ctl or IDENTITY_SERIES


def _inner(inner_ctl: Optional[SeriesControl]) -> SeriesControl:
    return inner_ctl or DEFAULT_SERIES


def prop1_general(
    alpha: complex,
    beta: complex,
    gamma: complex,
    u: CPoint,
    x: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    Φ₁[α, β; γ; −⟨u⟩, −⟨u∘x⟩] = Σ_n (α)_{⟨n⟩}/(γ)_{⟨n⟩} L_n^(−β−⟨n⟩)(x) u^n.

    Raises:
        DomainError: If |u|₁ ≥ 1, −β or γ is a nonpositive integer
    """
    function = "prop1_general"
    started = time.perf_counter()
    _require_same_k(function, u, x)
    _require_l1_below_one(function, "u", u)
    _require_off_pole(function, "−β", -complex(beta))
    _require_off_pole(function, "γ", gamma)

    lhs = humbert_phi1_series(Phi1Params(alpha, beta, gamma), -u.angle(), -u.hadamard(x).angle(), _inner(inner_ctl))
    levels = LevelConvolution([LaguerreLevel(-complex(beta), u, x)])
    series = sum_weighted_levels(
        function, levels, lambda s: pochhammer_ratio(alpha, gamma, s), _outer(ctl), max_index_count
    )
    return IdentityReport.build(function, lhs, series.value, series, started)


def prop1_exponential(
    beta: complex,
    u: CPoint,
    x: CPoint,
    ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """e^{−⟨u∘x⟩}(1+⟨u⟩)^{−β} = Σ_n L_n^(−β−⟨n⟩)(x) u^n."""
    function = "prop1_exponential"
    started = time.perf_counter()
    _require_same_k(function, u, x)
    _require_l1_below_one(function, "u", u)

    beta = complex(beta)
    lhs = cmath.exp(-u.hadamard(x).angle()) * (1 + u.angle()) ** (-beta)
    levels = LevelConvolution([LaguerreLevel(-beta, u, x)])
    series = sum_weighted_levels(function, levels, lambda s: 1.0, _outer(ctl), max_index_count)
    return IdentityReport.build(function, lhs, series.value, series, started)


def _nested_levels(
    function: str, shifts: Sequence[complex], sigmas: Sequence[CPoint], x: CPoint, y: CPoint
) -> Tuple[List[LaguerreLevel], CPoint]:
    """
    Levels at (1−σ⁽ʳ⁾)∘σ⁽¹⁾∘…∘σ⁽ʳ⁻¹⁾∘y/x with scale −x, and the final σ⁽ᴸ⁾∘…∘σ⁽¹⁾∘y.
    """
    if any(x_i == 0 for x_i in x):
        raise DomainError(function, "all x_i must be nonzero", str(x.entries))
    ratio = y.quotient(x)
    k = x.k
    carried = CPoint.ones(k)
    levels = []
    for shift, sigma in zip(shifts, sigmas):
        point = (CPoint.ones(k) - sigma).hadamard(carried).hadamard(ratio)
        levels.append(LaguerreLevel(shift, -x, point))
        carried = carried.hadamard(sigma)
    return levels, carried.hadamard(y)


def _multilevel(
    function: str,
    alpha: complex,
    gamma: complex,
    betas: Sequence[complex],
    sigmas: Sequence[CPoint],
    x: CPoint,
    y: CPoint,
    ctl: Optional[SeriesControl],
    inner_ctl: Optional[SeriesControl],
    max_index_count: Optional[int],
) -> IdentityReport:
    started = time.perf_counter()
    if len(betas) < 2:
        raise DomainError(function, "betas must hold β₀ and at least one β_r")
    if len(sigmas) != len(betas) - 1:
        raise DomainError(function, "one σ vector per level required", f"{len(sigmas)} != {len(betas) - 1}")
    _require_same_k(function, x, y, *sigmas)
    _require_l1_below_one(function, "x", x)
    _require_off_pole(function, "γ", gamma)
    shifts = _level_shifts(function, betas[0], betas[1:])

    inner = _inner(inner_ctl)
    levels, trailing_y = _nested_levels(function, shifts, sigmas, x, y)
    beta_last = betas[-1]
    x_angle = x.angle()
    y_angle = trailing_y.angle()

    def weight(s: int) -> complex:
        trailing = humbert_phi1_series(Phi1Params(alpha + s, beta_last, gamma + s), x_angle, y_angle, inner)
        return pochhammer_ratio(alpha, gamma, s) * trailing

    lhs = humbert_phi1_series(Phi1Params(alpha, betas[0], gamma), x_angle, y.angle(), inner)
    series = sum_weighted_levels(function, LevelConvolution(levels), weight, _outer(ctl), max_index_count)
    return IdentityReport.build(function, lhs, series.value, series, started)


def lemma_expansion(
    alpha: complex,
    beta: complex,
    beta1: complex,
    gamma: complex,
    sigma: CPoint,
    x: CPoint,
    y: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    Φ₁[α,β;γ;⟨x⟩,⟨y⟩] = Σ_n (α)/(γ) (−x)^n L_n^(β₁−β−⟨n⟩)((1−σ)∘y/x) Φ₁[α+⟨n⟩, β₁; γ+⟨n⟩; ⟨x⟩, ⟨σ∘y⟩].

    Raises:
        DomainError: If |x|₁ ≥ 1, some x_i = 0, or β₁−β or γ is a nonpositive integer
    """
    return _multilevel(
        "lemma_expansion", alpha, gamma, [beta, beta1], [sigma], x, y, ctl, inner_ctl, max_index_count
    )


def theorem_multiple(
    alpha: complex,
    gamma: complex,
    betas: Sequence[complex],
    sigmas: Sequence[CPoint],
    x: CPoint,
    y: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    L-fold repetition of the lemma expansion.

    Args:
        betas: [β₀ = β, β₁, …, β_L]
        sigmas: σ⁽¹⁾ … σ⁽ᴸ⁾

    Raises:
        BudgetExceededError: If C(N+kL, kL) exceeds max_index_count
    """
    return _multilevel(
        "theorem_multiple", alpha, gamma, list(betas), list(sigmas), x, y, ctl, inner_ctl, max_index_count
    )


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def reduction_chain(
    alpha: complex,
    beta: complex,
    beta1: complex,
    gamma: complex,
    sigma: CPoint,
    x: CPoint,
    y: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    theorem_multiple at one level against lemma_expansion, with the two reductions below it.

    lhs/rhs are the lemma and one-level theorem series. Channels:
      lhs_residual          the two Φ₁ left sides
      prop1_residual        lemma at β₁ = 0, σ = 0 against prop1_general(α, β, γ, −x, y/x)
      exponential_residual  prop1_general(γ, β, γ, −x, y/x) against prop1_exponential(β, −x, y/x)

    Both reductions are omitted when β is a nonnegative integer, where −β is a pole.
    """
    function = "reduction_chain"
    started = time.perf_counter()
    settings = dict(ctl=ctl, inner_ctl=inner_ctl, max_index_count=max_index_count)
    lemma = lemma_expansion(alpha, beta, beta1, gamma, sigma, x, y, **settings)
    theorem = theorem_multiple(alpha, gamma, [beta, beta1], [sigma], x, y, **settings)
    reports = [lemma, theorem]
    channels = {"lhs_residual": _relative(lemma.lhs, theorem.lhs)}

    u = -x
    ratio = y.quotient(x)
    notes = ""
    if is_nonpositive_integer(-complex(beta)):
        notes = "prop1 reduction skipped: β is a nonnegative integer"
    else:
        reduced = lemma_expansion(alpha, beta, 0.0, gamma, CPoint.zeros(x.k), x, y, **settings)
        general = prop1_general(alpha, beta, gamma, u, ratio, **settings)
        channels["prop1_residual"] = max(_relative(reduced.lhs, general.lhs), _relative(reduced.rhs, general.rhs))
        at_gamma = prop1_general(gamma, beta, gamma, u, ratio, **settings)
        exponential = prop1_exponential(beta, u, ratio, ctl=ctl, max_index_count=max_index_count)
        channels["exponential_residual"] = max(
            _relative(at_gamma.lhs, exponential.lhs), _relative(at_gamma.rhs, exponential.rhs)
        )
        reports += [reduced, general, at_gamma, exponential]

    series = SeriesSum(theorem.rhs, theorem.shells_used, all(report.converged for report in reports))
    return IdentityReport.build(function, lemma.rhs, theorem.rhs, series, started, channels, notes)


def cor1_theorem_parameters(w_list: Sequence[CPoint], u: CPoint) -> Tuple[CPoint, CPoint, List[CPoint]]:
    """
    Substitution turning the theorem into the w-form expansion.

    Returns:
        (x, y, sigmas) = (−u, −u∘Σw, [1 − w⁽ⁱ⁾/(w⁽ⁱ⁾+…+w⁽ᴸ⁺¹⁾) for i = 1..L])
    """
    if len(w_list) < 2:
        raise DomainError("cor1_theorem_parameters", "need w⁽¹⁾ … w⁽ᴸ⁺¹⁾ with L ≥ 1")
    k = u.k
    sigmas = []
    for i in range(len(w_list) - 1):
        tail = _sum_vectors(w_list[i:])
        sigmas.append(CPoint.ones(k) - w_list[i].quotient(tail))
    return -u, -u.hadamard(_sum_vectors(w_list)), sigmas


def _check_tail_sums(function: str, w_list: Sequence[CPoint], levels: int):
    for i in range(levels):
        tail = _sum_vectors(w_list[i:])
        if any(v == 0 for v in tail):
            raise DomainError(function, f"w⁽{i + 1}⁾+…+w⁽ᴸ⁺¹⁾ must have no zero component", str(tail.entries))


def cor1_expansion(
    alpha: complex,
    beta: complex,
    gamma: complex,
    betas: Sequence[complex],
    w_list: Sequence[CPoint],
    u: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    Φ₁[α,β;γ;−⟨u⟩,−⟨u∘Σw⟩] as the L-fold series in u^n Π L^(β_r−β_{r−1}−t_r)(w⁽ʳ⁾)
    with trailing Φ₁[α+s, β_L; γ+s; −⟨u⟩, −⟨u∘w⁽ᴸ⁺¹⁾⟩].

    Args:
        betas: [β₁, …, β_L]
        w_list: w⁽¹⁾ … w⁽ᴸ⁺¹⁾
    """
    function = "cor1_expansion"
    started = time.perf_counter()
    L = len(betas)
    if L < 1 or len(w_list) != L + 1:
        raise DomainError(function, "need L ≥ 1 betas and L+1 w vectors", f"L = {L}, w count = {len(w_list)}")
    _require_same_k(function, u, *w_list)
    _require_l1_below_one(function, "u", u)
    _require_off_pole(function, "γ", gamma)
    _check_tail_sums(function, w_list, L)
    shifts = _level_shifts(function, beta, betas)

    inner = _inner(inner_ctl)
    levels = [LaguerreLevel(shift, u, w) for shift, w in zip(shifts, w_list)]
    u_angle = u.angle()
    last_y = -u.hadamard(w_list[-1]).angle()
    beta_last = betas[-1]

    def weight(s: int) -> complex:
        trailing = humbert_phi1_series(Phi1Params(alpha + s, beta_last, gamma + s), -u_angle, last_y, inner)
        return pochhammer_ratio(alpha, gamma, s) * trailing

    lhs = humbert_phi1_series(
        Phi1Params(alpha, beta, gamma), -u_angle, -u.hadamard(_sum_vectors(w_list)).angle(), inner
    )
    series = sum_weighted_levels(function, LevelConvolution(levels), weight, _outer(ctl), max_index_count)
    return IdentityReport.build(function, lhs, series.value, series, started)


def cor2_expansion(
    alpha: complex,
    beta: complex,
    gamma: complex,
    betas: Sequence[complex],
    w_list: Sequence[CPoint],
    u: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    The w-form expansion with β_L = 0 and w⁽ᴸ⁺¹⁾ = 0: no trailing Φ₁ factor.

    Args:
        betas: [β₁, …, β_{L−1}] (may be empty)
        w_list: w⁽¹⁾ … w⁽ᴸ⁾
    """
    function = "cor2_expansion"
    started = time.perf_counter()
    L = len(w_list)
    if L < 1 or len(betas) != L - 1:
        raise DomainError(function, "need L w vectors and L−1 betas", f"w count = {L}, betas = {len(betas)}")
    _require_same_k(function, u, *w_list)
    _require_l1_below_one(function, "u", u)
    _require_off_pole(function, "γ", gamma)
    shifts = _level_shifts(function, beta, list(betas) + [0.0])

    levels = [LaguerreLevel(shift, u, w) for shift, w in zip(shifts, w_list)]
    lhs = humbert_phi1_series(
        Phi1Params(alpha, beta, gamma), -u.angle(), -u.hadamard(_sum_vectors(w_list)).angle(), _inner(inner_ctl)
    )
    series = sum_weighted_levels(
        function, LevelConvolution(levels), lambda s: pochhammer_ratio(alpha, gamma, s), _outer(ctl), max_index_count
    )
    return IdentityReport.build(function, lhs, series.value, series, started)


def cor3_addition(
    m: int,
    a: Sequence[complex],
    u: CPoint,
    w_list: Sequence[CPoint],
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    L_m^(a₁+…+a_{L+1})(−⟨u∘Σw⟩) = Σ_{Σ⟨n⁽ʳ⁾⟩ ≤ m} (−u)^{Σn} Π L^(a_r−t_r)(w⁽ʳ⁾) · L_{m−s}^(a_{L+1}+s)(−⟨u∘w⁽ᴸ⁺¹⁾⟩).

    Both sides are finite sums; the report is always converged.

    Raises:
        DomainError: If ⟨u⟩ ≠ −1, or some a_r or Σa_r is a nonpositive integer
    """
    function = "cor3_addition"
    started = time.perf_counter()
    if m < 0:
        raise DomainError(function, "m must be a nonnegative integer", str(m))
    L = len(a) - 1
    if L < 1 or len(w_list) != L + 1:
        raise DomainError(function, "need L+1 ≥ 2 parameters a_r and as many w vectors", f"a = {len(a)}, w = {len(w_list)}")
    _require_same_k(function, u, *w_list)
    _require_angle(function, u, -1.0)
    a = [complex(a_r) for a_r in a]
    for r, a_r in enumerate(a, start=1):
        _require_off_pole(function, f"a_{r}", a_r)
    a_total = csum(a)
    _require_off_pole(function, "a₁+…+a_{L+1}", a_total)

    levels = [LaguerreLevel(a_r, -u, w) for a_r, w in zip(a[:L], w_list[:L])]
    last_arg = -u.hadamard(w_list[-1]).angle()
    a_last = a[-1]

    lhs = laguerre_uni(m, a_total, -u.hadamard(_sum_vectors(w_list)).angle())
    series = sum_weighted_levels(
        function,
        LevelConvolution(levels),
        lambda s: laguerre_uni(m - s, a_last + s, last_arg),
        IDENTITY_SERIES,
        max_index_count,
        exact_order=m,
    )
    return IdentityReport.build(function, lhs, series.value, series, started)


def _half_gamma_weight(alpha: complex, beta_last: complex, s: int) -> complex:
    """Γ((α+s)/2+1) / (Γ((α+s)/2−β_L+1) (α+s))."""
    half = (alpha + s) / 2
    return cmath.exp(log_gamma(half + 1)) * reciprocal_gamma(half - beta_last + 1) / (alpha + s)


def _unit_sum_setup(
    function: str, alpha: complex, betas: Sequence[complex], w_list: Sequence[CPoint], u: CPoint
) -> Tuple[int, CPoint]:
    """Shared ⟨u⟩ = 1 checks; returns (L, Σw)."""
    L = len(betas)
    if L < 1 or len(w_list) != L:
        raise DomainError(function, "need L ≥ 1 betas and L w vectors", f"betas = {L}, w count = {len(w_list)}")
    _require_same_k(function, u, *w_list)
    _require_angle(function, u, 1.0)
    _require_off_pole(function, "α", alpha)
    return L, _sum_vectors(w_list)


def cor4_kummer(
    alpha: complex,
    beta: complex,
    betas: Sequence[complex],
    w_list: Sequence[CPoint],
    u: CPoint,
    ctl: Optional[SeriesControl] = None,
    nodes: int = 64,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    Φ₁[α, β; α−β_L+1; −1, −⟨u∘Σw⟩] at ⟨u⟩ = 1 via Kummer's ₂F₁ value at −1.

    The left side is the beta-measure integral, so Re(α) > 0 is required.

    Args:
        betas: [β₁, …, β_L]
        w_list: w⁽¹⁾ … w⁽ᴸ⁾
        nodes: Gauss–Jacobi nodes for the left side
    """
    function = "cor4_kummer"
    started = time.perf_counter()
    alpha = complex(alpha)
    _, w_total = _unit_sum_setup(function, alpha, betas, w_list, u)
    beta_last = complex(betas[-1])
    if not beta_last.real < 1:
        raise DomainError(function, "Re(β_L) < 1 required", f"β_L = {beta_last}")
    _require_off_pole(function, "α−β_L+1", alpha - beta_last + 1)
    if not alpha.real > 0:
        raise DomainError(function, "Re(α) > 0 required for the integral route", f"α = {alpha}")
    shifts = _level_shifts(function, beta, betas, require_off_pole=False)

    y_total = u.hadamard(w_total).angle()
    lhs = humbert_phi1_integral(Phi1Params(alpha, beta, alpha - beta_last + 1), -1.0, -y_total, nodes=nodes)

    prefactor = cmath.exp(log_gamma(alpha - beta_last + 1) - log_gamma(alpha))
    levels = [LaguerreLevel(shift, u, w) for shift, w in zip(shifts, w_list)]
    series = sum_weighted_levels(
        function,
        LevelConvolution(levels),
        lambda s: _half_gamma_weight(alpha, beta_last, s),
        _outer(ctl),
        max_index_count,
    )
    return IdentityReport.build(function, lhs, prefactor * series.value, series, started)


def cor5_split(
    alpha: complex,
    beta: complex,
    betas: Sequence[complex],
    w_list: Sequence[CPoint],
    u: CPoint,
    ctl: Optional[SeriesControl] = None,
    inner_ctl: Optional[SeriesControl] = None,
    nodes: int = 64,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
) -> IdentityReport:
    """
    Two-₁F₂ combination at ⟨u∘Σw⟩²/4 against the multiple Laguerre series with β_L = β.

    The route_residual channel compares the ₁F₂ combination with the Φ₁
    integral at x = −1 (scaled by Γ(α)/Γ(α−β+1)); it is omitted when
    Re(α) ≤ 0.

    Args:
        betas: [β₁, …, β_L] with β_L = β
    """
    function = "cor5_split"
    started = time.perf_counter()
    alpha = complex(alpha)
    beta = complex(beta)
    _, w_total = _unit_sum_setup(function, alpha, betas, w_list, u)
    if abs(complex(betas[-1]) - beta) > UNIT_SUM_TOL:
        raise DomainError(function, "β_L = β required", f"β_L = {betas[-1]}, β = {beta}")
    if not beta.real < 1:
        raise DomainError(function, "Re(β) < 1 required", f"β = {beta}")
    _require_off_pole(function, "α−β+1", alpha - beta + 1)
    shifts = _level_shifts(function, beta, betas, require_off_pole=False)

    y_total = u.hadamard(w_total).angle()
    gamma_ratio = cmath.exp(log_gamma(alpha) - log_gamma(alpha - beta + 1))
    lhs = gamma_ratio * phi1_neg1_split(alpha, beta, -y_total, _inner(inner_ctl))

    channels = {}
    notes = ""
    if alpha.real > 0:
        route = gamma_ratio * humbert_phi1_integral(Phi1Params(alpha, beta, alpha - beta + 1), -1.0, -y_total, nodes=nodes)
        channels["route_residual"] = abs(lhs - route) / max(abs(lhs), abs(route), 1e-300)
    else:
        notes = "integral route skipped: Re(α) ≤ 0"

    levels = [LaguerreLevel(shift, u, w) for shift, w in zip(shifts, w_list)]
    series = sum_weighted_levels(
        function,
        LevelConvolution(levels),
        lambda s: _half_gamma_weight(alpha, beta, s),
        _outer(ctl),
        max_index_count,
    )
    return IdentityReport.build(function, lhs, series.value, series, started, channels, notes)
