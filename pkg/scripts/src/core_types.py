"""
Core Types - Multi-index algebra, complex vectors and series control

This module provides the substrate every evaluator is written in: multi-indices
n = (n_1, ..., n_k) with ⟨n⟩ and n!, complex vectors with the Hadamard
operations, Pochhammer symbols, complex log-gamma, graded enumeration of
multi-indices and the shell-by-shell summation engine with its tail-window
convergence test.
"""

import cmath
import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np
import scipy.special as sc

from errors import BudgetExceededError, DomainError, NonConvergenceError, PoleError

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12

# Largest factorial product still representable as a float
FACTORIAL_LIMIT = 1e300


def is_nonpositive_integer(z: complex, tol: float = POLE_TOL) -> bool:
    """True when z lies within tol of 0, -1, -2, ..."""
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def csum(values: Iterable[complex]) -> complex:
    """Compensated complex sum (exact-rounded fsum on each component)."""
    re_parts = []
    im_parts = []
    for v in values:
        v = complex(v)
        re_parts.append(v.real)
        im_parts.append(v.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def csum_array(values: np.ndarray) -> complex:
    """Compensated sum of a numpy array of complex values."""
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


@dataclass(frozen=True)
class MultiIndex:
    """
    A k-tuple of nonnegative integers.

    Usage:
        n = MultiIndex.of(2, 1)
        n.total()      # 3
        n.factorial()  # 2
    """

    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise DomainError("MultiIndex", "dimension k must be at least 1")
        if any(e < 0 for e in entries):
            raise DomainError("MultiIndex", "entries must be nonnegative", str(entries))
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int) -> "MultiIndex":
        return cls(tuple(entries))

    @classmethod
    def zeros(cls, k: int) -> "MultiIndex":
        return cls((0,) * k)

    @classmethod
    def diagonal(cls, k: int, n: int) -> "MultiIndex":
        return cls((n,) * k)

    @property
    def k(self) -> int:
        return len(self.entries)

    def total(self) -> int:
        return sum(self.entries)

    def factorial(self) -> int:
        return math.prod(math.factorial(e) for e in self.entries)

    def factorial_float(self) -> float:
        """n! as a float; rejected once it no longer fits."""
        value = self.factorial()
        if value > FACTORIAL_LIMIT:
            raise DomainError("MultiIndex.factorial", "factorial overflows double precision", str(self.entries))
        return float(value)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        _require_same_k("MultiIndex.add", self.k, other.k)
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        _require_same_k("MultiIndex.sub", self.k, other.k)
        return MultiIndex(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __le__(self, other: "MultiIndex") -> bool:
        """Componentwise order (j ≤ n)."""
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def box(self) -> Iterator["MultiIndex"]:
        """All j with 0 ≤ j ≤ n componentwise."""
        for entries in product(*(range(e + 1) for e in self.entries)):
            yield MultiIndex(entries)


@dataclass(frozen=True)
class CPoint:
    """
    A k-tuple of complex scalars (x, y, u, w or σ vectors).

    Usage:
        x = CPoint.of(0.4, -0.3)
        x.angle()                    # ⟨x⟩
        x.hadamard(y)                # x∘y
        x.power(MultiIndex.of(2, 1)) # x^n
    """

    entries: Tuple[complex, ...]

    def __post_init__(self):
        entries = tuple(complex(v) for v in self.entries)
        if not entries:
            raise DomainError("CPoint", "dimension k must be at least 1")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: complex) -> "CPoint":
        return cls(tuple(entries))

    @classmethod
    def zeros(cls, k: int) -> "CPoint":
        return cls((0j,) * k)

    @classmethod
    def ones(cls, k: int) -> "CPoint":
        return cls((1 + 0j,) * k)

    @property
    def k(self) -> int:
        return len(self.entries)

    def angle(self) -> complex:
        """⟨x⟩ = x_1 + ... + x_k."""
        return csum(self.entries)

    def l1_norm(self) -> float:
        return math.fsum(abs(v) for v in self.entries)

    def hadamard(self, other: "CPoint") -> "CPoint":
        _require_same_k("CPoint.hadamard", self.k, other.k)
        return CPoint(tuple(a * b for a, b in zip(self.entries, other.entries)))

    def quotient(self, other: "CPoint") -> "CPoint":
        _require_same_k("CPoint.quotient", self.k, other.k)
        if any(b == 0 for b in other.entries):
            raise DomainError("CPoint.quotient", "denominator has a zero component", str(other.entries))
        return CPoint(tuple(a / b for a, b in zip(self.entries, other.entries)))

    def power(self, n: MultiIndex) -> complex:
        """x^n = Π x_i^{n_i} with 0^0 = 1."""
        _require_same_k("CPoint.power", self.k, n.k)
        value = 1 + 0j
        for x_i, n_i in zip(self.entries, n.entries):
            if n_i:
                value *= x_i**n_i
        return value

    def scale(self, c: complex) -> "CPoint":
        return CPoint(tuple(c * v for v in self.entries))

    def __add__(self, other: "CPoint") -> "CPoint":
        _require_same_k("CPoint.add", self.k, other.k)
        return CPoint(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "CPoint") -> "CPoint":
        _require_same_k("CPoint.sub", self.k, other.k)
        return CPoint(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "CPoint":
        return CPoint(tuple(-v for v in self.entries))

    def __iter__(self) -> Iterator[complex]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> complex:
        return self.entries[i]

    def permuted(self, order: Sequence[int]) -> "CPoint":
        return CPoint(tuple(self.entries[i] for i in order))


def _require_same_k(function: str, k1: int, k2: int):
    if k1 != k2:
        raise DomainError(function, "dimension mismatch", f"{k1} != {k2}")


@dataclass(frozen=True)
class SeriesControl:
    """
    Truncation and tolerance policy for infinite series.

    A series is declared converged when tail_window consecutive graded shells
    each contribute less than rel_tol times the running magnitude.
    """

    max_total_order: int = 60
    rel_tol: float = 1e-15
    tail_window: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("SeriesControl", "rel_tol must be positive", str(self.rel_tol))
        if self.tail_window < 2:
            raise DomainError("SeriesControl", "tail_window must be at least 2", str(self.tail_window))
        if self.max_total_order < self.tail_window:
            raise DomainError(
                "SeriesControl",
                "max_total_order must be at least tail_window",
                f"{self.max_total_order} < {self.tail_window}",
            )

    def with_overrides(self, **overrides) -> "SeriesControl":
        values = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **values)

    @classmethod
    def from_dict(cls, data: Optional[Dict], base: Optional["SeriesControl"] = None) -> "SeriesControl":
        base = base or cls()
        if not data:
            return base
        unknown = set(data) - {"max_total_order", "rel_tol", "tail_window"}
        if unknown:
            raise DomainError("SeriesControl", "unknown fields", ", ".join(sorted(unknown)))
        return base.with_overrides(
            max_total_order=int(data["max_total_order"]) if "max_total_order" in data else None,
            rel_tol=float(data["rel_tol"]) if "rel_tol" in data else None,
            tail_window=int(data["tail_window"]) if "tail_window" in data else None,
        )

    def to_dict(self) -> Dict:
        return {"max_total_order": self.max_total_order, "rel_tol": self.rel_tol, "tail_window": self.tail_window}


# Scalar special functions get a generous budget; identity series use the config values
DEFAULT_SERIES = SeriesControl(max_total_order=400, rel_tol=1e-16, tail_window=3)


@dataclass(frozen=True)
class SeriesSum:
    """Value of a shell-summed series with its truncation metadata."""

    value: complex
    shells_used: int
    converged: bool

    @property
    def truncation_order(self) -> int:
        return self.shells_used - 1


def sum_shells(shells: Iterable[complex], ctl: SeriesControl) -> SeriesSum:
    """
    Sum graded shells s = 0, 1, ... up to ctl.max_total_order.

    A finite iterable that ends before the budget is an exact (terminating)
    series and is reported converged.
    """
    values = []
    running = 0j
    small_run = 0
    iterator = iter(shells)
    for _ in range(ctl.max_total_order + 1):
        try:
            shell = complex(next(iterator))
        except StopIteration:
            return SeriesSum(csum(values), len(values), True)
        values.append(shell)
        running += shell
        if abs(shell) <= ctl.rel_tol * abs(running):
            small_run += 1
        else:
            small_run = 0
        if small_run >= ctl.tail_window:
            return SeriesSum(csum(values), len(values), True)

    logger.debug(f"Series budget exhausted after {len(values)} shells (|last| = {abs(values[-1]):.3e})")
    return SeriesSum(csum(values), len(values), False)


def pochhammer(a: complex, m: int) -> complex:
    """Rising factorial (a)_m = a(a+1)...(a+m-1), computed as a product."""
    a = complex(a)
    if m < 0:
        raise DomainError("pochhammer", "order must be nonnegative", str(m))
    if is_nonpositive_integer(a) and -round(a.real) < m:
        return 0j
    value = 1 + 0j
    for j in range(m):
        value *= a + j
    return value


def pochhammer_ratio(a: complex, c: complex, m: int) -> complex:
    """(a)_m / (c)_m factor by factor."""
    a = complex(a)
    c = complex(c)
    if is_nonpositive_integer(c) and -round(c.real) < m:
        raise PoleError("pochhammer_ratio", f"(c)_m vanishes for c = {c}, m = {m}")
    if is_nonpositive_integer(a) and -round(a.real) < m:
        return 0j
    value = 1 + 0j
    for j in range(m):
        value *= (a + j) / (c + j)
    return value


def log_gamma(z: complex) -> complex:
    """Principal-branch log Γ(z)."""
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError("log_gamma", f"pole at z = {z}")
    return complex(sc.loggamma(z))


def reciprocal_gamma(z: complex) -> complex:
    """1/Γ(z), entire; exactly zero at the poles of Γ."""
    z = complex(z)
    if is_nonpositive_integer(z):
        return 0j
    return complex(sc.rgamma(z))


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


@lru_cache(maxsize=None)
def _compositions(k: int, s: int) -> Tuple[Tuple[int, ...], ...]:
    if k == 1:
        return ((s,),)
    result = []
    for first in range(s, -1, -1):
        for rest in _compositions(k - 1, s - first):
            result.append((first,) + rest)
    return tuple(result)


def shell_indices(k: int, s: int) -> Iterator[MultiIndex]:
    """All n with ⟨n⟩ = s in graded-lex order (first component descending)."""
    if k < 1:
        raise DomainError("shell_indices", "dimension k must be at least 1", str(k))
    for entries in _compositions(k, s):
        yield MultiIndex(entries)


def graded_enumerate(k: int, N: int) -> Iterator[MultiIndex]:
    """Every n with ⟨n⟩ ≤ N, shell by shell; C(N+k, k) indices in total."""
    for s in range(N + 1):
        yield from shell_indices(k, s)


def index_count(k: int, N: int) -> int:
    return math.comb(N + k, k)


def check_index_budget(function: str, k: int, N: int, cap: Optional[int]):
    """Raise BudgetExceededError when C(N+k, k) exceeds cap."""
    if cap is None:
        return
    count = index_count(k, N)
    if count > cap:
        raise BudgetExceededError(function, count, cap)


def diagonal_collapse(
    f: Callable[[int], complex], x: CPoint, N: int, ctl: Optional[SeriesControl] = None
) -> complex:
    """
    Σ_{n=0}^{N} f(n) ⟨x⟩^n / n!.

    The collapsed side of Σ_n f(⟨n⟩) x^n/n! = Σ_n f(n) ⟨x⟩^n/n!. Without ctl
    the partial sum is returned as is, which makes both sides agree exactly
    at every N. With ctl the last shells must also pass the tail test; a sum
    shorter than ctl.tail_window is exact and skips it.

    Raises:
        DomainError: If N is negative
        NonConvergenceError: If the tail test fails at N
    """
    if N < 0:
        raise DomainError("diagonal_collapse", "order must be nonnegative", str(N))
    angle = x.angle()
    terms = []
    power = 1 + 0j
    for n in range(N + 1):
        if n:
            power *= angle / n
        terms.append(complex(f(n)) * power)

    if ctl is None or N < ctl.tail_window:
        return csum(terms)
    result = sum_shells(terms, ctl.with_overrides(max_total_order=N))
    if not result.converged:
        raise NonConvergenceError("diagonal_collapse", "tail test failed", f"N = {N}", result.shells_used)
    return result.value


class TruncatedSeries:
    """
    Multivariate power series in z_1..z_k truncated at total degree N.

    Coefficients are held in a dict keyed by exponent tuples; products drop
    every term above the truncation degree.
    """

    def __init__(self, k: int, order: int, coeffs: Optional[Dict[Tuple[int, ...], complex]] = None):
        self.k = k
        self.order = order
        self.coeffs: Dict[Tuple[int, ...], complex] = {}
        for key, value in (coeffs or {}).items():
            if sum(key) <= order and value != 0:
                self.coeffs[key] = complex(value)

    @classmethod
    def constant(cls, k: int, order: int, value: complex) -> "TruncatedSeries":
        return cls(k, order, {(0,) * k: value})

    @classmethod
    def linear(cls, k: int, order: int, weights: Sequence[complex]) -> "TruncatedSeries":
        """Σ w_i z_i."""
        coeffs = {}
        for i, w in enumerate(weights):
            key = tuple(1 if j == i else 0 for j in range(k))
            coeffs[key] = w
        return cls(k, order, coeffs)

    def coefficient(self, exponent: Sequence[int]) -> complex:
        return self.coeffs.get(tuple(exponent), 0j)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        result = dict(self.coeffs)
        for key, value in other.coeffs.items():
            result[key] = result.get(key, 0j) + value
        return TruncatedSeries(self.k, self.order, result)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        result: Dict[Tuple[int, ...], complex] = {}
        for key_a, a in self.coeffs.items():
            degree_a = sum(key_a)
            for key_b, b in other.coeffs.items():
                if degree_a + sum(key_b) > self.order:
                    continue
                key = tuple(i + j for i, j in zip(key_a, key_b))
                result[key] = result.get(key, 0j) + a * b
        return TruncatedSeries(self.k, self.order, result)

    def scale(self, c: complex) -> "TruncatedSeries":
        return TruncatedSeries(self.k, self.order, {key: c * v for key, v in self.coeffs.items()})

    def compose(self, outer: Sequence[complex]) -> "TruncatedSeries":
        """
        Σ_m outer[m] · self^m for a series with zero constant term.

        Only the first order+1 outer coefficients can contribute.
        """
        if self.coefficient((0,) * self.k) != 0:
            raise DomainError("TruncatedSeries.compose", "inner series must have zero constant term")
        result = TruncatedSeries.constant(self.k, self.order, outer[0] if outer else 0)
        power = TruncatedSeries.constant(self.k, self.order, 1)
        for m in range(1, min(len(outer), self.order + 1)):
            power = power * self
            result = result + power.scale(outer[m])
        return result
