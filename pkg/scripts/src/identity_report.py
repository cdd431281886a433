"""
Identity Report - Verification results and the shared multi-level series engine

This module provides IdentityReport, the unit every identity evaluator
returns, and LevelConvolution, which sums products of shifted Laguerre
factors over L independent multi-indices shell by shell.

For levels r = 1..L with factor A_r(t) = Σ_{⟨n⟩=t} scale_r^n L_n^{(shift_r − t)}(point_r),
the combined shell is

    C(s) = Σ_{t_1+...+t_L = s} A_1(t_1) ... A_L(t_L)

so an L-fold multiple series whose remaining weight depends only on s is
Σ_s weight(s) C(s).
"""

import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence

from core_types import (
    CPoint,
    SeriesControl,
    SeriesSum,
    check_index_budget,
    csum,
    shell_indices,
    sum_shells,
)
from errors import DomainError
from laguerre import laguerre_multi

logger = logging.getLogger(__name__)

# Outer series defaults when no configuration is supplied
IDENTITY_SERIES = SeriesControl(max_total_order=45, rel_tol=1e-13, tail_window=3)
DEFAULT_MAX_INDEX_COUNT = 10_000_000

REPORT_FIELDS = (
    "identity_id",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "truncation_order",
    "shells_used",
    "converged",
    "wall_time_s",
    "channels",
    "notes",
)


def _complex_record(z: complex) -> Dict[str, float]:
    return {"re": z.real, "im": z.imag}


@dataclass
class IdentityReport:
    """
    Both sides of one identity, evaluated independently, with residuals.

    rel_residual = abs_residual / max(|lhs|, |rhs|, 1e-300). converged is True
    only when the outer series met its tail-window test (or is finite).
    """

    identity_id: str
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    truncation_order: int
    shells_used: int
    converged: bool
    wall_time: float
    channels: Dict[str, float] = field(default_factory=dict)
    notes: str = ""

    @classmethod
    def build(
        cls,
        identity_id: str,
        lhs: complex,
        rhs: complex,
        series: Optional[SeriesSum],
        started: float,
        channels: Optional[Dict[str, float]] = None,
        notes: str = "",
    ) -> "IdentityReport":
        """
        Assemble a report; series is None for closed-form or quadrature sides.

        Args:
            started: time.perf_counter() value taken before evaluation
        """
        lhs = complex(lhs)
        rhs = complex(rhs)
        abs_residual = abs(lhs - rhs)
        rel_residual = abs_residual / max(abs(lhs), abs(rhs), 1e-300)
        shells_used = series.shells_used if series is not None else 0
        converged = series.converged if series is not None else True
        report = cls(
            identity_id=identity_id,
            lhs=lhs,
            rhs=rhs,
            abs_residual=abs_residual,
            rel_residual=rel_residual,
            truncation_order=max(shells_used - 1, 0),
            shells_used=shells_used,
            converged=converged,
            wall_time=time.perf_counter() - started,
            channels=dict(channels or {}),
            notes=notes,
        )
        logger.debug(
            f"{identity_id}: rel_residual={rel_residual:.3e}, shells={shells_used}, converged={converged}"
        )
        return report

    def worst_residual(self) -> float:
        """Largest of rel_residual and every secondary channel."""
        return max([self.rel_residual] + [value for value in self.channels.values() if not math.isnan(value)])

    def passed(self, threshold: float) -> bool:
        return self.converged and self.worst_residual() <= threshold

    def to_dict(self) -> Dict:
        return {
            "identity_id": self.identity_id,
            "lhs": _complex_record(self.lhs),
            "rhs": _complex_record(self.rhs),
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "truncation_order": self.truncation_order,
            "shells_used": self.shells_used,
            "converged": self.converged,
            "wall_time_s": self.wall_time,
            "channels": dict(self.channels),
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "IdentityReport":
        return cls(
            identity_id=data["identity_id"],
            lhs=complex(data["lhs"]["re"], data["lhs"]["im"]),
            rhs=complex(data["rhs"]["re"], data["rhs"]["im"]),
            abs_residual=float(data["abs_residual"]),
            rel_residual=float(data["rel_residual"]),
            truncation_order=int(data["truncation_order"]),
            shells_used=int(data.get("shells_used", 0)),
            converged=bool(data["converged"]),
            wall_time=float(data.get("wall_time_s", 0.0)),
            channels=dict(data.get("channels", {})),
            notes=data.get("notes", ""),
        )

    def save(self, output_path: str):
        output_file = Path(output_path)
        output_file.parent.mkdir(parents=True, exist_ok=True)
        with open(output_file, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)

    def format_block(self, threshold: Optional[float] = None) -> str:
        """Human-readable report printed by the check subcommand."""
        lines = [
            f"identity:         {self.identity_id}",
            f"lhs:              {format_complex(self.lhs)}",
            f"rhs:              {format_complex(self.rhs)}",
            f"abs_residual:     {self.abs_residual:.3e}",
            f"rel_residual:     {self.rel_residual:.3e}",
            f"truncation_order: {self.truncation_order}",
            f"converged:        {self.converged}",
            f"wall_time:        {self.wall_time:.3f}s",
        ]
        for name, value in sorted(self.channels.items()):
            lines.append(f"{name + ':':<18}{value:.3e}")
        if self.notes:
            lines.append(f"notes:            {self.notes}")
        if threshold is not None:
            verdict = "PASS" if self.passed(threshold) else "FAIL"
            lines.append(f"result:           {verdict} (threshold {threshold:.1e})")
        return "\n".join(lines)


def format_complex(z: complex) -> str:
    """'re±im i' with 15 significant digits."""
    z = complex(z)
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real:.15g}{sign}{abs(z.imag):.15g}i"


@dataclass(frozen=True)
class LaguerreLevel:
    """
    One level of a multi-level expansion: Σ_{⟨n⟩=t} scale^n L_n^{(shift − t)}(point).
    """

    shift: complex
    scale: CPoint
    point: CPoint

    def __post_init__(self):
        object.__setattr__(self, "shift", complex(self.shift))
        if self.scale.k != self.point.k:
            raise DomainError("LaguerreLevel", "scale and point dimensions differ", f"{self.scale.k} != {self.point.k}")

    @property
    def k(self) -> int:
        return self.point.k

    def shell(self, t: int) -> complex:
        alpha = self.shift - t
        return csum(self.scale.power(n) * laguerre_multi(n, alpha, self.point) for n in shell_indices(self.k, t))


class LevelConvolution:
    """
    Lazily computed shells C(s) of a product of L level series.

    Level shells are cached, so extending s costs one new shell per level plus
    the convolution.
    """

    def __init__(self, levels: Sequence[LaguerreLevel]):
        if not levels:
            raise DomainError("LevelConvolution", "at least one level is required")
        self.levels: List[LaguerreLevel] = list(levels)
        self._level_shells: List[List[complex]] = [[] for _ in self.levels]
        self._partial: Dict[tuple, complex] = {}

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level_shell(self, r: int, t: int) -> complex:
        cached = self._level_shells[r]
        while len(cached) <= t:
            cached.append(self.levels[r].shell(len(cached)))
        return cached[t]

    def _tail(self, r: int, s: int) -> complex:
        """Convolution of levels r..L-1 at total order s."""
        if r == self.depth - 1:
            return self.level_shell(r, s)
        key = (r, s)
        if key not in self._partial:
            self._partial[key] = csum(self.level_shell(r, t) * self._tail(r + 1, s - t) for t in range(s + 1))
        return self._partial[key]

    def shell(self, s: int) -> complex:
        return self._tail(0, s)

    def shells(self, limit: Optional[int] = None) -> Iterator[complex]:
        s = 0
        while limit is None or s <= limit:
            yield self.shell(s)
            s += 1


def sum_weighted_levels(
    function: str,
    convolution: LevelConvolution,
    weight: Callable[[int], complex],
    ctl: SeriesControl,
    max_index_count: Optional[int] = DEFAULT_MAX_INDEX_COUNT,
    exact_order: Optional[int] = None,
) -> SeriesSum:
    """
    Σ_s weight(s) C(s), truncated by the global total order Σ_r⟨n⁽ʳ⁾⟩.

    Args:
        exact_order: When given the sum is finite up to this order and is
            summed in full, reported converged

    Raises:
        BudgetExceededError: If C(N+kL, kL) exceeds max_index_count
    """
    k = convolution.levels[0].k
    order = exact_order if exact_order is not None else ctl.max_total_order
    check_index_budget(function, k * convolution.depth, order, max_index_count)

    if exact_order is not None:
        values = [weight(s) * convolution.shell(s) for s in range(exact_order + 1)]
        return SeriesSum(csum(values), len(values), True)

    def weighted() -> Iterator[complex]:
        for s, shell in enumerate(convolution.shells()):
            yield weight(s) * shell

    result = sum_shells(weighted(), ctl)
    if not result.converged:
        logger.info(f"{function}: outer series not converged after {result.shells_used} shells")
    return result
