"""Tests for multi-indices, complex vectors and the shell summation engine."""

import cmath
import math
import sys
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

# Add scripts/src to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "scripts" / "src"))

from core_types import (  # noqa: E402
    CPoint,
    MultiIndex,
    SeriesControl,
    TruncatedSeries,
    check_index_budget,
    csum,
    diagonal_collapse,
    graded_enumerate,
    index_count,
    is_nonpositive_integer,
    log_gamma,
    pochhammer,
    pochhammer_ratio,
    reciprocal_gamma,
    shell_indices,
    sum_shells,
)
from errors import BudgetExceededError, DomainError, NonConvergenceError, PoleError  # noqa: E402


class TestMultiIndex:
    """Multi-index algebra."""

    def test_total_and_factorial(self):
        n = MultiIndex.of(2, 1, 3)
        assert n.k == 3
        assert n.total() == 6
        assert n.factorial() == 2 * 1 * 6

    def test_negative_entry_rejected(self):
        with pytest.raises(DomainError):
            MultiIndex.of(1, -1)

    def test_empty_index_rejected(self):
        with pytest.raises(DomainError):
            MultiIndex(())

    def test_box_enumerates_componentwise_lower_indices(self):
        box = list(MultiIndex.of(2, 1).box())
        assert len(box) == 6
        assert all(j <= MultiIndex.of(2, 1) for j in box)

    def test_add_requires_same_dimension(self):
        with pytest.raises(DomainError, match="dimension mismatch"):
            MultiIndex.of(1, 2) + MultiIndex.of(1)

    def test_factorial_float_overflow(self):
        with pytest.raises(DomainError, match="overflows"):
            MultiIndex.of(200).factorial_float()


class TestCPoint:
    """Complex vectors and Hadamard operations."""

    def test_angle_and_hadamard(self):
        x = CPoint.of(1, 2, 3)
        y = CPoint.of(0.5, -1, 2j)
        assert x.angle() == 6
        assert x.hadamard(y).entries == (0.5, -2, 6j)

    def test_power_uses_zero_to_the_zero_as_one(self):
        x = CPoint.of(0, 2)
        assert x.power(MultiIndex.of(0, 3)) == 8
        assert x.power(MultiIndex.of(1, 0)) == 0

    def test_quotient_rejects_zero_component(self):
        with pytest.raises(DomainError):
            CPoint.of(1, 1).quotient(CPoint.of(1, 0))

    def test_l1_norm(self):
        assert CPoint.of(0.3, -0.4j).l1_norm() == pytest.approx(0.7)


class TestPoles:
    """Pole detection, Pochhammer symbols and Gamma."""

    def test_is_nonpositive_integer(self):
        assert is_nonpositive_integer(0)
        assert is_nonpositive_integer(-3 + 0j)
        assert not is_nonpositive_integer(1)
        assert not is_nonpositive_integer(-2.5)
        assert not is_nonpositive_integer(-2 + 1e-6j)

    def test_pochhammer_values(self):
        assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
        assert pochhammer(1, 5) == 120
        assert pochhammer(-2, 5) == 0

    @settings(max_examples=50, deadline=None)
    @given(
        re=st.floats(min_value=-10.0, max_value=10.0),
        im=st.floats(min_value=-10.0, max_value=10.0),
        m=st.integers(min_value=0, max_value=50),
    )
    def test_pochhammer_recurrence(self, re, im, m):
        a = complex(re, im)
        assume(not is_nonpositive_integer(a))
        expected = pochhammer(a, m) * (a + m)
        assert abs(pochhammer(a, m + 1) - expected) <= 1e-13 * abs(expected)

    @settings(max_examples=50, deadline=None)
    @given(re=st.floats(min_value=0.05, max_value=35.0), im=st.floats(min_value=-35.0, max_value=35.0))
    def test_log_gamma_recurrence(self, re, im):
        z = complex(re, im)
        expected = z * cmath.exp(log_gamma(z))
        assert abs(cmath.exp(log_gamma(z + 1)) - expected) <= 1e-12 * abs(expected)

    @settings(max_examples=40, deadline=None)
    @given(
        m=st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=3).filter(lambda m: sum(m) <= 6),
        lam=st.lists(st.floats(min_value=-3.0, max_value=3.0), min_size=4, max_size=4),
    )
    def test_vandermonde_convolution(self, m, lam):
        m = MultiIndex(tuple(m))
        lam1, lam2 = complex(lam[0], lam[1]), complex(lam[2], lam[3])
        terms = [
            pochhammer(lam1, p.total()) * pochhammer(lam2, m.total() - p.total()) / (p.factorial() * (m - p).factorial())
            for p in m.box()
        ]
        expected = pochhammer(lam1 + lam2, m.total()) / m.factorial()
        scale = max(abs(expected), math.fsum(abs(t) for t in terms), 1e-300)
        assert abs(csum(terms) - expected) <= 1e-12 * scale

    def test_pochhammer_ratio_pole(self):
        with pytest.raises(PoleError):
            pochhammer_ratio(1.0, -1.0, 3)

    def test_pochhammer_ratio_below_pole_is_finite(self):
        assert pochhammer_ratio(2.0, -2.0, 2) == pytest.approx((2 * 3) / ((-2) * (-1)))

    def test_log_gamma(self):
        assert log_gamma(5).real == pytest.approx(math.log(24))
        with pytest.raises(PoleError):
            log_gamma(-1)

    def test_reciprocal_gamma_vanishes_at_poles(self):
        assert reciprocal_gamma(-2) == 0
        assert reciprocal_gamma(4) == pytest.approx(1 / 6)


class TestEnumeration:
    """Graded enumeration of multi-indices."""

    def test_shell_order(self):
        assert [n.entries for n in shell_indices(2, 2)] == [(2, 0), (1, 1), (0, 2)]

    @settings(max_examples=30, deadline=None)
    @given(k=st.integers(min_value=1, max_value=4), N=st.integers(min_value=0, max_value=8))
    def test_count_matches_binomial(self, k, N):
        indices = list(graded_enumerate(k, N))
        assert len(indices) == index_count(k, N) == math.comb(N + k, k)
        assert len(set(indices)) == len(indices)

    def test_budget(self):
        check_index_budget("test", 2, 10, 66)
        with pytest.raises(BudgetExceededError) as excinfo:
            check_index_budget("test", 2, 10, 65)
        assert excinfo.value.requested == 66
        assert excinfo.value.cap == 65


class TestSeriesControl:
    """Validation and overrides of the truncation policy."""

    def test_tail_window_minimum(self):
        with pytest.raises(DomainError):
            SeriesControl(max_total_order=10, rel_tol=1e-12, tail_window=1)

    def test_order_below_window(self):
        with pytest.raises(DomainError):
            SeriesControl(max_total_order=2, rel_tol=1e-12, tail_window=3)

    def test_from_dict_overrides_base(self):
        base = SeriesControl(max_total_order=45, rel_tol=1e-13, tail_window=3)
        ctl = SeriesControl.from_dict({"max_total_order": 200}, base)
        assert ctl == SeriesControl(max_total_order=200, rel_tol=1e-13, tail_window=3)
        assert SeriesControl.from_dict(None, base) is base

    def test_from_dict_unknown_field(self):
        with pytest.raises(DomainError, match="unknown fields"):
            SeriesControl.from_dict({"order": 3})


class TestSumShells:
    """Tail-window convergence."""

    def test_geometric_series(self):
        result = sum_shells((0.5**s for s in range(1000)), SeriesControl(100, 1e-15, 3))
        assert result.converged
        assert result.value == pytest.approx(2.0, rel=1e-14)
        assert result.truncation_order == result.shells_used - 1

    def test_finite_iterable_is_exact(self):
        result = sum_shells([1, 2, 3], SeriesControl(100, 1e-15, 3))
        assert result.converged
        assert result.value == 6
        assert result.shells_used == 3

    def test_budget_exhausted(self):
        result = sum_shells((1.0 for _ in range(1000)), SeriesControl(20, 1e-15, 3))
        assert not result.converged
        assert result.shells_used == 21

    def test_compensated_sum(self):
        assert csum([1e16, 1.0, -1e16]) == 1.0


class TestTruncatedSeries:
    """Truncated multivariate power series."""

    def test_square_of_linear_form(self):
        s = TruncatedSeries.linear(2, 4, [1, 1])
        square = s * s
        assert square.coefficient((1, 1)) == 2
        assert square.coefficient((2, 0)) == 1

    def test_truncation_drops_high_degrees(self):
        s = TruncatedSeries.linear(2, 1, [1, 1])
        assert (s * s).coeffs == {}

    def test_diagonal_of_geometric_series_is_central_binomial(self):
        total = TruncatedSeries.linear(2, 10, [1, 1])
        expansion = total.compose([1] * 11)
        assert [expansion.coefficient((n, n)) for n in range(6)] == [math.comb(2 * n, n) for n in range(6)]

    def test_compose_needs_zero_constant_term(self):
        with pytest.raises(DomainError):
            TruncatedSeries.constant(1, 3, 1).compose([1, 1])


class TestDiagonalCollapse:
    """Σ f(n)⟨x⟩ⁿ/n!."""

    def test_exponential(self):
        x = CPoint.of(0.2, 0.3)
        assert diagonal_collapse(lambda n: 1.0, x, 40) == pytest.approx(math.exp(0.5), rel=1e-14)

    def test_zero_angle_leaves_constant_term(self):
        x = CPoint.of(0.3, -0.3)
        assert diagonal_collapse(lambda n: 1.0, x, 1) == 1
        assert diagonal_collapse(lambda n: 1.0, x, 1, SeriesControl()) == 1
        assert diagonal_collapse(lambda n: 1.0, CPoint.of(0.0, 0.0), 20, SeriesControl()) == 1

    def test_binomial_series(self):
        # Σ (2)_n tⁿ/n! = (1−t)^{−2} at t = ⟨x⟩ = 0.1
        value = diagonal_collapse(lambda n: pochhammer(2, n), CPoint.of(0.05, 0.05), 60, SeriesControl())
        assert value == pytest.approx(1 / 0.81, rel=1e-14)

    def test_tail_test_failure(self):
        with pytest.raises(NonConvergenceError):
            diagonal_collapse(lambda n: pochhammer(2, n), CPoint.of(0.5, 0.4), 10, SeriesControl())

    def test_negative_order(self):
        with pytest.raises(DomainError):
            diagonal_collapse(lambda n: 1.0, CPoint.of(0.1), -1)

    @settings(max_examples=30, deadline=None)
    @given(
        k=st.integers(min_value=1, max_value=3),
        N=st.integers(min_value=0, max_value=8),
        a=st.floats(min_value=-2.0, max_value=3.0),
        coords=st.lists(st.floats(min_value=-0.8, max_value=0.8), min_size=3, max_size=3),
    )
    def test_brute_force_over_graded_indices(self, k, N, a, coords):
        x = CPoint.of(*coords[:k])
        f = lambda n: pochhammer(complex(a, 0.5), n)  # noqa: E731
        terms = [f(n.total()) * x.power(n) / n.factorial() for n in graded_enumerate(k, N)]
        scale = max(math.fsum(abs(t) for t in terms), 1e-300)
        assert abs(csum(terms) - diagonal_collapse(f, x, N)) <= 1e-12 * scale
