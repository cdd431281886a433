"""Tests for the series generating-function identities."""

import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add scripts/src to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "scripts" / "src"))

from core_types import CPoint, SeriesControl  # noqa: E402
from errors import BudgetExceededError, DomainError, PoleError  # noqa: E402
from identities import (  # noqa: E402
    cor1_expansion,
    cor1_theorem_parameters,
    cor2_expansion,
    cor3_addition,
    cor4_kummer,
    cor5_split,
    lemma_expansion,
    prop1_exponential,
    prop1_general,
    reduction_chain,
    theorem_multiple,
)


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


U2 = CPoint.of(0.15, 0.1)
W3 = [CPoint.of(0.3, 0.2), CPoint.of(0.1, -0.4), CPoint.of(0.5, 0.6)]
UNIT_U = CPoint.of(0.6, 0.4)


class TestProposition:
    """Φ₁ and the exponential form as negative-shift Laguerre series."""

    def test_general_form(self):
        report = prop1_general(
            1.2, 0.7, 2.3, CPoint.of(0.1, 0.15), CPoint.of(0.4, -0.3), ctl=SeriesControl(40, 1e-13, 3)
        )
        assert report.converged
        assert report.rel_residual < 1e-9
        assert report.truncation_order <= 40

    def test_exponential_form(self):
        report = prop1_exponential(2.5, CPoint.of(0.1, 0.1, 0.1), CPoint.of(1.0, 2.0, 3.0))
        assert report.converged
        assert report.rel_residual < 1e-10

    def test_exponential_form_one_variable(self):
        report = prop1_exponential(2, CPoint.of(0.3), CPoint.of(1.0))
        assert report.rel_residual < 1e-12

    def test_general_form_with_alpha_equal_gamma_is_exponential_form(self):
        u = CPoint.of(0.2, -0.1)
        x = CPoint.of(0.5, 1.5)
        general = prop1_general(1.7, 0.6, 1.7, u, x)
        exponential = prop1_exponential(0.6, u, x)
        assert rel(general.lhs, exponential.lhs) < 1e-13
        assert rel(general.rhs, exponential.rhs) < 1e-12

    def test_truncation_residual_never_grows(self):
        # all shells positive at x = 0, u < 0
        u = CPoint.of(-0.1, -0.1)
        residuals = [
            prop1_exponential(2.5, u, CPoint.zeros(2), ctl=SeriesControl(N, 1e-300, 3)).rel_residual
            for N in range(3, 31)
        ]
        assert residuals[0] > 1e-4
        for before, after in zip(residuals, residuals[1:]):
            assert after <= before or max(before, after) < 1e-12
        assert residuals[-1] < 1e-12

    def test_truncation_residual_shrinks_with_order(self):
        u, x = CPoint.of(0.1, 0.1), CPoint.of(1.0, 2.0)
        coarse = [
            prop1_exponential(2.5, u, x, ctl=SeriesControl(N, 1e-300, 3)).rel_residual for N in (4, 8, 16, 32)
        ]
        assert coarse[0] > coarse[1] > coarse[2]
        assert coarse[3] < 1e-12

    def test_u_outside_unit_ball(self):
        with pytest.raises(DomainError, match="< 1 required"):
            prop1_exponential(1.0, CPoint.of(0.6, -0.5), CPoint.of(0.0, 0.0))

    def test_beta_pole(self):
        with pytest.raises(PoleError):
            prop1_general(1.0, 2.0, 1.5, CPoint.of(0.1), CPoint.of(0.2))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            prop1_exponential(1.0, CPoint.of(0.1, 0.1), CPoint.of(0.2))

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            prop1_exponential(1.0, CPoint.of(0.1, 0.1, 0.1), CPoint.of(0, 0, 0), max_index_count=100)


class TestLemmaAndTheorem:
    """Nested-level expansions."""

    def test_lemma(self):
        report = lemma_expansion(
            0.9, 1.1, 0.4, 2.0, CPoint.of(0.3, 0.6), CPoint.of(0.2, 0.1), CPoint.of(0.5, -0.2)
        )
        assert report.converged
        assert report.rel_residual < 1e-8

    def test_theorem_with_one_level_is_lemma(self):
        args = (CPoint.of(0.2, 0.1), CPoint.of(0.5, -0.2))
        lemma = lemma_expansion(0.9, 1.1, 0.4, 2.0, CPoint.of(0.3, 0.6), *args)
        theorem = theorem_multiple(0.9, 2.0, [1.1, 0.4], [CPoint.of(0.3, 0.6)], *args)
        assert theorem.lhs == lemma.lhs
        assert theorem.rhs == lemma.rhs

    def test_reduction_chain(self):
        report = reduction_chain(
            0.9, 1.1, 0.4, 2.0, CPoint.of(0.3, 0.6), CPoint.of(0.2, 0.1), CPoint.of(0.5, -0.2)
        )
        assert report.converged
        assert report.rel_residual == 0
        assert set(report.channels) == {"lhs_residual", "prop1_residual", "exponential_residual"}
        assert report.worst_residual() < 1e-11

    def test_reduction_chain_at_integer_beta(self):
        report = reduction_chain(0.9, 2.0, 0.4, 2.0, CPoint.of(0.3), CPoint.of(0.2), CPoint.of(0.5))
        assert set(report.channels) == {"lhs_residual"}
        assert "reduction skipped" in report.notes

    def test_theorem_two_levels(self):
        report = theorem_multiple(
            0.9,
            2.0,
            [1.1, 0.4, -0.3],
            [CPoint.of(0.3, 0.6), CPoint.of(0.5, 0.2)],
            CPoint.of(0.2, 0.1),
            CPoint.of(0.5, -0.2),
        )
        assert report.converged
        assert report.rel_residual < 1e-7

    def test_theorem_with_unit_sigmas(self):
        report = theorem_multiple(
            0.9,
            2.0,
            [1.1, 0.4, -0.3],
            [CPoint.of(1, 1), CPoint.of(1, 1)],
            CPoint.of(0.2, 0.1),
            CPoint.of(0.5, -0.2),
        )
        assert report.rel_residual < 1e-7

    def test_zero_component_of_x(self):
        with pytest.raises(DomainError, match="nonzero"):
            lemma_expansion(0.9, 1.1, 0.4, 2.0, CPoint.of(0.3, 0.6), CPoint.of(0.2, 0.0), CPoint.of(0.5, -0.2))

    def test_level_shift_pole(self):
        with pytest.raises(PoleError):
            lemma_expansion(0.9, 1.4, 0.4, 2.0, CPoint.of(0.3, 0.6), CPoint.of(0.2, 0.1), CPoint.of(0.5, -0.2))

    def test_sigma_count(self):
        with pytest.raises(DomainError):
            theorem_multiple(0.9, 2.0, [1.1, 0.4, -0.3], [CPoint.of(0.3, 0.6)], CPoint.of(0.2, 0.1), CPoint.of(0.5, -0.2))


class TestWFormExpansions:
    """The w-form expansions and their reductions."""

    def test_cor1(self):
        report = cor1_expansion(0.8, 0.6, 1.9, [0.3, -0.4], W3, U2)
        assert report.converged
        assert report.rel_residual < 1e-8

    def test_cor1_substitution_into_theorem(self):
        x, y, sigmas = cor1_theorem_parameters(W3, U2)
        theorem = theorem_multiple(0.8, 1.9, [0.6, 0.3, -0.4], sigmas, x, y)
        cor1 = cor1_expansion(0.8, 0.6, 1.9, [0.3, -0.4], W3, U2)
        assert rel(theorem.lhs, cor1.lhs) < 1e-15
        assert rel(theorem.rhs, cor1.rhs) < 1e-8

    def test_cor1_tail_sum_with_zero_component(self):
        w_list = [CPoint.of(0.3, 0.2), CPoint.of(-0.5, 0.1), CPoint.of(0.2, 0.4)]
        with pytest.raises(DomainError, match="no zero component"):
            cor1_expansion(0.8, 0.6, 1.9, [0.3, -0.4], w_list, U2)

    def test_cor2(self):
        report = cor2_expansion(0.8, 0.6, 1.9, [0.3], W3[:2], U2)
        assert report.converged
        assert report.rel_residual < 1e-8

    def test_cor2_is_cor1_with_vanishing_last_level(self):
        w_list = W3[:2] + [CPoint.zeros(2)]
        cor1 = cor1_expansion(0.8, 0.6, 1.9, [0.3, 0.0], w_list, U2)
        cor2 = cor2_expansion(0.8, 0.6, 1.9, [0.3], W3[:2], U2)
        assert rel(cor1.lhs, cor2.lhs) < 1e-14
        assert rel(cor1.rhs, cor2.rhs) < 1e-12

    def test_cor2_single_level(self):
        report = cor2_expansion(0.8, 0.6, 1.9, [], [CPoint.of(0.3, 0.2)], U2)
        assert report.rel_residual < 1e-8


class TestAdditionFormula:
    """Finite addition formula on ⟨u⟩ = −1."""

    def test_exact(self):
        report = cor3_addition(3, [0.5, 1.2], CPoint.of(-0.4, -0.6), [CPoint.of(0.3, 0.7), CPoint.of(0.2, -0.5)])
        assert report.converged
        assert report.truncation_order == 3
        assert report.rel_residual < 1e-12

    def test_two_levels(self):
        report = cor3_addition(
            4,
            [0.5, 1.2, -0.3 + 0.2j],
            CPoint.of(-0.7, -0.3),
            [CPoint.of(0.3, 0.7), CPoint.of(0.2, -0.5), CPoint.of(-0.4, 0.9)],
        )
        assert report.rel_residual < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(
        m=st.integers(min_value=0, max_value=6),
        a=st.lists(st.floats(min_value=0.1, max_value=2.0), min_size=2, max_size=2),
        t=st.floats(min_value=0.1, max_value=0.9),
        w=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=4, max_size=4),
    )
    def test_random_parameters(self, m, a, t, w):
        u = CPoint.of(-t, -(1 - t))
        w_list = [CPoint.of(w[0], w[1]), CPoint.of(w[2], w[3])]
        report = cor3_addition(m, [a[0] + 0.5j, a[1] - 0.25j], u, w_list)
        assert abs(report.lhs - report.rhs) <= 1e-11 * max(1.0, abs(report.lhs))

    def test_requires_unit_sum(self):
        with pytest.raises(DomainError, match="⟨u⟩ = −1 required"):
            cor3_addition(2, [0.5, 1.2], CPoint.of(-0.4, -0.5), [CPoint.of(0.3, 0.7), CPoint.of(0.2, -0.5)])

    def test_parameter_pole(self):
        with pytest.raises(PoleError):
            cor3_addition(2, [-1.0, 1.2], CPoint.of(-0.4, -0.6), [CPoint.of(0.3, 0.7), CPoint.of(0.2, -0.5)])


class TestUnitSumReductions:
    """⟨u⟩ = 1 reductions through Kummer's value and the ₁F₂ split."""

    def test_cor4_one_level(self):
        report = cor4_kummer(1.5, -0.5, [0.5], [CPoint.of(0.3, -0.2)], UNIT_U)
        assert report.converged
        assert report.rel_residual < 1e-7

    def test_cor4_two_levels(self):
        report = cor4_kummer(1.5, -0.5, [0.2, 0.5], [CPoint.of(0.3, -0.2), CPoint.of(0.1, 0.2)], UNIT_U)
        assert report.rel_residual < 1e-7

    def test_cor4_domain(self):
        w_list = [CPoint.of(0.3, -0.2)]
        with pytest.raises(DomainError, match="⟨u⟩ = 1 required"):
            cor4_kummer(1.5, -0.5, [0.5], w_list, CPoint.of(0.5, 0.4))
        with pytest.raises(DomainError, match="Re\\(β_L\\) < 1"):
            cor4_kummer(1.5, -0.5, [1.5], w_list, UNIT_U)
        with pytest.raises(DomainError, match="Re\\(α\\) > 0"):
            cor4_kummer(-0.3, -0.5, [0.5], w_list, UNIT_U)

    def test_cor5_one_level(self):
        report = cor5_split(1.5, 0.3, [0.3], [CPoint.of(0.3, -0.2)], UNIT_U)
        assert report.converged
        assert report.rel_residual < 1e-7
        assert report.channels["route_residual"] < 1e-9

    def test_cor5_two_levels(self):
        report = cor5_split(1.5, 0.3, [-0.4, 0.3], [CPoint.of(0.3, -0.2), CPoint.of(0.2, 0.1)], UNIT_U)
        assert report.rel_residual < 1e-7
        assert report.channels["route_residual"] < 1e-9

    def test_cor5_requires_last_beta(self):
        with pytest.raises(DomainError, match="β_L = β"):
            cor5_split(1.5, 0.3, [0.2], [CPoint.of(0.3, -0.2)], UNIT_U)

    def test_cor5_route_skipped_for_nonpositive_alpha(self):
        report = cor5_split(-0.5, 0.3, [0.3], [CPoint.of(0.3, -0.2)], UNIT_U)
        assert "route_residual" not in report.channels
        assert "integral route skipped" in report.notes
