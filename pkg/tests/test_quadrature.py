"""Tests for the Gauss rules."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add scripts/src to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "scripts" / "src"))

from errors import BudgetExceededError, DomainError  # noqa: E402
from quadrature import (  # noqa: E402
    RuleKind,
    beta_rule,
    box_rule,
    cosine_power_rule,
    legendre_01_rule,
    semi_infinite_rule,
)


class TestOneDimensionalRules:
    """Exactness of the one-dimensional rules on known moments."""

    def test_legendre_cubic(self):
        rule = legendre_01_rule(4)
        assert rule.kind is RuleKind.LEGENDRE_01
        assert rule.integrate(lambda t: t**3).real == pytest.approx(0.25, rel=1e-14)

    def test_beta_rule_is_normalized(self):
        rule = beta_rule(2.0, 3.0, 10)
        assert rule.total_weight() == pytest.approx(1.0, rel=1e-14)
        # mean of Beta(2, 3)
        assert rule.integrate(lambda t: t).real == pytest.approx(0.4, rel=1e-13)

    def test_beta_rule_rejects_nonpositive_exponent(self):
        with pytest.raises(DomainError):
            beta_rule(0.0, 1.0, 10)

    def test_semi_infinite_moment(self):
        rule = semi_infinite_rule(2.0, 20, exponent=0.5)
        expected = math.gamma(1.5) / 2.0**1.5
        assert rule.total_weight() == pytest.approx(expected, rel=1e-12)
        assert rule.param("decay") == 2.0

    def test_semi_infinite_exponential_integrand(self):
        # ∫ e^{-s} e^{-s} ds = 1/2
        rule = semi_infinite_rule(1.0, 40)
        assert rule.integrate(lambda s: np.exp(-s)).real == pytest.approx(0.5, rel=1e-12)

    def test_semi_infinite_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            semi_infinite_rule(0.0, 20)
        with pytest.raises(DomainError):
            semi_infinite_rule(1.0, 20, exponent=-1.0)

    def test_cosine_power_square(self):
        rule = cosine_power_rule(2.0, 20)
        assert rule.total_weight() == pytest.approx(math.pi / 2, rel=1e-13)

    def test_cosine_power_fractional(self):
        # ∫ cos^{1/2} θ dθ over (−π/2, π/2) = √π Γ(3/4)/Γ(5/4)
        rule = cosine_power_rule(0.5, 30)
        expected = math.sqrt(math.pi) * math.gamma(0.75) / math.gamma(1.25)
        assert rule.total_weight() == pytest.approx(expected, rel=1e-12)

    def test_rules_are_immutable(self):
        rule = legendre_01_rule(4)
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0


class TestBoxRule:
    """Tensor rule on [−π/2, π/2]^dim."""

    def test_volume(self):
        rule = box_rule(2, 8)
        assert rule.size == 64
        assert rule.dim == 2
        assert rule.total_weight() == pytest.approx(math.pi**2, rel=1e-13)

    def test_theta_weight(self):
        rule = box_rule(2, 12, theta_power=2.0)
        assert rule.total_weight() == pytest.approx(math.pi / 2 * math.pi, rel=1e-13)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            box_rule(3, 20, max_nodes=1000)

    def test_dimension(self):
        with pytest.raises(DomainError):
            box_rule(1, 8)

    def test_chunked_evaluation_is_worker_independent(self):
        rule = box_rule(3, 10)

        def integrand(nodes):
            return np.exp(1j * nodes[:, 0]) * np.cos(nodes[:, 1]) * np.cos(nodes[:, 2]) ** 2

        sequential = rule.integrate(integrand, jobs=1, chunk=37)
        threaded = rule.integrate(integrand, jobs=4, chunk=37)
        assert sequential == threaded
