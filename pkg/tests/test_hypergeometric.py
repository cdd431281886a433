"""Tests for the scalar and multivariable hypergeometric functions."""

import cmath
import math
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import iv

# Add scripts/src to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "scripts" / "src"))

from core_types import CPoint, SeriesControl  # noqa: E402
from errors import DomainError, NonConvergenceError, PoleError  # noqa: E402
from hypergeometric import (  # noqa: E402
    LE_ROY_SWITCH,
    Phi1Params,
    bessel_i,
    humbert_phi1_integral,
    humbert_phi1_series,
    hyp1f1,
    hyp1f2,
    hyp2f1,
    kummer_value,
    lauricella_phi2k,
    le_roy,
    le_roy_scaled,
    phi1_at_unit_x,
    phi1_neg1_split,
)


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


class TestScalarSeries:
    """₁F₁, ₂F₁ and ₁F₂."""

    def test_hyp1f1_exponential(self):
        assert rel(hyp1f1(1, 1, 0.7), math.exp(0.7)) < 1e-15

    def test_hyp1f1_terminates(self):
        # ₁F₁(−2; 1; x) = L₂(x) = 1 − 2x + x²/2
        assert hyp1f1(-2, 1, 0.5) == pytest.approx(0.125, rel=1e-15)

    def test_hyp1f1_pole(self):
        with pytest.raises(PoleError):
            hyp1f1(1, -2, 0.5)

    def test_hyp1f1_budget(self):
        with pytest.raises(NonConvergenceError):
            hyp1f1(1, 1, 10.0, SeriesControl(max_total_order=5, rel_tol=1e-16, tail_window=3))

    def test_hyp2f1_logarithm(self):
        # ₂F₁(1, 1; 2; z) = −log(1−z)/z
        assert rel(hyp2f1(1, 1, 2, 0.5), 2 * math.log(2)) < 1e-14

    def test_hyp2f1_kummer_point(self):
        # ₂F₁(1, 1/2; 3/2; −1) = arctan(1)
        assert rel(hyp2f1(1, 0.5, 1.5, -1), math.pi / 4) < 1e-14
        assert rel(kummer_value(1, 0.5), math.pi / 4) < 1e-14

    def test_hyp2f1_outside_disc(self):
        with pytest.raises(DomainError):
            hyp2f1(1, 1, 2.5, -1.5)

    def test_hyp1f2_reduces_to_bessel(self):
        # ₁F₂(a; a, b; z) = ₀F₁(; b; z) = Γ(b) Σ z^m/(m! Γ(b+m))
        assert rel(hyp1f2(1.3, 1.3, 2.0, 0.7), bessel_i(1.0, 0.7)) < 1e-14


class TestBessel:
    """Regularized modified Bessel series."""

    @settings(max_examples=20, deadline=None)
    @given(alpha=st.floats(min_value=-0.9, max_value=4.0), t=st.floats(min_value=0.01, max_value=30.0))
    def test_matches_scipy(self, alpha, t):
        expected = iv(alpha, 2 * math.sqrt(t)) / t ** (alpha / 2)
        assert rel(bessel_i(alpha, t), expected) < 1e-11

    def test_negative_integer_order(self):
        # I_{−2} = I_2, so the regularized series equals t · I_2(2√t)
        t = 1.7
        assert rel(bessel_i(-2.0, t), t * iv(2, 2 * math.sqrt(t))) < 1e-13


class TestHumbertPhi1:
    """Series, integral and closed forms of Φ₁."""

    def test_reduces_to_gauss_at_zero_y(self):
        p = Phi1Params(1.2, 0.7, 2.3)
        assert rel(humbert_phi1_series(p, -0.25, 0.0), hyp2f1(1.2, 0.7, 2.3, -0.25)) < 1e-14

    def test_reduces_to_kummer_at_zero_x(self):
        p = Phi1Params(1.2, 0.7, 2.3)
        assert rel(humbert_phi1_series(p, 0.0, 1.5), hyp1f1(1.2, 2.3, 1.5)) < 1e-14

    def test_series_methods_agree(self):
        p = Phi1Params(0.8, 1.4, 2.1)
        double = humbert_phi1_series(p, 0.3, 12.0, method="double")
        single = humbert_phi1_series(p, 0.3, 12.0, method="single")
        assert rel(double, single) < 1e-12

    def test_integral_matches_series(self):
        p = Phi1Params(1.2, 0.7, 2.3)
        series = humbert_phi1_series(p, -0.25, 0.005)
        assert rel(humbert_phi1_integral(p, -0.25, 0.005), series) < 1e-12

    def test_integral_strip(self):
        with pytest.raises(DomainError):
            humbert_phi1_integral(Phi1Params(2.0, 0.5, 1.5), 0.2, 0.1)

    def test_series_requires_unit_disc(self):
        with pytest.raises(DomainError):
            humbert_phi1_series(Phi1Params(1, 1, 2), 1.0, 0.0)

    def test_pole_in_c(self):
        with pytest.raises(PoleError):
            Phi1Params(1.0, 1.0, -1.0)

    def test_unit_x_gauss_value(self):
        # ₂F₁(1, 1; 3; 1) = Σ 2/((n+1)(n+2)) = 2
        assert rel(phi1_at_unit_x(Phi1Params(1, 1, 3), 0.0), 2.0) < 1e-14

    def test_unit_x_needs_room(self):
        with pytest.raises(DomainError):
            phi1_at_unit_x(Phi1Params(1, 1, 2), 0.3)

    def test_split_at_minus_one(self):
        a, b, y = 1.5, 0.3, -0.1
        integral = humbert_phi1_integral(Phi1Params(a, b, a - b + 1), -1.0, y)
        assert rel(phi1_neg1_split(a, b, y), integral) < 1e-10

    def test_split_at_zero_y_is_kummer_value(self):
        assert rel(phi1_neg1_split(1.5, 0.3, 0.0), kummer_value(1.5, 0.3)) < 1e-13

    def test_split_requires_small_b(self):
        with pytest.raises(DomainError):
            phi1_neg1_split(1.5, 1.0, 0.2)


class TestLauricella:
    """Confluent Lauricella Φ₂⁽ᵏ⁾."""

    def test_one_variable_is_kummer(self):
        value = lauricella_phi2k(CPoint.of(0.7), 1.9, CPoint.of(0.4))
        assert rel(value, hyp1f1(0.7, 1.9, 0.4)) < 1e-14

    def test_zero_argument(self):
        assert lauricella_phi2k(CPoint.of(0.5, 2.0), 1.5, CPoint.zeros(2)) == 1

    def test_terminating_parameters(self):
        # Φ₂[−1, −1; c; x, y] = 1 − (x+y)/c + xy/(c(c+1))
        c, x, y = 2.0, 0.3, -0.7
        expected = 1 - (x + y) / c + x * y / (c * (c + 1))
        assert rel(lauricella_phi2k(CPoint.of(-1, -1), c, CPoint.of(x, y)), expected) < 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            lauricella_phi2k(CPoint.of(1, 1), 2.0, CPoint.of(0.1))


class TestLeRoy:
    """Le Roy function, its asymptotic form and the scaled evaluation."""

    def test_order_one_is_exponential(self):
        assert le_roy(1, 1) == pytest.approx(math.e, rel=1e-15)

    def test_order_two_is_bessel(self):
        z = 9.0
        assert rel(le_roy(2, z), iv(0, 2 * math.sqrt(z))) < 1e-13

    def test_auto_switches_to_asymptotic(self):
        z = (LE_ROY_SWITCH / 2 + 1) ** 2
        assert le_roy(2, z) == le_roy(2, z, method="asymptotic")

    def test_asymptotic_close_to_series_beyond_switch(self):
        z = 400.0
        assert rel(le_roy(2, z, method="series"), le_roy(2, z, method="asymptotic")) < 0.02

    def test_asymptotic_domain(self):
        with pytest.raises(DomainError):
            le_roy(2, -1.0, method="asymptotic")
        with pytest.raises(DomainError):
            le_roy(1.5, 10.0, method="asymptotic")

    @pytest.mark.parametrize("order", [1.5, 2, 3])
    def test_positive_and_increasing_on_real_axis(self, order):
        grid = [0.25 * j for j in range(201)]
        values = [le_roy(order, z, method="series") for z in grid]
        assert all(abs(v.imag) == 0 and v.real > 0 for v in values)
        assert all(b.real > a.real for a, b in zip(values, values[1:]))

    def test_complex_argument_uses_series(self):
        z = 2.0 + 1.0j
        expected = sum(z**n / math.factorial(n) ** 2 for n in range(60))
        assert rel(le_roy(2, z), expected) < 1e-14

    def test_scaled_value(self):
        z = 100.0
        assert rel(le_roy_scaled(2, z, 10.0), math.exp(-10.0) * le_roy(2, z, method="series")) < 1e-12
        assert rel(le_roy_scaled(1, 0.5 + 0.5j, 0.25), cmath.exp(0.25 + 0.5j)) < 1e-15
