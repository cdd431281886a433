"""Tests for parameter coercion, the identity tables and configuration."""

import inspect
import math
import sys
from pathlib import Path

import pytest

# Add scripts/src to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "scripts" / "src"))

from core_types import CPoint, MultiIndex, SeriesControl  # noqa: E402
from errors import SuiteConfigError  # noqa: E402
from identity_registry import (  # noqa: E402
    FUNCTIONS,
    IDENTITIES,
    ParamKind,
    ParamSpec,
    VerifyConfig,
    coerce,
    encode,
    evaluate_function,
    get_function,
    get_identity,
    parse_cli_params,
    resolve_params,
    run_identity,
)

SHIPPED_CONFIG = ROOT / "scripts" / "config.yaml"


class TestCoercion:
    """CLI tokens and parsed values to typed parameters."""

    def test_complex_forms(self):
        spec = ParamSpec("alpha", ParamKind.COMPLEX)
        assert coerce(spec, 1, "a") == 1 + 0j
        assert coerce(spec, {"re": 0.5, "im": -0.2}, "a") == 0.5 - 0.2j
        assert coerce(spec, "0.5-0.2j", "a") == 0.5 - 0.2j
        assert coerce(spec, {"im": 2}, "a") == 2j

    def test_complex_rejects_booleans_and_junk(self):
        spec = ParamSpec("alpha", ParamKind.COMPLEX)
        with pytest.raises(SuiteConfigError, match="boolean"):
            coerce(spec, True, "entries[0].params.alpha")
        with pytest.raises(SuiteConfigError, match="entries\\[0\\].params.alpha"):
            coerce(spec, "abc", "entries[0].params.alpha")
        with pytest.raises(SuiteConfigError, match="\\{re, im\\}"):
            coerce(spec, {"real": 1}, "a")

    def test_vector_and_vector_list(self):
        vector = ParamSpec("x", ParamKind.VECTOR)
        vectors = ParamSpec("w", ParamKind.VECTOR_LIST)
        assert coerce(vector, "0.4,-0.3", "x") == CPoint.of(0.4, -0.3)
        assert coerce(vector, 2.0, "x") == CPoint.of(2.0)
        assert coerce(vectors, "0.1,0.2;0.3,0.4", "w") == [CPoint.of(0.1, 0.2), CPoint.of(0.3, 0.4)]
        assert coerce(vectors, [[0.1, 0.2], [0.3, 0.4]], "w") == [CPoint.of(0.1, 0.2), CPoint.of(0.3, 0.4)]
        with pytest.raises(SuiteConfigError, match="list of vectors"):
            coerce(vectors, [0.1, 0.2], "w")

    def test_multi_index(self):
        spec = ParamSpec("n", ParamKind.MULTI_INDEX)
        assert coerce(spec, "2,1", "n") == MultiIndex.of(2, 1)
        assert coerce(spec, [2.0, 0], "n") == MultiIndex.of(2, 0)
        with pytest.raises(SuiteConfigError, match="nonnegative"):
            coerce(spec, [1, -1], "n")
        with pytest.raises(SuiteConfigError, match="integer"):
            coerce(spec, [1.5], "n")

    def test_real_and_choice(self):
        with pytest.raises(SuiteConfigError, match="real"):
            coerce(ParamSpec("z", ParamKind.REAL), {"re": 1, "im": 1}, "z")
        choice = ParamSpec("route", ParamKind.CHOICE, choices=("auto", "factored"))
        assert coerce(choice, "factored", "route") == "factored"
        with pytest.raises(SuiteConfigError, match="one of auto, factored"):
            coerce(choice, "fast", "route")

    def test_encode_keeps_negative_zero_imaginary_part(self):
        spec = ParamSpec("alpha", ParamKind.COMPLEX)
        assert encode(spec, 1.5 + 0j) == 1.5
        encoded = encode(spec, complex(1.5, -0.0))
        assert encoded == {"re": 1.5, "im": -0.0}
        assert math.copysign(1.0, coerce(spec, encoded, "a").imag) < 0

    def test_encode_structures(self):
        assert encode(ParamSpec("n", ParamKind.MULTI_INDEX), MultiIndex.of(2, 1)) == [2, 1]
        assert encode(ParamSpec("w", ParamKind.VECTOR_LIST), [CPoint.of(1, 2j)]) == [[1.0, {"re": 0.0, "im": 2.0}]]


class TestResolveParams:
    """Parameter blocks against identity signatures."""

    def test_zero_defaults_take_inferred_dimension(self):
        params = resolve_params(get_identity("prop1_exponential").params, {"beta": 2, "u": [0.1, 0.2]}, "p")
        assert params["x"] == CPoint.zeros(2)

    def test_explicit_dimension(self):
        params = resolve_params(get_identity("hardy_hille").params, {"k": 3, "alpha": 0.5, "u": "0.1,0.1,0.1"}, "p")
        assert params["y"] == CPoint.zeros(3)

    def test_tuple_default(self):
        params = resolve_params(
            get_identity("cor2_expansion").params, {"alpha": 1, "beta": 1, "gamma": 2, "w": [[0.1]], "u": [0.2]}, "p"
        )
        assert params["betas"] == []

    def test_errors_name_location(self):
        spec = get_identity("prop1_exponential")
        with pytest.raises(SuiteConfigError, match="entries\\[2\\].params: missing required parameter beta"):
            resolve_params(spec.params, {"u": [0.1]}, "entries[2].params")
        with pytest.raises(SuiteConfigError, match="unknown parameters: delta"):
            resolve_params(spec.params, {"beta": 1, "u": [0.1], "delta": 1}, "p")
        with pytest.raises(SuiteConfigError, match="p.k"):
            resolve_params(spec.params, {"beta": 1, "u": [0.1], "k": 0}, "p")

    def test_parse_cli_params(self):
        assert parse_cli_params(["n=1,1", "x=0.4,-0.3"]) == {"n": "1,1", "x": "0.4,-0.3"}
        with pytest.raises(SuiteConfigError, match="key=value"):
            parse_cli_params(["alpha"])
        with pytest.raises(SuiteConfigError, match="given twice"):
            parse_cli_params(["a=1", "a=2"])


class TestTables:
    """Registered identities and functions."""

    @pytest.mark.parametrize("identity_id", sorted(IDENTITIES))
    def test_evaluator_accepts_every_keyword(self, identity_id):
        spec = IDENTITIES[identity_id]
        signature = inspect.signature(spec.evaluator)
        keywords = {p.keyword for p in spec.params} | set(spec.uses)
        if spec.quadrature is not None:
            keywords.add(spec.quadrature[1])
        assert keywords <= set(signature.parameters)

    @pytest.mark.parametrize("name", sorted(FUNCTIONS))
    def test_function_accepts_every_keyword(self, name):
        spec = FUNCTIONS[name]
        parameters = set(inspect.signature(spec.evaluator).parameters)
        assert {p.keyword for p in spec.params} <= parameters
        if spec.uses_series:
            assert "ctl" in parameters

    def test_unknown_names(self):
        with pytest.raises(SuiteConfigError, match="unknown identity 'nope'"):
            get_identity("nope")
        with pytest.raises(SuiteConfigError, match="unknown function"):
            get_function("nope")


class TestVerifyConfig:
    """config.yaml sections and precedence."""

    def test_shipped_config(self):
        config = VerifyConfig.load(str(SHIPPED_CONFIG), required=True)
        assert config.series_for("diagonal_gf").max_total_order == 200
        assert config.series_for("prop1_general").max_total_order == 45
        assert config.quadrature["box_per_axis"] == 48
        assert config.log_level == "WARNING"
        assert config.thresholds == {}
        assert config.threshold_for("product_formula") == 1e-6

    def test_missing_optional_config_gives_defaults(self, tmp_path):
        config = VerifyConfig.load(str(tmp_path / "absent.yaml"))
        assert config.series.max_total_order == 45
        with pytest.raises(SuiteConfigError, match="not found"):
            VerifyConfig.load(str(tmp_path / "absent.yaml"), required=True)

    def test_unknown_sections_and_keys(self):
        with pytest.raises(SuiteConfigError, match="unknown sections plots"):
            VerifyConfig.from_dict({"plots": {}})
        with pytest.raises(SuiteConfigError, match="quadrature"):
            VerifyConfig.from_dict({"quadrature": {"gauss": 3}})
        with pytest.raises(SuiteConfigError, match="thresholds.cor3_addition"):
            VerifyConfig.from_dict({"thresholds": {"cor3_addition": -1}})
        with pytest.raises(SuiteConfigError, match="logging.level"):
            VerifyConfig.from_dict({"logging": {"level": "chatty"}})

    def test_series_precedence(self):
        config = VerifyConfig.from_dict(
            {"series": {"max_total_order": 30}, "identity_series": {"hardy_hille": {"max_total_order": 60}}}
        )
        assert config.series_for("prop1_general").max_total_order == 30
        assert config.series_for("hardy_hille").max_total_order == 60
        assert config.series_for("hardy_hille", {"max_total_order": 70}).max_total_order == 70
        config.max_order = 80
        assert config.series_for("hardy_hille", {"max_total_order": 70}).max_total_order == 80

    def test_threshold_precedence(self):
        assert VerifyConfig().threshold_for("cor3_addition") == 1e-12
        config = VerifyConfig.from_dict({"thresholds": {"default": 1e-6, "lemma_expansion": 1e-5}})
        assert config.threshold_for("lemma_expansion") == 1e-5
        assert config.threshold_for("cor3_addition") == 1e-6
        assert config.threshold_for("lemma_expansion", expected=1e-3) == 1e-3
        config.tol = 1e-2
        assert config.threshold_for("lemma_expansion", expected=1e-3) == 1e-2


class TestRunning:
    """Dispatch to evaluators."""

    def test_run_identity(self):
        spec = get_identity("prop1_exponential")
        params = resolve_params(spec.params, {"beta": 2, "u": [0.3], "x": [1.0]}, "p")
        report = run_identity("prop1_exponential", params, VerifyConfig())
        assert report.identity_id == "prop1_exponential"
        assert report.rel_residual < 1e-12

    def test_quadrature_override(self):
        spec = get_identity("cosine_beta")
        params = resolve_params(spec.params, {"alpha": 0.5, "beta": 1.5}, "p")
        config = VerifyConfig()
        assert config.quadrature_size(spec, {"per_axis": 12}) == 12
        report = run_identity("cosine_beta", params, config, quadrature_overrides={"per_axis": 12})
        assert report.rel_residual < 1e-9

    def test_series_override_reaches_evaluator(self):
        spec = get_identity("prop1_exponential")
        params = resolve_params(spec.params, {"beta": 2, "u": [0.3], "x": [1.0]}, "p")
        report = run_identity("prop1_exponential", params, VerifyConfig(), series_overrides={"max_total_order": 5})
        assert not report.converged
        assert report.shells_used == 6

    def test_evaluate_function(self):
        le_roy = get_function("le_roy")
        params = resolve_params(le_roy.params, {"gamma": 1, "z": 1}, "p")
        assert evaluate_function("le_roy", params, VerifyConfig()) == pytest.approx(math.e, rel=1e-15)

        laguerre = get_function("laguerre_multi")
        params = resolve_params(laguerre.params, {"n": "1,1", "alpha": 0, "x": "1,1"}, "p")
        assert evaluate_function("laguerre_multi", params, VerifyConfig()) == pytest.approx(-1, rel=1e-15)

    def test_scalar_series_respects_max_order(self):
        config = VerifyConfig()
        config.max_order = 12
        assert config.scalar_series() == SeriesControl(12, config.inner_series.rel_tol, config.inner_series.tail_window)
