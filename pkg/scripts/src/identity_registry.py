"""
Identity Registry - Named identities, evaluable functions and their parameters

This module provides the tables the CLI and the suite runner dispatch on.
IDENTITIES maps an identity id to its evaluator and typed parameter list;
FUNCTIONS does the same for the scalar functions of the eval subcommand.

Parameter values arrive either as CLI tokens ("x=0.4,-0.3", "w=0.1,0.2;0.3,0.4")
or as parsed YAML/JSON values (numbers, {re, im} objects, arrays) and are
coerced here to complex, CPoint or MultiIndex. VerifyConfig carries the
settings read from config.yaml and resolves per-identity series controls,
quadrature sizes and thresholds.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, FrozenSet, List, NoReturn, Optional, Sequence, Tuple

import yaml

from core_types import DEFAULT_SERIES, CPoint, MultiIndex, SeriesControl
from errors import DomainError, SuiteConfigError
from hypergeometric import (
    UNIT_X_TOL,
    Phi1Params,
    bessel_i,
    humbert_phi1_integral,
    humbert_phi1_series,
    hyp1f1,
    hyp1f2,
    hyp2f1,
    lauricella_phi2k,
    le_roy,
    phi1_at_unit_x,
)
from identities import (
    cor1_expansion,
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
from identity_report import DEFAULT_MAX_INDEX_COUNT, IDENTITY_SERIES, IdentityReport
from kernel_identities import (
    COSINE_DEFAULT_NODES,
    DIAGONAL_COEFFICIENT_POINTS,
    DIAGONAL_DEFAULT_NODES,
    DIAGONAL_SERIES,
    PRODUCT_DEFAULT_PER_AXIS,
    cosine_beta,
    diagonal_coefficients,
    diagonal_gf,
    diagonal_sign,
    hardy_hille,
    product_formula,
)
from laguerre import NEG_SHIFT_ROUTES, laguerre_multi, laguerre_neg_shift, laguerre_uni, multiple_laguerre_2nd
from oracle_checks import gf_oracle, laguerre_routes, le_roy_asymptotic, multiple_gf_oracle, neg_shift_routes
from quadrature import DEFAULT_MAX_BOX_NODES

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 1e-8

QUADRATURE_DEFAULTS = {
    "beta_nodes": 64,
    "semi_infinite_nodes": DIAGONAL_DEFAULT_NODES,
    "box_per_axis": PRODUCT_DEFAULT_PER_AXIS,
    "cosine_nodes": COSINE_DEFAULT_NODES,
}

# Generic keys a suite entry may use instead of the config key
QUADRATURE_ALIASES = ("nodes", "per_axis")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ParamKind(Enum):
    """Value shapes a parameter can take"""

    COMPLEX = "complex"
    REAL = "real"
    INT = "int"
    VECTOR = "vector"
    VECTOR_LIST = "vector_list"
    COMPLEX_LIST = "complex_list"
    MULTI_INDEX = "multi_index"
    CHOICE = "choice"


# Default marker: a zero vector of the block's dimension k
ZEROS = "zeros"


@dataclass(frozen=True)
class ParamSpec:
    """
    One named parameter of an identity or function.

    argument is the evaluator keyword when it differs from the public name
    (the public "w" is passed as w_list).
    """

    name: str
    kind: ParamKind
    required: bool = True
    default: Any = None
    argument: Optional[str] = None
    choices: Tuple[str, ...] = ()
    doc: str = ""

    @property
    def keyword(self) -> str:
        return self.argument or self.name


def _param(name: str, kind: ParamKind, doc: str = "", **options) -> ParamSpec:
    if "default" in options:
        options.setdefault("required", False)
    return ParamSpec(name, kind, doc=doc, **options)


# ---------------------------------------------------------------------------
# Coercion
# ---------------------------------------------------------------------------


def _fail(location: str, message: str) -> NoReturn:
    raise SuiteConfigError(f"{location}: {message}")


def _complex_value(raw: Any, location: str) -> complex:
    if isinstance(raw, bool):
        _fail(location, "expected a number, got a boolean")
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, complex):
        return raw
    if isinstance(raw, dict):
        unknown = set(raw) - {"re", "im"}
        if unknown or not raw:
            _fail(location, "complex values are written as {re, im}")
        parts = []
        for key in ("re", "im"):
            part = raw.get(key, 0.0)
            if isinstance(part, bool) or not isinstance(part, (int, float)):
                _fail(location, f"field {key} must be a number")
            parts.append(float(part))
        return complex(parts[0], parts[1])
    if isinstance(raw, str):
        try:
            return complex(raw.strip().replace(" ", ""))
        except ValueError:
            _fail(location, f"cannot parse {raw!r} as a complex number")
    _fail(location, f"expected a number, got {type(raw).__name__}")


def _int_value(raw: Any, location: str) -> int:
    if isinstance(raw, bool):
        _fail(location, "expected an integer, got a boolean")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float) and raw.is_integer():
        return int(raw)
    if isinstance(raw, str):
        try:
            return int(raw.strip())
        except ValueError:
            pass
    _fail(location, f"expected an integer, got {raw!r}")


def _items(raw: Any, separator: str) -> List[Any]:
    if isinstance(raw, str):
        text = raw.strip()
        return [item for item in text.split(separator)] if text else []
    if isinstance(raw, (list, tuple)):
        return list(raw)
    return [raw]


def _vector_value(raw: Any, location: str) -> CPoint:
    items = _items(raw, ",")
    if not items:
        _fail(location, "vector must have at least one component")
    return CPoint(tuple(_complex_value(item, f"{location}[{i}]") for i, item in enumerate(items)))


def coerce(spec: ParamSpec, raw: Any, location: str) -> Any:
    """
    Convert a CLI token or a parsed config value to the parameter's type.

    Raises:
        SuiteConfigError: Naming the location when the value does not fit
    """
    kind = spec.kind
    if kind is ParamKind.COMPLEX:
        return _complex_value(raw, location)
    if kind is ParamKind.REAL:
        value = _complex_value(raw, location)
        if value.imag != 0:
            _fail(location, "expected a real number")
        return value.real
    if kind is ParamKind.INT:
        return _int_value(raw, location)
    if kind is ParamKind.VECTOR:
        return _vector_value(raw, location)
    if kind is ParamKind.VECTOR_LIST:
        if isinstance(raw, (list, tuple)) and raw and not isinstance(raw[0], (list, tuple, str)):
            _fail(location, "expected a list of vectors")
        items = _items(raw, ";")
        if not items:
            _fail(location, "expected at least one vector")
        return [_vector_value(item, f"{location}[{i}]") for i, item in enumerate(items)]
    if kind is ParamKind.COMPLEX_LIST:
        return [_complex_value(item, f"{location}[{i}]") for i, item in enumerate(_items(raw, ","))]
    if kind is ParamKind.MULTI_INDEX:
        items = _items(raw, ",")
        if not items:
            _fail(location, "multi-index must have at least one entry")
        entries = tuple(_int_value(item, f"{location}[{i}]") for i, item in enumerate(items))
        if any(e < 0 for e in entries):
            _fail(location, "multi-index entries must be nonnegative")
        return MultiIndex(entries)
    if kind is ParamKind.CHOICE:
        if not isinstance(raw, str) or raw not in spec.choices:
            _fail(location, f"must be one of {', '.join(spec.choices)}")
        return raw
    raise AssertionError(f"unhandled kind {kind}")


def _encode_complex(z: complex) -> Any:
    z = complex(z)
    if z.imag == 0 and math.copysign(1.0, z.imag) > 0:
        return z.real
    return {"re": z.real, "im": z.imag}


def encode(spec: ParamSpec, value: Any) -> Any:
    """JSON-ready form of a resolved value; coerce(encode(v)) gives v back exactly."""
    kind = spec.kind
    if kind is ParamKind.COMPLEX:
        return _encode_complex(value)
    if kind is ParamKind.VECTOR:
        return [_encode_complex(v) for v in value]
    if kind is ParamKind.VECTOR_LIST:
        return [[_encode_complex(v) for v in vector] for vector in value]
    if kind is ParamKind.COMPLEX_LIST:
        return [_encode_complex(v) for v in value]
    if kind is ParamKind.MULTI_INDEX:
        return list(value.entries)
    if kind is ParamKind.REAL:
        return float(value)
    return value


def _dimension_of(value: Any) -> Optional[int]:
    if isinstance(value, (CPoint, MultiIndex)):
        return value.k
    if isinstance(value, list) and value and isinstance(value[0], CPoint):
        return value[0].k
    return None


def resolve_params(params: Sequence[ParamSpec], raw: Dict[str, Any], location: str) -> Dict[str, Any]:
    """
    Type-check a parameter block and fill defaults.

    The optional key "k" fixes the dimension; otherwise it is read off the
    first vector or multi-index supplied. Omitted zero-default vectors become
    zeros of that dimension.

    Raises:
        SuiteConfigError: On unknown, missing or malformed parameters
    """
    if not isinstance(raw, dict):
        _fail(location, "parameter block must be a mapping")
    known = {spec.name for spec in params}
    unknown = set(raw) - known - {"k"}
    if unknown:
        _fail(location, f"unknown parameters: {', '.join(sorted(unknown))}")

    resolved: Dict[str, Any] = {}
    for spec in params:
        if spec.name in raw:
            resolved[spec.name] = coerce(spec, raw[spec.name], f"{location}.{spec.name}")

    k: Optional[int] = None
    if "k" in raw:
        k = _int_value(raw["k"], f"{location}.k")
        if k < 1:
            _fail(f"{location}.k", "dimension must be at least 1")
    else:
        for value in resolved.values():
            k = _dimension_of(value)
            if k is not None:
                break

    for spec in params:
        if spec.name in resolved:
            continue
        if spec.required:
            _fail(location, f"missing required parameter {spec.name}")
        if spec.default == ZEROS:
            if k is None:
                _fail(location, f"cannot size {spec.name}: give k or another vector")
            resolved[spec.name] = CPoint.zeros(k)
        elif isinstance(spec.default, tuple):
            resolved[spec.name] = list(spec.default)
        else:
            resolved[spec.name] = spec.default
    return resolved


def parse_cli_params(tokens: Sequence[str]) -> Dict[str, str]:
    """key=value tokens to a raw parameter block."""
    raw: Dict[str, str] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise SuiteConfigError(f"parameter {token!r} must be written key=value")
        if key in raw:
            raise SuiteConfigError(f"parameter {key} given twice")
        raw[key] = value
    return raw


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentitySpec:
    """
    A registered identity.

    uses names the settings the evaluator accepts (ctl, inner_ctl,
    max_index_count, max_box_nodes, jobs); quadrature is the pair
    (config key, evaluator keyword) for its node count, if any.
    """

    identity_id: str
    evaluator: Callable[..., IdentityReport]
    params: Tuple[ParamSpec, ...]
    threshold: float
    summary: str
    uses: FrozenSet[str] = frozenset()
    series: Optional[SeriesControl] = None
    quadrature: Optional[Tuple[str, str]] = None


_SERIES_SETTINGS = frozenset({"ctl", "inner_ctl", "max_index_count"})

_C = ParamKind.COMPLEX
_V = ParamKind.VECTOR

IDENTITIES: Dict[str, IdentitySpec] = {
    spec.identity_id: spec
    for spec in (
        IdentitySpec(
            "prop1_general",
            prop1_general,
            (
                _param("alpha", _C),
                _param("beta", _C),
                _param("gamma", _C),
                _param("u", _V, "|u|₁ < 1"),
                _param("x", _V, default=ZEROS),
            ),
            1e-9,
            "Φ₁[α,β;γ;−⟨u⟩,−⟨u∘x⟩] as a series of negative-shift Laguerre polynomials",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "prop1_exponential",
            prop1_exponential,
            (_param("beta", _C), _param("u", _V, "|u|₁ < 1"), _param("x", _V, default=ZEROS)),
            1e-9,
            "e^{−⟨u∘x⟩}(1+⟨u⟩)^{−β} as a series of negative-shift Laguerre polynomials",
            frozenset({"ctl", "max_index_count"}),
        ),
        IdentitySpec(
            "lemma_expansion",
            lemma_expansion,
            (
                _param("alpha", _C),
                _param("beta", _C),
                _param("beta1", _C),
                _param("gamma", _C),
                _param("sigma", _V, default=ZEROS),
                _param("x", _V, "|x|₁ < 1, no zero component"),
                _param("y", _V, default=ZEROS),
            ),
            1e-8,
            "Φ₁ re-expanded around a split σ of its second argument",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "theorem_multiple",
            theorem_multiple,
            (
                _param("alpha", _C),
                _param("gamma", _C),
                _param("betas", ParamKind.COMPLEX_LIST, "[β₀ = β, β₁, …, β_L]"),
                _param("sigmas", ParamKind.VECTOR_LIST, "σ⁽¹⁾ … σ⁽ᴸ⁾"),
                _param("x", _V),
                _param("y", _V, default=ZEROS),
            ),
            1e-7,
            "L-fold repetition of the lemma expansion",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "reduction_chain",
            reduction_chain,
            (
                _param("alpha", _C),
                _param("beta", _C),
                _param("beta1", _C),
                _param("gamma", _C),
                _param("sigma", _V, default=ZEROS),
                _param("x", _V, "|x|₁ < 1, no zero component"),
                _param("y", _V, default=ZEROS),
            ),
            1e-11,
            "one-level theorem against the lemma, and the lemma and Φ₁ reductions to the proposition",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "cor1_expansion",
            cor1_expansion,
            (
                _param("alpha", _C),
                _param("beta", _C),
                _param("gamma", _C),
                _param("betas", ParamKind.COMPLEX_LIST, "[β₁, …, β_L]"),
                _param("w", ParamKind.VECTOR_LIST, "w⁽¹⁾ … w⁽ᴸ⁺¹⁾", argument="w_list"),
                _param("u", _V),
            ),
            1e-8,
            "w-form multiple expansion with a trailing Φ₁ factor",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "cor2_expansion",
            cor2_expansion,
            (
                _param("alpha", _C),
                _param("beta", _C),
                _param("gamma", _C),
                _param("betas", ParamKind.COMPLEX_LIST, "[β₁, …, β_{L−1}]", default=()),
                _param("w", ParamKind.VECTOR_LIST, "w⁽¹⁾ … w⁽ᴸ⁾", argument="w_list"),
                _param("u", _V),
            ),
            1e-8,
            "w-form multiple expansion without a trailing factor",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "cor3_addition",
            cor3_addition,
            (
                _param("m", ParamKind.INT),
                _param("a", ParamKind.COMPLEX_LIST, "a₁ … a_{L+1}"),
                _param("u", _V, "⟨u⟩ = −1"),
                _param("w", ParamKind.VECTOR_LIST, "w⁽¹⁾ … w⁽ᴸ⁺¹⁾", argument="w_list"),
            ),
            1e-12,
            "finite addition theorem for L_m^(Σa)",
            frozenset({"max_index_count"}),
        ),
        IdentitySpec(
            "cor4_kummer",
            cor4_kummer,
            (
                _param("alpha", _C, "Re α > 0"),
                _param("beta", _C),
                _param("betas", ParamKind.COMPLEX_LIST, "[β₁, …, β_L], Re β_L < 1"),
                _param("w", ParamKind.VECTOR_LIST, "w⁽¹⁾ … w⁽ᴸ⁾", argument="w_list"),
                _param("u", _V, "⟨u⟩ = 1"),
            ),
            1e-7,
            "Φ₁ at x = −1 through Kummer's value, against a Γ-weighted multiple series",
            frozenset({"ctl", "max_index_count"}),
            quadrature=("beta_nodes", "nodes"),
        ),
        IdentitySpec(
            "cor5_split",
            cor5_split,
            (
                _param("alpha", _C),
                _param("beta", _C, "Re β < 1"),
                _param("betas", ParamKind.COMPLEX_LIST, "[β₁, …, β_L] with β_L = β"),
                _param("w", ParamKind.VECTOR_LIST, "w⁽¹⁾ … w⁽ᴸ⁾", argument="w_list"),
                _param("u", _V, "⟨u⟩ = 1"),
            ),
            1e-7,
            "two-₁F₂ form of Φ₁ at x = −1 against a Γ-weighted multiple series",
            _SERIES_SETTINGS,
            quadrature=("beta_nodes", "nodes"),
        ),
        IdentitySpec(
            "hardy_hille",
            hardy_hille,
            (
                _param("alpha", _C),
                _param("x", _V, default=ZEROS),
                _param("y", _V, default=ZEROS),
                _param("u", _V, "|u|₁ < 1"),
            ),
            1e-8,
            "bilinear generating function with the regularized Bessel kernel",
            _SERIES_SETTINGS,
        ),
        IdentitySpec(
            "cosine_beta",
            cosine_beta,
            (_param("alpha", _C), _param("beta", _C)),
            1e-9,
            "Γ ratio as a cosine-power integral on (−π/2, π/2)",
            quadrature=("cosine_nodes", "per_axis"),
        ),
        IdentitySpec(
            "product_formula",
            product_formula,
            (
                _param("m", ParamKind.MULTI_INDEX),
                _param("n", ParamKind.MULTI_INDEX),
                _param("alpha", _C, "real, > −1"),
                _param("beta", _C, "real, > −1"),
                _param("x", _V, default=ZEROS),
                _param("y", _V, default=ZEROS),
            ),
            1e-6,
            "product of two Laguerre values as a box integral",
            frozenset({"max_box_nodes", "jobs"}),
            quadrature=("box_per_axis", "per_axis"),
        ),
        IdentitySpec(
            "diagonal_gf",
            diagonal_gf,
            (
                _param("beta", _C, "Re β > 0", default=1.0 + 0j),
                _param("x", _V, default=ZEROS),
                _param("u", _C, "|u| < 1/kᵏ"),
            ),
            1e-7,
            "main-diagonal generating function as a Le Roy integral",
            frozenset({"ctl"}),
            series=DIAGONAL_SERIES,
            quadrature=("semi_infinite_nodes", "nodes"),
        ),
        IdentitySpec(
            "diagonal_coefficients",
            diagonal_coefficients,
            (
                _param("beta", _C, "Re β > 0", default=1.0 + 0j),
                _param("x", _V),
                _param("degree", ParamKind.INT, default=3),
                _param("points", ParamKind.INT, default=DIAGONAL_COEFFICIENT_POINTS),
            ),
            1e-5,
            "Taylor coefficients of the diagonal Le Roy integral against diagonal Laguerre values",
            quadrature=("semi_infinite_nodes", "nodes"),
        ),
        IdentitySpec(
            "diagonal_sign",
            diagonal_sign,
            (
                _param("terms", ParamKind.INT, default=10),
                _param("u", ParamKind.REAL, default=0.1),
            ),
            1e-12,
            "brute-force main diagonal of 1/(1−x−y) deciding the sign of 4u",
        ),
        IdentitySpec(
            "gf_oracle",
            gf_oracle,
            (_param("alpha", _C), _param("x", _V), _param("order", ParamKind.INT, default=5)),
            1e-11,
            "generating-function Taylor coefficients against the closed Laguerre sums",
            frozenset({"max_index_count"}),
        ),
        IdentitySpec(
            "multiple_gf_oracle",
            multiple_gf_oracle,
            (
                _param("alpha", _C),
                _param("beta", _V),
                _param("x", _C),
                _param("order", ParamKind.INT, default=5),
            ),
            1e-11,
            "multiple Laguerre polynomials of the second kind against their generating function",
            frozenset({"max_index_count"}),
        ),
        IdentitySpec(
            "laguerre_routes",
            laguerre_routes,
            (_param("n", ParamKind.MULTI_INDEX), _param("alpha", _C), _param("x", _V, default=ZEROS)),
            1e-11,
            "factored Φ₂⁽ᵏ⁾ route against the rearranged Laguerre sum",
        ),
        IdentitySpec(
            "neg_shift_routes",
            neg_shift_routes,
            (_param("n", ParamKind.MULTI_INDEX), _param("beta", _C), _param("x", _V, default=ZEROS)),
            1e-10,
            "factored and rearranged negative-shift Laguerre values",
        ),
        IdentitySpec(
            "le_roy_asymptotic",
            le_roy_asymptotic,
            (_param("order", ParamKind.INT, "integer k ≥ 2"), _param("z", ParamKind.REAL, "real z > 0")),
            0.02,
            "Le Roy asymptotic form against the power series",
        ),
    )
}


def get_identity(identity_id: str) -> IdentitySpec:
    if identity_id not in IDENTITIES:
        raise SuiteConfigError(f"unknown identity {identity_id!r}; known: {', '.join(IDENTITIES)}")
    return IDENTITIES[identity_id]


# ---------------------------------------------------------------------------
# Scalar functions for eval
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function reachable from the eval subcommand."""

    name: str
    evaluator: Callable[..., complex]
    params: Tuple[ParamSpec, ...]
    summary: str
    uses_series: bool = False


def _eval_phi1(
    a: complex, b: complex, c: complex, x: complex, y: complex, method: str, nodes: int, ctl: SeriesControl
) -> complex:
    p = Phi1Params(a, b, c)
    if method == "integral":
        return humbert_phi1_integral(p, x, y, nodes=nodes)
    if method == "auto" and abs(x - 1) <= UNIT_X_TOL:
        return phi1_at_unit_x(p, y, ctl)
    return humbert_phi1_series(p, x, y, ctl, method)


FUNCTIONS: Dict[str, FunctionSpec] = {
    spec.name: spec
    for spec in (
        FunctionSpec(
            "laguerre_uni",
            laguerre_uni,
            (_param("n", ParamKind.INT), _param("alpha", _C), _param("x", _C)),
            "L_n^(α)(x)",
        ),
        FunctionSpec(
            "laguerre_multi",
            laguerre_multi,
            (_param("n", ParamKind.MULTI_INDEX), _param("alpha", _C), _param("x", _V, default=ZEROS)),
            "L_n^(α)(x) in k variables",
        ),
        FunctionSpec(
            "laguerre_neg_shift",
            laguerre_neg_shift,
            (
                _param("n", ParamKind.MULTI_INDEX),
                _param("beta", _C),
                _param("x", _V, default=ZEROS),
                _param("route", ParamKind.CHOICE, default="auto", choices=NEG_SHIFT_ROUTES),
            ),
            "L_n^(−β−⟨n⟩)(x)",
        ),
        FunctionSpec(
            "multiple_laguerre_2nd",
            multiple_laguerre_2nd,
            (_param("n", ParamKind.MULTI_INDEX), _param("alpha", _C), _param("beta", _V), _param("x", _C)),
            "L_n^(α;β)(x)",
        ),
        FunctionSpec(
            "phi1",
            _eval_phi1,
            (
                _param("a", _C),
                _param("b", _C),
                _param("c", _C),
                _param("x", _C),
                _param("y", _C, default=0j),
                _param("method", ParamKind.CHOICE, default="auto", choices=("auto", "double", "single", "integral")),
                _param("nodes", ParamKind.INT, default=QUADRATURE_DEFAULTS["beta_nodes"]),
            ),
            "Humbert Φ₁[a,b;c;x,y]",
            uses_series=True,
        ),
        FunctionSpec(
            "phi2k",
            lauricella_phi2k,
            (_param("b", _V), _param("c", _C), _param("x", _V, default=ZEROS)),
            "confluent Lauricella Φ₂⁽ᵏ⁾[b;c;x]",
            uses_series=True,
        ),
        FunctionSpec(
            "le_roy",
            le_roy,
            (
                _param("gamma", _C, argument="gamma_order"),
                _param("z", _C),
                _param("method", ParamKind.CHOICE, default="auto", choices=("auto", "series", "asymptotic")),
            ),
            "Le Roy F_γ(z)",
            uses_series=True,
        ),
        FunctionSpec(
            "bessel_i_reg",
            bessel_i,
            (_param("alpha", _C), _param("t", _C)),
            "Σ t^m/(m! Γ(α+m+1))",
            uses_series=True,
        ),
        FunctionSpec(
            "hyp1f1", hyp1f1, (_param("a", _C), _param("c", _C), _param("z", _C)), "₁F₁(a;c;z)", uses_series=True
        ),
        FunctionSpec(
            "hyp2f1",
            hyp2f1,
            (_param("a", _C), _param("b", _C), _param("c", _C), _param("z", _C)),
            "₂F₁(a,b;c;z)",
            uses_series=True,
        ),
        FunctionSpec(
            "hyp1f2",
            hyp1f2,
            (_param("a", _C), _param("b1", _C), _param("b2", _C), _param("z", _C)),
            "₁F₂(a;b1,b2;z)",
            uses_series=True,
        ),
    )
}


def get_function(name: str) -> FunctionSpec:
    if name not in FUNCTIONS:
        raise SuiteConfigError(f"unknown function {name!r}; known: {', '.join(FUNCTIONS)}")
    return FUNCTIONS[name]


# ---------------------------------------------------------------------------
# Settings
# ---------------------------------------------------------------------------


def _positive_int(raw: Any, location: str) -> int:
    value = _int_value(raw, location)
    if value < 1:
        _fail(location, "must be a positive integer")
    return value


def _series_section(data: Any, base: SeriesControl, location: str) -> SeriesControl:
    if data is not None and not isinstance(data, dict):
        _fail(location, "must be a mapping")
    try:
        return SeriesControl.from_dict(data, base)
    except (DomainError, TypeError, ValueError) as e:
        raise SuiteConfigError(f"{location}: {e}")


def _section(data: Dict, name: str) -> Dict:
    section = data.get(name) or {}
    if not isinstance(section, dict):
        _fail(name, "must be a mapping")
    return section


@dataclass
class VerifyConfig:
    """
    Settings read from config.yaml, with CLI overrides applied on top.

    Precedence for the outer series: identity default < series section <
    identity_series[id] < suite entry < --max-order. For thresholds: registry
    default < thresholds.default < thresholds[id] < suite entry < --tol.
    """

    series: SeriesControl = IDENTITY_SERIES
    inner_series: SeriesControl = DEFAULT_SERIES
    identity_series: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    quadrature: Dict[str, int] = field(default_factory=lambda: dict(QUADRATURE_DEFAULTS))
    max_index_count: int = DEFAULT_MAX_INDEX_COUNT
    max_box_nodes: int = DEFAULT_MAX_BOX_NODES
    thresholds: Dict[str, float] = field(default_factory=dict)
    log_level: str = "WARNING"
    log_file: Optional[str] = None
    quadrature_jobs: int = 1
    max_order: Optional[int] = None
    tol: Optional[float] = None

    @classmethod
    def from_dict(cls, data: Optional[Dict]) -> "VerifyConfig":
        data = data or {}
        if not isinstance(data, dict):
            raise SuiteConfigError("config: top level must be a mapping")
        known = {"series", "inner_series", "identity_series", "quadrature", "budget", "thresholds", "logging"}
        unknown = set(data) - known
        if unknown:
            raise SuiteConfigError(f"config: unknown sections {', '.join(sorted(unknown))}")

        config = cls()
        config.series = _series_section(data.get("series"), IDENTITY_SERIES, "series")
        config.inner_series = _series_section(data.get("inner_series"), DEFAULT_SERIES, "inner_series")

        for identity_id, overrides in _section(data, "identity_series").items():
            get_identity(identity_id)
            _series_section(overrides, IDENTITY_SERIES, f"identity_series.{identity_id}")
            config.identity_series[identity_id] = dict(overrides or {})

        for key, value in _section(data, "quadrature").items():
            if key not in QUADRATURE_DEFAULTS:
                _fail("quadrature", f"unknown key {key}")
            config.quadrature[key] = _positive_int(value, f"quadrature.{key}")

        budget = _section(data, "budget")
        for key in budget:
            if key not in ("max_index_count", "max_box_nodes"):
                _fail("budget", f"unknown key {key}")
        if "max_index_count" in budget:
            config.max_index_count = _positive_int(budget["max_index_count"], "budget.max_index_count")
        if "max_box_nodes" in budget:
            config.max_box_nodes = _positive_int(budget["max_box_nodes"], "budget.max_box_nodes")

        for key, value in _section(data, "thresholds").items():
            if key != "default":
                get_identity(key)
            threshold = _complex_value(value, f"thresholds.{key}")
            if threshold.imag != 0 or not threshold.real > 0:
                _fail(f"thresholds.{key}", "must be a positive number")
            config.thresholds[key] = threshold.real

        logging_section = _section(data, "logging")
        level = str(logging_section.get("level", config.log_level)).upper()
        if level not in LOG_LEVELS:
            _fail("logging.level", f"must be one of {', '.join(LOG_LEVELS)}")
        config.log_level = level
        config.log_file = logging_section.get("file") or None
        return config

    @classmethod
    def load(cls, config_path: Optional[str], required: bool = False) -> "VerifyConfig":
        """
        Read a YAML settings file; a missing optional file gives the defaults.

        Raises:
            SuiteConfigError: If a required file is missing or the YAML is malformed
        """
        if config_path is None:
            return cls()
        path = Path(config_path)
        if not path.exists():
            if required:
                raise SuiteConfigError(f"config file not found: {path}")
            logger.debug(f"No config at {path}; using defaults")
            return cls()
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise SuiteConfigError(f"{path}: {e}")
        return cls.from_dict(data)

    def series_for(self, identity_id: str, overrides: Optional[Dict[str, Any]] = None) -> SeriesControl:
        spec = get_identity(identity_id)
        ctl = self.series
        if spec.series is not None and identity_id not in self.identity_series:
            ctl = spec.series
        ctl = SeriesControl.from_dict(self.identity_series.get(identity_id), ctl)
        ctl = SeriesControl.from_dict(overrides, ctl)
        if self.max_order is not None:
            ctl = ctl.with_overrides(max_total_order=self.max_order)
        return ctl

    def scalar_series(self) -> SeriesControl:
        if self.max_order is not None:
            return self.inner_series.with_overrides(max_total_order=self.max_order)
        return self.inner_series

    def threshold_for(self, identity_id: str, expected: Optional[float] = None) -> float:
        if self.tol is not None:
            return self.tol
        if expected is not None:
            return expected
        if identity_id in self.thresholds:
            return self.thresholds[identity_id]
        if "default" in self.thresholds:
            return self.thresholds["default"]
        spec = IDENTITIES.get(identity_id)
        return spec.threshold if spec is not None else DEFAULT_THRESHOLD

    def quadrature_size(self, spec: IdentitySpec, overrides: Optional[Dict[str, int]] = None) -> Optional[int]:
        if spec.quadrature is None:
            return None
        key, _ = spec.quadrature
        overrides = overrides or {}
        for name in (key,) + QUADRATURE_ALIASES:
            if name in overrides:
                return overrides[name]
        return self.quadrature[key]


def validate_quadrature_overrides(raw: Any, location: str) -> Dict[str, int]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        _fail(location, "must be a mapping")
    allowed = set(QUADRATURE_DEFAULTS) | set(QUADRATURE_ALIASES)
    parsed = {}
    for key, value in raw.items():
        if key not in allowed:
            _fail(location, f"unknown key {key}")
        parsed[key] = _positive_int(value, f"{location}.{key}")
    return parsed


def run_identity(
    identity_id: str,
    params: Dict[str, Any],
    config: VerifyConfig,
    series_overrides: Optional[Dict[str, Any]] = None,
    quadrature_overrides: Optional[Dict[str, int]] = None,
) -> IdentityReport:
    """
    Evaluate one identity on resolved parameters.

    Raises:
        SpecialFunctionError: Domain, pole, budget or nested convergence failures
        IdentitySkipped: When the identity cannot be certified at these parameters
    """
    spec = get_identity(identity_id)
    kwargs = {p.keyword: params[p.name] for p in spec.params}
    if "ctl" in spec.uses:
        kwargs["ctl"] = config.series_for(identity_id, series_overrides)
    if "inner_ctl" in spec.uses:
        kwargs["inner_ctl"] = config.inner_series
    if "max_index_count" in spec.uses:
        kwargs["max_index_count"] = config.max_index_count
    if "max_box_nodes" in spec.uses:
        kwargs["max_box_nodes"] = config.max_box_nodes
    if "jobs" in spec.uses:
        kwargs["jobs"] = config.quadrature_jobs
    size = config.quadrature_size(spec, quadrature_overrides)
    if size is not None and spec.quadrature is not None:
        kwargs[spec.quadrature[1]] = size
    logger.debug(f"run_identity: {identity_id} with {sorted(kwargs)}")
    return spec.evaluator(**kwargs)


def evaluate_function(name: str, params: Dict[str, Any], config: VerifyConfig) -> complex:
    """Evaluate a scalar function on resolved parameters."""
    spec = get_function(name)
    kwargs = {p.keyword: params[p.name] for p in spec.params}
    if spec.uses_series:
        kwargs["ctl"] = config.scalar_series()
    return complex(spec.evaluator(**kwargs))
