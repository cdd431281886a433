"""
Suite Runner - Batch identity verification with machine-readable reports

This module provides:
- SuiteConfig: a validated list of identity entries read from YAML or JSON/JSON5,
  with random parameter draws expanded deterministically from the seed
- SuiteRunner: evaluates entries sequentially or on a process pool, keeping
  config order in the output
- SuiteResult: json/csv reports written atomically, reloadable for a re-run
"""

import csv
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import json5
import numpy as np
import yaml

from core_types import SeriesControl
from errors import (
    BudgetExceededError,
    DomainError,
    IdentitySkipped,
    NonConvergenceError,
    SpecialFunctionError,
    SuiteConfigError,
)
from identity_registry import (
    VerifyConfig,
    encode,
    get_identity,
    resolve_params,
    run_identity,
    validate_quadrature_overrides,
)
from identity_report import IdentityReport

logger = logging.getLogger(__name__)

RECORD_LOGGER = "suite_records"

STATUSES = ("pass", "fail", "skip", "error")
ENTRY_FIELDS = {"identity_id", "params", "series", "quadrature", "expected_max_rel_residual", "samples"}

CSV_FIELDS = [
    "identity_id",
    "entry",
    "sample",
    "status",
    "threshold",
    "params",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_residual",
    "rel_residual",
    "truncation_order",
    "shells_used",
    "converged",
    "wall_time_s",
    "channels",
    "notes",
    "series",
    "quadrature",
]


# ---------------------------------------------------------------------------
# Random draws
# ---------------------------------------------------------------------------


def _bounds(raw: Any, location: str) -> Tuple[float, float]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise SuiteConfigError(f"{location}: expected [lo, hi]")
    try:
        lo, hi = float(raw[0]), float(raw[1])
    except (TypeError, ValueError):
        raise SuiteConfigError(f"{location}: bounds must be numbers")
    if not lo <= hi:
        raise SuiteConfigError(f"{location}: lo must not exceed hi")
    return lo, hi


def _draw_uniform(raw: Dict, rng: np.random.Generator, location: str) -> Any:
    unknown = set(raw) - {"uniform", "imag", "size", "normalize_sum"}
    if unknown:
        raise SuiteConfigError(f"{location}: unknown draw keys {', '.join(sorted(unknown))}")
    lo, hi = _bounds(raw["uniform"], f"{location}.uniform")
    size = raw.get("size")
    if size is not None and (isinstance(size, bool) or not isinstance(size, int) or size < 1):
        raise SuiteConfigError(f"{location}.size: must be a positive integer")
    count = size or 1

    values = rng.uniform(lo, hi, count).astype(complex)
    if "imag" in raw:
        ilo, ihi = _bounds(raw["imag"], f"{location}.imag")
        values = values + 1j * rng.uniform(ilo, ihi, count)

    if "normalize_sum" in raw:
        if size is None:
            raise SuiteConfigError(f"{location}: normalize_sum needs size")
        try:
            target = complex(raw["normalize_sum"])
        except (TypeError, ValueError):
            raise SuiteConfigError(f"{location}.normalize_sum: must be a number")
        total = values.sum()
        if total == 0:
            raise SuiteConfigError(f"{location}: drawn vector sums to zero")
        values = values * (target / total)

    scalars = [complex(v) if v.imag != 0 else float(v.real) for v in values]
    return scalars if size is not None else scalars[0]


def expand_draws(raw: Any, rng: np.random.Generator, location: str) -> Any:
    """
    Replace {uniform: ...} and {choice: [...]} objects with drawn values.

    Draws are made in document order, so a fixed generator state gives the
    same parameters on every run.
    """
    if isinstance(raw, dict):
        if "choice" in raw:
            if set(raw) != {"choice"} or not isinstance(raw["choice"], list) or not raw["choice"]:
                raise SuiteConfigError(f"{location}: choice must be a non-empty list and stand alone")
            picked = raw["choice"][int(rng.integers(len(raw["choice"])))]
            return expand_draws(picked, rng, location)
        if "uniform" in raw:
            return _draw_uniform(raw, rng, location)
        return {key: expand_draws(value, rng, f"{location}.{key}") for key, value in raw.items()}
    if isinstance(raw, list):
        return [expand_draws(item, rng, f"{location}[{i}]") for i, item in enumerate(raw)]
    return raw


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class SuiteEntry:
    """One resolved evaluation: an entry of the suite file at one sample index."""

    entry: int
    sample: int
    identity_id: str
    params: Dict[str, Any]
    series: Dict[str, Any] = field(default_factory=dict)
    quadrature: Dict[str, int] = field(default_factory=dict)
    expected_max_rel_residual: Optional[float] = None

    def encoded_params(self) -> Dict[str, Any]:
        spec = get_identity(self.identity_id)
        return {p.name: encode(p, self.params[p.name]) for p in spec.params}


def _expected_threshold(raw: Any, location: str) -> Optional[float]:
    if raw is None:
        return None
    if isinstance(raw, str):
        try:
            raw = float(raw)
        except ValueError:
            raise SuiteConfigError(f"{location}: must be a positive number")
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not raw > 0:
        raise SuiteConfigError(f"{location}: must be a positive number")
    return float(raw)


def _series_overrides(raw: Any, location: str) -> Dict[str, Any]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise SuiteConfigError(f"{location}: must be a mapping")
    try:
        SeriesControl.from_dict(raw)
    except (DomainError, TypeError, ValueError) as e:
        raise SuiteConfigError(f"{location}: {e}")
    return dict(raw)


@dataclass
class SuiteConfig:
    """
    A validated suite.

    Every entry is expanded and type-checked against its identity's
    parameters when the suite is built, so a malformed entry stops the run
    before anything is evaluated.
    """

    seed: int = 0
    budget: Optional[int] = None
    entries: List[SuiteEntry] = field(default_factory=list)
    source: Optional[str] = None

    @classmethod
    def from_dict(cls, payload: Any, seed: Optional[int] = None, source: Optional[str] = None) -> "SuiteConfig":
        if payload is None:
            payload = {}
        if not isinstance(payload, dict):
            raise SuiteConfigError("suite: top level must be a mapping")
        unknown = set(payload) - {"seed", "budget", "entries"}
        if unknown:
            raise SuiteConfigError(f"suite: unknown fields {', '.join(sorted(unknown))}")

        if seed is None:
            seed = payload.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise SuiteConfigError("suite.seed: must be a nonnegative integer")

        budget = payload.get("budget")
        if budget is not None and (isinstance(budget, bool) or not isinstance(budget, int) or budget < 1):
            raise SuiteConfigError("suite.budget: must be a positive integer")

        entries_raw = payload.get("entries") or []
        if not isinstance(entries_raw, list):
            raise SuiteConfigError("suite.entries: must be a list")

        entries: List[SuiteEntry] = []
        for index, entry_data in enumerate(entries_raw):
            entries.extend(_expand_entry(entry_data, index, seed))
        logger.info(f"Suite: {len(entries_raw)} entries expanded to {len(entries)} evaluations (seed {seed})")
        return cls(seed=seed, budget=budget, entries=entries, source=source)

    @classmethod
    def load(cls, suite_path: str, seed: Optional[int] = None) -> "SuiteConfig":
        """
        Read a suite from .yaml/.yml (PyYAML) or .json/.json5 (json5).

        Raises:
            SuiteConfigError: On a missing file, a parse error or an invalid entry
        """
        path = Path(suite_path)
        if not path.exists():
            raise SuiteConfigError(f"suite file not found: {path}")
        suffix = path.suffix.lower()
        try:
            with open(path, "r", encoding="utf-8") as f:
                if suffix in (".yaml", ".yml"):
                    payload = yaml.safe_load(f)
                elif suffix in (".json", ".json5"):
                    payload = json5.load(f)
                else:
                    raise SuiteConfigError(f"unsupported suite format {suffix or '(none)'}; use .yaml, .json or .json5")
        except (yaml.YAMLError, ValueError) as e:
            if isinstance(e, SuiteConfigError):
                raise
            raise SuiteConfigError(f"{path}: {e}")
        return cls.from_dict(payload, seed=seed, source=str(path))

    @classmethod
    def from_report(cls, report_path: str) -> "SuiteConfig":
        """
        Turn a saved suite report back into a suite.

        Each record becomes one entry with its resolved parameters, the series
        control and quadrature size it ran with and its threshold, so a re-run
        reproduces the residual fields exactly.
        """
        result = SuiteResult.load(report_path)
        entries = []
        for position, record in enumerate(result.records):
            location = f"records[{position}]"
            params = resolve_params(get_identity(record.identity_id).params, record.params, f"{location}.params")
            entries.append(
                SuiteEntry(
                    entry=record.entry,
                    sample=record.sample,
                    identity_id=record.identity_id,
                    params=params,
                    series=_series_overrides(record.series, f"{location}.series"),
                    quadrature=validate_quadrature_overrides(record.quadrature, f"{location}.quadrature"),
                    expected_max_rel_residual=record.threshold,
                )
            )
        return cls(seed=result.seed, budget=result.budget, entries=entries, source=str(report_path))


def _expand_entry(entry_data: Any, index: int, seed: int) -> List[SuiteEntry]:
    location = f"entries[{index}]"
    if not isinstance(entry_data, dict):
        raise SuiteConfigError(f"{location}: must be a mapping")
    if "identity_id" not in entry_data:
        raise SuiteConfigError(f"Missing required field: {location}.identity_id")
    unknown = set(entry_data) - ENTRY_FIELDS
    if unknown:
        raise SuiteConfigError(f"{location}: unknown fields {', '.join(sorted(unknown))}")

    identity_id = str(entry_data["identity_id"])
    try:
        spec = get_identity(identity_id)
    except SuiteConfigError as e:
        raise SuiteConfigError(f"{location}.identity_id: {e}")

    samples = entry_data.get("samples", 1)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise SuiteConfigError(f"{location}.samples: must be a positive integer")
    series = _series_overrides(entry_data.get("series"), f"{location}.series")
    quadrature = validate_quadrature_overrides(entry_data.get("quadrature"), f"{location}.quadrature")
    expected = _expected_threshold(entry_data.get("expected_max_rel_residual"), f"{location}.expected_max_rel_residual")
    raw_params = entry_data.get("params") or {}

    expanded = []
    for sample in range(samples):
        rng = np.random.default_rng([seed, index, sample])
        drawn = expand_draws(raw_params, rng, f"{location}.params")
        params = resolve_params(spec.params, drawn, f"{location}.params")
        expanded.append(SuiteEntry(index, sample, identity_id, params, series, quadrature, expected))
    return expanded


# ---------------------------------------------------------------------------
# Records and results
# ---------------------------------------------------------------------------


@dataclass
class SuiteRecord:
    """
    Outcome of one suite evaluation.

    report is None for skipped and errored evaluations; their reason is kept
    in notes.
    """

    identity_id: str
    entry: int
    sample: int
    params: Dict[str, Any]
    status: str
    threshold: float
    report: Optional[IdentityReport] = None
    notes: str = ""
    series: Optional[Dict[str, Any]] = None
    quadrature: Optional[Dict[str, int]] = None

    @property
    def error_type(self) -> Optional[str]:
        """Exception class name of an errored evaluation, read back from notes."""
        if self.status != "error":
            return None
        return self.notes.split(":", 1)[0] or None

    def to_dict(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "identity_id": self.identity_id,
            "entry": self.entry,
            "sample": self.sample,
            "params": self.params,
            "status": self.status,
            "threshold": self.threshold,
        }
        if self.report is not None:
            report = self.report.to_dict()
            report.pop("identity_id")
            record.update(report)
        else:
            record.update(
                {
                    "lhs": None,
                    "rhs": None,
                    "abs_residual": None,
                    "rel_residual": None,
                    "truncation_order": None,
                    "shells_used": None,
                    "converged": False,
                    "wall_time_s": None,
                    "channels": {},
                    "notes": self.notes,
                }
            )
        record["series"] = self.series
        record["quadrature"] = self.quadrature
        return record

    def to_csv_row(self) -> Dict[str, Any]:
        data = self.to_dict()
        row = {key: data.get(key) for key in CSV_FIELDS if key in data}
        for side in ("lhs", "rhs"):
            value = data[side]
            row[f"{side}_re"] = value["re"] if value else None
            row[f"{side}_im"] = value["im"] if value else None
        for key in ("params", "channels", "series", "quadrature"):
            row[key] = json.dumps(data[key], ensure_ascii=False)
        return row

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SuiteRecord":
        report = None
        if data.get("lhs") is not None:
            report = IdentityReport.from_dict(data)
        status = data["status"]
        if status not in STATUSES:
            raise SuiteConfigError(f"record status {status!r} is not one of {', '.join(STATUSES)}")
        return cls(
            identity_id=data["identity_id"],
            entry=int(data.get("entry", 0)),
            sample=int(data.get("sample", 0)),
            params=data.get("params") or {},
            status=status,
            threshold=float(data["threshold"]),
            report=report,
            notes=data.get("notes", "") or "",
            series=data.get("series"),
            quadrature=data.get("quadrature"),
        )

    @classmethod
    def from_csv_row(cls, row: Dict[str, str]) -> "SuiteRecord":
        data: Dict[str, Any] = dict(row)
        for key in ("params", "channels", "series", "quadrature"):
            data[key] = json.loads(row[key]) if row.get(key) else None
        if row.get("lhs_re"):
            data["lhs"] = {"re": float(row["lhs_re"]), "im": float(row["lhs_im"])}
            data["rhs"] = {"re": float(row["rhs_re"]), "im": float(row["rhs_im"])}
            data["converged"] = row["converged"] == "True"
            data["channels"] = data["channels"] or {}
        else:
            data["lhs"] = None
        return cls.from_dict(data)


@dataclass
class SuiteResult:
    """All records of a suite run, in config order."""

    seed: int
    records: List[SuiteRecord] = field(default_factory=list)
    source: Optional[str] = None
    budget: Optional[int] = None

    def _count(self, status: str) -> int:
        return sum(1 for r in self.records if r.status == status)

    def counts(self) -> Tuple[int, int, int]:
        """(passed, failed, skipped); errored evaluations are in none of them."""
        return self._count("pass"), self._count("fail"), self._count("skip")

    def errors(self) -> List[SuiteRecord]:
        return [r for r in self.records if r.status == "error"]

    def summary(self) -> str:
        passed, failed, skipped = self.counts()
        line = f"{passed} passed / {failed} failed / {skipped} skipped"
        errors = len(self.errors())
        if errors:
            line += f" ({errors} invalid)"
        return line

    def exit_code(self) -> int:
        """
        2 if any entry hit a domain, pole or parameter error, else 3 if any
        exceeded the budget, else 1 if any failed, else 0.
        """
        error_types = {r.error_type for r in self.errors()}
        if error_types - {BudgetExceededError.__name__}:
            return 2
        if error_types:
            return 3
        return 0 if self._count("fail") == 0 else 1

    def to_dict(self) -> Dict[str, Any]:
        passed, failed, skipped = self.counts()
        return {
            "seed": self.seed,
            "source": self.source,
            "budget": self.budget,
            "summary": {"passed": passed, "failed": failed, "skipped": skipped, "errors": len(self.errors())},
            "records": [record.to_dict() for record in self.records],
        }

    def save(self, output_path: str, fmt: str = "json"):
        """
        Write the report; the file appears complete or not at all.

        Raises:
            SuiteConfigError: On an unknown format
        """
        if fmt not in ("json", "csv"):
            raise SuiteConfigError(f"unknown report format {fmt!r}; use json or csv")
        output_file = Path(output_path)
        output_file.parent.mkdir(parents=True, exist_ok=True)
        tmp = output_file.with_suffix(output_file.suffix + ".tmp")
        try:
            with open(tmp, "w", encoding="utf-8", newline="") as f:
                if fmt == "json":
                    json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)
                else:
                    writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, quoting=csv.QUOTE_MINIMAL)
                    writer.writeheader()
                    for record in self.records:
                        writer.writerow(record.to_csv_row())
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, output_file)
        finally:
            if tmp.exists():
                tmp.unlink()
        logger.info(f"Suite report written to {output_file} ({len(self.records)} records)")

    @classmethod
    def load(cls, report_path: str) -> "SuiteResult":
        path = Path(report_path)
        if not path.exists():
            raise SuiteConfigError(f"report not found: {path}")
        try:
            if path.suffix.lower() == ".csv":
                with open(path, "r", encoding="utf-8", newline="") as f:
                    records = [SuiteRecord.from_csv_row(row) for row in csv.DictReader(f)]
                return cls(seed=0, records=records, source=str(path))
            with open(path, "r", encoding="utf-8") as f:
                payload = json.load(f)
            records = [SuiteRecord.from_dict(data) for data in payload.get("records", [])]
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, SuiteConfigError):
                raise
            raise SuiteConfigError(f"{path}: malformed report ({e})")
        return cls(
            seed=int(payload.get("seed", 0)), records=records, source=payload.get("source"), budget=payload.get("budget")
        )


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def _effective_settings(entry: SuiteEntry, config: VerifyConfig) -> Tuple[Optional[Dict], Optional[Dict[str, int]]]:
    spec = get_identity(entry.identity_id)
    series = config.series_for(entry.identity_id, entry.series).to_dict() if "ctl" in spec.uses else None
    quadrature = None
    size = config.quadrature_size(spec, entry.quadrature)
    if size is not None and spec.quadrature is not None:
        quadrature = {spec.quadrature[0]: size}
    return series, quadrature


def evaluate_entry(task: Tuple[SuiteEntry, VerifyConfig]) -> SuiteRecord:
    """Evaluate one entry; domain and budget errors become error records."""
    entry, config = task
    threshold = config.threshold_for(entry.identity_id, entry.expected_max_rel_residual)
    series, quadrature = _effective_settings(entry, config)
    record = SuiteRecord(
        identity_id=entry.identity_id,
        entry=entry.entry,
        sample=entry.sample,
        params=entry.encoded_params(),
        status="error",
        threshold=threshold,
        series=series,
        quadrature=quadrature,
    )
    try:
        report = run_identity(entry.identity_id, entry.params, config, series, quadrature)
    except IdentitySkipped as e:
        record.status = "skip"
        record.notes = e.reason
        return record
    except NonConvergenceError as e:
        # Nested scalar series gave up: an identity failure, as for check
        record.status = "fail"
        record.notes = f"{type(e).__name__}: {e}"
        return record
    except (SpecialFunctionError, ArithmeticError) as e:
        record.notes = f"{type(e).__name__}: {e}"
        return record

    record.report = report
    record.status = "pass" if report.passed(threshold) else "fail"
    return record


def setup_record_logger(log_file: Optional[str]) -> logging.Logger:
    """One line per finished evaluation, written only to log_file."""
    record_logger = logging.getLogger(RECORD_LOGGER)
    record_logger.setLevel(logging.INFO)
    for handler in list(record_logger.handlers):
        record_logger.removeHandler(handler)
        handler.close()
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(log_file, mode="a", encoding="utf-8")
        handler.setLevel(logging.INFO)
        handler.setFormatter(logging.Formatter("%(message)s"))
        record_logger.addHandler(handler)
    else:
        record_logger.addHandler(logging.NullHandler())
    record_logger.propagate = False
    return record_logger


def _record_line(record: SuiteRecord) -> str:
    residual = record.report.rel_residual if record.report is not None else math.nan
    return (
        f"{record.identity_id} entry={record.entry} sample={record.sample} "
        f"status={record.status} rel_residual={residual:.3e} threshold={record.threshold:.1e}"
    )


class SuiteRunner:
    """
    Evaluates a SuiteConfig.

    Usage:
        runner = SuiteRunner(VerifyConfig.load("config.yaml"), jobs=4)
        result = runner.run(SuiteConfig.load("suites/default_suite.yaml"))
        result.save("report.json")
    """

    def __init__(self, config: VerifyConfig, jobs: int = 1):
        if jobs < 1:
            raise SuiteConfigError(f"jobs must be positive, got {jobs}")
        self.config = config
        self.jobs = jobs
        self.record_logger = logging.getLogger(RECORD_LOGGER)

    def run(self, suite: SuiteConfig) -> SuiteResult:
        config = self.config
        if suite.budget is not None:
            config = replace(config, max_index_count=suite.budget)
        if self.jobs > 1:
            config = replace(config, quadrature_jobs=1)
        tasks = [(entry, config) for entry in suite.entries]

        records: List[SuiteRecord] = []
        if self.jobs > 1 and len(tasks) > 1:
            logger.info(f"Running {len(tasks)} evaluations on {self.jobs} processes")
            with ProcessPoolExecutor(max_workers=self.jobs) as executor:
                for record in executor.map(evaluate_entry, tasks):
                    records.append(self._finish(record, len(records), len(tasks)))
        else:
            for task in tasks:
                records.append(self._finish(evaluate_entry(task), len(records), len(tasks)))

        return SuiteResult(seed=suite.seed, records=records, source=suite.source, budget=suite.budget)

    def _finish(self, record: SuiteRecord, done: int, total: int) -> SuiteRecord:
        self.record_logger.info(_record_line(record))
        logger.info(f"[{done + 1}/{total}] {record.identity_id}: {record.status}")
        return record
