"""Loading, validation and persistence of catalogs, scenarios and reports.

Documents are strict JSON: an explicit schema version where applicable and no
unknown fields, so typos fail loudly with the offending entity named. Reports
are written byte-stably in text-table, CSV (RFC 4180) or JSON form.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Any, Sequence

from .core import (
    Criterion,
    DecisionMatrix,
    Direction,
    Method,
    ServiceCatalog,
    ServiceProfile,
    WeightVector,
    validate_weights,
)
from .ahp import PairwiseMatrix
from .errors import (
    EmptyDocument,
    EmptyReport,
    ParseError,
    SchemaVersionUnsupported,
    SinkWriteError,
    SumNotOne,
    UnknownMethod,
    ValidationError,
)
from .scenarios import MethodComparison, Scenario, fmt_score, rank_table

CATALOG_SCHEMA_VERSION = 1

REPORT_FORMATS = ("table-text", "delimited", "structured")

_CSV_COLUMNS = [
    "scenario",
    "service",
    "ahp_score",
    "ahp_rank",
    "saw_score",
    "saw_rank",
    "kendall_tau",
    "exact_rank_match",
]


def _read_text(source: str | Path | bytes | IO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _parse_json(source: str | Path | bytes | IO, what: str) -> Any:
    try:
        text = _read_text(source)
    except UnicodeDecodeError as exc:
        raise ParseError(f"{what} is not valid UTF-8: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{what} is not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc


def _expect_keys(obj: dict, required: Sequence[str], optional: Sequence[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(f"{what} must be a JSON object")
    for key in required:
        if key not in obj:
            raise ValidationError(f"{what} is missing required field '{key}'")
    allowed = set(required) | set(optional)
    for key in obj:
        if key not in allowed:
            raise ValidationError(f"{what} has unknown field '{key}'")


def _parse_direction(raw: Any, what: str) -> Direction:
    if raw == "benefit":
        return Direction.BENEFIT
    if raw == "cost":
        return Direction.COST
    raise ValidationError(f"{what}: direction must be 'benefit' or 'cost', got {raw!r}")


def load_catalog(source: str | Path | bytes | IO) -> ServiceCatalog:
    """Parse and fully validate a catalog document."""
    doc = _parse_json(source, "catalog document")
    _expect_keys(doc, ["schema_version", "criteria", "services"], [], "catalog document")
    version = doc["schema_version"]
    if version != CATALOG_SCHEMA_VERSION:
        raise SchemaVersionUnsupported(
            f"catalog schema_version {version!r} is not supported (expected {CATALOG_SCHEMA_VERSION})"
        )
    if not isinstance(doc["criteria"], list) or not isinstance(doc["services"], list):
        raise ValidationError("catalog 'criteria' and 'services' must be lists")
    criteria = []
    for entry in doc["criteria"]:
        _expect_keys(entry, ["id", "name", "direction"], ["unit"], "criterion entry")
        criteria.append(
            Criterion(
                id=str(entry["id"]),
                name=str(entry["name"]),
                direction=_parse_direction(entry["direction"], f"criterion '{entry['id']}'"),
                unit=str(entry.get("unit", "")),
            )
        )
    services = []
    for entry in doc["services"]:
        _expect_keys(entry, ["id", "name", "qos"], [], "service entry")
        qos = entry["qos"]
        if not isinstance(qos, dict):
            raise ValidationError(f"service '{entry['id']}': qos must be an object")
        values = {}
        for cid, value in qos.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(
                    f"service '{entry['id']}': value for '{cid}' must be a number"
                )
            values[str(cid)] = float(value)
        services.append(ServiceProfile(str(entry["id"]), str(entry["name"]), values))
    return ServiceCatalog(tuple(criteria), tuple(services))


def save_catalog(catalog: ServiceCatalog, sink: IO[str] | str | Path) -> None:
    """Write a catalog document that load_catalog reads back structurally equal."""
    doc = {
        "schema_version": CATALOG_SCHEMA_VERSION,
        "criteria": [
            {"id": c.id, "name": c.name, "direction": c.direction.value, "unit": c.unit}
            for c in catalog.criteria
        ],
        "services": [
            {"id": s.id, "name": s.name, "qos": {cid: s.qos[cid] for cid in catalog.criterion_ids}}
            for s in catalog.services
        ],
    }
    _write(sink, json.dumps(doc, indent=2) + "\n")


def load_scenarios(
    source: str | Path | bytes | IO,
    criteria: Sequence[Criterion] | None = None,
) -> list[Scenario]:
    """Parse a scenario list; weight rows are revalidated as they load.

    When a criteria list is given, coverage is checked against it; otherwise
    only positivity and the sum-to-one rule can be enforced here.
    """
    doc = _parse_json(source, "scenario document")
    if not isinstance(doc, list):
        raise ValidationError("scenario document must be a JSON list")
    if not doc:
        raise EmptyDocument("scenario document contains no scenarios")
    scenarios = []
    for entry in doc:
        _expect_keys(entry, ["name", "weights"], ["methods", "cr", "notes"], "scenario entry")
        name = str(entry["name"])
        raw_weights = entry["weights"]
        if not isinstance(raw_weights, dict) or not raw_weights:
            raise ValidationError(f"scenario '{name}': weights must be a non-empty object")
        weights_map = {}
        for cid, w in raw_weights.items():
            if not isinstance(w, (int, float)) or isinstance(w, bool):
                raise ValidationError(f"scenario '{name}': weight for '{cid}' must be a number")
            weights_map[str(cid)] = float(w)
        cr = entry.get("cr")
        if cr is not None and (not isinstance(cr, (int, float)) or isinstance(cr, bool) or cr < 0):
            raise ValidationError(f"scenario '{name}': cr must be a nonnegative number")
        try:
            if criteria is not None:
                weights = validate_weights(weights_map, criteria)
            else:
                weights = WeightVector(weights_map)
        except SumNotOne as exc:
            raise SumNotOne(f"scenario '{name}': {exc}", exc.total) from exc
        except ValidationError as exc:
            raise type(exc)(f"scenario '{name}': {exc}") from exc
        if cr is not None:
            weights = WeightVector(
                weights.weights, provenance=weights.provenance, consistency_ratio=float(cr)
            )
        methods = tuple(_parse_method(m, name) for m in entry.get("methods", ["AHP", "SAW"]))
        notes = entry.get("notes")
        scenarios.append(
            Scenario(name=name, weights=weights, methods=methods, notes=notes)
        )
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ValidationError("scenario names must be unique within a document")
    return scenarios


def _parse_method(raw: Any, scenario_name: str) -> Method:
    try:
        return Method(raw)
    except ValueError:
        raise UnknownMethod(
            f"scenario '{scenario_name}': unknown method {raw!r} (expected 'AHP' or 'SAW')"
        ) from None


def load_pairwise_matrix(source: str | Path | bytes | IO) -> PairwiseMatrix:
    """Parse a comparison-matrix document: {"ids": [...], "entries": [[...]]}."""
    doc = _parse_json(source, "pairwise matrix document")
    _expect_keys(doc, ["ids", "entries"], [], "pairwise matrix document")
    ids = doc["ids"]
    entries = doc["entries"]
    if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
        raise ValidationError("pairwise matrix 'ids' must be a list of strings")
    if not isinstance(entries, list):
        raise ValidationError("pairwise matrix 'entries' must be a list of rows")
    rows = []
    for row in entries:
        if not isinstance(row, list):
            raise ValidationError("pairwise matrix rows must be lists of numbers")
        rows.append(tuple(float(v) for v in row))
    return PairwiseMatrix(tuple(ids), tuple(rows))


def load_decision_matrix_csv(source: str | Path | bytes | IO) -> DecisionMatrix:
    """Read a raw decision matrix from CSV: header 'service,<criterion ids...>'."""
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDocument("decision matrix CSV is empty") from None
    if len(header) < 2:
        raise ValidationError("decision matrix CSV needs a service column and at least one criterion")
    cols = tuple(h.strip() for h in header[1:])
    rows = []
    values = []
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(header):
            raise ValidationError(
                f"decision matrix CSV line {lineno}: expected {len(header)} fields, got {len(record)}"
            )
        rows.append(record[0].strip())
        try:
            values.append(tuple(float(v) for v in record[1:]))
        except ValueError as exc:
            raise ValidationError(f"decision matrix CSV line {lineno}: {exc}") from exc
    return DecisionMatrix(tuple(rows), cols, tuple(values))


def _agreement_line(c: MethodComparison) -> str | None:
    if c.kendall_tau is None:
        return None
    return (
        f"agreement: kendall tau = {fmt_score(c.kendall_tau)}, "
        f"exact rank match: {'yes' if c.exact_rank_match else 'no'}, "
        f"top choice agrees: {'yes' if c.top_choice_agrees else 'no'}"
    )


def render_text_table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def format_report(comparisons: Sequence[MethodComparison], format: str) -> str:
    """Render comparisons in one of the three report formats."""
    if not comparisons:
        raise EmptyReport("report needs at least one comparison")
    if format == "table-text":
        blocks = []
        for c in comparisons:
            lines = [f"== {c.scenario.name} ==", render_text_table(rank_table(c))]
            agreement = _agreement_line(c)
            if agreement:
                lines.append(agreement)
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"
    if format == "delimited":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(_CSV_COLUMNS)
        for c in comparisons:
            by_method = {r.method: r for r in c.rankings}
            for sid in c.service_ids:
                record: list[str] = [c.scenario.name, sid]
                for method in (Method.AHP, Method.SAW):
                    ranking = by_method.get(method)
                    if ranking is None:
                        record.extend(["", ""])
                    else:
                        entry = next(e for e in ranking.entries if e.service_id == sid)
                        record.extend([fmt_score(entry.score), str(entry.rank)])
                if c.kendall_tau is None:
                    record.extend(["", ""])
                else:
                    record.extend(
                        [fmt_score(c.kendall_tau), "true" if c.exact_rank_match else "false"]
                    )
                writer.writerow(record)
        return out.getvalue()
    if format == "structured":
        return json.dumps([c.as_dict() for c in comparisons], indent=2) + "\n"
    raise ValidationError(f"unknown report format {format!r} (expected one of {REPORT_FORMATS})")


def save_report(
    comparisons: Sequence[MethodComparison],
    format: str,
    sink: IO[str] | str | Path,
) -> None:
    """Render and write a report; identical inputs produce identical bytes."""
    _write(sink, format_report(comparisons, format))


def _write(sink: IO[str] | str | Path, text: str) -> None:
    try:
        if isinstance(sink, (str, Path)):
            Path(sink).write_text(text, encoding="utf-8", newline="")
        else:
            sink.write(text)
    except OSError as exc:
        raise SinkWriteError(f"could not write report: {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    """Engine and I/O settings shared by the CLI and the HTTP server."""

    catalog: str | None = None
    scenarios: tuple[str, ...] = ()
    output_dir: str | None = None
    format: str = "table"
    clamp_saaty: bool = False
    eigen_tolerance: float = 1e-10
    eigen_max_iterations: int = 1000
    timestamps: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        if self.eigen_tolerance <= 0:
            raise ValidationError(
                f"eigen_tolerance must be > 0, got {self.eigen_tolerance}"
            )
        if self.eigen_max_iterations < 1:
            raise ValidationError(
                f"eigen_max_iterations must be >= 1, got {self.eigen_max_iterations}"
            )
        if self.format not in ("table", "csv", "json"):
            raise ValidationError(
                f"format must be one of table, csv, json; got {self.format!r}"
            )


_RUNCONFIG_FIELDS = (
    "catalog",
    "scenarios",
    "output_dir",
    "format",
    "clamp_saaty",
    "eigen_tolerance",
    "eigen_max_iterations",
    "timestamps",
)


def load_run_config(source: str | Path | bytes | IO) -> RunConfig:
    doc = _parse_json(source, "run config")
    _expect_keys(doc, [], _RUNCONFIG_FIELDS, "run config")
    kwargs = {k: doc[k] for k in _RUNCONFIG_FIELDS if k in doc}
    if "scenarios" in kwargs:
        kwargs["scenarios"] = tuple(str(s) for s in kwargs["scenarios"])
    return RunConfig(**kwargs)


def builtin_catalog() -> ServiceCatalog:
    """The bundled desk catalog (constructed data; see data/PROVENANCE.md)."""
    path = resources.files("rankbench.data").joinpath("desk_catalog.json")
    return load_catalog(path.read_bytes())


def builtin_scenarios() -> list[Scenario]:
    """The four bundled weight profiles, validated against the desk catalog."""
    path = resources.files("rankbench.data").joinpath("simulations.json")
    return load_scenarios(path.read_bytes(), criteria=builtin_catalog().criteria)
