"""Shared domain model and normalization primitives.

Criteria, service catalogs, decision matrices and weight vectors are frozen
dataclasses validated at construction time, so every instance in circulation
satisfies its invariants and can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .errors import (
    CatalogTooSmall,
    EmptyColumn,
    MissingCriterion,
    NonPositiveValue,
    NonPositiveWeight,
    SumNotOne,
    UnknownCriterion,
    ValidationError,
)

# Tolerance on |sum(weights) - 1|: admits 5-decimal weight tables while still
# catching genuine mistakes.
WEIGHT_SUM_TOL = 1e-5


class Direction(Enum):
    """Whether a higher raw value is better (benefit) or worse (cost)."""

    BENEFIT = "benefit"
    COST = "cost"


class Method(Enum):
    AHP = "AHP"
    SAW = "SAW"


class Provenance(Enum):
    DIRECT = "direct"
    DERIVED_FROM_PAIRWISE = "derived_from_pairwise"


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str
    direction: Direction
    unit: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValidationError("criterion id must be a non-empty string")
        if not isinstance(self.direction, Direction):
            raise ValidationError(
                f"criterion '{self.id}': direction must be Direction.BENEFIT or Direction.COST"
            )


@dataclass(frozen=True)
class ServiceProfile:
    """One alternative with its raw QoS value per criterion id."""

    id: str
    name: str
    qos: Mapping[str, float]

    def __post_init__(self):
        if not self.id:
            raise ValidationError("service id must be a non-empty string")
        for cid, value in self.qos.items():
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValidationError(
                    f"service '{self.id}': value for '{cid}' is not a finite number"
                )
            if value <= 0:
                raise NonPositiveValue(
                    f"service '{self.id}': value for '{cid}' must be > 0, got {value}"
                )


@dataclass(frozen=True)
class ServiceCatalog:
    criteria: tuple[Criterion, ...]
    services: tuple[ServiceProfile, ...]

    def __post_init__(self):
        object.__setattr__(self, "criteria", tuple(self.criteria))
        object.__setattr__(self, "services", tuple(self.services))
        if len(self.criteria) < 1:
            raise CatalogTooSmall("catalog needs at least 1 criterion")
        if len(self.services) < 2:
            raise CatalogTooSmall(
                f"catalog needs at least 2 services to rank, got {len(self.services)}"
            )
        crit_ids = [c.id for c in self.criteria]
        if len(set(crit_ids)) != len(crit_ids):
            dupes = sorted({i for i in crit_ids if crit_ids.count(i) > 1})
            raise ValidationError(f"duplicate criterion id(s): {', '.join(dupes)}")
        svc_ids = [s.id for s in self.services]
        if len(set(svc_ids)) != len(svc_ids):
            dupes = sorted({i for i in svc_ids if svc_ids.count(i) > 1})
            raise ValidationError(f"duplicate service id(s): {', '.join(dupes)}")
        wanted = set(crit_ids)
        for svc in self.services:
            have = set(svc.qos)
            for missing in sorted(wanted - have):
                raise MissingCriterion(
                    f"service '{svc.id}' has no value for criterion '{missing}'"
                )
            for extra in sorted(have - wanted):
                raise UnknownCriterion(
                    f"service '{svc.id}' has a value for unknown criterion '{extra}'"
                )

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    @property
    def service_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.services)

    def criterion(self, cid: str) -> Criterion:
        for c in self.criteria:
            if c.id == cid:
                return c
        raise UnknownCriterion(f"no criterion with id '{cid}'")

    def restrict(self, criterion_ids: Sequence[str]) -> "ServiceCatalog":
        """Project the catalog onto a subset of criteria (order as given)."""
        keep = []
        for cid in criterion_ids:
            keep.append(self.criterion(cid))
        services = tuple(
            ServiceProfile(s.id, s.name, {c.id: s.qos[c.id] for c in keep})
            for s in self.services
        )
        return ServiceCatalog(tuple(keep), services)


@dataclass(frozen=True)
class DecisionMatrix:
    """Raw alternatives-by-criteria value grid, row/column order fixed."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        object.__setattr__(self, "values", tuple(tuple(row) for row in self.values))
        if len(self.values) != len(self.rows):
            raise ValidationError(
                f"matrix has {len(self.values)} value rows for {len(self.rows)} row ids"
            )
        for rid, row in zip(self.rows, self.values):
            if len(row) != len(self.cols):
                raise ValidationError(
                    f"row '{rid}' has {len(row)} values for {len(self.cols)} columns"
                )
            for cid, v in zip(self.cols, row):
                if not math.isfinite(v) or v <= 0:
                    raise NonPositiveValue(
                        f"matrix entry ({rid}, {cid}) must be a positive number, got {v}"
                    )

    def column(self, cid: str) -> list[float]:
        j = self.cols.index(cid)
        return [row[j] for row in self.values]


@dataclass(frozen=True)
class WeightVector:
    """Per-criterion relative weights summing to one."""

    weights: Mapping[str, float]
    provenance: Provenance = Provenance.DIRECT
    consistency_ratio: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", dict(self.weights))
        if not self.weights:
            raise ValidationError("weight vector is empty")
        for cid, w in self.weights.items():
            if not (isinstance(w, (int, float)) and math.isfinite(w)):
                raise ValidationError(f"weight for '{cid}' is not a finite number")
            if w <= 0:
                raise NonPositiveWeight(f"weight for '{cid}' must be > 0, got {w}")
            if w > 1:
                raise ValidationError(f"weight for '{cid}' must be <= 1, got {w}")
        total = math.fsum(self.weights.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise SumNotOne(
                f"weights must sum to 1 within {WEIGHT_SUM_TOL}, got {total!r}", total
            )
        if self.consistency_ratio is not None and self.consistency_ratio < 0:
            raise ValidationError("consistency ratio cannot be negative")

    @property
    def total(self) -> float:
        return math.fsum(self.weights.values())

    def __getitem__(self, cid: str) -> float:
        return self.weights[cid]


@dataclass(frozen=True)
class RankEntry:
    service_id: str
    score: float
    display_score: float
    rank: int


@dataclass(frozen=True)
class Ranking:
    """Scored alternatives for one method, sorted best first."""

    method: Method
    entries: tuple[RankEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        n = len(self.entries)
        if sorted(e.rank for e in self.entries) != list(range(1, n + 1)):
            raise ValidationError("ranks must be exactly the permutation 1..N")
        if [e.rank for e in self.entries] != list(range(1, n + 1)):
            raise ValidationError("entries must be sorted by rank")
        for a, b in zip(self.entries, self.entries[1:]):
            if a.score < b.score:
                raise ValidationError("scores must be non-increasing with rank")

    @property
    def order(self) -> tuple[str, ...]:
        return tuple(e.service_id for e in self.entries)

    @property
    def top(self) -> str:
        return self.entries[0].service_id

    def rank_of(self, service_id: str) -> int:
        for e in self.entries:
            if e.service_id == service_id:
                return e.rank
        raise KeyError(service_id)

    def as_dict(self) -> dict:
        return {
            "method": self.method.value,
            "entries": [
                {
                    "service": e.service_id,
                    "score": e.score,
                    "display_score": e.display_score,
                    "rank": e.rank,
                }
                for e in self.entries
            ],
        }


def build_ranking(method: Method, scores: Mapping[str, float]) -> Ranking:
    """Sort descending by score, ties broken by ascending service id.

    Display scores are max-normalized so the best alternative shows 1.0.
    """
    if not scores:
        raise ValidationError("cannot rank an empty score map")
    best = max(scores.values())
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = tuple(
        RankEntry(sid, sc, sc / best, pos + 1) for pos, (sid, sc) in enumerate(ordered)
    )
    return Ranking(method, entries)


def validate_weights(raw: Mapping[str, float], criteria: Sequence[Criterion]) -> WeightVector:
    """Check a raw id-to-weight map against a criteria list and wrap it.

    Every criterion must be covered, no extras, all weights positive, and the
    total must be 1 within WEIGHT_SUM_TOL.
    """
    crit_ids = [c.id for c in criteria]
    for cid in raw:
        if cid not in crit_ids:
            raise UnknownCriterion(f"weight given for unknown criterion '{cid}'")
    for cid in crit_ids:
        if cid not in raw:
            raise MissingCriterion(f"no weight given for criterion '{cid}'")
    ordered = {cid: raw[cid] for cid in crit_ids}
    return WeightVector(ordered, provenance=Provenance.DIRECT)


def normalize_benefit(column: Sequence[float]) -> list[float]:
    """Rescale a benefit column by its maximum: r = x / max(x).

    Outputs lie in (0, 1] and the best (largest) raw value maps to exactly 1.
    """
    _check_column(column)
    top = max(column)
    return [x / top for x in column]


def normalize_cost(column: Sequence[float]) -> list[float]:
    """Rescale a cost column against its minimum: r = min(x) / x.

    Equivalent to ranking by reciprocal value; the cheapest alternative maps
    to exactly 1. Zero cost is rejected, not clamped.
    """
    _check_column(column)
    low = min(column)
    return [low / x for x in column]


def _check_column(column: Sequence[float]) -> None:
    if len(column) == 0:
        raise EmptyColumn("normalization needs a non-empty column")
    for x in column:
        if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0:
            raise NonPositiveValue(f"column values must be positive numbers, got {x}")


def build_decision_matrix(catalog: ServiceCatalog) -> DecisionMatrix:
    """Copy the catalog's raw values into a grid in catalog order."""
    rows = catalog.service_ids
    cols = catalog.criterion_ids
    values = tuple(tuple(s.qos[cid] for cid in cols) for s in catalog.services)
    return DecisionMatrix(rows, cols, values)


def require_cover(weights: WeightVector, criteria: Sequence[Criterion]) -> None:
    """Raise unless the weight vector covers exactly the given criteria."""
    crit_ids = {c.id for c in criteria}
    for cid in weights.weights:
        if cid not in crit_ids:
            raise UnknownCriterion(f"weight given for unknown criterion '{cid}'")
    for cid in crit_ids:
        if cid not in weights.weights:
            raise MissingCriterion(f"no weight given for criterion '{cid}'")
