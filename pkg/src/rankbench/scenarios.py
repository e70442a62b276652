"""Named weight scenarios, cross-method runs, agreement stats, report rows."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .ahp import DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL, ahp_rank
from .core import (
    Method,
    Ranking,
    ServiceCatalog,
    WeightVector,
    build_decision_matrix,
    validate_weights,
)
from .errors import IdSetMismatch, UnknownCriterion, ValidationError
from .saw import saw_rank


@dataclass(frozen=True)
class Scenario:
    name: str
    weights: WeightVector
    methods: tuple[Method, ...] = (Method.AHP, Method.SAW)
    notes: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.name:
            raise ValidationError("scenario name must be non-empty")
        if not self.methods:
            raise ValidationError(f"scenario '{self.name}' selects no methods")
        if len(set(self.methods)) != len(self.methods):
            raise ValidationError(f"scenario '{self.name}' repeats a method")
        for m in self.methods:
            if not isinstance(m, Method):
                raise ValidationError(f"scenario '{self.name}': bad method {m!r}")

    def as_dict(self) -> dict:
        doc: dict = {
            "name": self.name,
            "weights": dict(self.weights.weights),
            "methods": [m.value for m in self.methods],
        }
        if self.weights.consistency_ratio is not None:
            doc["cr"] = self.weights.consistency_ratio
        if self.notes is not None:
            doc["notes"] = self.notes
        return doc


@dataclass(frozen=True)
class MethodComparison:
    """Per-method rankings for one scenario plus rank-agreement stats.

    The agreement fields are None when fewer than two methods ran.
    """

    scenario: Scenario
    rankings: tuple[Ranking, ...]
    kendall_tau: float | None
    exact_rank_match: bool | None
    top_choice_agrees: bool | None

    def __post_init__(self):
        object.__setattr__(self, "rankings", tuple(self.rankings))
        if self.exact_rank_match and self.kendall_tau != 1.0:
            raise ValidationError("exact rank match implies kendall tau of exactly 1")

    def ranking_for(self, method: Method) -> Ranking:
        for r in self.rankings:
            if r.method is method:
                return r
        raise KeyError(method)

    @property
    def methods(self) -> tuple[Method, ...]:
        return tuple(r.method for r in self.rankings)

    @property
    def service_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.rankings[0].order))

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario.as_dict(),
            "rankings": [r.as_dict() for r in self.rankings],
            "kendall_tau": self.kendall_tau,
            "exact_rank_match": self.exact_rank_match,
            "top_choice_agrees": self.top_choice_agrees,
        }


@dataclass(frozen=True)
class SweepPoint:
    """One swept weight value: either a comparison or a per-point error."""

    value: float
    comparison: MethodComparison | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.comparison is not None

    def as_dict(self) -> dict:
        if self.comparison is not None:
            return {"value": self.value, "comparison": self.comparison.as_dict()}
        return {"value": self.value, "error": self.error}


def kendall_tau(a: Ranking, b: Ranking) -> float:
    """Rank correlation (tau-b) between two rankings of the same ids.

    1 for identical orders, -1 for an exact reversal. The tie corrections are
    carried for completeness even though rankings here never tie.
    """
    ids = sorted(a.order)
    if ids != sorted(b.order):
        raise IdSetMismatch(
            f"rankings cover different ids: {sorted(a.order)} vs {sorted(b.order)}"
        )
    ra = {sid: a.rank_of(sid) for sid in ids}
    rb = {sid: b.rank_of(sid) for sid in ids}
    concordant = discordant = tied_a = tied_b = 0
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            da = ra[ids[i]] - ra[ids[j]]
            db = rb[ids[i]] - rb[ids[j]]
            if da == 0 and db == 0:
                continue
            if da == 0:
                tied_a += 1
            elif db == 0:
                tied_b += 1
            elif (da > 0) == (db > 0):
                concordant += 1
            else:
                discordant += 1
    denom = math.sqrt(
        (concordant + discordant + tied_a) * (concordant + discordant + tied_b)
    )
    if denom == 0:
        raise ValidationError("kendall tau undefined for fewer than 2 ids")
    return (concordant - discordant) / denom


def run_scenario(
    catalog: ServiceCatalog,
    scenario: Scenario,
    clamp_saaty: bool = False,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
    eigen_max_iterations: int = DEFAULT_EIGEN_MAX_ITER,
) -> MethodComparison:
    """Run every method the scenario selects and fill the agreement fields."""
    weights = validate_weights(scenario.weights.weights, catalog.criteria)
    matrix = build_decision_matrix(catalog)
    rankings = []
    for method in scenario.methods:
        if method is Method.AHP:
            rankings.append(
                ahp_rank(
                    matrix,
                    catalog.criteria,
                    weights,
                    clamp_saaty=clamp_saaty,
                    tol=eigen_tol,
                    max_iterations=eigen_max_iterations,
                )
            )
        else:
            rankings.append(saw_rank(matrix, catalog.criteria, weights))
    if len(rankings) >= 2:
        tau = kendall_tau(rankings[0], rankings[1])
        exact = rankings[0].order == rankings[1].order
        top_agrees = rankings[0].top == rankings[1].top
    else:
        tau = exact = top_agrees = None
    return MethodComparison(scenario, tuple(rankings), tau, exact, top_agrees)


def sweep_weights(
    catalog: ServiceCatalog,
    base: Scenario,
    criterion_id: str,
    values: Sequence[float],
    clamp_saaty: bool = False,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
    eigen_max_iterations: int = DEFAULT_EIGEN_MAX_ITER,
) -> list[SweepPoint]:
    """Re-run the scenario with one criterion weight swept over given values.

    The remaining weights are rescaled proportionally so each point re-sums to
    one. Invalid points (value outside (0,1), rescale impossible) come back as
    per-point errors instead of aborting the sweep.
    """
    if criterion_id not in base.weights.weights:
        raise UnknownCriterion(
            f"scenario '{base.name}' has no weight for criterion '{criterion_id}'"
        )
    base_w = base.weights.weights
    points: list[SweepPoint] = []
    for value in values:
        try:
            swept = rescale_weights(base_w, criterion_id, value)
            scenario = Scenario(
                name=f"{base.name}[{criterion_id}={value:g}]",
                weights=validate_weights(swept, catalog.criteria),
                methods=base.methods,
                notes=base.notes,
            )
            comparison = run_scenario(
                catalog,
                scenario,
                clamp_saaty=clamp_saaty,
                eigen_tol=eigen_tol,
                eigen_max_iterations=eigen_max_iterations,
            )
            points.append(SweepPoint(value, comparison=comparison))
        except ValidationError as exc:
            points.append(SweepPoint(value, error=str(exc)))
    return points


def rescale_weights(
    base: dict[str, float], criterion_id: str, value: float
) -> dict[str, float]:
    """Set one weight and rescale the others proportionally to re-sum to 1."""
    if criterion_id not in base:
        raise UnknownCriterion(f"no weight for criterion '{criterion_id}'")
    if not (0 < value < 1):
        raise ValidationError(
            f"swept weight must lie strictly between 0 and 1, got {value}"
        )
    w_c = base[criterion_id]
    rest = 1.0 - w_c
    if rest <= 0:
        raise ValidationError(
            f"cannot rescale: '{criterion_id}' already carries the whole weight"
        )
    factor = (1.0 - value) / rest
    return {
        cid: (value if cid == criterion_id else w * factor) for cid, w in base.items()
    }


def round_half_up(value: float, places: int = 4) -> float:
    """Decimal half-up rounding (0.00005 -> 0.0001), unlike bankers' round()."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def fmt_score(value: float) -> str:
    return f"{round_half_up(value, 4):.4f}"


def rank_table(comparison: MethodComparison) -> list[list[str]]:
    """Report rows: header then one row per alternative, ids ascending.

    Each method cell reads like "0.4532 Rank # 2" with half-up 4-decimal
    scores.
    """
    header = ["Service"] + [r.method.value for r in comparison.rankings]
    rows = [header]
    for sid in comparison.service_ids:
        row = [sid]
        for ranking in comparison.rankings:
            entry = next(e for e in ranking.entries if e.service_id == sid)
            row.append(f"{fmt_score(entry.score)} Rank # {entry.rank}")
        rows.append(row)
    return rows
