"""Pairwise-comparison ranking pipeline.

Builds positive reciprocal comparison matrices, extracts priority weights as
the principal eigenvector via power iteration, scores matrix consistency, and
aggregates per-criterion priorities into a final ranking.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Criterion,
    DecisionMatrix,
    Direction,
    Method,
    Provenance,
    Ranking,
    WeightVector,
    build_ranking,
    require_cover,
)
from .errors import (
    NoConvergence,
    NonPositiveValue,
    ReciprocityViolation,
    TooFewEntities,
    ValidationError,
)

# Saaty random-index constants for matrix sizes 1..10. Larger matrices reuse
# the n=10 value (with a warning); the table is standard and fixed.
RANDOM_INDEX = {
    1: 0.0,
    2: 0.0,
    3: 0.58,
    4: 0.90,
    5: 1.12,
    6: 1.24,
    7: 1.32,
    8: 1.41,
    9: 1.45,
    10: 1.49,
}

SAATY_MIN = 1.0 / 9.0
SAATY_MAX = 9.0

RECIPROCITY_TOL = 1e-9
DEFAULT_EIGEN_TOL = 1e-10
DEFAULT_EIGEN_MAX_ITER = 1000

CR_ACCEPTABLE_LIMIT = 0.1


@dataclass(frozen=True)
class PairwiseMatrix:
    """Positive reciprocal comparison matrix over a fixed id order."""

    ids: tuple[str, ...]
    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "entries", tuple(tuple(r) for r in self.entries))
        n = len(self.ids)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValidationError(f"pairwise matrix must be {n}x{n} to match its ids")
        for i in range(n):
            for j in range(n):
                a = self.entries[i][j]
                if not math.isfinite(a) or a <= 0:
                    raise NonPositiveValue(
                        f"pairwise entry ({self.ids[i]}, {self.ids[j]}) must be > 0, got {a}"
                    )
        for i in range(n):
            if abs(self.entries[i][i] - 1.0) > RECIPROCITY_TOL:
                raise ValidationError(
                    f"diagonal entry for '{self.ids[i]}' must be 1, got {self.entries[i][i]}"
                )
        for i in range(n):
            for j in range(i + 1, n):
                expected = 1.0 / self.entries[i][j]
                actual = self.entries[j][i]
                if abs(actual - expected) > RECIPROCITY_TOL * abs(expected):
                    raise ReciprocityViolation(
                        f"entries ({i}, {j}) violate reciprocity: "
                        f"a[{j}][{i}]={actual} but 1/a[{i}][{j}]={expected}",
                        i,
                        j,
                    )

    @property
    def n(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class PriorityVector:
    """L1-normalized principal eigenvector with its eigenvalue estimate."""

    ids: tuple[str, ...]
    priorities: tuple[float, ...]
    lambda_max: float

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "priorities", tuple(self.priorities))
        if len(self.ids) != len(self.priorities):
            raise ValidationError("priority vector length must match its ids")
        if any(p < 0 for p in self.priorities):
            raise ValidationError("priorities cannot be negative")
        if abs(math.fsum(self.priorities) - 1.0) > 1e-9:
            raise ValidationError("priorities must sum to 1 within 1e-9")

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(self.ids, self.priorities))


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    consistency_index: float
    random_index: float
    consistency_ratio: float
    acceptable: bool

    def __post_init__(self):
        if self.consistency_index < -1e-9:
            raise ValidationError("consistency index below numerical zero")
        if self.consistency_ratio < -1e-9:
            raise ValidationError("consistency ratio below numerical zero")


def ratio_pairwise_matrix(
    column: Sequence[float],
    direction: Direction,
    ids: Sequence[str] | None = None,
    clamp_saaty: bool = False,
) -> PairwiseMatrix:
    """Derive a comparison matrix mechanically from one raw value column.

    Benefit: a_ij = x_i / x_j. Cost: a_ij = x_j / x_i. The result is perfectly
    consistent by construction. With clamp_saaty the entries are squeezed into
    [1/9, 9], trading consistency for the conventional comparison scale.
    """
    n = len(column)
    if n < 2:
        raise TooFewEntities(f"need at least 2 entities to compare, got {n}")
    for x in column:
        if not math.isfinite(x) or x <= 0:
            raise NonPositiveValue(f"column values must be positive numbers, got {x}")
    if ids is None:
        ids = tuple(str(i + 1) for i in range(n))
    elif len(ids) != n:
        raise ValidationError(f"got {len(ids)} ids for {n} values")

    def ratio(i: int, j: int) -> float:
        if direction is Direction.BENEFIT:
            a = column[i] / column[j]
        else:
            a = column[j] / column[i]
        if clamp_saaty:
            a = min(max(a, SAATY_MIN), SAATY_MAX)
        return a

    entries = tuple(tuple(ratio(i, j) for j in range(n)) for i in range(n))
    return PairwiseMatrix(tuple(ids), entries)


def principal_priority_vector(
    m: PairwiseMatrix,
    tol: float = DEFAULT_EIGEN_TOL,
    max_iterations: int = DEFAULT_EIGEN_MAX_ITER,
) -> PriorityVector:
    """Power iteration from the uniform vector, L1-renormalized each step.

    Converged when no component moves more than tol between steps; the
    eigenvalue estimate is the mean of (Mv)_i / v_i at the fixed point.
    Deterministic for a fixed input.
    """
    if tol <= 0:
        raise ValidationError(f"tolerance must be > 0, got {tol}")
    if max_iterations < 1:
        raise ValidationError(f"iteration cap must be >= 1, got {max_iterations}")
    mat = np.array(m.entries, dtype=float)
    n = m.n
    v = np.full(n, 1.0 / n)
    residual = math.inf
    for _ in range(max_iterations):
        w = mat @ v
        v_next = w / w.sum()
        residual = float(np.max(np.abs(v_next - v)))
        v = v_next
        if residual < tol:
            break
    else:
        raise NoConvergence(
            f"power iteration did not converge within {max_iterations} iterations "
            f"(last residual {residual:.3e})",
            residual,
            max_iterations,
        )
    ratios = (mat @ v) / v
    lambda_max = float(ratios.mean())
    priorities = v / v.sum()
    return PriorityVector(m.ids, tuple(float(p) for p in priorities), lambda_max)


def consistency_ratio(
    m: PairwiseMatrix,
    tol: float = DEFAULT_EIGEN_TOL,
    max_iterations: int = DEFAULT_EIGEN_MAX_ITER,
) -> ConsistencyReport:
    """Consistency index and ratio against the random-index table.

    CI = (lambda_max - n) / (n - 1) for n >= 3; sizes 1 and 2 cannot be
    inconsistent so both CI and CR are 0 there. Acceptable means CR < 0.1.
    """
    n = m.n
    pv = principal_priority_vector(m, tol=tol, max_iterations=max_iterations)
    lam = pv.lambda_max
    if n <= 2:
        ci = 0.0
        cr = 0.0
        ri = RANDOM_INDEX[n]
    else:
        ci = (lam - n) / (n - 1)
        ri = random_index(n)
        cr = ci / ri
    return ConsistencyReport(lam, ci, ri, cr, acceptable=cr < CR_ACCEPTABLE_LIMIT)


def random_index(n: int) -> float:
    if n < 1:
        raise ValidationError(f"matrix size must be >= 1, got {n}")
    if n > 10:
        warnings.warn(
            f"no tabulated random index for n={n}; using the n=10 value",
            stacklevel=2,
        )
        return RANDOM_INDEX[10]
    return RANDOM_INDEX[n]


def derive_criteria_weights(
    m: PairwiseMatrix,
    tol: float = DEFAULT_EIGEN_TOL,
    max_iterations: int = DEFAULT_EIGEN_MAX_ITER,
) -> WeightVector:
    """Turn a criteria comparison matrix into a weight vector.

    The weights are the priority vector; the consistency ratio rides along as
    provenance. A ratio at or above 0.1 warns but does not fail.
    """
    pv = principal_priority_vector(m, tol=tol, max_iterations=max_iterations)
    report = consistency_ratio(m, tol=tol, max_iterations=max_iterations)
    if not report.acceptable:
        warnings.warn(
            f"criteria comparisons are inconsistent (CR={report.consistency_ratio:.4f} >= 0.1); "
            "weights derived anyway",
            stacklevel=2,
        )
    return WeightVector(
        pv.as_mapping(),
        provenance=Provenance.DERIVED_FROM_PAIRWISE,
        consistency_ratio=max(report.consistency_ratio, 0.0),
    )


def ahp_rank(
    matrix: DecisionMatrix,
    criteria: Sequence[Criterion],
    weights: WeightVector,
    clamp_saaty: bool = False,
    tol: float = DEFAULT_EIGEN_TOL,
    max_iterations: int = DEFAULT_EIGEN_MAX_ITER,
) -> Ranking:
    """Aggregate per-criterion priority vectors into one ranking.

    For each criterion a comparison matrix over the alternatives is derived
    from the raw column, its priority vector extracted, and the final score is
    the weight-blended priority. Scores are re-normalized to sum to exactly 1;
    ties break by ascending service id.
    """
    require_cover(weights, criteria)
    totals = {sid: 0.0 for sid in matrix.rows}
    for criterion in criteria:
        column = matrix.column(criterion.id)
        pm = ratio_pairwise_matrix(
            column, criterion.direction, ids=matrix.rows, clamp_saaty=clamp_saaty
        )
        pv = principal_priority_vector(pm, tol=tol, max_iterations=max_iterations)
        w = weights[criterion.id]
        for sid, p in zip(pv.ids, pv.priorities):
            totals[sid] += w * p
    grand = math.fsum(totals.values())
    canonical = {sid: s / grand for sid, s in totals.items()}
    return build_ranking(Method.AHP, canonical)
