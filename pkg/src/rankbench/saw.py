"""Weighted-sum scoring over a direction-normalized decision matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Criterion,
    DecisionMatrix,
    Direction,
    Method,
    Ranking,
    WeightVector,
    build_ranking,
    normalize_benefit,
    normalize_cost,
    require_cover,
)


@dataclass(frozen=True)
class SawScoreBoard:
    """Normalized grid and the weighted-sum score per alternative."""

    ids: tuple[str, ...]
    criterion_ids: tuple[str, ...]
    normalized: tuple[tuple[float, ...], ...]
    scores: tuple[float, ...]
    weights_used: WeightVector

    def score_of(self, service_id: str) -> float:
        return self.scores[self.ids.index(service_id)]


def saw_score(
    matrix: DecisionMatrix,
    criteria: Sequence[Criterion],
    weights: WeightVector,
) -> SawScoreBoard:
    """Score each alternative as the weighted sum of normalized values.

    Benefit columns are divided by their maximum, cost columns by value with
    the minimum on top, so every normalized entry lies in (0, 1] and each
    column attains 1. Scores are then S_i = sum_j w_j * r_ij.
    """
    require_cover(weights, criteria)
    norm_cols: dict[str, list[float]] = {}
    for criterion in criteria:
        column = matrix.column(criterion.id)
        if criterion.direction is Direction.BENEFIT:
            norm_cols[criterion.id] = normalize_benefit(column)
        else:
            norm_cols[criterion.id] = normalize_cost(column)
    cids = tuple(c.id for c in criteria)
    normalized = tuple(
        tuple(norm_cols[cid][i] for cid in cids) for i in range(len(matrix.rows))
    )
    scores = tuple(
        math.fsum(weights[cid] * norm_cols[cid][i] for cid in cids)
        for i in range(len(matrix.rows))
    )
    return SawScoreBoard(matrix.rows, cids, normalized, scores, weights)


def saw_rank(
    matrix: DecisionMatrix,
    criteria: Sequence[Criterion],
    weights: WeightVector,
) -> Ranking:
    """Rank by descending weighted-sum score, ties by ascending service id."""
    board = saw_score(matrix, criteria, weights)
    return build_ranking(Method.SAW, dict(zip(board.ids, board.scores)))
