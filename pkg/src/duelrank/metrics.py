"""Regret accounting and ranking-quality metrics against true ratings."""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError
from .games import TrueRatings
from .ratings import RatingState


def instant_regret(truth: TrueRatings, x: int, y: int) -> float:
    """Best player's rating minus the average rating of the matched pair."""
    r = truth.r_star
    return float(r[truth.best] - 0.5 * (r[x] + r[y]))


def ranking(values: np.ndarray) -> list[int]:
    """Player indices in descending value order, ties broken by low index."""
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    return order


def reciprocal_rank(truth: TrueRatings, est: RatingState) -> float:
    order = ranking(np.asarray(est.r))
    return 1.0 / (order.index(truth.best) + 1)


def _top_k(values: np.ndarray, k: int) -> set[int]:
    return set(ranking(values)[:k])


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must be in [1, {n}], got {k}")


def hit_ratio_at_k(truth: TrueRatings, est: RatingState, k: int) -> float:
    """Fraction of the predicted top-k inside the true top-k."""
    _check_k(k, len(truth.r_star))
    true_top = _top_k(truth.r_star, k)
    pred_top = _top_k(np.asarray(est.r), k)
    return len(true_top & pred_top) / k


def ndcg_at_k(truth: TrueRatings, est: RatingState, k: int) -> float:
    """Discounted top-k quality with binary relevance, base-2 logs.

    Relevance of a predicted player is 1 iff it belongs to the true
    top-k; the normalizer makes a perfect ranking score exactly 1.
    """
    _check_k(k, len(truth.r_star))
    true_top = _top_k(truth.r_star, k)
    order = ranking(np.asarray(est.r))
    discounts = 1.0 / np.log2(np.arange(2, k + 2))
    dcg = sum(discounts[i] for i in range(k) if order[i] in true_top)
    return float(dcg / discounts.sum())
