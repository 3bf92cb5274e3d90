"""Incremental inverse of the ridge-regularized pair design matrix.

V = lambda*I + sum of (e_x - e_y)(e_x - e_y)' over observed pairs. The
inverse is maintained by rank-1 (Sherman-Morrison) updates in O(n^2) per
pair, and the pairwise uncertainty ||e_x - e_y|| in the V^{-1} norm is an
O(1) lookup. The ridge is required: every difference vector is orthogonal
to the all-ones vector, so the unregularized design matrix is singular.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import InvalidParameterError, InvalidSizeError

REFRESH_INTERVAL = 10_000


class DesignTracker:
    """Maintains V and V^{-1} for selected player pairs."""

    def __init__(self, n: int, lambda_ridge: float = 1.0):
        if n < 2:
            raise InvalidSizeError(f"need at least 2 players, got {n}")
        if lambda_ridge <= 0:
            raise InvalidParameterError("lambda_ridge must be positive")
        self.n = n
        self.lambda_ridge = lambda_ridge
        self.v = lambda_ridge * np.eye(n)
        self.v_inv = (1.0 / lambda_ridge) * np.eye(n)
        self.t = 0

    def update(self, x: int, y: int) -> None:
        """Add the rank-1 term for pair (x, y); self-pairs are a no-op."""
        if x == y:
            warnings.warn("tracker update with x == y carries no information",
                          stacklevel=2)
            return
        vi = self.v_inv
        # Sherman-Morrison with u = e_x - e_y
        vu = vi[:, x] - vi[:, y]
        denom = 1.0 + (vu[x] - vu[y])
        self.v_inv = vi - np.outer(vu, vu) / denom
        self.v[x, x] += 1.0
        self.v[y, y] += 1.0
        self.v[x, y] -= 1.0
        self.v[y, x] -= 1.0
        self.t += 1
        if self.t % REFRESH_INTERVAL == 0:
            # bound accumulated rank-1 rounding drift
            self.v_inv = np.linalg.inv(self.v)

    def pair_uncertainty(self, x: int, y: int) -> float:
        if x == y:
            return 0.0
        vi = self.v_inv
        return float(np.sqrt(vi[x, x] + vi[y, y] - 2.0 * vi[x, y]))

    def uncertainty_matrix(self) -> np.ndarray:
        """All pairwise uncertainties at once (zero diagonal)."""
        d = np.diag(self.v_inv)
        q = d[:, None] + d[None, :] - 2.0 * self.v_inv
        np.fill_diagonal(q, 0.0)
        return np.sqrt(np.maximum(q, 0.0))
