"""Sherman-Morrison inverse maintenance and pairwise uncertainties."""

import time

import numpy as np
import pytest

from duelrank.errors import InvalidParameterError, InvalidSizeError
from duelrank.tracker import DesignTracker


def direct_inverse(n, lam, updates):
    v = lam * np.eye(n)
    for x, y in updates:
        u = np.zeros(n)
        u[x], u[y] = 1.0, -1.0
        v += np.outer(u, u)
    return np.linalg.inv(v)


class TestInit:
    def test_identity(self):
        tr = DesignTracker(2, 1.0)
        np.testing.assert_allclose(tr.v_inv, np.eye(2))
        assert tr.t == 0

    def test_scaled(self):
        tr = DesignTracker(3, 2.0)
        np.testing.assert_allclose(tr.v_inv, 0.5 * np.eye(3))

    def test_symmetric(self):
        tr = DesignTracker(7, 0.3)
        np.testing.assert_allclose(tr.v_inv, tr.v_inv.T)

    def test_bad_params(self):
        with pytest.raises(InvalidParameterError):
            DesignTracker(3, 0.0)
        with pytest.raises(InvalidSizeError):
            DesignTracker(1, 1.0)


class TestUpdate:
    def test_single_update_closed_form(self):
        tr = DesignTracker(2, 1.0)
        tr.update(0, 1)
        # inverse of [[2, -1], [-1, 2]]
        np.testing.assert_allclose(
            tr.v_inv, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-12)

    @pytest.mark.parametrize("n,seed", [(5, 0), (12, 1), (20, 2)])
    def test_matches_direct_inverse(self, n, seed):
        rng = np.random.default_rng(seed)
        tr = DesignTracker(n, 1.0)
        updates = []
        for _ in range(500):
            x, y = rng.choice(n, size=2, replace=False)
            tr.update(int(x), int(y))
            updates.append((int(x), int(y)))
        ref = direct_inverse(n, 1.0, updates)
        assert np.max(np.abs(tr.v_inv - ref)) < 1e-8

    def test_self_pair_is_noop_with_warning(self):
        tr = DesignTracker(3, 1.0)
        before = tr.v_inv.copy()
        with pytest.warns(UserWarning):
            tr.update(1, 1)
        np.testing.assert_allclose(tr.v_inv, before)
        assert tr.t == 0

    def test_update_shrinks_own_uncertainty(self):
        tr = DesignTracker(4, 1.0)
        before = tr.pair_uncertainty(0, 1)
        tr.update(0, 1)
        assert tr.pair_uncertainty(0, 1) < before


class TestPairUncertainty:
    def test_fresh_tracker(self):
        tr = DesignTracker(5, 1.0)
        for x in range(5):
            for y in range(5):
                expected = 0.0 if x == y else np.sqrt(2.0)
                assert tr.pair_uncertainty(x, y) == pytest.approx(expected)

    def test_symmetry(self):
        tr = DesignTracker(6, 1.0)
        rng = np.random.default_rng(3)
        for _ in range(50):
            x, y = rng.choice(6, size=2, replace=False)
            tr.update(int(x), int(y))
        for x in range(6):
            for y in range(6):
                assert tr.pair_uncertainty(x, y) == tr.pair_uncertainty(y, x)

    def test_monotone_under_any_update(self):
        rng = np.random.default_rng(5)
        tr = DesignTracker(6, 1.0)
        for _ in range(200):
            before = tr.uncertainty_matrix()
            x, y = rng.choice(6, size=2, replace=False)
            tr.update(int(x), int(y))
            after = tr.uncertainty_matrix()
            assert np.all(after <= before + 1e-10)

    def test_repeated_pair_sequence_matches_direct(self):
        tr = DesignTracker(3, 1.0)
        updates = []
        prev = np.inf
        for _ in range(30):
            tr.update(0, 1)
            updates.append((0, 1))
            ref = direct_inverse(3, 1.0, updates)
            expected = np.sqrt(ref[0, 0] + ref[1, 1] - 2 * ref[0, 1])
            got = tr.pair_uncertainty(0, 1)
            assert got == pytest.approx(expected, abs=1e-10)
            assert got < prev
            prev = got

    def test_uncertainty_matrix_matches_scalar(self):
        tr = DesignTracker(5, 1.0)
        rng = np.random.default_rng(9)
        for _ in range(40):
            x, y = rng.choice(5, size=2, replace=False)
            tr.update(int(x), int(y))
        u = tr.uncertainty_matrix()
        for x in range(5):
            for y in range(5):
                assert u[x, y] == pytest.approx(tr.pair_uncertainty(x, y))


def _time_updates(n, count):
    tr = DesignTracker(n, 1.0)
    rng = np.random.default_rng(0)
    pairs = [tuple(rng.choice(n, size=2, replace=False)) for _ in range(count)]
    best = np.inf
    for _ in range(5):
        tr = DesignTracker(n, 1.0)
        start = time.perf_counter()
        for x, y in pairs:
            tr.update(int(x), int(y))
        best = min(best, time.perf_counter() - start)
    return best


def test_update_cost_scales_quadratically_at_most():
    # coarse: doubling n should not blow past the O(n^2) budget
    t_small = _time_updates(64, 300)
    t_large = _time_updates(128, 300)
    assert t_large <= 4.5 * t_small
