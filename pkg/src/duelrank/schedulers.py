"""Match-scheduling policies: the UCB/SGD schedulers and five baselines.

Every policy exposes the same surface: step(env) plays one match and
returns (x, y, outcome); estimate() returns the current RatingState.
Pairs are unordered with the canonical ordering x < y, and outcomes are
always recorded from the first-listed player's perspective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NotReadyError
from .games import WinMatrix, sample_outcome
from .ratings import (
    BatchBuffer,
    RatingState,
    SgdState,
    batch_update,
    mle_fit,
    omega,
    sgd_step_elo,
    sgd_step_melo,
)
from .tracker import DesignTracker

ALGORITHMS = ("maxin_elo", "maxin_melo", "random", "rg_ucb", "dbgd", "maxinp")

GAMMA_GRID = tuple(round(0.2 * i, 1) for i in range(1, 11))


@dataclass
class SchedulerConfig:
    algo: str = "maxin_elo"
    T: int = 5000
    tau: int | None = None          # defaults to round(0.7 * n)
    gamma: float = 1.0
    gamma_mode: str = "fixed"       # "fixed" | "theoretical"
    alpha: float | None = None      # defaults to tau
    eta0: float = 1.0
    k: int = 4                      # mElo half-dimension (2k features)
    melo: bool = False              # baselines: learn mElo instead of Elo
    delta: float = 0.2              # RG-UCB stopping confidence
    n_max_per_pair: int = 200       # RG-UCB per-pair sample cap
    lambda_ridge: float = 1.0
    ridge: float = 1e-4             # MLE regularization
    clip_eps: float = 1e-3
    c1: float = 0.25                # link-derivative bound for gamma schedule
    seed: int = 0

    def resolve(self, n: int) -> "SchedulerConfig":
        """Fill n-dependent defaults and validate."""
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm: {self.algo}", key="algo")
        tau = self.tau if self.tau is not None else max(1, round(0.7 * n))
        alpha = self.alpha if self.alpha is not None else float(tau)
        cfg = SchedulerConfig(**{**self.__dict__, "tau": tau, "alpha": alpha})
        if cfg.tau < 1:
            raise ConfigError("tau must be at least 1", key="tau")
        if cfg.tau >= cfg.T:
            raise ConfigError("warmup tau must be smaller than horizon T",
                              key="tau")
        if cfg.gamma_mode == "fixed" and cfg.gamma <= 0:
            raise ConfigError("gamma must be positive", key="gamma")
        if cfg.gamma_mode not in ("fixed", "theoretical"):
            raise ConfigError(f"unknown gamma_mode: {cfg.gamma_mode}",
                              key="gamma_mode")
        if not 0 < cfg.delta < 1:
            raise ConfigError("delta must lie in (0, 1)", key="delta")
        if not 0 < cfg.c1 <= 0.25:
            raise ConfigError("c1 must lie in (0, 0.25]", key="c1")
        if cfg.eta0 <= 0:
            raise ConfigError("eta0 must be positive", key="eta0")
        if cfg.alpha <= 0:
            raise ConfigError("alpha must be positive", key="alpha")
        if cfg.k < 0:
            raise ConfigError("k must be non-negative", key="k")
        return cfg


@dataclass(frozen=True)
class TheoryParams:
    """Constants feeding the theoretical exploration schedule."""

    c1: float = 0.25
    T: int = 5000
    n: int = 2
    alpha: float = 1.0
    tau: int = 1


def g1(t: int, p: TheoryParams) -> float:
    """Confidence width of the warm MLE estimate after t rounds."""
    return (1.0 / (2.0 * p.c1)) * math.sqrt(
        (p.n / 2.0) * math.log(1.0 + 2.0 * t / p.n) + 2.0 * math.log(p.T))


def g2(j: int, p: TheoryParams) -> float:
    """SGD-to-MLE gap factor after j batches."""
    return (p.tau / p.alpha) * math.sqrt(1.0 + math.log(j))


class MatchEnv:
    """A win matrix plus the random stream its outcomes are drawn from."""

    def __init__(self, matrix: WinMatrix, rng: np.random.Generator):
        self.matrix = matrix
        self.rng = rng

    @property
    def n(self) -> int:
        return self.matrix.n

    def play(self, x: int, y: int) -> int:
        return sample_outcome(self.matrix, x, y, self.rng)


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(n) for y in range(x + 1, n)]


class Scheduler:
    """Common bookkeeping for all policies."""

    def __init__(self, n: int, config: SchedulerConfig,
                 rng: np.random.Generator):
        self.n = n
        self.config = config.resolve(n)
        self.rng = rng
        self.t = 0
        self.pairs = _all_pairs(n)

    def uniform_pair(self) -> tuple[int, int]:
        return self.pairs[int(self.rng.integers(len(self.pairs)))]

    def step(self, env: MatchEnv) -> tuple[int, int, int]:
        raise NotImplementedError

    def estimate(self) -> RatingState:
        raise NotImplementedError


class _OnlineBaseline(Scheduler):
    """Baselines that apply a constant-step SGD update every round."""

    def __init__(self, n, config, rng):
        super().__init__(n, config, rng)
        cfg = self.config
        c = None
        if cfg.melo and cfg.k > 0:
            c = rng.uniform(-0.1, 0.1, size=(n, 2 * cfg.k))
        self.state = RatingState(r=np.zeros(n), c=c, k=cfg.k if c is not None else 0)

    def _learn(self, x: int, y: int, o: int) -> None:
        if self.state.c is not None:
            self.state = sgd_step_melo(self.state, x, y, o, self.config.eta0)
        else:
            self.state = sgd_step_elo(self.state, x, y, o, self.config.eta0)

    def estimate(self) -> RatingState:
        return self.state


class RandomScheduler(_OnlineBaseline):
    """Uniform pair from all n(n-1)/2 unordered pairs, with replacement."""

    def step(self, env):
        self.t += 1
        x, y = self.uniform_pair()
        o = env.play(x, y)
        self._learn(x, y, o)
        return x, y, o


class RgUcbScheduler(_OnlineBaseline):
    """Pure exploration: sample uniformly among still-unresolved pairs.

    A pair is resolved once its Hoeffding interval around the empirical
    win rate excludes 0.5, or once it has hit the per-pair sample cap
    (which guarantees termination on exactly-even matchups).
    """

    def __init__(self, n, config, rng):
        super().__init__(n, config, rng)
        self.counts = np.zeros((n, n), dtype=int)
        self.wins = np.zeros((n, n), dtype=float)
        self._log_term = math.log(2.0 / self.config.delta)

    def _unresolved(self, x: int, y: int) -> bool:
        n_xy = self.counts[x, y]
        if n_xy == 0:
            return True
        if n_xy >= self.config.n_max_per_pair:
            return False
        half_width = math.sqrt(self._log_term / (2.0 * n_xy))
        p_hat = self.wins[x, y] / n_xy
        return abs(p_hat - 0.5) <= half_width

    def step(self, env):
        self.t += 1
        open_pairs = [pq for pq in self.pairs if self._unresolved(*pq)]
        pool = open_pairs if open_pairs else self.pairs
        x, y = pool[int(self.rng.integers(len(pool)))]
        o = env.play(x, y)
        self.counts[x, y] += 1
        self.counts[y, x] += 1
        self.wins[x, y] += o
        self.wins[y, x] += 1 - o
        self._learn(x, y, o)
        return x, y, o


class DbgdScheduler(_OnlineBaseline):
    """Keeps a champion and duels it against a random opponent."""

    def __init__(self, n, config, rng):
        super().__init__(n, config, rng)
        self.champion = int(rng.integers(n))

    def step(self, env):
        self.t += 1
        opponent = int(self.rng.integers(self.n - 1))
        if opponent >= self.champion:
            opponent += 1
        champ = self.champion
        x, y = (champ, opponent) if champ < opponent else (opponent, champ)
        o = env.play(x, y)
        champ_won = o if x == champ else 1 - o
        if not champ_won:
            self.champion = opponent
        self._learn(x, y, o)
        return x, y, o


class _WarmupScheduler(Scheduler):
    """Shared warmup: tau uniform matches, then an MLE initial estimate."""

    def __init__(self, n, config, rng):
        super().__init__(n, config, rng)
        self.tracker = DesignTracker(n, self.config.lambda_ridge)
        self.history: list[tuple[int, int, int]] = []
        self.warmed_up = False

    def _warmup_step(self, env):
        x, y = self.uniform_pair()
        o = env.play(x, y)
        self.history.append((x, y, o))
        self.tracker.update(x, y)
        if self.t == self.config.tau:
            self._finish_warmup()
            self.warmed_up = True
        return x, y, o

    def _finish_warmup(self):
        raise NotImplementedError

    def _candidate_set(self, r: np.ndarray, c: np.ndarray | None,
                       gamma: float) -> list[int]:
        """Players not confidently dominated under the optimistic score."""
        u = self.tracker.uncertainty_matrix()
        h = r[:, None] - r[None, :] + gamma * u
        if c is not None:
            h = h + c @ omega(self.config.k) @ c.T
        np.fill_diagonal(h, np.inf)
        return [int(x) for x in np.nonzero(h.min(axis=1) > 0.0)[0]]

    def _max_uncertainty_pair(self, cand: list[int]) -> tuple[int, int]:
        if len(cand) == 1:
            return cand[0], cand[0]
        u = self.tracker.uncertainty_matrix()
        best_pair, best_val = None, -1.0
        for i, x in enumerate(cand):
            for y in cand[i + 1:]:
                if u[x, y] > best_val:
                    best_pair, best_val = (x, y), u[x, y]
        return best_pair

    def _gamma(self) -> float:
        cfg = self.config
        if cfg.gamma_mode == "theoretical":
            p = TheoryParams(c1=cfg.c1, T=cfg.T, n=self.n,
                             alpha=cfg.alpha, tau=cfg.tau)
            return 2.0 * g1(self.t, p)
        return cfg.gamma


class MaxInScheduler(_WarmupScheduler):
    """UCB candidate set + max-uncertainty pair, learning by batch SGD.

    After the warmup MLE, ratings follow projected batch SGD with step
    eta0/(alpha*j) at batch j; the reported estimate is the average of
    SGD iterates. With use_melo, cyclic feature vectors are learned by
    the same batch gradients, unprojected.
    """

    def __init__(self, n, config, rng, use_melo: bool = False):
        super().__init__(n, config, rng)
        self.use_melo = use_melo
        if use_melo and self.config.k < 1:
            raise ConfigError("maxin_melo needs k >= 1", key="k")
        self.buffer = BatchBuffer(tau=self.config.tau)
        self.sgd: SgdState | None = None

    # The warmup batch has ~0.7n records over n(n-1)/2 pairs and is almost
    # always linearly separable, so a weak ridge lets the center estimate
    # blow up far outside the region the projection ball must cover. A
    # strong ridge shrinks the center toward zero, keeping the true
    # ratings within reach of the fixed-radius projection ball.
    WARMUP_RIDGE = 2.0

    def _finish_warmup(self):
        cfg = self.config
        r_hat = mle_fit(self.history, self.n,
                        ridge=max(cfg.ridge, self.WARMUP_RIDGE)).r
        c = c_bar = None
        if self.use_melo:
            # zero init is a saddle point of the cyclic term; break it
            c = self.rng.uniform(-0.1, 0.1, size=(self.n, 2 * cfg.k))
            c_bar = c.copy()
        self.sgd = SgdState(r_tilde=r_hat.copy(), r_bar=r_hat.copy(),
                            center=r_hat.copy(), radius=2.0,
                            eta0=cfg.eta0, alpha=cfg.alpha,
                            c_tilde=c, c_bar=c_bar)

    def step(self, env):
        self.t += 1
        if not self.warmed_up:
            return self._warmup_step(env)
        cand = self._candidate_set(self.sgd.r_bar, self.sgd.c_bar,
                                   self._gamma())
        x, y = self._max_uncertainty_pair(cand)
        o = env.play(x, y)
        if x != y:  # self-pairs carry zero information
            self.buffer.append(x, y, o)
            self.tracker.update(x, y)
            if self.buffer.full():
                self.sgd = batch_update(self.sgd, self.buffer)
                self.buffer.clear()
        return x, y, o

    def estimate(self) -> RatingState:
        if self.sgd is None:
            raise NotReadyError("warmup has not completed")
        k = self.config.k if self.use_melo else 0
        return RatingState(r=self.sgd.r_bar.copy(),
                           c=None if self.sgd.c_bar is None
                           else self.sgd.c_bar.copy(), k=k)


class MaxInPScheduler(_WarmupScheduler):
    """Full-history MLE refit per round, same candidate/pair rule.

    Kept deliberately O(t) per round: the entire match log is refit
    from scratch each time, which is the cost profile this baseline
    is meant to exhibit.
    """

    def __init__(self, n, config, rng):
        super().__init__(n, config, rng)
        self.mle_state: RatingState | None = None

    def _finish_warmup(self):
        self.mle_state = mle_fit(self.history, self.n, ridge=self.config.ridge)

    def step(self, env):
        self.t += 1
        if not self.warmed_up:
            return self._warmup_step(env)
        self.mle_state = mle_fit(self.history, self.n, ridge=self.config.ridge)
        cand = self._candidate_set(self.mle_state.r, None, self._gamma())
        x, y = self._max_uncertainty_pair(cand)
        o = env.play(x, y)
        self.history.append((x, y, o))
        if x != y:
            self.tracker.update(x, y)
        return x, y, o

    def estimate(self) -> RatingState:
        if self.mle_state is None:
            raise NotReadyError("warmup has not completed")
        return self.mle_state


def make_scheduler(n: int, config: SchedulerConfig,
                   rng: np.random.Generator) -> Scheduler:
    algo = config.algo
    if algo == "maxin_elo":
        return MaxInScheduler(n, config, rng, use_melo=False)
    if algo == "maxin_melo":
        return MaxInScheduler(n, config, rng, use_melo=True)
    if algo == "random":
        return RandomScheduler(n, config, rng)
    if algo == "rg_ucb":
        return RgUcbScheduler(n, config, rng)
    if algo == "dbgd":
        return DbgdScheduler(n, config, rng)
    if algo == "maxinp":
        return MaxInPScheduler(n, config, rng)
    raise ConfigError(f"unknown algorithm: {algo}", key="algo")
