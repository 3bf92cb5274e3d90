"""Ground-truth win-probability matrices and their transitive/cyclic split.

A game environment is an n x n matrix of win probabilities. Its logit
matrix is antisymmetric and decomposes into a transitive part grad(r)
(difference of per-player ratings) and a divergence-free cyclic part.
The divergence vector is the "true rating" used for regret accounting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import (
    AntisymmetryError,
    DiagonalError,
    InvalidParameterError,
    InvalidSizeError,
    MatrixParseError,
    NonSquareMatrixError,
)

DEFAULT_CLIP_EPS = 1e-3

_GEN_TOL = 1e-9
_LOAD_TOL = 1e-6


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.asarray(z, dtype=float)))


@dataclass(frozen=True)
class WinMatrix:
    """n x n matrix of ground-truth win probabilities."""

    n: int
    p: npt.NDArray[np.float64]
    name: str = ""

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "p", p)
        _validate(self.n, p, tol=_GEN_TOL)


@dataclass(frozen=True)
class LogitMatrix:
    """Antisymmetric logit matrix of a (clipped) win matrix."""

    n: int
    a: npt.NDArray[np.float64]
    clip_eps: float


@dataclass(frozen=True)
class TrueRatings:
    """Transitive ratings and cyclic remainder of a game's logit matrix."""

    r_star: npt.NDArray[np.float64]
    rot: npt.NDArray[np.float64]
    best: int
    delta: float
    delta_max: float


def _validate(n: int, p: np.ndarray, tol: float) -> None:
    if n < 2:
        raise InvalidSizeError(f"need at least 2 players, got {n}")
    if p.shape != (n, n):
        raise NonSquareMatrixError(f"expected {n}x{n} matrix, got {p.shape}")
    # diagonal first: a bad diagonal would also trip the pairwise check
    if np.max(np.abs(np.diag(p) - 0.5)) > tol:
        raise DiagonalError("diagonal entries must equal 0.5")
    if np.max(np.abs(p + p.T - 1.0)) > tol:
        raise AntisymmetryError("p[i][j] + p[j][i] != 1 beyond tolerance")


def gen_elo_game(n: int, rating_scale: float, seed: int,
                 name: str = "elo") -> WinMatrix:
    """Synthetic transitive game from i.i.d. uniform latent ratings."""
    if n < 2:
        raise InvalidSizeError(f"need at least 2 players, got {n}")
    if rating_scale < 0:
        raise InvalidParameterError("rating_scale must be non-negative")
    rng = np.random.default_rng(seed)
    latent = rng.uniform(-rating_scale, rating_scale, size=n)
    p = sigmoid(latent[:, None] - latent[None, :])
    # exact antisymmetry despite floating-point sigmoid asymmetry
    p = 0.5 * (p + (1.0 - p.T))
    np.fill_diagonal(p, 0.5)
    return WinMatrix(n=n, p=p, name=name)


def gen_noisy_elo_game(n: int, rating_scale: float, eps: float, seed: int,
                       clip_eps: float = DEFAULT_CLIP_EPS) -> WinMatrix:
    """Elo game with Gaussian noise on the upper triangle, mirrored below."""
    if eps < 0:
        raise InvalidParameterError("eps must be non-negative")
    base = gen_elo_game(n, rating_scale, seed, name=f"elo+noise={eps}")
    p = base.p.copy()
    noise_rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    iu = np.triu_indices(n, k=1)
    noisy = p[iu] + eps * noise_rng.standard_normal(len(iu[0]))
    noisy = np.clip(noisy, clip_eps, 1.0 - clip_eps)
    p[iu] = noisy
    p.T[iu] = 1.0 - noisy
    return WinMatrix(n=n, p=p, name=base.name)


def gen_triangular(n: int) -> WinMatrix:
    """Deterministic game: lower index always beats higher index."""
    if n < 2:
        raise InvalidSizeError(f"need at least 2 players, got {n}")
    p = np.where(np.arange(n)[:, None] < np.arange(n)[None, :], 1.0, 0.0)
    np.fill_diagonal(p, 0.5)
    return WinMatrix(n=n, p=p, name="triangular")


def gen_cyclic(n: int) -> WinMatrix:
    """Rock-paper-scissors-style ring; every player's divergence is zero."""
    if n < 3:
        raise InvalidSizeError(f"cyclic game needs at least 3 players, got {n}")
    p = np.full((n, n), 0.5)
    idx = np.arange(n)
    p[idx, (idx + 1) % n] = 0.9
    p[(idx + 1) % n, idx] = 0.1
    return WinMatrix(n=n, p=p, name="cyclic")


def load_matrix(path, clip_eps: float = DEFAULT_CLIP_EPS) -> WinMatrix:
    """Read a headerless CSV of win probabilities and validate it.

    Entries are stored as-is; clipping only applies later when logits
    are taken. Validation tolerance is looser (1e-6) than for generated
    matrices since files typically hold rounded decimals.
    """
    try:
        p = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    except (ValueError, OSError) as exc:
        raise MatrixParseError(f"cannot parse {path}: {exc}") from exc
    if p.shape[0] != p.shape[1]:
        raise NonSquareMatrixError(f"matrix in {path} is {p.shape[0]}x{p.shape[1]}")
    n = p.shape[0]
    _validate(n, p, tol=_LOAD_TOL)
    return _make_unchecked(n, p, str(path))


def _make_unchecked(n: int, p: np.ndarray, name: str) -> WinMatrix:
    # bypass the 1e-9 constructor check; the loader already validated at 1e-6
    m = object.__new__(WinMatrix)
    object.__setattr__(m, "n", n)
    object.__setattr__(m, "p", np.asarray(p, dtype=float))
    object.__setattr__(m, "name", name)
    return m


def logit_matrix(m: WinMatrix, clip_eps: float = DEFAULT_CLIP_EPS) -> LogitMatrix:
    """Antisymmetrized logits of the clipped win matrix."""
    if not 0.0 < clip_eps < 0.5:
        raise InvalidParameterError("clip_eps must lie in (0, 0.5)")
    q = np.clip(m.p, clip_eps, 1.0 - clip_eps)
    a = np.log(q) - np.log1p(-q)
    a = 0.5 * (a - a.T)  # exact antisymmetry
    np.fill_diagonal(a, 0.0)
    return LogitMatrix(n=m.n, a=a, clip_eps=clip_eps)


def true_ratings(m: WinMatrix, clip_eps: float = DEFAULT_CLIP_EPS) -> TrueRatings:
    """Split the logit matrix into ratings (divergence) plus cyclic part."""
    a = logit_matrix(m, clip_eps).a
    r_star = a.mean(axis=1)
    rot = a - (r_star[:, None] - r_star[None, :])
    best = int(np.argmax(r_star))  # argmax takes the lowest index on ties
    order = np.sort(r_star)[::-1]
    delta = float(order[0] - order[1])
    delta_max = float(order[0] - order[-1])
    return TrueRatings(r_star=r_star, rot=rot, best=best,
                       delta=delta, delta_max=delta_max)


def sample_outcome(m: WinMatrix, x: int, y: int,
                   rng: np.random.Generator) -> int:
    """Bernoulli draw: 1 if x beats y. Self-pairs draw Bern(0.5)."""
    if not (0 <= x < m.n and 0 <= y < m.n):
        raise IndexError(f"player index out of range: ({x}, {y})")
    return int(rng.random() < m.p[x, y])
