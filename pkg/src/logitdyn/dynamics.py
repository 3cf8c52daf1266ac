"""The logit update rule, transition matrices, stationary distributions.

The chain: at each step a player is picked uniformly at random and resamples
her strategy with probability proportional to exp(beta * utility), holding
the other players fixed.  ``beta >= 0`` is the inverse noise; beta = 0 is
uniform play.  All exponentials go through a max-shifted softmax, so beta up
to several hundred is safe for unit-scale utilities.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    CapacityError,
    InvalidParametersError,
    MissingPotentialError,
    NumericalError,
)
from .games import GameSpec, ProfileSpace, validate_profile

# Dense transition matrices are refused above this many states.
DEFAULT_DENSE_CAP = 4096


def check_beta(beta: float) -> float:
    beta = float(beta)
    if not (beta >= 0.0 and math.isfinite(beta)):
        raise InvalidParametersError(f"beta must be finite and >= 0, got {beta}")
    return beta


def update_distribution(game: GameSpec, x, i: int, beta: float) -> np.ndarray:
    """Distribution of player i's new strategy from profile x.

    Entry s is proportional to exp(beta * u_i(x_{-i}, s)); the current
    strategy x_i plays no role.  Computed with a max shift for stability.
    """
    beta = check_beta(beta)
    x = validate_profile(game, x)
    if not 0 <= i < game.n_players:
        raise InvalidParametersError(f"player index {i} out of range")
    y = x.copy()
    logs = np.empty(game.strategy_counts[i])
    for s in range(game.strategy_counts[i]):
        y[i] = s
        logs[s] = beta * game.utility(i, y)
    logs -= logs.max()
    w = np.exp(logs)
    return w / w.sum()


def transition_matrix(game: GameSpec, beta: float, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Dense row-stochastic transition matrix over the full profile space.

    State indexing follows ProfileSpace.  P(x, y) is (1/n) sigma_i(y_i | x)
    when x and y differ exactly at player i, (1/n) sum_i sigma_i(x_i | x) on
    the diagonal, and zero when the profiles differ at two or more players.
    """
    beta = check_beta(beta)
    space = ProfileSpace(game, cap=cap)
    n = game.n_players
    size = space.size
    P = np.zeros((size, size))
    strides = np.empty(n, dtype=np.int64)
    stride = 1
    for i in range(n):
        strides[i] = stride
        stride *= game.strategy_counts[i]
    for k in range(size):
        x = space.decode(k)
        base = k
        diag = 0.0
        for i in range(n):
            sigma = update_distribution(game, x, i, beta)
            diag += sigma[x[i]]
            for s in range(game.strategy_counts[i]):
                if s == x[i]:
                    continue
                P[k, base + (s - x[i]) * strides[i]] = sigma[s] / n
        P[k, k] = diag / n
    return P


def gibbs_stationary(game: GameSpec, beta: float, cap: int = 2**20) -> np.ndarray:
    """Gibbs measure pi(x) = exp(beta * Phi(x)) / Z for a potential game.

    Requires an attached exact potential (the factories in
    :mod:`logitdyn.games` attach verified ones).  Max-shifted for stability.
    """
    beta = check_beta(beta)
    if game.potential is None:
        raise MissingPotentialError(f"game {game.name!r} has no attached potential")
    space = ProfileSpace(game, cap=cap)
    logs = np.array([beta * game.potential(x) for x in space])
    logs -= logs.max()
    w = np.exp(logs)
    return w / w.sum()


def stationary_solve(P: np.ndarray, tol: float = 1e-12, max_iter: int = 10**7) -> np.ndarray:
    """The unique pi with pi P = pi, for an irreducible aperiodic chain.

    Solves the linear system directly (the dense cap keeps this cheap); falls
    back to power iteration if the solve degenerates numerically.
    """
    size = P.shape[0]
    if P.shape != (size, size):
        raise InvalidParametersError("transition matrix must be square")
    # (P^T - I) pi = 0 with sum(pi) = 1: replace one equation by normalization.
    A = P.T - np.eye(size)
    A[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    try:
        pi = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        pi = None
    if pi is not None and np.all(pi > -1e-12):
        pi = np.clip(pi, 0.0, None)
        pi /= pi.sum()
        if np.abs(pi @ P - pi).max() < 1e-10:
            return pi
    # Power iteration fallback.
    pi = np.full(size, 1.0 / size)
    for _ in range(max_iter):
        nxt = pi @ P
        if np.abs(nxt - pi).max() < tol:
            return nxt / nxt.sum()
        pi = nxt
    raise NumericalError("power iteration did not converge")


def detailed_balance_check(P: np.ndarray, pi: np.ndarray, atol: float = 1e-12) -> bool:
    """True iff max |pi(x) P(x,y) - pi(y) P(y,x)| < atol."""
    if P.shape[0] != P.shape[1] or pi.shape != (P.shape[0],):
        raise InvalidParametersError("dimension mismatch between P and pi")
    F = pi[:, None] * P
    return bool(np.abs(F - F.T).max() < atol)


def simulate_trajectory(game: GameSpec, x0, beta: float, steps: int, seed: int) -> np.ndarray:
    """Simulate the chain for ``steps`` updates; returns (steps+1, n) profiles.

    Reproducible: the generator is numpy's PCG64 seeded with ``seed``; each
    step draws the player with ``integers`` and the strategy by inverse CDF
    from one ``random`` call.
    """
    beta = check_beta(beta)
    x = validate_profile(game, x0)
    if steps < 0:
        raise InvalidParametersError("steps must be >= 0")
    rng = np.random.default_rng(seed)
    n = game.n_players
    out = np.empty((steps + 1, n), dtype=np.int64)
    out[0] = x
    # sigma depends on (i, x_{-i}) only, so cache cumulative tables keyed by
    # the profile with coordinate i zeroed
    cumsums: dict = {}
    for t in range(1, steps + 1):
        i = int(rng.integers(n))
        saved, x[i] = x[i], 0
        key = (i, x.tobytes())
        cum = cumsums.get(key)
        if cum is None:
            x[i] = saved
            cum = np.cumsum(update_distribution(game, x, i, beta))
            x[i] = 0
            cumsums[key] = cum
        x[i] = saved
        u = rng.random()
        x[i] = min(int(np.searchsorted(cum, u, side="right")),
                   game.strategy_counts[i] - 1)
        out[t] = x
    return out
