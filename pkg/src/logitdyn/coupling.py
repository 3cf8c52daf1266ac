"""Two-chain coupling for 2-strategy games.

Both chains select the same player, then the player's new strategies are
drawn from the monotone joint table

    (0,0) w.p. min(sx0, sy0),   (1,1) w.p. min(sx1, sy1),
    (0,1) w.p. sx0 - min(sx0, sy0),   (1,0) w.p. sx1 - min(sx1, sy1),

where sx/sy are the single-chain update probabilities in the two chains.
The marginals match the single chains exactly and at most one of the two
mismatch outcomes has positive probability, so coalesced chains stay
coalesced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidParametersError, UnsupportedGameError
from .dynamics import check_beta, update_distribution
from .games import GameSpec, ProfileSpace, validate_profile


def _require_two_strategies(game: GameSpec):
    if any(m != 2 for m in game.strategy_counts):
        raise UnsupportedGameError("coupling is defined for 2-strategy games only")


@dataclass(frozen=True)
class JointUpdate:
    """Joint law of one coupled update, in outcome order (0,0),(1,1),(0,1),(1,0)."""

    p00: float
    p11: float
    p01: float
    p10: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p00, self.p11, self.p01, self.p10])

    @property
    def mismatch(self) -> float:
        return self.p01 + self.p10

    def marginal_x(self) -> np.ndarray:
        # P[x_i = 0], P[x_i = 1]
        return np.array([self.p00 + self.p01, self.p11 + self.p10])

    def marginal_y(self) -> np.ndarray:
        return np.array([self.p00 + self.p10, self.p11 + self.p01])


@dataclass
class CoupledState:
    x: np.ndarray
    y: np.ndarray

    @property
    def coalesced(self) -> bool:
        return bool(np.array_equal(self.x, self.y))


def joint_update(game: GameSpec, x, y, i: int, beta: float) -> JointUpdate:
    """Joint update table for player i from the pair of profiles (x, y)."""
    _require_two_strategies(game)
    sx = update_distribution(game, x, i, beta)
    sy = update_distribution(game, y, i, beta)
    p00 = min(sx[0], sy[0])
    p11 = min(sx[1], sy[1])
    return JointUpdate(p00=p00, p11=p11, p01=sx[0] - p00, p10=sx[1] - p11)


def coupled_step(game: GameSpec, state: CoupledState, beta: float, rng) -> CoupledState:
    """One step of the coupled pair: same player, one draw through the table.

    The cumulative order is (0,0), (1,1), (0,1), (1,0), so trajectories are
    deterministic given the generator state.
    """
    n = game.n_players
    i = int(rng.integers(n))
    ju = joint_update(game, state.x, state.y, i, beta)
    u = rng.random()
    x = state.x.copy()
    y = state.y.copy()
    if u < ju.p00:
        x[i], y[i] = 0, 0
    elif u < ju.p00 + ju.p11:
        x[i], y[i] = 1, 1
    elif u < ju.p00 + ju.p11 + ju.p01:
        x[i], y[i] = 0, 1
    else:
        x[i], y[i] = 1, 0
    return CoupledState(x=x, y=y)


def coupling_product_matrix(game: GameSpec, beta: float, cap: int = 2**16) -> np.ndarray:
    """Exact transition kernel of the coupled pair process over Omega x Omega.

    Pair (x, y) is indexed as encode(x) * size + encode(y).  Diagonal pairs
    form an absorbing copy of the single chain.
    """
    _require_two_strategies(game)
    beta = check_beta(beta)
    space = ProfileSpace(game)
    size = space.size
    if size * size > cap:
        raise CapacityError(f"pair space has {size * size} states, cap is {cap}")
    n = game.n_players
    Q = np.zeros((size * size, size * size))
    for kx in range(size):
        x = space.decode(kx)
        for ky in range(size):
            y = space.decode(ky)
            row = kx * size + ky
            for i in range(n):
                ju = joint_update(game, x, y, i, beta)
                kx0, kx1 = kx & ~(1 << i), kx | (1 << i)
                ky0, ky1 = ky & ~(1 << i), ky | (1 << i)
                Q[row, kx0 * size + ky0] += ju.p00 / n
                Q[row, kx1 * size + ky1] += ju.p11 / n
                Q[row, kx0 * size + ky1] += ju.p01 / n
                Q[row, kx1 * size + ky0] += ju.p10 / n
    return Q


def coalescence_time(game: GameSpec, x, y, beta: float, rng, horizon: int) -> int | None:
    """First step at which the coupled chains agree; None if beyond horizon.

    Semantically one coupled_step per iteration; update distributions are
    cached on (player, rest-of-profile) to keep long runs cheap.
    """
    _require_two_strategies(game)
    beta = check_beta(beta)
    x = validate_profile(game, x).copy()
    y = validate_profile(game, y).copy()
    mismatches = int(np.sum(x != y))
    if mismatches == 0:
        return 0
    n = game.n_players
    sigma0: dict = {}

    def sigma_zero(profile: np.ndarray, i: int) -> float:
        saved, profile[i] = profile[i], 0
        key = (i, profile.tobytes())
        val = sigma0.get(key)
        if val is None:
            profile[i] = saved
            val = float(update_distribution(game, profile, i, beta)[0])
            profile[i] = 0
            sigma0[key] = val
        profile[i] = saved
        return val

    for t in range(1, horizon + 1):
        i = int(rng.integers(n))
        sx0 = sigma_zero(x, i)
        sy0 = sigma_zero(y, i)
        p00 = min(sx0, sy0)
        p11 = min(1.0 - sx0, 1.0 - sy0)
        u = rng.random()
        if u < p00:
            nx = ny = 0
        elif u < p00 + p11:
            nx = ny = 1
        elif u < p00 + p11 + (sx0 - p00):
            nx, ny = 0, 1
        else:
            nx, ny = 1, 0
        mismatches += int(nx != ny) - int(x[i] != y[i])
        x[i], y[i] = nx, ny
        if mismatches == 0:
            return t
    return None


def _start_pairs(space: ProfileSpace, rng, max_pairs: int = 32) -> list[tuple[int, int]]:
    size = space.size
    if size * size <= 256:
        return [(kx, ky) for kx in range(size) for ky in range(size) if kx != ky]
    # Antipodal pairs are the worst starts for the games studied here; add
    # random pairs for coverage.
    pairs = [(0, size - 1), (size - 1, 0)]
    while len(pairs) < max_pairs:
        kx, ky = int(rng.integers(size)), int(rng.integers(size))
        if kx != ky:
            pairs.append((kx, ky))
    return pairs


def coupling_tmix_upper(
    game: GameSpec,
    beta: float,
    trials: int = 200,
    horizon: int = 10**6,
    epsilon: float = 0.25,
    seed: int = 0,
) -> int:
    """Monte-Carlo upper estimate of the mixing time via coupling.

    For each sampled start pair, ``trials`` coalescence times are drawn; the
    estimate is the worst empirical (1 - epsilon) quantile across pairs,
    pushed up by one binomial standard deviation of the quantile index as a
    confidence margin.  This is an estimate, not a proof.
    """
    if not 0.0 < epsilon < 0.5:
        raise InvalidParametersError("epsilon must be in (0, 1/2)")
    space = ProfileSpace(game)
    rng = np.random.default_rng(seed)
    pairs = _start_pairs(space, rng)
    margin = math.sqrt(trials * epsilon * (1 - epsilon))
    rank = min(trials - 1, int(math.ceil((1 - epsilon) * trials + margin)))
    worst = 0
    for kx, ky in pairs:
        x, y = space.decode(kx), space.decode(ky)
        taus = []
        for _ in range(trials):
            tau = coalescence_time(game, x, y, beta, rng, horizon)
            taus.append(horizon + 1 if tau is None else tau)
        taus.sort()
        worst = max(worst, taus[rank])
    return int(worst)
