"""Finite strategic games, profiles, welfare, potentials, and the concrete games.

A profile is a numpy integer vector with one strategy index per player
(entry ``i`` in ``[0, strategy_counts[i])``).  Profile indexing is mixed
radix with player 0 least significant, so profile/index conversions are
deterministic and transition matrices are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CapacityError, InvalidParametersError, InvalidProfileError

# Enumeration ops refuse profile spaces larger than this unless overridden.
DEFAULT_ENUM_CAP = 2**20

UtilityFn = Callable[[int, np.ndarray], float]
PotentialFn = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class GameSpec:
    """A finite strategic game.

    ``utility(i, x)`` must be a pure function of the player index and the
    profile; ``potential``, when given, must be an exact potential (checkable
    with :func:`verify_exact_potential`).  Instances are immutable and safe
    to share across threads.
    """

    n_players: int
    strategy_counts: tuple[int, ...]
    utility: UtilityFn
    potential: Optional[PotentialFn] = None
    name: str = "game"

    def __post_init__(self):
        if self.n_players < 1:
            raise InvalidParametersError("need at least one player")
        if len(self.strategy_counts) != self.n_players:
            raise InvalidParametersError("strategy_counts length must equal n_players")
        if any(m < 1 for m in self.strategy_counts):
            raise InvalidParametersError("every player needs at least one strategy")

    @property
    def n_profiles(self) -> int:
        size = 1
        for m in self.strategy_counts:
            size *= m
        return size


def validate_profile(game: GameSpec, x) -> np.ndarray:
    """Return ``x`` as an int array, or raise InvalidProfileError."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (game.n_players,):
        raise InvalidProfileError(
            f"profile has shape {x.shape}, expected ({game.n_players},)"
        )
    counts = np.asarray(game.strategy_counts)
    if np.any(x < 0) or np.any(x >= counts):
        raise InvalidProfileError(f"profile entries out of range: {x}")
    return x


class ProfileSpace:
    """Mixed-radix bijection between profiles and indices in [0, size).

    Player 0 is the least significant digit: for 2-strategy games the index
    of a profile is simply its bit pattern with player i at bit i.
    """

    def __init__(self, game: GameSpec, cap: int = DEFAULT_ENUM_CAP):
        size = game.n_profiles
        if size > cap:
            raise CapacityError(f"profile space has {size} states, cap is {cap}")
        self.game = game
        self.size = size
        self._counts = np.asarray(game.strategy_counts, dtype=np.int64)

    def encode(self, x) -> int:
        x = validate_profile(self.game, x)
        idx = 0
        for i in range(self.game.n_players - 1, -1, -1):
            idx = idx * self._counts[i] + x[i]
        return int(idx)

    def decode(self, idx: int) -> np.ndarray:
        if not 0 <= idx < self.size:
            raise InvalidProfileError(f"index {idx} out of range [0, {self.size})")
        x = np.empty(self.game.n_players, dtype=np.int64)
        for i in range(self.game.n_players):
            idx, x[i] = divmod(idx, self._counts[i])
        return x

    def __iter__(self):
        for k in range(self.size):
            yield self.decode(k)


def social_welfare(game: GameSpec, x) -> float:
    """Sum of all players' utilities at profile ``x``."""
    x = validate_profile(game, x)
    return float(sum(game.utility(i, x) for i in range(game.n_players)))


def verify_exact_potential(
    game: GameSpec,
    phi: Optional[PotentialFn] = None,
    cap: int = DEFAULT_ENUM_CAP,
    atol: float = 1e-12,
) -> bool:
    """Check u_i(x) - u_i(y) == phi(x) - phi(y) on all unilateral deviations.

    ``phi`` defaults to the game's attached potential.  The whole profile
    space is enumerated, so the game must fit under ``cap``.
    """
    if phi is None:
        phi = game.potential
    if phi is None:
        raise InvalidParametersError("no potential to verify")
    space = ProfileSpace(game, cap=cap)
    for x in space:
        phi_x = phi(x)
        for i in range(game.n_players):
            u_x = game.utility(i, x)
            y = x.copy()
            for s in range(game.strategy_counts[i]):
                if s == x[i]:
                    continue
                y[i] = s
                du = u_x - game.utility(i, y)
                dphi = phi_x - phi(y)
                if abs(du - dphi) > atol:
                    return False
            y[i] = x[i]
    return True


def pure_nash_equilibria(game: GameSpec, cap: int = DEFAULT_ENUM_CAP) -> set[tuple[int, ...]]:
    """All profiles (as tuples) with no strictly improving unilateral deviation."""
    space = ProfileSpace(game, cap=cap)
    equilibria = set()
    for x in space:
        is_nash = True
        for i in range(game.n_players):
            u_x = game.utility(i, x)
            y = x.copy()
            for s in range(game.strategy_counts[i]):
                if s == x[i]:
                    continue
                y[i] = s
                if game.utility(i, y) > u_x:
                    is_nash = False
                    break
            y[i] = x[i]
            if not is_nash:
                break
        if is_nash:
            equilibria.add(tuple(int(v) for v in x))
    return equilibria


# ---------------------------------------------------------------------------
# Concrete games
# ---------------------------------------------------------------------------


def _ck_facilities(i: int, s: int) -> list[tuple[str, int]]:
    # strategy 0 -> {g_i, h_i};  strategy 1 -> {g_{i+1}, h_{i-1}, h_{i+1}}, mod 3
    if s == 0:
        return [("g", i % 3), ("h", i % 3)]
    return [("g", (i + 1) % 3), ("h", (i - 1) % 3), ("h", (i + 1) % 3)]


def _ck_loads(x: np.ndarray) -> dict[tuple[str, int], int]:
    loads: dict[tuple[str, int], int] = {}
    for j in range(3):
        for f in _ck_facilities(j, int(x[j])):
            loads[f] = loads.get(f, 0) + 1
    return loads


def make_ck() -> GameSpec:
    """The 3-player, 6-facility linear congestion game.

    Each facility costs its load; a player's utility is minus the total cost
    of her selected facilities.  The attached exact potential is the negated
    Rosenthal sum -sum_j sum_{i=1..load(j)} i (negated because utilities are
    negated costs, so potential differences track utility differences).
    """

    def utility(i: int, x: np.ndarray) -> float:
        loads = _ck_loads(x)
        return -float(sum(loads[f] for f in _ck_facilities(i, int(x[i]))))

    def potential(x: np.ndarray) -> float:
        loads = _ck_loads(x)
        return -float(sum(load * (load + 1) // 2 for load in loads.values()))

    return GameSpec(3, (2, 2, 2), utility, potential, name="ck")


def _table_game(payoffs: dict[tuple[int, int], tuple[float, float]],
                potential: Optional[PotentialFn], name: str) -> GameSpec:
    def utility(i: int, x: np.ndarray) -> float:
        return payoffs[(int(x[0]), int(x[1]))][i]

    return GameSpec(2, (2, 2), utility, potential, name=name)


def make_coordination(a: float, b: float, c: float, d: float) -> GameSpec:
    """2x2 coordination game with payoff table ((a,a),(c,d) / (d,c),(b,b)).

    Requires a > d, b > c and a - d >= b - c.  The attached potential is
    Phi(0,0) = a - d, Phi(0,1) = Phi(1,0) = 0, Phi(1,1) = b - c.
    """
    if not (a > d and b > c and (a - d) >= (b - c)):
        raise InvalidParametersError(
            "coordination game needs a > d, b > c, a - d >= b - c"
        )
    big, small = a - d, b - c
    payoffs = {(0, 0): (a, a), (0, 1): (c, d), (1, 0): (d, c), (1, 1): (b, b)}
    phi_table = {(0, 0): big, (0, 1): 0.0, (1, 0): 0.0, (1, 1): small}

    def potential(x: np.ndarray) -> float:
        return phi_table[(int(x[0]), int(x[1]))]

    return _table_game(payoffs, potential, name="coordination")


def make_anti_coordination(a: float, b: float, c: float, d: float) -> GameSpec:
    """2x2 anti-coordination game: same table, requires d > a, c > b, d-a >= c-b.

    The potential is maximal on the two mixed-role equilibria (0,1), (1,0).
    """
    if not (d > a and c > b and (d - a) >= (c - b)):
        raise InvalidParametersError(
            "anti-coordination game needs d > a, c > b, d - a >= c - b"
        )
    payoffs = {(0, 0): (a, a), (0, 1): (c, d), (1, 0): (d, c), (1, 1): (b, b)}
    # Unilateral moves from (0,0) to an unfair profile gain d - a for the
    # mover; from (1,1) they gain c - b.
    phi_table = {(0, 0): 0.0, (0, 1): d - a, (1, 0): d - a, (1, 1): (d - a) - (c - b)}

    def potential(x: np.ndarray) -> float:
        return phi_table[(int(x[0]), int(x[1]))]

    return _table_game(payoffs, potential, name="anti_coordination")


def make_matching_pennies() -> GameSpec:
    """Matching Pennies (H=0, T=1): zero-sum, not a potential game."""
    payoffs = {
        (0, 0): (1.0, -1.0),
        (0, 1): (-1.0, 1.0),
        (1, 0): (-1.0, 1.0),
        (1, 1): (1.0, -1.0),
    }
    return _table_game(payoffs, None, name="matching_pennies")


def make_stairs(n: int) -> GameSpec:
    """n-player 2-strategy game with potential |x| (number of players at 1).

    The dynamics of interest only depends on the potential; utilities are
    fixed to u_i = |x| for concreteness, which makes |x| an exact potential.
    """
    if n < 1:
        raise InvalidParametersError("stairs game needs n >= 1")

    def utility(i: int, x: np.ndarray) -> float:
        return float(np.sum(x))

    def potential(x: np.ndarray) -> float:
        return float(np.sum(x))

    return GameSpec(n, (2,) * n, utility, potential, name=f"stairs-{n}")


def make_or(n: int) -> GameSpec:
    """n-player OR game: everyone pays the OR of all strategies."""
    if n < 1:
        raise InvalidParametersError("or game needs n >= 1")

    def utility(i: int, x: np.ndarray) -> float:
        return 0.0 if not np.any(x) else -1.0

    def potential(x: np.ndarray) -> float:
        return 0.0 if not np.any(x) else -1.0

    return GameSpec(n, (2,) * n, utility, potential, name=f"or-{n}")


def make_xor(n: int) -> GameSpec:
    """n-player XOR game: everyone pays the parity of the strategy sum."""
    if n < 1:
        raise InvalidParametersError("xor game needs n >= 1")

    def utility(i: int, x: np.ndarray) -> float:
        return 0.0 if int(np.sum(x)) % 2 == 0 else -1.0

    def potential(x: np.ndarray) -> float:
        return 0.0 if int(np.sum(x)) % 2 == 0 else -1.0

    return GameSpec(n, (2,) * n, utility, potential, name=f"xor-{n}")
