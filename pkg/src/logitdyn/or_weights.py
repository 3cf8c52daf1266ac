"""Weighted path coupling for the OR game.

Edges of the Hamming graph join profiles differing at one player; an edge
whose endpoints have k-1 and k ones sits at level k and carries weight
delta_k >= 1.  A schedule (delta_1..delta_n, alpha) certifies the mixing
bound (ln(diameter) + ln(1/eps)) / alpha provided the one-step expected
distance across every level-k edge contracts:

    lhs_k <= delta_k * exp(-alpha)                       (k = 1..n)

with lhs_1   = (n-1)/n * (delta_1/(1+e^-b) + delta_2/2)
     lhs_2   = 1/(2n) * (2 delta_1/(1+e^-b) + (n-1) delta_2 + (n-2) delta_3)
     lhs_k   = 1/(2n) * ((n-1) delta_k + (k-1) delta_{k-1} + (n-k) delta_{k+1})
     lhs_n   = (n-1)/(2n) * (delta_n + delta_{n-1}).

Three schedules are provided; ``check_edge_inequalities`` evaluates the
system honestly and ``verify_or_contraction`` recomputes each lhs_k from the
executable coupling on canonical adjacent profile pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParametersError, NumericalError
from .coupling import joint_update
from .games import make_or


@dataclass(frozen=True)
class WeightSchedule:
    """Edge weights delta_1..delta_n (deltas[k-1] = delta_k) and rate alpha."""

    deltas: np.ndarray
    alpha: float
    label: str

    def __post_init__(self):
        if np.any(self.deltas < 1.0 - 1e-12):
            raise InvalidParametersError("path coupling needs every delta_k >= 1")
        if not self.alpha > 0:
            raise InvalidParametersError("alpha must be positive")

    @property
    def n(self) -> int:
        return len(self.deltas)

    @property
    def delta_max(self) -> float:
        return float(self.deltas.max())

    @property
    def diameter(self) -> float:
        # weighted diameter of the Hamming graph: the all-levels path
        return float(self.deltas.sum())


def _check_n(n: int):
    if n < 2:
        raise InvalidParametersError("schedules need n >= 2")


def weights_large_beta(n: int) -> WeightSchedule:
    """Schedule valid for every beta: delta_n = 1,
    delta_k = (n-k)/k * delta_{k+1} + 1,  delta_1 = ((n-1) delta_2 + 1)/2,
    alpha = 1/(2 n delta_max)."""
    _check_n(n)
    d = np.ones(n + 1)
    for k in range(n - 1, 1, -1):
        d[k] = (n - k) / k * d[k + 1] + 1.0
    d[1] = ((n - 1) * d[2] + 1.0) / 2.0 if n >= 2 else 1.0
    deltas = d[1:]
    return WeightSchedule(deltas=deltas, alpha=1.0 / (2 * n * deltas.max()),
                          label="large-beta")


def weights_small_beta(n: int, eps: float) -> WeightSchedule:
    """Schedule delta_1 = n^(1-eps), delta_2 = 4/3, rest 1, alpha = 1/n.

    Intended for beta < (1-eps) ln n; see check_edge_inequalities for
    whether the contraction system actually holds at a given (n, beta).
    """
    _check_n(n)
    if not 0.0 < eps < 1.0:
        raise InvalidParametersError("eps must be in (0, 1)")
    deltas = np.ones(n)
    deltas[0] = float(n) ** (1.0 - eps)
    if n >= 2:
        deltas[1] = 4.0 / 3.0
    return WeightSchedule(deltas=deltas, alpha=1.0 / n, label="small-beta")


@dataclass(frozen=True)
class RecursionTable:
    """The level recursions behind the log-beta schedule, for k = 1..n-1.

    a_k/b_k drive the weights; (p, q) and (l, r) split them into the
    e^{-beta} coefficient and the constant part:

        a_k = p_k e^{-beta} + l_k,   b_k = q_k e^{-beta} + r_k,

    with a_1 = n-1, b_1 = n e^{-beta} + 1 and
    a_k = (n-k) b_{k-1},  b_k = (n+1) b_{k-1} - (k-1) a_{k-1} (same form for
    p,q and l,r).  Closed forms: l_k = (n-k)(k-1)! and r_k = k!.

    Arrays are 0-based: a[k-1] is a_k.
    """

    n: int
    beta: float
    a: np.ndarray
    b: np.ndarray
    p: np.ndarray
    q: np.ndarray
    l: np.ndarray
    r: np.ndarray

    def gammas_direct(self) -> np.ndarray:
        return self.a / self.b

    def gammas_split(self) -> np.ndarray:
        eb = math.exp(-self.beta)
        return (self.p * eb + self.l) / (self.q * eb + self.r)


def recursion_table(n: int, beta: float) -> RecursionTable:
    _check_n(n)
    m = n - 1
    a = np.empty(m)
    b = np.empty(m)
    p = np.empty(m)
    q = np.empty(m)
    l = np.empty(m)
    r = np.empty(m)
    eb = math.exp(-beta)
    a[0], b[0] = n - 1.0, n * eb + 1.0
    p[0], q[0] = 0.0, float(n)
    l[0], r[0] = n - 1.0, 1.0
    for k in range(2, n):
        a[k - 1] = (n - k) * b[k - 2]
        b[k - 1] = (n + 1) * b[k - 2] - (k - 1) * a[k - 2]
        p[k - 1] = (n - k) * q[k - 2]
        q[k - 1] = (n + 1) * q[k - 2] - (k - 1) * p[k - 2]
        l[k - 1] = (n - k) * r[k - 2]
        r[k - 1] = (n + 1) * r[k - 2] - (k - 1) * l[k - 2]
    return RecursionTable(n=n, beta=float(beta), a=a, b=b, p=p, q=q, l=l, r=r)


def gamma_sequence(n: int, beta: float) -> np.ndarray:
    """gamma_k = a_k/b_k for k = 1..n-1, via the split (p,q,l,r) form.

    The split form stays accurate when e^{-beta} underflows the direct a,b
    recursion; both forms are cross-checked to 1e-9 relative when finite.
    """
    table = recursion_table(n, beta)
    split = table.gammas_split()
    direct = table.gammas_direct()
    finite = np.isfinite(direct)
    if np.any(finite):
        rel = np.abs(split[finite] - direct[finite]) / np.maximum(np.abs(direct[finite]), 1e-300)
        if rel.max() > 1e-9:
            raise NumericalError(
                f"gamma forms disagree ({rel.max():.3g} relative) at n={n}, beta={beta}"
            )
    return split


def weights_log_beta(n: int, beta: float) -> WeightSchedule:
    """Schedule delta_n = 1, delta_k = gamma_k delta_{k+1} + 1 for 2<=k<=n-1,
    delta_1 = (1+e^{-beta})/2 * (gamma_1 delta_2 + 1), alpha = 1/(2 n delta_max)."""
    _check_n(n)
    g = gamma_sequence(n, beta)
    d = np.ones(n + 1)
    for k in range(n - 1, 1, -1):
        d[k] = g[k - 1] * d[k + 1] + 1.0
    d[1] = (1.0 + math.exp(-beta)) / 2.0 * (g[0] * d[2] + 1.0)
    deltas = d[1:]
    return WeightSchedule(deltas=deltas, alpha=1.0 / (2 * n * deltas.max()),
                          label="log-beta")


def deltas_from_gammas(gammas: np.ndarray) -> np.ndarray:
    """Exact solution of delta_n = 1, delta_k = gamma_k delta_{k+1} + 1:

        delta_k = 1 + sum_{j=k}^{n-1} prod_{i=k}^{j} gamma_i.
    """
    m = len(gammas)
    deltas = np.ones(m + 1)
    for k in range(m, 0, -1):
        total = 1.0
        prod = 1.0
        for j in range(k, m + 1):
            prod *= gammas[j - 1]
            total += prod
        deltas[k - 1] = total
    return deltas


def delta_max_bound(gammas: np.ndarray) -> float:
    """n * max over 1 <= h <= j <= n-1 of prod_{i=h..j} gamma_i.

    Upper-bounds delta_max of any schedule built from these gammas (the k=1
    weight in the concrete schedules carries an extra factor <= 1).
    """
    m = len(gammas)
    n = m + 1
    best = 0.0
    for h in range(m):
        prod = 1.0
        for j in range(h, m):
            prod *= gammas[j]
            best = max(best, prod)
    return n * best


@dataclass(frozen=True)
class EdgeCheck:
    k: int
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + 1e-12


def edge_lhs(n: int, beta: float, deltas: np.ndarray) -> np.ndarray:
    """Left sides of the contraction system, one value per level k = 1..n."""
    if len(deltas) != n:
        raise InvalidParametersError(f"schedule has {len(deltas)} weights, expected {n}")
    d = np.concatenate([[math.nan], deltas])  # 1-based view
    f = 1.0 / (1.0 + math.exp(-beta))
    lhs = np.empty(n + 1)
    lhs[1] = (n - 1) / n * (d[1] * f + d[2] / 2.0)
    if n >= 3:
        lhs[2] = (2.0 * f * d[1] + (n - 1) * d[2] + (n - 2) * d[3]) / (2.0 * n)
    for k in range(3, n):
        lhs[k] = ((n - 1) * d[k] + (k - 1) * d[k - 1] + (n - k) * d[k + 1]) / (2.0 * n)
    lhs[n] = (n - 1) / (2.0 * n) * (d[n] + d[n - 1])
    return lhs[1:]


def check_edge_inequalities(n: int, beta: float, schedule: WeightSchedule) -> list[EdgeCheck]:
    """Evaluate all n contraction inequalities; returns per-level results."""
    lhs = edge_lhs(n, beta, schedule.deltas)
    rhs = schedule.deltas * math.exp(-schedule.alpha)
    return [EdgeCheck(k=k, lhs=float(lhs[k - 1]), rhs=float(rhs[k - 1])) for k in range(1, n + 1)]


def path_coupling_bound(diameter: float, alpha: float, epsilon: float) -> float:
    """Path coupling mixing bound (ln(diameter) + ln(1/epsilon)) / alpha."""
    if diameter < 1 or alpha <= 0 or not 0 < epsilon < 1:
        raise InvalidParametersError("need diameter >= 1, alpha > 0, epsilon in (0,1)")
    return (math.log(diameter) + math.log(1.0 / epsilon)) / alpha


def _canonical_pair(n: int, k: int) -> tuple[np.ndarray, np.ndarray, int]:
    # x has k-1 ones, y has k ones, differing at the last player
    x = np.zeros(n, dtype=np.int64)
    x[: k - 1] = 1
    y = x.copy()
    j = n - 1
    y[j] = 1
    return x, y, j


def _weighted_pair_distance(deltas: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """Weighted path distance between profiles differing at <= 2 players.

    An edge between profiles with m and m+1 ones sits at level m+1 and costs
    deltas[m].  For two-coordinate differences both flip orders are
    two-edge paths; the cheaper one is the graph distance (any detour uses
    at least four edges of weight >= 1 while staying no cheaper per level).
    """
    diff = np.flatnonzero(u != v)
    if len(diff) == 0:
        return 0.0
    if len(diff) == 1:
        return float(deltas[max(int(u.sum()), int(v.sum())) - 1])
    if len(diff) != 2:
        raise InvalidParametersError("pair differs at more than two players")
    best = math.inf
    for first in diff:
        w = u.copy()
        w[first] = v[first]
        cost = (deltas[max(int(u.sum()), int(w.sum())) - 1]
                + deltas[max(int(w.sum()), int(v.sum())) - 1])
        best = min(best, cost)
    return float(best)


def coupled_expected_distance(n: int, beta: float, deltas: np.ndarray, k: int) -> float:
    """One-step expected path distance for a canonical level-k edge,
    computed through the executable coupling rather than the algebra.
    """
    game = make_or(n)
    x, y, j = _canonical_pair(n, k)
    expected = 0.0
    for i in range(n):
        if i == j:
            continue  # updating the differing player coalesces the edge
        ju = joint_update(game, x, y, i, beta)
        for prob, (sx, sy) in zip(ju.as_array(), ((0, 0), (1, 1), (0, 1), (1, 0))):
            if prob == 0.0:
                continue
            u = x.copy()
            v = y.copy()
            u[i], v[i] = sx, sy
            expected += prob * _weighted_pair_distance(deltas, u, v)
    return expected / n


def verify_or_contraction(n: int, beta: float, schedule: WeightSchedule,
                          atol: float = 1e-10) -> dict[int, float]:
    """Tie the contraction algebra to the executable coupling.

    For each level k, recomputes the one-step expected distance from the
    coupling on a canonical adjacent pair and returns the absolute deviation
    from the algebraic left side.  All deviations should be < atol.
    """
    lhs = edge_lhs(n, beta, schedule.deltas)
    out = {}
    for k in range(1, n + 1):
        e = coupled_expected_distance(n, beta, schedule.deltas, k)
        out[k] = abs(e - lhs[k - 1])
    return out
