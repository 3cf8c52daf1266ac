"""Total-variation mixing analysis: d(t), exact mixing times, spectral and
bottleneck bounds, stationary expected welfare.

Exact mixing times are found by repeated squaring of the transition matrix
plus a bitwise search over t, so chains whose mixing time is astronomically
large (e.g. coordination games at large beta) still cost only O(log t_mix)
dense matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    HorizonError,
    InvalidParametersError,
    InvalidSetError,
    ReversibilityError,
)
from .dynamics import detailed_balance_check
from .games import GameSpec, ProfileSpace, social_welfare


def tv_distance(mu: np.ndarray, nu: np.ndarray) -> float:
    """Total variation distance (1/2) sum |mu - nu|."""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if mu.shape != nu.shape:
        raise InvalidParametersError("distributions have different sizes")
    return float(0.5 * np.abs(mu - nu).sum())


def _worst_tv(Pt: np.ndarray, pi: np.ndarray) -> float:
    # max over starting states of || P^t(x, .) - pi ||_TV
    return float(0.5 * np.abs(Pt - pi[None, :]).sum(axis=1).max())


def d_of_t(P: np.ndarray, pi: np.ndarray, t: int) -> float:
    """Worst-start total variation distance to pi after t steps."""
    if t < 0:
        raise InvalidParametersError("t must be >= 0")
    if t == 0:
        return float(1.0 - pi.min())
    Pt = _matrix_power(P, t)
    return _worst_tv(Pt, pi)


def _matrix_power(P: np.ndarray, t: int) -> np.ndarray:
    result = None
    sq = P
    while t:
        if t & 1:
            result = sq if result is None else result @ sq
        t >>= 1
        if t:
            sq = sq @ sq
    return result


@dataclass
class MixingReport:
    """Exact mixing time plus the d values probed along the way.

    ``ts``/``ds`` are aligned arrays of probed times and their d(t) values
    (sorted by t; dense 0..t_mix for short runs, sparse probes for long
    runs).  The defining bracket d(t_mix) <= eps < d(t_mix - 1) is always
    included.
    """

    epsilon: float
    t_mix: int
    ts: np.ndarray = field(repr=False)
    ds: np.ndarray = field(repr=False)

    @property
    def d_curve(self) -> np.ndarray:
        return self.ds

    def d_at(self, t: int) -> float:
        pos = np.searchsorted(self.ts, t)
        if pos == len(self.ts) or self.ts[pos] != t:
            raise KeyError(f"d({t}) was not probed")
        return float(self.ds[pos])


def _dense_limit(size: int) -> int:
    # Stepwise iteration gives a dense d curve but costs one matrix product
    # per step, so it is only worthwhile for small chains.
    return int(min(512, max(16, 2**15 // max(size, 1))))


def mixing_time_exact(
    P: np.ndarray,
    pi: np.ndarray,
    epsilon: float = 0.25,
    horizon: int = 10**7,
) -> MixingReport:
    """Smallest t with d(t) <= epsilon, computed exactly.

    Small mixing times are found by stepping (giving a dense d curve); larger
    ones by repeated squaring and a bitwise descent, probing O(log t_mix)
    matrix powers.  Raises HorizonError (carrying the last d value) if t_mix
    exceeds ``horizon``.
    """
    if not 0.0 < epsilon < 0.5:
        raise InvalidParametersError("epsilon must be in (0, 1/2)")
    probes: dict[int, float] = {0: float(1.0 - pi.min())}
    dense_limit = _dense_limit(P.shape[0])

    # Dense phase.
    Pt = P
    for t in range(1, min(dense_limit, horizon) + 1):
        d = _worst_tv(Pt, pi)
        probes[t] = d
        if d <= epsilon:
            return _report(epsilon, t, probes)
        Pt = Pt @ P

    # Doubling phase: find the first power of two past the dense limit with
    # d <= epsilon.  pows[j] = P^(2^j).
    pows = [P]
    t = 1
    while t < dense_limit:
        pows.append(pows[-1] @ pows[-1])
        t *= 2
    d = _worst_tv(pows[-1], pi)
    probes[t] = d
    while d > epsilon:
        if t > horizon:
            raise HorizonError(
                f"d(t) still {d:.6g} > {epsilon} at t = {t} (horizon {horizon})",
                last_value=d,
            )
        pows.append(pows[-1] @ pows[-1])
        t *= 2
        d = _worst_tv(pows[-1], pi)
        probes[t] = d

    # Bitwise descent: keep the largest t with d(t) > epsilon.
    m = len(pows) - 1
    A = pows[m - 1]
    t_fail = 2 ** (m - 1)
    for j in range(m - 2, -1, -1):
        B = A @ pows[j]
        d = _worst_tv(B, pi)
        probes[t_fail + 2**j] = d
        if d > epsilon:
            A = B
            t_fail += 2**j
    t_mix = t_fail + 1
    if t_mix not in probes:
        probes[t_mix] = _worst_tv(A @ P, pi)
    if t_mix > horizon:
        raise HorizonError(
            f"t_mix = {t_mix} exceeds horizon {horizon}", last_value=probes[t_mix]
        )
    return _report(epsilon, t_mix, probes)


def _report(epsilon: float, t_mix: int, probes: dict[int, float]) -> MixingReport:
    ts = np.array(sorted(probes))
    ds = np.array([probes[t] for t in ts])
    return MixingReport(epsilon=epsilon, t_mix=t_mix, ts=ts, ds=ds)


def expected_social_welfare(game: GameSpec, pi: np.ndarray, cap: int = 2**20) -> float:
    """Stationary expected social welfare sum_x W(x) pi(x)."""
    space = ProfileSpace(game, cap=cap)
    if pi.shape != (space.size,):
        raise InvalidParametersError("pi has wrong size for this game")
    return float(sum(social_welfare(game, x) * pi[k] for k, x in enumerate(space)))


@dataclass
class SpectralBounds:
    """Relaxation-time sandwich for a reversible chain at a given epsilon."""

    lambda_star: float
    t_rel: float
    lower: float
    upper: float


def relaxation_bounds(P: np.ndarray, pi: np.ndarray, epsilon: float = 0.25) -> SpectralBounds:
    """lambda*, t_rel = 1/(1 - lambda*), and the mixing-time sandwich

        (t_rel - 1) ln(1/(2 eps))  <=  t_mix(eps)  <=  t_rel ln(1/(eps pi_min)).

    Requires a reversible chain (detailed balance with the given pi); the
    spectrum is taken from the symmetrized matrix D^{1/2} P D^{-1/2}.
    """
    if not 0.0 < epsilon < 0.5:
        raise InvalidParametersError("epsilon must be in (0, 1/2)")
    if not detailed_balance_check(P, pi, atol=1e-10):
        raise ReversibilityError("chain is not reversible w.r.t. pi")
    s = np.sqrt(pi)
    S = (s[:, None] * P) / s[None, :]
    eigs = np.linalg.eigvalsh((S + S.T) / 2.0)
    idx = int(np.argmin(np.abs(eigs - 1.0)))
    rest = np.delete(eigs, idx)
    lambda_star = float(np.abs(rest).max()) if rest.size else 0.0
    lambda_star = min(max(lambda_star, 0.0), 1.0 - 1e-300)
    t_rel = 1.0 / (1.0 - lambda_star)
    lower = (t_rel - 1.0) * math.log(1.0 / (2.0 * epsilon))
    upper = t_rel * math.log(1.0 / (epsilon * pi.min()))
    return SpectralBounds(lambda_star=lambda_star, t_rel=t_rel, lower=lower, upper=upper)


def bottleneck_ratio(P: np.ndarray, pi: np.ndarray, S) -> float:
    """Phi(S) = Q(S, S-bar) / pi(S), defined for pi(S) <= 1/2.

    ``S`` is an iterable of state indices (or a boolean mask).
    """
    mask = np.zeros(len(pi), dtype=bool)
    mask[np.asarray(list(S) if not isinstance(S, np.ndarray) else S)] = True
    pi_S = float(pi[mask].sum())
    if pi_S <= 0.0:
        raise InvalidSetError("S has zero stationary mass")
    if pi_S > 0.5 + 1e-12:
        raise InvalidSetError(f"pi(S) = {pi_S:.6g} > 1/2")
    flow = float((pi[mask, None] * P[mask][:, ~mask]).sum())
    return flow / pi_S


def bottleneck_lower_bound(P: np.ndarray, pi: np.ndarray, S, epsilon: float = 0.25) -> float:
    """Mixing-time lower bound (1 - 2 eps) / (2 Phi(S))."""
    if not 0.0 < epsilon < 0.5:
        raise InvalidParametersError("epsilon must be in (0, 1/2)")
    return (1.0 - 2.0 * epsilon) / (2.0 * bottleneck_ratio(P, pi, S))
