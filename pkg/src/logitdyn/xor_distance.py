"""Exact analysis of the coupled XOR chains through their Hamming distance.

For the XOR game the coupled pair process lumps exactly to a birth-death
chain on distances 0..n:

  even d = 2l > 0:   -> d-1 w.p. (2l/n) * 2/(1+e^b), stay otherwise;
  odd  d = 2l-1:     -> d-2... precisely -> d-1 w.p. (2l-1)/n,
                     stay w.p. ((n-2l+1)/n) * 2/(1+e^b),
                     -> d+1 with the remaining probability;
  d = 0 absorbing.

The closed forms for the expected level-descent times are

  nu_l = (n/(2l-1)) (1 + ((n-2l+1)/(2l)) (e^b - 1)/2)        (from 2l-1 to 2l-2)
  mu_l = nu_l + (n/(2l)) (1+e^b)/2                            (from 2l   to 2l-2)

and the expected coalescence time from any start is at most
1 + sum_l mu_l <= (n^2/2)(n (e^b - 1)/2 + 2) + 1.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParametersError, NumericalError
from .coupling import joint_update
from .dynamics import check_beta
from .games import make_xor


def distance_step_distribution(n: int, beta: float, d: int) -> np.ndarray:
    """One-step law of the coupled distance, returned as [down, stay, up]."""
    beta = check_beta(beta)
    if not 0 <= d <= n:
        raise InvalidParametersError(f"distance {d} out of range [0, {n}]")
    if d == 0:
        return np.array([0.0, 1.0, 0.0])
    s = 2.0 / (1.0 + math.exp(beta))
    if d % 2 == 0:
        down = (d / n) * s
        return np.array([down, 1.0 - down, 0.0])
    down = d / n
    stay = (n - d) / n * s
    up = (n - d) / n * (1.0 - s)
    return np.array([down, stay, up])


def distance_transition_matrix(n: int, beta: float) -> np.ndarray:
    """The (n+1)-state lumped chain over distances 0..n."""
    T = np.zeros((n + 1, n + 1))
    for d in range(n + 1):
        down, stay, up = distance_step_distribution(n, beta, d)
        if d > 0:
            T[d, d - 1] = down
        T[d, d] += stay
        if up:
            T[d, d + 1] = up
    return T


def nu_closed_form(n: int, beta: float, ell: int) -> float:
    """Expected time from distance 2l-1 down to 2l-2."""
    if not 1 <= 2 * ell - 1 <= n:
        raise InvalidParametersError(f"nu_l needs 1 <= 2l-1 <= n, got l={ell}, n={n}")
    beta = check_beta(beta)
    return (n / (2 * ell - 1)) * (1.0 + (n - 2 * ell + 1) / (2 * ell) * (math.exp(beta) - 1.0) / 2.0)


def mu_closed_form(n: int, beta: float, ell: int) -> float:
    """Expected time from distance 2l down to 2l-2."""
    if not 1 <= 2 * ell <= n:
        raise InvalidParametersError(f"mu_l needs 1 <= 2l <= n, got l={ell}, n={n}")
    return nu_closed_form(n, beta, ell) + (n / (2 * ell)) * (1.0 + math.exp(beta)) / 2.0


def distance_hitting_times(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Expected first-passage times to each even target level, solved exactly.

    Returns (mus, nus) with mus[l-1] the expected time from distance 2l to
    2l-2 and nus[l-1] from 2l-1 to 2l-2, for l = 1..floor(n/2) (nus also
    covers a trailing odd top level when n is odd).
    """
    T = distance_transition_matrix(n, beta)
    n_mu = n // 2
    n_nu = (n + 1) // 2
    mus = np.full(n_mu, np.nan)
    nus = np.full(n_nu, np.nan)
    for ell in range(1, n_nu + 1):
        target = 2 * ell - 2
        idx = [s for s in range(target + 1, n + 1)]
        A = np.eye(len(idx)) - T[np.ix_(idx, idx)]
        try:
            h = np.linalg.solve(A, np.ones(len(idx)))
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"hitting-time system singular at n={n}, beta={beta}") from exc
        by_state = dict(zip(idx, h))
        nus[ell - 1] = by_state[2 * ell - 1]
        if ell <= n_mu:
            mus[ell - 1] = by_state[2 * ell]
    return mus, nus


def expected_coalescence_bound(n: int, beta: float) -> tuple[float, float]:
    """(exact level sum, printed envelope) bounding E[coalescence time].

    The exact bound is 1 + sum over even levels of mu_l; the envelope is
    (n^2/2)(n (e^b - 1)/2 + 2) + 1.
    """
    beta = check_beta(beta)
    exact = 1.0 + sum(mu_closed_form(n, beta, ell) for ell in range(1, n // 2 + 1))
    envelope = (n**2 / 2.0) * (n * (math.exp(beta) - 1.0) / 2.0 + 2.0) + 1.0
    return exact, envelope


def _canonical_pair_at_distance(n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.zeros(n, dtype=np.int64)
    y = np.zeros(n, dtype=np.int64)
    y[:d] = 1
    return x, y


def coupled_distance_law(game, x: np.ndarray, y: np.ndarray, beta: float) -> np.ndarray:
    """One-step law of Hamming(X1, Y1) - Hamming(x, y), as [down, stay, up],
    computed from the coupling's joint updates."""
    n = game.n_players
    out = np.zeros(3)
    d = int(np.sum(x != y))
    for i in range(n):
        ju = joint_update(game, x, y, i, beta)
        same = ju.p00 + ju.p11
        if x[i] != y[i]:
            out[0] += same / n          # coordinate i becomes matched
            out[1] += ju.mismatch / n   # stays mismatched
        else:
            out[1] += same / n
            out[2] += ju.mismatch / n   # new mismatch at i
    if d == 0:
        return np.array([0.0, 1.0, 0.0])
    return out


def verify_xor_coupling_law(n: int, beta: float, atol: float = 1e-12) -> bool:
    """Check the lumped law on one canonical pair per distance d = 0..n."""
    game = make_xor(n)
    for d in range(n + 1):
        x, y = _canonical_pair_at_distance(n, d)
        law = coupled_distance_law(game, x, y, beta)
        if np.abs(law - distance_step_distribution(n, beta, d)).max() > atol:
            return False
    return True


def xor_lumping_deviation(n: int, beta: float) -> float:
    """Exhaustive lumpability check over all 4^n profile pairs (vectorized).

    Recomputes each pair's one-step distance law directly from the coupling
    probabilities (via the parity structure of the XOR game) and returns the
    largest absolute deviation from the lumped law for its distance.
    """
    beta = check_beta(beta)
    if n > 12:
        raise InvalidParametersError("exhaustive check is meant for n <= 12")
    size = 1 << n
    ks = np.arange(size, dtype=np.uint32)
    bits = ((ks[:, None] >> np.arange(n)) & 1).astype(np.int8)  # (size, n)
    parity = bits.sum(axis=1) % 2                                # (size,)
    s_hi = 1.0 / (1.0 + math.exp(-beta))   # sigma(0) when 0 is the better reply
    s_lo = 1.0 / (1.0 + math.exp(beta))

    kx = np.repeat(ks, size)
    ky = np.tile(ks, size)
    dist = bits[kx] != bits[ky]            # (pairs, n)
    d_pair = dist.sum(axis=1)
    law = np.zeros((size * size, 3))
    for i in range(n):
        # sigma_i(0 | x) depends only on parity(x) xor x_i: 0 means playing 0
        # keeps even parity (utility 0), so 0 is preferred.
        bx = parity[kx] ^ bits[kx, i]
        by = parity[ky] ^ bits[ky, i]
        s0x = np.where(bx == 0, s_hi, s_lo)
        s0y = np.where(by == 0, s_hi, s_lo)
        same = np.minimum(s0x, s0y) + np.minimum(1.0 - s0x, 1.0 - s0y)
        mism = 1.0 - same
        was_diff = dist[:, i]
        law[:, 0] += np.where(was_diff, same, 0.0) / n
        law[:, 1] += np.where(was_diff, mism, same) / n
        law[:, 2] += np.where(was_diff, 0.0, mism) / n
    expected = np.array([distance_step_distribution(n, beta, d) for d in range(n + 1)])
    return float(np.abs(law - expected[d_pair]).max())
