"""Closed-form stationary and mixing quantities for the concrete games.

These are the analytic counterparts of the exact computations elsewhere in
the package; tests and the CLI compare the two routes.
"""

from __future__ import annotations

import math

import numpy as np

from .dynamics import check_beta


def ck_expected_welfare(beta: float) -> float:
    """-(6 + 39 e^{-4b} + 63 e^{-6b}) / (1 + 3 e^{-4b} + 4 e^{-6b})."""
    beta = check_beta(beta)
    e4, e6 = math.exp(-4 * beta), math.exp(-6 * beta)
    return -(6 + 39 * e4 + 63 * e6) / (1 + 3 * e4 + 4 * e6)


def coordination_expected_welfare(a: float, b: float, c: float, d: float, beta: float) -> float:
    """2 (a + b e^{-(D-d)b} + (c+d) e^{-Db}) / (1 + e^{-(D-d)b} + 2 e^{-Db})
    with D = a - d and d = b - c."""
    beta = check_beta(beta)
    big, small = a - d, b - c
    e_gap = math.exp(-(big - small) * beta)
    e_big = math.exp(-big * beta)
    return 2.0 * (a + b * e_gap + (c + d) * e_big) / (1.0 + e_gap + 2.0 * e_big)


def coordination_welfare_beta_threshold(a: float, b: float, c: float, d: float) -> float:
    """Smallest beta past which E[W] is at least the worst-equilibrium welfare
    (finite only when a != b)."""
    big, small = a - d, b - c
    if a > b:
        return max(0.0, math.log((2 * b - c - d) / (a - b)) / big)
    if b > a:
        return max(0.0, math.log((2 * a - c - d) / (b - a)) / small)
    return math.inf


def coordination_p_q(a: float, b: float, c: float, d: float, beta: float) -> tuple[float, float]:
    """p = 1/(1+e^{Db}), q = 1/(1+e^{db}): the against-the-neighbor update
    probabilities at the two equilibria."""
    beta = check_beta(beta)
    return 1.0 / (1.0 + math.exp((a - d) * beta)), 1.0 / (1.0 + math.exp((b - c) * beta))


def coordination_lambda_star(a: float, b: float, c: float, d: float, beta: float) -> float:
    """Second eigenvalue of the coordination chain: ((1-p) + (1-q))/2."""
    p, q = coordination_p_q(a, b, c, d, beta)
    return ((1.0 - p) + (1.0 - q)) / 2.0


def or_expected_welfare(n: int, beta: float) -> float:
    """-alpha n with alpha = (2^n - 1) e^{-b} / (1 + (2^n - 1) e^{-b})."""
    beta = check_beta(beta)
    m = (2.0**n - 1.0) * math.exp(-beta)
    return -n * m / (1.0 + m)


def or_stationary_zero(n: int, beta: float) -> float:
    """pi(all-zeros) = 1 / (1 + (2^n - 1) e^{-b})."""
    beta = check_beta(beta)
    return 1.0 / (1.0 + (2.0**n - 1.0) * math.exp(-beta))


def or_bottleneck_zero(beta: float) -> float:
    """Phi({all-zeros}) = 1/(1 + e^b); the set is admissible while
    pi(0) <= 1/2, i.e. beta <= ln(2^n - 1)."""
    beta = check_beta(beta)
    return 1.0 / (1.0 + math.exp(beta))


def or_bottleneck_rest(n: int, beta: float) -> float:
    """Phi(everything but all-zeros) = 1/((2^n - 1)(1 + e^{-b})); admissible
    while beta >= ln(2^n - 1)."""
    beta = check_beta(beta)
    return 1.0 / ((2.0**n - 1.0) * (1.0 + math.exp(-beta)))


def xor_expected_welfare(n: int, beta: float) -> float:
    """-n / (1 + e^b)."""
    beta = check_beta(beta)
    return -n / (1.0 + math.exp(beta))


def xor_bottleneck_zero(beta: float) -> float:
    """Phi({all-zeros}) = 1/(1 + e^b) for the XOR chain."""
    beta = check_beta(beta)
    return 1.0 / (1.0 + math.exp(beta))


def matching_pennies_matrix(beta: float) -> np.ndarray:
    """The 4x4 Matching Pennies kernel with b = 1/(1+e^{-2 beta}).

    States follow the package's profile indexing (player 0 least
    significant): HH, TH, HT, TT.
    """
    beta = check_beta(beta)
    b = 1.0 / (1.0 + math.exp(-2 * beta))
    return np.array([
        [0.5, (1 - b) / 2, b / 2, 0.0],
        [b / 2, 0.5, 0.0, (1 - b) / 2],
        [(1 - b) / 2, 0.0, 0.5, b / 2],
        [0.0, b / 2, (1 - b) / 2, 0.5],
    ])


def stairs_partition_function(n: int, beta: float) -> float:
    """Z = (1 + e^b)^n for the stairs game."""
    beta = check_beta(beta)
    return (1.0 + math.exp(beta)) ** n


def xor_partition_function(n: int, beta: float) -> float:
    """Z = 2^{n-1} (1 + e^{-b}) for the XOR game (potential scale)."""
    beta = check_beta(beta)
    return 2.0 ** (n - 1) * (1.0 + math.exp(-beta))
