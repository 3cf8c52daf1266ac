import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logitdyn import (
    GameSpec,
    MissingPotentialError,
    ProfileSpace,
    detailed_balance_check,
    gibbs_stationary,
    make_ck,
    make_coordination,
    make_matching_pennies,
    make_or,
    make_stairs,
    make_xor,
    simulate_trajectory,
    stationary_solve,
    theory,
    transition_matrix,
    update_distribution,
)

BETAS = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]


class TestUpdateDistribution:
    @pytest.mark.parametrize("beta", BETAS)
    def test_ck_update_probabilities(self, beta):
        ck = make_ck()
        # the chance of playing 0 depends only on how many others play 1
        for others, expected in ((0, 1 / (1 + math.exp(-4 * beta))),
                                 (1, 1 / (1 + math.exp(-2 * beta))),
                                 (2, 0.5)):
            for i in range(3):
                for prof in itertools.product((0, 1), repeat=3):
                    x = np.array(prof)
                    if sum(prof) - prof[i] != others:
                        continue
                    sigma = update_distribution(ck, x, i, beta)
                    assert sigma[0] == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("beta", BETAS)
    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_or_update_from_zero(self, n, beta):
        game = make_or(n)
        sigma = update_distribution(game, np.zeros(n, dtype=int), 0, beta)
        assert sigma[1] == pytest.approx(1 / (1 + math.exp(beta)), abs=1e-14)

    def test_beta_zero_uniform(self):
        for game in (make_ck(), make_xor(4), make_matching_pennies()):
            space = ProfileSpace(game)
            for x in space:
                for i in range(game.n_players):
                    sigma = update_distribution(game, x, i, 0.0)
                    assert np.allclose(sigma, 1 / len(sigma), atol=1e-15)

    def test_stairs_ignores_others(self):
        game = make_stairs(5)
        beta = 1.3
        for prof in itertools.product((0, 1), repeat=5):
            sigma = update_distribution(game, np.array(prof), 2, beta)
            assert sigma[1] == pytest.approx(1 / (1 + math.exp(-beta)), abs=1e-14)

    def test_large_beta_is_stable(self):
        sigma = update_distribution(make_or(4), np.zeros(4, dtype=int), 0, 700.0)
        assert np.isfinite(sigma).all()
        assert sigma[0] == pytest.approx(1.0)

    @given(beta=st.floats(0, 30), shift=st.floats(-8, 8))
    @settings(max_examples=40, deadline=None)
    def test_translation_invariance(self, beta, shift):
        base = make_or(3)
        shifted = GameSpec(3, (2, 2, 2),
                           lambda i, x: base.utility(i, x) + shift, name="shifted")
        x = np.array([0, 1, 0])
        for i in range(3):
            assert np.abs(update_distribution(base, x, i, beta)
                          - update_distribution(shifted, x, i, beta)).max() < 1e-12

    @given(beta=st.floats(0, 10), scale=st.floats(0.1, 5))
    @settings(max_examples=40, deadline=None)
    def test_rescaling_shifts_beta(self, beta, scale):
        base = make_ck()
        scaled = GameSpec(3, (2, 2, 2),
                          lambda i, x: scale * base.utility(i, x), name="scaled")
        x = np.array([1, 0, 1])
        for i in range(3):
            assert np.abs(update_distribution(scaled, x, i, beta)
                          - update_distribution(base, x, i, scale * beta)).max() < 1e-12


class TestTransitionMatrix:
    @pytest.mark.parametrize("beta", BETAS)
    def test_matching_pennies_matrix(self, beta):
        P = transition_matrix(make_matching_pennies(), beta)
        assert np.abs(P - theory.matching_pennies_matrix(beta)).max() < 1e-14

    @pytest.mark.parametrize("beta", BETAS)
    def test_coordination_matrix(self, beta):
        a, b, c, d = 3, 2, 0, 0
        p, q = theory.coordination_p_q(a, b, c, d, beta)
        expected = np.array([
            [1 - p, p / 2, p / 2, 0],
            [(1 - p) / 2, (p + q) / 2, 0, (1 - q) / 2],
            [(1 - p) / 2, 0, (p + q) / 2, (1 - q) / 2],
            [0, q / 2, q / 2, 1 - q],
        ])
        P = transition_matrix(make_coordination(a, b, c, d), beta)
        assert np.abs(P - expected).max() < 1e-14

    def test_beta_zero_offdiagonals(self):
        n = 4
        P = transition_matrix(make_xor(n), 0.0)
        space = ProfileSpace(make_xor(n))
        for k in range(space.size):
            x = space.decode(k)
            for i in range(n):
                assert P[k, k ^ (1 << i)] == pytest.approx(1 / (2 * n))

    def test_rows_and_sparsity(self):
        game = make_or(4)
        space = ProfileSpace(game)
        for beta in (0.0, 1.0, 6.0):
            P = transition_matrix(game, beta)
            assert np.abs(P.sum(axis=1) - 1).max() < 1e-12
            for k in range(space.size):
                for m in range(space.size):
                    if bin(k ^ m).count("1") >= 2:
                        assert P[k, m] == 0.0


class TestStationary:
    @pytest.mark.parametrize("n,beta", [(3, 0.5), (5, 2.0), (4, 0.0)])
    def test_stairs_partition_function(self, n, beta):
        pi = gibbs_stationary(make_stairs(n), beta)
        assert pi[0] == pytest.approx(1 / theory.stairs_partition_function(n, beta), rel=1e-12)

    @pytest.mark.parametrize("n,beta", [(4, 1.0), (6, 3.0), (8, 0.2)])
    def test_or_stationary_zero(self, n, beta):
        pi = gibbs_stationary(make_or(n), beta)
        assert pi[0] == pytest.approx(theory.or_stationary_zero(n, beta), rel=1e-12)

    @pytest.mark.parametrize("n,beta", [(4, 1.0), (7, 2.5)])
    def test_xor_partition_function(self, n, beta):
        pi = gibbs_stationary(make_xor(n), beta)
        assert pi[0] == pytest.approx(1 / theory.xor_partition_function(n, beta), rel=1e-12)

    @pytest.mark.parametrize("beta", BETAS)
    def test_matching_pennies_uniform(self, beta):
        P = transition_matrix(make_matching_pennies(), beta)
        pi = stationary_solve(P)
        assert np.abs(pi - 0.25).max() < 1e-12

    def test_coordination_explicit_point(self):
        pi = gibbs_stationary(make_coordination(3, 2, 0, 0), 1.0)
        Z = math.exp(3) + math.exp(2) + 2
        assert pi[0] == pytest.approx(math.exp(3) / Z, rel=1e-14)

    @pytest.mark.parametrize(
        "game", [make_ck(), make_or(5), make_xor(5), make_stairs(4),
                 make_coordination(3, 2, 0, 0)],
        ids=lambda g: g.name,
    )
    @pytest.mark.parametrize("beta", [0.0, 0.7, 3.0])
    def test_solve_matches_gibbs(self, game, beta):
        P = transition_matrix(game, beta)
        assert np.abs(stationary_solve(P) - gibbs_stationary(game, beta)).max() < 1e-10

    def test_gibbs_requires_potential(self):
        with pytest.raises(MissingPotentialError):
            gibbs_stationary(make_matching_pennies(), 1.0)


class TestDetailedBalance:
    @pytest.mark.parametrize("beta", [0.0, 0.5, 2.0, 8.0])
    def test_or_reversible(self, beta):
        game = make_or(4)
        P = transition_matrix(game, beta)
        assert detailed_balance_check(P, gibbs_stationary(game, beta))

    def test_matching_pennies_not_reversible(self):
        # brute force the flow asymmetry at beta = 1
        P = transition_matrix(make_matching_pennies(), 1.0)
        pi = np.full(4, 0.25)
        flows = pi[:, None] * P
        assert np.abs(flows - flows.T).max() > 1e-3
        assert not detailed_balance_check(P, pi)

    def test_beta_zero_reversible(self):
        P = transition_matrix(make_matching_pennies(), 0.0)
        assert detailed_balance_check(P, np.full(4, 0.25))


class TestGlauberConsistency:
    @pytest.mark.parametrize("beta", [0.0, 1.0, 4.0])
    def test_update_is_conditional_gibbs(self, beta):
        game = make_ck()
        space = ProfileSpace(game)
        pi = gibbs_stationary(game, beta)
        for k in range(space.size):
            x = space.decode(k)
            for i in range(3):
                sigma = update_distribution(game, x, i, beta)
                y = x.copy()
                w = np.empty(2)
                for s in (0, 1):
                    y[i] = s
                    w[s] = pi[space.encode(y)]
                assert np.abs(sigma - w / w.sum()).max() < 1e-12


class TestSimulation:
    def test_zero_steps(self):
        x0 = np.array([1, 0, 1])
        traj = simulate_trajectory(make_ck(), x0, 1.0, 0, seed=5)
        assert traj.shape == (1, 3)
        assert np.array_equal(traj[0], x0)

    def test_seed_determinism(self):
        game = make_xor(6)
        a = simulate_trajectory(game, np.zeros(6, dtype=int), 0.8, 5000, seed=11)
        b = simulate_trajectory(game, np.zeros(6, dtype=int), 0.8, 5000, seed=11)
        assert np.array_equal(a, b)
        c = simulate_trajectory(game, np.zeros(6, dtype=int), 0.8, 5000, seed=12)
        assert not np.array_equal(a, c)

    def test_or_occupancy_matches_stationary(self):
        # long-run fraction of time at the zero profile vs pi(0), with batch
        # means absorbing the (large) autocorrelation at beta = 10
        n, beta, steps = 10, 10.0, 10**6
        traj = simulate_trajectory(make_or(n), np.zeros(n, dtype=int), beta, steps, seed=2026)
        at_zero = (~traj[1:].any(axis=1)).astype(float)
        kept = at_zero[steps // 10:]
        blocks = kept[: len(kept) // 50 * 50].reshape(50, -1).mean(axis=1)
        se = blocks.std(ddof=1) / math.sqrt(len(blocks))
        assert abs(kept.mean() - theory.or_stationary_zero(n, beta)) <= 3 * se
