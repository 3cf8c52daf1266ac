"""Named invariant checks over configurable grids.

Each check returns a :class:`CheckResult` whose ``margin`` measures how far
inside the passing region the worst case landed (negative means failed).
``run_all`` drives the whole suite; the CLI's ``verify`` subcommand prints
one line per check and exits nonzero if any check fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import theory
from .analysis import (
    bottleneck_lower_bound,
    d_of_t,
    expected_social_welfare,
    mixing_time_exact,
    relaxation_bounds,
)
from .coupling import coalescence_time, coupling_product_matrix, joint_update
from .dynamics import (
    gibbs_stationary,
    stationary_solve,
    transition_matrix,
    update_distribution,
)
from .games import (
    GameSpec,
    ProfileSpace,
    make_anti_coordination,
    make_ck,
    make_coordination,
    make_matching_pennies,
    make_or,
    make_stairs,
    make_xor,
    pure_nash_equilibria,
)
from .or_weights import (
    WeightSchedule,
    check_edge_inequalities,
    delta_max_bound,
    deltas_from_gammas,
    gamma_sequence,
    path_coupling_bound,
    recursion_table,
    verify_or_contraction,
    weights_large_beta,
    weights_log_beta,
    weights_small_beta,
)
from .xor_distance import (
    distance_hitting_times,
    expected_coalescence_bound,
    mu_closed_form,
    nu_closed_form,
    verify_xor_coupling_law,
    xor_lumping_deviation,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status}  {self.name}  margin={self.margin:.6g}"
        if self.detail:
            out += f"  ({self.detail})"
        return out


@dataclass
class VerifyConfig:
    """Grid sizes for the suite; defaults run in about a minute."""

    beta_grid: tuple[float, ...] = (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
    nash_n_grid: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8, 9, 10)
    recursion_n_grid: tuple[int, ...] = (4, 8, 16, 32, 64)
    gamma_n_grid: tuple[int, ...] = (16, 32, 64)
    schedule_n_grid: tuple[int, ...] = (4, 8, 16, 32, 64)
    contraction_n_grid: tuple[int, ...] = (4, 6, 8)
    tmix_n_grid: tuple[int, ...] = (4, 5, 6)
    lump_n_grid: tuple[int, ...] = (4, 6, 8)
    hitting_n_grid: tuple[int, ...] = (4, 6, 9, 16, 33, 40)
    seed: int = 0
    inject_corrupt_schedule: bool = False


def _beta_grid_for(n: int, grid) -> list[float]:
    out = list(grid)
    for extra in (math.log(n), 2 * math.log(n)):
        if extra > 0 and extra not in out:
            out.append(extra)
    return sorted(out)


def _potential_deviation(game: GameSpec) -> float:
    space = ProfileSpace(game)
    worst = 0.0
    for x in space:
        phi_x = game.potential(x)
        for i in range(game.n_players):
            u_x = game.utility(i, x)
            y = x.copy()
            for s in range(game.strategy_counts[i]):
                if s == x[i]:
                    continue
                y[i] = s
                worst = max(worst, abs((u_x - game.utility(i, y)) - (phi_x - game.potential(y))))
            y[i] = x[i]
    return worst


def _standard_games() -> list[GameSpec]:
    return [
        make_ck(),
        make_coordination(3, 2, 0, 0),
        make_anti_coordination(0, 0, 2, 3),
        make_stairs(5),
        make_or(5),
        make_xor(5),
    ]


# ---------------------------------------------------------------------------
# game-core checks
# ---------------------------------------------------------------------------


def check_potentials(cfg: VerifyConfig) -> CheckResult:
    worst = max(_potential_deviation(g) for g in _standard_games())
    return CheckResult("games.exact-potentials", worst < 1e-12, 1e-12 - worst,
                       f"max deviation {worst:.3g}")


def check_nash_counts(cfg: VerifyConfig) -> CheckResult:
    bad = []
    for n in cfg.nash_n_grid:
        if len(pure_nash_equilibria(make_or(n))) != 2**n - n:
            bad.append(("or", n))
        if len(pure_nash_equilibria(make_xor(n))) != 2 ** (n - 1):
            bad.append(("xor", n))
    if len(pure_nash_equilibria(make_ck())) != 2:
        bad.append(("ck", 3))
    return CheckResult("games.nash-counts", not bad, -float(len(bad)) if bad else 1.0,
                       f"mismatches: {bad}" if bad else "")


def check_profile_roundtrip(cfg: VerifyConfig) -> CheckResult:
    game = GameSpec(3, (2, 3, 4), lambda i, x: 0.0, name="mixed")
    space = ProfileSpace(game)
    ok = all(space.encode(space.decode(k)) == k for k in range(space.size))
    return CheckResult("games.profile-roundtrip", ok, 1.0 if ok else -1.0)


# ---------------------------------------------------------------------------
# logit-kernel checks
# ---------------------------------------------------------------------------


def check_kernel_structure(cfg: VerifyConfig) -> CheckResult:
    worst_row, worst_sparse = 0.0, 0.0
    for game in _standard_games() + [make_matching_pennies()]:
        space = ProfileSpace(game)
        for beta in (0.0, 1.0, 5.0):
            P = transition_matrix(game, beta)
            worst_row = max(worst_row, float(np.abs(P.sum(axis=1) - 1).max()))
            for k in range(space.size):
                x = space.decode(k)
                for m in range(space.size):
                    if m == k:
                        continue
                    if int(np.sum(space.decode(m) != x)) >= 2:
                        worst_sparse = max(worst_sparse, abs(P[k, m]))
    worst = max(worst_row, worst_sparse)
    return CheckResult("kernel.rows-and-sparsity", worst < 1e-12, 1e-12 - worst,
                       f"row dev {worst_row:.3g}, far entries {worst_sparse:.3g}")


def check_translation_invariance(cfg: VerifyConfig) -> CheckResult:
    base = make_or(4)
    shifts = [1.7, -2.3, 0.4, 12.0]
    shifted = GameSpec(4, (2,) * 4, lambda i, x: base.utility(i, x) + shifts[i],
                       name="or-shifted")
    worst = 0.0
    space = ProfileSpace(base)
    for beta in cfg.beta_grid:
        for x in space:
            for i in range(4):
                worst = max(worst, float(np.abs(
                    update_distribution(base, x, i, beta)
                    - update_distribution(shifted, x, i, beta)).max()))
    return CheckResult("kernel.translation-invariance", worst < 1e-12, 1e-12 - worst)


def check_rescaling(cfg: VerifyConfig) -> CheckResult:
    base = make_ck()
    scale = 2.5
    scaled = GameSpec(3, (2,) * 3, lambda i, x: scale * base.utility(i, x), name="ck-scaled")
    worst = 0.0
    space = ProfileSpace(base)
    for beta in (0.0, 0.3, 0.7, 2.0):
        for x in space:
            for i in range(3):
                worst = max(worst, float(np.abs(
                    update_distribution(scaled, x, i, beta)
                    - update_distribution(base, x, i, scale * beta)).max()))
    return CheckResult("kernel.rescaling", worst < 1e-12, 1e-12 - worst)


def check_glauber_consistency(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for game in _standard_games():
        space = ProfileSpace(game)
        for beta in (0.0, 1.0, 3.0):
            pi = gibbs_stationary(game, beta)
            for k in range(space.size):
                x = space.decode(k)
                for i in range(game.n_players):
                    sigma = update_distribution(game, x, i, beta)
                    y = x.copy()
                    weights = np.empty(game.strategy_counts[i])
                    for s in range(game.strategy_counts[i]):
                        y[i] = s
                        weights[s] = pi[space.encode(y)]
                    worst = max(worst, float(np.abs(sigma - weights / weights.sum()).max()))
    return CheckResult("kernel.glauber-consistency", worst < 1e-12, 1e-12 - worst)


def check_gibbs_vs_solve(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for game in _standard_games():
        for beta in cfg.beta_grid:
            P = transition_matrix(game, beta)
            worst = max(worst, float(np.abs(
                stationary_solve(P) - gibbs_stationary(game, beta)).max()))
    return CheckResult("kernel.gibbs-vs-solve", worst < 1e-10, 1e-10 - worst)


# ---------------------------------------------------------------------------
# chain-analysis checks
# ---------------------------------------------------------------------------


def check_d_monotone(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for game, beta in ((make_ck(), 1.0), (make_matching_pennies(), 2.0), (make_or(4), 0.5)):
        P = transition_matrix(game, beta)
        pi = stationary_solve(P)
        ds = [d_of_t(P, pi, t) for t in range(25)]
        worst = min(worst, min(ds[t] - ds[t + 1] for t in range(len(ds) - 1)))
    return CheckResult("analysis.d-monotone", worst > -1e-12, worst + 1e-12)


def check_relaxation_sandwich(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for game in (make_ck(), make_or(5), make_xor(5), make_coordination(3, 2, 0, 0)):
        for beta in cfg.beta_grid:
            P = transition_matrix(game, beta)
            pi = gibbs_stationary(game, beta)
            sb = relaxation_bounds(P, pi)
            t_mix = mixing_time_exact(P, pi, horizon=10**16).t_mix
            worst = min(worst, t_mix - sb.lower, sb.upper - t_mix)
    return CheckResult("analysis.relaxation-sandwich", worst >= 0, worst)


def check_bottleneck_bounds(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for make in (make_or, make_xor):
        for n in (3, 4, 5, 6):
            game = make(n)
            for beta in _beta_grid_for(n, cfg.beta_grid):
                P = transition_matrix(game, beta)
                pi = gibbs_stationary(game, beta)
                t_mix = mixing_time_exact(P, pi, horizon=10**16).t_mix
                for S in ([0], list(range(1, 2**n))):
                    if pi[S].sum() <= 0.5:
                        worst = min(worst, t_mix - bottleneck_lower_bound(P, pi, S))
    return CheckResult("analysis.bottleneck-below-tmix", worst >= 0, worst)


def check_welfare_closed_forms(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for beta in cfg.beta_grid:
        exact = expected_social_welfare(make_ck(), gibbs_stationary(make_ck(), beta))
        worst = max(worst, abs(exact - theory.ck_expected_welfare(beta))
                    / max(abs(exact), 1e-300))
        for (a, b, c, d) in ((3, 2, 0, 0), (2, 1, 0, 0), (5, 2, 1, 0)):
            game = make_coordination(a, b, c, d)
            exact = expected_social_welfare(game, gibbs_stationary(game, beta))
            closed = theory.coordination_expected_welfare(a, b, c, d, beta)
            worst = max(worst, abs(exact - closed) / max(abs(closed), 1e-300))
        for n in (3, 6, 8):
            g = make_or(n)
            exact = expected_social_welfare(g, gibbs_stationary(g, beta))
            worst = max(worst, abs(exact - theory.or_expected_welfare(n, beta))
                        / max(abs(theory.or_expected_welfare(n, beta)), 1e-300))
            g = make_xor(n)
            exact = expected_social_welfare(g, gibbs_stationary(g, beta))
            worst = max(worst, abs(exact - theory.xor_expected_welfare(n, beta))
                        / max(abs(theory.xor_expected_welfare(n, beta)), 1e-300))
    return CheckResult("analysis.welfare-closed-forms", worst < 1e-10, 1e-10 - worst,
                       f"max rel err {worst:.3g}")


def check_coordination_welfare_threshold(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for (a, b, c, d) in ((3, 2, 0, 0), (5, 2, 1, 0), (2, 3, 1, 0)):
        threshold = theory.coordination_welfare_beta_threshold(a, b, c, d)
        sw_worst_nash = 2 * min(a, b)
        for beta in cfg.beta_grid:
            if beta >= threshold:
                ew = theory.coordination_expected_welfare(a, b, c, d, beta)
                worst = min(worst, ew - sw_worst_nash)
    return CheckResult("analysis.coordination-welfare-vs-nash", worst >= -1e-12,
                       worst + 1e-12)


# ---------------------------------------------------------------------------
# coupling checks
# ---------------------------------------------------------------------------


def check_joint_marginals(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for game in (make_ck(), make_or(4), make_xor(4)):
        space = ProfileSpace(game)
        for beta in (0.0, 1.0, 5.0):
            for kx in range(space.size):
                x = space.decode(kx)
                for ky in range(space.size):
                    y = space.decode(ky)
                    for i in range(game.n_players):
                        ju = joint_update(game, x, y, i, beta)
                        worst = max(
                            worst,
                            float(np.abs(ju.marginal_x() - update_distribution(game, x, i, beta)).max()),
                            float(np.abs(ju.marginal_y() - update_distribution(game, y, i, beta)).max()),
                            -min(ju.p00, ju.p11, ju.p01, ju.p10),
                        )
                        if ju.p01 > 1e-15 and ju.p10 > 1e-15:
                            worst = max(worst, min(ju.p01, ju.p10))
    return CheckResult("coupling.joint-marginals", worst < 1e-12, 1e-12 - worst)


def check_coalesced_absorbing(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for game in (make_ck(), make_or(3)):
        size = ProfileSpace(game).size
        for beta in (0.0, 1.0, 10.0):
            Q = coupling_product_matrix(game, beta)
            diag = [k * size + k for k in range(size)]
            off_mass = 1.0 - Q[np.ix_(diag, diag)].sum(axis=1)
            worst = max(worst, float(np.abs(off_mass).max()))
    return CheckResult("coupling.coalesced-absorbing", worst < 1e-12, 1e-12 - worst)


def check_product_marginalization(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for game in (make_ck(), make_or(3), make_xor(3)):
        size = ProfileSpace(game).size
        for beta in (0.0, 0.7, 3.0):
            Q = coupling_product_matrix(game, beta)
            P = transition_matrix(game, beta)
            for kx in range(size):
                for ky in range(size):
                    row = Q[kx * size + ky].reshape(size, size)
                    worst = max(worst,
                                float(np.abs(row.sum(axis=1) - P[kx]).max()),
                                float(np.abs(row.sum(axis=0) - P[ky]).max()))
    return CheckResult("coupling.product-marginalization", worst < 1e-12, 1e-12 - worst)


def check_ck_coalescence(cfg: VerifyConfig) -> CheckResult:
    game = make_ck()
    size = 8
    worst = math.inf
    grid = sorted(set(list(cfg.beta_grid) + [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0]))
    for beta in grid:
        Q = coupling_product_matrix(game, beta)
        Q3 = np.linalg.matrix_power(Q, 3)
        diag = [k * size + k for k in range(size)]
        worst = min(worst, float(Q3[:, diag].sum(axis=1).min()))
    return CheckResult("coupling.ck-three-step-coalescence", worst >= 1 / 36,
                       worst - 1 / 36, f"min prob {worst:.6g}")


def check_stairs_coalescence_scaling(cfg: VerifyConfig) -> CheckResult:
    # coupon-collector behaviour: mean tau from antipodal starts ~ n H_n
    rng = np.random.default_rng(cfg.seed)
    ratios = []
    for n in (4, 8, 16, 32, 64):
        game = make_stairs(n)
        x, y = np.zeros(n, dtype=int), np.ones(n, dtype=int)
        taus = [coalescence_time(game, x, y, 1.0, rng, horizon=200 * n) for _ in range(60)]
        ratios.append(np.mean(taus) / (n * math.log(n)))
    spread = max(ratios) / min(ratios)
    return CheckResult("coupling.stairs-nlogn-scaling", spread < 10.0, 10.0 - spread,
                       f"ratio spread {spread:.3g}")


# ---------------------------------------------------------------------------
# or-path-coupling checks
# ---------------------------------------------------------------------------


def check_recursion_invariants(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    bad = []
    for n in cfg.recursion_n_grid:
        for beta in (0.0, 0.1, 1.0, math.log(n), 2 * math.log(n), 10.0):
            table = recursion_table(n, beta)
            for k in range(2, n):
                # exact-arithmetic inequality whose true slack decays below
                # double precision at large k; margin is taken relative
                worst = min(worst, table.b[k - 1] / (k * table.b[k - 2]) - 1.0 + 1e-12)
            for k in range(1, n):
                if k <= 20:
                    if table.l[k - 1] != (n - k) * math.factorial(k - 1):
                        bad.append(("l", n, beta, k))
                    if table.r[k - 1] != math.factorial(k):
                        bad.append(("r", n, beta, k))
                if table.p[k - 1] > table.q[k - 1]:
                    bad.append(("p<=q", n, beta, k))
                if k <= n // 2 + 2 and table.q[k - 1] < 2.0**-k * float(n) ** k:
                    bad.append(("q-lb", n, beta, k))
    ok = worst >= 0 and not bad
    return CheckResult("or.recursion-invariants", ok, worst if not bad else -1.0,
                       f"violations: {bad[:4]}" if bad else f"min b_k/(k b_(k-1)) - 1 = {worst:.3g}")


def check_gamma_forms(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in cfg.recursion_n_grid:
        for beta in (0.0, 0.1, 1.0, math.log(n), 2 * math.log(n), 10.0):
            table = recursion_table(n, beta)
            direct = table.gammas_direct()
            split = table.gammas_split()
            rel = np.abs(split - direct) / np.maximum(np.abs(direct), 1e-300)
            worst = max(worst, float(rel.max()))
    return CheckResult("or.gamma-split-vs-direct", worst < 1e-9, 1e-9 - worst,
                       f"max rel dev {worst:.3g}")


def check_gamma_bounds(cfg: VerifyConfig) -> CheckResult:
    bad = []
    margin = math.inf
    for n in cfg.gamma_n_grid:
        for c in (1, 2):
            g = gamma_sequence(n, c * math.log(n))
            margin = min(margin, float(n - g.max()))
            if not np.all(g < n):
                bad.append(("g<n", n, c))
            tail = g[c + 2:]
            if tail.size:
                margin = min(margin, float(1.0 - tail.max()))
                if not np.all(tail < 1.0):
                    bad.append(("tail", n, c))
            cap = math.factorial(c + 1) * 2**c
            margin = min(margin, cap - float(g[c + 1]))
            if g[c + 1] > cap:
                bad.append(("g_c+2", n, c))
    return CheckResult("or.gamma-lemma-bounds", not bad, margin if not bad else -1.0,
                       f"violations {bad}" if bad else "")


def _schedule_slack(n: int, beta: float, schedule) -> float:
    return min(c.slack for c in check_edge_inequalities(n, beta, schedule))


def check_largebeta_inequalities(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for n in cfg.schedule_n_grid:
        sch = weights_large_beta(n)
        for beta in _beta_grid_for(n, cfg.beta_grid):
            worst = min(worst, _schedule_slack(n, beta, sch))
    return CheckResult("or.largebeta-inequalities", worst >= -1e-12, worst,
                       f"min slack {worst:.3g}")


def check_logbeta_inequalities(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for n in cfg.schedule_n_grid:
        for beta in _beta_grid_for(n, cfg.beta_grid):
            worst = min(worst, _schedule_slack(n, beta, weights_log_beta(n, beta)))
    return CheckResult("or.logbeta-inequalities", worst >= -1e-12, worst,
                       f"min slack {worst:.3g}")


def check_smallbeta_inequalities(cfg: VerifyConfig) -> CheckResult:
    # Claimed domain: eps = 0.2, n >= 8, beta < (1 - eps) ln n.  The k = 3
    # inequality is analytically false for every n with these weights (see
    # the project notes), so this check reports the honest failure.
    eps = 0.2
    worst = math.inf
    worst_at = None
    for n in [n for n in cfg.schedule_n_grid if n >= 8]:
        sch = weights_small_beta(n, eps)
        for beta in [b for b in _beta_grid_for(n, cfg.beta_grid) if b < (1 - eps) * math.log(n)]:
            checks = check_edge_inequalities(n, beta, sch)
            slack = min(c.slack for c in checks)
            if slack < worst:
                worst = slack
                worst_at = (n, beta, [c.k for c in checks if not c.passed])
    return CheckResult("or.smallbeta-inequalities", worst >= -1e-12, worst,
                       f"worst at (n, beta, failing k) = {worst_at}")


def check_delta_identities(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for n in cfg.schedule_n_grid:
        for beta in (0.0, 1.0, math.log(n)):
            for sch, gammas in (
                (weights_large_beta(n), np.array([(n - k) / k for k in range(1, n)])),
                (weights_log_beta(n, beta), gamma_sequence(n, beta)),
            ):
                pure = deltas_from_gammas(gammas)
                # the identity covers k >= 2 (k = 1 carries a prefactor <= 1)
                dev = np.abs(pure[1:] - sch.deltas[1:]) / np.maximum(sch.deltas[1:], 1.0)
                worst = min(worst, 1e-9 - float(dev.max()))
                worst = min(worst, delta_max_bound(gammas) - sch.delta_max)
        bound = weights_large_beta(n).delta_max
        worst = min(worst, n * math.comb(n, n // 2) - bound)
    return CheckResult("or.delta-max-identities", worst >= 0, worst)


def check_or_contraction(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in cfg.contraction_n_grid:
        for beta in (0.0, 0.5, 1.0, 2.0, math.log(n), 5.0, 10.0):
            for sch in (weights_large_beta(n), weights_small_beta(n, 0.2),
                        weights_log_beta(n, beta)):
                worst = max(worst, max(verify_or_contraction(n, beta, sch).values()))
    return CheckResult("or.contraction-matches-coupling", worst < 1e-10, 1e-10 - worst,
                       f"max dev {worst:.3g}")


def check_or_tmix_below_bounds(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for n in cfg.tmix_n_grid:
        game = make_or(n)
        for beta in _beta_grid_for(n, cfg.beta_grid):
            P = transition_matrix(game, beta)
            pi = gibbs_stationary(game, beta)
            t_mix = mixing_time_exact(P, pi, horizon=10**16).t_mix
            for sch in (weights_large_beta(n), weights_log_beta(n, beta)):
                bound = path_coupling_bound(sch.diameter, sch.alpha, 0.25)
                worst = min(worst, bound - t_mix)
    return CheckResult("or.tmix-below-path-coupling", worst >= 0, worst)


def check_corrupted_schedule(cfg: VerifyConfig) -> CheckResult:
    # Deliberate failure injection: halving delta_2 must break the system.
    n, beta = 8, 1.0
    sch = weights_large_beta(n)
    deltas = sch.deltas.copy()
    deltas[1] /= 2.0
    corrupted = WeightSchedule(deltas=deltas, alpha=sch.alpha, label="large-beta-corrupted")
    checks = check_edge_inequalities(n, beta, corrupted)
    failing = [c.k for c in checks if not c.passed]
    slack = min(c.slack for c in checks)
    return CheckResult("or.injected-corrupt-schedule", slack >= -1e-12, slack,
                       f"corrupted delta_2 fails inequalities k={failing}")


# ---------------------------------------------------------------------------
# xor-distance checks
# ---------------------------------------------------------------------------


def check_xor_lumping(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in cfg.lump_n_grid:
        for beta in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0):
            if not verify_xor_coupling_law(n, beta):
                return CheckResult("xor.lumping", False, -1.0, f"canonical law fails at n={n}")
            worst = max(worst, xor_lumping_deviation(n, beta))
    return CheckResult("xor.lumping", worst < 1e-12, 1e-12 - worst,
                       f"max deviation {worst:.3g} (exhaustive)")


def check_xor_hitting_times(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in cfg.hitting_n_grid:
        for beta in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0):
            mus, nus = distance_hitting_times(n, beta)
            for ell in range(1, n // 2 + 1):
                worst = max(worst,
                            abs(mus[ell - 1] - mu_closed_form(n, beta, ell)) / mu_closed_form(n, beta, ell),
                            abs(nus[ell - 1] - nu_closed_form(n, beta, ell)) / nu_closed_form(n, beta, ell))
    return CheckResult("xor.closed-forms-vs-hitting", worst < 1e-9, 1e-9 - worst,
                       f"max rel dev {worst:.3g}")


def check_xor_envelope(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for n in range(4, 65, 6):
        for beta in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0):
            exact, envelope = expected_coalescence_bound(n, beta)
            worst = min(worst, (envelope - exact) / envelope)
    return CheckResult("xor.sum-below-envelope", worst >= 0, worst)


def check_xor_tmix_sandwich(cfg: VerifyConfig) -> CheckResult:
    worst = math.inf
    for n in cfg.tmix_n_grid:
        game = make_xor(n)
        for beta in _beta_grid_for(n, cfg.beta_grid):
            P = transition_matrix(game, beta)
            pi = gibbs_stationary(game, beta)
            t_mix = mixing_time_exact(P, pi, horizon=10**16).t_mix
            lower = (1 - 2 * 0.25) * (1 + math.exp(beta)) / 2.0
            upper = 4.0 * expected_coalescence_bound(n, beta)[0]
            worst = min(worst, t_mix - lower, upper - t_mix)
    return CheckResult("xor.tmix-sandwich", worst >= 0, worst)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

ALL_CHECKS = [
    check_potentials,
    check_nash_counts,
    check_profile_roundtrip,
    check_kernel_structure,
    check_translation_invariance,
    check_rescaling,
    check_glauber_consistency,
    check_gibbs_vs_solve,
    check_d_monotone,
    check_relaxation_sandwich,
    check_bottleneck_bounds,
    check_welfare_closed_forms,
    check_coordination_welfare_threshold,
    check_joint_marginals,
    check_coalesced_absorbing,
    check_product_marginalization,
    check_ck_coalescence,
    check_stairs_coalescence_scaling,
    check_recursion_invariants,
    check_gamma_forms,
    check_gamma_bounds,
    check_largebeta_inequalities,
    check_logbeta_inequalities,
    check_smallbeta_inequalities,
    check_delta_identities,
    check_or_contraction,
    check_or_tmix_below_bounds,
    check_xor_lumping,
    check_xor_hitting_times,
    check_xor_envelope,
    check_xor_tmix_sandwich,
]


def run_all(cfg: VerifyConfig | None = None) -> list[CheckResult]:
    cfg = cfg or VerifyConfig()
    results = [check(cfg) for check in ALL_CHECKS]
    if cfg.inject_corrupt_schedule:
        results.append(check_corrupted_schedule(cfg))
    return results
