"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Desk scale: exact chains up to n = 10 (1024 states), recursions up to n = 64,
beta grid {0, 0.1, 0.5, 1, 2, ln n, 2 ln n, 5, 10}.  Exact mixing times are
memoized across criteria.

Criterion 5's small-beta clause fails honestly: the k = 3 contraction
inequality of that weight schedule is analytically false for every n (and
k = 2 needs n of order 6^(1/eps)); see the decisions ledger shipped with the
review notes.
"""

import math

import numpy as np
import pytest

from logitdyn import (
    bottleneck_lower_bound,
    bottleneck_ratio,
    coupling_product_matrix,
    d_of_t,
    expected_coalescence_bound,
    expected_social_welfare,
    gibbs_stationary,
    make_ck,
    make_coordination,
    make_matching_pennies,
    make_or,
    make_xor,
    mixing_time_exact,
    path_coupling_bound,
    recursion_table,
    relaxation_bounds,
    stationary_solve,
    theory,
    transition_matrix,
    tv_distance,
    verify_or_contraction,
    weights_large_beta,
    weights_log_beta,
    weights_small_beta,
    xor_lumping_deviation,
)
from logitdyn.cli import main as cli_main
from logitdyn.or_weights import check_edge_inequalities

EPS = 0.25
BASE_BETAS = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
# Parameter points keep b - c <= 2 so that 1 - lambda* ~ e^{-(b-c) beta}
# stays resolvable by a double-precision eigensolve at beta = 10.
COORD_PARAMS = [(3, 2, 0, 0), (2, 1, 0, 0), (5, 2, 1, 0), (2, 3, 1, 0), (4, 4, 2, 2)]

_GAMES = {"or": make_or, "xor": make_xor}
_TMIX: dict = {}


def beta_grid(n: int) -> list[float]:
    return sorted(set(BASE_BETAS + [math.log(n), 2 * math.log(n)]))


def chain_for(name: str, n: int, beta: float):
    game = _GAMES[name](n)
    return transition_matrix(game, beta), gibbs_stationary(game, beta)


def exact_tmix(name: str, n: int, beta: float) -> int:
    key = (name, n, beta)
    if key not in _TMIX:
        P, pi = chain_for(name, n, beta)
        _TMIX[key] = mixing_time_exact(P, pi, EPS, horizon=10**16).t_mix
    return _TMIX[key]


def report(num: int, label: str, ok: bool, detail: str):
    print(f"ACCEPTANCE {num:02d} {label}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} [{label}]: {detail}"


def test_criterion_01_closed_form_welfare():
    worst = 0.0
    ck = make_ck()
    for beta in beta_grid(3):
        exact = expected_social_welfare(ck, gibbs_stationary(ck, beta))
        closed = theory.ck_expected_welfare(beta)
        worst = max(worst, abs(exact - closed) / abs(closed))
    ew0 = expected_social_welfare(ck, gibbs_stationary(ck, 0.0))
    exact_at_zero = abs(ew0 - (-13.5))
    for params in COORD_PARAMS:
        game = make_coordination(*params)
        for beta in beta_grid(2):
            exact = expected_social_welfare(game, gibbs_stationary(game, beta))
            closed = theory.coordination_expected_welfare(*params, beta)
            worst = max(worst, abs(exact - closed) / abs(closed))
    for n in (3, 6, 10):
        for name, closed_fn in (("or", theory.or_expected_welfare),
                                ("xor", theory.xor_expected_welfare)):
            game = _GAMES[name](n)
            for beta in beta_grid(n):
                exact = expected_social_welfare(game, gibbs_stationary(game, beta))
                closed = closed_fn(n, beta)
                worst = max(worst, abs(exact - closed) / abs(closed))
    report(1, "closed-form-welfare", worst < 1e-10 and exact_at_zero < 1e-12,
           f"max rel err {worst:.3g}, CK beta=0 abs err {exact_at_zero:.3g}")


def test_criterion_02_matching_pennies():
    worst_tv, worst_d3 = 0.0, 0.0
    mp = make_matching_pennies()
    uniform = np.full(4, 0.25)
    for beta in beta_grid(2):
        P = transition_matrix(mp, beta)
        worst_tv = max(worst_tv, tv_distance(stationary_solve(P), uniform))
        worst_d3 = max(worst_d3, d_of_t(P, uniform, 3))
    report(2, "matching-pennies", worst_tv < 1e-12 and worst_d3 <= 7 / 16,
           f"max TV from uniform {worst_tv:.3g}, max d(3) = {worst_d3:.6f} <= 7/16")


def test_criterion_03_coordination_spectrum():
    worst_eig, worst_slack = 0.0, math.inf
    for params in COORD_PARAMS:
        game = make_coordination(*params)
        for beta in beta_grid(2):
            P = transition_matrix(game, beta)
            pi = gibbs_stationary(game, beta)
            sb = relaxation_bounds(P, pi, EPS)
            worst_eig = max(worst_eig,
                            abs(sb.lambda_star - theory.coordination_lambda_star(*params, beta)))
            t_mix = mixing_time_exact(P, pi, EPS, horizon=10**16).t_mix
            _TMIX[("coord", params, beta)] = t_mix
            worst_slack = min(worst_slack, t_mix - sb.lower, sb.upper - t_mix)
    report(3, "coordination-spectrum", worst_eig < 1e-9 and worst_slack >= 0,
           f"max |lambda* - closed| = {worst_eig:.3g}, min sandwich slack {worst_slack:.3g}")


def test_criterion_04_or_bottleneck():
    worst_phi, worst_slack = 0.0, math.inf
    for n in range(3, 11):
        for beta in beta_grid(n):
            P, pi = chain_for("or", n, beta)
            t_mix = exact_tmix("or", n, beta)
            if pi[0] <= 0.5:
                phi = bottleneck_ratio(P, pi, [0])
                worst_phi = max(worst_phi, abs(phi - theory.or_bottleneck_zero(beta)))
                worst_slack = min(worst_slack, t_mix - bottleneck_lower_bound(P, pi, [0], EPS))
            rest = list(range(1, 2**n))
            if pi[rest].sum() <= 0.5:
                phi = bottleneck_ratio(P, pi, rest)
                worst_phi = max(worst_phi, abs(phi - theory.or_bottleneck_rest(n, beta)))
                worst_slack = min(worst_slack, t_mix - bottleneck_lower_bound(P, pi, rest, EPS))
    report(4, "or-bottleneck", worst_phi < 1e-12 and worst_slack >= 0,
           f"max |Phi - closed| = {worst_phi:.3g}, min t_mix slack {worst_slack:.3g}")


def test_criterion_05_or_path_coupling():
    clauses = []

    def run_clause(label, schedules):
        slack = math.inf
        where = None
        for n, beta, sch in schedules:
            s = min(c.slack for c in check_edge_inequalities(n, beta, sch))
            if s < slack:
                slack, where = s, (n, round(beta, 3))
        clauses.append((label, slack >= -1e-12, f"min slack {slack:.3g} at {where}"))

    ns = (4, 8, 16, 32, 64)
    run_clause("large-beta", [(n, b, weights_large_beta(n))
                              for n in ns for b in beta_grid(n)])
    run_clause("small-beta", [(n, b, weights_small_beta(n, 0.2))
                              for n in ns if n >= 8
                              for b in beta_grid(n) if b < 0.8 * math.log(n)])
    run_clause("log-beta", [(n, b, weights_log_beta(n, b))
                            for n in ns for b in beta_grid(n)])

    worst_dev = 0.0
    for n in (4, 6, 8):
        for beta in beta_grid(n):
            for sch in (weights_large_beta(n), weights_small_beta(n, 0.2),
                        weights_log_beta(n, beta)):
                worst_dev = max(worst_dev, max(verify_or_contraction(n, beta, sch).values()))
    clauses.append(("contraction", worst_dev < 1e-10, f"max dev {worst_dev:.3g}"))

    ok = all(c[1] for c in clauses)
    detail = "; ".join(f"{label} {'PASS' if good else 'FAIL'} [{info}]"
                       for label, good, info in clauses)
    report(5, "or-path-coupling", ok, detail)


def test_criterion_06_recursion_properties():
    bad = []
    margin = math.inf
    for n in (16, 32, 64):
        for beta in beta_grid(n):
            t = recursion_table(n, beta)
            for k in range(2, n):
                # exact-arithmetic inequality; allow double-precision rounding
                # (the true relative slack decays below 1e-16 at large k)
                if t.b[k - 1] < k * t.b[k - 2] * (1 - 1e-12):
                    bad.append(("b-growth", n, beta, k))
            for k in range(1, min(n, 21)):
                if t.l[k - 1] != (n - k) * math.factorial(k - 1):
                    bad.append(("l", n, beta, k))
                if t.r[k - 1] != math.factorial(k):
                    bad.append(("r", n, beta, k))
            g = t.gammas_split()
            margin = min(margin, float(n - g.max()))
        for c in (1, 2):
            g = recursion_table(n, c * math.log(n)).gammas_split()
            margin = min(margin, float(1.0 - g[c + 2:].max()),
                         math.factorial(c + 1) * 2**c - float(g[c + 1]))
    report(6, "recursion-properties", not bad and margin > 0,
           f"violations {bad[:3]}, min margin {margin:.3g}")


def test_criterion_07_xor_distance():
    worst_lump = 0.0
    for n in range(2, 11):
        for beta in (0.0, 1.0, 5.0):
            worst_lump = max(worst_lump, xor_lumping_deviation(n, beta))
    worst_rel = 0.0
    from logitdyn import distance_hitting_times, mu_closed_form, nu_closed_form
    for n in (4, 8, 16, 27, 40):
        for beta in BASE_BETAS:
            mus, nus = distance_hitting_times(n, beta)
            for ell in range(1, n // 2 + 1):
                worst_rel = max(
                    worst_rel,
                    abs(mus[ell - 1] - mu_closed_form(n, beta, ell)) / mu_closed_form(n, beta, ell),
                    abs(nus[ell - 1] - nu_closed_form(n, beta, ell)) / nu_closed_form(n, beta, ell))
    worst_slack = math.inf
    for n in range(4, 11):
        for beta in beta_grid(n):
            t_mix = exact_tmix("xor", n, beta)
            lower = (1 - 2 * EPS) * (1 + math.exp(beta)) / 2
            upper = 4 * expected_coalescence_bound(n, beta)[0]
            worst_slack = min(worst_slack, t_mix - lower, upper - t_mix)
    ok = worst_lump < 1e-12 and worst_rel < 1e-9 and worst_slack >= 0
    report(7, "xor-distance", ok,
           f"lumping dev {worst_lump:.3g}, closed-form rel {worst_rel:.3g}, "
           f"sandwich slack {worst_slack:.3g}")


def test_criterion_08_ck_constant_mixing():
    game = make_ck()
    size = 8
    diag = [k * size + k for k in range(size)]
    worst_p, worst_t = math.inf, 0
    for beta in beta_grid(3):
        Q = coupling_product_matrix(game, beta)
        Q3 = np.linalg.matrix_power(Q, 3)
        worst_p = min(worst_p, float(Q3[:, diag].sum(axis=1).min()))
        P = transition_matrix(game, beta)
        t_mix = mixing_time_exact(P, gibbs_stationary(game, beta), EPS).t_mix
        _TMIX[("ck", 3, beta)] = t_mix
        worst_t = max(worst_t, t_mix)
    envelope = 3 * 36 * math.log(4) + 1
    report(8, "ck-constant-mixing", worst_p >= 1 / 36 and worst_t <= envelope,
           f"min 3-step coalescence {worst_p:.4f} >= 1/36, "
           f"max t_mix {worst_t} <= {envelope:.1f}")


def test_criterion_09_bounds_and_growth():
    failures = []

    # (a) computed bounds dominate exact mixing times
    slack = math.inf
    for n in (4, 6, 8):
        for beta in beta_grid(n):
            t = exact_tmix("or", n, beta)
            for sch in (weights_large_beta(n), weights_log_beta(n, beta)):
                slack = min(slack, path_coupling_bound(sch.diameter, sch.alpha, EPS) - t)
            t = exact_tmix("xor", n, beta)
            slack = min(slack, 4 * expected_coalescence_bound(n, beta)[0] - t)
    for beta in beta_grid(3):
        slack = min(slack, (3 * 36 * math.log(4) + 1) - _TMIX[("ck", 3, beta)])
    for params in COORD_PARAMS:
        for beta in beta_grid(2):
            p, q = theory.coordination_p_q(*params, beta)
            bound = path_coupling_bound(2.0, (p + q) / 2, EPS)
            slack = min(slack, bound - _TMIX[("coord", params, beta)])
    if slack < 0:
        failures.append(f"bound domination slack {slack:.3g}")

    # (b) growth ratios bound/expression stable within a factor of 10
    def spread(vals):
        return max(vals) / min(vals)

    ratios = {
        "largebeta/n^2.5 2^n": [
            path_coupling_bound(weights_large_beta(n).diameter,
                                weights_large_beta(n).alpha, EPS) / (n**2.5 * 2**n)
            for n in range(4, 21)],
        "smallbeta/n ln n": [
            path_coupling_bound(weights_small_beta(n, 0.2).diameter, 1 / n, EPS)
            / (n * math.log(n)) for n in range(8, 65, 4)],
        "xor/e^b n^3 (beta sweep)": [
            4 * expected_coalescence_bound(6, b)[0] / (6**3 * math.exp(b))
            for b in beta_grid(6)],
        "xor/e^b n^3 (n sweep)": [
            4 * expected_coalescence_bound(n, 1.0)[0] / (n**3 * math.e)
            for n in range(4, 11)],
        "coord/e^(delta b)": [
            path_coupling_bound(2.0, sum(theory.coordination_p_q(3, 2, 0, 0, b)) / 2, EPS)
            / math.exp(2 * b) for b in beta_grid(2)],
    }
    for c in (1, 2):
        ratios[f"logbeta c={c}/n^{c + 3} ln n"] = [
            path_coupling_bound(weights_log_beta(n, c * math.log(n)).diameter,
                                weights_log_beta(n, c * math.log(n)).alpha, EPS)
            / (n ** (c + 3) * math.log(n)) for n in (8, 16, 32, 64)]
    spreads = {label: spread(vals) for label, vals in ratios.items()}
    for label, s in spreads.items():
        if s > 10.0:
            failures.append(f"{label} spread {s:.2f}")

    report(9, "bounds-and-growth", not failures,
           f"min domination slack {slack:.3g}, max ratio spread "
           f"{max(spreads.values()):.2f} ({'; '.join(failures) or 'all within 10x'})")


CFG_DETERMINISM = """
[experiment]
beta_grid = [0.0, 1.0]
seed = 11

[game]
name = "ck"

[verify]
schedule_n_grid = [4, 8]
tmix_n_grid = [3]
lump_n_grid = [3]

[simulate]
trials = 300
horizon = 2000
"""


def test_criterion_10_determinism(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(CFG_DETERMINISM)
    pairs = []
    for sub, files in (("verify", ["verify_report.txt", "verify.csv"]),
                       ("simulate", ["coalescence_trials.csv", "coalescence_summary.csv"])):
        outs = []
        for run in ("a", "b"):
            out = tmp_path / f"{sub}_{run}"
            cli_main([sub, "--config", str(cfg), "--out", str(out)])
            outs.append(out)
        for name in files:
            pairs.append((sub, name,
                          (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()))
    ok = all(same for _, _, same in pairs)
    report(10, "determinism", ok,
           "byte-identical: " + ", ".join(f"{s}/{n}={'yes' if same else 'NO'}"
                                          for s, n, same in pairs))
