"""Experiment runner: config-driven sweeps, verification, simulation.

Subcommands::

    logitdyn analyze  --config cfg.toml [--game or --n 6 --beta 0,1,2 ...]
    logitdyn verify   --config cfg.toml [--inject-corrupt-schedule]
    logitdyn simulate --config cfg.toml
    logitdyn sweep    --config cfg.toml

Config is TOML (see README for the schema); every common knob is also a
command-line flag.  All outputs are CSV with a leading comment row carrying
the config hash and seed, so identical config + seed gives byte-identical
files.  Exit codes: 0 ok, 1 config error, 2 verification failure,
3 capacity/horizon exhaustion in a required step.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import theory
from .analysis import (
    bottleneck_lower_bound,
    bottleneck_ratio,
    expected_social_welfare,
    mixing_time_exact,
    relaxation_bounds,
    tv_distance,
)
from .coupling import coalescence_time
from .dynamics import detailed_balance_check, gibbs_stationary, stationary_solve, transition_matrix
from .errors import CapacityError, ConfigError, HorizonError, LogitDynError
from .games import (
    GameSpec,
    make_anti_coordination,
    make_ck,
    make_coordination,
    make_matching_pennies,
    make_or,
    make_stairs,
    make_xor,
)
from .or_weights import (
    check_edge_inequalities,
    path_coupling_bound,
    weights_large_beta,
    weights_log_beta,
    weights_small_beta,
)
from .verify import VerifyConfig, run_all
from .xor_distance import (
    distance_hitting_times,
    expected_coalescence_bound,
    mu_closed_form,
    nu_closed_form,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_CAPACITY = 3

_DEFAULTS = {
    "experiment": {
        "seed": 0,
        "epsilon": 0.25,
        "out": "out",
        "beta_grid": [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0],
    },
    "game": {"name": "ck", "n": 4, "a": 3.0, "b": 2.0, "c": 0.0, "d": 0.0, "eps": 0.2},
    "caps": {"states": 4096, "pairs": 65536, "horizon": 10_000_000},
    "verify": {
        "inject_corrupt_schedule": False,
        "schedule_n_grid": [4, 8, 16, 32, 64],
        "tmix_n_grid": [4, 5, 6],
        "lump_n_grid": [4, 6, 8],
    },
    "simulate": {"trials": 200, "horizon": 100_000, "n_grid": []},
    "sweep": {"family": "or", "n_grid": [4, 6, 8, 12], "exact_tmix": False},
}


@dataclass
class ExperimentConfig:
    raw: dict
    out_dir: Path = field(init=False)

    def __post_init__(self):
        exp = self.raw["experiment"]
        grid = exp["beta_grid"]
        if not grid:
            raise ConfigError("beta_grid must be nonempty")
        if any((not isinstance(b, (int, float))) or b < 0 for b in grid):
            raise ConfigError("beta_grid entries must be reals >= 0")
        if not 0.0 < exp["epsilon"] < 0.5:
            raise ConfigError("epsilon must be in (0, 1/2)")
        if self.raw["game"]["name"] not in {
            "ck", "coordination", "anti_coordination", "matching_pennies",
            "stairs", "or", "xor",
        }:
            raise ConfigError(f"unknown game name {self.raw['game']['name']!r}")
        self.out_dir = Path(exp["out"])

    @property
    def betas(self) -> list[float]:
        return [float(b) for b in self.raw["experiment"]["beta_grid"]]

    @property
    def epsilon(self) -> float:
        return float(self.raw["experiment"]["epsilon"])

    @property
    def seed(self) -> int:
        return int(self.raw["experiment"]["seed"])

    @property
    def state_cap(self) -> int:
        return int(self.raw["caps"]["states"])

    @property
    def horizon(self) -> int:
        return int(self.raw["caps"]["horizon"])

    def config_hash(self) -> str:
        # the output directory is not part of the experiment's identity
        hashed = {k: {kk: vv for kk, vv in v.items() if (k, kk) != ("experiment", "out")}
                  for k, v in self.raw.items()}
        return hashlib.sha256(
            json.dumps(hashed, sort_keys=True, default=str).encode()
        ).hexdigest()[:16]

    def make_game(self, n_override: int | None = None) -> GameSpec:
        g = self.raw["game"]
        name = g["name"]
        n = int(n_override if n_override is not None else g["n"])
        if name == "ck":
            return make_ck()
        if name == "matching_pennies":
            return make_matching_pennies()
        if name == "coordination":
            return make_coordination(g["a"], g["b"], g["c"], g["d"])
        if name == "anti_coordination":
            return make_anti_coordination(g["a"], g["b"], g["c"], g["d"])
        if name == "stairs":
            return make_stairs(n)
        if name == "or":
            return make_or(n)
        if name == "xor":
            return make_xor(n)
        raise ConfigError(f"unknown game name {name!r}")


def _deep_merge(base: dict, extra: dict) -> dict:
    out = {k: dict(v) for k, v in base.items()}
    for section, values in extra.items():
        if section not in out:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"section {section!r} must be a table")
        for key, val in values.items():
            if key not in out[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
            out[section][key] = val
    return out


def load_config(path: str | None, overrides: dict | None = None) -> ExperimentConfig:
    raw = {k: dict(v) for k, v in _DEFAULTS.items()}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = _deep_merge(raw, tomllib.load(fh))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad TOML in {path}: {exc}") from exc
    if overrides:
        raw = _deep_merge(raw, overrides)
    return ExperimentConfig(raw)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list], cfg: ExperimentConfig):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={cfg.config_hash()} seed={cfg.seed}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _closed_welfare(cfg: ExperimentConfig, beta: float):
    g = cfg.raw["game"]
    name = g["name"]
    if name == "ck":
        return theory.ck_expected_welfare(beta)
    if name == "coordination":
        return theory.coordination_expected_welfare(g["a"], g["b"], g["c"], g["d"], beta)
    if name == "or":
        return theory.or_expected_welfare(int(g["n"]), beta)
    if name == "xor":
        return theory.xor_expected_welfare(int(g["n"]), beta)
    if name == "matching_pennies":
        return 0.0
    return None


def run_analyze(cfg: ExperimentConfig) -> int:
    game = cfg.make_game()
    rows: list[list] = []
    curves: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def add(beta, quantity, value, status="ok"):
        rows.append([game.name, beta, quantity, value if value is not None else "", status])

    for beta in cfg.betas:
        size = game.n_profiles
        add(beta, "n_states", size)
        if size > cfg.state_cap:
            add(beta, "t_mix", "", "skipped(cap)")
            add(beta, "ew_exact", "", "skipped(cap)")
            closed = _closed_welfare(cfg, beta)
            if closed is not None:
                add(beta, "ew_closed", closed)
            continue
        P = transition_matrix(game, beta, cap=cfg.state_cap)
        pi = gibbs_stationary(game, beta) if game.potential is not None else stationary_solve(P)
        add(beta, "pi_min", float(pi.min()))
        add(beta, "pi_max", float(pi.max()))
        add(beta, "uniform_tv", tv_distance(pi, np.full(size, 1.0 / size)))
        add(beta, "ew_exact", expected_social_welfare(game, pi))
        closed = _closed_welfare(cfg, beta)
        if closed is not None:
            add(beta, "ew_closed", closed)
        try:
            report = mixing_time_exact(P, pi, cfg.epsilon, horizon=cfg.horizon)
            add(beta, "t_mix", report.t_mix)
            curves[beta] = (report.ts, report.ds)
        except HorizonError as exc:
            add(beta, "t_mix", "", f"skipped(horizon,d={exc.last_value:.3g})")
        if detailed_balance_check(P, pi, atol=1e-10):
            sb = relaxation_bounds(P, pi, cfg.epsilon)
            add(beta, "lambda_star", sb.lambda_star)
            add(beta, "t_rel", sb.t_rel)
            add(beta, "spectral_lower", sb.lower)
            add(beta, "spectral_upper", sb.upper)
        else:
            add(beta, "lambda_star", "", "skipped(nonreversible)")
        if cfg.raw["game"]["name"] in ("or", "xor"):
            zero = [0]
            rest = list(range(1, size))
            for label, S in (("zero", zero), ("rest", rest)):
                if pi[S].sum() <= 0.5:
                    phi = bottleneck_ratio(P, pi, S)
                    add(beta, f"bottleneck_{label}", phi)
                    add(beta, f"bottleneck_lb_{label}",
                        bottleneck_lower_bound(P, pi, S, cfg.epsilon))
                    add(beta, f"bottleneck_lb_{label}_loose", 1.0 / phi)
                else:
                    add(beta, f"bottleneck_{label}", "", "skipped(pi>1/2)")

    write_csv(cfg.out_dir / "analyze.csv",
              ["game", "beta", "quantity", "value", "status"], rows, cfg)
    for idx, beta in enumerate(sorted(curves)):
        ts, ds = curves[beta]
        write_csv(cfg.out_dir / f"dcurve_{idx:02d}.csv",
                  ["beta", "t", "d"], [[beta, int(t), float(d)] for t, d in zip(ts, ds)],
                  cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def run_verify(cfg: ExperimentConfig) -> int:
    v = cfg.raw["verify"]
    vcfg = VerifyConfig(
        beta_grid=tuple(cfg.betas),
        schedule_n_grid=tuple(v["schedule_n_grid"]),
        tmix_n_grid=tuple(v["tmix_n_grid"]),
        lump_n_grid=tuple(v["lump_n_grid"]),
        seed=cfg.seed,
        inject_corrupt_schedule=bool(v["inject_corrupt_schedule"]),
    )
    results = run_all(vcfg)
    lines = [r.line() for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    report = cfg.out_dir / "verify_report.txt"
    with open(report, "w") as fh:
        fh.write(f"# config_hash={cfg.config_hash()} seed={cfg.seed}\n")
        fh.write(text)
    write_csv(cfg.out_dir / "verify.csv",
              ["check", "passed", "margin", "detail"],
              [[r.name, int(r.passed), r.margin, r.detail.replace(",", ";")] for r in results],
              cfg)
    return EXIT_OK if n_fail == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def run_simulate(cfg: ExperimentConfig) -> int:
    sim = cfg.raw["simulate"]
    trials = int(sim["trials"])
    horizon = int(sim["horizon"])
    n_grid = [int(n) for n in sim["n_grid"]] or [None]
    rows: list[list] = []
    summary: list[list] = []
    any_completed = False
    for n in n_grid:
        game = cfg.make_game(n_override=n)
        if any(m != 2 for m in game.strategy_counts):
            raise ConfigError(f"simulate needs a 2-strategy game, got {game.name}")
        players = game.n_players
        x = np.zeros(players, dtype=np.int64)
        y = np.ones(players, dtype=np.int64)
        for beta in cfg.betas:
            rng = np.random.default_rng(cfg.seed)
            taus = []
            for trial in range(trials):
                tau = coalescence_time(game, x, y, beta, rng, horizon)
                rows.append([game.name, players, beta, trial,
                             "".join(map(str, x)), "".join(map(str, y)),
                             tau if tau is not None else "timeout"])
                if tau is not None:
                    taus.append(tau)
                    any_completed = True
            if taus:
                arr = np.array(taus, dtype=float)
                q50, q90, q99 = np.quantile(arr, [0.5, 0.9, 0.99])
                le3 = float(np.mean(arr <= 3))
                summary.append([game.name, players, beta, len(arr), float(arr.mean()),
                                float(q50), float(q90), float(q99), le3,
                                _wilson_lower(le3, len(arr)),
                                float(arr.mean() / (players * math.log(players)))
                                if players > 1 else ""])
    write_csv(cfg.out_dir / "coalescence_trials.csv",
              ["game", "n", "beta", "trial", "start_x", "start_y", "tau"], rows, cfg)
    write_csv(cfg.out_dir / "coalescence_summary.csv",
              ["game", "n", "beta", "trials", "mean", "q50", "q90", "q99",
               "p_tau_le_3", "p_tau_le_3_wilson_lower", "mean_over_nlogn"],
              summary, cfg)
    if not any_completed:
        raise HorizonError("no coalescence trial finished within the horizon")
    return EXIT_OK


def _wilson_lower(p_hat: float, n: int, z: float = 1.96) -> float:
    if n == 0:
        return 0.0
    denom = 1 + z**2 / n
    centre = p_hat + z**2 / (2 * n)
    rad = z * math.sqrt(p_hat * (1 - p_hat) / n + z**2 / (4 * n**2))
    return max(0.0, (centre - rad) / denom)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def run_sweep(cfg: ExperimentConfig) -> int:
    sw = cfg.raw["sweep"]
    family = sw["family"]
    if family not in ("or", "xor", "both"):
        raise ConfigError(f"sweep family must be or | xor | both, got {family!r}")
    n_grid = [int(n) for n in sw["n_grid"]]
    if family in ("or", "both"):
        _sweep_or(cfg, n_grid)
    if family in ("xor", "both"):
        _sweep_xor(cfg, n_grid, bool(sw["exact_tmix"]))
    return EXIT_OK


def _schedules_for(n: int, beta: float):
    yield weights_large_beta(n)
    yield weights_small_beta(n, float(_DEFAULTS["game"]["eps"]))
    yield weights_log_beta(n, beta)


def _sweep_or(cfg: ExperimentConfig, n_grid: list[int]):
    edge_rows: list[list] = []
    sched_rows: list[list] = []
    for n in n_grid:
        for beta in cfg.betas:
            for sch in _schedules_for(n, beta):
                for c in check_edge_inequalities(n, beta, sch):
                    edge_rows.append([n, beta, sch.label, c.k, c.lhs, c.rhs,
                                      c.slack, int(c.passed)])
                sched_rows.append([n, beta, sch.label, sch.delta_max, sch.diameter,
                                   sch.alpha,
                                   path_coupling_bound(sch.diameter, sch.alpha, cfg.epsilon)])
    write_csv(cfg.out_dir / "or_edge_checks.csv",
              ["n", "beta", "schedule", "k", "lhs", "rhs", "slack", "pass"],
              edge_rows, cfg)
    write_csv(cfg.out_dir / "or_schedules.csv",
              ["n", "beta", "schedule", "delta_max", "diameter", "alpha", "bound"],
              sched_rows, cfg)


def _sweep_xor(cfg: ExperimentConfig, n_grid: list[int], exact_tmix: bool):
    level_rows: list[list] = []
    summary_rows: list[list] = []
    for n in n_grid:
        for beta in cfg.betas:
            mus, nus = distance_hitting_times(n, beta)
            for ell in range(1, n // 2 + 1):
                level_rows.append([n, beta, ell,
                                   nu_closed_form(n, beta, ell), float(nus[ell - 1]),
                                   mu_closed_form(n, beta, ell), float(mus[ell - 1])])
            exact, envelope = expected_coalescence_bound(n, beta)
            tmix_val, status = "", "skipped(cap)"
            if exact_tmix and 2**n <= cfg.state_cap:
                game = make_xor(n)
                try:
                    report = mixing_time_exact(transition_matrix(game, beta, cfg.state_cap),
                                               gibbs_stationary(game, beta),
                                               cfg.epsilon, horizon=cfg.horizon)
                    tmix_val, status = report.t_mix, "ok"
                except HorizonError:
                    status = "skipped(horizon)"
            summary_rows.append([n, beta, exact, envelope, tmix_val, status])
    write_csv(cfg.out_dir / "xor_levels.csv",
              ["n", "beta", "ell", "nu_closed", "nu_exact", "mu_closed", "mu_exact"],
              level_rows, cfg)
    write_csv(cfg.out_dir / "xor_summary.csv",
              ["n", "beta", "sum_mu_plus_1", "envelope", "tmix_exact", "status"],
              summary_rows, cfg)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parse_args(argv):
    parser = argparse.ArgumentParser(prog="logitdyn",
                                     description="logit dynamics experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "verify", "simulate", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="TOML config file")
        p.add_argument("--game", default=None,
                       help="ck | coordination | anti_coordination | matching_pennies"
                            " | stairs | or | xor")
        p.add_argument("--n", type=int, default=None, help="player count for n-player games")
        p.add_argument("--beta", default=None, help="comma-separated beta grid")
        p.add_argument("--eps", type=float, default=None, help="mixing epsilon")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        if name == "verify":
            p.add_argument("--inject-corrupt-schedule", action="store_true")
    return parser.parse_args(argv)


def _overrides_from_args(args) -> dict:
    over: dict = {}
    exp = {}
    if args.beta is not None:
        try:
            exp["beta_grid"] = [float(b) for b in args.beta.split(",") if b != ""]
        except ValueError as exc:
            raise ConfigError(f"bad --beta list {args.beta!r}") from exc
    if args.eps is not None:
        exp["epsilon"] = args.eps
    if args.seed is not None:
        exp["seed"] = args.seed
    if args.out is not None:
        exp["out"] = args.out
    if exp:
        over["experiment"] = exp
    game = {}
    if args.game is not None:
        game["name"] = args.game
    if args.n is not None:
        game["n"] = args.n
    if game:
        over["game"] = game
    if getattr(args, "inject_corrupt_schedule", False):
        over["verify"] = {"inject_corrupt_schedule": True}
    return over


def main(argv=None) -> int:
    args = _parse_args(argv if argv is not None else sys.argv[1:])
    try:
        cfg = load_config(args.config, _overrides_from_args(args))
        if args.command == "analyze":
            return run_analyze(cfg)
        if args.command == "verify":
            return run_verify(cfg)
        if args.command == "simulate":
            return run_simulate(cfg)
        if args.command == "sweep":
            return run_sweep(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapacityError, HorizonError) as exc:
        print(f"capacity/horizon exhausted: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except LogitDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
