"""Monte-Carlo power-sweep harness and command-line interface.

Reproduces the power-sweep experiment: for each scenario variant, power
level, and trial, draw channels from a per-trial seed, run the full
optimizer, and append one CSV row. Rows are emitted in a fixed
(scenario, power, trial) order so output is byte-identical regardless of
the worker count.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bcd import OptimizeOptions, optimize
from .errors import DfrcError, Infeasible
from .scenario import ScenarioConfig, sample_channels, zero_irs_channels

CSV_HEADER = "scenario,power,trial,secrecy_rate,lambda_sr,iterations,feasible,seed"


class AllInfeasible(DfrcError):
    """Every trial at some power level failed the SINR floors."""


@dataclass(frozen=True)
class NamedScenario:
    name: str
    cfg: ScenarioConfig
    disable_irs: bool = False


@dataclass(frozen=True)
class SweepSpec:
    powers: tuple
    n_trials: int
    scenarios: tuple          # NamedScenario entries
    base_seed: int = 7
    max_outer: int = 50
    tol: float = 1e-4

    def __post_init__(self):
        if list(self.powers) != sorted(set(self.powers)):
            raise ValueError("powers must be strictly increasing")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    power: float
    trial: int
    secrecy_rate: float
    lambda_sr: float
    iterations: int
    feasible: bool
    seed: int

    def to_csv(self) -> str:
        return ",".join([
            self.scenario,
            format(self.power, ".12g"),
            str(self.trial),
            format(self.secrecy_rate, ".12g"),
            format(self.lambda_sr, ".12g"),
            str(self.iterations),
            "true" if self.feasible else "false",
            str(self.seed),
        ])


def _base_config(n_targets: int, seed: int = 0, nlos: bool = False,
                 use_irs_comm_paths: bool = False) -> ScenarioConfig:
    angles = (72.0, 78.0)[:n_targets]
    views = (-85.0, -88.0)[:n_targets]
    targets = tuple(range(1, n_targets + 1))
    return ScenarioConfig(
        n_tx=4, n_rx=4, n_ed=4, n_irs=10, n_users=2, n_targets=n_targets,
        target_angles_deg=angles,
        ed_view_angles_deg=views,
        target_reflectivity=(0.1,) * n_targets,
        ed_path_loss=(0.1,) * n_targets,
        noise_radar=1.0,
        noise_ed=(1.0,) * n_targets,
        noise_user=(1.0, 1.0),
        power_budget=16.0,
        sinr_thresholds=(0.01,) * n_targets,
        direct_targets=() if nlos else targets,
        indirect_targets=targets if nlos else (),
        use_irs_comm_paths=use_irs_comm_paths,
        rng_seed=seed,
    )


def builtin_scenarios() -> list:
    """The two attack scenarios, in line-of-sight and surface-only (nlos)
    flavors, each with and without the reflecting surface."""
    out = []
    for base, k in (("one-ed", 1), ("two-ed", 2)):
        for nlos in (False, True):
            for disable in (False, True):
                name = base + ("-nlos" if nlos else "") + ("-noirs" if disable else "")
                out.append(NamedScenario(name=name,
                                         cfg=_base_config(k, nlos=nlos),
                                         disable_irs=disable))
    return out


def run_trial(named: NamedScenario, power: float, trial: int, base_seed: int,
              max_outer: int, tol: float) -> ResultRow:
    """One Monte-Carlo trial; infeasible solves become flagged rows."""
    seed = base_seed + trial
    cfg = named.cfg.with_overrides(power_budget=power, rng_seed=seed)
    ch = sample_channels(cfg)
    if named.disable_irs:
        ch = zero_irs_channels(ch)
    opts = OptimizeOptions(max_outer=max_outer, tol=tol,
                           irs_enabled=not named.disable_irs)
    try:
        _, _, trace = optimize(cfg, ch, opts)
        final = trace.records[-1]
        return ResultRow(named.name, power, trial, final.secrecy_rate,
                         final.lambda_sr, len(trace), True, seed)
    except Infeasible:
        return ResultRow(named.name, power, trial, float("nan"), float("nan"),
                         0, False, seed)


def _task(args):
    return run_trial(*args)


def run_sweep(spec: SweepSpec, out_path=None, workers: int = 0) -> list:
    """Run all (scenario, power, trial) combinations; returns ResultRows.

    Rows are written incrementally in deterministic order. Raises
    AllInfeasible once every trial of some (scenario, power) group failed.
    """
    tasks = [(sc, p, t, spec.base_seed, spec.max_outer, spec.tol)
             for sc in spec.scenarios for p in spec.powers
             for t in range(spec.n_trials)]
    if workers < 1:
        workers = os.cpu_count() or 1

    out = open(out_path, "w") if out_path else None
    rows = []
    group_feasible = 0
    try:
        if out:
            out.write(CSV_HEADER + "\n")
            out.flush()
        if workers == 1:
            results = map(_task, tasks)
        else:
            pool = ProcessPoolExecutor(max_workers=workers)
            results = pool.map(_task, tasks, chunksize=1)
        for i, row in enumerate(results):
            rows.append(row)
            if out:
                out.write(row.to_csv() + "\n")
                out.flush()
            group_feasible += int(row.feasible)
            if (i + 1) % spec.n_trials == 0:
                if group_feasible == 0:
                    raise AllInfeasible(
                        f"all {spec.n_trials} trials infeasible for "
                        f"scenario={row.scenario} power={row.power}")
                group_feasible = 0
        if workers != 1:
            pool.shutdown()
    finally:
        if out:
            out.close()
    return rows


def summarize(rows: list) -> list:
    """Mean and standard error of the secrecy rate per (scenario, power),
    over feasible rows only."""
    groups = {}
    for r in rows:
        groups.setdefault((r.scenario, r.power), []).append(r)
    table = []
    for (name, power), members in sorted(groups.items()):
        vals = [r.secrecy_rate for r in members if r.feasible]
        n = len(vals)
        mean = float(np.mean(vals)) if n else float("nan")
        se = float(np.std(vals, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        table.append((name, power, n, mean, se))
    return table


def _resolve_scenario(spec_name: str, no_irs: bool, nlos: bool,
                      use_irs_comm_paths: bool) -> NamedScenario:
    if os.path.exists(spec_name) or spec_name.endswith(".json"):
        with open(spec_name) as fh:
            cfg = ScenarioConfig.from_json(fh.read())
        name = os.path.splitext(os.path.basename(spec_name))[0]
        if use_irs_comm_paths:
            cfg = cfg.with_overrides(use_irs_comm_paths=True)
        return NamedScenario(name=name, cfg=cfg, disable_irs=no_irs)
    base_names = {s.name for s in builtin_scenarios()}
    if spec_name not in ("one-ed", "two-ed") and spec_name not in base_names:
        raise ValueError(f"unknown scenario {spec_name!r}; see `scenarios list`")
    base = "one-ed" if spec_name.startswith("one-ed") else "two-ed"
    nlos = nlos or "-nlos" in spec_name
    no_irs = no_irs or "-noirs" in spec_name
    k = 1 if base == "one-ed" else 2
    cfg = _base_config(k, nlos=nlos, use_irs_comm_paths=use_irs_comm_paths)
    name = base + ("-nlos" if nlos else "") + ("-noirs" if no_irs else "")
    return NamedScenario(name=name, cfg=cfg, disable_irs=no_irs)


def _cmd_run(args) -> int:
    try:
        named = _resolve_scenario(args.scenario, args.no_irs, args.nlos,
                                  args.use_irs_comm_paths)
        powers = tuple(float(p) for p in args.powers.split(","))
        spec = SweepSpec(powers=powers, n_trials=args.trials,
                         scenarios=(named,), base_seed=args.seed,
                         max_outer=args.max_outer, tol=args.tol)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = run_sweep(spec, out_path=args.out, workers=args.workers)
    except AllInfeasible as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 3
    for name, power, n, mean, se in summarize(rows):
        print(f"{name} P={power:g}: mean={mean:.4f} se={se:.4f} (n={n})")
    return 0


def _cmd_scenarios(args) -> int:
    if args.action == "list":
        for sc in builtin_scenarios():
            print(sc.name)
    return 0


def _cmd_validate(args) -> int:
    try:
        with open(args.path) as fh:
            ScenarioConfig.from_json(fh.read())
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 2
    print(f"{args.path}: ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfrc-secrecy",
        description="Secrecy-rate power sweeps for the surface-aided "
                    "radar-communication simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte-Carlo power sweep")
    run_p.add_argument("--scenario", required=True,
                       help="builtin name (one-ed, two-ed) or a scenario JSON path")
    run_p.add_argument("--powers", default="1,2,4,8,16,32")
    run_p.add_argument("--trials", type=int, default=50)
    run_p.add_argument("--seed", type=int, default=7)
    run_p.add_argument("--out", default="results.csv")
    run_p.add_argument("--no-irs", action="store_true")
    run_p.add_argument("--nlos", action="store_true",
                       help="targets reachable only via the reflecting surface")
    run_p.add_argument("--workers", type=int, default=0,
                       help="0 = all available cores")
    run_p.add_argument("--use-irs-comm-paths", action="store_true")
    run_p.add_argument("--max-outer", type=int, default=50)
    run_p.add_argument("--tol", type=float, default=1e-4)
    run_p.set_defaults(func=_cmd_run)

    sc_p = sub.add_parser("scenarios", help="inspect builtin scenarios")
    sc_p.add_argument("action", choices=["list"])
    sc_p.set_defaults(func=_cmd_scenarios)

    val_p = sub.add_parser("validate", help="validate a scenario JSON file")
    val_p.add_argument("path")
    val_p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
