"""Outer block-coordinate loop: auxiliaries, precoders, phases.

Each outer iteration performs the closed-form auxiliary update, one convex
precoder solve anchored at the previous iterate, and (when indirect targets
exist) an SPSA pass over the phases. The slack objective lambda_sr is the
monotone quantity and drives the stopping rule.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, NonMonotone
from .precoder import EPS_OPT, initial_precoders, solve_precoders
from .rates import PrecoderPair, secrecy_objective
from .scenario import (ChannelSet, PhaseVector, ScenarioConfig,
                       build_composite_indirect_channel)
from .spsa import SpsaSchedule, optimize_phases, phase_objective
from .surrogate import update_auxiliaries


@dataclass(frozen=True)
class TraceRecord:
    lambda_sr: float
    secrecy_rate: float
    power_used: float
    min_sinr_margin: float
    spsa_best: float
    wall_time: float


@dataclass
class OptimizerTrace:
    records: list = field(default_factory=list)

    CSV_HEADER = "lambda_sr,secrecy_rate,power_used,min_sinr_margin,spsa_best,wall_time"

    def append(self, rec: TraceRecord):
        self.records.append(rec)

    def lambda_history(self):
        return [r.lambda_sr for r in self.records]

    def __len__(self):
        return len(self.records)

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.records:
            lines.append(",".join(
                format(getattr(r, name), ".12g")
                for name in self.CSV_HEADER.split(",")))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OptimizeOptions:
    max_outer: int = 50
    tol: float = 1e-4
    spsa_sched: SpsaSchedule = field(default_factory=SpsaSchedule)
    irs_enabled: bool = True


def true_sinr_margin(ch: ChannelSet, phi: PhaseVector, pre: PrecoderPair,
                     cfg: ScenarioConfig, include_indirect: bool = True) -> float:
    """min_k f_k(w_k, b_k) - gamma_k with the exact quadratic f, over the
    enforced targets."""
    worst = np.inf
    for k in cfg.direct_targets:
        w_k, b_k = pre.column(k)
        h = ch.h_rtr[k - 1]
        f = np.sum(np.abs(h @ w_k) ** 2) + np.sum(np.abs(h @ b_k) ** 2)
        worst = min(worst, float(f) - cfg.sinr_thresholds[k - 1])
    if include_indirect:
        for k in cfg.indirect_targets:
            w_k, b_k = pre.column(k)
            h = build_composite_indirect_channel(ch, phi, k)
            f = np.sum(np.abs(h @ w_k) ** 2) + np.sum(np.abs(h @ b_k) ** 2)
            worst = min(worst, float(f) - cfg.sinr_thresholds[k - 1])
    return float(worst) if np.isfinite(worst) else float("nan")


def initial_phases(cfg: ScenarioConfig) -> PhaseVector:
    """Uniform random phases in [0, pi], derived from the scenario seed."""
    rng = np.random.default_rng(np.random.SeedSequence(cfg.rng_seed, spawn_key=(1,)))
    return PhaseVector(rng.uniform(0.0, np.pi, size=cfg.n_irs))


def optimize(cfg: ScenarioConfig, ch: ChannelSet,
             opts: OptimizeOptions = OptimizeOptions()):
    """Run the full block-coordinate optimization on one channel draw.

    Returns (PrecoderPair, PhaseVector, OptimizerTrace). With
    opts.irs_enabled False the phase block is skipped and the indirect
    SINR floors are dropped (the surface is the only path to those targets).
    """
    use_phases = opts.irs_enabled and bool(cfg.indirect_targets)
    include_indirect = use_phases
    spsa_rng = np.random.default_rng(np.random.SeedSequence(cfg.rng_seed, spawn_key=(2,)))

    phi = initial_phases(cfg)
    pre = initial_precoders(cfg, ch, phi, include_indirect=include_indirect)
    trace = OptimizerTrace()
    prev_lam = None
    start = time.perf_counter()

    for tau in range(1, opts.max_outer + 1):
        aux = update_auxiliaries(ch, phi, pre, cfg)
        try:
            pre, lam = solve_precoders(ch, phi, aux, pre, cfg,
                                       include_indirect=include_indirect)
        except Infeasible as exc:
            raise Infeasible(f"iteration {tau}: {exc}",
                             violating_targets=exc.violating_targets) from exc
        if prev_lam is not None and lam < prev_lam - 10.0 * EPS_OPT:
            raise NonMonotone(
                f"lambda_sr fell from {prev_lam:.6g} to {lam:.6g} at iteration {tau}")

        spsa_best = float("nan")
        if use_phases:
            phi = optimize_phases(ch, phi, pre, cfg, opts.spsa_sched, spsa_rng)
            spsa_best = phase_objective(ch, phi, pre, cfg)

        trace.append(TraceRecord(
            lambda_sr=lam,
            secrecy_rate=secrecy_objective(ch, phi, pre, cfg),
            power_used=pre.total_power(),
            min_sinr_margin=true_sinr_margin(ch, phi, pre, cfg,
                                             include_indirect=include_indirect),
            spsa_best=spsa_best,
            wall_time=time.perf_counter() - start,
        ))
        if prev_lam is not None and abs(lam - prev_lam) < opts.tol:
            break
        prev_lam = lam

    return pre, phi, trace
