"""Phase optimization by simultaneous-perturbation stochastic approximation.

The phase block maximizes the worst indirect-target SINR margin. Each step
costs exactly two objective evaluations regardless of the number of
reflecting elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyIndirectSet
from .rates import PrecoderPair
from .scenario import (ChannelSet, PhaseVector, ScenarioConfig,
                       build_composite_indirect_channel)

IMPROVEMENT_TOL = 1e-6


@dataclass(frozen=True)
class SpsaSchedule:
    """Gain sequences a(t) = a0/(t + stability)^alpha, c(t) = c0/t^gamma.

    The admissible exponent ranges (alpha in (0.5, 1], gamma in (0, 0.5),
    alpha - gamma > 0.5) guarantee the summability conditions the
    convergence theory requires.
    """

    a0: float = 0.2
    stability: float = 50.0
    alpha: float = 0.602
    c0: float = 0.1
    gamma: float = 0.101
    max_iters: int = 500
    patience: int = 100

    def __post_init__(self):
        if self.a0 <= 0 or self.c0 <= 0:
            raise ValueError("a0 and c0 must be positive")
        if self.stability < 0:
            raise ValueError("stability offset must be nonnegative")
        if not 0.5 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0.5, 1]")
        if not 0.0 < self.gamma < 0.5:
            raise ValueError("gamma must lie in (0, 0.5)")
        if self.alpha - self.gamma <= 0.5:
            raise ValueError("alpha - gamma must exceed 0.5")
        if self.max_iters < 1 or self.patience < 1:
            raise ValueError("max_iters and patience must be positive")

    def step_gain(self, t: int) -> float:
        return self.a0 / (t + self.stability) ** self.alpha

    def perturb_gain(self, t: int) -> float:
        return self.c0 / t ** self.gamma


def phase_objective(ch: ChannelSet, phi: PhaseVector, pre: PrecoderPair,
                    cfg: ScenarioConfig) -> float:
    """Worst indirect-target SINR margin min_k (|H_in w_k|^2 + |H_in b_k|^2 - gamma_k)."""
    if not cfg.indirect_targets:
        raise EmptyIndirectSet("no indirect targets; skip the phase block")
    worst = np.inf
    for k in cfg.indirect_targets:
        h_in = build_composite_indirect_channel(ch, phi, k)
        w_k, b_k = pre.column(k)
        val = np.sum(np.abs(h_in @ w_k) ** 2) + np.sum(np.abs(h_in @ b_k) ** 2)
        worst = min(worst, float(val) - cfg.sinr_thresholds[k - 1])
    return worst


def _project(phases: np.ndarray) -> np.ndarray:
    return np.clip(phases, 0.0, np.pi)


def spsa_step(phi: PhaseVector, t: int, sched: SpsaSchedule, objective,
              rng: np.random.Generator) -> PhaseVector:
    """One two-sided perturbation step; perturbed points are clamped to the
    feasible phase range before evaluation and the iterate is projected."""
    if t < 1:
        raise ValueError("iteration index must be >= 1")
    delta = rng.integers(0, 2, size=phi.n) * 2.0 - 1.0
    c_t = sched.perturb_gain(t)
    f_plus = objective(PhaseVector(_project(phi.phases + c_t * delta)))
    f_minus = objective(PhaseVector(_project(phi.phases - c_t * delta)))
    a_t = sched.step_gain(t)
    update = a_t * (f_plus - f_minus) / (2.0 * c_t * delta)
    return PhaseVector(_project(phi.phases + update))


def optimize_phases(ch: ChannelSet, phi0: PhaseVector, pre: PrecoderPair,
                    cfg: ScenarioConfig, sched: SpsaSchedule,
                    rng: np.random.Generator) -> PhaseVector:
    """Run SPSA on the indirect SINR margin; returns the best-observed point."""
    if not cfg.indirect_targets:
        raise EmptyIndirectSet("no indirect targets; skip the phase block")

    def objective(phi):
        return phase_objective(ch, phi, pre, cfg)

    best_phi, best_val = run_spsa(phi0, objective, sched, rng)
    return best_phi


def run_spsa(phi0: PhaseVector, objective, sched: SpsaSchedule,
             rng: np.random.Generator):
    """Schedule-driven SPSA loop on an arbitrary phase objective.

    Each iterate is scored by the midpoint proxy (f+ + f-)/2 of its own two
    perturbed evaluations, so tracking the best iterate costs no extra
    objective calls. Stops early once the best proxy value has not improved
    by IMPROVEMENT_TOL for `patience` consecutive iterations.
    """
    best_phi, best_val = phi0, objective(phi0)
    phi = phi0
    stalled = 0
    for t in range(1, sched.max_iters + 1):
        values = []

        def tracking_objective(p):
            v = objective(p)
            values.append(v)
            return v

        next_phi = spsa_step(phi, t, sched, tracking_objective, rng)
        proxy = 0.5 * (values[0] + values[1])
        if proxy > best_val:
            if proxy > best_val + IMPROVEMENT_TOL:
                stalled = 0
            else:
                stalled += 1
            best_phi, best_val = phi, proxy
        else:
            stalled += 1
        phi = next_phi
        if stalled >= sched.patience:
            break
    return best_phi, best_val
