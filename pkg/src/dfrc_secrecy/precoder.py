"""Convexified max-min precoder subproblem.

With auxiliaries and phases held fixed, the worst-pair surrogate secrecy is
a concave quadratic in (W, B), the power constraint is a ball, and the
radar SINR floors are linearized around the previous iterate, so the
subproblem is an SOCP solved with cvxpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .errors import DimensionMismatch, Infeasible
from .rates import PrecoderPair, effective_channels
from .scenario import (ChannelSet, PhaseVector, ScenarioConfig,
                       build_composite_indirect_channel)
from .surrogate import AuxiliarySet, pair_quadratic

EPS_FEAS = 1e-6
EPS_OPT = 1e-4

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class LinearizedSinrConstraint:
    """Affine minorant of the radar SINR quadratic around an anchor point.

    The quadratic is convex, so the tangent underestimates it everywhere and
    a point satisfying the linearized floor satisfies the true one.
    """

    gradient: np.ndarray      # stacked [d/dw; d/db], length 2 n_tx
    anchor_value: float
    anchor_point: np.ndarray  # stacked [w_tilde; b_tilde]
    threshold: float

    def evaluate(self, w_k, b_k) -> float:
        d = np.concatenate([np.asarray(w_k).ravel(), np.asarray(b_k).ravel()])
        return float(self.anchor_value
                     + np.real(self.gradient @ (d - self.anchor_point)))


def linearize_sinr(h, w_tilde, b_tilde, gamma_k: float) -> LinearizedSinrConstraint:
    """First-order model of f(w, b) = |H w|^2 + |H b|^2 at (w_tilde, b_tilde).

    The gradient is stored so that f(d) ~ f(d~) + Re(g^T (d - d~)); for the
    complex quadratic this means g_w = 2 conj(H^H H w~) (finite-difference
    verified convention).
    """
    h = np.asarray(h, dtype=np.complex128)
    w_tilde = np.asarray(w_tilde, dtype=np.complex128).ravel()
    b_tilde = np.asarray(b_tilde, dtype=np.complex128).ravel()
    if h.shape[0] != h.shape[1] or h.shape[1] != w_tilde.size or w_tilde.size != b_tilde.size:
        raise DimensionMismatch("channel must be square and conform with the anchors")
    gram = h.conj().T @ h
    grad = np.concatenate([2.0 * np.conj(gram @ w_tilde), 2.0 * np.conj(gram @ b_tilde)])
    anchor_value = float(np.sum(np.abs(h @ w_tilde) ** 2) + np.sum(np.abs(h @ b_tilde) ** 2))
    return LinearizedSinrConstraint(gradient=grad, anchor_value=anchor_value,
                                    anchor_point=np.concatenate([w_tilde, b_tilde]),
                                    threshold=float(gamma_k))


def initial_precoders(cfg: ScenarioConfig, ch: ChannelSet = None,
                      phi: PhaseVector = None,
                      include_indirect: bool = True) -> PrecoderPair:
    """Evenly power-split initializer.

    Information columns come from the unnormalized DFT matrix. When channels
    are supplied, each artificial-noise column is steered toward its target
    (direct or surface-composite leg) so the anchor itself meets the SINR
    floor whenever it is reachable at this power split; a pure DFT anchor
    can make the tangent constraint unsatisfiable inside the power ball.
    """
    n, kk = cfg.n_tx, cfg.n_targets
    idx = np.arange(n)
    scale = np.sqrt(cfg.power_budget / (2.0 * kk * n))
    dft = np.exp(-2j * np.pi * np.outer(idx, np.arange(kk) % n) / n)
    w = scale * dft
    b = scale * dft.copy()
    if ch is not None:
        col_norm = np.sqrt(cfg.power_budget / (2.0 * kk))
        for k in cfg.direct_targets:
            # |H b|^2 is maximized along conj of the right factor of H
            direction = np.conj(ch.h_rtr[k - 1][0, :])
            nrm = np.linalg.norm(direction)
            if nrm > 0:
                b[:, k - 1] = col_norm * direction / nrm
        if include_indirect and phi is not None:
            p = phi.phasors()
            for k in cfg.indirect_targets:
                right = (ch.h_it[k - 1][0, :] * p) @ ch.h_ri
                nrm = np.linalg.norm(right)
                if nrm > 0:
                    b[:, k - 1] = col_norm * np.conj(right) / nrm
    return PrecoderPair(w=w, b=b)


def sinr_constraints(ch: ChannelSet, phi: PhaseVector, anchor: PrecoderPair,
                     cfg: ScenarioConfig, include_indirect: bool = True) -> dict:
    """Linearized radar SINR floors keyed by 1-based target index."""
    cons = {}
    for k in cfg.direct_targets:
        w_t, b_t = anchor.column(k)
        cons[k] = linearize_sinr(ch.h_rtr[k - 1], w_t, b_t, cfg.sinr_thresholds[k - 1])
    if include_indirect:
        for k in cfg.indirect_targets:
            h_in = build_composite_indirect_channel(ch, phi, k)
            w_t, b_t = anchor.column(k)
            cons[k] = linearize_sinr(h_in, w_t, b_t, cfg.sinr_thresholds[k - 1])
    return cons


def _diagnose_infeasible(cons: dict, p: float):
    """Targets whose linearized floor is unreachable even at full power."""
    bad = []
    margins = {}
    for k, lin in cons.items():
        # max of the affine model over the power ball
        offset = lin.anchor_value - np.real(lin.gradient @ lin.anchor_point)
        best = offset + np.linalg.norm(lin.gradient) * np.sqrt(p)
        margins[k] = best - lin.threshold
        if best < lin.threshold:
            bad.append(k)
    if not bad and margins:
        bad = [min(margins, key=margins.get)]
    return bad


def solve_precoders(ch: ChannelSet, phi: PhaseVector, aux: AuxiliarySet,
                    anchor: PrecoderPair, cfg: ScenarioConfig,
                    include_indirect: bool = True):
    """Solve the convexified subproblem; returns (PrecoderPair, lambda_sr).

    lambda_sr is the clamped worst-pair surrogate secrecy [min s_{l,k}]^+ in
    bits. The returned precoders satisfy the power budget exactly (scaled
    down if the solver overshoots by roundoff).
    """
    n, kk = cfg.n_tx, cfg.n_targets
    p = cfg.power_budget
    w = cp.Variable((n, kk), complex=True)
    b = cp.Variable((n, kk), complex=True)
    lam = cp.Variable()

    constraints = [cp.sum_squares(w) + cp.sum_squares(b) <= p]

    lin_cons = sinr_constraints(ch, phi, anchor, cfg, include_indirect)
    for k, lin in lin_cons.items():
        gw = lin.gradient[:n]
        gb = lin.gradient[n:]
        w_t = lin.anchor_point[:n]
        b_t = lin.anchor_point[n:]
        expr = lin.anchor_value \
            + cp.real(gw @ (w[:, k - 1] - w_t)) + cp.real(gb @ (b[:, k - 1] - b_t))
        constraints.append(expr >= lin.threshold)

    f_list, g_list = effective_channels(ch, phi, cfg)
    quads = []
    for l in range(1, cfg.n_users + 1):
        for k in range(1, kk + 1):
            quad = pair_quadratic(aux.pair(l, k), f_list[l - 1], g_list[k - 1],
                                  cfg.noise_user[l - 1], cfg.noise_ed[k - 1])
            quads.append(quad)
            se = quad.sigma_e
            s_nats = quad.const \
                + 2.0 * cp.real(cp.trace(quad.a_b @ w)) \
                + (2.0 / se) * cp.real(cp.trace(quad.a_e @ b)) \
                - cp.sum_squares(quad.m_b @ w) - cp.sum_squares(quad.m_b @ b) \
                - cp.sum_squares(quad.m_e @ b) / se**2 \
                - (cp.sum_squares(quad.m_z @ w) + cp.sum_squares(quad.m_z @ b)) / se**2
            constraints.append(s_nats / _LN2 >= lam)

    problem = cp.Problem(cp.Maximize(lam), constraints)
    # Clarabel at stock tolerances is fast and returns a clean optimum on
    # most instances; the occasional "almost solved" run gets one retry at
    # tighter tolerance, whose slightly-off point is still usable because the
    # step is safeguarded against the anchor below.
    try:
        problem.solve(solver=cp.CLARABEL)
    except cp.error.SolverError:
        pass
    if problem.status not in (cp.OPTIMAL, cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        try:
            problem.solve(solver=cp.CLARABEL, max_iter=500,
                          tol_gap_abs=1e-9, tol_gap_rel=1e-9, tol_feas=1e-9)
        except cp.error.SolverError:
            pass
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE,
                              cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        try:
            problem.solve(solver=cp.SCS, eps=1e-6, max_iters=50000)
        except cp.error.SolverError:
            pass

    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        bad = _diagnose_infeasible(lin_cons, p)
        raise Infeasible(
            f"no precoders within power {p} meet the SINR floors "
            f"(worst targets: {bad})", violating_targets=bad)

    # Report the slack as the exact worst-pair surrogate at the returned
    # point (not the solver's objective estimate), and never accept a point
    # worse than the anchor: the anchor is feasible for this subproblem, so
    # taking the better of the two keeps the ascent exactly monotone even
    # when the solver stops a little short (or, in the worst case, fails
    # entirely, which then degenerates to a null step).
    def worst_pair(pre_w, pre_b):
        return min(q.value_bits(pre_w, pre_b) for q in quads)

    anchor_ok = all(lin.anchor_value >= lin.threshold - EPS_FEAS
                    for lin in lin_cons.values())
    solved = (w.value is not None
              and problem.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE))
    if not solved and not anchor_ok:
        raise Infeasible(f"subproblem solve failed with status {problem.status}")

    if solved:
        w_val = np.asarray(w.value, dtype=np.complex128)
        b_val = np.asarray(b.value, dtype=np.complex128)
        used = np.sum(np.abs(w_val) ** 2) + np.sum(np.abs(b_val) ** 2)
        if used > p:
            shrink = np.sqrt(p / used)
            w_val *= shrink
            b_val *= shrink
        lam_sr = worst_pair(w_val, b_val)
    else:
        lam_sr = -np.inf

    lam_anchor = worst_pair(anchor.w, anchor.b)
    if anchor_ok and lam_anchor > lam_sr:
        w_val, b_val, lam_sr = anchor.w.copy(), anchor.b.copy(), lam_anchor
    return PrecoderPair(w=w_val, b=b_val), max(lam_sr, 0.0)
