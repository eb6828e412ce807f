"""Auxiliary-matrix reformulation of the pairwise secrecy rate.

For fixed auxiliaries the pairwise secrecy rate admits a concave quadratic
minorant in (W, B); the closed-form auxiliary updates make the minorant
tight at the current precoders. The additive constant that aligns the
minorant with the true rate difference is the dimension sum 2K + N_E in
nats (K trace terms from each of the two K x K blocks, N_E from the
eavesdropper covariance block); all returned values are converted to bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import cholesky_hpd, hermitian_part, inv_hpd, logdet_hpd
from .rates import PrecoderPair, effective_channels
from .scenario import ChannelSet, PhaseVector, ScenarioConfig

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class PairAuxiliaries:
    """Auxiliary matrices for one (user, eavesdropper) pair."""

    u_b: np.ndarray   # n_rx x K
    w_b: np.ndarray   # K x K, Hermitian PD
    u_e: np.ndarray   # n_ed x K
    w_e: np.ndarray   # K x K, Hermitian PD
    w_z: np.ndarray   # n_ed x n_ed, Hermitian PD


@dataclass(frozen=True)
class AuxiliarySet:
    """Per-(l, k) auxiliaries, keyed by 1-based (user, target) index pairs."""

    pairs: dict

    def pair(self, l: int, k: int) -> PairAuxiliaries:
        return self.pairs[(l, k)]


def mse_matrix_user(u_b, f_l, pre: PrecoderPair, sigma_u2: float) -> np.ndarray:
    """User-side MSE matrix E_b(U_b, W, B); Hermitian PSD, K x K."""
    u_b = np.asarray(u_b, dtype=np.complex128)
    f_l = np.asarray(f_l, dtype=np.complex128)
    if u_b.shape[0] != f_l.shape[0]:
        raise DimensionMismatch(f"u_b {u_b.shape} does not conform with f_l {f_l.shape}")
    fw = f_l @ pre.w
    fb = f_l @ pre.b
    k = pre.n_streams
    res = np.eye(k) - u_b.conj().T @ fw
    noise_cov = sigma_u2 * np.eye(f_l.shape[0]) + fb @ fb.conj().T
    return hermitian_part(res @ res.conj().T + u_b.conj().T @ noise_cov @ u_b)


def mse_matrix_ed(u_e, g_k, b, sigma_e: float) -> np.ndarray:
    """Eavesdropper-side MSE matrix E_e(U_e, B) with the 1/sigma scaling."""
    u_e = np.asarray(u_e, dtype=np.complex128)
    g_k = np.asarray(g_k, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if u_e.shape[0] != g_k.shape[0]:
        raise DimensionMismatch(f"u_e {u_e.shape} does not conform with g_k {g_k.shape}")
    k = b.shape[1]
    res = np.eye(k) - u_e.conj().T @ (g_k @ b) / sigma_e
    return hermitian_part(res @ res.conj().T + u_e.conj().T @ u_e)


def _pair_update(f_l, g_k, pre: PrecoderPair, sigma_u2, sigma_e2) -> PairAuxiliaries:
    fw = f_l @ pre.w
    fb = f_l @ pre.b
    gw = g_k @ pre.w
    gb = g_k @ pre.b
    sigma_e = np.sqrt(sigma_e2)

    cov_u = sigma_u2 * np.eye(f_l.shape[0]) + fb @ fb.conj().T + fw @ fw.conj().T
    u_b = np.linalg.solve(hermitian_part(cov_u), fw)
    w_b = inv_hpd(mse_matrix_user(u_b, f_l, pre, sigma_u2))

    cov_e = np.eye(g_k.shape[0]) + gb @ gb.conj().T / sigma_e2
    u_e = np.linalg.solve(hermitian_part(cov_e), gb / sigma_e)
    w_e = inv_hpd(mse_matrix_ed(u_e, g_k, pre.b, sigma_e))

    cov_z = np.eye(g_k.shape[0]) + (gb @ gb.conj().T + gw @ gw.conj().T) / sigma_e2
    w_z = inv_hpd(hermitian_part(cov_z))
    return PairAuxiliaries(u_b=u_b, w_b=w_b, u_e=u_e, w_e=w_e, w_z=w_z)


def update_auxiliaries(ch: ChannelSet, phi: PhaseVector, pre: PrecoderPair,
                       cfg: ScenarioConfig) -> AuxiliarySet:
    """Closed-form block-optimal auxiliaries for every (user, target) pair."""
    f_list, g_list = effective_channels(ch, phi, cfg)
    pairs = {}
    for l in range(1, cfg.n_users + 1):
        for k in range(1, cfg.n_targets + 1):
            pairs[(l, k)] = _pair_update(f_list[l - 1], g_list[k - 1], pre,
                                         cfg.noise_user[l - 1], cfg.noise_ed[k - 1])
    return AuxiliarySet(pairs=pairs)


@dataclass(frozen=True)
class PairQuadratic:
    """Coefficients of the concave quadratic minorant for one pair.

    In nats: s(W, B) = const + 2 Re tr(a_b W) + (2/sigma_e) Re tr(a_e B)
                       - |m_b W|^2 - |m_b B|^2 - (1/sigma_e^2) |m_e B|^2
                       - (1/sigma_e^2) (|m_z W|^2 + |m_z B|^2)
    with |.| the Frobenius norm.
    """

    a_b: np.ndarray
    a_e: np.ndarray
    m_b: np.ndarray
    m_e: np.ndarray
    m_z: np.ndarray
    const: float
    sigma_e: float

    def value_nats(self, w: np.ndarray, b: np.ndarray) -> float:
        se = self.sigma_e
        lin = 2.0 * np.real(np.trace(self.a_b @ w)) \
            + (2.0 / se) * np.real(np.trace(self.a_e @ b))
        quad = np.sum(np.abs(self.m_b @ w) ** 2) + np.sum(np.abs(self.m_b @ b) ** 2) \
            + np.sum(np.abs(self.m_e @ b) ** 2) / se**2 \
            + (np.sum(np.abs(self.m_z @ w) ** 2) + np.sum(np.abs(self.m_z @ b) ** 2)) / se**2
        return float(self.const + lin - quad)

    def value_bits(self, w: np.ndarray, b: np.ndarray) -> float:
        return self.value_nats(w, b) / _LN2


def pair_quadratic(aux: PairAuxiliaries, f_l, g_k, sigma_u2: float,
                   sigma_e2: float) -> PairQuadratic:
    """Expand the surrogate for one pair into explicit quadratic coefficients."""
    k_dim = aux.w_b.shape[0]
    n_e = aux.w_z.shape[0]
    sigma_e = np.sqrt(sigma_e2)

    l_b = cholesky_hpd(aux.w_b)
    l_e = cholesky_hpd(aux.w_e)
    l_z = cholesky_hpd(aux.w_z)

    a_b = aux.w_b @ aux.u_b.conj().T @ f_l
    a_e = aux.w_e @ aux.u_e.conj().T @ g_k
    m_b = l_b.conj().T @ aux.u_b.conj().T @ f_l
    m_e = l_e.conj().T @ aux.u_e.conj().T @ g_k
    m_z = l_z.conj().T @ g_k

    const = (logdet_hpd(aux.w_b) + logdet_hpd(aux.w_e) + logdet_hpd(aux.w_z)) * _LN2
    const -= np.real(np.trace(aux.w_b)) + np.real(np.trace(aux.w_e)) + np.real(np.trace(aux.w_z))
    const -= sigma_u2 * np.real(np.trace(aux.w_b @ aux.u_b.conj().T @ aux.u_b))
    const -= np.real(np.trace(aux.w_e @ aux.u_e.conj().T @ aux.u_e))
    const += 2.0 * k_dim + n_e
    return PairQuadratic(a_b=a_b, a_e=a_e, m_b=m_b, m_e=m_e, m_z=m_z,
                         const=float(const), sigma_e=float(sigma_e))


def surrogate_secrecy(aux: AuxiliarySet, l: int, k: int, ch: ChannelSet,
                      phi: PhaseVector, pre: PrecoderPair,
                      cfg: ScenarioConfig) -> float:
    """Surrogate secrecy value (bits) for pair (l, k) at the given precoders.

    Equals R_u,l - R_e,k exactly when the auxiliaries are the closed-form
    optimum for these precoders; otherwise it is a lower bound.
    """
    f_list, g_list = effective_channels(ch, phi, cfg)
    quad = pair_quadratic(aux.pair(l, k), f_list[l - 1], g_list[k - 1],
                          cfg.noise_user[l - 1], cfg.noise_ed[k - 1])
    return quad.value_bits(pre.w, pre.b)
