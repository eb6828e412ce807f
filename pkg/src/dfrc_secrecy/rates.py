"""Performance quantities: target SINRs, user/eavesdropper rates, secrecy.

Rates are in bits. The log-det ratio forms are evaluated as a difference of
two Hermitian-positive-definite log-determinants, which is numerically
symmetric and never forms an explicit inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import hermitian_part, logdet_hpd
from .scenario import ChannelSet, PhaseVector, ScenarioConfig


@dataclass(frozen=True)
class PrecoderPair:
    """Information precoder w and artificial-noise precoder b, one column
    per target."""

    w: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.complex128)
        b = np.asarray(self.b, dtype=np.complex128)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", b)
        if w.shape != b.shape or w.ndim != 2:
            raise DimensionMismatch(f"w {w.shape} and b {b.shape} must be equal 2-D shapes")
        if not (np.all(np.isfinite(w.real)) and np.all(np.isfinite(w.imag))
                and np.all(np.isfinite(b.real)) and np.all(np.isfinite(b.imag))):
            raise ValueError("precoders must be finite")

    @property
    def n_streams(self) -> int:
        return self.w.shape[1]

    def total_power(self) -> float:
        return float(np.sum(np.abs(self.w) ** 2) + np.sum(np.abs(self.b) ** 2))

    def column(self, k: int):
        """1-based column accessor: (w_k, b_k)."""
        return self.w[:, k - 1], self.b[:, k - 1]


def _quadratic_sinr(h, w_k, b_k, sigma_t2):
    if h.shape[1] != w_k.shape[0] or w_k.shape != b_k.shape:
        raise DimensionMismatch("channel/beamformer dimensions do not conform")
    if sigma_t2 <= 0:
        raise ValueError("noise power must be positive")
    num = np.sum(np.abs(h @ w_k) ** 2) + np.sum(np.abs(h @ b_k) ** 2)
    return float(num / sigma_t2)


def sinr_direct(h_dc, w_k, b_k, sigma_t2) -> float:
    """Radar SINR via the direct path: (|H w|^2 + |H b|^2) / sigma^2."""
    return _quadratic_sinr(np.asarray(h_dc), np.asarray(w_k), np.asarray(b_k), sigma_t2)


def sinr_indirect(h_in, w_k, b_k, sigma_t2) -> float:
    """Radar SINR via the surface-composite path; same form as sinr_direct."""
    return _quadratic_sinr(np.asarray(h_in), np.asarray(w_k), np.asarray(b_k), sigma_t2)


def _logdet_rate(h, pre: PrecoderPair, sigma2: float) -> float:
    """log2 det(I + (s^2 I + H B B^H H^H)^-1 H W W^H H^H) via an HPD split."""
    if sigma2 <= 0:
        raise ValueError("noise power must be positive")
    h = np.asarray(h, dtype=np.complex128)
    if h.shape[1] != pre.w.shape[0]:
        raise DimensionMismatch(f"channel {h.shape} does not accept {pre.w.shape} precoders")
    hb = h @ pre.b
    hw = h @ pre.w
    noise = sigma2 * np.eye(h.shape[0]) + hb @ hb.conj().T
    total = noise + hw @ hw.conj().T
    return logdet_hpd(hermitian_part(total)) - logdet_hpd(hermitian_part(noise))


def eavesdropper_rate(g_k, pre: PrecoderPair, sigma_e2: float) -> float:
    return _logdet_rate(g_k, pre, sigma_e2)


def user_rate(f_l, pre: PrecoderPair, sigma_u2: float) -> float:
    return _logdet_rate(f_l, pre, sigma_u2)


def effective_channels(ch: ChannelSet, phi: PhaseVector, cfg: ScenarioConfig):
    """User and eavesdropper channels, with the surface legs folded in when
    cfg.use_irs_comm_paths is set."""
    f_list = list(ch.f_user)
    g_list = list(ch.g_ed)
    if cfg.use_irs_comm_paths:
        mid = phi.phasors()[:, None] * ch.h_ri
        f_list = [f + ch.h_iu[i] @ mid for i, f in enumerate(f_list)]
        g_list = [g + ch.h_ie[i] @ mid for i, g in enumerate(g_list)]
    return f_list, g_list


def secrecy_objective(ch: ChannelSet, phi: PhaseVector, pre: PrecoderPair,
                      cfg: ScenarioConfig) -> float:
    """Worst-pair secrecy rate [min_{l,k} (R_u,l - R_e,k)]^+ in bits."""
    f_list, g_list = effective_channels(ch, phi, cfg)
    rates_u = [user_rate(f_list[l], pre, cfg.noise_user[l]) for l in range(cfg.n_users)]
    rates_e = [eavesdropper_rate(g_list[k], pre, cfg.noise_ed[k]) for k in range(cfg.n_targets)]
    gap = min(ru - re for ru in rates_u for re in rates_e)
    return max(gap, 0.0)
