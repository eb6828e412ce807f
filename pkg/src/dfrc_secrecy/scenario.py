"""Problem instance definition and channel synthesis.

A scenario couples the array geometry (steering-vector channels toward the
targets/eavesdroppers) with Rayleigh-faded links for everything routed
through the reflecting surface or toward the communication users.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .errors import WrongPartition


@dataclass(frozen=True)
class ScenarioConfig:
    """Full problem instance. Target indices in ``direct_targets`` /
    ``indirect_targets`` are 1-based."""

    n_tx: int
    n_rx: int
    n_ed: int
    n_irs: int
    n_users: int
    n_targets: int
    target_angles_deg: tuple
    ed_view_angles_deg: tuple
    target_reflectivity: tuple
    ed_path_loss: tuple
    noise_radar: float
    noise_ed: tuple
    noise_user: tuple
    power_budget: float
    sinr_thresholds: tuple
    direct_targets: tuple
    indirect_targets: tuple
    element_spacing_radar: float = 0.5
    element_spacing_ed: float = 0.5
    use_irs_comm_paths: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        k = self.n_targets
        for name in ("n_tx", "n_rx", "n_ed", "n_irs", "n_users", "n_targets"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("target_angles_deg", "ed_view_angles_deg",
                     "target_reflectivity", "ed_path_loss",
                     "noise_ed", "sinr_thresholds"):
            if len(getattr(self, name)) != k:
                raise ValueError(f"{name} must have length n_targets={k}")
        if len(self.noise_user) != self.n_users:
            raise ValueError("noise_user must have length n_users")
        if self.power_budget <= 0:
            raise ValueError("power_budget must be positive")
        if self.noise_radar <= 0 or min(self.noise_ed) <= 0 or min(self.noise_user) <= 0:
            raise ValueError("noise powers must be positive")
        if min(self.sinr_thresholds) < 0:
            raise ValueError("sinr_thresholds must be nonnegative")
        d, i = set(self.direct_targets), set(self.indirect_targets)
        if d & i or (d | i) != set(range(1, k + 1)):
            raise ValueError("direct/indirect targets must partition {1..K}")

    def with_overrides(self, **kwargs) -> "ScenarioConfig":
        data = asdict(self)
        data.update(kwargs)
        return ScenarioConfig(**data)

    def to_json(self) -> str:
        data = asdict(self)
        for name in ("target_reflectivity", "ed_path_loss"):
            data[name] = [[complex(v).real, complex(v).imag] for v in data[name]]
        return json.dumps(data, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ScenarioConfig":
        data = json.loads(text)
        for name in ("target_reflectivity", "ed_path_loss"):
            data[name] = tuple(complex(re, im) for re, im in data[name])
        for name in ("target_angles_deg", "ed_view_angles_deg", "noise_ed",
                     "noise_user", "sinr_thresholds", "direct_targets",
                     "indirect_targets"):
            data[name] = tuple(data[name])
        return ScenarioConfig(**data)


@dataclass(frozen=True)
class PhaseVector:
    """Per-element reflection phases, each constrained to [0, pi]."""

    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64)
        object.__setattr__(self, "phases", phases)
        if phases.ndim != 1:
            raise ValueError("phases must be a 1-D vector")
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        if np.any(phases < 0.0) or np.any(phases > np.pi):
            raise ValueError("phases must lie in [0, pi]")

    @property
    def n(self) -> int:
        return self.phases.size

    def phasors(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    def reflection(self) -> np.ndarray:
        """Diagonal unitary reflection matrix."""
        return np.diag(self.phasors())


@dataclass(frozen=True)
class ChannelSet:
    """All realized channel matrices for one Monte-Carlo draw.

    Per-target and per-user channels are tuples indexed 0-based; the public
    accessors below take the 1-based indices used throughout the package.
    """

    h_rtr: tuple      # K matrices, n_tx x n_tx
    g_ed: tuple       # K matrices, n_ed x n_tx
    f_user: tuple     # L matrices, n_rx x n_tx
    h_ri: np.ndarray  # n_irs x n_tx
    h_ir: np.ndarray  # n_tx x n_irs
    h_ti: tuple       # K columns, n_irs x 1
    h_it: tuple       # K rows, 1 x n_irs
    h_ie: tuple       # K matrices, n_ed x n_irs
    h_iu: tuple       # L matrices, n_rx x n_irs


def steering_vector(angle_deg: float, n_elems: int, spacing_wavelengths: float) -> np.ndarray:
    """Uniform linear array steering vector as an (n_elems, 1) column."""
    if n_elems < 1:
        raise ValueError("n_elems must be >= 1")
    m = np.arange(n_elems)
    phase = 2.0 * np.pi * spacing_wavelengths * m * np.sin(np.deg2rad(angle_deg))
    return np.exp(1j * phase)[:, None]


def _check_target_index(cfg: ScenarioConfig, k: int):
    if not 1 <= k <= cfg.n_targets:
        raise IndexError(f"target index {k} out of range 1..{cfg.n_targets}")


def build_direct_target_channel(cfg: ScenarioConfig, k: int) -> np.ndarray:
    """Round-trip radar-target-radar channel beta_k a_R a_T^T (plain transpose)."""
    _check_target_index(cfg, k)
    a = steering_vector(cfg.target_angles_deg[k - 1], cfg.n_tx, cfg.element_spacing_radar)
    return complex(cfg.target_reflectivity[k - 1]) * (a @ a.T)


def build_ed_channel(cfg: ScenarioConfig, k: int) -> np.ndarray:
    """Radar-to-eavesdropper channel alpha_k a_E(view) a_T(target)^T."""
    _check_target_index(cfg, k)
    a_e = steering_vector(cfg.ed_view_angles_deg[k - 1], cfg.n_ed, cfg.element_spacing_ed)
    a_t = steering_vector(cfg.target_angles_deg[k - 1], cfg.n_tx, cfg.element_spacing_radar)
    return complex(cfg.ed_path_loss[k - 1]) * (a_e @ a_t.T)


def build_composite_indirect_channel(ch: ChannelSet, phi: PhaseVector, k: int,
                                     indirect_targets=None) -> np.ndarray:
    """Radar-surface-target-surface-radar channel for indirect target k.

    Exploits the rank-1 middle factor: the result is an outer product of the
    two single-bounce legs, so no n_irs x n_irs product is ever formed.
    """
    if not 1 <= k <= len(ch.h_ti):
        raise IndexError(f"target index {k} out of range")
    if indirect_targets is not None and k not in indirect_targets:
        raise WrongPartition(f"target {k} is not in the indirect set")
    p = phi.phasors()
    left = ch.h_ir @ (p * ch.h_ti[k - 1][:, 0])          # n_tx
    right = (ch.h_it[k - 1][0, :] * p) @ ch.h_ri          # n_tx
    return np.outer(left, right)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. circularly-symmetric complex Gaussian, unit variance per entry."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_channels(cfg: ScenarioConfig) -> ChannelSet:
    """Draw one channel realization; deterministic given cfg.rng_seed.

    Geometric channels (h_rtr, g_ed) are seed-independent; all remaining
    links are Rayleigh. The draw order is fixed and part of the contract.
    """
    rng = np.random.default_rng(cfg.rng_seed)
    kk, ll, n = cfg.n_targets, cfg.n_users, cfg.n_irs
    h_rtr = tuple(build_direct_target_channel(cfg, k) for k in range(1, kk + 1))
    g_ed = tuple(build_ed_channel(cfg, k) for k in range(1, kk + 1))
    f_user = tuple(_complex_gaussian(rng, (cfg.n_rx, cfg.n_tx)) for _ in range(ll))
    h_ri = _complex_gaussian(rng, (n, cfg.n_tx))
    h_ir = _complex_gaussian(rng, (cfg.n_tx, n))
    h_ti = tuple(_complex_gaussian(rng, (n, 1)) for _ in range(kk))
    h_it = tuple(_complex_gaussian(rng, (1, n)) for _ in range(kk))
    h_ie = tuple(_complex_gaussian(rng, (cfg.n_ed, n)) for _ in range(kk))
    h_iu = tuple(_complex_gaussian(rng, (cfg.n_rx, n)) for _ in range(ll))
    return ChannelSet(h_rtr=h_rtr, g_ed=g_ed, f_user=f_user, h_ri=h_ri,
                      h_ir=h_ir, h_ti=h_ti, h_it=h_it, h_ie=h_ie, h_iu=h_iu)


def zero_irs_channels(ch: ChannelSet) -> ChannelSet:
    """Ablation helper: remove the reflecting surface by zeroing its links.

    The Rayleigh draws for the remaining channels are untouched, so an
    ablated scenario shares its user/eavesdropper channels bit-exactly with
    the full scenario at the same seed.
    """
    return ChannelSet(
        h_rtr=ch.h_rtr, g_ed=ch.g_ed, f_user=ch.f_user,
        h_ri=np.zeros_like(ch.h_ri), h_ir=np.zeros_like(ch.h_ir),
        h_ti=tuple(np.zeros_like(m) for m in ch.h_ti),
        h_it=tuple(np.zeros_like(m) for m in ch.h_it),
        h_ie=tuple(np.zeros_like(m) for m in ch.h_ie),
        h_iu=tuple(np.zeros_like(m) for m in ch.h_iu),
    )
