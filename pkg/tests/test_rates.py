import numpy as np

from dfrc_secrecy.rates import (PrecoderPair, eavesdropper_rate, effective_channels,
                                secrecy_objective, sinr_direct, sinr_indirect,
                                user_rate)
from dfrc_secrecy.scenario import PhaseVector, sample_channels
from tests.test_scenario import make_cfg


def rand_pre(rng, n, k):
    w = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    b = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return PrecoderPair(w=w, b=b)


def test_sinr_zero_beamformers():
    h = np.eye(3, dtype=complex)
    assert sinr_direct(h, np.zeros(3), np.zeros(3), 1.0) == 0.0


def test_sinr_unit_norms():
    h = np.eye(2, dtype=complex)
    assert abs(sinr_direct(h, np.array([1, 0]), np.array([0, 1]), 1.0) - 2.0) < 1e-15


def test_sinr_trace_form_oracle():
    rng = np.random.default_rng(20)
    for _ in range(20):
        h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        s2 = float(rng.uniform(0.5, 2.0))
        expected = (np.trace(h @ np.outer(w, w.conj()) @ h.conj().T)
                    + np.trace(h @ np.outer(b, b.conj()) @ h.conj().T)).real / s2
        assert abs(sinr_direct(h, w, b, s2) - expected) < 1e-10
        assert abs(sinr_indirect(h, w, b, s2) - expected) < 1e-10


def test_sinr_indirect_same_formula():
    rng = np.random.default_rng(21)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert sinr_indirect(h, w, b, 1.3) == sinr_direct(h, w, b, 1.3)


def explicit_rate(h, pre, sigma2):
    noise = sigma2 * np.eye(h.shape[0]) + h @ pre.b @ pre.b.conj().T @ h.conj().T
    sig = h @ pre.w @ pre.w.conj().T @ h.conj().T
    return float(np.log2(np.linalg.det(np.eye(h.shape[0])
                                       + np.linalg.inv(noise) @ sig)).real)


def test_eavesdropper_rate_no_information():
    rng = np.random.default_rng(22)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    pre = PrecoderPair(w=np.zeros((4, 2)), b=rng.standard_normal((4, 2)) + 0j)
    assert eavesdropper_rate(g, pre, 1.0) == 0.0


def test_eavesdropper_rate_scalar():
    pre = PrecoderPair(w=np.array([[1.0]]), b=np.array([[1.0]]))
    r = eavesdropper_rate(np.array([[1.0]]), pre, 1.0)
    assert abs(r - np.log2(1.5)) < 1e-12


def test_rate_explicit_inverse_oracle():
    rng = np.random.default_rng(23)
    for _ in range(20):
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        pre = rand_pre(rng, 4, 2)
        assert abs(eavesdropper_rate(h, pre, 1.0) - explicit_rate(h, pre, 1.0)) < 1e-9
        assert abs(user_rate(h, pre, 2.0) - explicit_rate(h, pre, 2.0)) < 1e-9


def test_user_rate_equals_ed_rate_same_inputs():
    rng = np.random.default_rng(24)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    pre = rand_pre(rng, 4, 2)
    assert user_rate(h, pre, 1.0) == eavesdropper_rate(h, pre, 1.0)


def test_rates_nonnegative():
    rng = np.random.default_rng(25)
    for _ in range(20):
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        pre = rand_pre(rng, 4, 2)
        assert user_rate(h, pre, 1.0) >= 0.0
        assert eavesdropper_rate(h, pre, 1.0) >= 0.0


def test_user_rate_monotone_information_loading():
    rng = np.random.default_rng(26)
    for _ in range(10):
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        pre = rand_pre(rng, 4, 2)
        prev = -np.inf
        for c in (1.0, 2.0, 4.0):
            r = user_rate(h, PrecoderPair(w=c * pre.w, b=pre.b), 1.0)
            assert r >= prev - 1e-12
            prev = r


def two_target_cfg(**overrides):
    base = dict(n_targets=2, target_angles_deg=(72.0, 78.0),
                ed_view_angles_deg=(-85.0, -88.0),
                target_reflectivity=(0.1, 0.1), ed_path_loss=(0.1, 0.1),
                noise_ed=(1.0, 1.0), sinr_thresholds=(0.1, 0.1),
                direct_targets=(1, 2), indirect_targets=())
    base.update(overrides)
    return make_cfg(**base)


def test_secrecy_zero_information():
    cfg = two_target_cfg()
    ch = sample_channels(cfg)
    phi = PhaseVector(np.zeros(cfg.n_irs))
    pre = PrecoderPair(w=np.zeros((4, 2)), b=np.zeros((4, 2)))
    assert secrecy_objective(ch, phi, pre, cfg) == 0.0


def test_secrecy_clamps_negative_gap():
    # single user, single ED, ED channel stronger than user channel
    cfg = make_cfg(n_users=1, noise_user=(1.0,))
    ch = sample_channels(cfg)
    strong_g = tuple(10.0 * np.eye(4, dtype=complex) for _ in ch.g_ed)
    weak_f = tuple(0.1 * np.eye(4, dtype=complex) for _ in ch.f_user)
    ch = type(ch)(h_rtr=ch.h_rtr, g_ed=strong_g, f_user=weak_f, h_ri=ch.h_ri,
                  h_ir=ch.h_ir, h_ti=ch.h_ti, h_it=ch.h_it, h_ie=ch.h_ie,
                  h_iu=ch.h_iu)
    phi = PhaseVector(np.zeros(cfg.n_irs))
    rng = np.random.default_rng(27)
    pre = rand_pre(rng, 4, 1)
    assert secrecy_objective(ch, phi, pre, cfg) == 0.0


def test_secrecy_pair_enumeration_oracle():
    cfg = two_target_cfg()
    rng = np.random.default_rng(28)
    for seed in range(5):
        ch = sample_channels(cfg.with_overrides(rng_seed=seed))
        phi = PhaseVector(rng.uniform(0, np.pi, cfg.n_irs))
        pre = rand_pre(rng, 4, 2)
        f_list, g_list = effective_channels(ch, phi, cfg)
        gaps = [user_rate(f, pre, 1.0) - eavesdropper_rate(g, pre, 1.0)
                for f in f_list for g in g_list]
        assert abs(secrecy_objective(ch, phi, pre, cfg) - max(min(gaps), 0.0)) < 1e-12


def test_secrecy_permutation_invariance():
    cfg = two_target_cfg()
    ch = sample_channels(cfg)
    phi = PhaseVector(np.zeros(cfg.n_irs))
    rng = np.random.default_rng(29)
    pre = rand_pre(rng, 4, 2)
    swapped = type(ch)(h_rtr=ch.h_rtr[::-1], g_ed=ch.g_ed[::-1],
                       f_user=ch.f_user[::-1], h_ri=ch.h_ri, h_ir=ch.h_ir,
                       h_ti=ch.h_ti[::-1], h_it=ch.h_it[::-1],
                       h_ie=ch.h_ie[::-1], h_iu=ch.h_iu[::-1])
    assert secrecy_objective(swapped, phi, pre, cfg) == secrecy_objective(ch, phi, pre, cfg)


def test_secrecy_constant_in_phases_without_comm_paths():
    cfg = two_target_cfg()  # use_irs_comm_paths defaults to False
    ch = sample_channels(cfg)
    rng = np.random.default_rng(30)
    pre = rand_pre(rng, 4, 2)
    vals = {secrecy_objective(ch, PhaseVector(rng.uniform(0, np.pi, cfg.n_irs)),
                              pre, cfg) for _ in range(5)}
    assert len(vals) == 1


def test_effective_channels_fold_irs_legs():
    cfg = two_target_cfg(use_irs_comm_paths=True)
    ch = sample_channels(cfg)
    phi = PhaseVector(np.linspace(0, np.pi, cfg.n_irs))
    f_list, g_list = effective_channels(ch, phi, cfg)
    mid = phi.reflection() @ ch.h_ri
    assert np.allclose(f_list[0], ch.f_user[0] + ch.h_iu[0] @ mid)
    assert np.allclose(g_list[1], ch.g_ed[1] + ch.h_ie[1] @ mid)
