import numpy as np

from dfrc_secrecy.linalg import logdet_hpd
from dfrc_secrecy.rates import (PrecoderPair, eavesdropper_rate, effective_channels,
                                user_rate)
from dfrc_secrecy.scenario import PhaseVector, sample_channels
from dfrc_secrecy.surrogate import (mse_matrix_ed, mse_matrix_user, pair_quadratic,
                                    surrogate_secrecy, update_auxiliaries)
from tests.test_rates import rand_pre, two_target_cfg


def setup_instance(seed=0):
    cfg = two_target_cfg(rng_seed=seed)
    ch = sample_channels(cfg)
    phi = PhaseVector(np.zeros(cfg.n_irs))
    rng = np.random.default_rng(seed + 100)
    pre = rand_pre(rng, cfg.n_tx, cfg.n_targets)
    # keep the power moderate so rates stay in a sane range
    pre = PrecoderPair(w=pre.w / np.linalg.norm(pre.w), b=pre.b / np.linalg.norm(pre.b))
    return cfg, ch, phi, pre


# --- MSE matrices ---

def test_mse_user_zero_receiver():
    cfg, ch, phi, pre = setup_instance()
    e = mse_matrix_user(np.zeros((4, 2)), ch.f_user[0], pre, 1.0)
    assert np.allclose(e, np.eye(2))


def test_mse_user_zero_precoders():
    cfg, ch, phi, _ = setup_instance()
    rng = np.random.default_rng(31)
    u = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    zero = PrecoderPair(w=np.zeros((4, 2)), b=np.zeros((4, 2)))
    e = mse_matrix_user(u, ch.f_user[0], zero, 2.0)
    assert np.allclose(e, np.eye(2) + 2.0 * u.conj().T @ u)


def test_mse_user_term_oracle():
    cfg, ch, phi, pre = setup_instance(1)
    rng = np.random.default_rng(32)
    u = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    f = ch.f_user[1]
    e = mse_matrix_user(u, f, pre, 1.5)
    res = np.eye(2) - u.conj().T @ f @ pre.w
    expected = res @ res.conj().T + u.conj().T @ (
        1.5 * np.eye(4) + f @ pre.b @ pre.b.conj().T @ f.conj().T) @ u
    assert np.max(np.abs(e - expected)) < 1e-12
    assert np.max(np.abs(e - e.conj().T)) < 1e-12


def test_mse_ed_zero_receiver():
    cfg, ch, phi, pre = setup_instance()
    e = mse_matrix_ed(np.zeros((4, 2)), ch.g_ed[0], pre.b, 1.0)
    assert np.allclose(e, np.eye(2))


def test_mse_ed_zero_noise_precoder():
    cfg, ch, phi, _ = setup_instance()
    rng = np.random.default_rng(33)
    u = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    e = mse_matrix_ed(u, ch.g_ed[0], np.zeros((4, 2)), 1.0)
    assert np.allclose(e, np.eye(2) + u.conj().T @ u)


def test_mse_ed_term_oracle():
    cfg, ch, phi, pre = setup_instance(2)
    rng = np.random.default_rng(34)
    u = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    g = ch.g_ed[1]
    sigma_e = np.sqrt(1.0)
    e = mse_matrix_ed(u, g, pre.b, sigma_e)
    res = np.eye(2) - u.conj().T @ g @ pre.b / sigma_e
    expected = res @ res.conj().T + u.conj().T @ u
    assert np.max(np.abs(e - expected)) < 1e-12


# --- closed-form auxiliary updates ---

def test_update_zero_information_precoder():
    cfg, ch, phi, pre = setup_instance()
    zero_w = PrecoderPair(w=np.zeros_like(pre.w), b=pre.b)
    aux = update_auxiliaries(ch, phi, zero_w, cfg)
    for pair in aux.pairs.values():
        assert np.all(pair.u_b == 0)
        assert np.allclose(pair.w_b, np.eye(2))


def test_update_zero_noise_precoder():
    cfg, ch, phi, pre = setup_instance()
    zero_b = PrecoderPair(w=pre.w, b=np.zeros_like(pre.b))
    aux = update_auxiliaries(ch, phi, zero_b, cfg)
    for pair in aux.pairs.values():
        assert np.all(pair.u_e == 0)
        assert np.allclose(pair.w_e, np.eye(2))


def scalar_cfg():
    from dfrc_secrecy.scenario import ScenarioConfig
    return ScenarioConfig(
        n_tx=1, n_rx=1, n_ed=1, n_irs=1, n_users=1, n_targets=1,
        target_angles_deg=(0.0,), ed_view_angles_deg=(0.0,),
        target_reflectivity=(1.0,), ed_path_loss=(1.0,),
        noise_radar=1.0, noise_ed=(1.0,), noise_user=(1.0,),
        power_budget=4.0, sinr_thresholds=(0.0,),
        direct_targets=(1,), indirect_targets=())


def scalar_channels(cfg, f=1.0, g=1.0):
    ch = sample_channels(cfg)
    return type(ch)(h_rtr=ch.h_rtr, g_ed=(np.array([[g]], dtype=complex),),
                    f_user=(np.array([[f]], dtype=complex),), h_ri=ch.h_ri,
                    h_ir=ch.h_ir, h_ti=ch.h_ti, h_it=ch.h_it, h_ie=ch.h_ie,
                    h_iu=ch.h_iu)


def test_update_scalar_hand_values():
    cfg = scalar_cfg()
    ch = scalar_channels(cfg)
    phi = PhaseVector(np.zeros(1))
    pre = PrecoderPair(w=np.array([[1.0]]), b=np.array([[1.0]]))
    aux = update_auxiliaries(ch, phi, pre, cfg)
    pair = aux.pair(1, 1)
    assert abs(pair.u_b[0, 0] - 1.0 / 3.0) < 1e-12
    assert abs(pair.w_b[0, 0] - 1.5) < 1e-12


def test_update_is_fixed_point():
    cfg, ch, phi, pre = setup_instance(3)
    a1 = update_auxiliaries(ch, phi, pre, cfg)
    a2 = update_auxiliaries(ch, phi, pre, cfg)
    for key in a1.pairs:
        for name in ("u_b", "w_b", "u_e", "w_e", "w_z"):
            assert np.max(np.abs(getattr(a1.pair(*key), name)
                                 - getattr(a2.pair(*key), name))) < 1e-12


def test_mmse_identity():
    # -log2 det E_b at the optimal receiver recovers the user rate
    for seed in range(10):
        cfg, ch, phi, pre = setup_instance(seed)
        aux = update_auxiliaries(ch, phi, pre, cfg)
        for l in (1, 2):
            e_b = mse_matrix_user(aux.pair(l, 1).u_b, ch.f_user[l - 1], pre, 1.0)
            assert abs(-logdet_hpd(e_b) - user_rate(ch.f_user[l - 1], pre, 1.0)) < 1e-7
        for k in (1, 2):
            e_e = mse_matrix_ed(aux.pair(1, k).u_e, ch.g_ed[k - 1], pre.b, 1.0)
            gb = ch.g_ed[k - 1] @ pre.b
            leak = float(np.log2(np.linalg.det(np.eye(4) + gb @ gb.conj().T)).real)
            assert abs(-logdet_hpd(e_e) - leak) < 1e-7


def test_surrogate_tight_at_optimal_auxiliaries():
    for seed in range(10):
        cfg, ch, phi, pre = setup_instance(seed)
        aux = update_auxiliaries(ch, phi, pre, cfg)
        for l in (1, 2):
            for k in (1, 2):
                s = surrogate_secrecy(aux, l, k, ch, phi, pre, cfg)
                gap = (user_rate(ch.f_user[l - 1], pre, 1.0)
                       - eavesdropper_rate(ch.g_ed[k - 1], pre, 1.0))
                assert abs(s - gap) < 1e-7, (seed, l, k)


def test_surrogate_zero_precoders():
    cfg, ch, phi, _ = setup_instance()
    zero = PrecoderPair(w=np.zeros((4, 2)), b=np.zeros((4, 2)))
    aux = update_auxiliaries(ch, phi, zero, cfg)
    assert abs(surrogate_secrecy(aux, 1, 1, ch, phi, zero, cfg)) < 1e-9


def test_block_optimality_of_closed_forms():
    # random perturbations of any auxiliary block never increase the surrogate
    cfg, ch, phi, pre = setup_instance(4)
    aux = update_auxiliaries(ch, phi, pre, cfg)
    base = surrogate_secrecy(aux, 1, 1, ch, phi, pre, cfg)
    pair = aux.pair(1, 1)
    rng = np.random.default_rng(40)
    import dataclasses
    for _ in range(100):
        name = ("u_b", "u_e")[rng.integers(2)]
        mat = getattr(pair, name)
        bump = 1e-3 * (rng.standard_normal(mat.shape) + 1j * rng.standard_normal(mat.shape))
        perturbed = dataclasses.replace(pair, **{name: mat + bump})
        aux.pairs[(1, 1)] = perturbed
        assert surrogate_secrecy(aux, 1, 1, ch, phi, pre, cfg) <= base + 1e-10
    aux.pairs[(1, 1)] = pair


def test_surrogate_concave_in_precoders():
    cfg, ch, phi, pre = setup_instance(5)
    aux = update_auxiliaries(ch, phi, pre, cfg)
    rng = np.random.default_rng(41)
    for _ in range(20):
        x, y = rand_pre(rng, 4, 2), rand_pre(rng, 4, 2)
        mid = PrecoderPair(w=0.5 * (x.w + y.w), b=0.5 * (x.b + y.b))
        f = lambda p: surrogate_secrecy(aux, 2, 1, ch, phi, p, cfg)
        assert f(mid) >= 0.5 * (f(x) + f(y)) - 1e-9


def test_surrogate_lower_bounds_true_gap():
    # at non-optimal auxiliaries the surrogate stays below the rate gap
    cfg, ch, phi, pre = setup_instance(6)
    aux = update_auxiliaries(ch, phi, pre, cfg)
    rng = np.random.default_rng(42)
    other = rand_pre(rng, 4, 2)
    other = PrecoderPair(w=other.w / np.linalg.norm(other.w),
                         b=other.b / np.linalg.norm(other.b))
    for l in (1, 2):
        for k in (1, 2):
            s = surrogate_secrecy(aux, l, k, ch, phi, other, cfg)
            gap = (user_rate(ch.f_user[l - 1], other, 1.0)
                   - eavesdropper_rate(ch.g_ed[k - 1], other, 1.0))
            assert s <= gap + 1e-9


def test_pair_quadratic_matches_surrogate_value():
    cfg, ch, phi, pre = setup_instance(7)
    aux = update_auxiliaries(ch, phi, pre, cfg)
    f_list, g_list = effective_channels(ch, phi, cfg)
    quad = pair_quadratic(aux.pair(2, 2), f_list[1], g_list[1], 1.0, 1.0)
    assert abs(quad.value_bits(pre.w, pre.b)
               - surrogate_secrecy(aux, 2, 2, ch, phi, pre, cfg)) < 1e-12
