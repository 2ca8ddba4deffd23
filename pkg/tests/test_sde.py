"""Stochastic integrator, noise process, and trajectory estimators."""

import math
import warnings

import numpy as np
import pytest
from scipy.signal import welch

from nmpo.errors import (
    InsufficientSamples,
    NonStationary,
    ParameterError,
    StepOverflow,
)
from nmpo.meanfield import steady_state
from nmpo.model import SystemParams
from nmpo.sde import (
    SimConfig,
    estimate_order_parameters,
    estimate_quadrature_variances,
    integrate_trajectory,
    ou_noise_step,
)
from nmpo.spectra import integrate_variances, psd, variances_u1xz2


def params(mu, kappa, gammaP=20.0, nth=0.0, nth_p=None):
    return SystemParams.from_kappa(
        gamma0=1.0, gammaP=gammaP, kappa=kappa, g=0.01, mu=mu,
        n_th_i=nth, n_th_s=nth, n_th_P=nth if nth_p is None else nth_p,
    )


def config(**kw):
    base = dict(dt=0.005, t_burn=40.0, t_sample=50.0, n_traj=4, seed=1)
    base.update(kw)
    return SimConfig(**base)


# === configuration validation =================================================


def test_config_field_validation_collects_violations():
    with pytest.raises(ParameterError) as exc:
        SimConfig(dt=-1.0, t_burn=-2.0, t_sample=0.0, n_traj=0, seed=0,
                  scheme="rk4", record_stride=0, record_fields=("A_i", "bogus"))
    fields = {f for f, _ in exc.value.violations}
    assert {"dt", "t_burn", "t_sample", "n_traj", "scheme",
            "record_stride", "record_fields"} <= fields


def test_config_step_and_burn_floors():
    p = params(0.5, 1.0)
    with pytest.raises(ParameterError) as exc:
        config(dt=0.01).check_against(p)
    assert exc.value.violations[0][0] == "dt"
    with pytest.raises(ParameterError) as exc:
        config(t_burn=5.0).check_against(p)
    assert exc.value.violations[0][0] == "t_burn"
    # exactly at both floors is accepted
    config(dt=0.005, t_burn=20.0).check_against(p)
    # memory time enters both floors
    slow = params(0.5, 0.05)  # tau_r = 20
    with pytest.raises(ParameterError):
        config(dt=0.005, t_burn=40.0).check_against(slow)
    config(dt=0.005, t_burn=400.0).check_against(slow)


# === colored-noise update =====================================================


def test_ou_step_continuity_in_dt():
    rng = np.random.default_rng(0)
    f = np.array([1.0 + 2.0j, -0.5j])
    out = ou_noise_step(f, 1e-12, 1.0, 3.0, rng)
    assert np.allclose(out, f, rtol=0, atol=1e-5)


def test_ou_step_reaches_stationary_variance_in_one_long_step():
    rng = np.random.default_rng(1)
    f = np.zeros(200_000, complex)
    out = ou_noise_step(f, 50.0, 1.0, 2.5, rng)
    # total complex variance -> strength
    assert out.real.var() + out.imag.var() == pytest.approx(2.5, rel=0.02)
    assert abs(out.mean()) < 0.02


def test_ou_step_autocorrelation_decay():
    rng = np.random.default_rng(2)
    tau, strength, dt = 0.7, 1.8, 0.1
    f = ou_noise_step(np.zeros(100_000, complex), 100.0, tau, strength, rng)
    f0 = f.copy()
    for k in range(1, 15):
        f = ou_noise_step(f, dt, tau, strength, rng)
        corr = np.mean(np.conj(f0) * f).real
        expect = strength * math.exp(-k * dt / tau)
        assert corr == pytest.approx(expect, abs=3 * strength / math.sqrt(f.size))


def test_ou_step_validation_and_scalar_input():
    rng = np.random.default_rng(0)
    with pytest.raises(ParameterError):
        ou_noise_step(0j, 0.1, 0.0, 1.0, rng)
    with pytest.raises(ParameterError):
        ou_noise_step(0j, 0.1, -1.0, 1.0, rng)
    with pytest.raises(ParameterError):
        ou_noise_step(0j, 0.1, 1.0, -0.5, rng)
    out = ou_noise_step(1.0, 0.1, 1.0, 0.0, rng)
    assert np.iscomplexobj(out)
    assert complex(out) == pytest.approx(math.exp(-0.1), rel=1e-12)


# === integrator basics ========================================================


def test_noise_free_decay_below_threshold():
    p = params(0.5, 1.0)
    tr = integrate_trajectory(p, config(t_burn=20.0, t_sample=10.0, noise=False))
    assert np.max(np.abs(tr.A_i)) < 1e-5
    assert np.max(np.abs(tr.A_s)) < 1e-5
    # pump settles on its driven value i*mu
    assert np.max(np.abs(tr.A_P - 0.5j)) < 1e-8


def test_recording_grid_and_shapes():
    p = params(0.5, 1.0)
    cfg = config(t_sample=10.0, n_traj=3, record_stride=4)
    tr = integrate_trajectory(p, cfg)
    n_expect = int(round(10.0 / 0.005)) // 4
    assert tr.A_i.shape == (n_expect, 3)
    assert tr.t[0] == pytest.approx(4 * 0.005)
    assert np.allclose(np.diff(tr.t), 4 * 0.005)
    assert np.all(np.isfinite(tr.A_i.real)) and np.all(np.isfinite(tr.A_P.imag))


def test_record_field_subsets():
    p = params(0.5, 1.0)
    tr = integrate_trajectory(p, config(t_sample=5.0, record_fields=("A_i", "f_i")))
    assert tr.A_i is not None and tr.f_i is not None
    assert tr.A_s is None and tr.A_P is None and tr.c_i is None


def test_initial_state_handling():
    p = params(0.5, 1.0)
    cfg = config(t_burn=20.0, t_sample=5.0, n_traj=3, noise=False)
    tr = integrate_trajectory(p, cfg, initial={"A_i": 0.5j, "A_s": np.array([0.1, 0.2, 0.3]),
                                               "c_i": 0.0, "f_i": 0.0})
    assert tr.A_i.shape[1] == 3
    with pytest.raises(ParameterError):
        integrate_trajectory(p, cfg, initial={"A_s": np.array([0.1, 0.2])})
    with pytest.raises(ParameterError):
        integrate_trajectory(p, cfg, initial={"A_q": 1.0})


def test_markovian_rejects_memory_fields():
    p = params(0.5, math.inf)
    cfg = config(t_burn=20.0, t_sample=5.0)
    with pytest.raises(ParameterError):
        integrate_trajectory(p, cfg, initial={"c_i": 1.0})
    with pytest.raises(ParameterError):
        integrate_trajectory(p, SimConfig(dt=0.005, t_burn=20.0, t_sample=5.0, n_traj=2,
                                          seed=0, record_fields=("A_i", "f_s")))
    tr = integrate_trajectory(p, cfg)
    assert tr.c_i is None and tr.f_s is None
    assert np.all(np.isfinite(tr.A_i.real))


def test_seed_determinism_is_bit_exact():
    p = params(0.8, 0.5, nth=0.2)
    tr1 = integrate_trajectory(p, config(t_sample=5.0, seed=42))
    tr2 = integrate_trajectory(p, config(t_sample=5.0, seed=42))
    assert np.array_equal(tr1.A_i, tr2.A_i)
    assert np.array_equal(tr1.A_P, tr2.A_P)
    tr3 = integrate_trajectory(p, config(t_sample=5.0, seed=43))
    assert not np.array_equal(tr3.A_i, tr1.A_i)


def test_step_overflow_reported():
    # drive strong enough that the parametric gain outruns the step size
    p = params(2000.0, 1.0)
    cfg = config(t_burn=20.0, t_sample=10.0, noise=False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        with pytest.raises(StepOverflow):
            integrate_trajectory(p, cfg, initial={"A_i": 1.0, "A_s": 1.0})


def test_pump_noise_defaults_by_phase():
    below = integrate_trajectory(params(0.5, 1.0, nth=1.0), config(t_sample=20.0, n_traj=8))
    # pump force off below threshold: A_P pinned to i*mu up to the tiny
    # feedback through the signal-idler product
    assert np.max(np.abs(below.A_P - 0.5j)) < 1e-3
    above = integrate_trajectory(params(2.0, 1.0, nth=1.0), config(t_sample=20.0, n_traj=8))
    assert np.std(above.A_P.real) > 1e-4


# === order-parameter estimation ===============================================


def test_order_estimator_sample_requirements():
    p = params(0.5, 1.0)
    single = integrate_trajectory(p, config(t_sample=10.0, n_traj=1))
    with pytest.raises(InsufficientSamples):
        estimate_order_parameters(single)
    short = integrate_trajectory(p, config(t_sample=0.05, t_burn=20.0, n_traj=4))
    with pytest.raises(InsufficientSamples):
        estimate_order_parameters(short)
    ok = integrate_trajectory(p, config(t_sample=10.0, n_traj=4))
    with pytest.raises(InsufficientSamples):
        estimate_order_parameters(ok, window=9.0)


def test_order_parameters_static_broken_phase():
    p = params(2.0, 1.0)
    tr = integrate_trajectory(p, config(t_sample=150.0, n_traj=48, record_stride=10, seed=11))
    est = estimate_order_parameters(tr)
    assert est.amp_mean == pytest.approx(1.0, rel=0.02)
    assert not est.branch_locked
    assert abs(est.delta_est) <= 2.0 * est.delta_se
    assert est.n_traj == 48


def test_order_parameters_rotating_phase():
    p = params(1.0, 0.2)
    cfg = config(t_burn=120.0, t_sample=200.0, n_traj=64, record_stride=10, seed=12)
    est = estimate_order_parameters(integrate_trajectory(p, cfg))
    assert est.branch_locked
    assert est.delta_est == pytest.approx(0.2449489743, rel=0.02)
    assert est.amp_mean == pytest.approx(math.sqrt(0.6), rel=0.03)
    assert est.var_phi_dot > 0
    assert est.window == pytest.approx(5.0)


# === quadrature-variance estimation ===========================================


def test_quadrature_estimator_frame_validation():
    p = params(0.5, 1.0)
    tr = integrate_trajectory(p, config(t_sample=10.0))
    with pytest.raises(ParameterError):
        estimate_quadrature_variances(tr, frame="lab")


def test_quadrature_variances_thermal():
    # window >> correlation time: per-trajectory mean subtraction biases the
    # sample variance by ~2 tau_c / T, so T = 300 keeps it nearer 1%
    p = params(0.0, 1.0, nth=0.5)
    tr = integrate_trajectory(p, config(t_sample=300.0, n_traj=64, record_stride=4, seed=21))
    rep = estimate_quadrature_variances(tr)
    for lab, val in rep.normalized().items():
        assert val == pytest.approx(1.0, rel=0.05)
    assert rep.stderr is not None and max(rep.stderr.values()) < 0.05
    assert not any(rep.divergent.values())


def test_quadrature_variances_match_theory_above_threshold():
    p = params(2.0, 1.0)
    tr = integrate_trajectory(p, config(t_sample=200.0, n_traj=48, record_stride=4, seed=22))
    rep = estimate_quadrature_variances(tr)
    th = integrate_variances(psd(p, steady_state(p), n_grid=64))
    assert math.isinf(rep.sigma_x_minus) and rep.divergent["x-"]
    assert rep.sigma_x_plus == pytest.approx(th.sigma_x_plus, rel=0.10)
    assert rep.sigma_y_plus == pytest.approx(th.sigma_y_plus, rel=0.10)
    assert rep.sigma_y_minus == pytest.approx(th.sigma_y_minus, rel=0.10)


def test_quadrature_variances_corotating_frame():
    p = params(1.0, 0.2)
    cfg = config(t_burn=120.0, t_sample=400.0, n_traj=48, record_stride=4, seed=23)
    rep = estimate_quadrature_variances(integrate_trajectory(p, cfg), frame="corotating")
    th = variances_u1xz2(p)
    assert math.isinf(rep.sigma_x_minus) and rep.divergent["x-"]
    assert rep.sigma_x_plus == pytest.approx(th.sigma_x_plus, rel=0.10)
    assert rep.sigma_y_plus == pytest.approx(th.sigma_y_plus, rel=0.10)
    assert rep.sigma_y_minus == pytest.approx(th.sigma_y_minus, rel=0.10)


def test_quadrature_estimator_flags_transients():
    p = params(0.95, 1.0)
    cfg = config(t_burn=20.0, t_sample=80.0, n_traj=16, seed=24)
    tr = integrate_trajectory(p, cfg, initial={"A_i": 1.0})
    with pytest.raises(NonStationary):
        estimate_quadrature_variances(tr)


# === statistical physics properties ===========================================


def test_z2_ergodicity_breaking():
    # individual trajectories keep one rotation sense; the ensemble samples
    # both branches symmetrically
    p = params(1.0, 0.2, nth=0.01)
    cfg = config(t_burn=120.0, t_sample=600.0, n_traj=16, record_stride=20, seed=31)
    tr = integrate_trajectory(p, cfg)
    phi_d = np.unwrap(np.angle(tr.A_i) - np.angle(tr.A_s), axis=0)
    slopes = np.polyfit(tr.t, phi_d, 1)[0]
    assert np.any(slopes > 0) and np.any(slopes < 0)
    assert abs(slopes.mean()) < 0.6 * 2 * 0.2449
    # windowed slopes never change sign within a trajectory
    n_win = 12
    edges = np.linspace(0, phi_d.shape[0], n_win + 1, dtype=int)
    for j in range(tr.A_i.shape[1]):
        signs = []
        for a, b in zip(edges[:-1], edges[1:]):
            signs.append(np.sign(np.polyfit(tr.t[a:b], phi_d[a:b, j], 1)[0]))
        assert len(set(signs)) == 1


def test_scheme_consistency():
    p = params(0.5, 1.0)
    runs = {
        "heun": config(t_sample=200.0, n_traj=150, record_stride=4, seed=7),
        "euler": config(t_sample=200.0, n_traj=150, record_stride=4, seed=8,
                        scheme="euler-maruyama"),
        "fine": config(dt=0.0025, t_sample=200.0, n_traj=150, record_stride=8, seed=9),
    }
    reports = {k: estimate_quadrature_variances(integrate_trajectory(p, c))
               for k, c in runs.items()}
    vals = {k: r.sigma_x_plus for k, r in reports.items()}
    errs = {k: r.stderr["x+"] for k, r in reports.items()}
    names = list(runs)
    for a in names:
        for b in names:
            if a < b:
                assert abs(vals[a] - vals[b]) <= 3.0 * math.hypot(errs[a], errs[b])
    assert vals["heun"] == pytest.approx(2 * 1.0 / (1.5 * 2.5), rel=0.05)


def test_welch_spectrum_matches_linear_theory():
    p = params(0.5, 1.0)
    cfg = config(t_sample=300.0, n_traj=250, record_stride=2, seed=6,
                 record_fields=("A_i", "A_s"))
    tr = integrate_trajectory(p, cfg)
    xp = (tr.A_i.real + tr.A_s.real) / math.sqrt(2.0)
    fs = 1.0 / (0.005 * 2)
    freq, pxx = welch(xp, fs=fs, nperseg=4096, axis=0, detrend=False)
    om = 2.0 * math.pi * freq
    s_num = pxx.mean(axis=1) / (4.0 * math.pi)  # one-sided per-Hz -> two-sided per-rad/s
    sel = (om > 0.05) & (om <= 5.0)
    sd = psd(p, steady_state(p), omega_grid=om[sel])
    s_th = np.array([m[0, 0].real for m in sd.matrices])
    rel = np.abs(s_num[sel] / s_th - 1.0)
    assert rel.max() < 0.10
