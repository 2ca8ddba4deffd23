"""Parameter space, validation, and memory-kernel conventions."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from nmpo.errors import (
    NegativeOccupancy,
    NonPositiveRate,
    ParameterError,
    PumpNotFast,
    SlowPumpWarning,
)
from nmpo.model import (
    DeltaAtOrigin,
    MemoryKernel,
    SystemParams,
    kernel_freq,
    kernel_freq_real,
    kernel_time,
    load_params,
    parse_params_text,
    validate,
)

# === memory kernel ============================================================


def test_kernel_time_exponential_values():
    k = MemoryKernel(gamma0=1.0, tau_r=2.0)
    assert kernel_time(k, 0.0) == pytest.approx(0.5)
    assert kernel_time(k, 2.0) == pytest.approx(0.5 * math.exp(-1.0))
    assert kernel_time(k, -1.0) == 0.0


def test_kernel_time_is_causal_and_monotone():
    k = MemoryKernel(gamma0=0.7, tau_r=1.3)
    t = np.linspace(-2.0, 8.0, 301)
    vals = kernel_time(k, t)
    assert np.all(vals[t < 0] == 0.0)
    pos = vals[t >= 0]
    assert np.all(pos >= 0.0)
    assert np.all(np.diff(pos) <= 0.0)


def test_kernel_time_markovian_sentinel():
    k = MemoryKernel(gamma0=2.0, tau_r=0.0)
    at0 = kernel_time(k, 0.0)
    assert isinstance(at0, DeltaAtOrigin)
    assert at0.weight == 2.0
    assert kernel_time(k, 0.5) == 0.0
    assert kernel_time(k, -0.5) == 0.0
    assert np.all(kernel_time(k, np.array([0.1, 3.0])) == 0.0)
    with pytest.raises(ParameterError):
        kernel_time(k, np.array([0.0, 1.0]))


def test_kernel_freq_values():
    k = MemoryKernel(gamma0=1.0, tau_r=1.0)
    assert kernel_freq(k, 0.0) == 1.0 + 0.0j
    assert kernel_freq(k, 1.0) == pytest.approx(0.5 + 0.5j)
    km = MemoryKernel(gamma0=1.0, tau_r=0.0)
    assert kernel_freq(km, 7.0) == 1.0 + 0.0j
    assert kernel_freq(km, -123.0) == 1.0 + 0.0j


def test_kernel_freq_conjugate_symmetry_exact():
    k = MemoryKernel(gamma0=1.7, tau_r=0.9)
    rng = np.random.default_rng(0)
    for w in rng.uniform(-30, 30, 50):
        assert kernel_freq(k, -w) == np.conj(kernel_freq(k, w))


def test_kernel_freq_real_part():
    k = MemoryKernel(gamma0=1.0, tau_r=2.0)
    for w in (0.0, 0.3, -1.7, 10.0):
        expect = 1.0 / (1.0 + (w * 2.0) ** 2)
        assert kernel_freq_real(k, w) == pytest.approx(expect, rel=1e-14)
        assert kernel_freq(k, w).real == pytest.approx(expect, rel=1e-14)


def test_kernel_time_integral_matches_zero_frequency_weight():
    # quadrature of gamma(t) over [0, 50 tau] reproduces gamma(omega=0)
    for g0, tau in ((1.0, 1.0), (2.5, 0.3), (0.4, 4.0)):
        k = MemoryKernel(gamma0=g0, tau_r=tau)
        total, _ = quad(lambda t: kernel_time(k, t), 0.0, 50.0 * tau, limit=200)
        assert total == pytest.approx(kernel_freq(k, 0.0).real, rel=1e-8)


# === parameter validation =====================================================


def test_valid_params_derived_fields():
    p = SystemParams(gamma0=1.0, gammaP=100.0, tau_r=2.0, g=1.0, mu=0.5)
    assert p.kappa == pytest.approx(0.5)
    assert p.F_cr == pytest.approx(100.0 * 1.0 / 4.0)
    assert not p.markovian
    assert p.kernel == MemoryKernel(gamma0=1.0, tau_r=2.0)
    # round trip: kappa * tau_r * gamma0 = 1
    assert p.kappa * p.tau_r * p.gamma0 == pytest.approx(1.0, rel=1e-12)


def test_markovian_params():
    p = SystemParams(gamma0=1.0, gammaP=100.0, tau_r=0.0, g=0.01, mu=0.2)
    assert p.markovian
    assert math.isinf(p.kappa)


def test_slow_pump_rejected():
    with pytest.raises(PumpNotFast):
        SystemParams(gamma0=1.0, gammaP=5.0, tau_r=1.0, g=0.01, mu=0.0)


def test_marginal_pump_warns():
    with pytest.warns(SlowPumpWarning):
        SystemParams(gamma0=1.0, gammaP=20.0, tau_r=1.0, g=0.01, mu=0.0)


def test_negative_memory_time_rejected():
    with pytest.raises(NonPositiveRate):
        SystemParams(gamma0=1.0, gammaP=100.0, tau_r=-1.0, g=0.01, mu=0.0)


def test_negative_occupancy_rejected():
    with pytest.raises(NegativeOccupancy):
        SystemParams(gamma0=1.0, gammaP=100.0, tau_r=1.0, g=0.01, mu=0.0, n_th_i=-0.5)


def test_negative_drive_rejected():
    with pytest.raises(ParameterError):
        SystemParams(gamma0=1.0, gammaP=100.0, tau_r=1.0, g=0.01, mu=-0.1)


def test_all_violations_reported_at_once():
    with pytest.raises(ParameterError) as err:
        SystemParams(gamma0=1.0, gammaP=5.0, tau_r=1.0, g=0.01, mu=0.0, n_th_s=-1.0)
    fields = [f for f, _ in err.value.violations]
    assert "gammaP" in fields and "n_th_s" in fields


def test_validate_passthrough():
    p = SystemParams(gamma0=1.0, gammaP=100.0, tau_r=1.0, g=0.01, mu=0.3)
    assert validate(p) is p


def test_from_kappa_round_trip():
    p = SystemParams.from_kappa(gamma0=2.0, gammaP=200.0, kappa=0.37, g=0.01, mu=0.1)
    assert p.kappa == pytest.approx(0.37, rel=1e-12)
    assert p.tau_r == pytest.approx(1.0 / (2.0 * 0.37), rel=1e-12)
    pm = SystemParams.from_kappa(gamma0=1.0, gammaP=100.0, kappa=math.inf, g=0.01, mu=0.1)
    assert pm.tau_r == 0.0 and pm.markovian


def test_replace_updates_fields():
    p = SystemParams(gamma0=1.0, gammaP=100.0, tau_r=1.0, g=0.01, mu=0.3)
    q = p.replace(mu=1.7)
    assert q.mu == 1.7 and q.tau_r == p.tau_r
    r = p.replace(kappa=2.0)
    assert r.tau_r == pytest.approx(0.5)
    s = p.replace(kappa=math.inf)
    assert s.markovian


# === parameter file parsing ===================================================

GOOD_TEXT = """
# comment line
gamma0 = 1.0
gammaP = 100
tau_r = 2.0

g = 0.01
mu = 0.5
n_th_i = 0.0
n_th_s = 0.0
n_th_P = 1.5
"""


def test_parse_params_happy_path():
    p = parse_params_text(GOOD_TEXT)
    assert p.tau_r == 2.0 and p.kappa == pytest.approx(0.5)
    assert p.n_th_P == 1.5


def test_parse_params_kappa_alternative():
    p = parse_params_text("gammaP=100\nkappa = 0.25\ng=0.01\nmu=0\n")
    assert p.tau_r == pytest.approx(4.0)


def test_parse_params_rejects_unknown_key():
    with pytest.raises(ParameterError):
        parse_params_text("gammaP=100\ntau_r=1\ng=0.01\nmu=0\nbogus=1\n")


def test_parse_params_rejects_duplicate_key():
    with pytest.raises(ParameterError):
        parse_params_text("gammaP=100\ntau_r=1\ntau_r=2\ng=0.01\nmu=0\n")


def test_parse_params_rejects_both_memory_keys():
    with pytest.raises(ParameterError):
        parse_params_text("gammaP=100\ntau_r=1\nkappa=1\ng=0.01\nmu=0\n")


def test_parse_params_requires_memory_key():
    with pytest.raises(ParameterError):
        parse_params_text("gammaP=100\ng=0.01\nmu=0\n")


def test_parse_params_rejects_non_numeric():
    with pytest.raises(ParameterError):
        parse_params_text("gammaP=fast\ntau_r=1\ng=0.01\nmu=0\n")


def test_load_params(tmp_path):
    f = tmp_path / "params.txt"
    f.write_text(GOOD_TEXT)
    p = load_params(f)
    assert p.mu == 0.5
