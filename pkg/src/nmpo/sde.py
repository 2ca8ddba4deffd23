"""Nonlinear stochastic integrator for the scaled amplitude equations.

Evolves the full trilinear system (no linearization)

    dA_i/dt = (1/2) [ -c_i + i gamma0 (conj(A_s) A_P + f_i) ]
    dA_s/dt = (1/2) [ -c_s + i gamma0 (conj(A_i) A_P + f_s) ]
    dA_P/dt = (gammaP/2) [ -A_P + i (A_i A_s + mu) ]
    dc_k/dt = (gamma0 A_k - c_k) / tau_r

where c_k are exact exponential embeddings of the memory convolution and
f_k are Ornstein-Uhlenbeck colored forces with stationary complex variance

    C0 = (8 g^2 / (gamma0^2 gammaP tau_r)) (n_th + 1/2),

the scaled image of the bath correlator (n_th + 1/2)(gamma0/2 tau_r)
e^{-|u|/tau_r}.  Symmetric-ordered (n_th + 1/2) weights throughout: a single
classical process reproduces symmetric moments only.  In the Markovian
limit the forces become white complex increments of per-quadrature variance
s^2 gamma0 (n_th + 1/2) dt with s^2 = 2 g^2/(gamma0 gammaP).  Pump noise is
white with per-quadrature variance sP^2 gammaP (n_th_P + 1/2) dt,
sP^2 = 2 g^2/gamma0^2, and is off below threshold by default.

Trajectories integrate in vectorized lockstep from a single seeded
generator with a fixed draw order, so identical (seed, config, params) give
bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InsufficientSamples,
    NonStationary,
    OutOfRegime,
    ParameterError,
    StepOverflow,
)
from .meanfield import Phase, classify_phase, critical_drive, frequency_shift
from .model import SystemParams
from .spectra import VarianceReport, _make_report

SCHEMES = ("euler-maruyama", "stochastic-heun")
RECORDABLE = ("A_i", "A_s", "A_P", "c_i", "c_s", "f_i", "f_s")

# Time-step and burn-in safety factors.
_DT_FACTOR = 20.0
_BURN_FACTOR = 20.0
# Steps between finiteness checks.
_OVERFLOW_CHECK = 256


@dataclass(frozen=True)
class SimConfig:
    """Integration plan; times in the same units as the rate parameters."""

    dt: float
    t_burn: float
    t_sample: float
    n_traj: int
    seed: int
    scheme: str = "stochastic-heun"
    record_stride: int = 1
    record_fields: tuple[str, ...] = ("A_i", "A_s", "A_P")
    noise: bool = True
    pump_noise: bool | None = None  # None: on above threshold only

    def __post_init__(self):
        bad = []
        if not (self.dt > 0):
            bad.append(("dt", f"must be > 0, got {self.dt}"))
        if self.t_burn < 0:
            bad.append(("t_burn", f"must be >= 0, got {self.t_burn}"))
        if not (self.t_sample > 0):
            bad.append(("t_sample", f"must be > 0, got {self.t_sample}"))
        if self.n_traj < 1:
            bad.append(("n_traj", f"must be >= 1, got {self.n_traj}"))
        if self.scheme not in SCHEMES:
            bad.append(("scheme", f"must be one of {SCHEMES}, got {self.scheme!r}"))
        if self.record_stride < 1:
            bad.append(("record_stride", f"must be >= 1, got {self.record_stride}"))
        for name in self.record_fields:
            if name not in RECORDABLE:
                bad.append(("record_fields", f"unknown field {name!r}"))
        if bad:
            raise ParameterError("; ".join(f"{f}: {m}" for f, m in bad), bad)

    def check_against(self, params: SystemParams) -> None:
        """Step-size and burn-in floors relative to the system timescales."""
        g0, gp, tau = params.gamma0, params.gammaP, params.tau_r
        scales = [2.0 / gp, 1.0 / g0]
        if tau > 0:
            scales.append(tau)
        dt_max = min(scales) / _DT_FACTOR
        bad = []
        if self.dt > dt_max * (1 + 1e-12):
            bad.append(("dt", f"must be <= {dt_max:.3e} for these rates, got {self.dt}"))
        burn_min = _BURN_FACTOR * max(1.0 / g0, tau)
        if self.t_burn < burn_min * (1 - 1e-12):
            bad.append(("t_burn", f"must be >= {burn_min:.3e} for these rates, got {self.t_burn}"))
        if bad:
            raise ParameterError("; ".join(f"{f}: {m}" for f, m in bad), bad)


@dataclass
class Trajectory:
    """Recorded post-burn-in samples, shape (n_samples, n_traj) per field.

    t is the time since the end of burn-in at each recorded step.  Memory
    (c_i, c_s) and colored-force (f_i, f_s) series are None unless requested
    in record_fields (or in the Markovian limit, where they do not exist).
    """

    t: np.ndarray
    A_i: np.ndarray | None
    A_s: np.ndarray | None
    A_P: np.ndarray | None
    c_i: np.ndarray | None
    c_s: np.ndarray | None
    f_i: np.ndarray | None
    f_s: np.ndarray | None
    params: SystemParams
    config: SimConfig


def ou_noise_step(f, dt: float, tau_r: float, strength: float, rng: np.random.Generator):
    """Exact Ornstein-Uhlenbeck update of a complex force over one step.

    f' = f e^{-dt/tau_r} + eta with eta complex Gaussian of total variance
    strength * (1 - e^{-2 dt/tau_r}); strength is the stationary complex
    variance <|f|^2>.  Exactness removes discretization bias from the noise
    autocorrelation at any dt.
    """
    if not (tau_r > 0):
        raise ParameterError(f"tau_r must be > 0, got {tau_r}", [("tau_r", "must be positive")])
    if strength < 0:
        raise ParameterError(
            f"strength must be >= 0, got {strength}", [("strength", "must be non-negative")]
        )
    decay = math.exp(-dt / tau_r)
    eta_sd = math.sqrt(max(strength * (1.0 - decay * decay), 0.0) / 2.0)
    shape = np.shape(f)
    z = rng.standard_normal((2,) + shape)
    out = np.asarray(f, dtype=complex) * decay + eta_sd * (z[0] + 1j * z[1])
    if shape == ():
        return complex(out)
    return out


def _as_state(value, n_traj: int) -> np.ndarray:
    arr = np.asarray(value, dtype=complex)
    if arr.ndim == 0:
        return np.full(n_traj, complex(arr))
    if arr.shape != (n_traj,):
        raise ParameterError(
            f"initial state entry has shape {arr.shape}, expected scalar or ({n_traj},)",
            [("initial", "shape mismatch")],
        )
    return arr.copy()


def integrate_trajectory(
    params: SystemParams, config: SimConfig, initial: dict | None = None
) -> Trajectory:
    """Integrate the full nonlinear system; returns post-burn-in samples.

    initial may give starting values for any of A_i, A_s, A_P, c_i, c_s,
    f_i, f_s (scalar or per-trajectory); unspecified amplitudes start as a
    small seeded random perturbation, memory variables slaved (c = gamma0 A)
    and forces at zero.  Raises StepOverflow on non-finite state.
    """
    config.check_against(params)
    rng = np.random.default_rng(config.seed)
    n_traj = config.n_traj
    g0, gp, mu, tau = params.gamma0, params.gammaP, params.mu, params.tau_r
    markov = params.markovian
    heun = config.scheme == "stochastic-heun"
    noise = config.noise
    pump_noise = config.pump_noise
    if pump_noise is None:
        pump_noise = classify_phase(mu, params.kappa) is not Phase.DISORDERED
    s2 = 2.0 * params.g**2 / (g0 * gp)
    sp2 = 2.0 * params.g**2 / g0**2
    dt = config.dt

    initial = dict(initial or {})
    seed_amp = 1e-3
    A_i = (
        _as_state(initial.pop("A_i"), n_traj)
        if "A_i" in initial
        else (rng.standard_normal(n_traj) + 1j * rng.standard_normal(n_traj)) * seed_amp
    )
    A_s = (
        _as_state(initial.pop("A_s"), n_traj)
        if "A_s" in initial
        else (rng.standard_normal(n_traj) + 1j * rng.standard_normal(n_traj)) * seed_amp
    )
    A_P = _as_state(initial.pop("A_P"), n_traj) if "A_P" in initial else np.zeros(n_traj, complex)
    if markov:
        c_i = c_s = f_i = f_s = None
        for key in ("c_i", "c_s", "f_i", "f_s"):
            if key in initial:
                raise ParameterError(
                    f"{key} has no meaning in the Markovian limit", [(key, "tau_r = 0")]
                )
    else:
        c_i = _as_state(initial.pop("c_i"), n_traj) if "c_i" in initial else g0 * A_i.copy()
        c_s = _as_state(initial.pop("c_s"), n_traj) if "c_s" in initial else g0 * A_s.copy()
        f_i = _as_state(initial.pop("f_i"), n_traj) if "f_i" in initial else np.zeros(n_traj, complex)
        f_s = _as_state(initial.pop("f_s"), n_traj) if "f_s" in initial else np.zeros(n_traj, complex)
    if initial:
        raise ParameterError(
            f"unknown initial-state keys {sorted(initial)}", [("initial", "unknown keys")]
        )

    # Noise amplitudes: colored OU for the damped modes (exact update), white
    # for the Markovian limit and for the pump.
    n_avg_i, n_avg_s = params.n_th_i, params.n_th_s
    if not markov:
        c0_i = (8.0 * params.g**2 / (g0**2 * gp * tau)) * (n_avg_i + 0.5) if noise else 0.0
        c0_s = (8.0 * params.g**2 / (g0**2 * gp * tau)) * (n_avg_s + 0.5) if noise else 0.0
        ou_decay = math.exp(-dt / tau)
        eta_i = math.sqrt(max(c0_i * (1.0 - ou_decay**2), 0.0) / 2.0)
        eta_s = math.sqrt(max(c0_s * (1.0 - ou_decay**2), 0.0) / 2.0)
    else:
        w_i = math.sqrt(s2 * g0 * (n_avg_i + 0.5) * dt) if noise else 0.0
        w_s = math.sqrt(s2 * g0 * (n_avg_s + 0.5) * dt) if noise else 0.0
    w_p = math.sqrt(sp2 * gp * (params.n_th_P + 0.5) * dt) if (noise and pump_noise) else 0.0

    n_burn = int(round(config.t_burn / dt))
    n_samp = int(round(config.t_sample / dt))
    stride = config.record_stride
    record = config.record_fields
    out = {k: [] for k in record}
    t_rec = []

    def drift(ai, as_, ap, ci, cs, fi, fs):
        d_ai = 0.5 * (-ci + 1j * g0 * (np.conj(as_) * ap + fi))
        d_as = 0.5 * (-cs + 1j * g0 * (np.conj(ai) * ap + fs))
        d_ap = 0.5 * gp * (-ap + 1j * (ai * as_ + mu))
        d_ci = (g0 * ai - ci) / tau
        d_cs = (g0 * as_ - cs) / tau
        return d_ai, d_as, d_ap, d_ci, d_cs

    def drift_mk(ai, as_, ap):
        d_ai = 0.5 * (-g0 * ai + 1j * g0 * np.conj(as_) * ap)
        d_as = 0.5 * (-g0 * as_ + 1j * g0 * np.conj(ai) * ap)
        d_ap = 0.5 * gp * (-ap + 1j * (ai * as_ + mu))
        return d_ai, d_as, d_ap

    local: dict[str, np.ndarray | None] = {}
    total = n_burn + n_samp
    # Overflow en route to the StepOverflow check is deliberate; keep
    # numpy from spraying per-operation warnings about it.
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(total):
            if not markov:
                f_i_new = f_i * ou_decay
                f_s_new = f_s * ou_decay
                if noise:
                    z = rng.standard_normal((4, n_traj))
                    f_i_new = f_i_new + eta_i * (z[0] + 1j * z[1])
                    f_s_new = f_s_new + eta_s * (z[2] + 1j * z[3])
                dW_P = 0.0
                if noise and w_p:
                    zp = rng.standard_normal((2, n_traj))
                    dW_P = w_p * (zp[0] + 1j * zp[1])
                k1 = drift(A_i, A_s, A_P, c_i, c_s, f_i, f_s)
                if not heun:
                    A_i = A_i + k1[0] * dt
                    A_s = A_s + k1[1] * dt
                    A_P = A_P + k1[2] * dt + dW_P
                    c_i = c_i + k1[3] * dt
                    c_s = c_s + k1[4] * dt
                else:
                    p = (
                        A_i + k1[0] * dt,
                        A_s + k1[1] * dt,
                        A_P + k1[2] * dt + dW_P,
                        c_i + k1[3] * dt,
                        c_s + k1[4] * dt,
                    )
                    k2 = drift(p[0], p[1], p[2], p[3], p[4], f_i_new, f_s_new)
                    A_i = A_i + 0.5 * (k1[0] + k2[0]) * dt
                    A_s = A_s + 0.5 * (k1[1] + k2[1]) * dt
                    A_P = A_P + 0.5 * (k1[2] + k2[2]) * dt + dW_P
                    c_i = c_i + 0.5 * (k1[3] + k2[3]) * dt
                    c_s = c_s + 0.5 * (k1[4] + k2[4]) * dt
                f_i, f_s = f_i_new, f_s_new
            else:
                dW_i = dW_s = dW_P = 0.0
                if noise:
                    z = rng.standard_normal((6, n_traj))
                    dW_i = w_i * (z[0] + 1j * z[1])
                    dW_s = w_s * (z[2] + 1j * z[3])
                    if w_p:
                        dW_P = w_p * (z[4] + 1j * z[5])
                k1 = drift_mk(A_i, A_s, A_P)
                if not heun:
                    A_i = A_i + k1[0] * dt + dW_i
                    A_s = A_s + k1[1] * dt + dW_s
                    A_P = A_P + k1[2] * dt + dW_P
                else:
                    p = (A_i + k1[0] * dt + dW_i, A_s + k1[1] * dt + dW_s, A_P + k1[2] * dt + dW_P)
                    k2 = drift_mk(*p)
                    A_i = A_i + 0.5 * (k1[0] + k2[0]) * dt + dW_i
                    A_s = A_s + 0.5 * (k1[1] + k2[1]) * dt + dW_s
                    A_P = A_P + 0.5 * (k1[2] + k2[2]) * dt + dW_P

            if (step + 1) % _OVERFLOW_CHECK == 0 or step == total - 1:
                if not (np.all(np.isfinite(A_i.real)) and np.all(np.isfinite(A_P.real))):
                    raise StepOverflow(
                        f"non-finite state at step {step + 1} (t = {(step + 1) * dt:.4g}); "
                        "reduce dt"
                    )
            k_rel = step + 1 - n_burn
            if k_rel >= 1 and k_rel % stride == 0:
                local["A_i"], local["A_s"], local["A_P"] = A_i, A_s, A_P
                local["c_i"], local["c_s"] = c_i, c_s
                local["f_i"], local["f_s"] = f_i, f_s
                for k in record:
                    if local[k] is None:
                        raise ParameterError(
                            f"cannot record {k!r} in the Markovian limit",
                            [("record_fields", f"{k} absent for tau_r = 0")],
                        )
                    out[k].append(local[k].copy())
                t_rec.append(k_rel * dt)

    series = {k: np.asarray(v) for k, v in out.items()}
    return Trajectory(
        t=np.asarray(t_rec),
        A_i=series.get("A_i"),
        A_s=series.get("A_s"),
        A_P=series.get("A_P"),
        c_i=series.get("c_i"),
        c_s=series.get("c_s"),
        f_i=series.get("f_i"),
        f_s=series.get("f_s"),
        params=params,
        config=config,
    )


# === estimators ===============================================================


@dataclass(frozen=True)
class OrderParameterEstimate:
    """Ensemble estimates of the order parameters with standard errors."""

    amp_mean: float
    amp_se: float
    delta_est: float
    delta_se: float
    var_phi_dot: float
    var_phi_dot_se: float
    window: float
    n_traj: int
    branch_locked: bool


def _gather(trajs, fields=("A_i", "A_s")) -> Trajectory:
    if isinstance(trajs, Trajectory):
        tr = trajs
    else:
        seq = list(trajs)
        if not seq:
            raise InsufficientSamples("no trajectories given")
        tr = seq[0]
        if len(seq) > 1:
            for other in seq[1:]:
                if other.params != tr.params or other.t.shape != tr.t.shape:
                    raise ParameterError(
                        "trajectories have mismatched parameters or time grids",
                        [("trajs", "inconsistent batch")],
                    )
            merged = {}
            for name in RECORDABLE:
                parts = [getattr(o, name) for o in seq]
                merged[name] = np.concatenate(parts, axis=1) if parts[0] is not None else None
            tr = Trajectory(t=tr.t, params=tr.params, config=tr.config, **merged)
    for name in fields:
        if getattr(tr, name) is None:
            raise InsufficientSamples(f"trajectory is missing recorded field {name!r}")
    return tr


def estimate_order_parameters(trajs, window: float | None = None) -> OrderParameterEstimate:
    """Order parameters from sampled trajectories.

    amp_mean averages |A_i| over time and ensemble.  delta_est is the mean
    slope of the unwrapped phase of A_i: when every trajectory's |slope|
    sits above half the ensemble mean magnitude the rotation is branch-
    locked and magnitudes are averaged (the two rotation senses are
    degenerate); otherwise signed slopes are averaged so an unbroken phase
    reports zero within noise.  var_phi_dot is the per-trajectory variance
    of the difference-phase slope over boxcar windows of the given width
    (default 5/gamma0), centered per trajectory, averaged over the ensemble.
    """
    tr = _gather(trajs)
    n_samples, n_traj = tr.A_i.shape
    if n_traj < 2:
        raise InsufficientSamples(f"need >= 2 trajectories for ensemble errors, got {n_traj}")
    if n_samples < 16:
        raise InsufficientSamples(f"need >= 16 samples, got {n_samples}")
    if window is None:
        window = 5.0 / tr.params.gamma0
    dt_rec = float(tr.t[1] - tr.t[0])

    amp = np.abs(tr.A_i)
    amp_per_traj = amp.mean(axis=0)
    amp_mean = float(amp_per_traj.mean())
    amp_se = float(amp_per_traj.std(ddof=1) / math.sqrt(n_traj))

    phase_i = np.unwrap(np.angle(tr.A_i), axis=0)
    slopes = np.polyfit(tr.t, phase_i, 1)[0]
    mags = np.abs(slopes)
    mean_mag = float(mags.mean())
    locked = mean_mag > 0 and float(mags.min()) > 0.5 * mean_mag
    if locked:
        delta_est = mean_mag
        delta_se = float(mags.std(ddof=1) / math.sqrt(n_traj))
    else:
        delta_est = abs(float(slopes.mean()))
        delta_se = float(slopes.std(ddof=1) / math.sqrt(n_traj))

    phi_d = np.unwrap(np.angle(tr.A_i) - np.angle(tr.A_s), axis=0)
    m = int(round(window / dt_rec))
    if m < 1 or n_samples <= 2 * m:
        raise InsufficientSamples(
            f"smoothing window {window} needs more than {2 * m} samples at cadence {dt_rec}"
        )
    rates = (phi_d[m:] - phi_d[:-m]) / (m * dt_rec)
    rates = rates - rates.mean(axis=0, keepdims=True)
    v_per_traj = (rates**2).mean(axis=0)
    var_phi_dot = float(v_per_traj.mean())
    var_se = float(v_per_traj.std(ddof=1) / math.sqrt(n_traj))

    return OrderParameterEstimate(
        amp_mean=amp_mean,
        amp_se=amp_se,
        delta_est=delta_est,
        delta_se=delta_se,
        var_phi_dot=var_phi_dot,
        var_phi_dot_se=var_se,
        window=float(window),
        n_traj=n_traj,
        branch_locked=bool(locked),
    )


def estimate_quadrature_variances(trajs, frame: str = "static") -> VarianceReport:
    """Sampled cross-quadrature variances about the mean-field solution.

    frame "static" uses the amplitudes as recorded; "corotating" first
    removes the mean-field rotation trajectory-by-trajectory (branch taken
    from the difference-phase slope sign).  Above threshold each trajectory
    is gauge-aligned to its own mean phase before the mean field is
    subtracted; the gauge quadrature x- is flagged divergent there (its
    sample variance grows with the window).  The remaining quadratures must
    pass a first/second-half stationarity check within 3 combined standard
    errors, else NonStationary.
    """
    if frame not in ("static", "corotating"):
        raise ParameterError(
            f"frame must be 'static' or 'corotating', got {frame!r}", [("frame", "unknown")]
        )
    tr = _gather(trajs)
    params = tr.params
    n_samples, n_traj = tr.A_i.shape
    if n_traj < 2 or n_samples < 32:
        raise InsufficientSamples(
            f"need >= 2 trajectories and >= 32 samples, got {n_traj} x {n_samples}"
        )
    phase = classify_phase(params.mu, params.kappa)
    mu_cr = critical_drive(params.kappa)

    A_i = tr.A_i
    A_s = tr.A_s
    if phase is Phase.DISORDERED:
        d_i, d_s = A_i, A_s
    else:
        if phase is Phase.U1XZ2 and frame == "corotating":
            delta = frequency_shift(params.kappa) * params.gamma0
            phi_d = np.unwrap(np.angle(A_i) - np.angle(A_s), axis=0)
            branch = np.sign(np.polyfit(tr.t, phi_d, 1)[0])
            branch[branch == 0] = 1.0
            rot = np.exp(-1j * delta * np.outer(tr.t, branch))
            A_i = A_i * rot
            A_s = A_s * np.conj(rot)
        # Gauge angle per trajectory from the circular mean of the
        # difference phase, then fluctuations about the phi = 0 mean field.
        phi_hat = np.angle(np.exp(1j * (np.angle(A_i) - np.angle(A_s))).mean(axis=0))
        A_i = A_i * np.exp(-0.5j * phi_hat)[None, :]
        A_s = A_s * np.exp(+0.5j * phi_hat)[None, :]
        amp = math.sqrt(params.mu - mu_cr)
        d_i = A_i - 1j * amp
        d_s = A_s - 1j * amp

    quads = {
        "x+": (d_i.real + d_s.real) / math.sqrt(2.0),
        "x-": (d_i.real - d_s.real) / math.sqrt(2.0),
        "y+": (d_i.imag + d_s.imag) / math.sqrt(2.0),
        "y-": (d_i.imag - d_s.imag) / math.sqrt(2.0),
    }
    s2 = 2.0 * params.g**2 / (params.gamma0 * params.gammaP)
    n_th = 0.5 * (params.n_th_i + params.n_th_s)
    norm = s2 * (n_th + 0.5)
    soft = {"x-"} if phase is not Phase.DISORDERED else set()

    values, stderr = {}, {}
    half = n_samples // 2
    for lab, q in quads.items():
        v_traj = q.var(axis=0)
        val = float(v_traj.mean()) / norm
        se = float(v_traj.std(ddof=1) / math.sqrt(n_traj)) / norm
        if lab in soft:
            values[lab] = math.inf
            stderr[lab] = math.inf
            continue
        v1 = q[:half].var(axis=0)
        v2 = q[half:].var(axis=0)
        m1, m2 = v1.mean() / norm, v2.mean() / norm
        s1 = v1.std(ddof=1) / math.sqrt(n_traj) / norm
        s2e = v2.std(ddof=1) / math.sqrt(n_traj) / norm
        if abs(m1 - m2) > 3.0 * math.hypot(s1, s2e):
            raise NonStationary(
                f"{lab}: first/second-half variances {m1:.4g} vs {m2:.4g} "
                f"differ by more than 3 combined standard errors"
            )
        values[lab] = val
        stderr[lab] = se
    return _make_report(values, n_th, stderr=stderr)
