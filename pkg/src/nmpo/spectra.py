"""Fluctuation spectra, quadrature variances, and logarithmic negativity.

Everything here works in the cross-quadrature basis

    (x+, x-, xP, y+, y-, yP)

of the co-rotating frame of the supplied steady state.  The frequency-domain
drift Sigma~(omega) replaces the memory convolution by the kernel transform
evaluated at omega shifted by the frame rotation +-delta; the power spectral
density is

    S(omega) = (1/2 pi) (Sigma~ + i omega I)^{-1} D(omega) (Sigma~^H - i omega I)^{-1}

with D(omega) the Langevin force PSD: gamma~'(omega) = Re gamma~(omega)
weighted by (n_th + 1/2) on the damped quadratures, a flat gammaP-weighted
entry on the pump quadratures, and, in a rotating frame, antisymmetric
cross-correlations between (x+, y-) and (x-, y+) because the +-delta
sidebands of the colored bath are sampled unevenly.

Equal-time variances follow by integrating S over omega.  Normalized
variances divide out the thermal scale: sigma = Var / [s^2 (n_th + 1/2)]
with s^2 = 2 g^2/(gamma0 gammaP) the thermal variance of one quadrature of
the scaled amplitude per unit (n_th + 1/2).

Closed forms used for cross-validation and fast maps (kappa = 1/(gamma0
tau_r), r = (n_th_P + 1/2)/(n_th + 1/2)):

    below threshold:  sigma_sq  = 2 kappa / ((1 + mu)(2 kappa + mu))
                      sigma_amp = 2 kappa / ((1 - mu)(2 kappa - mu))
    u1 phase:         sigma_x+ = [2 r (mu-1)(mu+kappa) + kappa] / [mu (2 kappa + 2 mu - 1)]
                      sigma_x- -> divergent (gauge mode)
                      sigma_y+ = [2 r (mu-1+kappa)(mu-1) + kappa] / [(mu-1)(2 kappa + 2 mu - 3)]
                      sigma_y- = kappa / (1 + 2 kappa)

The u1 forms hold in the instantaneous-pump limit; at finite gammaP they
acquire O(gamma0/gammaP) corrections.  Markovian limits are the kappa -> inf
values of the same expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad_vec

from .errors import (
    NumericsError,
    OutOfRegime,
    ParameterError,
    SingularAtFrequency,
    TailNotConverged,
)
from .meanfield import Phase, SteadyState, critical_drive, steady_state
from .model import SystemParams, kernel_freq, kernel_freq_real

QUAD_LABELS = ("x+", "x-", "xP", "y+", "y-", "yP")
VAR_LABELS = ("x+", "x-", "y+", "y-")
_VAR_INDEX = {"x+": 0, "x-": 1, "y+": 3, "y-": 4}

# Zero-point variance of x = (a + a^dag)/sqrt(2).
SIGMA_ZPM = 0.5
# Relative singular-value floor below which a response matrix counts as singular.
_SINGULAR_RTOL = 1e-13
# Accepted ratio of the analytic tail estimate to the accumulated integral.
_TAIL_FRAC = 1e-3
# Target tail fraction when choosing the integration half-width.
_TAIL_TARGET = 5e-4


def _thermal_scale(params: SystemParams) -> tuple[float, float]:
    """(s^2, n_avg + 1/2): amplitude-units variance scale and occupancy."""
    s2 = 2.0 * params.g**2 / (params.gamma0 * params.gammaP)
    navg = 0.5 * (params.n_th_i + params.n_th_s)
    return s2, navg + 0.5


def _drift_freq(params: SystemParams, ss: SteadyState, omega: float) -> np.ndarray:
    """Frequency-domain drift Sigma~(omega), 6x6 complex."""
    g0, gp = params.gamma0, params.gammaP
    P = ss.pump_amp.imag
    S = ss.amp_signal
    dlt = ss.z2_branch * ss.delta
    kern = params.kernel
    g_plus = kernel_freq(kern, omega + dlt)
    g_minus = kernel_freq(kern, omega - dlt)
    g_c = 0.5 * (g_plus + g_minus)
    g_s = (g_plus - g_minus) / 2j
    gc = g0 * S / math.sqrt(2.0)
    gpc = gp * S / math.sqrt(2.0)
    m = np.zeros((6, 6), dtype=complex)
    m[0, 0] = -g_c / 2 - g0 * P / 2
    m[0, 2] = gc
    m[0, 4] = g_s / 2 - dlt
    m[1, 1] = -g_c / 2 + g0 * P / 2
    m[1, 3] = g_s / 2 - dlt
    m[2, 0] = -gpc
    m[2, 2] = -gp / 2
    m[3, 3] = -g_c / 2 + g0 * P / 2
    m[3, 5] = gc
    m[3, 1] = -g_s / 2 + dlt
    m[4, 4] = -g_c / 2 - g0 * P / 2
    m[4, 0] = -g_s / 2 + dlt
    m[5, 3] = -gpc
    m[5, 5] = -gp / 2
    return m


def susceptibility_at(params: SystemParams, ss: SteadyState, omega: float) -> np.ndarray:
    """Response matrix Sigma~(omega) + i omega I at one real frequency.

    Raises SingularAtFrequency when the matrix is numerically singular
    (gapless states at omega = 0, or exactly at a critical point), so the
    integrator can route around the pole.
    """
    m = _drift_freq(params, ss, float(omega)) + 1j * float(omega) * np.eye(6)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] < _SINGULAR_RTOL * sv[0]:
        raise SingularAtFrequency(
            f"response matrix singular at omega = {omega}: "
            f"smallest/largest singular value = {sv[-1]:.3e}/{sv[0]:.3e}"
        )
    return m


@dataclass(frozen=True)
class DiffusionMatrix:
    """Langevin force PSD in the cross-quadrature basis at one frequency.

    Real and diagonal in a non-rotating frame; a rotating frame adds
    Hermitian off-diagonal (x+, y-) and (x-, y+) entries.  Satisfies
    D(-omega) = D(omega)^T and has non-negative diagonal.
    """

    omega: float
    matrix: np.ndarray
    include_pump: bool


def _diffusion(params: SystemParams, ss: SteadyState, omega: float, include_pump: bool) -> np.ndarray:
    kern = params.kernel
    dlt = ss.z2_branch * ss.delta
    s2 = 2.0 * params.g**2 / (params.gamma0 * params.gammaP)
    sp2 = 2.0 * params.g**2 / params.gamma0**2
    gp_plus = kernel_freq_real(kern, omega + dlt)
    gp_minus = kernel_freq_real(kern, omega - dlt)
    dd = 0.5 * (gp_plus + gp_minus)
    ww = 0.5 * (gp_plus - gp_minus)
    na = 0.5 * (params.n_th_i + params.n_th_s) + 0.5
    nd = 0.5 * (params.n_th_i - params.n_th_s)
    d = np.zeros((6, 6), dtype=complex)
    for q in (0, 1, 3, 4):
        d[q, q] = s2 * na * dd
    # Unequal signal/idler occupancies couple x+ with x- (and y+ with y-).
    d[0, 1] = d[1, 0] = s2 * nd * dd
    d[3, 4] = d[4, 3] = s2 * nd * dd
    if include_pump:
        d[2, 2] = d[5, 5] = sp2 * params.gammaP * (params.n_th_P + 0.5)
    # Uneven sampling of the +-delta sidebands correlates orthogonal
    # cross-quadratures; vanishes in a non-rotating frame.
    d[0, 4] = 1j * s2 * na * ww
    d[4, 0] = -1j * s2 * na * ww
    d[1, 3] = 1j * s2 * na * ww
    d[3, 1] = -1j * s2 * na * ww
    d[0, 3] = 1j * s2 * nd * ww
    d[3, 0] = -1j * s2 * nd * ww
    d[1, 4] = 1j * s2 * nd * ww
    d[4, 1] = -1j * s2 * nd * ww
    return d


def diffusion_matrix(
    params: SystemParams, ss: SteadyState, omega: float, include_pump: bool | None = None
) -> DiffusionMatrix:
    """Force PSD matrix; pump noise defaults to on above threshold only."""
    if include_pump is None:
        include_pump = ss.phase is not Phase.DISORDERED
    return DiffusionMatrix(float(omega), _diffusion(params, ss, float(omega), include_pump), include_pump)


def _psd_at(params: SystemParams, ss: SteadyState, omega: float, include_pump: bool) -> np.ndarray:
    m = susceptibility_at(params, ss, omega)
    chi = np.linalg.inv(m)
    d = _diffusion(params, ss, omega, include_pump)
    s = chi @ d @ chi.conj().T / (2.0 * math.pi)
    return 0.5 * (s + s.conj().T)


@dataclass(frozen=True)
class SpectralData:
    """PSD matrices of the cross-quadratures on a symmetric frequency grid.

    matrices[k] is the Hermitian 6x6 PSD at omega[k]; X and Y sectors sit in
    one matrix (block-diagonal unless the frame rotates).  covariance is the
    integrated equal-time covariance when it has been computed.
    """

    omega: np.ndarray
    matrices: np.ndarray
    labels: tuple[str, ...]
    frame: str
    params: SystemParams
    ss: SteadyState
    include_pump: bool
    covariance: np.ndarray | None = None


def _default_halfwidth(params: SystemParams, include_pump: bool) -> float:
    g0 = params.gamma0
    return 30.0 * g0 + 3.0 * (params.gammaP if include_pump else g0)


def psd(
    params: SystemParams,
    ss: SteadyState,
    omega_grid=None,
    include_pump: bool | None = None,
    n_grid: int = 2000,
    integrate: bool = False,
) -> SpectralData:
    """Hermitian PSD matrices on a symmetric frequency grid.

    The steady state must be stable (or marginal); gapless states are fine
    as long as the grid avoids omega = 0 exactly, which the default even-
    count grid does.  Pump noise defaults to off below threshold and on
    above, matching the force model of the stochastic integrator.
    """
    from . import linres  # deferred import; linres does not depend on spectra

    if include_pump is None:
        include_pump = ss.phase is not Phase.DISORDERED
    spec = linres.eigenspectrum(linres.build_embedded_matrix(params, ss))
    if spec.max_re > linres.STABLE_TOL:
        raise OutOfRegime(
            f"PSD of an unstable state (spectral margin {spec.max_re:.3e}); "
            "linearized fluctuations have no stationary spectrum"
        )
    if omega_grid is None:
        w = _default_halfwidth(params, include_pump)
        omega_grid = np.linspace(-w, w, max(2, n_grid))
    om = np.asarray(omega_grid, dtype=float)
    mats = np.empty((om.size, 6, 6), dtype=complex)
    for k, w_k in enumerate(om):
        mats[k] = _psd_at(params, ss, float(w_k), include_pump)
    frame = "corotating" if ss.delta != 0.0 else "static"
    sd = SpectralData(om, mats, QUAD_LABELS, frame, params, ss, include_pump)
    if integrate:
        report = integrate_variances(sd)
        sd = replace(sd, covariance=report.covariance)
    return sd


@dataclass(frozen=True)
class VarianceReport:
    """Equal-time cross-quadrature variances.

    sigma_* are normalized to the thermal variance (n_th + 1/2); absolute
    holds the same values in quadrature units where the zero-point variance
    is 1/2.  Divergent entries are reported as inf and flagged, never as a
    large finite number.  sigma_sq_scan / theta_sq are set when a mixing-
    angle scan found the soft squeezing direction (rotating frames);
    stderr carries ensemble standard errors for sampled estimates.
    """

    sigma_x_plus: float
    sigma_x_minus: float
    sigma_y_plus: float
    sigma_y_minus: float
    absolute: dict[str, float]
    divergent: dict[str, bool]
    squeezed: str
    amplified: str
    n_th: float
    sigma_sq_scan: float | None = None
    theta_sq: float | None = None
    covariance: np.ndarray | None = None
    stderr: dict[str, float] | None = None

    def normalized(self) -> dict[str, float]:
        return {
            "x+": self.sigma_x_plus,
            "x-": self.sigma_x_minus,
            "y+": self.sigma_y_plus,
            "y-": self.sigma_y_minus,
        }

    def min_sigma(self) -> float:
        """Smallest normalized variance, using the angle scan when present."""
        best = min(v for v in self.normalized().values() if math.isfinite(v))
        if self.sigma_sq_scan is not None:
            best = min(best, self.sigma_sq_scan)
        return best


def _make_report(
    values: dict[str, float],
    n_th: float,
    stderr: dict[str, float] | None = None,
    sigma_sq_scan: float | None = None,
    theta_sq: float | None = None,
    covariance: np.ndarray | None = None,
) -> VarianceReport:
    divergent = {lab: not math.isfinite(values[lab]) for lab in VAR_LABELS}
    finite = {lab: v for lab, v in values.items() if math.isfinite(v)}
    if not finite:
        raise NumericsError("all quadrature variances divergent")
    squeezed = min(finite, key=finite.get)
    amplified = max(values, key=lambda lab: values[lab])
    absolute = {lab: (n_th + 0.5) * values[lab] for lab in VAR_LABELS}
    return VarianceReport(
        sigma_x_plus=values["x+"],
        sigma_x_minus=values["x-"],
        sigma_y_plus=values["y+"],
        sigma_y_minus=values["y-"],
        absolute=absolute,
        divergent=divergent,
        squeezed=squeezed,
        amplified=amplified,
        n_th=n_th,
        sigma_sq_scan=sigma_sq_scan,
        theta_sq=theta_sq,
        covariance=covariance,
        stderr=stderr,
    )


def _divergent_indices(params: SystemParams, ss: SteadyState, include_pump: bool) -> list[int]:
    """Diagonal entries with a double pole at omega = 0 (flagged divergent)."""
    eps = 1e-6 * params.gamma0
    # Extreme non-normality near phase boundaries can trip the singularity
    # guard well away from the pole; back the probe off until it inverts.
    for _ in range(6):
        try:
            d1 = np.real(np.diag(_psd_at(params, ss, eps, include_pump)))
            d2 = np.real(np.diag(_psd_at(params, ss, 2.0 * eps, include_pump)))
            break
        except SingularAtFrequency:
            eps *= 10.0
    else:
        d1 = np.real(np.diag(_psd_at(params, ss, eps, include_pump)))
        d2 = np.real(np.diag(_psd_at(params, ss, 2.0 * eps, include_pump)))
    out = []
    for q in range(6):
        if d1[q] > 0 and d2[q] > 0 and d1[q] / d2[q] > 3.0:
            out.append(q)
    return out


def integrate_variances(sd: SpectralData, epsrel: float = 1e-8) -> VarianceReport:
    """Equal-time variances by adaptive frequency quadrature.

    The integrand is re-evaluated adaptively (the stored grid is for
    inspection only), split at omega = 0 where gapless states are singular,
    over [-W, W] with an analytic a/omega^2 tail correction beyond.  W grows
    by doubling until the raw tail estimate is below 0.05% of the
    accumulated integral; TailNotConverged if 0.1% cannot be met.  Entries
    with a double pole at omega = 0 (the gauge quadrature x- above
    threshold) are flagged divergent and excluded from quadrature.
    """
    params, ss, include_pump = sd.params, sd.ss, sd.include_pump
    divergent_idx = _divergent_indices(params, ss, include_pump)
    kept = [q for q in range(6) if q not in divergent_idx]
    ix = np.ix_(kept, kept)

    def f(om):
        return _psd_at(params, ss, float(om), include_pump)[ix]

    w = _default_halfwidth(params, include_pump)
    acc, _ = quad_vec(f, -w, 0.0, epsrel=epsrel, epsabs=1e-16, limit=1000)
    pos, _ = quad_vec(f, 0.0, w, epsrel=epsrel, epsabs=1e-16, limit=1000)
    acc = acc + pos

    def tail_fraction(w_edge, acc_now):
        t = (f(w_edge) + f(-w_edge)) * w_edge
        diag_acc = np.abs(np.real(np.diag(acc_now)))
        ref = diag_acc.max()
        frac = 0.0
        for k in range(len(kept)):
            if diag_acc[k] > 1e-12 * ref:
                frac = max(frac, abs(np.real(t[k, k])) / diag_acc[k])
        return t, frac

    tail, frac = tail_fraction(w, acc)
    doublings = 0
    while frac > _TAIL_TARGET and doublings < 8:
        shell_pos, _ = quad_vec(f, w, 2.0 * w, epsrel=epsrel, epsabs=1e-16, limit=500)
        shell_neg, _ = quad_vec(f, -2.0 * w, -w, epsrel=epsrel, epsabs=1e-16, limit=500)
        acc = acc + shell_pos + shell_neg
        w *= 2.0
        doublings += 1
        tail, frac = tail_fraction(w, acc)
    if frac > _TAIL_FRAC:
        raise TailNotConverged(
            f"tail estimate {frac:.2e} of accumulated integral exceeds {_TAIL_FRAC:.0e} "
            f"at half-width {w:.3g}"
        )
    block = np.real(acc + tail)

    cov = np.full((6, 6), np.nan)
    cov[ix] = block
    for q in divergent_idx:
        cov[q, q] = math.inf

    s2, nhalf = _thermal_scale(params)
    norm = s2 * nhalf
    values = {}
    for lab, q in _VAR_INDEX.items():
        values[lab] = math.inf if q in divergent_idx else cov[q, q] / norm
    return _make_report(values, nhalf - 0.5, covariance=cov)


# === closed forms =============================================================


def _check_regime_inputs(mu, kappa, n_th):
    if not (kappa > 0):
        raise ParameterError(f"kappa must be > 0, got {kappa}", [("kappa", "must be positive")])
    if mu < 0 or math.isnan(mu):
        raise ParameterError(f"mu must be >= 0, got {mu}", [("mu", "must be non-negative")])
    if n_th < 0:
        raise ParameterError(f"n_th must be >= 0, got {n_th}", [("n_th", "must be non-negative")])


def _sigma_sq_formula(mu: float, kappa: float) -> float:
    """Squeezed-variance closed form; exact below threshold, analytic
    continuation beyond (backbone of scaling studies and entanglement maps)."""
    if math.isinf(kappa):
        return 1.0 / (1.0 + mu)
    return 2.0 * kappa / ((1.0 + mu) * (2.0 * kappa + mu))


def variances_below_threshold(
    mu: float, kappa: float, n_th: float = 0.0, extrapolate: bool = False
) -> VarianceReport:
    """Closed-form variances of the disordered state.

    Squeezed pair (x+, y-) and amplified pair (x-, y+).  OutOfRegime at or
    beyond mu_cr unless extrapolate is set, in which case the squeezed
    formula is analytically continued and the amplified entries are flagged
    divergent (which they physically are past threshold).
    """
    _check_regime_inputs(mu, kappa, n_th)
    mu_cr = critical_drive(kappa)
    if mu >= mu_cr and not extrapolate:
        raise OutOfRegime(
            f"disordered closed forms need mu < mu_cr = {mu_cr}, got mu = {mu} "
            "(pass extrapolate=True for the continued squeezed formula)"
        )
    sq = _sigma_sq_formula(mu, kappa)
    if mu < mu_cr:
        amp = 1.0 / (1.0 - mu) if math.isinf(kappa) else 2.0 * kappa / ((1.0 - mu) * (2.0 * kappa - mu))
    else:
        amp = math.inf
    values = {"x+": sq, "y-": sq, "x-": amp, "y+": amp}
    return _make_report(values, n_th)


def variances_above_threshold_u1(
    mu: float, kappa: float, n_th: float = 0.0, n_th_P: float | None = None
) -> VarianceReport:
    """Closed-form variances of the non-rotating broken phase.

    Valid for kappa >= 1/2 and mu > 1; exact in the instantaneous-pump
    limit, with O(gamma0/gammaP) corrections at finite pump rate.  x- is the
    gauge direction and divergent.  The pump-to-signal occupancy ratio
    r = (n_th_P + 1/2)/(n_th + 1/2) weighs the pump-noise terms.
    """
    _check_regime_inputs(mu, kappa, n_th)
    if n_th_P is None:
        n_th_P = n_th
    if n_th_P < 0:
        raise ParameterError(f"n_th_P must be >= 0, got {n_th_P}", [("n_th_P", "must be non-negative")])
    if kappa < 0.5:
        raise OutOfRegime(f"u1 closed forms need kappa >= 1/2, got {kappa}")
    if mu <= 1.0:
        raise OutOfRegime(f"u1 closed forms need mu > 1, got {mu}")
    r = (n_th_P + 0.5) / (n_th + 0.5)
    if math.isinf(kappa):
        x_plus = r * (mu - 1.0) / mu + 0.5 / mu
        y_plus = r + 0.5 / (mu - 1.0)
        y_minus = 0.5
    else:
        d1 = mu * (2.0 * kappa + 2.0 * mu - 1.0)
        d3 = 2.0 * kappa + 2.0 * mu - 3.0
        x_plus = (r * 2.0 * (mu - 1.0) * (mu + kappa) + kappa) / d1
        y_plus = r * 2.0 * (mu - 1.0 + kappa) / d3 + kappa / ((mu - 1.0) * d3)
        y_minus = kappa / (1.0 + 2.0 * kappa)
    values = {"x+": x_plus, "x-": math.inf, "y+": y_plus, "y-": y_minus}
    return _make_report(values, n_th)


def variances_u1xz2(
    params: SystemParams, ss: SteadyState | None = None, epsrel: float = 1e-8
) -> VarianceReport:
    """Numerically integrated variances of the rotating broken phase.

    Computed from the co-rotating-frame PSD including the delta-induced
    (x+, y-) cross-correlation; no compact closed forms exist here.  The
    soft squeezing direction is found by a 64-point mixing-angle scan over
    the (x+, y-) plane refined by the exact 2x2 quadratic-form minimum, and
    reported in sigma_sq_scan / theta_sq.
    """
    if ss is None:
        ss = steady_state(params)
    if ss.phase is not Phase.U1XZ2:
        raise OutOfRegime(f"state is {ss.phase.value}, not the rotating broken phase")
    sd = psd(params, ss, n_grid=64)
    report = integrate_variances(sd, epsrel=epsrel)
    s2, nhalf = _thermal_scale(params)
    norm = s2 * nhalf
    cov = report.covariance
    sxp = report.sigma_x_plus
    sym = report.sigma_y_minus
    c = float(cov[0, 4]) / norm
    thetas = np.linspace(0.0, math.pi, 64, endpoint=False)
    scan = (
        np.cos(thetas) ** 2 * sxp
        + np.sin(thetas) ** 2 * sym
        + 2.0 * np.cos(thetas) * np.sin(thetas) * c
    )
    k = int(np.argmin(scan))
    half = 0.5 * (sxp + sym)
    diff = 0.5 * (sxp - sym)
    sig_min = half - math.hypot(diff, c)
    # sigma(theta) = half + hypot(diff, c) cos(2 theta - phi0); minimum at
    # 2 theta = phi0 + pi.
    theta = (0.5 * (math.atan2(c, diff) + math.pi)) % math.pi
    if sig_min > scan[k] + 1e-9 * (abs(scan[k]) + 1e-30):
        raise NumericsError("angle scan found a lower variance than the quadratic-form minimum")
    values = report.normalized()
    return _make_report(
        values,
        report.n_th,
        sigma_sq_scan=float(sig_min),
        theta_sq=float(theta),
        covariance=cov,
    )


# === entanglement =============================================================


@dataclass(frozen=True)
class NegativityResult:
    """Logarithmic negativity of the signal-idler pair."""

    e_n: float
    sigma_sq_abs: float
    sigma_zpm: float


def log_negativity(sigma_sq_abs: float, sigma_zpm: float = SIGMA_ZPM) -> NegativityResult:
    """E_N = -(1/2) log2[min(sigma_sq_abs/sigma_zpm, 1)]; zero when separable."""
    if sigma_sq_abs < 0 or math.isnan(sigma_sq_abs):
        raise ParameterError(
            f"sigma_sq_abs must be >= 0, got {sigma_sq_abs}",
            [("sigma_sq_abs", "must be non-negative")],
        )
    if not (sigma_zpm > 0):
        raise ParameterError(
            f"sigma_zpm must be > 0, got {sigma_zpm}", [("sigma_zpm", "must be positive")]
        )
    ratio = min(sigma_sq_abs / sigma_zpm, 1.0)
    e_n = 0.0 if ratio >= 1.0 else -0.5 * math.log2(ratio)
    return NegativityResult(e_n=e_n, sigma_sq_abs=float(sigma_sq_abs), sigma_zpm=float(sigma_zpm))


def _negativity_point(mu: float, kappa: float, n_th: float) -> tuple[float, float]:
    """(E_N, sigma_sq_abs) from the closed-form squeezed variance.

    The map construction evaluates the below-threshold squeezed formula at
    every drive (its analytic continuation past threshold), which is what
    produces the large-drive 1/mu^2 entanglement scaling; the numerically
    integrated co-rotating variances saturate above threshold instead (see
    variances_u1xz2).
    """
    sigma_abs = (n_th + 0.5) * _sigma_sq_formula(mu, kappa)
    res = log_negativity(sigma_abs)
    return res.e_n, sigma_abs


def negativity_map(mu_grid, kappa_grid, n_th: float = 0.0) -> list[tuple[float, float, float, float, float]]:
    """E_N over a (mu, kappa) product grid at fixed occupancy.

    Rows are (mu, kappa, n_th, e_n, sigma_sq_abs), kappa-major.  kappa = inf
    rows give the Markovian comparator.  Per-point failures re-raise with
    the grid location.
    """
    if n_th < 0:
        raise ParameterError(f"n_th must be >= 0, got {n_th}", [("n_th", "must be non-negative")])
    rows = []
    for j, kappa in enumerate(np.asarray(kappa_grid, dtype=float)):
        for i, mu in enumerate(np.asarray(mu_grid, dtype=float)):
            try:
                e_n, sig = _negativity_point(float(mu), float(kappa), n_th)
            except Exception as exc:
                raise NumericsError(
                    f"negativity map point (i={i}, j={j}) mu={mu}, kappa={kappa}: {exc}"
                ) from exc
            rows.append((float(mu), float(kappa), float(n_th), e_n, sig))
    return rows


def negativity_occupancy_sweep(
    kappa: float, mu_grid, n_th_values, markovian_comparator: bool = False
) -> list[tuple[float, float, float, float, float]]:
    """Drive sweeps of E_N at fixed kappa for several occupancies.

    Rows are (mu, kappa, n_th, e_n, sigma_sq_abs), one block per occupancy;
    with markovian_comparator, each occupancy gains a kappa = inf block.
    """
    rows = []
    for n_th in n_th_values:
        rows += negativity_map(mu_grid, [kappa], float(n_th))
        if markovian_comparator:
            rows += negativity_map(mu_grid, [math.inf], float(n_th))
    return rows
