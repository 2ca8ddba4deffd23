"""Mean-field steady states and the phase boundary.

Scaled amplitude equations (time in 1/gamma0 units is never assumed; rates
carry units):

    dA_i/dt = (1/2) [ -(gamma * A_i)(t) + i*gamma0 * conj(A_s) * A_P ]
    dA_s/dt = (1/2) [ -(gamma * A_s)(t) + i*gamma0 * conj(A_i) * A_P ]
    dA_P/dt = (1/2) [ -gammaP * A_P + i*gammaP * (A_i A_s + mu) ]

where (gamma * A)(t) is the memory-kernel convolution.  Stationary families:

* disordered: A_i = A_s = 0, A_P = i*mu; exists for every mu,
* u1 (kappa >= 1/2): |A_i| = |A_s| = sqrt(mu - 1), A_P = i, no rotation;
  breaks the U(1) gauge symmetry A_i -> A_i e^{i theta}, A_s -> A_s e^{-i theta},
* u1xz2 (kappa < 1/2): |A_i| = |A_s| = sqrt(mu - 2*kappa), A_P = 2*kappa*i,
  counter-rotating at delta = kappa*sqrt(1/(2*kappa) - 1) * gamma0; the
  rotation direction breaks an extra Z2 symmetry (branch = +1 or -1).

Critical drive mu_cr(kappa) = min(1, 2*kappa) in units of F_cr.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveRate, NumericsError, OutOfRegime
from .model import SystemParams, kernel_freq


class Phase(enum.Enum):
    DISORDERED = "disordered"
    U1 = "u1"
    U1XZ2 = "u1xz2"


def critical_drive(kappa: float) -> float:
    """Threshold drive mu_cr = min(1, 2*kappa); kappa = inf allowed."""
    if not (kappa > 0):
        raise NonPositiveRate(f"kappa must be > 0, got {kappa}", [("kappa", "must be positive")])
    return min(1.0, 2.0 * kappa)


def frequency_shift(kappa: float) -> float:
    """Rotation rate of the broken phase in gamma0 units.

    Zero for kappa >= 1/2; kappa*sqrt(1/(2*kappa) - 1) below.  Continuous at
    kappa = 1/2.
    """
    if not (kappa > 0):
        raise NonPositiveRate(f"kappa must be > 0, got {kappa}", [("kappa", "must be positive")])
    if kappa >= 0.5:
        return 0.0
    return kappa * math.sqrt(1.0 / (2.0 * kappa) - 1.0)


def classify_phase(mu: float, kappa: float) -> Phase:
    """Stable phase at drive mu; the boundary mu = mu_cr counts as disordered."""
    if mu <= critical_drive(kappa):
        return Phase.DISORDERED
    return Phase.U1 if kappa >= 0.5 else Phase.U1XZ2


@dataclass(frozen=True)
class SteadyState:
    """One stationary solution, possibly on an unstable branch.

    amp is the common magnitude of the signal and idler amplitudes; the full
    complex amplitudes follow from the gauge angle phi and branch via
    mode_amplitudes().  delta is the rotation rate (rad/time, >= 0 as stored;
    the branch carries the sign).  pump_amp is complex and non-rotating.
    """

    phase: Phase
    amp_signal: float
    amp_idler: float
    pump_amp: complex
    delta: float
    z2_branch: int
    phi: float
    mu_cr: float


def mode_amplitudes(ss: SteadyState, t: float = 0.0) -> tuple[complex, complex, complex]:
    """Complex (A_i, A_s, A_P) of the mean field at time t."""
    b = ss.z2_branch
    ph = b * (0.5 * ss.phi + ss.delta * t)
    a_i = 1j * ss.amp_idler * cmath.exp(1j * ph)
    a_s = 1j * ss.amp_signal * cmath.exp(-1j * ph)
    return a_i, a_s, ss.pump_amp


def steady_state_branch(
    params: SystemParams, phase: Phase, z2_branch: int = 1, phi: float = 0.0
) -> SteadyState:
    """Stationary solution of the requested family at params.mu.

    The family is evaluated wherever it exists, including where it is
    unstable (needed for eigenvalue flow across crossings).  OutOfRegime if
    the family has no real solution at this drive / memory.
    """
    if z2_branch not in (1, -1):
        raise OutOfRegime(f"z2_branch must be +1 or -1, got {z2_branch}")
    mu, kappa = params.mu, params.kappa
    mu_cr = critical_drive(kappa)
    if phase is Phase.DISORDERED:
        return SteadyState(Phase.DISORDERED, 0.0, 0.0, 1j * mu, 0.0, z2_branch, phi, mu_cr)
    if phase is Phase.U1:
        if mu < 1.0:
            raise OutOfRegime(f"u1 branch needs mu >= 1, got mu = {mu}")
        amp = math.sqrt(mu - 1.0)
        return SteadyState(Phase.U1, amp, amp, 1j, 0.0, z2_branch, phi, mu_cr)
    if phase is Phase.U1XZ2:
        if kappa >= 0.5:
            raise OutOfRegime(f"u1xz2 branch needs kappa < 1/2, got kappa = {kappa}")
        if mu < 2.0 * kappa:
            raise OutOfRegime(f"u1xz2 branch needs mu >= 2*kappa, got mu = {mu}")
        amp = math.sqrt(mu - 2.0 * kappa)
        delta = frequency_shift(kappa) * params.gamma0
        return SteadyState(Phase.U1XZ2, amp, amp, 2j * kappa, delta, z2_branch, phi, mu_cr)
    raise OutOfRegime(f"unknown phase {phase!r}")


def steady_state(params: SystemParams, z2_branch: int = 1, phi: float = 0.0) -> SteadyState:
    """Stable stationary solution at params.mu (disordered on the boundary)."""
    return steady_state_branch(params, classify_phase(params.mu, params.kappa), z2_branch, phi)


def steady_state_residual(params: SystemParams, ss: SteadyState) -> float:
    """Stationarity defect of ss under the amplitude equations.

    Signal/idler residuals are normalized by gamma0, the pump residual by
    gammaP, so the value is scale-free.  Exact solutions sit at rounding
    error (< 1e-10).
    """
    g0, gp, mu = params.gamma0, params.gammaP, params.mu
    a_i, a_s, a_p = mode_amplitudes(ss, 0.0)
    b = ss.z2_branch
    rot = b * ss.delta
    # Convolution of the kernel with a phase rotating as e^{+i rot t} gives
    # gamma~(-rot); the counter-rotating signal mode picks up gamma~(+rot).
    kern = params.kernel
    g_i = kernel_freq(kern, -rot)
    g_s = kernel_freq(kern, +rot)
    res_i = 0.5 * (-g_i * a_i + 1j * g0 * np.conj(a_s) * a_p) - 1j * rot * a_i
    res_s = 0.5 * (-g_s * a_s + 1j * g0 * np.conj(a_i) * a_p) + 1j * rot * a_s
    res_p = 0.5 * (-gp * a_p + 1j * gp * (a_i * a_s + mu))
    return max(abs(res_i) / g0, abs(res_s) / g0, abs(res_p) / gp)


def phase_diagram(
    mu_grid,
    kappa_grid,
    base: SystemParams | None = None,
    goldstone_tol: float = 1e-6,
) -> list[tuple[float, float, Phase, float]]:
    """Stable phase and spectral margin on a (mu, kappa) product grid.

    Returns rows (mu, kappa, phase, max_re_lambda) in kappa-major order.
    max_re_lambda is the largest real part of the linear-response spectrum
    about the stable state, excluding the single gauge zero mode above
    threshold (it sits at rounding error and carries no stability
    information).  Per-point failures re-raise with the grid location.
    """
    from . import linres  # deferred: linres depends on this module

    if base is None:
        base = SystemParams(gamma0=1.0, gammaP=100.0, tau_r=1.0, g=0.01, mu=0.0)
    rows = []
    for j, kappa in enumerate(np.asarray(kappa_grid, dtype=float)):
        for i, mu in enumerate(np.asarray(mu_grid, dtype=float)):
            try:
                p = base.replace(mu=float(mu), kappa=float(kappa))
                ss = steady_state(p)
                spec = linres.eigenspectrum(linres.build_embedded_matrix(p, ss))
                lam = list(spec.eigenvalues)
                if ss.phase is not Phase.DISORDERED:
                    zero = min(lam, key=abs)
                    if abs(zero) < goldstone_tol * p.gamma0:
                        lam.remove(zero)
                max_re = max(v.real for v in lam)
                rows.append((float(mu), float(kappa), ss.phase, max_re))
            except Exception as exc:
                raise NumericsError(
                    f"phase diagram point (i={i}, j={j}) mu={mu}, kappa={kappa}: {exc}"
                ) from exc
    return rows
