"""System parameters and the exponential memory kernel.

Conventions used throughout the package:

* gamma0  - signal/idler decay rate (sets the base frequency unit),
* gammaP  - pump decay rate, required fast: gammaP >= 10*gamma0,
* tau_r   - memory (response) time of the damping kernel; tau_r = 0 is the
  exact Markovian limit,
* kappa   - dimensionless memory parameter, kappa = 1/(gamma0*tau_r),
  kappa = inf in the Markovian limit,
* g       - parametric coupling rate,
* mu      - drive amplitude in units of the critical drive F_cr,
* n_th_*  - thermal occupancies of the baths (idler, signal, pump).

Memory kernel: gamma(t) = gamma0 * exp(-t/tau_r)/tau_r for t >= 0, zero for
t < 0.  Fourier transform gamma~(omega) = gamma0 / (1 - i*omega*tau_r); its
real part gamma0 / (1 + (omega*tau_r)^2) is the damping quadrature that
enters fluctuation-dissipation relations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NegativeOccupancy,
    NonPositiveRate,
    ParameterError,
    PumpNotFast,
    SlowPumpWarning,
)

# Pump must be at least this many times faster than the signal decay.
MIN_PUMP_RATIO = 10.0
# Below this ratio the adiabatic (instantaneous-pump) formulas degrade.
ADIABATIC_PUMP_RATIO = 100.0


@dataclass(frozen=True)
class DeltaAtOrigin:
    """Sentinel for the Markovian kernel evaluated at t = 0.

    The tau_r -> 0 kernel is a Dirac delta of the given weight; it has no
    finite value at the origin, so time-domain evaluation returns this
    marker instead of a number.
    """

    weight: float

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class MemoryKernel:
    """Exponential damping kernel with total weight gamma0."""

    gamma0: float
    tau_r: float  # 0 means exact Markovian (delta kernel)

    def __post_init__(self):
        if not (self.gamma0 > 0):
            raise NonPositiveRate(
                f"gamma0 must be > 0, got {self.gamma0}",
                [("gamma0", "must be strictly positive")],
            )
        if self.tau_r < 0:
            raise NonPositiveRate(
                f"tau_r must be >= 0, got {self.tau_r}",
                [("tau_r", "must be non-negative")],
            )


def kernel_time(kernel: MemoryKernel, t):
    """Evaluate gamma(t); causal, so zero for t < 0.

    For tau_r = 0 returns DeltaAtOrigin(gamma0) at t = 0 (scalar input only)
    and 0.0 elsewhere: the Markovian kernel is never represented by a finite
    number at the origin.
    """
    if kernel.tau_r == 0.0:
        if np.ndim(t) == 0:
            if t == 0:
                return DeltaAtOrigin(kernel.gamma0)
            return 0.0
        t = np.asarray(t, dtype=float)
        if np.any(t == 0):
            raise ParameterError(
                "Markovian kernel has no finite value at t = 0; "
                "evaluate scalar t = 0 to receive the delta sentinel"
            )
        return np.zeros_like(t)
    t_arr = np.asarray(t, dtype=float)
    out = np.where(t_arr >= 0, np.exp(-t_arr / kernel.tau_r) * (kernel.gamma0 / kernel.tau_r), 0.0)
    if np.ndim(t) == 0:
        return float(out)
    return out


def kernel_freq(kernel: MemoryKernel, omega):
    """Fourier transform gamma~(omega) = gamma0 / (1 - i*omega*tau_r).

    Markovian limit (tau_r = 0) is flat: gamma0 for every omega.  Satisfies
    gamma~(-omega) = conj(gamma~(omega)) and gamma~(0) = integral of the
    time-domain kernel.
    """
    om = np.asarray(omega, dtype=float)
    out = kernel.gamma0 / (1.0 - 1j * om * kernel.tau_r)
    if np.ndim(omega) == 0:
        return complex(out)
    return out


def kernel_freq_real(kernel: MemoryKernel, omega):
    """Damping quadrature Re gamma~ = gamma0 / (1 + (omega*tau_r)^2)."""
    om = np.asarray(omega, dtype=float)
    out = kernel.gamma0 / (1.0 + (om * kernel.tau_r) ** 2)
    if np.ndim(omega) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class SystemParams:
    """Validated parameter set for the driven two-mode system.

    kappa and F_cr are derived on construction.  Use from_kappa() to specify
    the memory through kappa instead of tau_r.  Validation raises the most
    specific ParameterError subclass for the first violation found, with the
    full violation list attached.
    """

    gamma0: float
    gammaP: float
    tau_r: float
    g: float
    mu: float
    n_th_i: float = 0.0
    n_th_s: float = 0.0
    n_th_P: float = 0.0
    kappa: float = field(init=False)
    F_cr: float = field(init=False)

    def __post_init__(self):
        violations = _collect_violations(self)
        if violations:
            by_kind = {"rate": NonPositiveRate, "occupancy": NegativeOccupancy, "pump": PumpNotFast}
            pairs = [(fieldname, msg) for _, fieldname, msg in violations]
            text = "; ".join(f"{f}: {m}" for f, m in pairs)
            raise by_kind.get(violations[0][0], ParameterError)(text, pairs)
        if self.gammaP < ADIABATIC_PUMP_RATIO * self.gamma0:
            warnings.warn(
                f"gammaP = {self.gammaP} is below {ADIABATIC_PUMP_RATIO}*gamma0; "
                "adiabatic pump-elimination formulas will be approximate",
                SlowPumpWarning,
                stacklevel=2,
            )
        kappa = math.inf if self.tau_r == 0.0 else 1.0 / (self.gamma0 * self.tau_r)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "F_cr", self.gamma0 * self.gammaP / (4.0 * self.g))

    @classmethod
    def from_kappa(
        cls,
        gamma0: float,
        gammaP: float,
        kappa: float,
        g: float,
        mu: float,
        n_th_i: float = 0.0,
        n_th_s: float = 0.0,
        n_th_P: float = 0.0,
    ) -> "SystemParams":
        """Build from kappa; kappa = inf gives the Markovian tau_r = 0."""
        if not (kappa > 0):
            raise NonPositiveRate(
                f"kappa must be > 0, got {kappa}", [("kappa", "must be strictly positive")]
            )
        tau_r = 0.0 if math.isinf(kappa) else 1.0 / (gamma0 * kappa)
        return cls(gamma0, gammaP, tau_r, g, mu, n_th_i, n_th_s, n_th_P)

    @property
    def kernel(self) -> MemoryKernel:
        return MemoryKernel(self.gamma0, self.tau_r)

    @property
    def markovian(self) -> bool:
        return self.tau_r == 0.0

    def replace(self, **changes) -> "SystemParams":
        """Copy with fields replaced (derived fields recomputed)."""
        values = dict(
            gamma0=self.gamma0,
            gammaP=self.gammaP,
            tau_r=self.tau_r,
            g=self.g,
            mu=self.mu,
            n_th_i=self.n_th_i,
            n_th_s=self.n_th_s,
            n_th_P=self.n_th_P,
        )
        if "kappa" in changes:
            kap = changes.pop("kappa")
            changes["tau_r"] = 0.0 if math.isinf(kap) else 1.0 / (values["gamma0"] * kap)
        values.update(changes)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SlowPumpWarning)
            return SystemParams(**values)


def _collect_violations(p) -> list[tuple[str, str, str]]:
    """Return (kind, field, message) triples; empty when the set is valid."""
    out = []
    for name in ("gamma0", "gammaP", "g"):
        v = getattr(p, name)
        if not (v > 0) or math.isinf(v) or math.isnan(v):
            out.append(("rate", name, f"must be strictly positive and finite, got {v}"))
    if p.tau_r < 0 or math.isnan(p.tau_r):
        out.append(("rate", "tau_r", f"must be non-negative, got {p.tau_r}"))
    if math.isnan(p.mu) or p.mu < 0:
        out.append(("drive", "mu", f"must be non-negative, got {p.mu}"))
    for name in ("n_th_i", "n_th_s", "n_th_P"):
        v = getattr(p, name)
        if v < 0 or math.isnan(v):
            out.append(("occupancy", name, f"must be non-negative, got {v}"))
    rates_ok = not any(f in ("gamma0", "gammaP") for _, f, _ in out)
    if rates_ok and p.gammaP < MIN_PUMP_RATIO * p.gamma0:
        out.append(
            (
                "pump",
                "gammaP",
                f"must be at least {MIN_PUMP_RATIO}*gamma0 = {MIN_PUMP_RATIO * p.gamma0}, got {p.gammaP}",
            )
        )
    return out


def validate(params: SystemParams) -> SystemParams:
    """Re-check an existing parameter set, returning it when valid.

    SystemParams already validates on construction; this entry point exists
    for parameter sets that cross serialization boundaries.
    """
    violations = _collect_violations(params)
    if violations:
        pairs = [(f, m) for _, f, m in violations]
        raise ParameterError("; ".join(f"{f}: {m}" for f, m in pairs), pairs)
    return params


# Parameter files: flat "key = value" lines.  kappa and tau_r are mutually
# exclusive ways to give the memory scale; unknown keys are rejected.
_PARAM_KEYS = ("gamma0", "gammaP", "tau_r", "kappa", "g", "mu", "n_th_i", "n_th_s", "n_th_P")
_PARAM_DEFAULTS = {
    "gamma0": 1.0,
    "gammaP": 100.0,
    "g": 0.01,
    "mu": 0.0,
    "n_th_i": 0.0,
    "n_th_s": 0.0,
    "n_th_P": 0.0,
}


def parse_params_text(text: str) -> SystemParams:
    """Parse flat key = value parameter text into SystemParams.

    Blank lines and lines starting with '#' are ignored.  Exactly one of
    tau_r / kappa must be present.  Keys outside the known set are errors.
    """
    raw: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParameterError(
                f"line {lineno}: expected 'key = value', got {stripped!r}",
                [(f"line {lineno}", "not a key = value pair")],
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _PARAM_KEYS:
            raise ParameterError(
                f"line {lineno}: unknown key {key!r}", [(key, "unknown parameter key")]
            )
        if key in raw:
            raise ParameterError(
                f"line {lineno}: duplicate key {key!r}", [(key, "given more than once")]
            )
        try:
            raw[key] = float(value.strip())
        except ValueError:
            raise ParameterError(
                f"line {lineno}: could not parse value for {key!r}: {value.strip()!r}",
                [(key, "value is not a number")],
            ) from None
    if "tau_r" in raw and "kappa" in raw:
        raise ParameterError(
            "give either tau_r or kappa, not both",
            [("tau_r", "mutually exclusive with kappa")],
        )
    if "tau_r" not in raw and "kappa" not in raw:
        raise ParameterError(
            "one of tau_r or kappa is required",
            [("tau_r", "missing (or give kappa)")],
        )
    merged = dict(_PARAM_DEFAULTS)
    merged.update(raw)
    if "kappa" in merged:
        kappa = merged.pop("kappa")
        return SystemParams.from_kappa(
            merged["gamma0"],
            merged["gammaP"],
            kappa,
            merged["g"],
            merged["mu"],
            merged["n_th_i"],
            merged["n_th_s"],
            merged["n_th_P"],
        )
    return SystemParams(**merged)


def load_params(path) -> SystemParams:
    """Read a flat key = value parameter file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_params_text(fh.read())
