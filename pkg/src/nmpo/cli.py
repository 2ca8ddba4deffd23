"""Command-line front end for sweeps and one-shot computations.

Outputs are reproducible artifacts: every file starts with a metadata
header (tool version, subcommand, fully resolved parameters, seed) and
contains no timestamps, so re-running a command with the echoed parameters
reproduces the data section byte for byte.  CSV is long-format, one row per
grid point.  Exit codes: 0 success, 2 parameter validation (JSON
diagnostics on stderr), 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import NumericsError, ParameterError
from .linres import build_embedded_matrix, eigenflow_sweep, eigenspectrum
from .meanfield import (
    Phase,
    classify_phase,
    mode_amplitudes,
    phase_diagram,
    steady_state,
    steady_state_residual,
)
from .model import SystemParams
from .sde import (
    SimConfig,
    estimate_order_parameters,
    estimate_quadrature_variances,
    integrate_trajectory,
)
from .spectra import (
    integrate_variances,
    negativity_map,
    negativity_occupancy_sweep,
    psd,
    variances_above_threshold_u1,
    variances_below_threshold,
    variances_u1xz2,
)

_FMT = "%.12g"


# === shared plumbing ==========================================================


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors through the JSON diagnostic path."""

    def error(self, message):
        raise ParameterError(message, [("argv", message)])


def _fmt(x) -> str:
    if isinstance(x, Phase):
        return x.value
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return _FMT % float(x)


def _parse_values(spec: str, name: str) -> np.ndarray:
    """Grid syntax: 'min:max:count' (inclusive linspace), 'a,b,c', or 'a'."""
    spec = spec.strip()
    try:
        if ":" in spec:
            lo_s, hi_s, n_s = spec.split(":")
            lo, hi, n = float(lo_s), float(hi_s), int(n_s)
            if n < 1:
                raise ValueError("count must be >= 1")
            return np.linspace(lo, hi, n)
        return np.array([float(v) for v in spec.split(",")], dtype=float)
    except (ValueError, TypeError) as exc:
        raise ParameterError(
            f"{name}: expected 'min:max:count', 'a,b,c' or a number, got {spec!r} ({exc})",
            [(name, "bad grid spec")],
        ) from exc


def _thread_count() -> int:
    raw = os.environ.get("NMPO_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ParameterError(
            f"NMPO_THREADS must be an integer, got {raw!r}", [("NMPO_THREADS", "not an integer")]
        ) from exc


def _pmap(fn, items):
    """Map preserving input order; threaded when NMPO_THREADS > 1."""
    items = list(items)
    n = _thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _kappa_values(args, name="--kappa") -> np.ndarray:
    if getattr(args, "tau_r", None) is not None:
        tau = args.tau_r
        if tau == 0:
            return np.array([math.inf])
        return np.array([1.0 / (args.gamma0 * tau)])
    return _parse_values(args.kappa, name)


def _params_at(args, mu: float, kappa: float, n_th: float | None = None) -> SystemParams:
    nth = args.nth_scalar if n_th is None else n_th
    nth_p = args.nth_pump if args.nth_pump is not None else nth
    return SystemParams.from_kappa(
        gamma0=args.gamma0,
        gammaP=args.gammaP,
        kappa=kappa,
        g=args.g,
        mu=mu,
        n_th_i=nth,
        n_th_s=nth,
        n_th_P=nth_p,
    )


def _meta_lines(args, command: str, extra: dict | None = None) -> list[str]:
    fields = {
        "gamma0": args.gamma0,
        "gammaP": args.gammaP,
        "g": args.g,
        "nth": getattr(args, "nth", None),
        "nth_pump": args.nth_pump,
        "seed": getattr(args, "seed", None),
    }
    if getattr(args, "tau_r", None) is not None:
        fields["tau_r"] = args.tau_r
    fields.update(extra or {})
    parts = " ".join(f"{k}={v}" for k, v in fields.items() if v is not None)
    return [f"# nmpo {__version__}", f"# command: {command}", f"# params: {parts}"]


def _write_text(path: str, text: str) -> None:
    if path in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_csv(args, command, extra_meta, columns, rows) -> None:
    lines = _meta_lines(args, command, extra_meta)
    lines.append("# columns: " + ",".join(columns))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(args.out, "\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Phase):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _write_json(args, command, payload, extra_meta=None) -> None:
    meta = {
        "tool": "nmpo",
        "version": __version__,
        "command": command,
        "gamma0": args.gamma0,
        "gammaP": args.gammaP,
        "g": args.g,
        "nth": getattr(args, "nth", None),
        "nth_pump": args.nth_pump,
    }
    if getattr(args, "seed", None) is not None:
        meta["seed"] = args.seed
    meta.update(extra_meta or {})
    doc = {"meta": _jsonable(meta)}
    doc.update(_jsonable(payload))
    _write_text(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _add_common(sub, kappa_default: str | None, nth_list: bool = False):
    sub.add_argument("--gamma0", type=float, default=1.0, help="bare damping rate (default 1)")
    sub.add_argument("--gammaP", type=float, default=100.0, help="pump decay rate (default 100)")
    grp = sub.add_mutually_exclusive_group()
    if kappa_default is None:
        grp.add_argument("--kappa", help="normalized reservoir rate 1/(gamma0 tau_r); grid or list")
    else:
        grp.add_argument(
            "--kappa",
            default=kappa_default,
            help=f"normalized reservoir rate; grid or list (default {kappa_default})",
        )
    grp.add_argument("--tau-r", dest="tau_r", type=float, help="reservoir memory time (0 = Markovian)")
    sub.add_argument("--g", type=float, default=0.01, help="mode coupling (default 0.01)")
    if nth_list:
        sub.add_argument("--nth", default="0", help="thermal occupancy; comma list allowed")
    else:
        sub.add_argument("--nth", type=float, default=0.0, help="thermal occupancy (default 0)")
    sub.add_argument(
        "--nth-pump", dest="nth_pump", type=float, default=None,
        help="pump occupancy (default: same as --nth)",
    )
    sub.add_argument("--out", default="-", help="output path; '-' for stdout (default)")
    sub.add_argument("--format", choices=("csv", "json"), default=None, help="output format")


# === subcommands ==============================================================


def _cmd_steady_state(args) -> int:
    kappa = float(_kappa_values(args)[0])
    args.nth_scalar = args.nth
    p = _params_at(args, args.mu, kappa)
    ss = steady_state(p, z2_branch=args.z2_branch, phi=args.phi)
    a_i, a_s, a_p = mode_amplitudes(ss, 0.0)
    spec = eigenspectrum(build_embedded_matrix(p, ss))
    payload = {
        "phase": ss.phase,
        "mu": args.mu,
        "kappa": kappa,
        "mu_cr": ss.mu_cr,
        "delta": ss.delta,
        "z2_branch": ss.z2_branch,
        "phi": ss.phi,
        "A_i": complex(a_i),
        "A_s": complex(a_s),
        "A_P": complex(a_p),
        "residual": steady_state_residual(p, ss),
        "max_re_lambda": spec.max_re,
        "stable": spec.stable,
    }
    _write_json(args, "steady-state", payload, {"mu": args.mu, "kappa": kappa})
    return 0


def _cmd_phase_diagram(args) -> int:
    mu_grid = _parse_values(args.mu, "--mu")
    kappa_grid = _kappa_values(args)
    args.nth_scalar = args.nth
    base = _params_at(args, 0.0, float(kappa_grid[0]))
    rows = phase_diagram(mu_grid, kappa_grid, base=base)
    _write_csv(
        args,
        "phase-diagram",
        {"mu": args.mu, "kappa": args.kappa},
        ("mu", "kappa", "phase", "max_re_lambda"),
        rows,
    )
    return 0


def _cmd_eigenflow(args) -> int:
    mu_grid = _parse_values(args.mu, "--mu")
    kappa_values = _kappa_values(args)
    args.nth_scalar = args.nth
    meta = {"mu": args.mu, "kappa": ",".join(_fmt(k) for k in kappa_values)}
    out_rows = []
    for kappa in kappa_values:
        base = _params_at(args, 0.0, float(kappa))
        res = eigenflow_sweep(float(kappa), mu_grid, base=base)
        meta[f"mu_cr[kappa={_fmt(kappa)}]"] = _fmt(res.mu_cr)
        meta[f"mu_ep[kappa={_fmt(kappa)}]"] = "none" if res.mu_ep is None else _fmt(res.mu_ep)
        for mu, branch, lams in res.rows:
            for idx, lam in enumerate(lams):
                out_rows.append((kappa, mu, branch, idx, lam.real, lam.imag))
    _write_csv(
        args,
        "eigenflow",
        meta,
        ("kappa", "mu", "branch", "index", "re_lambda", "im_lambda"),
        out_rows,
    )
    return 0


def _variance_report_at(args, mu: float, kappa: float, method: str):
    phase = classify_phase(mu, kappa)
    if method == "auto":
        method = "integrate" if phase is Phase.U1XZ2 else "closed"
    if method == "closed":
        if phase is Phase.DISORDERED:
            return phase, variances_below_threshold(mu, kappa, args.nth)
        if phase is Phase.U1:
            return phase, variances_above_threshold_u1(mu, kappa, args.nth, args.nth_pump)
        raise ParameterError(
            f"no closed-form variances in the rotating phase (mu={mu}, kappa={kappa}); "
            "use --method integrate",
            [("method", "closed form unavailable")],
        )
    p = _params_at(args, mu, kappa, n_th=args.nth)
    if phase is Phase.U1XZ2:
        return phase, variances_u1xz2(p)
    sd = psd(p, steady_state(p), n_grid=64)
    return phase, integrate_variances(sd)


def _cmd_variances(args) -> int:
    mu_grid = _parse_values(args.mu, "--mu")
    kappa_grid = _kappa_values(args)
    args.nth_scalar = args.nth
    single = mu_grid.size == 1 and kappa_grid.size == 1
    fmt = args.format or ("json" if single else "csv")
    if fmt == "json":
        if not single:
            raise ParameterError(
                "json output requires scalar --mu and --kappa", [("format", "grid needs csv")]
            )
        phase, rep = _variance_report_at(args, float(mu_grid[0]), float(kappa_grid[0]), args.method)
        payload = {
            "mu": float(mu_grid[0]),
            "kappa": float(kappa_grid[0]),
            "phase": phase,
            "method": args.method,
            "sigma": rep.normalized(),
            "absolute": rep.absolute,
            "divergent": rep.divergent,
            "squeezed": rep.squeezed,
            "amplified": rep.amplified,
            "n_th": rep.n_th,
            "sigma_sq_scan": rep.sigma_sq_scan,
            "theta_sq": rep.theta_sq,
        }
        _write_json(args, "variances", payload, {"mu": _fmt(mu_grid[0]), "kappa": _fmt(kappa_grid[0])})
        return 0

    points = [(float(mu), float(kappa)) for kappa in kappa_grid for mu in mu_grid]

    def at(pt):
        mu, kappa = pt
        try:
            phase, rep = _variance_report_at(args, mu, kappa, args.method)
        except NumericsError as exc:
            raise NumericsError(f"variances at mu={mu}, kappa={kappa}: {exc}") from exc
        s = rep.normalized()
        return (
            mu, kappa, phase,
            s["x+"], s["x-"], s["y+"], s["y-"], rep.min_sigma(),
            rep.divergent["x+"], rep.divergent["x-"], rep.divergent["y+"], rep.divergent["y-"],
        )

    rows = _pmap(at, points)
    _write_csv(
        args,
        "variances",
        {"mu": args.mu, "kappa": args.kappa, "method": args.method},
        (
            "mu", "kappa", "phase",
            "sigma_x_plus", "sigma_x_minus", "sigma_y_plus", "sigma_y_minus", "sigma_sq",
            "div_x_plus", "div_x_minus", "div_y_plus", "div_y_minus",
        ),
        rows,
    )
    return 0


def _cmd_negativity(args) -> int:
    mu_grid = _parse_values(args.mu, "--mu")
    kappa_grid = _kappa_values(args)
    nth_values = _parse_values(args.nth, "--nth")
    args.nth_scalar = float(nth_values[0])
    if nth_values.size > 1 or args.markovian_comparator:
        if kappa_grid.size != 1:
            raise ParameterError(
                "occupancy sweep needs a scalar --kappa", [("kappa", "must be scalar")]
            )
        rows = negativity_occupancy_sweep(
            float(kappa_grid[0]), mu_grid, nth_values, args.markovian_comparator
        )
    else:
        rows = negativity_map(mu_grid, kappa_grid, float(nth_values[0]))
    _write_csv(
        args,
        "negativity",
        {"mu": args.mu, "kappa": args.kappa, "comparator": int(args.markovian_comparator)},
        ("mu", "kappa", "n_th", "e_n", "sigma_sq_abs"),
        rows,
    )
    return 0


def _dump_trajectory(args, traj) -> None:
    dec = max(1, args.decimate)
    idx = args.traj_index
    if not (0 <= idx < traj.config.n_traj):
        raise ParameterError(
            f"--traj-index {idx} out of range for n_traj={traj.config.n_traj}",
            [("traj_index", "out of range")],
        )
    cols = ["t"]
    series = [traj.t[::dec]]
    for name in ("A_i", "A_s", "A_P"):
        arr = getattr(traj, name)
        if arr is None:
            continue
        cols += [f"re_{name}", f"im_{name}"]
        series += [arr[::dec, idx].real, arr[::dec, idx].imag]
    lines = _meta_lines(args, "simulate --dump-traj", {"traj_index": idx, "decimate": dec})
    lines.append("# columns: " + ",".join(cols))
    lines.append(",".join(cols))
    for vals in zip(*series):
        lines.append(",".join(_fmt(v) for v in vals))
    with open(args.dump_traj, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_simulate(args) -> int:
    kappa_values = _kappa_values(args)
    args.nth_scalar = args.nth
    single = kappa_values.size == 1

    def config_for(p: SystemParams, seed: int) -> SimConfig:
        tau = p.tau_r
        dt = args.dt if args.dt is not None else min(2.0 / p.gammaP, 1.0 / p.gamma0, tau or math.inf) / 25.0
        t_burn = args.t_burn if args.t_burn is not None else 20.0 * max(1.0 / p.gamma0, tau)
        return SimConfig(
            dt=dt,
            t_burn=t_burn,
            t_sample=args.t_sample,
            n_traj=args.n_traj,
            seed=seed,
            scheme=args.scheme,
            record_stride=args.record_stride,
            record_fields=("A_i", "A_s", "A_P"),
            noise=not args.no_noise,
        )

    results = []
    for i, kappa in enumerate(kappa_values):
        p = _params_at(args, args.mu, float(kappa))
        cfg = config_for(p, args.seed + i)
        traj = integrate_trajectory(p, cfg)
        est = estimate_order_parameters(traj)
        results.append((float(kappa), cfg, traj, est))

    if single:
        kappa, cfg, traj, est = results[0]
        payload = {
            "mu": args.mu,
            "kappa": kappa,
            "order_parameters": {
                "amp_mean": est.amp_mean,
                "amp_se": est.amp_se,
                "delta_est": est.delta_est,
                "delta_se": est.delta_se,
                "var_phi_dot": est.var_phi_dot,
                "var_phi_dot_se": est.var_phi_dot_se,
                "window": est.window,
                "branch_locked": est.branch_locked,
            },
            "config": {
                "dt": cfg.dt,
                "t_burn": cfg.t_burn,
                "t_sample": cfg.t_sample,
                "n_traj": cfg.n_traj,
                "seed": cfg.seed,
                "scheme": cfg.scheme,
                "record_stride": cfg.record_stride,
                "noise": cfg.noise,
            },
        }
        if args.quadratures:
            rep = estimate_quadrature_variances(traj, frame=args.frame)
            payload["quadrature_variances"] = {
                "frame": args.frame,
                "sigma": rep.normalized(),
                "stderr": rep.stderr,
                "divergent": rep.divergent,
                "n_th": rep.n_th,
            }
        _write_json(args, "simulate", payload, {"mu": args.mu, "kappa": _fmt(kappa)})
        if args.dump_traj:
            _dump_trajectory(args, traj)
        return 0

    rows = [
        (
            kappa, args.mu, est.amp_mean, est.amp_se, est.delta_est, est.delta_se,
            est.var_phi_dot, est.var_phi_dot_se,
        )
        for kappa, cfg, traj, est in results
    ]
    _write_csv(
        args,
        "simulate",
        {"mu": args.mu, "kappa": args.kappa, "seed_rule": "seed+row_index",
         "window": _fmt(results[0][3].window)},
        (
            "kappa", "mu", "amp_mean", "amp_se", "delta_est", "delta_se",
            "var_phi_dot", "var_phi_dot_se",
        ),
        rows,
    )
    if args.dump_traj:
        _dump_trajectory(args, results[0][2])
    return 0


# === driver ===================================================================


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="nmpo",
        description="Driven two-mode system with reservoir memory: sweeps and estimators.",
    )
    parser.add_argument("--version", action="version", version=f"nmpo {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    ss = subs.add_parser(
        "steady-state",
        help="mean-field steady state at one (mu, kappa) point",
        epilog="JSON fields: phase, mu_cr, delta, z2_branch, phi, A_i/A_s/A_P (re, im), "
        "residual, max_re_lambda, stable.",
    )
    _add_common(ss, kappa_default="1")
    ss.add_argument("--mu", type=float, default=0.0, help="normalized drive (default 0)")
    ss.add_argument("--z2-branch", dest="z2_branch", type=int, choices=(1, -1), default=1,
                    help="rotation sense in the rotating phase (default 1)")
    ss.add_argument("--phi", type=float, default=0.0, help="gauge angle (default 0)")
    ss.set_defaults(func=_cmd_steady_state)

    pd = subs.add_parser(
        "phase-diagram",
        help="stable phase and spectral margin on a (mu, kappa) grid",
        epilog="CSV columns: mu, kappa, phase (disordered|u1|u1xz2), max_re_lambda "
        "(largest Re eigenvalue, gauge zero mode excluded above threshold).",
    )
    _add_common(pd, kappa_default="0.05:2:201")
    pd.add_argument("--mu", default="0:2:201", help="drive grid (default 0:2:201)")
    pd.set_defaults(func=_cmd_phase_diagram)

    ef = subs.add_parser(
        "eigenflow",
        help="eigenvalue flow vs drive for each branch at fixed kappa",
        epilog="CSV columns: kappa, mu, branch (steady-state family), index (sorted by "
        "descending Re), re_lambda, im_lambda.  Header lists mu_cr and mu_ep per kappa.",
    )
    _add_common(ef, kappa_default="1.25,0.5,0.15")
    ef.add_argument("--mu", default="0:2:401", help="drive grid (default 0:2:401)")
    ef.set_defaults(func=_cmd_eigenflow)

    va = subs.add_parser(
        "variances",
        help="stationary cross-quadrature variances (closed form or integrated)",
        epilog="CSV columns: mu, kappa, phase, sigma_x_plus, sigma_x_minus, sigma_y_plus, "
        "sigma_y_minus (normalized to n_th+1/2; inf when divergent), sigma_sq (minimum, "
        "including the mixing-angle scan in the rotating phase), div_x_plus, div_x_minus, "
        "div_y_plus, div_y_minus (0|1).  Scalar point with json format: full report with "
        "divergent flags.",
    )
    _add_common(va, kappa_default="1")
    va.add_argument("--mu", default="0", help="drive value or grid (default 0)")
    va.add_argument("--method", choices=("closed", "integrate", "auto"), default="auto",
                    help="closed forms, spectral integration, or per-phase choice (default auto)")
    va.set_defaults(func=_cmd_variances)

    ng = subs.add_parser(
        "negativity",
        help="logarithmic negativity sweeps/maps from the squeezed variance",
        epilog="CSV columns: mu, kappa (inf = Markovian comparator), n_th, e_n, "
        "sigma_sq_abs (absolute squeezed variance; zero-point is 0.5).",
    )
    _add_common(ng, kappa_default="0.2", nth_list=True)
    ng.add_argument("--mu", default="0.05:40:400", help="drive grid (default 0.05:40:400)")
    ng.add_argument("--markovian-comparator", action="store_true",
                    help="append kappa=inf rows for each occupancy")
    ng.set_defaults(func=_cmd_negativity)

    si = subs.add_parser(
        "simulate",
        help="nonlinear stochastic trajectories and ensemble estimators",
        epilog="Sweep CSV columns: kappa, mu, amp_mean, amp_se, delta_est, delta_se, "
        "var_phi_dot, var_phi_dot_se (row i uses seed+i).  Scalar kappa: JSON estimator "
        "report with config echoed.  --dump-traj CSV columns: t, re_A_i, im_A_i, re_A_s, "
        "im_A_s, re_A_P, im_A_P.",
    )
    _add_common(si, kappa_default="1")
    si.add_argument("--mu", type=float, default=0.0, help="normalized drive (default 0)")
    si.add_argument("--n-traj", dest="n_traj", type=int, default=100,
                    help="trajectory count (default 100)")
    si.add_argument("--dt", type=float, default=None,
                    help="time step (default: fastest timescale / 25)")
    si.add_argument("--t-burn", dest="t_burn", type=float, default=None,
                    help="discarded transient (default: 20 x slowest timescale)")
    si.add_argument("--t-sample", dest="t_sample", type=float, default=200.0,
                    help="measurement window (default 200)")
    si.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    si.add_argument("--scheme", choices=("euler-maruyama", "stochastic-heun"),
                    default="stochastic-heun", help="integration scheme")
    si.add_argument("--record-stride", dest="record_stride", type=int, default=4,
                    help="record every Nth step (default 4)")
    si.add_argument("--no-noise", action="store_true", help="deterministic integration")
    si.add_argument("--quadratures", action="store_true",
                    help="also estimate quadrature variances (scalar kappa only)")
    si.add_argument("--frame", choices=("static", "corotating"), default="static",
                    help="frame for quadrature estimation (default static)")
    si.add_argument("--dump-traj", dest="dump_traj", default=None,
                    help="write one trajectory as CSV to this path")
    si.add_argument("--decimate", type=int, default=1,
                    help="keep every Nth recorded sample in the dump (default 1)")
    si.add_argument("--traj-index", dest="traj_index", type=int, default=0,
                    help="which trajectory to dump (default 0)")
    si.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ParameterError as exc:
        diag = {"error": type(exc).__name__, "violations": exc.violations, "detail": str(exc)}
        print(json.dumps(diag, sort_keys=True), file=sys.stderr)
        return 2
    except NumericsError as exc:
        diag = {"error": type(exc).__name__, "detail": str(exc)}
        print(json.dumps(diag, sort_keys=True), file=sys.stderr)
        return 3
    except OSError as exc:
        print(json.dumps({"error": "IOError", "detail": str(exc)}, sort_keys=True), file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
