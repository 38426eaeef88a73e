"""Command-line interface.

Every command validates its configuration, runs the corresponding library
routine, and writes CSV or JSON to stdout or --out.  Outputs are
deterministic (fixed iteration orders, 17-significant-digit floats) so that
repeated invocations are byte-identical; the one exception is the sweep's
wall-time column, which is diagnostic.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import conditional, cvops, dynamics, feasibility, fits, hilbert
from .hilbert import FockVector

__all__ = ["main", "build_parser"]

_LAW_BY_FLAG = {"tau": "tau_opt", "p0": "p_zero", "xi": "xi_prep"}


class ConfigError(Exception):
    """Invalid command configuration discovered after flag parsing."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catsim",
        description="Bright cat-state preparation via parametric down-conversion: "
        "dynamics, heralding, fits, Wigner functions, feasibility.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--config", help="JSON file whose keys override this command's flags"
        )
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument(
            "--eps-tail", type=float, default=1e-12, help="pump Poisson tail bound"
        )
        p.add_argument(
            "--workers",
            type=int,
            default=None,
            help="worker processes (default: CATSIM_WORKERS or CPU count)",
        )
        p.add_argument(
            "--seed",
            type=int,
            default=0,
            help="reserved for optimizer restarts; the default pipeline is deterministic",
        )

    p = sub.add_parser("evolve", help="mean occupations vs tau (CSV)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tau-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=400)
    add_common(p)

    p = sub.add_parser("distribution", help="signal photon-number distribution (CSV)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tau", type=float, default=None, help="sample time")
    p.add_argument(
        "--at-max-ns",
        action="store_true",
        help="use the <n_s>-maximizing tau found on [0, tau-max]",
    )
    p.add_argument("--tau-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=400)
    add_common(p)

    p = sub.add_parser("pcurve", help="zero-pump-photon probability vs tau (CSV)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    add_common(p)

    p = sub.add_parser("conditional", help="heralded state at tau_opt (JSON)")
    p.add_argument("--beta", type=float, required=True)
    add_common(p)

    p = sub.add_parser("wigner", help="Wigner function of a stored state (CSV)")
    p.add_argument("--in", dest="infile", required=True, help="FockVector JSON")
    p.add_argument("--range", dest="extent", type=float, required=True)
    p.add_argument("--grid", type=int, required=True, help="points per axis")
    add_common(p)

    p = sub.add_parser("sweep", help="full pipeline over a beta grid (CSV)")
    p.add_argument(
        "--betas",
        required=True,
        help="comma-separated beta values, e.g. 2,3,5,8",
    )
    add_common(p)

    p = sub.add_parser("fit", help="recover a law's constants from a sweep CSV (JSON)")
    p.add_argument("--input", required=True, help="CSV produced by `catsim sweep`")
    p.add_argument("--law", choices=sorted(_LAW_BY_FLAG), required=True)
    add_common(p)

    p = sub.add_parser("feasibility", help="physical-units verdict (JSON)")
    p.add_argument("--chi2", type=float, default=feasibility.LITHIUM_NIOBATE.chi2)
    p.add_argument("--ns", type=float, default=feasibility.LITHIUM_NIOBATE.n_s)
    p.add_argument("--np", type=float, default=feasibility.LITHIUM_NIOBATE.n_p)
    p.add_argument(
        "--lambda-s", type=float, default=feasibility.LITHIUM_NIOBATE.wavelength_s
    )
    p.add_argument(
        "--volume",
        type=float,
        default=feasibility.LITHIUM_NIOBATE.mode_volume,
        help="mode volume in cubic meters",
    )
    p.add_argument("--q", type=float, default=feasibility.LITHIUM_NIOBATE.quality_factor)
    p.add_argument("--beta", type=float, default=feasibility.LITHIUM_NIOBATE.beta)
    p.add_argument(
        "--gamma",
        type=float,
        default=None,
        help="override the material coupling rate (1/s)",
    )
    add_common(p)

    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser):
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read --config: {exc}")
    if not isinstance(doc, dict):
        parser.error("--config must hold a JSON object")
    for key, value in doc.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            parser.error(f"--config key {key!r} does not match any flag")
        setattr(args, dest, value)


def _validate_positive(parser, **named):
    for name, value in named.items():
        if value is None or not math.isfinite(value) or value <= 0:
            parser.error(f"--{name} must be a positive finite number, got {value}")


def _cmd_evolve(args) -> str:
    taus = np.linspace(0.0, args.tau_max, args.steps)
    records = dynamics.energy_series(args.beta, taus, eps_tail=args.eps_tail)
    rows = [(r.tau, r.mean_ns, 2.0 * r.mean_np, r.sum_energy) for r in records]
    return _csv(["tau", "mean_ns", "two_mean_np", "sum_energy"], rows)


def _cmd_distribution(args) -> str:
    state = hilbert.initial_block_state(args.beta, args.eps_tail)
    if args.at_max_ns:
        taus = np.linspace(0.0, args.tau_max, args.steps)
        records = dynamics.energy_series(args.beta, taus, eps_tail=args.eps_tail)
        tau = max(records, key=lambda r: r.mean_ns).tau
    elif args.tau is not None:
        tau = args.tau
    else:
        raise ConfigError("one of --tau or --at-max-ns is required")
    evolved = dynamics.evolve(state, tau)
    probs = hilbert.signal_distribution(evolved)
    return _csv(["n", "probability"], list(enumerate(probs)))


def _cmd_pcurve(args) -> str:
    taus = np.linspace(0.0, args.tau_max, args.steps)
    p0 = conditional.p_zero_curve(args.beta, taus, eps_tail=args.eps_tail)
    return _csv(["tau", "p0"], zip(taus, p0))


def _cmd_conditional(args) -> str:
    res = conditional.find_tau_opt(args.beta, eps_tail=args.eps_tail)
    doc = {
        "beta": res.beta,
        "tau_opt": res.tau_opt,
        "p0": res.p0,
        "state": res.psi_raw.to_json_dict(),
    }
    return _json_text(doc)


def _load_fock(path: str) -> FockVector:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if "state" in doc and isinstance(doc["state"], dict):
        doc = doc["state"]  # accept `catsim conditional` output directly
    return FockVector.from_json_dict(doc)


def _cmd_wigner(args) -> str:
    psi = _load_fock(args.infile)
    if abs(psi.norm() - 1.0) > 1e-8:
        psi = psi.normalize()
    x = np.linspace(-args.extent, args.extent, args.grid)
    grid = cvops.wigner(psi, x, x)
    rows = []
    for i, xv in enumerate(grid.x):
        for j, pv in enumerate(grid.p):
            rows.append((xv, pv, grid.values[i, j]))
    return _csv(["x", "p", "w"], rows)


def _cmd_sweep(args) -> str:
    try:
        betas = [float(tok) for tok in str(args.betas).split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse --betas: {exc}") from exc
    if not betas:
        raise ConfigError("--betas must list at least one value")
    records = fits.sweep(betas, eps_tail=args.eps_tail, workers=args.workers)
    return _csv(list(fits.SWEEP_COLUMNS), fits.records_to_rows(records))


def _cmd_fit(args) -> str:
    with open(args.input, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0].split(",") != list(fits.SWEEP_COLUMNS):
        raise ConfigError(
            f"{args.input}: expected a sweep CSV with header {','.join(fits.SWEEP_COLUMNS)}"
        )
    records = fits.rows_to_records(ln.split(",") for ln in lines[1:])
    law = _LAW_BY_FLAG[args.law]
    fitter = {
        "tau_opt": fits.fit_tau_opt,
        "p_zero": fits.fit_p_zero,
        "xi_prep": fits.fit_xi_prep,
    }[law]
    model = fitter(records)
    doc = {
        "law": law,
        "constants": model.named,
        "residual_norm": model.residual_norm,
        "n_points": len(records),
    }
    return _json_text(doc)


def _cmd_feasibility(args) -> str:
    params = feasibility.PlatformParams(
        chi2=args.chi2,
        n_s=args.ns,
        n_p=args.np,
        wavelength_s=args.lambda_s,
        mode_volume=args.volume,
        quality_factor=args.q,
        beta=args.beta,
    )
    rep = feasibility.report(params, gamma=args.gamma)
    return _json_text(rep.to_json_dict())


_COMMANDS = {
    "evolve": _cmd_evolve,
    "distribution": _cmd_distribution,
    "pcurve": _cmd_pcurve,
    "conditional": _cmd_conditional,
    "wigner": _cmd_wigner,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
    "feasibility": _cmd_feasibility,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)

    if args.command in ("evolve", "distribution"):
        if not math.isfinite(args.beta) or args.beta < 0:
            parser.error(f"--beta must be non-negative and finite, got {args.beta}")
    if args.command in ("pcurve", "conditional"):
        if not math.isfinite(args.beta) or args.beta <= 0:
            parser.error(f"--beta must be positive and finite, got {args.beta}")
    if hasattr(args, "eps_tail") and (
        args.eps_tail <= 0 or not math.isfinite(args.eps_tail)
    ):
        parser.error("--eps-tail must be positive")
    if args.command in ("evolve", "distribution", "pcurve"):
        if args.steps < 1:
            parser.error("--steps must be >= 1")
        if not math.isfinite(args.tau_max) or args.tau_max < 0:
            parser.error("--tau-max must be non-negative")
        if args.command == "pcurve" and args.tau_max <= 0:
            parser.error("--tau-max must be positive for pcurve")
    if args.command == "wigner":
        _validate_positive(parser, range=args.extent)
        if args.grid < 2:
            parser.error("--grid must be >= 2")

    try:
        text = _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"catsim {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"catsim {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"catsim {args.command}: {exc}", file=sys.stderr)
        return 3
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"catsim {args.command}: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
