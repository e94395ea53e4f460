"""Command-line frontend: potentials, single solves, scans, width and
perturbation studies, emitted as CSV with optional rendered figures."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .analysis import (
    EdgePeakError,
    _perturbation_scans,
    find_peak,
    scan_reflectivity,
    width_vs_c,
)
from .output import write_csv
from .potentials import (
    BsecParams,
    PiecewiseSegment,
    PotentialModel,
    eval_bsec_wavefunction,
    eval_potential,
    sample_on_grid,
)
from .solver import NonConvergenceError, NumericsConfig, solve_scattering

__all__ = ["run_cli", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_segment(text: str) -> PiecewiseSegment:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"segment must be start,end,height, got {text!r}"
        )
    try:
        start, end, height = (float(p) for p in parts)
        return PiecewiseSegment(x_start=start, x_end=end, height=height)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad segment {text!r}: {err}") from err


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p != "")
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}: {err}") from err


def _add_common(sub, *, segments=False, numerics=False, workers=False, plot=False):
    sub.add_argument("--output", default=None, metavar="PATH",
                     help="CSV destination (default: standard output)")
    sub.add_argument("--config", default=None, metavar="PATH",
                     help="flat key=value file; explicit flags override it")
    if plot:
        sub.add_argument("--plot", default=None, metavar="PATH",
                         help="also render a figure to this file")
    if segments:
        sub.add_argument("--segment", action="append", type=_parse_segment,
                         default=None, metavar="S,E,H",
                         help="piecewise-constant piece on x<0; repeatable")
    if numerics:
        sub.add_argument("--grid-step", type=float, default=None, metavar="F")
        sub.add_argument("--x-match", type=_parse_float_list, default=None,
                         metavar="F,F,...", help="right-side cutoff positions")
        sub.add_argument("--tol", type=float, default=None, metavar="F",
                         help="cutoff-sequence convergence tolerance on |r|")
        sub.add_argument("--integrator", choices=("numerov", "rk4"), default=None)
    if workers:
        sub.add_argument("--workers", type=int, default=1, metavar="N",
                         help="parallel solves per scan (default 1)")


# required flags are validated after config-file merging, not by argparse
_REQUIRED = {
    "potential": ("e_bsec", "c", "x_min", "x_max", "n"),
    "scatter": ("e_bsec", "c", "energy"),
    "scan": ("e_bsec", "c", "e_min", "e_max", "n"),
    "width": ("e_bsec", "c_list", "e_min", "e_max", "n"),
    "perturb": ("e_bsec", "c", "e_min", "e_max", "n"),
}


def build_parser() -> _Parser:
    parser = _Parser(prog="bsecsim", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_pot = subs.add_parser("potential", help="sample V(x) and the embedded state")
    p_pot.add_argument("--e-bsec", type=float)
    p_pot.add_argument("--c", type=float)
    p_pot.add_argument("--x-min", type=float)
    p_pot.add_argument("--x-max", type=float)
    p_pot.add_argument("--n", type=int)
    _add_common(p_pot, segments=True, plot=True)

    p_sc = subs.add_parser("scatter", help="reflection/transmission at one energy")
    p_sc.add_argument("--e-bsec", type=float)
    p_sc.add_argument("--c", type=float)
    p_sc.add_argument("--energy", type=float)
    _add_common(p_sc, segments=True, numerics=True)

    p_scan = subs.add_parser("scan", help="reflectivity over an energy window")
    p_scan.add_argument("--e-bsec", type=float)
    p_scan.add_argument("--c", type=float)
    p_scan.add_argument("--e-min", type=float)
    p_scan.add_argument("--e-max", type=float)
    p_scan.add_argument("--n", type=int)
    _add_common(p_scan, segments=True, numerics=True, workers=True, plot=True)

    p_w = subs.add_parser("width", help="resonance width against c")
    p_w.add_argument("--e-bsec", type=float)
    p_w.add_argument("--c-list", type=_parse_float_list, metavar="F,F,...")
    p_w.add_argument("--e-min", type=float)
    p_w.add_argument("--e-max", type=float)
    p_w.add_argument("--n", type=int)
    _add_common(p_w, numerics=True, workers=True, plot=True)

    p_p = subs.add_parser("perturb", help="left-side perturbation experiment")
    p_p.add_argument("--e-bsec", type=float)
    p_p.add_argument("--c", type=float)
    p_p.add_argument("--e-min", type=float)
    p_p.add_argument("--e-max", type=float)
    p_p.add_argument("--n", type=int)
    _add_common(p_p, segments=True, numerics=True, workers=True, plot=True)

    return parser


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join '--flag -4,-2,0.5' into '--flag=-4,-2,0.5' so argparse does not
    mistake negative numeric values for option strings."""
    merged = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and tok != "--help" and "=" not in tok
                and nxt is not None and len(nxt) > 1 and nxt[0] == "-"
                and (nxt[1].isdigit() or nxt[1] in ".,")):
            merged.append(f"{tok}={nxt}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def _config_flags(path: str, skip_segments: bool) -> list[str]:
    flags: list[str] = []
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as err:
        raise _UsageError(f"cannot read config file {path}: {err}") from err
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "config":
            raise _UsageError(f"{path}:{lineno}: nested config is not allowed")
        if key == "segment":
            if skip_segments:
                continue
            for piece in value.split(";"):
                piece = piece.strip()
                if piece:
                    flags.extend([f"--{key}", piece])
        else:
            flags.extend([f"--{key}", value])
    return flags


def _numerics(args) -> NumericsConfig:
    return NumericsConfig(
        grid_step=getattr(args, "grid_step", None),
        x_match_sequence=getattr(args, "x_match", None),
        convergence_tol=args.tol if getattr(args, "tol", None) is not None else 1e-3,
        integrator=getattr(args, "integrator", None) or "numerov",
    )


def _model(args) -> tuple[PotentialModel, BsecParams]:
    params = BsecParams(e_bsec=args.e_bsec, c=args.c)
    segments = getattr(args, "segment", None) or []
    if segments:
        return PotentialModel.composite(params, segments), params
    return PotentialModel.bsec(params), params


_SCATTER_FIELDS = ("energy", "re_r", "im_r", "abs_r", "re_t", "im_t", "abs_t",
                   "unitarity_defect", "tail_error", "x_match_used")


def _scatter_row(s):
    return (s.energy, s.r.real, s.r.imag, abs(s.r), s.t.real, s.t.imag, abs(s.t),
            s.unitarity_defect, s.tail_error_estimate, s.x_match_used)


def _cmd_potential(args) -> None:
    model, params = _model(args)
    x, v = sample_on_grid(lambda xx: eval_potential(xx, model),
                          args.x_min, args.x_max, args.n)
    psi = eval_bsec_wavefunction(x, params)
    write_csv(("x", "v", "psi_bsec"), zip(x, v, psi), args.output)
    if args.plot:
        from .plots import plot_potential

        plot_potential(x, v, psi, args.plot)


def _cmd_scatter(args) -> None:
    model, _ = _model(args)
    amp = solve_scattering(model, args.energy, _numerics(args))
    write_csv(_SCATTER_FIELDS, [_scatter_row(amp)], args.output)


def _cmd_scan(args) -> None:
    model, _ = _model(args)
    scan = scan_reflectivity(model, args.e_min, args.e_max, args.n,
                             _numerics(args), workers=args.workers)
    rows = [_scatter_row(s) + (s.converged,) for s in scan.samples]
    write_csv(_SCATTER_FIELDS + ("converged",), rows, args.output)
    if args.plot:
        from .plots import plot_scan

        plot_scan(scan.energies, scan.abs_r, args.plot,
                  converged=[s.converged for s in scan.samples])


def _cmd_width(args) -> None:
    results = width_vs_c(args.e_bsec, args.c_list, (args.e_min, args.e_max),
                         args.n, _numerics(args), workers=args.workers)
    rows = [(w.c, w.e_peak, w.r_peak, w.fwhm, w.truncated) for w in results]
    write_csv(("c", "e_peak", "r_peak", "fwhm", "truncated"), rows, args.output)
    if args.plot:
        from .plots import plot_width

        plot_width([w.c for w in results], [w.fwhm for w in results], args.plot)


def _cmd_perturb(args) -> None:
    segments = getattr(args, "segment", None) or []
    if not segments:
        raise _UsageError("perturb requires at least one --segment")
    params = BsecParams(e_bsec=args.e_bsec, c=args.c)
    scan_base, scan_pert = _perturbation_scans(
        params, segments, (args.e_min, args.e_max), args.n,
        _numerics(args), workers=args.workers)
    rows = []
    for case, scan in (("baseline", scan_base), ("perturbed", scan_pert)):
        rep = find_peak(scan)
        rows.append((case, rep.e_peak, rep.r_peak, rep.fwhm,
                     rep.left_half, rep.right_half, rep.truncated))
    write_csv(("case", "e_peak", "r_peak", "fwhm", "left_half", "right_half",
               "truncated"), rows, args.output)
    if args.plot:
        from .plots import plot_perturbation

        plot_perturbation(scan_base.energies, scan_base.abs_r,
                          scan_pert.abs_r, args.plot)


_HANDLERS = {
    "potential": _cmd_potential,
    "scatter": _cmd_scatter,
    "scan": _cmd_scan,
    "width": _cmd_width,
    "perturb": _cmd_perturb,
}


def run_cli(argv=None) -> int:
    """Dispatch one subcommand; 0 on success, 1 on usage/argument/IO errors,
    2 on numerical non-convergence.  Expected failures print one line."""
    argv = _merge_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            skip_segments = any(a == "--segment" or a.startswith("--segment=")
                                for a in argv)
            injected = _merge_negative_values(_config_flags(args.config, skip_segments))
            args = parser.parse_args([argv[0]] + injected + argv[1:])
        missing = [dest for dest in _REQUIRED[args.command]
                   if getattr(args, dest) is None]
        if missing:
            flags = ", ".join("--" + dest.replace("_", "-") for dest in missing)
            raise _UsageError(f"missing required arguments: {flags}")
    except _UsageError as err:
        print(f"bsecsim: error: {err}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (0, None) else 1
    try:
        _HANDLERS[args.command](args)
    except NonConvergenceError as err:
        print(f"bsecsim: not converged: {err}", file=sys.stderr)
        return 2
    except _UsageError as err:
        print(f"bsecsim: error: {err}", file=sys.stderr)
        return 1
    except (ValueError, EdgePeakError) as err:
        print(f"bsecsim: error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"bsecsim: i/o error: {err}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
