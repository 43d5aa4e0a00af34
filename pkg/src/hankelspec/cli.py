"""Command-line interface: ``hankelspec <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (a JSON object
``{"error": {"kind", "detail"}}`` goes to stderr) and 2 on a usage error.
Set ``HST_LOG`` to ``error``, ``info`` or ``debug`` for diagnostics.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__, jsonio
from .cauchy_kernel import InterlacedSpectrum, certify_invertibility
from .errors import HankelSpecError, SchemaError
from .hankel_analysis import CLUSTER_RTOL, DOM_TOL, analyze, eval_series
from .identity_suite import SizeCaps, run_suite
from .inner_functions import root_of_unity_grid
from .roundtrip import roundtrip
from .symbol_synthesis import SpectralData, SymbolFamily, fourier_coefficients

log = logging.getLogger("hankelspec")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


def _power_of_two(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 8 or value & (value - 1):
        raise argparse.ArgumentTypeError("must be a power of two >= 8")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _load(args) -> object:
    if args.json is not None:
        try:
            return json.loads(args.json)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"--json: invalid JSON ({exc})") from exc
    if args.input is None:
        raise UsageError("one of --in or --json is required")
    try:
        return jsonio.read_json(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from exc


def _spectral_data(obj) -> SpectralData:
    if not isinstance(obj, dict):
        raise SchemaError("spectral data must be a JSON object")
    return SpectralData.from_json(obj)


def _emit(obj, args) -> None:
    jsonio.write_text(jsonio.dumps(obj) + "\n", args.out)


def cmd_synthesize(args) -> int:
    data = _spectral_data(_load(args))
    series = fourier_coefficients(data, args.order, strict=not args.no_strict)
    log.info("synthesized %d coefficients, tail %.3e, radius %.6f", args.order, series.tail, series.radius)
    trace = None
    if args.trace:
        jsonio.write_text(_trace_csv(data, 4 * args.order), args.trace)
        trace = args.trace
    if args.csv:
        rows = ((n, float(c.real), float(c.imag)) for n, c in enumerate(series.coefficients))
        jsonio.write_text(jsonio.csv_text(["n", "re", "im"], rows), args.out)
        return 0
    _emit(
        jsonio.encode_coefficients(
            series.coefficients,
            tail=series.tail,
            negative_leak=series.negative_leak,
            radius=series.radius,
            boundary_trace=trace,
        ),
        args,
    )
    return 0


def cmd_analyze(args) -> int:
    coeffs = jsonio.decode_coefficients(_load(args))
    report = analyze(coeffs, args.order, cluster_rtol=args.cluster_rtol, dom_tol=args.dom_tol)
    log.info("analyzed %d coefficients at order %d: %d H-levels", coeffs.size, report.order, len(report.sigma_H))
    _emit(report.to_json(), args)
    return 0


def cmd_roundtrip(args) -> int:
    data = _spectral_data(_load(args))
    rep = roundtrip(data, args.order, strict=not args.no_strict, cluster_rtol=args.cluster_rtol, dom_tol=args.dom_tol)
    log.info("roundtrip at order %d: %s", args.order, "passed" if rep.passed else "failed")
    _emit(rep.to_json(), args)
    return 0 if rep.passed else 1


def cmd_cauchy_report(args) -> int:
    obj = _load(args)
    if not isinstance(obj, dict) or "s" not in obj or "s_tilde" not in obj:
        raise SchemaError('expected an object with "s" and "s_tilde"')
    try:
        spec = InterlacedSpectrum(tuple(obj["s"]), tuple(obj["s_tilde"]))
    except TypeError as exc:
        raise SchemaError(f"bad spectrum: {exc}") from exc
    rep = certify_invertibility(spec, args.samples, args.seed)
    _emit(rep.to_json(), args)
    return 0


def cmd_verify(args) -> int:
    caps = SizeCaps(max_n=args.max_n, max_degree=args.max_degree, max_order=args.max_order)
    results = run_suite(args.seed, args.trials, caps)
    passed = all(r.passed for r in results)
    _emit(
        {
            "seed": args.seed,
            "trials": args.trials,
            "caps": {"max_n": caps.max_n, "max_degree": caps.max_degree, "max_order": caps.max_order},
            "passed": passed,
            "checks": [r.to_json() for r in results],
        },
        args,
    )
    return 0 if passed else 1


def _trace_rows(values: np.ndarray, t: np.ndarray):
    for ti, v in zip(t, values):
        yield float(ti), float(v.real), float(v.imag), float(abs(v))


def _trace_csv(data: SpectralData, points: int, rotation: float = 0.0) -> str:
    t = 2 * np.pi * np.arange(points) / points + rotation
    values = SymbolFamily(data)(root_of_unity_grid(points, rotation))
    return jsonio.csv_text(["t", "re", "im", "abs"], _trace_rows(values, t))


def cmd_sample(args) -> int:
    obj = _load(args)
    if isinstance(obj, dict) and "s" in obj:
        text = _trace_csv(_spectral_data(obj), args.points, args.rotation)
    else:
        coeffs = jsonio.decode_coefficients(obj)
        t = 2 * np.pi * np.arange(args.points) / args.points + args.rotation
        values = eval_series(coeffs, root_of_unity_grid(args.points, args.rotation))
        text = jsonio.csv_text(["t", "re", "im", "abs"], _trace_rows(values, t))
    jsonio.write_text(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hankelspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, func, help_text, *, needs_input=True):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("--in", dest="input", metavar="PATH", help="input JSON file, '-' for stdin")
            p.add_argument("--json", metavar="TEXT", help="inline JSON instead of --in")
        p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.set_defaults(func=func, input=None, json=None)
        return p

    def tolerances(p):
        p.add_argument("--cluster-rtol", type=_positive_float, default=CLUSTER_RTOL)
        p.add_argument("--dom-tol", type=_positive_float, default=DOM_TOL)

    p = add("synthesize", cmd_synthesize, "Taylor coefficients of the symbol of a spectral data set")
    p.add_argument("--order", type=_power_of_two, default=256, help="number of coefficients")
    p.add_argument("--trace", metavar="PATH", help="also write a boundary trace CSV (4*order points)")
    p.add_argument("--csv", action="store_true", help="write coefficients as CSV rows n,re,im")
    p.add_argument("--no-strict", action="store_true", help="report a large tail instead of failing")

    p = add("analyze", cmd_analyze, "spectral data recovered from Taylor coefficients")
    p.add_argument("--order", type=_positive_int, default=None, help="Hankel order (default len/2)")
    tolerances(p)

    p = add("roundtrip", cmd_roundtrip, "synthesize, analyze and diff against the input")
    p.add_argument("--order", type=_power_of_two, default=256, help="Hankel order")
    p.add_argument("--no-strict", action="store_true")
    tolerances(p)

    p = add("cauchy-report", cmd_cauchy_report, "sampled lower bound on sigma_min of the complex Cauchy matrix")
    p.add_argument("--samples", type=_positive_int, default=10000, help="points per domain (disk, torus)")

    p = add("verify", cmd_verify, "run the identity suite", needs_input=False)
    p.add_argument("--trials", type=_positive_int, default=25)
    p.add_argument("--max-n", type=_positive_int, default=8)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--max-order", type=_power_of_two, default=512)

    p = add("sample", cmd_sample, "CSV of the symbol on the unit circle")
    p.add_argument("--points", type=_positive_int, default=256)
    p.add_argument("--rotation", type=float, default=0.0, help="grid rotation in radians")
    return parser


def _configure_logging() -> None:
    name = os.environ.get("HST_LOG", "error").lower()
    level = LOG_LEVELS.get(name, logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    if name not in LOG_LEVELS:
        log.error("unknown HST_LOG value %r, using 'error'", name)


def _error(kind: str, detail: str) -> None:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "detail": detail}}) + "\n")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        _error("UsageError", str(exc))
        return 2
    except HankelSpecError as exc:
        _error(exc.kind, str(exc))
        return 1
    except ValueError as exc:
        # argument values outside documented ranges that only the library checks
        _error("UsageError", str(exc))
        return 2
    except OSError as exc:
        _error("UsageError", f"{getattr(exc, 'filename', '')}: {exc.strerror}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
