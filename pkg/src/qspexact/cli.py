"""Command-line front end: ``qspexact {invpoly,complement,verify,pipeline}``.

Exit codes: 0 ok, 2 invalid input, 3 internal tolerance failure,
4 no convergence, 5 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .completion import (
    CompletionConfig,
    complete,
    defect,
    defect_curve,
    normalize_phase,
    validate_target,
    winding_number,
)
from .errors import NoConvergence, ParityViolation, QSPError
from .invpoly import InversionSpec, build, error_samples, select_degree, sup_norm_interval
from .oracle import MAX_ORACLE_DEGREE, align_phase, complementary_by_roots
from .polycore import ComplexPoly, RealChebPoly, chebyshev_to_monomial, circle_lift, sup_norm_circle
from .serialize import FormatError, csv_text, poly_to_json, read_poly, write_atomic, write_json

log = logging.getLogger("qspexact")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOLERANCE = 3
EXIT_NO_CONVERGENCE = 4
EXIT_VERIFY_FAILED = 5

VERIFY_TOL = 1e-8
WINDING_RADIUS = 1 - 1e-6
PIPELINE_MARGIN = 1e-6
MONOMIAL_WARN_N = 20
# lifted targets sit within PIPELINE_MARGIN of unimodular and need large grids
PIPELINE_MAX_N = 1 << 23


class UsageError(Exception):
    pass


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}")


def _write_manifest(path: Path, command: str, arguments: dict, outputs: dict) -> None:
    manifest = {
        "command": command,
        "version": __version__,
        "arguments": arguments,
        "outputs": dict(sorted(outputs.items())),
    }
    write_json(path, manifest)


def _roots_json(rootset) -> list:
    return [{"t": [t.real + 0.0, t.imag + 0.0], "l": l} for t, l in rootset.roots]


def _completion_diagnostics(result) -> dict:
    return {
        "n_used": result.n_used,
        "defect": result.defect,
        "tail_mass": result.tail_mass,
        "circle_roots": _roots_json(result.rootset),
        "sup_norm_p": result.sup_norm_p,
        "warnings": list(result.warnings),
    }


def _inversion_outputs(ip, epsilon):
    warnings = []
    with np.errstate(over="ignore", invalid="ignore"):
        mono_coeffs = chebyshev_to_monomial(ip.cheb)
    if np.all(np.isfinite(mono_coeffs)):
        mono = ComplexPoly(mono_coeffs)
    else:
        mono = None
        warnings.append(f"monomial conversion overflows for n={ip.spec.n}; not written")
    if mono is not None and ip.spec.n >= MONOMIAL_WARN_N:
        warnings.append(
            f"monomial coefficients are ill-conditioned for n={ip.spec.n}; prefer the Chebyshev basis"
        )
    diag = {
        "a": ip.spec.a,
        "n": ip.spec.n,
        "eps_bound": ip.eps_bound,
        "eps_measured": ip.eps_measured,
        "alternations": ip.alternation_count,
        "bound_ratio": ip.bound_ratio,
        "epsilon": epsilon,
        "warnings": warnings,
    }
    x, err = error_samples(ip)
    return mono, diag, csv_text("x,error", x, err)


def _resolve_spec(a: float, n: int | None, epsilon: float | None) -> InversionSpec:
    try:
        if n is None:
            n = select_degree(a, epsilon)
        return InversionSpec(a, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_invpoly(args) -> int:
    spec = _resolve_spec(args.a, args.n, args.epsilon)
    ip = build(spec)
    mono, diag, curve = _inversion_outputs(ip, args.epsilon)
    out = Path(args.output)
    outputs = {
        out.name: write_json(out, poly_to_json(ip.cheb)),
    }
    if mono is not None:
        mono_path = _sibling(out, "monomial.json")
        outputs[mono_path.name] = write_json(mono_path, poly_to_json(mono))
    diag_path = Path(args.diagnostics) if args.diagnostics else _sibling(out, "diagnostics.json")
    outputs[diag_path.name] = write_json(diag_path, diag)
    plot_path = Path(args.plot) if args.plot else _sibling(out, "error.csv")
    outputs[plot_path.name] = write_atomic(plot_path, curve)
    _write_manifest(
        _sibling(out, "manifest.json"),
        "invpoly",
        {"a": args.a, "n": args.n, "epsilon": args.epsilon},
        outputs,
    )
    print(
        f"n={spec.n} eps_bound={ip.eps_bound!r} eps_measured={ip.eps_measured!r} "
        f"alternations={ip.alternation_count}"
    )
    return EXIT_OK


def _load_target_poly(path) -> tuple[ComplexPoly, bool]:
    p = read_poly(path)
    if isinstance(p, RealChebPoly):
        return circle_lift(p), True
    return p, False


def cmd_complement(args) -> int:
    p, lifted = _load_target_poly(args.input)
    try:
        config = CompletionConfig(tau_defect=args.tolerance, n_max=args.max_n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    target = validate_target(p, config)
    out = Path(args.output)
    diag_path = Path(args.diagnostics) if args.diagnostics else _sibling(out, "diagnostics.json")
    outputs = {}
    status = EXIT_OK
    try:
        result = complete(target, config)
    except NoConvergence as exc:
        log.error("NoConvergence: %s", exc)
        result, status = exc.result, EXIT_NO_CONVERGENCE
    if result is None:
        write_json(diag_path, {"error": "NoConvergence", "sup_norm_p": target.sup_norm})
        return status
    q = normalize_phase(result.q) if args.normalize_phase else result.q
    diag = _completion_diagnostics(result)
    diag["lifted_from_chebyshev"] = lifted
    diag["phase_normalized"] = bool(args.normalize_phase)
    diag["converged"] = status == EXIT_OK
    if status == EXIT_OK:
        outputs[out.name] = write_json(out, poly_to_json(q))
    outputs[diag_path.name] = write_json(diag_path, diag)
    plot_path = Path(args.plot) if args.plot else _sibling(out, "defect.csv")
    outputs[plot_path.name] = write_atomic(
        plot_path, csv_text("theta,defect", *defect_curve(target.poly, q, 2 * result.n_used))
    )
    _write_manifest(
        _sibling(out, "manifest.json"),
        "complement",
        {
            "input": str(args.input),
            "tolerance": args.tolerance,
            "max_n": args.max_n,
            "normalize_phase": bool(args.normalize_phase),
        },
        outputs,
    )
    if status == EXIT_OK:
        print(f"n_used={result.n_used} defect={result.defect!r} tail_mass={result.tail_mass!r}")
    return status


def cmd_verify(args) -> int:
    p, _ = _load_target_poly(args.p)
    q = read_poly(args.q)
    if isinstance(q, RealChebPoly):
        raise UsageError("Q must be given in the monomial basis")
    d = max(p.degree, q.degree)
    grid = args.grid or max(4096, 16 * (d + 1))
    if grid < 4 * (d + 1):
        raise UsageError(f"--grid must be at least {4 * (d + 1)}")
    dfc = defect(p, q, grid)
    print(f"defect: {dfc!r}")
    try:
        print(f"winding_number(r={WINDING_RADIUS!r}): {winding_number(q, WINDING_RADIUS)}")
    except QSPError as exc:
        print(f"winding_number: n/a ({type(exc).__name__})")
    if p.degree <= MAX_ORACLE_DEGREE and p.degree == q.degree:
        try:
            reference = complementary_by_roots(validate_target(p))
            _, diff = align_phase(q, reference)
            print(f"oracle_max_diff: {diff!r}")
        except QSPError as exc:
            print(f"oracle_max_diff: n/a ({type(exc).__name__}: {exc})")
    ok = dfc <= VERIFY_TOL
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_pipeline(args) -> int:
    spec = _resolve_spec(args.a, None, args.epsilon)
    ip = build(spec)
    sup = sup_norm_interval(ip.cheb)
    scale = 1.0 / (sup * (1 + PIPELINE_MARGIN))
    scaled = RealChebPoly(ip.cheb.cheb_coeffs * scale)
    lifted = circle_lift(scaled)
    target = validate_target(lifted)
    config = CompletionConfig(n_max=args.max_n)
    status = EXIT_OK
    try:
        result = complete(target, config)
    except NoConvergence as exc:
        log.error("NoConvergence: %s", exc)
        result, status = exc.result, EXIT_NO_CONVERGENCE

    outdir = Path(args.outdir)
    mono, inv_diag, curve = _inversion_outputs(ip, args.epsilon)
    outputs = {
        "inversion.json": write_json(outdir / "inversion.json", poly_to_json(ip.cheb)),
        "target.json": write_json(outdir / "target.json", poly_to_json(target.poly)),
        "error.csv": write_atomic(outdir / "error.csv", curve),
    }
    if mono is not None:
        outputs["inversion.monomial.json"] = write_json(
            outdir / "inversion.monomial.json", poly_to_json(mono)
        )
    diag = {
        "inversion": inv_diag,
        "scale": scale,
        "sup_norm_interval": sup,
        "sup_norm_target": sup_norm_circle(target.poly),
        "completion": _completion_diagnostics(result) if result is not None else None,
        "converged": status == EXIT_OK,
    }
    if result is not None:
        if status == EXIT_OK:
            outputs["complement.json"] = write_json(outdir / "complement.json", poly_to_json(result.q))
        outputs["defect.csv"] = write_atomic(
            outdir / "defect.csv",
            csv_text("theta,defect", *defect_curve(target.poly, result.q, 2 * result.n_used)),
        )
    outputs["diagnostics.json"] = write_json(outdir / "diagnostics.json", diag)
    _write_manifest(
        outdir / "manifest.json", "pipeline",
        {"a": args.a, "epsilon": args.epsilon, "max_n": args.max_n},
        outputs,
    )
    if result is not None:
        print(
            f"n={spec.n} scale={scale!r} n_used={result.n_used} defect={result.defect!r}"
        )
    return status


def _power_of_two(text: str) -> int:
    v = int(text)
    if v < 1 or v & (v - 1):
        raise argparse.ArgumentTypeError(f"{text} is not a power of two")
    return v


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"{text} is not finite")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qspexact", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invpoly", help="optimal odd approximant of 1/x on [-1,-a] U [a,1]")
    p.add_argument("--a", type=_finite, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--epsilon", type=_finite)
    p.add_argument("--output", required=True)
    p.add_argument("--diagnostics")
    p.add_argument("--plot")
    p.set_defaults(func=cmd_invpoly)

    p = sub.add_parser("complement", help="complementary polynomial Q with |P|^2+|Q|^2=1")
    p.add_argument("--input", required=True)
    p.add_argument("--tolerance", type=_finite, default=CompletionConfig.tau_defect)
    p.add_argument("--max-n", type=_power_of_two, default=CompletionConfig.n_max)
    p.add_argument("--normalize-phase", action="store_true")
    p.add_argument("--output", required=True)
    p.add_argument("--diagnostics")
    p.add_argument("--plot")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("verify", help="check |P|^2+|Q|^2=1 on the unit circle")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="inversion polynomial -> circle lift -> completion")
    p.add_argument("--a", type=_finite, required=True)
    p.add_argument("--epsilon", type=_finite, required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--max-n", type=_power_of_two, default=PIPELINE_MAX_N)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INVALID
    except ParityViolation as exc:
        print(f"error: ParityViolation: {exc}", file=sys.stderr)
        code = EXIT_TOLERANCE
    except QSPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = EXIT_INVALID
    log.info("%s finished in %.3f s with exit code %d", args.command, time.perf_counter() - start, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
