"""Command-line interface: stabilize, convert, analyze, simulate.

Exit codes: 0 success (and certificate pass), 2 input validation error,
3 synthesis failure, 4 certificate failure.  Result JSON is byte-stable
across runs for identical inputs and flags.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bezout import NotCoprimeError, coprime_check
from .converter import ConversionConfig, PreController, convert_controller
from .numeric import poly_roots, schur_check
from .poly import Polynomial, RationalTF
from .sim import realize_controller, realize_tf, simulate_loop, write_trajectory_csv
from .stabilizer import (StabilizationConfig, SynthesisError, Tolerances,
                         run_algorithm1)
from .target import TargetSearchConfig, TargetSearchError
from .verify import certify_conversion, certify_stabilization, closed_loop_poly

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SYNTHESIS = 3
EXIT_CERTIFICATE = 4

_KNOWN_TOP_KEYS = {"plant", "controller", "solution", "ordering", "name", "notes"}


class ProblemFileError(ValueError):
    pass


def _ordering(data: dict) -> str:
    ordering = data.get("ordering", "descending")
    if ordering not in ("descending", "ascending"):
        raise ProblemFileError(
            f"field 'ordering': expected 'descending' or 'ascending', got {ordering!r}")
    return ordering


def _poly_from(data, field: str, ordering: str, allow_zero=False) -> Polynomial:
    if not isinstance(data, list) or not all(isinstance(c, (int, float)) for c in data):
        raise ProblemFileError(f"field '{field}': expected a list of numbers")
    coeffs = data[::-1] if ordering == "descending" else data
    p = Polynomial(coeffs)
    if p.is_zero and not allow_zero:
        raise ProblemFileError(f"field '{field}': polynomial is zero")
    return p


def _poly_out(p: Polynomial, ordering: str) -> list[float]:
    coeffs = p.coeffs.tolist()
    return coeffs[::-1] if ordering == "descending" else coeffs


def parse_problem_file(path: str) -> dict:
    """Load and validate a problem description.

    Schema: ``{"plant": {"den": [...], "num": [...]},
    "controller": {"den": [...], "num_y": [...], "num_r": [...]},
    "solution": {"alpha": [...], "beta": [...], "gamma": [...]},
    "ordering": "descending"|"ascending"}`` with optional name/notes;
    controller and solution blocks are required only by the commands that
    consume them.  Coefficient lists honor the ordering field (descending
    matches the way polynomials are usually written out).
    """
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ProblemFileError(f"problem file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"invalid JSON in {path}: {exc}")
    if not isinstance(raw, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    unknown = set(raw) - _KNOWN_TOP_KEYS
    if unknown:
        raise ProblemFileError(f"unknown field(s) {sorted(unknown)}; expected "
                               f"{sorted(_KNOWN_TOP_KEYS)}")
    ordering = _ordering(raw)
    out: dict = {"ordering": ordering}

    if "plant" not in raw:
        raise ProblemFileError("field 'plant': missing")
    plant = raw["plant"]
    if not isinstance(plant, dict) or {"den", "num"} - set(plant):
        raise ProblemFileError("field 'plant': expected {'den': [...], 'num': [...]}")
    den = _poly_from(plant["den"], "plant.den", ordering)
    num = _poly_from(plant["num"], "plant.num", ordering)
    if num.coeffs.size > den.coeffs.size:
        raise ProblemFileError(
            f"field 'plant': improper plant (deg(num) = {num.coeffs.size - 1} "
            f"> deg(den) = {den.coeffs.size - 1})")
    ok, quality = coprime_check(den, num)
    if not ok:
        shared = _shared_roots(den, num)
        raise ProblemFileError(
            f"field 'plant': den and num are not coprime (quality {quality:.3e}"
            + (f"; shared root(s) near {shared}" if shared else "") + ")")
    out["plant"] = (den, num)

    if "controller" in raw:
        ctrl = raw["controller"]
        if not isinstance(ctrl, dict) or {"den", "num_y", "num_r"} - set(ctrl):
            raise ProblemFileError(
                "field 'controller': expected {'den', 'num_y', 'num_r'}")
        out["controller"] = PreController(
            _poly_from(ctrl["den"], "controller.den", ordering),
            _poly_from(ctrl["num_y"], "controller.num_y", ordering, allow_zero=True),
            _poly_from(ctrl["num_r"], "controller.num_r", ordering, allow_zero=True))

    if "solution" in raw:
        sol = raw["solution"]
        if not isinstance(sol, dict) or {"alpha", "beta", "gamma"} - set(sol):
            raise ProblemFileError(
                "field 'solution': expected {'alpha', 'beta', 'gamma'}")
        out["solution"] = tuple(
            _poly_from(sol[k], f"solution.{k}", ordering, allow_zero=(k == "beta"))
            for k in ("alpha", "beta", "gamma"))
    return out


def _shared_roots(a: Polynomial, b: Polynomial) -> list[str]:
    if a.coeffs.size < 2 or b.coeffs.size < 2:
        return []
    ra, rb = poly_roots(a), poly_roots(b)
    shared = []
    for r in ra:
        if np.min(np.abs(rb - r)) < 1e-6 * (1 + abs(r)):
            shared.append(f"{complex(r):.6g}")
    return shared


def _parse_complex_list(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(tok.strip().replace("i", "j"))
                     for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ProblemFileError(f"cannot parse root list {text!r}: {exc}")


def _tolerances(args) -> Tolerances:
    kw = {}
    for name in ("residual", "coprime", "monic", "trim", "integer"):
        val = getattr(args, f"tol_{name}", None)
        if val is not None:
            kw[name] = val
    return Tolerances(**kw)


def _target_cfg(args) -> TargetSearchConfig:
    kw = {"mode": args.target}
    if args.max_radius is not None:
        kw["max_radius"] = args.max_radius
    if getattr(args, "tol_active", None) is not None:
        kw["tol_active"] = args.tol_active
    if getattr(args, "tol_side", None) is not None:
        kw["tol_side"] = args.tol_side
    if args.prefer_origin:
        kw["prefer_origin"] = True
    return TargetSearchConfig(**kw)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _trace_out(trace) -> list[dict]:
    return [{"k": s.k, "x": s.x.tolist(), "u": s.u.tolist(), "hit": s.hit,
             "gamma_degree": s.gamma_degree, "distance": s.distance}
            for s in trace]


def _cmd_stabilize(args) -> int:
    problem = parse_problem_file(args.problem)
    den, num = problem["plant"]
    ordering = problem["ordering"]
    roots = _parse_complex_list(args.gamma_ini_roots) if args.gamma_ini_roots else None
    cfg = StabilizationConfig(
        gamma_ini_roots=roots, mu=args.mu, target=_target_cfg(args),
        max_iterations=args.max_iter, tolerances=_tolerances(args))
    try:
        result = run_algorithm1(den, num, cfg)
    except (NotCoprimeError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SynthesisError, TargetSearchError) as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return EXIT_SYNTHESIS

    cl = closed_loop_poly(den, num, result.controller_den, result.controller_num)
    payload = {
        "command": "stabilize",
        "seed": args.seed,
        "ordering": ordering,
        "controller": {
            "den": _poly_out(result.controller_den, ordering),
            "num": _poly_out(result.controller_num, ordering),
        },
        "solution": {
            "alpha": _poly_out(result.alpha, ordering),
            "beta": _poly_out(result.beta, ordering),
            "gamma": _poly_out(result.gamma, ordering),
            "power_shift": result.power_shift,
        },
        "x_star": result.x_star.tolist(),
        "iterations": result.iterations,
        "trace": _trace_out(result.trace),
        "closed_loop": {"spectral_radius": schur_check(cl).spectral_radius},
        "certificate": result.certificate.to_dict(),
        "warnings": list(result.warnings),
    }
    if args.verify:
        fresh = certify_stabilization(result.plant.den,
                                      Polynomial(num.coeffs / result.plant.scale),
                                      result.alpha, result.beta, result.gamma)
        payload["certificate"] = fresh.to_dict()
        if not fresh.passed:
            _emit(payload, args.out)
            print("certificate failed", file=sys.stderr)
            return EXIT_CERTIFICATE
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_convert(args) -> int:
    problem = parse_problem_file(args.problem)
    if "controller" not in problem:
        print("validation error: convert requires a 'controller' block",
              file=sys.stderr)
        return EXIT_VALIDATION
    den, num = problem["plant"]
    pre = problem["controller"]
    ordering = problem["ordering"]
    roots = _parse_complex_list(args.alpha_ini_roots) if args.alpha_ini_roots else None
    cfg = ConversionConfig(
        alpha_ini_roots=roots, mu=args.mu, target=_target_cfg(args),
        max_iterations=args.max_iter, tolerances=_tolerances(args))
    try:
        conv = convert_controller(pre, den, num, cfg)
    except (NotCoprimeError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SynthesisError, TargetSearchError) as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return EXIT_SYNTHESIS

    payload = {
        "command": "convert",
        "seed": args.seed,
        "ordering": ordering,
        "controller": {
            "den": _poly_out(conv.den, ordering),
            "num_y": _poly_out(conv.num_y, ordering),
            "num_r": _poly_out(conv.num_r, ordering),
        },
        "solution": {
            "alpha": _poly_out(conv.alpha, ordering),
            "beta": _poly_out(conv.beta, ordering),
            "gamma": _poly_out(conv.gamma, ordering),
        },
        "certificate": conv.certificate.to_dict(),
        "warnings": list(conv.certificate.warnings),
    }
    if args.verify:
        fresh = certify_conversion(den, num, pre, conv)
        payload["certificate"] = fresh.to_dict()
        if not fresh.passed:
            _emit(payload, args.out)
            print("certificate failed", file=sys.stderr)
            return EXIT_CERTIFICATE
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    problem = parse_problem_file(args.problem)
    if "solution" not in problem:
        print("validation error: analyze requires a 'solution' block",
              file=sys.stderr)
        return EXIT_VALIDATION
    den, num = problem["plant"]
    alpha, beta, gamma = problem["solution"]
    cert = certify_stabilization(den, num, alpha, beta, gamma)
    cl = closed_loop_poly(den, num, alpha, -beta)
    payload = {
        "command": "analyze",
        "ordering": problem["ordering"],
        "certificate": cert.to_dict(),
        "closed_loop": {"spectral_radius": schur_check(cl).spectral_radius},
    }
    _emit(payload, args.out)
    return EXIT_OK if cert.passed else EXIT_CERTIFICATE


def _cmd_simulate(args) -> int:
    problem = parse_problem_file(args.problem)
    if "controller" not in problem:
        print("validation error: simulate requires a 'controller' block",
              file=sys.stderr)
        return EXIT_VALIDATION
    den, num = problem["plant"]
    pre = problem["controller"]
    try:
        plant_ss = realize_tf(RationalTF(num, den))
        ctrl_ss = realize_controller(pre.den, pre.num_y, pre.num_r)
        result = simulate_loop(plant_ss, ctrl_ss, args.reference, args.steps)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.out_csv:
        with open(args.out_csv, "w") as fp:
            write_trajectory_csv(fp, result)
    payload = {
        "command": "simulate",
        "steps": result.steps,
        "diverged": result.diverged,
        "final_y": float(result.y[-1]) if result.steps else None,
        "final_u": float(result.u[-1]) if result.steps else None,
    }
    _emit(payload, args.out)
    return EXIT_OK


def _add_common(sub, with_roots: str | None):
    sub.add_argument("problem", help="problem description JSON file")
    sub.add_argument("--mu", type=float, default=0.99,
                     help="step-size bound in (0,1), default 0.99")
    if with_roots:
        sub.add_argument(f"--{with_roots}", type=str, default=None,
                         help="comma-separated complex roots, e.g. '0.5,0.1+0.2j'; "
                              "use the --flag=value form when the list starts "
                              "with a dash")
    sub.add_argument("--target", choices=["auto", "round", "search", "fallback"],
                     default="auto", help="integer-target search mode")
    sub.add_argument("--max-iter", type=int, default=None)
    sub.add_argument("--max-radius", type=int, default=None)
    sub.add_argument("--prefer-origin", action="store_true",
                     help="try the all-poles-at-origin target first")
    for tol in ("residual", "coprime", "monic", "trim", "integer", "active", "side"):
        sub.add_argument(f"--tol-{tol}", type=float, default=None)
    sub.add_argument("--seed", type=int, default=0,
                     help="recorded in the output for reproducibility bookkeeping")
    sub.add_argument("--verify", action="store_true",
                     help="re-certify outputs; failed certificate exits 4")
    sub.add_argument("--out", type=str, default=None,
                     help="write result JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intctrl",
        description="Integer-denominator controller synthesis and conversion")
    subs = parser.add_subparsers(dest="command", required=True)

    st = subs.add_parser("stabilize", help="synthesize a stabilizing controller "
                         "whose denominator has integer coefficients")
    _add_common(st, "gamma-ini-roots")
    st.set_defaults(func=_cmd_stabilize)

    cv = subs.add_parser("convert", help="convert a pre-designed controller to "
                         "integer coefficients, preserving the closed loop")
    _add_common(cv, "alpha-ini-roots")
    cv.set_defaults(func=_cmd_convert)

    an = subs.add_parser("analyze", help="certify a hand-written solution triple")
    an.add_argument("problem")
    an.add_argument("--out", type=str, default=None)
    an.set_defaults(func=_cmd_analyze)

    si = subs.add_parser("simulate", help="closed-loop simulation")
    si.add_argument("problem")
    si.add_argument("--steps", type=int, default=1000)
    si.add_argument("--reference", type=float, default=0.0)
    si.add_argument("--out-csv", type=str, default=None)
    si.add_argument("--out", type=str, default=None)
    si.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
