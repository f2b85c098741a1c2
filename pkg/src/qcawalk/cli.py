"""Command-line surface: classify, simulate, verify, factorize, limit-compare.

All numbers are printed in shortest round-trip form, output is byte-stable
for a fixed invocation, and the wall-clock diagnostic goes to stderr so
stdout stays deterministic.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time

import numpy as np

from .amplitudes import Distribution
from .asymptotics import kolmogorov_distance, rescaled_qca_sample
from .coined_walks import WalkState, generalized_blocks_from_qca, walk_distribution, walk_step
from .correspondence import (
    PatelParams,
    patel_coin,
    patel_factorize,
    two_step_factorize,
    verify_A_correspondence,
    verify_B_correspondence,
    verify_two_step,
)
from .qca_core import (
    AngleTriple,
    QcaParams,
    classify,
    params_from_angles,
    qca_distribution,
    unitarity_residuals,
)

VERIFY_TOLERANCE = 1e-12

_PI_PATTERN = re.compile(
    r"^(?P<sign>[+-]?)(?P<coef>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi"
    r"(?:\s*/\s*(?P<den>\d+(?:\.\d*)?|\.\d+))?$"
)


class UsageError(Exception):
    """Invalid configuration; maps to exit status 2."""


def parse_angle(text: str) -> float:
    """Parse a decimal or a literal multiple of pi such as 'pi/4' or '3pi/2'."""
    s = text.strip().lower()
    if "pi" in s:
        m = _PI_PATTERN.match(s)
        if m is None:
            raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}")
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            coef = -coef
        den = float(m.group("den")) if m.group("den") else 1.0
        return coef * math.pi / den
    try:
        return float(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from exc


def _cnum(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _cmatrix(m: np.ndarray) -> dict:
    return {
        f"r{i}c{j}": _cnum(complex(m[i, j])) for i in range(2) for j in range(2)
    }


def _dist_payload(dist: Distribution) -> list:
    return [[k, dist[k]] for k in sorted(dist.support())]


def _flatten(value, prefix: str, rows: list) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(sub, f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(value, (list, tuple)):
        for i, sub in enumerate(value):
            _flatten(sub, f"{prefix}.{i}", rows)
    elif isinstance(value, bool):
        rows.append((prefix, "true" if value else "false"))
    elif isinstance(value, float):
        rows.append((prefix, repr(value)))
    elif value is None:
        rows.append((prefix, ""))
    else:
        rows.append((prefix, str(value)))


def _render(envelope: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(envelope, indent=2) + "\n"
    result = envelope.get("result", {})
    if isinstance(result, dict) and "distribution" in result:
        lines = ["site,probability"]
        for site, mass in result["distribution"]:
            lines.append(f"{site},{mass!r}")
        return "\n".join(lines) + "\n"
    rows: list = []
    _flatten(envelope, "", rows)
    lines = ["key,value"]
    lines.extend(f"{key},{val}" for key, val in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _resolve_params(args) -> tuple[QcaParams, AngleTriple | None]:
    angle_flags = [args.theta, args.phi, args.delta]
    has_angles = any(v is not None for v in angle_flags)
    has_raw = getattr(args, "params", None) is not None
    if has_angles and has_raw:
        raise UsageError("give either --theta/--phi/--delta or --params, not both")
    if has_raw:
        v = args.params
        params = QcaParams(
            complex(v[0], v[1]), complex(v[2], v[3]),
            complex(v[4], v[5]), complex(v[6], v[7]),
        )
        return params, None
    if has_angles:
        if not all(v is not None for v in angle_flags):
            raise UsageError("--theta, --phi and --delta must be given together")
        angles = AngleTriple(args.theta, args.phi, args.delta)
        return params_from_angles(angles), angles
    if getattr(args, "default_reference", False):
        angles = AngleTriple(math.pi / 4, math.pi / 4, math.pi / 2)
        return params_from_angles(angles), angles
    raise UsageError("parameters required: --theta/--phi/--delta or --params")


def _resolve_qubit(args) -> tuple[complex, complex]:
    values = args.qubit
    if len(values) == 2:
        return complex(values[0]), complex(values[1])
    if len(values) == 4:
        return complex(values[0], values[1]), complex(values[2], values[3])
    raise UsageError("--qubit takes 2 real values or 4 re/im values")


def _params_payload(params: QcaParams, angles: AngleTriple | None) -> dict:
    payload = {
        "a": _cnum(params.a),
        "b": _cnum(params.b),
        "c": _cnum(params.c),
        "d": _cnum(params.d),
    }
    if angles is not None:
        payload["angles"] = {
            "theta": angles.theta,
            "phi": angles.phi,
            "delta": angles.delta,
        }
    return payload


def _residuals_payload(params: QcaParams) -> dict:
    names = ("norm", "cross", "shift2", "pair_ab", "pair_cd")
    values = unitarity_residuals(params.a, params.b, params.c, params.d)
    return dict(zip(names, values))


def _cmd_classify(args) -> tuple[int, dict]:
    params, angles = _resolve_params(args)
    tag = classify(params)
    envelope = {
        "command": "classify",
        "params": _params_payload(params, angles),
        "result": {"type": tag.value},
        "residuals": _residuals_payload(params),
    }
    return 0, envelope


def _cmd_simulate_qca(args) -> tuple[int, dict]:
    params, angles = _resolve_params(args)
    qubit = _resolve_qubit(args)
    dist = qca_distribution(0, args.sign, qubit, args.steps, params)
    envelope = {
        "command": "simulate-qca",
        "params": {
            **_params_payload(params, angles),
            "qubit": {"alpha": _cnum(qubit[0]), "beta": _cnum(qubit[1])},
            "sign": args.sign,
            "steps": args.steps,
        },
        "result": {"distribution": _dist_payload(dist)},
        "residuals": {"total_mass_error": abs(dist.total() - 1.0)},
    }
    return 0, envelope


def _cmd_simulate_qw(args) -> tuple[int, dict]:
    params, angles = _resolve_params(args)
    qubit = _resolve_qubit(args)
    blocks = generalized_blocks_from_qca(params, args.family)
    state = WalkState.origin(qubit, blocks.order)
    for _ in range(args.steps):
        state = walk_step(state, blocks)
    dist = walk_distribution(state)
    envelope = {
        "command": "simulate-qw",
        "params": {
            **_params_payload(params, angles),
            "qubit": {"alpha": _cnum(qubit[0]), "beta": _cnum(qubit[1])},
            "family": args.family,
            "steps": args.steps,
        },
        "result": {"distribution": _dist_payload(dist)},
        "residuals": {"total_mass_error": abs(dist.total() - 1.0)},
    }
    return 0, envelope


def _cmd_verify(args) -> tuple[int, dict]:
    kind = args.kind
    params_payload: dict = {}
    if kind in ("A", "B"):
        params, angles = _resolve_params(args)
        qubit = _resolve_qubit(args)
        check = verify_A_correspondence if kind == "A" else verify_B_correspondence
        report = check(params, qubit, args.steps)
        params_payload = {
            **_params_payload(params, angles),
            "qubit": {"alpha": _cnum(qubit[0]), "beta": _cnum(qubit[1])},
            "steps": args.steps,
        }
    elif kind == "two-step":
        angle_flags = [args.theta, args.phi, args.delta]
        if not all(v is not None for v in angle_flags):
            raise UsageError("two-step verification needs --theta/--phi/--delta")
        angles = AngleTriple(args.theta, args.phi, args.delta)
        report = verify_two_step(angles, args.theta1, args.theta2, args.family)
        params_payload = {
            "angles": {"theta": angles.theta, "phi": angles.phi, "delta": angles.delta},
            "theta1": args.theta1 % (2 * math.pi),
            "theta2": args.theta2 % (2 * math.pi),
            "family": args.family,
        }
    elif kind == "patel":
        pp = PatelParams(args.phi1, args.phi2)
        extracted, report = patel_factorize(pp)
        params_payload = {
            "phi1": pp.phi1,
            "phi2": pp.phi2,
            "extracted": _params_payload(extracted, None),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown verification kind {kind!r}")

    passed = report.max_error() <= VERIFY_TOLERANCE
    envelope = {
        "command": "verify",
        "params": {"kind": kind, **params_payload},
        "result": {
            "identity": report.identity_name,
            "max_amplitude_error": report.max_amplitude_error,
            "max_probability_error": report.max_probability_error,
            "steps_checked": report.steps_checked,
            "pass": passed,
        },
        "residuals": {"max_error": report.max_error()},
    }
    return (0 if passed else 1), envelope


def _cmd_factorize(args) -> tuple[int, dict]:
    if args.kind == "two-step":
        angle_flags = [args.theta, args.phi, args.delta]
        if not all(v is not None for v in angle_flags):
            raise UsageError("two-step factorization needs --theta/--phi/--delta")
        angles = AngleTriple(args.theta, args.phi, args.delta)
        factors = two_step_factorize(angles, args.theta1, args.theta2, args.family)
        report = verify_two_step(angles, args.theta1, args.theta2, args.family)
        envelope = {
            "command": "factorize",
            "params": {
                "kind": "two-step",
                "angles": {
                    "theta": angles.theta,
                    "phi": angles.phi,
                    "delta": angles.delta,
                },
                "theta1": factors.theta1,
                "theta2": factors.theta2,
                "family": factors.family,
            },
            "result": {
                "P1": _cmatrix(factors.P1),
                "Q1": _cmatrix(factors.Q1),
                "P2": _cmatrix(factors.P2),
                "Q2": _cmatrix(factors.Q2),
                "U1": _cmatrix(factors.coin(1)),
                "U2": _cmatrix(factors.coin(2)),
            },
            "residuals": {"max_product_error": report.max_amplitude_error},
        }
        return 0, envelope
    if args.kind == "patel":
        pp = PatelParams(args.phi1, args.phi2)
        extracted, report = patel_factorize(pp)
        envelope = {
            "command": "factorize",
            "params": {"kind": "patel", "phi1": pp.phi1, "phi2": pp.phi2},
            "result": {
                "U_even": _cmatrix(patel_coin(pp.phi1)),
                "U_odd": _cmatrix(patel_coin(pp.phi2)),
                "extracted": _params_payload(extracted, None),
                "type": classify(extracted).value,
            },
            "residuals": {"max_error": report.max_amplitude_error},
        }
        return 0, envelope
    raise UsageError(f"unknown factorization kind {args.kind!r}")  # pragma: no cover


def _cmd_limit_compare(args) -> tuple[int, dict]:
    args.default_reference = True
    params, angles = _resolve_params(args)
    qubit = _resolve_qubit(args)
    sample = rescaled_qca_sample(params, qubit, args.steps)
    distance = kolmogorov_distance(sample)
    passed = distance <= args.tolerance
    envelope = {
        "command": "limit-compare",
        "params": {
            **_params_payload(params, angles),
            "qubit": {"alpha": _cnum(qubit[0]), "beta": _cnum(qubit[1])},
            "steps": args.steps,
            "tolerance": args.tolerance,
        },
        "result": {
            "steps": args.steps,
            "kolmogorov_distance": distance,
            "tolerance": args.tolerance,
            "pass": passed,
        },
        "residuals": {"kolmogorov_distance": distance},
    }
    return (0 if passed else 1), envelope


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--theta", type=parse_angle, default=None,
        help="first angle; accepts pi literals like pi/4 (default: none)",
    )
    parser.add_argument(
        "--phi", type=parse_angle, default=None,
        help="second angle; accepts pi literals (default: none)",
    )
    parser.add_argument(
        "--delta", type=parse_angle, default=None,
        help="global phase angle; accepts pi literals (default: none)",
    )
    parser.add_argument(
        "--params", type=float, nargs=8, default=None,
        metavar=("A_RE", "A_IM", "B_RE", "B_IM", "C_RE", "C_IM", "D_RE", "D_IM"),
        help="raw coefficient tuple as re/im pairs; validated for unitarity",
    )


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="output format (default: csv)",
    )
    parser.add_argument(
        "--out", default=None, metavar="PATH",
        help="write the report to PATH instead of stdout (default: stdout)",
    )


def _add_qubit_flag(parser: argparse.ArgumentParser, default=(1.0, 0.0)) -> None:
    parser.add_argument(
        "--qubit", type=float, nargs="+", default=list(default),
        metavar="V",
        help="internal state: 2 real or 4 re/im values "
        f"(default: {' '.join(repr(v) for v in default)})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcawalk",
        description="Exact lattice automaton and coined-walk simulations "
        "with machine-checked equivalences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="validate a coefficient tuple and name its class")
    _add_param_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("simulate-qca", help="evolve the paired-branch distribution")
    _add_param_flags(p)
    _add_qubit_flag(p)
    p.add_argument("--steps", type=int, default=1, help="step count (default: 1)")
    p.add_argument(
        "--sign", choices=("+", "-"), default="-",
        help="branch pairing direction (default: -)",
    )
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_simulate_qca)

    p = sub.add_parser("simulate-qw", help="evolve a generalized coined walk")
    _add_param_flags(p)
    _add_qubit_flag(p)
    p.add_argument("--steps", type=int, default=1, help="step count (default: 1)")
    p.add_argument(
        "--family", choices=("A", "B"), default="A",
        help="block family (default: A)",
    )
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_simulate_qw)

    p = sub.add_parser("verify", help="run an equivalence check; nonzero exit on failure")
    p.add_argument(
        "--kind", choices=("A", "B", "two-step", "patel"), default="A",
        help="which identity to verify (default: A)",
    )
    _add_param_flags(p)
    _add_qubit_flag(p, default=(0.7071067811865476, 0.7071067811865476))
    p.add_argument("--steps", type=int, default=50, help="steps to check (default: 50)")
    p.add_argument(
        "--family", choices=("A", "B"), default="A",
        help="family for two-step verification (default: A)",
    )
    p.add_argument("--theta1", type=parse_angle, default=0.0,
                   help="first free phase for two-step (default: 0)")
    p.add_argument("--theta2", type=parse_angle, default=0.0,
                   help="second free phase for two-step (default: 0)")
    p.add_argument("--phi1", type=parse_angle, default=math.pi / 4,
                   help="even half-step angle for patel (default: pi/4)")
    p.add_argument("--phi2", type=parse_angle, default=math.pi / 4,
                   help="odd half-step angle for patel (default: pi/4)")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("factorize", help="print factor matrices")
    p.add_argument(
        "--kind", choices=("two-step", "patel"), default="two-step",
        help="which factorization (default: two-step)",
    )
    _add_param_flags(p)
    p.add_argument(
        "--family", choices=("A", "B"), default="A",
        help="family for two-step factors (default: A)",
    )
    p.add_argument("--theta1", type=parse_angle, default=0.0,
                   help="first free phase (default: 0)")
    p.add_argument("--theta2", type=parse_angle, default=0.0,
                   help="second free phase (default: 0)")
    p.add_argument("--phi1", type=parse_angle, default=math.pi / 4,
                   help="even half-step angle (default: pi/4)")
    p.add_argument("--phi2", type=parse_angle, default=math.pi / 4,
                   help="odd half-step angle (default: pi/4)")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_factorize)

    p = sub.add_parser(
        "limit-compare",
        help="compare a rescaled run against the closed-form limit law",
    )
    _add_param_flags(p)
    _add_qubit_flag(p, default=(0.7071067811865476, 0.7071067811865476))
    p.add_argument("--steps", type=int, default=500, help="step count (default: 500)")
    p.add_argument(
        "--tolerance", type=float, default=0.08,
        help="maximum accepted sup-distance (default: 0.08)",
    )
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_limit_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    started = time.perf_counter()
    try:
        code, envelope = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(_render(envelope, args.format), args.out)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    print(f"duration_ms={elapsed_ms:.3f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
