"""Command-line front end.

Commands: recover, frames, forward, classify, selftest.  Results go to
stdout (or --output) as JSON; every failure prints a one-line JSON error on
stderr and maps to a documented exit code:

    0  success
    1  selftest failure
    2  parse/input error
    3  matrix not pseudo-orthogonal / vectors not a frame
    4  degenerate input (vanishing numerator or contraction, no real root)
    5  verification failed
    6  wrong component, signature, or group membership
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import io
from .algebra import Signature
from .errors import (
    CenterProjectionVanishesError,
    HestenesConditionError,
    MinorIdentityError,
    MixedParityError,
    NoRealRootError,
    NotAFrameError,
    NotAVersorError,
    NotInLipschitzGroupError,
    NotInPinError,
    NotPseudoOrthogonalError,
    ParseError,
    RotorLiftError,
    SignatureMismatchError,
    SpecialOrthogonalRequiredError,
    VerificationFailedError,
    WrongComponentError,
)
from .matrices import classify_component, validate_pseudo_orthogonal
from .recovery import classify_spin, forward_matrix, recover_hestenes, recover_spin, rotor_from_frames
from .selftest import SelftestConfig, run_selftest

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_PARSE = 2
EXIT_NOT_ORTHOGONAL = 3
EXIT_DEGENERATE = 4
EXIT_VERIFICATION = 5
EXIT_WRONG_COMPONENT = 6

_ERROR_CODES: tuple[tuple[type, int], ...] = (
    (ParseError, EXIT_PARSE),
    (NotPseudoOrthogonalError, EXIT_NOT_ORTHOGONAL),
    (NotAFrameError, EXIT_NOT_ORTHOGONAL),
    (CenterProjectionVanishesError, EXIT_DEGENERATE),
    (HestenesConditionError, EXIT_DEGENERATE),
    (NoRealRootError, EXIT_DEGENERATE),
    (VerificationFailedError, EXIT_VERIFICATION),
    (MinorIdentityError, EXIT_VERIFICATION),
    (SpecialOrthogonalRequiredError, EXIT_WRONG_COMPONENT),
    (SignatureMismatchError, EXIT_WRONG_COMPONENT),
    (WrongComponentError, EXIT_WRONG_COMPONENT),
    (NotInPinError, EXIT_WRONG_COMPONENT),
    (NotInLipschitzGroupError, EXIT_WRONG_COMPONENT),
    (MixedParityError, EXIT_WRONG_COMPONENT),
    (NotAVersorError, EXIT_WRONG_COMPONENT),
)


@dataclass
class CliConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    signature: Signature | None = None
    tol_ortho: float = 1e-9
    tol_residual: float = 1e-8
    method: str = "general"
    seed: int = 0


def _parse_signature(text: str) -> Signature:
    try:
        p_text, q_text = text.split(",")
        return Signature(int(p_text), int(q_text))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad --signature {text!r}: expected 'p,q'") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotorlift",
        description="Spin/Pin double-cover elements of pseudo-orthogonal matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="input file path")
        p.add_argument("--output", help="write the result document here instead of stdout")
        p.add_argument("--signature", help="p,q (required for CSV input, optional otherwise)")
        p.add_argument("--tol-ortho", type=float, default=1e-9, help="orthogonality tolerance")
        p.add_argument("--tol-residual", type=float, default=1e-8, help="verification tolerance")

    recover = sub.add_parser("recover", help="matrix -> spin element")
    add_common(recover)
    recover.add_argument(
        "--method", choices=("general", "hestenes"), default="general",
        help="hestenes is the dimension-4 shortcut, valid only for signature 1,3",
    )

    frames = sub.add_parser("frames", help="rotated frame -> rotor")
    add_common(frames)

    forward = sub.add_parser("forward", help="spin element -> matrix + component")
    add_common(forward)

    classify = sub.add_parser("classify", help="group membership of a matrix or versor")
    add_common(classify)

    selftest = sub.add_parser("selftest", help="run the reduced-scale invariant suites")
    add_common(selftest, needs_input=False)
    selftest.add_argument("--seed", type=int, default=0)
    return parser


def _emit(doc, config: CliConfig) -> None:
    text = io.dumps(doc) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_recover(config: CliConfig) -> int:
    matrix = io.load_matrix_file(config.input_path, config.signature, tol=config.tol_ortho)
    if config.method == "hestenes":
        result = recover_hestenes(matrix, residual_tol=config.tol_residual)
    else:
        result = recover_spin(matrix, residual_tol=config.tol_residual)
    _emit(io.rotor_result_to_doc(result), config)
    return EXIT_OK


def _cmd_frames(config: CliConfig) -> int:
    frames = io.load_frames_file(config.input_path, config.signature)
    result = rotor_from_frames(
        frames, ortho_tol=config.tol_ortho, residual_tol=config.tol_residual
    )
    _emit(io.rotor_result_to_doc(result), config)
    return EXIT_OK


def _cmd_forward(config: CliConfig) -> int:
    rotor = io.load_multivector_file(config.input_path, config.signature)
    matrix = forward_matrix(rotor, ortho_tol=config.tol_ortho)
    component = classify_component(matrix, tol=config.tol_ortho)
    _emit(
        {"matrix": io.matrix_to_doc(matrix), "component": io.component_to_doc(component)},
        config,
    )
    return EXIT_OK


def _cmd_classify(config: CliConfig) -> int:
    doc = io._parse_json(io._read_text(config.input_path))
    if isinstance(doc, dict) and "entries" in doc:
        entries, sig = io.matrix_from_doc(doc)
        if config.signature is not None and config.signature != sig:
            raise ParseError(f"file signature {sig} conflicts with requested {config.signature}")
        matrix = validate_pseudo_orthogonal(entries, sig, tol=config.tol_ortho)
        _emit(io.component_to_doc(classify_component(matrix, tol=config.tol_ortho)), config)
        return EXIT_OK
    rotor = io.multivector_from_doc(doc)
    if config.signature is not None and config.signature != rotor.sig:
        raise ParseError(f"file signature {rotor.sig} conflicts with requested {config.signature}")
    tags = classify_spin(rotor)
    _emit({"groups": tags.group_names()}, config)
    return EXIT_OK


def _cmd_selftest(config: CliConfig) -> int:
    suite_config = SelftestConfig(
        seed=config.seed, tol_residual=config.tol_residual, tol_ortho=config.tol_ortho
    )
    results = run_selftest(suite_config)
    width = max(len(r.name) for r in results)
    lines = [
        f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}  {r.detail}" for r in results
    ]
    text = "\n".join(lines) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_SELFTEST


_COMMANDS = {
    "recover": _cmd_recover,
    "frames": _cmd_frames,
    "forward": _cmd_forward,
    "classify": _cmd_classify,
    "selftest": _cmd_selftest,
}


def _error_exit(exc: Exception) -> int:
    for klass, code in _ERROR_CODES:
        if isinstance(exc, klass):
            break
    else:
        klass, code = type(exc), EXIT_PARSE
    name = type(exc).__name__.removesuffix("Error")
    line = io.dumps({"error": name, "message": str(exc), "exit_code": code}, indent=0)
    sys.stderr.write(line.replace("\n", " ") + "\n")
    return code


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = CliConfig(
            command=args.command,
            input_path=getattr(args, "input", None),
            output_path=args.output,
            signature=_parse_signature(args.signature) if args.signature else None,
            tol_ortho=args.tol_ortho,
            tol_residual=args.tol_residual,
            method=getattr(args, "method", "general"),
            seed=getattr(args, "seed", 0),
        )
        if config.tol_ortho <= 0 or config.tol_residual <= 0:
            raise ParseError("tolerances must be positive")
        return _COMMANDS[config.command](config)
    except RotorLiftError as exc:
        return _error_exit(exc)
    except (ValueError, OSError) as exc:
        return _error_exit(ParseError(str(exc)))


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
