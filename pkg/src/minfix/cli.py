"""Thin command-line client for the solver service.

By default the request is handled in-process by the same handlers the
FastAPI app uses; with --server URL it is POSTed to a running service
instead, so the CLI never duplicates pipeline logic.

Exit codes: 0 solved, 1 parse/validation error, 2 no finite smallest
fixed point (infeasible or unbounded value determination), 3 minimality
undecidable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ParseError
from .models import (
    AnalyzeResponse,
    GameResponse,
    SolveRequest,
    SolveResponse,
    SolveSettings,
)
from .service import analyze_program_text, solve_equations_text, solve_game_text

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NO_SOLUTION = 2
EXIT_UNDECIDABLE = 3

_STATUS_EXIT = {
    "ok": EXIT_OK,
    "no_finite_fixed_point": EXIT_NO_SOLUTION,
    "unbounded_below": EXIT_NO_SOLUTION,
    "undecidable": EXIT_UNDECIDABLE,
}

_LOCAL_HANDLERS = {
    "solve": (solve_equations_text, SolveResponse),
    "analyze": (analyze_program_text, AnalyzeResponse),
    "game": (solve_game_text, GameResponse),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minfix",
        description="Smallest fixed points of monotone min-max-affine systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, help_text in (
        ("solve", "solve a .eqs equation file"),
        ("analyze", "analyze a .tc program file"),
        ("game", "solve a .game file"),
    ):
        p = sub.add_parser(command, help=help_text)
        p.add_argument("path", help="input file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--trace", action="store_true",
                       help="print the policy trace")
        p.add_argument("--oracle2-cap", type=int, metavar="N",
                       help="iteration cap for the negative-cone radius test")
        p.add_argument("--seed-policy", choices=("first", "warmstart"),
                       default="warmstart", help="initial policy selection")
        p.add_argument("--dump-lp", action="store_true",
                       help="print the value-determination program of every round")
        p.add_argument("--max-iter", type=int, metavar="N",
                       help="hard limit on policy-iteration rounds")
        p.add_argument("--widen-threshold", type=int, metavar="N",
                       help="widening threshold factor of the infinity pre-pass "
                            "(analyze only, default 3)")
        p.add_argument("--server", metavar="URL",
                       help="POST to a running service instead of solving in-process")
    return parser


def _settings(args: argparse.Namespace) -> SolveSettings:
    return SolveSettings(
        trace=args.trace,
        oracle2_cap=args.oracle2_cap,
        seed_policy=args.seed_policy,
        dump_lp=args.dump_lp,
        max_iter=args.max_iter,
        widen_threshold=args.widen_threshold,
    )


def _dispatch(args: argparse.Namespace, source: str):
    """Returns the response model, or exits on parse errors."""
    settings = _settings(args)
    if args.server:
        import httpx

        request = SolveRequest(source=source, options=settings)
        url = args.server.rstrip("/") + "/" + args.command
        reply = httpx.post(url, json=request.model_dump(), timeout=60.0)
        model = _LOCAL_HANDLERS[args.command][1]
        if reply.status_code == 422:
            detail = reply.json().get("detail", {})
            _fail_parse(detail.get("message", "parse error"),
                        detail.get("line"), detail.get("col"))
        reply.raise_for_status()
        return model.model_validate(reply.json())
    handler = _LOCAL_HANDLERS[args.command][0]
    try:
        return handler(source, settings)
    except ParseError as exc:
        _fail_parse(exc.message, exc.line, exc.col)


def _fail_parse(message: str, line, col) -> None:
    where = f" at line {line}" if line is not None else ""
    where += f", column {col}" if col is not None else ""
    print(f"error: {message}{where}", file=sys.stderr)
    raise SystemExit(EXIT_PARSE)


def _print_trace(trace) -> None:
    for k, step in enumerate(trace):
        policy = " ".join(str(a) for a in step.policy)
        value = ", ".join(step.value)
        kind = step.improvement.kind
        line = f"round {k}: policy [{policy}]  value ({value})  -> {kind}"
        if step.improvement.h is not None:
            line += "  h=(" + ", ".join(step.improvement.h) + ")"
        print(line)


def _print_certificate(cert) -> None:
    if cert is None:
        print("certificate: none (empty residual system)")
    elif cert.kind == "radius_lt_one":
        print(f"certificate: spectral radius < 1 on the negative cone "
              f"(k={cert.certificate_k}, {cert.iterations} iterations)")
    elif cert.kind == "unit_radius":
        print(f"certificate: unit radius, fixed direction h=({', '.join(cert.h)})")
    else:
        print(f"certificate: inconclusive after {cert.iterations} iterations")


def _print_lps(lps) -> None:
    if not lps:
        return
    for k, text in enumerate(lps):
        print(f"-- value determination {k} --")
        print(text)


def _render_solve(response: SolveResponse, args) -> None:
    result = response.result
    for name, value in result.variables.items():
        print(f"{name} = {value.value} ({value.decimal})")
    if args.trace:
        _print_trace(result.trace)
    _print_certificate(result.certificate)
    if args.dump_lp:
        _print_lps(result.lps)


def _render_analyze(response: AnalyzeResponse, args) -> None:
    result = response.result
    for point in result.points:
        intervals = ", ".join(f"{var} in [{iv.lo}, {iv.hi}]"
                              for var, iv in point.vars.items())
        print(f"point {point.id}: {intervals}")
    for entry in result.eliminated:
        print(f"eliminated: {entry['name']} = {entry['value']}")
    if result.widened:
        print("widened to +inf: " + ", ".join(result.widened))
    if args.trace:
        _print_trace(result.trace)
    _print_certificate(result.certificate)
    if args.dump_lp:
        _print_lps(result.lps)


def _render_game(response: GameResponse, args) -> None:
    result = response.result
    for state, value in result.values.items():
        print(f"state {state}: value = {value.value} ({value.decimal})")
    if args.trace and result.policy:
        for state, action in result.policy.items():
            print(f"policy: state {state} -> action {action}")
        _print_trace(result.trace)
    _print_certificate(result.certificate)
    if args.dump_lp:
        _print_lps(result.lps)


_RENDERERS = {"solve": _render_solve, "analyze": _render_analyze, "game": _render_game}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    path = Path(args.path)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    response = _dispatch(args, source)
    code = _STATUS_EXIT[response.status]
    if response.status != "ok":
        print(f"error: {response.error.message}", file=sys.stderr)
        return code

    if args.format == "json":
        payload = response.result.model_dump(mode="json")
        print(json.dumps(payload, indent=2))
    else:
        _RENDERERS[args.command](response, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
