"""Handlers behind the API endpoints; the CLI calls them in-process.

Each handler takes raw source text plus options and returns a response
model.  Parse errors raise ParseError (the API maps them to 422, the
CLI to exit code 1); solver outcomes, including the failure
classifications, are legitimate results and travel in the response
status.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction

from .core import Policy, PwaSystem, Vec, restrict
from .errors import NoFiniteFixedPoint, UnboundedBelow, Undecidable
from .frontend.equations import parse_equations
from .frontend.expr import normalize_system
from .frontend.ext import Infinity
from .frontend.game import parse_game
from .frontend.prepass import DEFAULT_WIDEN_FACTOR, eliminate_infinities
from .frontend.program import generate_equations, parse_program
from .lp import build_lp, format_lp
from .models import (
    AnalyzeResponse,
    AnalyzeResultModel,
    CertificateModel,
    ErrorModel,
    GameResponse,
    GameResultModel,
    ImprovementModel,
    IntervalModel,
    PointModel,
    SolveResponse,
    SolveResultModel,
    SolveSettings,
    TraceStepModel,
    ValueModel,
)
from .solver import (
    Descent,
    Solution,
    SolveOptions,
    Strict,
    first_policy,
    solve_smallest,
)
from .spectral import Inconclusive, RadiusLtOne, SpectralOutcome, UnitRadius

DECIMAL_DIGITS = 20


def decimal_str(value: Fraction) -> str:
    """Advisory decimal rendering, 20 significant digits."""
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _value_model(value: Fraction) -> ValueModel:
    return ValueModel(value=str(value), decimal=decimal_str(value))


def _ext_str(value) -> str:
    if isinstance(value, Infinity):
        return "+inf" if value.sign > 0 else "-inf"
    return str(value)


def certificate_model(outcome: SpectralOutcome) -> CertificateModel:
    if isinstance(outcome, RadiusLtOne):
        return CertificateModel(kind="radius_lt_one",
                                certificate_k=outcome.certificate_k,
                                iterations=outcome.iterations)
    if isinstance(outcome, UnitRadius):
        return CertificateModel(kind="unit_radius",
                                iterations=outcome.iterations,
                                h=[str(x) for x in outcome.h])
    assert isinstance(outcome, Inconclusive)
    return CertificateModel(kind="inconclusive", iterations=outcome.iterations)


def _trace_models(solution: Solution) -> list[TraceStepModel]:
    steps = []
    for record in solution.trace:
        if isinstance(record.improvement, Strict):
            imp = ImprovementModel(kind="strict")
        elif isinstance(record.improvement, Descent):
            imp = ImprovementModel(kind="descent",
                                   h=[str(x) for x in record.improvement.h])
        else:
            imp = ImprovementModel(kind="terminal")
        steps.append(TraceStepModel(
            policy=list(record.policy.choice),
            value=[str(x) for x in record.value],
            improvement=imp,
        ))
    return steps


def _lp_dumps(system: PwaSystem, solution: Solution, names: list[str]) -> list[str]:
    return [
        format_lp(build_lp(restrict(system, record.policy)), names)
        for record in solution.trace
    ]


def _solve_options(settings: SolveSettings, system: PwaSystem) -> SolveOptions:
    initial = first_policy(system) if settings.seed_policy == "first" else None
    return SolveOptions(
        oracle2_cap=settings.oracle2_cap,
        initial_policy=initial,
        max_rounds=settings.max_iter,
    )


def solve_equations_text(source: str, settings: SolveSettings | None = None) -> SolveResponse:
    settings = settings or SolveSettings()
    ns = parse_equations(source)
    try:
        solution = solve_smallest(ns.system, _solve_options(settings, ns.system))
    except NoFiniteFixedPoint as exc:
        return SolveResponse(status="no_finite_fixed_point",
                             error=ErrorModel(message=str(exc)))
    except UnboundedBelow as exc:
        return SolveResponse(status="unbounded_below", error=ErrorModel(message=str(exc)))
    except Undecidable as exc:
        return SolveResponse(status="undecidable", error=ErrorModel(message=str(exc)))
    result = SolveResultModel(
        variables={name: _value_model(v) for name, v in zip(ns.var_names, solution.u)},
        trace=_trace_models(solution),
        certificate=certificate_model(solution.certificate),
        lps=_lp_dumps(ns.system, solution, list(ns.var_names)) if settings.dump_lp else None,
    )
    return SolveResponse(status="ok", result=result)


def analyze_program_text(source: str, settings: SolveSettings | None = None) -> AnalyzeResponse:
    settings = settings or SolveSettings()
    program = parse_program(source)
    es = generate_equations(program)
    pre = eliminate_infinities(
        es.names, es.exprs,
        widen_factor=settings.widen_threshold or DEFAULT_WIDEN_FACTOR)

    trace: list[TraceStepModel] = []
    certificate = None
    lps = None
    if pre.kept:
        residual = normalize_system(pre.residual, len(pre.kept))
        try:
            solution = solve_smallest(residual, _solve_options(settings, residual))
        except NoFiniteFixedPoint as exc:
            return AnalyzeResponse(status="no_finite_fixed_point",
                                   error=ErrorModel(message=str(exc)))
        except UnboundedBelow as exc:
            return AnalyzeResponse(status="unbounded_below",
                                   error=ErrorModel(message=str(exc)))
        except Undecidable as exc:
            return AnalyzeResponse(status="undecidable",
                                   error=ErrorModel(message=str(exc)))
        kept_values: Vec = solution.u
        trace = _trace_models(solution)
        certificate = certificate_model(solution.certificate)
        if settings.dump_lp:
            lps = _lp_dumps(residual, solution, list(pre.kept_names))
    else:
        kept_values = ()

    env = pre.reconstruct(kept_values)
    index = {name: i for i, name in enumerate(es.names)}
    points = []
    for point_id in sorted(es.provenance):
        intervals = {}
        for var, (m_name, p_name) in es.provenance[point_id].items():
            m = env[index[m_name]]
            p = env[index[p_name]]
            intervals[var] = IntervalModel(lo=_ext_str(-m), hi=_ext_str(p))
        points.append(PointModel(id=point_id, vars=intervals))

    result = AnalyzeResultModel(
        points=points,
        trace=trace,
        certificate=certificate,
        widened=list(pre.report.widened),
        eliminated=[{"name": n, "value": s} for n, s in pre.report.eliminated],
        lps=lps,
    )
    return AnalyzeResponse(status="ok", result=result)


def solve_game_text(source: str, settings: SolveSettings | None = None) -> GameResponse:
    settings = settings or SolveSettings()
    ns = parse_game(source)
    try:
        solution = solve_smallest(ns.system, _solve_options(settings, ns.system))
    except NoFiniteFixedPoint as exc:
        return GameResponse(status="no_finite_fixed_point",
                            error=ErrorModel(message=str(exc)))
    except UnboundedBelow as exc:
        return GameResponse(status="unbounded_below", error=ErrorModel(message=str(exc)))
    except Undecidable as exc:
        return GameResponse(status="undecidable", error=ErrorModel(message=str(exc)))
    labels = ns.provenance["action_labels"]
    final_policy: Policy = solution.trace[-1].policy
    result = GameResultModel(
        values={name: _value_model(v) for name, v in zip(ns.var_names, solution.u)},
        policy={state: labels[j][final_policy.choice[j]]
                for j, state in enumerate(ns.var_names)},
        trace=_trace_models(solution),
        certificate=certificate_model(solution.certificate),
        lps=_lp_dumps(ns.system, solution, list(ns.var_names)) if settings.dump_lp else None,
    )
    return GameResponse(status="ok", result=result)
