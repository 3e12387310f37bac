"""FastAPI service exposing the solver pipeline.

Run with:  uvicorn minfix.api:app

Endpoints take the raw source text of the respective format plus
options and return the full result (values, trace, certificate).
Unparsable input is a client error (422 with location details);
solver failure classifications are results, not HTTP errors.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .errors import ParseError
from .models import AnalyzeResponse, GameResponse, SolveRequest, SolveResponse
from .service import analyze_program_text, solve_equations_text, solve_game_text

app = FastAPI(
    title="minfix",
    version=__version__,
    description="Smallest fixed points of monotone min-max-affine systems "
                "by policy iteration, with an interval analysis frontend.",
)


def _parse_error(exc: ParseError) -> HTTPException:
    return HTTPException(
        status_code=422,
        detail={"message": exc.message, "line": exc.line, "col": exc.col},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/solve", response_model=SolveResponse, response_model_exclude_none=True)
def solve(request: SolveRequest) -> SolveResponse:
    """Solve a .eqs equation system for its smallest fixed point."""
    try:
        return solve_equations_text(request.source, request.options)
    except ParseError as exc:
        raise _parse_error(exc) from exc


@app.post("/analyze", response_model=AnalyzeResponse, response_model_exclude_none=True)
def analyze(request: SolveRequest) -> AnalyzeResponse:
    """Analyze a .tc program: tightest interval invariants per control point."""
    try:
        return analyze_program_text(request.source, request.options)
    except ParseError as exc:
        raise _parse_error(exc) from exc


@app.post("/game", response_model=GameResponse, response_model_exclude_none=True)
def game(request: SolveRequest) -> GameResponse:
    """Solve a .game state/action system for its per-state values."""
    try:
        return solve_game_text(request.source, request.options)
    except ParseError as exc:
        raise _parse_error(exc) from exc
