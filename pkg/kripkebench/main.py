from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from kripkebench.bridge import check_lemma3
from kripkebench.config import configure_logging, settings
from kripkebench.definability import CloneProblem, Definable, check_definable
from kripkebench.errors import SearchSpaceTooLarge, WorkbenchError
from kripkebench.formula import MAX_NESTING, parse, render
from kripkebench.frames import enumerate_frames
from kripkebench.kripke import forces, parse_model_text, render_frame_text, render_model_text
from kripkebench.validity import (
    Counterexample,
    LogicClass,
    check_equivalence,
    check_validity,
    godel_fan,
    pigeonhole_formula,
)
from kripkebench.values import MATRIX_FAMILIES, extend_valuation, find_falsifying, is_designated, parse_valuation_text

configure_logging()
app = FastAPI(title="kripkebench")


class EvalRequest(BaseModel):
    model: str
    world: str
    formula: str
    close_up: bool = False


class ValidRequest(BaseModel):
    formula: str
    logic: LogicClass
    max_worlds: int = Field(ge=1)
    ceiling: int | None = Field(default=None, ge=1)


class EquivRequest(BaseModel):
    left: str
    right: str
    logic: LogicClass
    max_worlds: int = Field(ge=1)
    ceiling: int | None = Field(default=None, ge=1)


class CloneRequest(BaseModel):
    model: str
    connectives: list[str]
    target: str
    generators: list[str] | None = None


class ValuationRequest(BaseModel):
    valuation: str
    formula: str


class Lemma3Request(BaseModel):
    depth: int = Field(ge=0, le=MAX_NESTING)
    frames: int = Field(ge=1)
    trials: int = Field(ge=1)
    seed: int


class TautologyRequest(BaseModel):
    formula: str
    values: int = Field(ge=2)
    family: Literal["godel", "lukasiewicz"] = "godel"
    ceiling: int | None = Field(default=None, ge=1)


def _fail(e: Exception):
    if isinstance(e, SearchSpaceTooLarge):
        raise HTTPException(status_code=413, detail=str(e))
    raise HTTPException(status_code=400, detail=str(e))


def _verdict(verdict) -> dict:
    if isinstance(verdict, Counterexample):
        return {
            "decision": verdict.decision.value,
            "logic": verdict.logic.value,
            "frame_index": verdict.frame_index,
            "world": verdict.world,
            "direction": verdict.direction,
            "model": render_model_text(verdict.model),
        }
    return {"decision": verdict.decision.value, "logic": verdict.logic.value, "bound": verdict.bound}


@app.get("/")
def root():
    return {"status": "kripkebench running", "threads": settings.threads, "ceiling": settings.ceiling}


@app.get("/api/frames")
def frames(count: int = 10, up_to_iso: bool = False):
    if not 0 <= count <= 1000:
        raise HTTPException(status_code=400, detail="count must be between 0 and 1000")
    return {"frames": [render_frame_text(fr) for fr in enumerate_frames(count, up_to_iso=up_to_iso)]}


@app.get("/api/pigeonhole/{n}")
def pigeonhole(n: int):
    try:
        return {"formula": render(pigeonhole_formula(n))}
    except ValueError as e:
        _fail(e)


@app.get("/api/godel-fan/{n}")
def fan(n: int):
    try:
        model, f = godel_fan(n)
    except ValueError as e:
        _fail(e)
    return {"model": render_model_text(model), "formula": render(f), "root_forces": forces(model, "k", f)}


@app.post("/api/eval")
def evaluate(request: EvalRequest):
    try:
        model = parse_model_text(request.model, close_up=request.close_up)
        return {"forced": forces(model, request.world, parse(request.formula))}
    except WorkbenchError as e:
        _fail(e)


@app.post("/api/valid")
def valid(request: ValidRequest):
    try:
        verdict = check_validity(parse(request.formula), request.logic, request.max_worlds, ceiling=request.ceiling)
    except WorkbenchError as e:
        _fail(e)
    return _verdict(verdict)


@app.post("/api/equiv")
def equiv(request: EquivRequest):
    try:
        verdict = check_equivalence(
            parse(request.left), parse(request.right), request.logic, request.max_worlds, ceiling=request.ceiling
        )
    except WorkbenchError as e:
        _fail(e)
    return _verdict(verdict)


@app.post("/api/clone")
def clone(request: CloneRequest):
    try:
        model = parse_model_text(request.model)
        problem = CloneProblem.build(model, request.connectives, parse(request.target), request.generators)
    except (WorkbenchError, ValueError) as e:
        _fail(e)
    certificate = check_definable(problem)
    if isinstance(certificate, Definable):
        return {"decision": certificate.decision, "witness": render(certificate.witness)}
    return {"decision": certificate.decision, "closure": [u.worlds() for u in certificate.closure]}


@app.post("/api/mv/eval")
def mv_eval(request: ValuationRequest):
    try:
        value = extend_valuation(parse_valuation_text(request.valuation), parse(request.formula))
    except WorkbenchError as e:
        _fail(e)
    return {"value": str(value), "designated": is_designated(value)}


@app.post("/api/mv/check-lemma3")
def mv_check_lemma3(request: Lemma3Request):
    report = check_lemma3(request.depth, request.frames, request.trials, request.seed, threads=settings.threads)
    return {"ok": report.ok, **report.model_dump()}


@app.post("/api/mv/tautology")
def mv_tautology(request: TautologyRequest):
    matrix = MATRIX_FAMILIES[request.family](request.values)
    try:
        assignment = find_falsifying(matrix, parse(request.formula), ceiling=request.ceiling)
    except WorkbenchError as e:
        _fail(e)
    return {"matrix": matrix.name, "tautology": assignment is None, "falsifying": assignment}
