"""FastAPI application exposing the transforms, the verification suites and
the functional calculus.

Run with ``uvicorn covcalc.service.app:app``.  Failures come back as HTTP 400
with an :class:`ErrorBody` whose ``exit_code`` is what the CLI exits with.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import commands
from ..io import TOOL_VERSION
from .schemas import FuncalcRequest, Health, RunResponse, TransformRequest, TransformResponse, VerifyRequest

app = FastAPI(title="covcalc", version=TOOL_VERSION)


@app.exception_handler(commands.CommandError)
async def command_error(request: Request, exc: commands.CommandError):
    return JSONResponse(status_code=400, content={"error": exc.to_dict()})


@app.get("/health", response_model=Health)
def health() -> Health:
    return Health(status="ok", version=TOOL_VERSION)


@app.post("/transform", response_model=TransformResponse)
def transform(req: TransformRequest) -> dict:
    return commands.run_transform(**req.model_dump())


@app.post("/verify", response_model=RunResponse)
def verify(req: VerifyRequest) -> dict:
    return commands.run_verify(req.suite, req.seed, req.tolerance_scale)


@app.post("/funcalc", response_model=RunResponse)
def funcalc(req: FuncalcRequest) -> dict:
    return commands.run_funcalc(**req.model_dump())
