"""Request and response bodies of the HTTP service."""

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field

Scalar = Union[float, str]


class TransformRequest(BaseModel):
    theory: Literal["hardy", "bergman", "sb"]
    coeffs: list[Scalar] = Field(default_factory=list)
    basis: Optional[Literal["fourier", "monomial", "hermite"]] = None
    m: int = Field(2, ge=2)
    nodes: Optional[int] = Field(None, ge=4)
    rmax: Optional[float] = Field(None, gt=0, le=1)
    tolerance: float = Field(1e-8, gt=0)
    min_mode: int = 0
    calibrated: Optional[bool] = None


class VerifyRequest(BaseModel):
    suite: str = "all"
    seed: int = 0
    tolerance_scale: float = Field(1.0, gt=0)


class FuncalcRequest(BaseModel):
    f: str
    matrix: Union[dict[str, Any], list[Any]]
    method: Literal["contour", "disk", "weyl"] = "contour"
    nodes: int = Field(512, ge=16)
    tolerance: Optional[float] = Field(None, gt=0)


class RunResponse(BaseModel):
    record: dict[str, Any]
    wall_time: float


class TransformResponse(RunResponse):
    envelope: dict[str, Any]
    data: dict[str, list[float]]


class ErrorBody(BaseModel):
    exit_code: int
    kind: str
    message: str
    position: Optional[int] = None


class Health(BaseModel):
    status: str
    version: str
