"""Pydantic request/response models for the verification service."""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator, model_validator

from ..fieldlin import is_prime


class QuiverIn(BaseModel):
    """A quiver, either as a preset name or as the text format."""

    preset: str | None = None
    text: str | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if bool(self.preset) == bool(self.text):
            raise ValueError("give exactly one of 'preset' or 'text'")
        return self


class RunOptions(BaseModel):
    field_prime: int = Field(default=2, ge=2, alias="field")
    max_ind: int = Field(default=16, ge=1)
    max_subdim: int = Field(default=8, ge=1)
    heart_bound: int = Field(default=6, ge=1)
    jobs: int = Field(default=1, ge=1)
    cache_dir: str | None = None

    model_config = {"populate_by_name": True}

    @field_validator("field_prime")
    @classmethod
    def _prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"field characteristic {v} is not prime")
        return v


class CatalogRequest(BaseModel):
    quiver: QuiverIn
    options: RunOptions = RunOptions()


class ClassifyRequest(BaseModel):
    quiver: QuiverIn
    options: RunOptions = RunOptions()
    with_cond4: bool = False
    with_chains: bool = True


class TorsionIdRequest(BaseModel):
    quiver: QuiverIn
    options: RunOptions = RunOptions()
    torsion_id: int = Field(ge=0)


class ErrorBody(BaseModel):
    code: str  # "parse" | "bounds" | "math-check" | "internal"
    message: str


class ErrorResponse(BaseModel):
    error: ErrorBody


class HealthResponse(BaseModel):
    status: str
    version: str
    schema_version: int
