"""Schemas and codec for manifolds and fiber cutting reports."""
from typing import Any

from ninja import Schema
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator
from series.schema import SeriesSchema
from series.schema import series_to_dict
from utils.schema import format_rational
from utils.schema import parse_rational

from .cutting import FiberCutReport
from .manifold import ManifoldSpec


class ManifoldSchema(Schema):
    """The interchange format for manifolds: an H-basic set plus the split and a dimension hint."""

    polyradius: list[str] = Field(min_length=1)
    split_n: int = Field(ge=0)
    d: int | None = None
    eqs: list[SeriesSchema] = Field(default_factory=list)
    ineqs: list[SeriesSchema] = Field(default_factory=list)

    @field_validator("polyradius")
    @classmethod
    def radii_are_positive(cls, value: list[str]) -> list[str]:
        """Radii are positive rational strings."""
        for radius in value:
            if parse_rational(radius) <= 0:
                raise ValueError(f"polyradius entries must be positive, got {radius}")
        return value

    @model_validator(mode="after")
    def shapes_agree(self) -> "ManifoldSchema":
        """Polynomials, split and dimension hint fit the polydisk."""
        nvars = len(self.polyradius)
        for f in self.eqs + self.ineqs:
            if len(f.vars) != nvars:
                raise ValueError(f"polynomial in variables {f.vars} on a {nvars} dimensional polydisk")
            if f.trunc != "exact":
                raise ValueError("manifolds are defined by exact polynomials")
        if self.split_n > nvars:
            raise ValueError(f"split_n {self.split_n} exceeds the {nvars} variables")
        if self.d is not None and self.d != nvars - len(self.eqs):
            raise ValueError(f"d = {self.d} does not match {nvars} variables and {len(self.eqs)} equations")
        return self

    @property
    def names(self) -> list[str] | None:
        """The variable names of the first polynomial."""
        first = next(iter(self.eqs + self.ineqs), None)
        return None if first is None else first.vars

    def to_manifold(self) -> ManifoldSpec:
        """Build the manifold."""
        names = self.names
        return ManifoldSpec(
            tuple(parse_rational(r) for r in self.polyradius),
            self.split_n,
            tuple(f.to_series() for f in self.eqs),
            tuple(g.to_series() for g in self.ineqs),
            None if names is None else tuple(names),
        )


class FiberCutRequestSchema(ManifoldSchema):
    """A manifold with the sampling options of fiber_cut."""

    grid: int = Field(default=32, ge=1)
    halvings: int = Field(default=4, ge=0)
    sweep_grid: int | None = Field(default=None, ge=1)


def fiber_cut_to_dict(report: FiberCutReport, names: list[str] | None = None) -> dict[str, Any]:
    """Encode a fiber cutting report."""
    return {
        "equations": [series_to_dict(e, names) for e in report.equations],
        "pretty": [e.pretty(names) for e in report.equations],
        "rank": report.rank,
        "dimension": report.dimension,
        "critical_dimension": report.critical_dimension,
        "dimension_drops": report.dimension_drops,
        "radius": [format_rational(r) for r in report.radius],
        "projection": {
            "samples": report.projection_samples,
            "failures": [list(x) for x in report.projection_failures],
        },
        "critical_points": len(report.critical_points),
    }


def critical_points_rows(report: FiberCutReport, names: list[str] | None = None) -> list[list[str]]:
    """CSV rows of the sampled critical points, with a header."""
    width = len(report.critical_points[0]) if report.critical_points else len(names or [])
    header = list(names) if names else [f"z{k}" for k in range(1, width + 1)]
    return [header] + [[repr(v) for v in point] for point in report.critical_points]
