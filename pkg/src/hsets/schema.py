"""Schemas and codec for sets, quadrants, charts and coverage reports."""
from typing import Any
from typing import Literal

from monomialize.charts import ChartAtPoint
from monomialize.schema import TreeConfigSchema
from ninja import Schema
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator
from series.normality import NormalCertificate
from series.schema import NormalCertificateSchema
from series.schema import SeriesSchema
from series.schema import certificate_to_dict
from series.schema import series_to_dict
from transforms.schema import path_to_list
from utils.schema import format_rational
from utils.schema import parse_rational

from .lifting import LiftedSet
from .parametrize import CoverageReport
from .parametrize import ParametrizeConfig
from .parametrize import ParametrizeResult
from .sets import Chart
from .sets import HBasicSet
from .sets import SubQuadrant

SIGN_VALUES = {"+": 1, "-": -1, "−": -1, "0": 0}


class HBasicSetSchema(Schema):
    """The interchange format for H-basic sets."""

    polyradius: list[str] = Field(min_length=1)
    eq: SeriesSchema | None = None
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
    def series_match_polydisk(self) -> "HBasicSetSchema":
        """Every defining series has one variable per radius."""
        for g in ([self.eq] if self.eq is not None else []) + self.ineqs:
            if len(g.vars) != len(self.polyradius):
                raise ValueError(f"series in variables {g.vars} on a {len(self.polyradius)} dimensional polydisk")
        return self

    @property
    def names(self) -> list[str] | None:
        """The variable names of the first defining series."""
        first = self.eq or next(iter(self.ineqs), None)
        return None if first is None else first.vars

    def to_set(self) -> HBasicSet:
        """Build the set."""
        return HBasicSet(
            tuple(parse_rational(r) for r in self.polyradius),
            None if self.eq is None else self.eq.to_series(),
            tuple(g.to_series() for g in self.ineqs),
        )


def set_to_dict(a: HBasicSet, names: list[str] | None = None) -> dict[str, Any]:
    """Encode a set."""
    return {
        "polyradius": [format_rational(r) for r in a.polyradius],
        "eq": None if a.eq is None else series_to_dict(a.eq, names),
        "ineqs": [series_to_dict(g, names) for g in a.ineqs],
    }


def quadrant_to_list(quadrant: SubQuadrant) -> list[dict[str, Any]]:
    """Encode the factors of a quadrant; a null radius means sufficiently small."""
    return [
        {"kind": f.kind.value, "radius": None if f.radius is None else format_rational(f.radius)}
        for f in quadrant.factors
    ]


def chart_to_dict(chart: Chart, hits: int | None = None) -> dict[str, Any]:
    """Encode a chart with its quadrant signs and transform path."""
    data: dict[str, Any] = {
        "quadrant": quadrant_to_list(chart.quadrant),
        "signs": chart.quadrant.describe(),
        "path": path_to_list(chart.path),
        "leaf_signs": [int(s) for s in chart.leaf_signs],
    }
    if hits is not None:
        data["hits"] = hits
    return data


def coverage_to_dict(report: CoverageReport) -> dict[str, Any]:
    """Encode a coverage report."""
    return {
        "samples": report.samples,
        "covered": report.covered,
        "fraction": report.fraction,
        "hits": report.hits,
        "missing": report.missing,
    }


def parametrize_result_to_dict(result: ParametrizeResult) -> dict[str, Any]:
    """Encode the charts and the coverage report."""
    hits = result.coverage.hits or [0] * len(result.charts)
    return {
        "charts": [chart_to_dict(c, h) for c, h in zip(result.charts, hits, strict=True)],
        "coverage": coverage_to_dict(result.coverage),
    }


def chart_at_point_to_dict(result: ChartAtPoint, names: list[str] | None = None) -> dict[str, Any]:
    """Encode the outcome of chart_at_point."""
    return {
        "path": path_to_list(result.path),
        "quadrant": quadrant_to_list(result.quadrant),
        "signs": result.quadrant.describe(),
        "preimage": [str(v) for v in result.preimage],
        "certificates": [certificate_to_dict(c, names) for c in result.certificates],
    }


def lifted_to_dict(lifted: LiftedSet) -> dict[str, Any]:
    """Encode a lifted set, its graph equations and how each bound was accepted."""
    return {
        "set": set_to_dict(lifted.presentation),
        "equations": [series_to_dict(e) for e in lifted.equations],
        "bounds": [
            {
                "index": check.index,
                "bound": format_rational(check.bound),
                "coefficient_sum": format_rational(check.coefficient_sum),
                "method": check.method,
            }
            for check in lifted.checks
        ],
    }


class SignRequestSchema(Schema):
    """A certificate and the sign pattern of a quadrant."""

    certificate: NormalCertificateSchema
    quadrant: list[Literal["+", "-", "−", "0"]]

    @model_validator(mode="after")
    def dimensions_match(self) -> "SignRequestSchema":
        """The quadrant has one factor per certificate exponent."""
        if len(self.quadrant) != len(self.certificate.alpha):
            raise ValueError("quadrant and certificate disagree on the number of variables")
        return self

    def to_certificate(self) -> NormalCertificate:
        """Build and check the certificate."""
        return self.certificate.to_certificate()

    def to_quadrant(self) -> SubQuadrant:
        """Build the quadrant with a symbolic radius."""
        return SubQuadrant.from_signs([SIGN_VALUES[s] for s in self.quadrant])


class ParametrizeConfigSchema(TreeConfigSchema):
    """Tree overrides plus the coverage region and grid."""

    delta: str | None = None
    grid: int | None = Field(default=None, ge=1)
    threads: int | None = Field(default=None, ge=1)

    @field_validator("delta")
    @classmethod
    def delta_is_positive(cls, value: str | None) -> str | None:
        """Delta is a positive rational string."""
        if value is not None and parse_rational(value) <= 0:
            raise ValueError("delta must be positive")
        return value

    def to_parametrize_config(self) -> ParametrizeConfig:
        """Merge the overrides into the settings defaults."""
        return ParametrizeConfig.from_settings(
            self.to_config(),
            delta=None if self.delta is None else parse_rational(self.delta),
            grid=self.grid,
            threads=self.threads,
        )


class ParametrizeRequestSchema(Schema):
    """A set to parametrize."""

    hset: HBasicSetSchema = Field(alias="set")
    config: ParametrizeConfigSchema = Field(default_factory=ParametrizeConfigSchema)


class LiftRequestSchema(Schema):
    """A set and one bound per lifted series."""

    hset: HBasicSetSchema = Field(alias="set")
    bounds: list[str]
    grid: int | None = Field(default=None, ge=1)

    @field_validator("bounds")
    @classmethod
    def bounds_are_positive(cls, value: list[str]) -> list[str]:
        """Bounds are positive rational strings."""
        for bound in value:
            if parse_rational(bound) <= 0:
                raise ValueError(f"bounds must be positive, got {bound}")
        return value
