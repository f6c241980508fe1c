"""Schemas for the monomialize and chart-at payloads."""
from typing import Any

from ninja import Schema
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator
from series.schema import SeriesSchema
from transforms.elementary import INF
from transforms.elementary import parse_lambda
from utils.schema import parse_rational

from .checks import StarReport
from .tree import TreeConfig


class TreeConfigSchema(Schema):
    """Per run overrides of the MONO_FORGE_* defaults."""

    max_depth: int | None = Field(default=None, ge=1)
    trunc: int | None = Field(default=None, ge=1)
    lambda_seed: list[str] | None = None

    @field_validator("lambda_seed")
    @classmethod
    def seeds_are_rational_or_inf(cls, value: list[str] | None) -> list[str] | None:
        """Every seed is a rational string or inf."""
        for seed in value or []:
            if seed != INF:
                parse_rational(seed)
        return value

    def to_config(self) -> TreeConfig:
        """Merge the overrides into the settings defaults."""
        seeds = None if self.lambda_seed is None else tuple(parse_lambda(s) for s in self.lambda_seed)
        return TreeConfig.from_settings(max_depth=self.max_depth, trunc=self.trunc, lambda_seed=seeds)


class MonomializeRequestSchema(Schema):
    """Targets to monomialize."""

    targets: list[SeriesSchema] = Field(min_length=1)
    config: TreeConfigSchema = Field(default_factory=TreeConfigSchema)

    @model_validator(mode="after")
    def targets_share_variables(self) -> "MonomializeRequestSchema":
        """All targets use the same variable names."""
        names = {tuple(t.vars) for t in self.targets}
        if len(names) > 1:
            raise ValueError("targets use different variables")
        return self


class ChartAtRequestSchema(MonomializeRequestSchema):
    """Targets and a point near the origin."""

    point: list[str]

    @field_validator("point")
    @classmethod
    def point_is_rational(cls, value: list[str]) -> list[str]:
        """Coordinates are rational strings."""
        for coordinate in value:
            parse_rational(coordinate)
        return value

    @model_validator(mode="after")
    def point_matches_targets(self) -> "ChartAtRequestSchema":
        """The point has one coordinate per variable."""
        if len(self.point) != len(self.targets[0].vars):
            raise ValueError("point and targets disagree on the number of variables")
        return self


def star_report_to_dict(report: StarReport) -> dict[str, Any]:
    """Encode a star_check report."""
    return {
        "checked": report.checked,
        "violations": [
            {"path": v.path, "edge": v.edge, "variable": v.variable, "image": v.image, "verdict": v.verdict}
            for v in report.violations
        ],
    }

