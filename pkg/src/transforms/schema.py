"""Schemas and codec for the JSON transform format."""
from typing import Annotated
from typing import Any
from typing import Literal

from ninja import Schema
from pydantic import Field
from pydantic import TypeAdapter
from pydantic import field_validator
from series.schema import SeriesSchema
from series.schema import series_to_dict
from utils.schema import format_rational
from utils.schema import parse_rational

from .elementary import INF
from .elementary import BlowUp
from .elementary import ElementaryTransform
from .elementary import Ramification
from .elementary import Shear
from .elementary import TransformPath
from .elementary import Tschirnhausen


class BlowUpSchema(Schema):
    """A blow-up chart."""

    kind: Literal["blowup"]
    i: int = Field(ge=1)
    j: int = Field(ge=1)
    lam: str = Field(alias="lambda")

    @field_validator("lam")
    @classmethod
    def lambda_is_rational_or_inf(cls, value: str) -> str:
        """Lambda is a rational string or inf."""
        if value != INF:
            parse_rational(value)
        return value

    def to_transform(self) -> ElementaryTransform:
        """Build the transform."""
        return BlowUp.of(self.i, self.j, INF if self.lam == INF else parse_rational(self.lam))


class TschirnhausenSchema(Schema):
    """A Tschirnhausen translation."""

    kind: Literal["tschirnhausen"]
    h: SeriesSchema
    i: int | None = None

    def to_transform(self) -> ElementaryTransform:
        """Build the transform, checking the optional index against h."""
        h = self.h.to_series()
        if self.i is not None and self.i != h.nvars + 1:
            raise ValueError(f"translation index {self.i} does not match h in {h.nvars} variables")
        return Tschirnhausen(h)


class ShearSchema(Schema):
    """A linear shear."""

    kind: Literal["shear"]
    i: int = Field(ge=1)
    c: list[str]

    def to_transform(self) -> ElementaryTransform:
        """Build the transform."""
        return Shear(self.i, tuple(parse_rational(ck) for ck in self.c))


class RamificationSchema(Schema):
    """A ramification."""

    kind: Literal["ramification"]
    i: int = Field(ge=1)
    d: int = Field(ge=1)
    sign: Literal["+", "-", "−"] = "+"

    def to_transform(self) -> ElementaryTransform:
        """Build the transform."""
        return Ramification(self.i, self.d, 1 if self.sign == "+" else -1)


TransformSchema = Annotated[
    BlowUpSchema | TschirnhausenSchema | ShearSchema | RamificationSchema,
    Field(discriminator="kind"),
]

path_adapter: TypeAdapter[list[TransformSchema]] = TypeAdapter(list[TransformSchema])


def transform_to_dict(nu: ElementaryTransform) -> dict[str, Any]:
    """Encode one transform."""
    if isinstance(nu, BlowUp):
        return {"kind": nu.kind, "i": nu.i, "j": nu.j, "lambda": format_rational(nu.lam)}
    if isinstance(nu, Tschirnhausen):
        return {"kind": nu.kind, "i": nu.i, "h": series_to_dict(nu.h)}
    if isinstance(nu, Shear):
        return {"kind": nu.kind, "i": nu.i, "c": [format_rational(ck) for ck in nu.c]}
    return {"kind": nu.kind, "i": nu.i, "d": nu.d, "sign": "+" if nu.sign > 0 else "-"}


def path_to_list(path: TransformPath) -> list[dict[str, Any]]:
    """Encode a path as a JSON array."""
    return [transform_to_dict(nu) for nu in path]


def path_from_list(data: list[Any]) -> TransformPath:
    """Decode and validate a path."""
    return TransformPath(tuple(item.to_transform() for item in path_adapter.validate_python(data)))
