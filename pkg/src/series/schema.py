"""Schemas and codec for the JSON series format."""
from typing import Any
from typing import Literal

from ninja import Schema
from pydantic import field_validator
from pydantic import model_validator
from utils.schema import format_rational
from utils.schema import parse_rational

from .core import Series
from .core import default_names
from .normality import NormalCertificate
from .normality import NormalityResult
from .normality import NotNormal
from .normality import UnknownAtTruncation


class TermSchema(Schema):
    """One term of a series."""

    exp: list[int]
    coef: str

    @field_validator("exp")
    @classmethod
    def exponents_are_natural(cls, value: list[int]) -> list[int]:
        """Exponents are natural numbers."""
        if any(e < 0 for e in value):
            raise ValueError("exponents must be natural numbers")
        return value

    @field_validator("coef")
    @classmethod
    def coefficient_is_rational(cls, value: str) -> str:
        """Coefficients are decimal integer fraction strings."""
        parse_rational(value)
        return value


class SeriesSchema(Schema):
    """The interchange format for series."""

    vars: list[str]
    trunc: int | Literal["exact"]
    terms: list[TermSchema]

    @model_validator(mode="after")
    def exponent_lengths_match(self) -> "SeriesSchema":
        """Every exponent has one entry per variable."""
        for term in self.terms:
            if len(term.exp) != len(self.vars):
                raise ValueError(f"exponent {term.exp} does not match variables {self.vars}")
        if isinstance(self.trunc, int) and self.trunc < 0:
            raise ValueError("trunc must be a natural number or 'exact'")
        return self

    def to_series(self) -> Series:
        """Build the Series this payload describes."""
        trunc = None if self.trunc == "exact" else int(self.trunc)
        return Series(len(self.vars), [(tuple(t.exp), parse_rational(t.coef)) for t in self.terms], trunc)


def series_to_dict(f: Series, names: list[str] | None = None) -> dict[str, Any]:
    """Encode a series in the interchange format."""
    return {
        "vars": names if names is not None else default_names(f.nvars),
        "trunc": "exact" if f.trunc is None else f.trunc,
        "terms": [{"exp": list(exp), "coef": format_rational(coef)} for exp, coef in f.items()],
    }


def certificate_to_dict(cert: NormalCertificate, names: list[str] | None = None) -> dict[str, Any]:
    """Encode a normality certificate."""
    return {
        "alpha": list(cert.alpha),
        "unit_constant": format_rational(cert.unit_constant),
        "unit": series_to_dict(cert.unit, names),
    }


class NormalCertificateSchema(Schema):
    """The interchange format for normality certificates."""

    alpha: list[int]
    unit_constant: str | None = None
    unit: SeriesSchema

    @model_validator(mode="after")
    def unit_is_invertible(self) -> "NormalCertificateSchema":
        """The unit has a nonzero constant term that agrees with unit_constant."""
        unit = self.unit.to_series()
        if unit.constant_term() == 0:
            raise ValueError("certificate unit has zero constant term")
        if len(self.alpha) != unit.nvars or any(a < 0 for a in self.alpha):
            raise ValueError("certificate exponent does not match the unit")
        if self.unit_constant is not None and parse_rational(self.unit_constant) != unit.constant_term():
            raise ValueError("certificate unit_constant disagrees with the unit")
        return self

    def to_certificate(self) -> NormalCertificate:
        """Build the certificate."""
        return NormalCertificate(tuple(self.alpha), self.unit.to_series())


def normality_to_dict(result: NormalityResult, names: list[str] | None = None) -> dict[str, Any]:
    """Encode the outcome of is_normal."""
    if isinstance(result, NotNormal):
        return {"verdict": "not_normal", "witness": [list(w) for w in result.witness]}
    if isinstance(result, UnknownAtTruncation):
        return {"verdict": "unknown_at_truncation", "alpha": list(result.alpha), "trunc": result.trunc}
    return {"verdict": "normal", "certificate": certificate_to_dict(result.certificate, names)}
