"""Versioned JSON file formats.

Every document carries ``"format": 1``; on input the field may be omitted but
any other unknown field is rejected.  Emission is compact and deterministic.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import HurwitzError
from .gaussian import GaussianInt, GaussianRational
from .hurwitz import DigitSequence
from .patterns import HomotheticCopy, LatticePattern
from .seedset import InsertionSchedule

__all__ = [
    "FormatError",
    "DigitsDoc",
    "ValueDoc",
    "CylinderDoc",
    "ScheduleDoc",
    "PointsDoc",
    "CopyLine",
    "dumps",
    "parse",
    "parse_fraction",
]

Pair = tuple[int, int]


class FormatError(HurwitzError):
    """Malformed or schema-violating input document."""


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, strict=True)

    format: Literal[1] = 1


def parse_fraction(text: str) -> Fraction:
    """Exact "p/q" or integer string; decimals are refused as lossy."""
    text = str(text).strip()
    if any(c in text for c in ".eE"):
        raise FormatError(f"{text!r}: give an exact fraction p/q, not a decimal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{text!r} is not a fraction p/q") from exc


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class DigitsDoc(_Doc):
    digits: list[Pair]
    exhausted: bool = False

    @classmethod
    def of(cls, seq: DigitSequence) -> DigitsDoc:
        return cls(digits=[(d.re, d.im) for d in seq], exhausted=seq.exhausted)

    def to_sequence(self) -> DigitSequence:
        return DigitSequence(tuple(GaussianInt(a, b) for a, b in self.digits), self.exhausted)


class ValueDoc(_Doc):
    re: str
    im: str

    @field_validator("re", "im")
    @classmethod
    def _exact(cls, v: str) -> str:
        parse_fraction(v)
        return v

    @classmethod
    def of(cls, z: GaussianRational) -> ValueDoc:
        return cls(re=_frac_str(z.re), im=_frac_str(z.im))

    def to_rational(self) -> GaussianRational:
        return GaussianRational.from_parts(parse_fraction(self.re), parse_fraction(self.im))


class CylinderDoc(_Doc):
    word: list[Pair]
    p: Pair
    q: Pair
    center: ValueDoc
    log_diam_lo: float
    log_diam_hi: float


class ScheduleDoc(_Doc):
    epsilon: float | str
    t: Literal[3] = 3
    levels: list[int]
    verified_to: int

    @classmethod
    def of(cls, s: InsertionSchedule) -> ScheduleDoc:
        eps = float(s.epsilon)
        value: float | str = eps if Fraction(str(eps)) == s.epsilon else _frac_str(s.epsilon)
        return cls(epsilon=value, levels=list(s.levels), verified_to=s.verified_to)

    def to_schedule(self) -> InsertionSchedule:
        eps = Fraction(self.epsilon) if isinstance(self.epsilon, str) else Fraction(str(self.epsilon))
        return InsertionSchedule(eps, tuple(self.levels), self.verified_to)


class PointsDoc(_Doc):
    points: list[Pair]

    def to_pattern(self) -> LatticePattern:
        return LatticePattern(self.points)

    def to_set(self) -> set[GaussianInt]:
        return {GaussianInt(a, b) for a, b in self.points}


class CopyLine(_Doc):
    v: Pair
    n: int = Field(ge=1)
    verified: bool
    position: int | None = None
    singleton: bool = False

    @classmethod
    def of(cls, c: HomotheticCopy, verified: bool, position: int | None = None) -> CopyLine:
        return cls(v=(c.v.re, c.v.im), n=c.n, verified=verified, position=position,
                   singleton=c.singleton)


def _finite(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Compact JSON, one document.  ``None`` fields of models are dropped and
    non-finite floats become null."""
    if isinstance(obj, BaseModel):
        obj = obj.model_dump(mode="json", exclude_none=True)
    return json.dumps(_finite(obj), separators=(",", ":"), allow_nan=False)


def parse(model: type[_Doc], text: str) -> _Doc:
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise FormatError(f"invalid {model.__name__}: {exc.errors()[0]['msg']} "
                          f"at {exc.errors()[0]['loc']}") from exc
