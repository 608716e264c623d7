"""Exact elements of U(1) stored as rationals modulo one."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError


@dataclass(frozen=True, order=True)
class Phase:
    """The unit complex number ``exp(2*pi*i * numerator/denominator)``.

    Any integer pair is accepted and reduced, so ``Phase(5, 4) == Phase(1, 4)``.
    """

    numerator: int = 0
    denominator: int = 1

    def __post_init__(self) -> None:
        if self.denominator == 0:
            raise ZeroDivisionError("phase denominator must be nonzero")
        q = Fraction(int(self.numerator), int(self.denominator))
        q -= math.floor(q)
        object.__setattr__(self, "numerator", q.numerator)
        object.__setattr__(self, "denominator", q.denominator)

    @classmethod
    def from_fraction(cls, q: Fraction) -> Phase:
        return cls(q.numerator, q.denominator)

    @classmethod
    def parse(cls, text: str) -> Phase:
        """Inverse of ``str``: accepts ``"num/den"`` or a bare integer."""
        try:
            if "/" in text:
                num, den = text.split("/")
                return cls(int(num), int(den))
            return cls(int(text), 1)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a phase: {text!r}") from exc

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other: Phase) -> Phase:
        return Phase.from_fraction(self.as_fraction() + other.as_fraction())

    def __sub__(self, other: Phase) -> Phase:
        return Phase.from_fraction(self.as_fraction() - other.as_fraction())

    def __neg__(self) -> Phase:
        return Phase(-self.numerator, self.denominator)

    def __mul__(self, k: int) -> Phase:
        return Phase(self.numerator * k, self.denominator)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.numerator == 0

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * self.numerator / self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"
