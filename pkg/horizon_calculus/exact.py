# horizon_calculus/exact.py
"""
Exact rational coefficients carrying a power of the mass.

An ExactCoefficient represents (numerator/denominator) * M^mass_power.
Arithmetic is exact; the mass stays symbolic until evaluate() is called.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from core.errors import UsageError


@dataclass(frozen=True, order=True)
class ExactCoefficient:
    """
    Rational multiple of an integer power of M.

    Zero is normalised to mass_power 0 so that it is dimensionless and
    can be added to anything.
    """

    value: Fraction
    mass_power: int = 0

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        if self.value == 0 and self.mass_power != 0:
            object.__setattr__(self, "mass_power", 0)

    @classmethod
    def zero(cls) -> ExactCoefficient:
        return cls(Fraction(0), 0)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def _coerce(self, other) -> ExactCoefficient:
        if isinstance(other, ExactCoefficient):
            return other
        if isinstance(other, (int, Rational)):
            return ExactCoefficient(Fraction(other), 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.mass_power != other.mass_power:
            raise UsageError(
                f"cannot add M^{self.mass_power} and M^{other.mass_power} terms"
            )
        return ExactCoefficient(self.value + other.value, self.mass_power)

    __radd__ = __add__

    def __neg__(self) -> ExactCoefficient:
        return ExactCoefficient(-self.value, self.mass_power)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExactCoefficient(self.value * other.value, self.mass_power + other.mass_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("division by an exactly zero coefficient")
        return ExactCoefficient(self.value / other.value, self.mass_power - other.mass_power)

    def evaluate(self, mass: float = 1.0) -> float:
        """Numeric value for a given mass."""
        return float(self.value) * mass**self.mass_power

    def to_dict(self) -> dict:
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "mass_power": self.mass_power,
        }

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        p = self.mass_power
        if p == 0:
            return str(self.value)
        unit = "M" if abs(p) == 1 else f"M^{abs(p)}"
        if p > 0:
            if self.value == 1:
                return unit
            if self.value == -1:
                return f"-{unit}"
            return f"{self.value}*{unit}"
        num, den = self.numerator, self.denominator
        denominator = unit if den == 1 else f"({den}*{unit})"
        return f"{num}/{denominator}"
