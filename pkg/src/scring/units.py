"""Minimal SI dimension tracking used to audit the estimate formulas."""

from dataclasses import dataclass

_BASE = ("kg", "m", "s", "K", "A")


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Quantity:
    value: float
    dim: tuple = (0, 0, 0, 0, 0)

    def __mul__(self, other):
        if not isinstance(other, Quantity):
            return Quantity(self.value * other, self.dim)
        return Quantity(self.value * other.value, tuple(a + b for a, b in zip(self.dim, other.dim)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Quantity):
            return Quantity(self.value / other, self.dim)
        return Quantity(self.value / other.value, tuple(a - b for a, b in zip(self.dim, other.dim)))

    def __rtruediv__(self, other):
        return Quantity(other / self.value, tuple(-a for a in self.dim))

    def __pow__(self, p):
        return Quantity(self.value**p, tuple(a * p for a in self.dim))

    def __add__(self, other):
        if not isinstance(other, Quantity) or other.dim != self.dim:
            raise DimensionError(f"cannot add {unit_name(self.dim)} and {unit_name(getattr(other, 'dim', ()))}")
        return Quantity(self.value + other.value, self.dim)

    def __sub__(self, other):
        return self + other * -1

    def to(self, unit):
        """Return the float value after checking the dimension matches ``unit``."""
        want = UNITS[unit]
        if want != self.dim:
            raise DimensionError(f"expected {unit}, got {unit_name(self.dim)}")
        return self.value


def unit_name(dim):
    parts = []
    for sym, p in zip(_BASE, dim):
        if p == 1:
            parts.append(sym)
        elif p:
            parts.append(f"{sym}^{p}")
    return " ".join(parts) or "1"


UNITS = {
    "1": (0, 0, 0, 0, 0),
    "kg": (1, 0, 0, 0, 0),
    "m": (0, 1, 0, 0, 0),
    "s": (0, 0, 1, 0, 0),
    "K": (0, 0, 0, 1, 0),
    "m/s": (0, 1, -1, 0, 0),
    "m^2/s": (0, 2, -1, 0, 0),
    "kg/m^3": (1, -3, 0, 0, 0),
    "J": (1, 2, -2, 0, 0),
    "J s": (1, 2, -1, 0, 0),
    "J/K": (1, 2, -2, -1, 0),
    "s/m^5": (0, -5, 1, 0, 0),
    "K m^5": (0, 5, 0, 1, 0),
}


def q(value, unit):
    return Quantity(float(value), UNITS[unit])
