"""Canonical arithmetic in Z/NZ: residues, unit detection, inversion.

Everything downstream (matrices, enumeration, bijections) works over these
values, so residues are kept in a single canonical form: the least
nonnegative representative.
"""

from __future__ import annotations

import math


class NotAUnit(ArithmeticError):
    """Raised when a non-invertible residue is inverted or required."""


class Modulus:
    """A ring size N >= 2.

    ``two_adic`` is the exponent m when N == 2**m with m >= 2, else None.
    The 2-power rings are the main stage; general N is needed for CRT work.
    """

    __slots__ = ("n", "two_adic")

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"modulus must be >= 2, got {n}")
        self.n = n
        m = n.bit_length() - 1
        self.two_adic = m if (n == 1 << m and m >= 2) else None

    def residue(self, value: int) -> "Residue":
        return Residue(value, self)

    def __eq__(self, other):
        return isinstance(other, Modulus) and self.n == other.n

    def __hash__(self):
        return hash(("Modulus", self.n))

    def __repr__(self):
        return f"Modulus({self.n})"


class Residue:
    """An element of Z/NZ stored as its least nonnegative representative."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus: Modulus):
        self.value = int(value) % modulus.n
        self.modulus = modulus

    @property
    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus.n) == 1

    def inverse(self) -> "Residue":
        if not self.is_unit:
            raise NotAUnit(f"{self.value} is not invertible mod {self.modulus.n}")
        return Residue(pow(self.value, -1, self.modulus.n), self.modulus)

    def _other_value(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus.n != self.modulus.n:
                raise ValueError("mixed moduli in residue arithmetic")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._other_value(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._other_value(other), self.modulus)

    def __rsub__(self, other):
        return Residue(self._other_value(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._other_value(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __eq__(self, other):
        return (
            isinstance(other, Residue)
            and self.value == other.value
            and self.modulus.n == other.modulus.n
        )

    def __hash__(self):
        return hash((self.value, self.modulus.n))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value}, mod={self.modulus.n})"


def units_of(modulus: Modulus) -> list[Residue]:
    """All units of Z/NZ in ascending canonical order."""
    n = modulus.n
    return [Residue(v, modulus) for v in range(n) if math.gcd(v, n) == 1]


def nonunits_of(modulus: Modulus) -> list[Residue]:
    """All non-invertible residues in ascending canonical order."""
    n = modulus.n
    return [Residue(v, modulus) for v in range(n) if math.gcd(v, n) != 1]
