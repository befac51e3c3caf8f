"""Lattices given by operations instead of tables.

Nothing here is ever enumerated; the unit interval and unit cube are exact
rational lattices, and any finite ``Lattice`` can be viewed the same way.
"""

from __future__ import annotations

from fractions import Fraction

from .formats import format_rational, parse_rational
from .poset import Lattice


class ComputableLattice:
    """Interface: ``leq``, ``meet``, ``join``, ``contains`` and element text round-trip."""

    bottom = None
    top = None

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def meet(self, x, y):
        raise NotImplementedError

    def join(self, x, y):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def parse_element(self, token: str):
        raise NotImplementedError

    def format_element(self, x) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash(type(self))


class UnitInterval(ComputableLattice):
    bottom = Fraction(0)
    top = Fraction(1)

    def leq(self, x, y):
        return x <= y

    def meet(self, x, y):
        return min(x, y)

    def join(self, x, y):
        return max(x, y)

    def contains(self, x):
        return isinstance(x, (Fraction, int)) and 0 <= x <= 1

    def parse_element(self, token):
        value = parse_rational(token)
        if not self.contains(value):
            raise ValueError(f"{token} is outside [0,1]")
        return value

    def format_element(self, x):
        return format_rational(x)

    def __repr__(self):
        return "UnitInterval()"


class UnitCube(ComputableLattice):
    """``[0,1]^dim`` with the componentwise order; elements are tuples of Fractions."""

    def __init__(self, dim: int):
        self.dim = dim
        self.bottom = (Fraction(0),) * dim
        self.top = (Fraction(1),) * dim

    def leq(self, x, y):
        return all(a <= b for a, b in zip(x, y))

    def meet(self, x, y):
        return tuple(min(a, b) for a, b in zip(x, y))

    def join(self, x, y):
        return tuple(max(a, b) for a, b in zip(x, y))

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.dim and all(0 <= a <= 1 for a in x)

    def parse_element(self, token):
        value = tuple(parse_rational(t) for t in token.split(","))
        if not self.contains(value):
            raise ValueError(f"{token} is not a point of the unit cube")
        return value

    def format_element(self, x):
        return ",".join(format_rational(a) for a in x)

    def __repr__(self):
        return f"UnitCube({self.dim})"


class FiniteView(ComputableLattice):
    """A table lattice seen through the computable interface; elements are indices."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        self.bottom = lattice.bottom
        self.top = lattice.top

    def leq(self, x, y):
        return self.lattice.leq(x, y)

    def meet(self, x, y):
        return self.lattice.meet(x, y)

    def join(self, x, y):
        return self.lattice.join(x, y)

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < self.lattice.n

    def parse_element(self, token):
        return self.lattice.index(token)

    def format_element(self, x):
        return self.lattice.names[x]

    def elements(self):
        return range(self.lattice.n)

    def __repr__(self):
        return f"FiniteView({self.lattice!r})"
