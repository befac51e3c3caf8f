"""Spaces of pairs ``(x, y)`` with ``a(x) <= y <= b(x)``.

Joins and meets are componentwise, then pushed back inside the band: the
second coordinate of a join is raised to ``a`` of the new first coordinate,
and that of a meet is lowered to ``b``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from ..computable import ComputableLattice, FiniteView, UnitCube, UnitInterval
from ..delta import DeltaPoint
from ..errors import NotMember, OrderError
from ..poset import Lattice, generated_lattice


class EdmondsonSpace:
    def __init__(self, base_l: ComputableLattice, base_m: ComputableLattice,
                 lower: Callable, upper: Callable, check_on: Iterable | None = None):
        self.base_l = base_l
        self.base_m = base_m
        self.lower = lower
        self.upper = upper
        if check_on is None and isinstance(base_l, FiniteView):
            check_on = list(base_l.elements())
        if check_on is not None:
            self.check_bounds(list(check_on))

    def check_bounds(self, elements: list):
        """Isotonicity of both bounds and ``lower <= upper`` on the given elements."""
        L, M = self.base_l, self.base_m
        for x in elements:
            if not M.leq(self.lower(x), self.upper(x)):
                raise OrderError(f"lower bound exceeds upper bound at {L.format_element(x)}")
            for y in elements:
                if L.leq(x, y) and not (M.leq(self.lower(x), self.lower(y)) and M.leq(self.upper(x), self.upper(y))):
                    raise OrderError(f"bounds are not isotone on {L.format_element(x)} <= {L.format_element(y)}")


def edmondson_violation(space: EdmondsonSpace, p) -> str | None:
    x, y = p
    L, M = space.base_l, space.base_m
    if not L.contains(x) or not M.contains(y):
        return "coordinates outside the base lattices"
    if not M.leq(space.lower(x), y):
        return f"a(x) = {M.format_element(space.lower(x))} <= y = {M.format_element(y)} fails"
    if not M.leq(y, space.upper(x)):
        return f"y = {M.format_element(y)} <= b(x) = {M.format_element(space.upper(x))} fails"
    return None


def edmondson_membership(space: EdmondsonSpace, p) -> bool:
    return edmondson_violation(space, p) is None


def _require(space, p):
    problem = edmondson_violation(space, p)
    if problem:
        raise NotMember(problem)


def edmondson_leq(space: EdmondsonSpace, p, q) -> bool:
    return space.base_l.leq(p[0], q[0]) and space.base_m.leq(p[1], q[1])


def edmondson_meet(space: EdmondsonSpace, p, q):
    _require(space, p)
    _require(space, q)
    L, M = space.base_l, space.base_m
    x = L.meet(p[0], q[0])
    return (x, M.meet(M.meet(p[1], q[1]), space.upper(x)))


def edmondson_join(space: EdmondsonSpace, p, q):
    _require(space, p)
    _require(space, q)
    L, M = space.base_l, space.base_m
    x = L.join(p[0], q[0])
    return (x, M.join(M.join(p[1], q[1]), space.lower(x)))


def edmondson_ops(space: EdmondsonSpace, p, q):
    return edmondson_meet(space, p, q), edmondson_join(space, p, q)


@dataclass(frozen=True)
class Pentagon:
    """Generators of a pentagon: ``low < high`` share a first coordinate; ``side`` is the third."""

    branch: str
    low: tuple
    high: tuple
    side: tuple


def edmondson_n5_witness(space: EdmondsonSpace, x, x2) -> Pentagon | None:
    L, M = space.base_l, space.base_m
    a, b = space.lower, space.upper

    def strictly_below(u, v):
        return M.leq(u, v) and u != v

    lower_gap = (M.join(a(x), a(x2)), M.meet(a(L.join(x, x2)), b(x)))
    if strictly_below(*lower_gap):
        return Pentagon("join", (x, lower_gap[0]), (x, lower_gap[1]), (x2, a(x2)))
    upper_gap = (M.join(b(L.meet(x, x2)), a(x)), M.meet(b(x), b(x2)))
    if strictly_below(*upper_gap):
        return Pentagon("meet", (x, upper_gap[0]), (x, upper_gap[1]), (x2, b(x2)))
    return None


def edmondson_generated_sublattice(space: EdmondsonSpace, points) -> tuple[Lattice, tuple]:
    return generated_lattice(points, lambda p, q: edmondson_meet(space, p, q),
                             lambda p, q: edmondson_join(space, p, q),
                             lambda p, q: edmondson_leq(space, p, q), sort_key=repr)


# instances

def classic_instance(seed=0, samples: int = 40) -> EdmondsonSpace:
    """Unit square over the unit interval with bounds ``x1 * x2 <= y <= x1``."""
    rng = random.Random(seed)
    square = UnitCube(2)
    checks = [tuple(Fraction(rng.randint(0, 8), 8) for _ in range(2)) for _ in range(samples)]
    return EdmondsonSpace(square, UnitInterval(), lambda x: x[0] * x[1], lambda x: x[0], check_on=checks)


def pentagon_instance(seed=0, samples: int = 40) -> EdmondsonSpace:
    """Unit square over the unit interval with bounds ``min(x1, x2) <= y <= x1``."""
    rng = random.Random(seed)
    checks = [tuple(Fraction(rng.randint(0, 8), 8) for _ in range(2)) for _ in range(samples)]
    return EdmondsonSpace(UnitCube(2), UnitInterval(), lambda x: min(x), lambda x: x[0], check_on=checks)


def _pentagon_labels(l: Lattice):
    """Join-irreducibles of a pentagon: lower chain element, side element, upper chain element."""
    irreducible = [x for x in range(l.n) if len(l.lower_covers[x]) == 1]
    if l.n != 5 or len(irreducible) != 3:
        raise OrderError("expected a pentagon")
    for low in irreducible:
        for high in irreducible:
            if l.lt(low, high):
                side = next(s for s in irreducible if s not in (low, high))
                return low, side, high
    raise OrderError("expected a pentagon")


def pentagon_point_to_pair(f: DeltaPoint):
    low, side, high = _pentagon_labels(f.host)
    return ((f.values[low], f.values[side]), f.values[high])


def pair_to_pentagon_values(l: Lattice, p) -> tuple[Fraction, ...]:
    """Values on ``l`` determined by the three join-irreducible coordinates (bottom 1, top the minimum)."""
    (x1, x2), y = p
    low, side, high = _pentagon_labels(l)
    values = [Fraction(0)] * l.n
    values[l.bottom] = Fraction(1)
    values[low], values[side], values[high] = x1, x2, y
    values[l.top] = min(x1, x2)
    return tuple(values)


# sampling on the unit-cube instances

def _between(rng: random.Random, lo: Fraction, hi: Fraction, denominator: int) -> Fraction:
    return lo + (hi - lo) * Fraction(rng.randint(0, denominator), denominator)


def sample_cube_point(space: EdmondsonSpace, rng: random.Random, denominator: int = 8) -> tuple:
    return tuple(Fraction(rng.randint(0, denominator), denominator) for _ in range(space.base_l.dim))


def sample_member(space: EdmondsonSpace, rng: random.Random, denominator: int = 8) -> tuple:
    """A member ``(x, y)`` of an instance over ``UnitCube`` and ``UnitInterval``."""
    x = sample_cube_point(space, rng, denominator)
    return (x, _between(rng, space.lower(x), space.upper(x), denominator))


def sample_upper_bound(space: EdmondsonSpace, p, q, rng: random.Random, denominator: int = 8) -> tuple:
    """A random member above both ``p`` and ``q``."""
    L = space.base_l
    x = L.join(L.join(p[0], q[0]), sample_cube_point(space, rng, denominator))
    lo = max(space.lower(x), p[1], q[1])
    return (x, _between(rng, lo, space.upper(x), denominator))


def sample_lower_bound(space: EdmondsonSpace, p, q, rng: random.Random, denominator: int = 8) -> tuple:
    """A random member below both ``p`` and ``q``."""
    L = space.base_l
    x = L.meet(L.meet(p[0], q[0]), sample_cube_point(space, rng, denominator))
    hi = min(space.upper(x), p[1], q[1])
    return (x, _between(rng, space.lower(x), hi, denominator))
