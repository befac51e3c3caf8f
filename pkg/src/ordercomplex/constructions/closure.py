"""Points given on the ground set of a closure system, and the retraction of the cube onto them."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..closure_system import ClosureSystem
from ..delta import DeltaPoint, Membership
from ..errors import NotInDeltaXcl
from ..poset import Lattice, bits, mask_of

ONE = Fraction(1)
ZERO = Fraction(0)


def _values(system: ClosureSystem, values: Sequence) -> tuple[Fraction, ...]:
    values = tuple(Fraction(v) for v in values)
    if len(values) != system.n:
        raise ValueError(f"expected {system.n} values, got {len(values)}")
    if any(not ZERO <= v <= ONE for v in values):
        raise ValueError("values must lie in [0,1]")
    return values


def thresholds(values: Sequence[Fraction]) -> list[Fraction]:
    """Attained positive values together with 1, largest first."""
    return sorted({v for v in values if v > 0} | {ONE}, reverse=True)


def level(values: Sequence[Fraction], t: Fraction) -> int:
    return mask_of(i for i, v in enumerate(values) if v >= t)


def xcl_membership(system: ClosureSystem, values: Sequence) -> Membership:
    """Every level set at a positive threshold must be closed."""
    values = _values(system, values)
    for t in thresholds(values):
        mask = level(values, t)
        if not system.is_closed(mask):
            return Membership(False, t, frozenset(bits(mask)))
    return Membership(True)


@lru_cache(maxsize=None)
def closed_set_lattice(system: ClosureSystem) -> Lattice:
    return system.lattice()


def closure_iso(system: ClosureSystem, values: Sequence) -> DeltaPoint:
    """Send ``f`` to the point whose value at a closed set is the minimum of ``f`` on it (1 on the empty set)."""
    values = _values(system, values)
    result = xcl_membership(system, values)
    if not result:
        raise NotInDeltaXcl(result.threshold, {system.ground[i] for i in result.level_set})
    l = closed_set_lattice(system)
    return DeltaPoint(l, [min((values[i] for i in bits(m)), default=ONE) for m in system.closed])


def closure_iso_inverse(system: ClosureSystem, point: DeltaPoint) -> tuple[Fraction, ...]:
    if point.host != closed_set_lattice(system):
        raise ValueError("point does not live over the closed-set lattice of this system")
    return tuple(point.values[system.closed_index(system.closure(1 << i))] for i in range(system.n))


def cube_retraction(system: ClosureSystem, values: Sequence) -> tuple[Fraction, ...]:
    """Replace each level set by its closure: ``x`` gets the largest threshold whose closed level contains it."""
    values = _values(system, values)
    out = [ZERO] * system.n
    for t in thresholds(values):
        for i in bits(system.closure(level(values, t))):
            if out[i] == ZERO:
                out[i] = t
    return tuple(out)
