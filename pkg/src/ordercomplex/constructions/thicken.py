"""Thickenings of a closure-system complex.

A map ``f: X -> [0,1]`` belongs to the thickening with constant ``c`` when
every closed hull of a level set ``f_t`` lies in the lower level set
``f_{t-c}``. Equivalently ``f(z) >= min f(Y) - c`` whenever ``z`` is in the
closure of ``Y``; the per-pair variant lets ``c`` depend on ``(Y, z)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..closure_system import ClosureSystem
from ..errors import NoJoin, NotMember, SizeLimitExceeded
from ..poset import Lattice, bits, generated_lattice
from .closure import level, thresholds

ONE = Fraction(1)
ZERO = Fraction(0)


class ThickenedSpace:
    def __init__(self, system: ClosureSystem, c, pairwise: Mapping[tuple[int, int], Fraction] | None = None,
                 family: Iterable[int] | None = None):
        c = Fraction(c)
        if not 0 < c < 1:
            raise ValueError(f"thickening constant must lie strictly between 0 and 1, got {c}")
        self.system = system
        self.c = c
        self.pairwise = {}
        for (ymask, z), value in (pairwise or {}).items():
            value = Fraction(value)
            if not 0 <= value < 1:
                raise ValueError(f"pairwise constant {value} outside [0,1)")
            if not (system.closure(ymask) >> z) & 1:
                raise ValueError(f"{system.ground[z]} is not in the closure of {system.format_set(ymask)}")
            self.pairwise[(ymask, z)] = value
        self.family = None if family is None else tuple(sorted(set(family)))

    @classmethod
    def from_names(cls, system, c, pairwise=()):
        table = {(system.mask(ys), system.index(z)): value for ys, z, value in pairwise}
        return cls(system, c, table)

    def constant(self, ymask: int, z: int) -> Fraction:
        return self.pairwise.get((ymask, z), self.c)

    @property
    def constants(self) -> set[Fraction]:
        return {self.c} | set(self.pairwise.values())

    def __repr__(self):
        extra = f", {len(self.pairwise)} pairwise" if self.pairwise else ""
        return f"ThickenedSpace({self.system!r}, c={self.c}{extra})"


@dataclass(frozen=True)
class ThickMembership:
    ok: bool
    threshold: Fraction | None = None
    element: int | None = None

    def __bool__(self):
        return self.ok


def _values(space, values) -> tuple[Fraction, ...]:
    values = tuple(Fraction(v) for v in values)
    if len(values) != space.system.n or any(not ZERO <= v <= ONE for v in values):
        raise ValueError("need one value in [0,1] per ground element")
    return values


def _subset_requirements(space: ThickenedSpace, values) -> dict[int, Fraction]:
    """For each point ``z``, the largest lower bound ``min f(Y) - c(Y,z)`` over ``z`` in cl(Y)."""
    system = space.system
    need = {}
    for ymask in range(system.full + 1):
        floor = min((values[i] for i in bits(ymask)), default=ONE)
        for z in bits(system.closure(ymask)):
            bound = floor - space.constant(ymask, z)
            if bound > need.get(z, ZERO):
                need[z] = bound
    return need


def thick_membership(space: ThickenedSpace, values: Sequence) -> ThickMembership:
    values = _values(space, values)
    system = space.system
    if space.family is not None:
        for t in thresholds(values):
            if t <= space.c:
                continue
            upper, lower = level(values, t), level(values, t - space.c)
            if not any(upper & ~a == 0 and a & ~lower == 0 for a in space.family):
                return ThickMembership(False, t, None)
        return ThickMembership(True)
    if space.pairwise:
        worst = None
        for ymask in range(system.full + 1):
            floor = min((values[i] for i in bits(ymask)), default=ONE)
            for z in bits(system.closure(ymask)):
                if values[z] < floor - space.constant(ymask, z):
                    candidate = (-floor, z)
                    worst = candidate if worst is None else min(worst, candidate)
        if worst is not None:
            return ThickMembership(False, -worst[0], worst[1])
        return ThickMembership(True)
    for t in thresholds(values):
        if t <= space.c:
            continue
        missing = system.closure(level(values, t)) & ~level(values, t - space.c)
        if missing:
            return ThickMembership(False, t, next(bits(missing)))
    return ThickMembership(True)


def _require_member(space, values, what):
    result = thick_membership(space, values)
    if not result:
        where = "" if result.element is None else f" at {space.system.ground[result.element]}"
        raise NotMember(f"{what} fails the thickening condition at t={result.threshold}{where}")


def thick_meet(space: ThickenedSpace, f, g) -> tuple[Fraction, ...]:
    f, g = _values(space, f), _values(space, g)
    _require_member(space, f, "first argument")
    _require_member(space, g, "second argument")
    out = tuple(min(a, b) for a, b in zip(f, g))
    _require_member(space, out, "pointwise minimum")
    return out


def thick_join(space: ThickenedSpace, f, g) -> tuple[Fraction, ...]:
    """Least upper bound by repair: raise violated coordinates until the condition holds.

    Each raise is forced in every upper bound, so the fixpoint is the least one.
    """
    f, g = _values(space, f), _values(space, g)
    _require_member(space, f, "first argument")
    _require_member(space, g, "second argument")
    if space.family is not None:
        out = thick_join_bruteforce(space, f, g)
        if out is None:
            raise NoJoin("no least upper bound on the value grid")
        return out
    h = [max(a, b) for a, b in zip(f, g)]
    while True:
        if space.pairwise:
            need = _subset_requirements(space, h)
            raised = {z: v for z, v in need.items() if h[z] < v}
        else:
            raised = {}
            for t in thresholds(h):
                if t <= space.c:
                    break
                for z in bits(space.system.closure(level(h, t)) & ~level(h, t - space.c)):
                    raised.setdefault(z, t - space.c)
        if not raised:
            return tuple(h)
        for z, v in raised.items():
            h[z] = max(h[z], v)


def thick_ops(space: ThickenedSpace, f, g):
    return thick_meet(space, f, g), thick_join(space, f, g)


# brute force on the finite value grid

def value_grid(space: ThickenedSpace, values: Iterable[Fraction], limit: int = 64) -> tuple[Fraction, ...]:
    """Values reachable from ``values`` (and 0, 1) by subtracting thickening constants, kept in [0,1]."""
    grid = set(values) | {ZERO, ONE}
    frontier = list(grid)
    while frontier:
        fresh = []
        for v in frontier:
            for c in space.constants:
                w = v - c
                if w >= 0 and w not in grid:
                    grid.add(w)
                    fresh.append(w)
        if len(grid) > limit:
            raise SizeLimitExceeded(f"value grid exceeds {limit} values")
        frontier = fresh
    return tuple(sorted(grid))


def thick_join_bruteforce(space: ThickenedSpace, f, g) -> tuple[Fraction, ...] | None:
    """Pointwise minimum of all grid-valued members above both inputs, if it is itself a member."""
    f, g = _values(space, f), _values(space, g)
    grid = value_grid(space, set(f) | set(g))
    bounds = [v for v in itertools.product(grid, repeat=space.system.n)
              if all(a >= b and a >= c for a, b, c in zip(v, f, g)) and thick_membership(space, v)]
    if not bounds:
        return None
    out = tuple(min(column) for column in zip(*bounds))
    return out if thick_membership(space, out) else None


def sample_member(space: ThickenedSpace, rng: random.Random, denominator: int = 4, tries: int = 10_000):
    """Rejection sample from the grid ``{k / denominator}``."""
    for _ in range(tries):
        values = tuple(Fraction(rng.randint(0, denominator), denominator) for _ in range(space.system.n))
        if thick_membership(space, values):
            return values
    raise RuntimeError("no member found; the grid may be too coarse for this space")


def _points_leq(f, g) -> bool:
    return all(a <= b for a, b in zip(f, g))


def thick_generated_sublattice(space: ThickenedSpace, points) -> tuple[Lattice, tuple]:
    return generated_lattice(points, lambda f, g: thick_meet(space, f, g), lambda f, g: thick_join(space, f, g),
                             _points_leq, sort_key=lambda f: (sum(f), f))


# monotone cells

def cell_order(values: Sequence[Fraction]) -> tuple[int, ...]:
    """A permutation ``e`` with ``f(e(0)) >= f(e(1)) >= ...`` (ties broken by index)."""
    return tuple(sorted(range(len(values)), key=lambda i: (-values[i], i)))


def in_cell(values: Sequence[Fraction], e: Sequence[int]) -> bool:
    return all(values[a] >= values[b] for a, b in zip(e, e[1:]))
