"""Points of the order complex and their lattice operations.

A point is an exact map ``f: P -> [0,1]`` all of whose upper level sets
``{x : f(x) >= t}`` (for ``0 < t <= 1``) are principal ideals. Level sets only
change at attained values, so every check below walks the finite grid of
attained values.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    HostMismatch,
    InvalidChainForm,
    NoJoin,
    NotComparable,
    NotInDelta,
    NotMeetIrredundant,
    OrderError,
)
from .poset import Lattice, Poset, bits, generated_lattice, mask_of

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class Membership:
    ok: bool
    threshold: Fraction | None = None
    level_set: frozenset[int] = frozenset()

    def __bool__(self):
        return self.ok


def _as_values(host: Poset, values) -> tuple[Fraction, ...]:
    values = tuple(Fraction(v) for v in values)
    if len(values) != host.n:
        raise ValueError(f"expected {host.n} values, got {len(values)}")
    for v in values:
        if not ZERO <= v <= ONE:
            raise ValueError(f"value {v} outside [0,1]")
    return values


def delta_membership(p: Poset, values: Sequence) -> Membership:
    """Whether ``values`` is a point over ``p``; on failure, the first bad threshold (largest first)."""
    values = _as_values(p, values)
    for t in sorted({v for v in values if v > 0} | {ONE}, reverse=True):
        mask = mask_of(i for i, v in enumerate(values) if v >= t)
        if p.principal_generator(mask) is None:
            return Membership(False, t, frozenset(bits(mask)))
    return Membership(True)


class DeltaPoint:
    __slots__ = ("host", "values", "_hash")

    def __init__(self, host: Poset, values: Iterable, check: bool = True):
        values = _as_values(host, values)
        if check:
            result = delta_membership(host, values)
            if not result:
                raise NotInDelta(result.threshold, {host.names[i] for i in result.level_set})
        self.host = host
        self.values = values
        self._hash = None

    @classmethod
    def _trusted(cls, host: Poset, values: tuple[Fraction, ...]) -> DeltaPoint:
        obj = object.__new__(cls)
        obj.host, obj.values, obj._hash = host, values, None
        return obj

    @classmethod
    def vertex(cls, host: Poset, x: int) -> DeltaPoint:
        """Characteristic function of the principal ideal of ``x``."""
        down = host.down_mask(x)
        return cls._trusted(host, tuple(ONE if (down >> i) & 1 else ZERO for i in range(host.n)))

    @classmethod
    def from_names(cls, host: Poset, mapping: dict, default=ZERO) -> DeltaPoint:
        for name in mapping:
            host.index(name)
        return cls(host, [mapping.get(name, default) for name in host.names])

    def value(self, name: str) -> Fraction:
        return self.values[self.host.index(name)]

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __eq__(self, other):
        if not isinstance(other, DeltaPoint):
            return NotImplemented
        return self.values == other.values and self.host == other.host

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.host, self.values))
        return self._hash

    def __le__(self, other: DeltaPoint) -> bool:
        _common_host(self, other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __lt__(self, other: DeltaPoint) -> bool:
        return self != other and self <= other

    def __and__(self, other: DeltaPoint) -> DeltaPoint:
        return delta_meet(self, other)

    def __or__(self, other: DeltaPoint) -> DeltaPoint:
        return delta_join(self, other)

    def __repr__(self):
        body = " ".join(f"{name}={v}" for name, v in zip(self.host.names, self.values))
        return f"DeltaPoint({body})"

    def levels(self) -> list[Fraction]:
        """Distinct positive values, largest first (always starts with 1)."""
        return sorted({v for v in self.values if v > 0}, reverse=True)

    def level_mask(self, t: Fraction) -> int:
        return mask_of(i for i, v in enumerate(self.values) if v >= t)


def _common_host(f: DeltaPoint, g: DeltaPoint) -> Poset:
    if f.host is not g.host and f.host != g.host:
        raise HostMismatch("points live over different posets")
    return f.host


def level_generator(f: DeltaPoint, t) -> int:
    """The element generating the level set of ``f`` at ``t``."""
    t = Fraction(t)
    if not ZERO < t <= ONE:
        raise ValueError(f"threshold {t} outside (0,1]")
    gen = f.host.principal_generator(f.level_mask(t))
    if gen is None:
        raise NotInDelta(t, {f.host.names[i] for i in bits(f.level_mask(t))})
    return gen


@dataclass(frozen=True)
class ChainForm:
    """``f`` as a convex combination of principal-ideal indicators over a chain."""

    host: Poset
    terms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        terms = tuple((x, Fraction(c)) for x, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise InvalidChainForm("a chain form needs at least one term")
        for (x, _), (y, _) in zip(terms, terms[1:]):
            if not self.host.lt(x, y):
                raise InvalidChainForm(f"{self.host.names[x]} < {self.host.names[y]} fails")
        if any(c <= 0 for _, c in terms):
            raise InvalidChainForm("coefficients must be positive")
        if sum(c for _, c in terms) != 1:
            raise InvalidChainForm("coefficients must sum to 1")

    def named_terms(self) -> list[tuple[str, Fraction]]:
        return [(self.host.names[x], c) for x, c in self.terms]


def chain_form(f: DeltaPoint) -> ChainForm:
    levels = f.levels()
    gens = [level_generator(f, t) for t in levels]
    coeffs = [t - nxt for t, nxt in zip(levels, levels[1:] + [ZERO])]
    return ChainForm(f.host, tuple(zip(gens, coeffs)))


def from_chain_form(cf: ChainForm) -> DeltaPoint:
    host = cf.host
    values = [sum((c for g, c in cf.terms if host.leq(x, g)), ZERO) for x in range(host.n)]
    return DeltaPoint(host, values)


def delta_meet(f: DeltaPoint, g: DeltaPoint) -> DeltaPoint:
    host = _common_host(f, g)
    values = tuple(min(a, b) for a, b in zip(f.values, g.values))
    if isinstance(host, Lattice):
        return DeltaPoint._trusted(host, values)
    if not delta_membership(host, values):
        raise NoJoin("the host lacks a meet needed by these points")
    return DeltaPoint._trusted(host, values)


def delta_join(f: DeltaPoint, g: DeltaPoint) -> DeltaPoint:
    """Join via generators: on each grid value ``t`` the level set is ``down(h_t(f) v h_t(g))``."""
    host = _common_host(f, g)
    grid = sorted(set(f.levels()) | set(g.levels()), reverse=True)
    values = [ZERO] * host.n
    for t in grid:
        a, b = level_generator(f, t), level_generator(g, t)
        top = host.join(a, b) if isinstance(host, Lattice) else host.lub(a, b)
        if top is None:
            raise NoJoin(f"{host.names[a]} and {host.names[b]} have no join")
        for x in bits(host.down_mask(top)):
            if values[x] == ZERO:
                values[x] = t
    return DeltaPoint._trusted(host, tuple(values))


# independent join formulas, kept for cross-checking

def join_by_majorization(f: DeltaPoint, g: DeltaPoint) -> tuple[Fraction, ...]:
    """Largest ``t`` with ``x <= y v z`` for some ``f(y) >= t`` and ``g(z) >= t``."""
    host = _common_host(f, g)
    out = []
    for x in range(host.n):
        best = ZERO
        for y, z in itertools.product(range(host.n), repeat=2):
            if host.leq(x, host.join(y, z)):
                best = max(best, min(f.values[y], g.values[z]))
        out.append(best)
    return tuple(out)


@lru_cache(maxsize=64)
def grid_points(host: Poset, grid: tuple[Fraction, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Every point over ``host`` whose values lie in ``grid``."""
    return tuple(v for v in itertools.product(grid, repeat=host.n) if delta_membership(host, v))


def join_by_upper_bounds(f: DeltaPoint, g: DeltaPoint, grid: Iterable | None = None) -> tuple[Fraction, ...]:
    """Pointwise minimum over every grid-valued point lying above both inputs."""
    host = _common_host(f, g)
    if grid is None:
        grid = set(f.values) | set(g.values)
    grid = tuple(sorted(set(grid) | {ZERO, ONE}))
    bounds = [v for v in grid_points(host, grid)
              if all(a >= b and a >= c for a, b, c in zip(v, f.values, g.values))]
    return tuple(min(column) for column in zip(*bounds))


def contract_homotopy(f: DeltaPoint, z: int, s) -> DeltaPoint:
    """``(1 - s) f + s down(z)`` for ``z`` comparable to everything."""
    host = f.host
    if host.down_mask(z) | host.up_mask(z) != host.full_mask:
        raise NotComparable(f"{host.names[z]} is not comparable to every element")
    s = Fraction(s)
    if not ZERO <= s <= ONE:
        raise ValueError(f"parameter {s} outside [0,1]")
    vertex = DeltaPoint.vertex(host, z)
    return DeltaPoint(host, [(1 - s) * a + s * b for a, b in zip(f.values, vertex.values)])


# sampling

def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def point_on_chain(host: Poset, chain: Sequence[int], rng: random.Random, max_denominator: int) -> DeltaPoint:
    """Random point with positive weights on every element of ``chain``."""
    chain = list(chain)
    if len(chain) > max_denominator:
        keep = sorted(rng.sample(range(len(chain)), max_denominator))
        chain = [chain[k] for k in keep]
    denominator = rng.randint(len(chain), max_denominator)
    cuts = sorted(rng.sample(range(1, denominator), len(chain) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    # chain is listed bottom-up; the weight on an element counts for everything below it
    return from_chain_form(ChainForm(host, tuple((x, Fraction(w, denominator)) for x, w in zip(chain, parts))))


def sample_point(p: Poset, seed, max_denominator: int = 8, faces: bool = False) -> DeltaPoint:
    """Deterministic random point: a uniform maximal chain, then positive weights.

    With ``faces=True`` a random nonempty subchain is used instead, so lower
    dimensional faces (and vertices) are reached too.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be at least 1")
    rng = _rng(seed)
    chain = rng.choice(p.maximal_chains)
    if faces:
        sub = [x for x in chain if rng.random() < 0.5]
        chain = sub or [rng.choice(chain)]
    return point_on_chain(p, chain, rng, max_denominator)


def vertices(l: Poset) -> list[DeltaPoint]:
    return [DeltaPoint.vertex(l, x) for x in range(l.n)]


def _point_key(f: DeltaPoint):
    return (sum(f.values), f.values)


def generated_sublattice(points: Iterable[DeltaPoint]) -> tuple[Lattice, tuple[DeltaPoint, ...]]:
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    for f in points[1:]:
        _common_host(points[0], f)
    return generated_lattice(points, delta_meet, delta_join, lambda f, g: f <= g, sort_key=_point_key)


# breadth machinery

def breadth_family(l: Lattice, chain: Sequence[int], coefficients: Sequence) -> list[DeltaPoint]:
    """Points ``f_i`` equal to 1 on ``down(chain[i-1])`` and ``coefficients[i-1]`` elsewhere."""
    chain = list(chain)
    coefficients = [Fraction(r) for r in coefficients]
    if not chain or chain[0] != l.bottom:
        raise InvalidChainForm("chain must start at the least element")
    if any(not l.lt(a, b) for a, b in zip(chain, chain[1:])):
        raise InvalidChainForm("chain must be strictly increasing")
    if len(coefficients) != len(chain) - 1:
        raise InvalidChainForm("need one coefficient per chain step")
    bounds = [ONE] + coefficients
    if any(not a > b for a, b in zip(bounds, bounds[1:])) or (coefficients and coefficients[-1] < 0):
        raise InvalidChainForm("coefficients must satisfy 1 > r_1 > ... > r_n >= 0")
    out = []
    for x, r in zip(chain, coefficients):
        down = l.down_mask(x)
        out.append(DeltaPoint(l, [ONE if (down >> y) & 1 else r for y in range(l.n)]))
    return out


def _meet_values(points: Sequence[DeltaPoint], n: int) -> tuple[Fraction, ...]:
    return tuple(min((f.values[x] for f in points), default=ONE) for x in range(n))


def redundant_index(points: Sequence[DeltaPoint]) -> int | None:
    """Least index whose removal leaves the meet unchanged, or None if the family is irredundant.

    The empty meet is the constant 1; a repeated point is redundant.
    """
    points = list(points)
    if not points:
        return None
    n = points[0].host.n
    for f in points[1:]:
        _common_host(points[0], f)
    whole = _meet_values(points, n)
    for k in range(len(points)):
        if _meet_values(points[:k] + points[k + 1:], n) == whole:
            return k
    return None


def is_meet_irredundant(points: Sequence[DeltaPoint]) -> bool:
    return redundant_index(points) is None


def extract_chain(points: Sequence[DeltaPoint]) -> tuple[int, ...]:
    """Chain ``0 < x_1 < x_1 v x_2 < ...`` of length ``len(points)`` from an irredundant family."""
    points = list(points)
    k = redundant_index(points)
    if k is not None:
        raise NotMeetIrredundant(k)
    if not points:
        raise ValueError("need at least one point")
    l = points[0].host
    picks = []
    for i, f in enumerate(points):
        others = points[:i] + points[i + 1:]
        bound = _meet_values(others, l.n)
        x = next(x for x in range(l.n) if f.values[x] < bound[x])
        picks.append((f.values[x], i, x))
    picks.sort(key=lambda item: (-item[0], item[1]))
    chain = [l.bottom]
    for _, _, x in picks:
        chain.append(l.join(chain[-1], x))
    if any(not l.lt(a, b) for a, b in zip(chain, chain[1:])):
        raise OrderError(f"extracted sequence is not strictly increasing: {chain}")
    return tuple(chain)
