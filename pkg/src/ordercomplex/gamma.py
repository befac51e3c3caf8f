"""Step functions ``[0,1] -> L`` with a cost-weighted disagreement metric.

Functions are stored in a right-continuous canonical form: half-open pieces
``[t_i, t_{i+1})`` (the last one closed) with no two neighbours equal. Two
functions that differ at finitely many points get the same representation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .computable import ComputableLattice
from .errors import HostMismatch, OrderError

ZERO = Fraction(0)
ONE = Fraction(1)


class MOmega(ComputableLattice):
    """Bottom ``"0"``, top ``"1"`` and pairwise incomparable atoms ``"x0"``, ``"x1"``, ..."""

    bottom = "0"
    top = "1"

    @staticmethod
    def atom(i: int) -> str:
        return f"x{i}"

    @staticmethod
    def atom_index(x: str) -> int | None:
        return int(x[1:]) if x.startswith("x") else None

    def contains(self, x):
        return isinstance(x, str) and (x in ("0", "1") or (x[:1] == "x" and x[1:].isdigit()
                                                          and str(int(x[1:])) == x[1:]))

    def leq(self, x, y):
        return x == y or x == "0" or y == "1"

    def meet(self, x, y):
        if self.leq(x, y):
            return x
        if self.leq(y, x):
            return y
        return "0"

    def join(self, x, y):
        if self.leq(x, y):
            return y
        if self.leq(y, x):
            return x
        return "1"

    def parse_element(self, token):
        if not self.contains(token):
            raise ValueError(f"{token!r} is not an element (use 0, 1 or x<i>)")
        return token

    def format_element(self, x):
        return x

    def cost(self, x) -> Fraction:
        i = self.atom_index(x)
        return ONE if i is None else Fraction(i + 1)

    def element_with_cost_at_least(self, bound) -> str:
        return self.atom(max(0, math.ceil(bound) - 1))

    def __repr__(self):
        return "MOmega()"


class CostFunction:
    """Cost ``c: L -> [1, oo)``; ``witness`` finds an element of cost at least a bound, when costs are unbounded."""

    def __init__(self, host: ComputableLattice, cost: Callable, witness: Callable | None = None):
        self.host = host
        self._cost = cost
        self._witness = witness

    def __call__(self, x) -> Fraction:
        return Fraction(self._cost(x))

    def subadditivity_violation(self, elements: Iterable):
        elements = list(elements)
        for x in elements:
            if self(x) < 1:
                return ("below one", x, x)
            for y in elements:
                for op in ("join", "meet"):
                    z = getattr(self.host, op)(x, y)
                    if self(z) > self(x) + self(y):
                        return (op, x, y)
        return None

    def element_at_least(self, bound, avoid: Iterable = ()):
        if self._witness is None:
            raise OrderError("this cost function is bounded or has no witness search")
        avoid = set(avoid)
        x = self._witness(bound)
        while x in avoid:
            x = self._witness(self(x) + 1)
        return x


def momega_cost(host: MOmega | None = None) -> CostFunction:
    host = host or MOmega()
    return CostFunction(host, host.cost, host.element_with_cost_at_least)


class StepFunction:
    __slots__ = ("host", "breakpoints", "values")

    def __init__(self, host: ComputableLattice, breakpoints: Sequence, values: Sequence):
        breakpoints = [Fraction(t) for t in breakpoints]
        values = list(values)
        if len(breakpoints) != len(values) + 1 or not values:
            raise ValueError("need one more breakpoint than values")
        if breakpoints[0] != 0 or breakpoints[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(a >= b for a, b in zip(breakpoints, breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        for v in values:
            if not host.contains(v):
                raise ValueError(f"{v!r} is not an element of {host!r}")
        keep_t, keep_v = [breakpoints[0]], [values[0]]
        for t, v in zip(breakpoints[1:-1], values[1:]):
            if v != keep_v[-1]:
                keep_t.append(t)
                keep_v.append(v)
        keep_t.append(ONE)
        self.host = host
        self.breakpoints = tuple(keep_t)
        self.values = tuple(keep_v)

    @classmethod
    def constant(cls, host, value) -> StepFunction:
        return cls(host, [0, 1], [value])

    @classmethod
    def from_pieces(cls, host, pieces: Iterable[tuple]) -> StepFunction:
        """Pieces ``(start, end, value)`` tiling [0,1] in order."""
        pieces = list(pieces)
        for (_, end, _), (start, _, _) in zip(pieces, pieces[1:]):
            if end != start:
                raise ValueError("pieces must be contiguous")
        return cls(host, [p[0] for p in pieces] + [pieces[-1][1]], [p[2] for p in pieces])

    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.breakpoints, self.breakpoints[1:]))

    def pieces(self) -> list[tuple[Fraction, Fraction, object]]:
        return [(a, b, v) for (a, b), v in zip(self.intervals(), self.values)]

    def value_at(self, t) -> object:
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValueError(f"{t} is outside [0,1]")
        for (a, b), v in zip(self.intervals(), self.values):
            if a <= t < b:
                return v
        return self.values[-1]

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (self.breakpoints, self.values) == (other.breakpoints, other.values) and self.host == other.host

    def __hash__(self):
        return hash((self.breakpoints, self.values))

    def __repr__(self):
        body = ", ".join(f"[{a},{b}):{v}" for a, b, v in self.pieces())
        return f"StepFunction({body})"


def _common(f: StepFunction, g: StepFunction) -> ComputableLattice:
    if f.host != g.host:
        raise HostMismatch("step functions take values in different lattices")
    return f.host


def refine(f: StepFunction, g: StepFunction):
    """Common subdivision: ``(start, end, f value, g value)`` per piece."""
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    return [(a, b, f.value_at(a), g.value_at(a)) for a, b in zip(cuts, cuts[1:])]


def _pointwise(f, g, op) -> StepFunction:
    host = _common(f, g)
    pieces = refine(f, g)
    return StepFunction(host, [p[0] for p in pieces] + [ONE], [op(u, v) for _, _, u, v in pieces])


def gamma_meet(f: StepFunction, g: StepFunction) -> StepFunction:
    return _pointwise(f, g, f.host.meet)


def gamma_join(f: StepFunction, g: StepFunction) -> StepFunction:
    return _pointwise(f, g, f.host.join)


def gamma_ops(f: StepFunction, g: StepFunction) -> tuple[StepFunction, StepFunction]:
    return gamma_meet(f, g), gamma_join(f, g)


def gamma_leq(f: StepFunction, g: StepFunction) -> bool:
    host = _common(f, g)
    return all(host.leq(u, v) for _, _, u, v in refine(f, g))


def gamma_metric(f: StepFunction, g: StepFunction, cost: CostFunction) -> Fraction:
    """Integral of ``c(f(t)) + c(g(t))`` over the set where the two differ."""
    _common(f, g)
    return sum(((b - a) * (cost(u) + cost(v)) for a, b, u, v in refine(f, g) if u != v), ZERO)


def _splice(left: StepFunction, right: StepFunction, s: Fraction) -> StepFunction:
    """``left`` on [0, s), ``right`` on [s, 1]."""
    pieces = [(max(a, ZERO), min(b, s), v) for a, b, v in left.pieces() if a < s]
    pieces += [(max(a, s), b, v) for a, b, v in right.pieces() if b > s]
    return StepFunction.from_pieces(left.host, pieces)


def gamma_homotopy(f: StepFunction, g: StepFunction, s) -> StepFunction:
    """Agrees with ``g`` on [0, s) and with ``f`` on [s, 1]."""
    _common(f, g)
    s = Fraction(s)
    if not 0 <= s <= 1:
        raise ValueError(f"parameter {s} outside [0,1]")
    if s == 0:
        return f
    if s == 1:
        return g
    return _splice(g, f, s)


def gamma_eventual_value(f: StepFunction, s):
    """Value on the piece immediately to the right of ``s``."""
    s = Fraction(s)
    if not 0 < s < 1:
        raise ValueError(f"{s} is outside (0,1)")
    return f.value_at(s)


def overwrite(f: StepFunction, start, end, value) -> StepFunction:
    """``f`` with the constant ``value`` on ``[start, end)``."""
    start, end = Fraction(start), Fraction(end)
    inner = StepFunction.constant(f.host, value)
    out = _splice(f, inner, start) if start > 0 else inner
    return _splice(out, f, end) if end < 1 else out


def cost_bound(f: StepFunction, cost: CostFunction) -> Fraction:
    """Largest cost among the values of ``f`` and the lattice bounds."""
    return max([cost(v) for v in f.values] + [cost(f.host.bottom), cost(f.host.top)])


def continuity_radius(eps, f: StepFunction, g: StepFunction, cost: CostFunction) -> Fraction:
    """``eps / (4m)`` with ``m`` bounding the costs of both functions."""
    return Fraction(eps) / (4 * max(cost_bound(f, cost), cost_bound(g, cost)))


# unboundedness witnesses

@dataclass(frozen=True)
class IntervalWitness:
    r: StepFunction
    p: StepFunction
    q: StepFunction
    s: StepFunction
    eps: Fraction
    target: Fraction
    width: Fraction
    cost_bound: Fraction
    element: object
    distance_p: Fraction
    distance_q: Fraction
    distance_s: Fraction

    def verify(self, cost: CostFunction) -> bool:
        return (gamma_metric(self.p, self.r, cost) == self.distance_p < self.eps
                and gamma_metric(self.q, self.r, cost) == self.distance_q < self.eps
                and gamma_metric(self.s, self.r, cost) == self.distance_s >= self.target
                and gamma_leq(self.p, self.q) and gamma_leq(self.p, self.s) and gamma_leq(self.s, self.q))


def witness_unbounded_interval(r: StepFunction, eps, target, cost: CostFunction) -> IntervalWitness:
    """``p <= q`` close to ``r`` with some ``s`` between them far from ``r``.

    ``p`` and ``q`` are ``r`` with the bottom and top on ``I = [0, w)``,
    ``w = eps / (2m)``; ``s`` puts an element of cost at least ``target / w`` on ``I``.
    """
    eps, target = Fraction(eps), Fraction(target)
    if eps <= 0:
        raise ValueError("eps must be positive")
    host = r.host
    m = cost_bound(r, cost)
    width = min(eps / (2 * m), ONE)
    while True:
        p = overwrite(r, 0, width, host.bottom)
        q = overwrite(r, 0, width, host.top)
        if gamma_metric(p, r, cost) < eps and gamma_metric(q, r, cost) < eps:
            break
        width /= 2
    if target <= 0:
        element, s = None, p
    else:
        element = cost.element_at_least(target / width, avoid=set(r.values) | {host.bottom, host.top})
        s = overwrite(r, 0, width, element)
    witness = IntervalWitness(r, p, q, s, eps, target, width, m, element,
                              gamma_metric(p, r, cost), gamma_metric(q, r, cost), gamma_metric(s, r, cost))
    if not witness.verify(cost):
        raise OrderError("interval witness failed its own verification")
    return witness


@dataclass(frozen=True)
class JoinWitness:
    r: StepFunction
    pieces: tuple[StepFunction, ...]
    combined: StepFunction
    operation: str
    eps: Fraction
    target: Fraction
    width: Fraction
    subdivisions: int
    element: object
    max_piece_distance: Fraction
    distance: Fraction

    def verify(self, cost: CostFunction) -> bool:
        fold = gamma_join if self.operation == "join" else gamma_meet
        acc = self.pieces[0]
        for f in self.pieces[1:]:
            acc = fold(acc, f)
        distances = [gamma_metric(f, self.r, cost) for f in self.pieces]
        return (acc == self.combined and max(distances) == self.max_piece_distance < self.eps
                and gamma_metric(self.combined, self.r, cost) == self.distance >= self.target)


def witness_unbounded_join(r: StepFunction, eps, target, cost: CostFunction, operation: str = "join") -> JoinWitness:
    """Elements within ``eps`` of ``r`` whose join (or meet) is at least ``target`` away.

    ``I = [0, w)`` is halved from ``[0, 1/2)`` until ``r`` with the bottom (top,
    for meets) on ``I`` is within ``eps/2`` of ``r``. An element ``x`` of cost
    ``N >= target / w`` is placed on one of ``N^2`` equal subintervals of ``I``
    at a time; ``N`` grows until every piece is within ``eps``.
    """
    if operation not in ("join", "meet"):
        raise ValueError("operation must be 'join' or 'meet'")
    eps, target = Fraction(eps), Fraction(target)
    if eps <= 0:
        raise ValueError("eps must be positive")
    host = r.host
    fold = gamma_join if operation == "join" else gamma_meet
    if target <= 0:
        return JoinWitness(r, (r,), r, operation, eps, target, ZERO, 0, None, ZERO, ZERO)
    base_value = host.bottom if operation == "join" else host.top
    width = Fraction(1, 2)
    while True:
        base = overwrite(r, 0, width, base_value)
        if gamma_metric(base, r, cost) <= eps / 2:
            break
        width /= 2
    avoid = set(r.values) | {host.bottom, host.top}
    element = cost.element_at_least(target / width, avoid=avoid)
    while True:
        n = math.ceil(cost(element))
        step = width / (n * n)
        pieces = tuple(overwrite(base, k * step, (k + 1) * step, element) for k in range(n * n))
        worst = max(gamma_metric(f, r, cost) for f in pieces)
        if worst < eps:
            break
        element = cost.element_at_least(cost(element) + 1, avoid=avoid)
    combined = pieces[0]
    for f in pieces[1:]:
        combined = fold(combined, f)
    witness = JoinWitness(r, pieces, combined, operation, eps, target, width, n, element,
                          worst, gamma_metric(combined, r, cost))
    if not witness.verify(cost):
        raise OrderError("join witness failed its own verification")
    return witness


# sampling

def sample_step_function(host: MOmega, rng: random.Random, max_pieces: int = 4, denominator: int = 8,
                         max_atom: int = 5) -> StepFunction:
    k = rng.randint(1, max_pieces)
    cuts = sorted(rng.sample(range(1, denominator), min(k - 1, denominator - 1)))
    breakpoints = [ZERO] + [Fraction(c, denominator) for c in cuts] + [ONE]
    choices = ["0", "1"] + [host.atom(i) for i in range(max_atom)]
    return StepFunction(host, breakpoints, [rng.choice(choices) for _ in breakpoints[1:]])
