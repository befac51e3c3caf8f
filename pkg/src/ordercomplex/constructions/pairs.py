"""Subcomplexes cut out by pair constraints: no point may take values strictly
between 0 and 1 at both ends of a constrained pair."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from ..delta import DeltaPoint, point_on_chain
from ..errors import PairOrderViolation, SecondCoordinateNotJoinPrime
from ..poset import Lattice, irreducibles_and_primes


class PairConstraintSet:
    """Pairs ``(x, y)`` with ``x <= y``, reduced to the minimal intervals.

    A pair whose interval contains another pair's interval is implied by it
    and is dropped; ``dropped`` keeps the removed pairs for reporting.
    """

    def __init__(self, host: Lattice, pairs: Iterable[tuple[int, int]]):
        pairs = set(pairs)
        for x, y in pairs:
            if not host.leq(x, y):
                raise PairOrderViolation(f"pair ({host.names[x]}, {host.names[y]}) needs {host.names[x]} <= {host.names[y]}")

        def inside(inner, outer):
            return host.leq(outer[0], inner[0]) and host.leq(inner[1], outer[1])

        kept = sorted(p for p in pairs if not any(q != p and inside(q, p) for q in pairs))
        self.host = host
        self.pairs = tuple(kept)
        self.dropped = tuple(sorted(pairs - set(kept)))

    @classmethod
    def from_names(cls, host: Lattice, pairs: Iterable[tuple[str, str]]):
        return cls(host, [(host.index(x), host.index(y)) for x, y in pairs])

    def named_pairs(self):
        return [(self.host.names[x], self.host.names[y]) for x, y in self.pairs]

    def require_strict(self):
        for x, y in self.pairs:
            if x == y:
                raise PairOrderViolation(f"pair ({self.host.names[x]}, {self.host.names[y]}) is not strict")

    def require_join_prime(self):
        _, primes = irreducibles_and_primes(self.host)
        for x, y in self.pairs:
            if y not in primes:
                raise SecondCoordinateNotJoinPrime((self.host.names[x], self.host.names[y]))

    def chain_allowed(self, chain) -> bool:
        """Whether points with positive weight exactly on ``chain`` satisfy every pair."""
        low, high = chain[0], chain[-1]
        return all(self.host.leq(x, low) or not self.host.leq(y, high) for x, y in self.pairs)

    def allowed_chains(self):
        return [ch for ch in self.host.chains if self.chain_allowed(ch)]


def delta_s_membership(constraints: PairConstraintSet, f: DeltaPoint) -> bool:
    if f.host != constraints.host:
        raise ValueError("point lives over a different lattice")
    return not any(0 < f.values[x] < 1 and 0 < f.values[y] < 1 for x, y in constraints.pairs)


def sample_member(constraints: PairConstraintSet, rng: random.Random, max_denominator: int = 8) -> DeltaPoint:
    return point_on_chain(constraints.host, rng.choice(constraints.allowed_chains()), rng, max_denominator)


@dataclass
class ClosureCheck:
    samples: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def delta_s_closure_check(constraints: PairConstraintSet, samples: int = 1000, seed=0) -> ClosureCheck:
    """Sample member pairs and confirm their meet and join stay inside."""
    constraints.require_join_prime()
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    chains = constraints.allowed_chains()
    report = ClosureCheck(samples)
    for _ in range(samples):
        f = point_on_chain(constraints.host, rng.choice(chains), rng, 8)
        g = point_on_chain(constraints.host, rng.choice(chains), rng, 8)
        for op, result in (("meet", f & g), ("join", f | g)):
            if not delta_s_membership(constraints, result):
                report.violations.append((op, f, g, result))
    return report


def delta_s_hasse_edges(constraints: PairConstraintSet) -> tuple[bool, tuple[int, int] | None]:
    """Whether every edge of the Hasse diagram lies inside; otherwise the first missing edge.

    Interior points of the edge from ``p`` to ``q`` take values strictly between
    0 and 1 exactly on ``down(q) - down(p)``.
    """
    constraints.require_strict()
    constraints.require_join_prime()
    host = constraints.host
    for p, q in host.covers:
        band = host.down_mask(q) & ~host.down_mask(p)
        for x, y in constraints.pairs:
            if (band >> x) & 1 and (band >> y) & 1:
                return False, (p, q)
    return True, None
