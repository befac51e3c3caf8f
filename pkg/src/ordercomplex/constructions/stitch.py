"""Amalgamating posets along a common chain.

Each element ``x`` of a part has a least element ``up(x)`` of the shared chain
above it and a greatest ``down(x)`` below it. Elements of different parts
compare through the chain: ``x <= y`` iff ``up(x) <= down(y)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..delta import DeltaPoint, delta_join, delta_meet, sample_point
from ..errors import SharedChainViolation
from ..poset import Lattice, Poset, PosetMap, lattice_from_poset


class StitchFamily:
    def __init__(self, parts: Sequence[Poset], shared: Sequence[str]):
        parts = list(parts)
        shared = list(shared)
        if not parts:
            raise SharedChainViolation("need at least one part")
        if not shared:
            raise SharedChainViolation("the shared chain is empty")
        owners: dict[str, int] = {}
        for i, part in enumerate(parts):
            for name in shared:
                if name not in part._index:
                    raise SharedChainViolation(f"part {i} lacks shared element {name!r}")
            for lo, hi in zip(shared, shared[1:]):
                if not part.lt(part.index(lo), part.index(hi)):
                    raise SharedChainViolation(f"part {i} does not have {lo!r} < {hi!r}")
            for name in part.names:
                if name in shared:
                    continue
                if name in owners:
                    raise SharedChainViolation(f"{name!r} occurs in parts {owners[name]} and {i}")
                owners[name] = i
        self.parts = parts
        self.shared = tuple(shared)
        self._rank = {name: k for k, name in enumerate(shared)}
        self._owner = owners
        self._up = []
        self._down = []
        for i, part in enumerate(parts):
            up, down = {}, {}
            for name in part.names:
                x = part.index(name)
                above = [c for c in shared if part.leq(x, part.index(c))]
                below = [c for c in shared if part.leq(part.index(c), x)]
                if not above or not below:
                    raise SharedChainViolation(f"{name!r} in part {i} has no shared element "
                                               + ("above" if not above else "below"))
                up[name], down[name] = above[0], below[-1]
            self._up.append(up)
            self._down.append(down)
        names = list(parts[0].names)
        for part in parts[1:]:
            names += [x for x in part.names if x not in self._rank]
        self.names = tuple(names)

    def owner(self, name: str) -> int | None:
        """Index of the part owning ``name``, or None for shared elements."""
        if name in self._rank:
            return None
        return self._owner[name]

    def up(self, i: int, name: str) -> str:
        return self._up[i][name]

    def down(self, i: int, name: str) -> str:
        return self._down[i][name]

    def chain_leq(self, c: str, d: str) -> bool:
        return self._rank[c] <= self._rank[d]

    def _home(self, a: str, b: str) -> int | None:
        """A part containing both names, if any."""
        oa, ob = self.owner(a), self.owner(b)
        if oa is None and ob is None:
            return 0
        if oa is None or ob is None or oa == ob:
            return oa if ob is None else ob
        return None

    def leq(self, a: str, b: str) -> bool:
        i = self._home(a, b)
        if i is not None:
            part = self.parts[i]
            return part.leq(part.index(a), part.index(b))
        return self.chain_leq(self.up(self.owner(a), a), self.down(self.owner(b), b))

    def order_conditions(self, a: str, b: str) -> tuple[bool, bool, bool, bool]:
        """The four equivalent descriptions of ``a <= b`` for ``a``, ``b`` in different parts."""
        i, j = self.owner(a), self.owner(b)
        pi, pj = self.parts[i], self.parts[j]
        ua, db = self.up(i, a), self.down(j, b)
        return (
            self.chain_leq(ua, db),
            pj.leq(pj.index(ua), pj.index(b)),
            pi.leq(pi.index(a), pi.index(db)),
            any(pi.leq(pi.index(a), pi.index(z)) and pj.leq(pj.index(z), pj.index(b)) for z in self.shared),
        )

    def join(self, a: str, b: str) -> str:
        i = self._home(a, b)
        if i is not None:
            part = self.parts[i]
            return part.names[part.join(part.index(a), part.index(b))]
        i, j = self.owner(a), self.owner(b)
        if not self.chain_leq(self.up(i, a), self.up(j, b)):
            a, b, i, j = b, a, j, i
        # now up(a) <= up(b), so the join lives in b's part
        part = self.parts[j]
        return part.names[part.join(part.index(b), part.index(self.up(i, a)))]

    def meet(self, a: str, b: str) -> str:
        i = self._home(a, b)
        if i is not None:
            part = self.parts[i]
            return part.names[part.meet(part.index(a), part.index(b))]
        i, j = self.owner(a), self.owner(b)
        if not self.chain_leq(self.down(i, a), self.down(j, b)):
            a, b, i, j = b, a, j, i
        part = self.parts[i]
        return part.names[part.meet(part.index(a), part.index(self.down(j, b)))]


def stitch(family: StitchFamily) -> Poset:
    names = family.names
    p = Poset.from_leq(names, lambda i, j: family.leq(names[i], names[j]))
    if all(isinstance(part, Lattice) for part in family.parts):
        return lattice_from_poset(p)
    return p


def factorization_failure(family: StitchFamily, stitched: Lattice, target: Lattice, maps: Sequence[PosetMap]):
    """Try to extend the given part homomorphisms to ``stitched``.

    Returns None when the extension is a lattice homomorphism, else the first
    offending ``(operation, a, b)`` by name.
    """
    images = {}
    for part, h in zip(family.parts, maps):
        for x, name in enumerate(part.names):
            if name in images and images[name] != h(x):
                return ("disagree", name, name)
            images[name] = h(x)
    phi = PosetMap(stitched, target, tuple(images[name] for name in stitched.names))
    bad = phi.homomorphism_violation()
    if bad is None:
        return None
    op, a, b = bad
    return (op, stitched.names[a], stitched.names[b])


# the complex of a stitched poset along the edge {0, 1}

def extend_from_part(family: StitchFamily, stitched: Poset, i: int, f: DeltaPoint) -> DeltaPoint:
    """Values of ``f`` on part ``i``, and ``f(top)`` everywhere else."""
    part = family.parts[i]
    rest = f.values[part.index(family.shared[-1])]
    values = [f.values[part.index(name)] if name in part._index else rest for name in stitched.names]
    return DeltaPoint(stitched, values)


def restrict_to_part(family: StitchFamily, stitched: Poset, i: int, f: DeltaPoint) -> tuple[Fraction, ...]:
    return tuple(f.values[stitched.index(name)] for name in family.parts[i].names)


@dataclass
class StitchDeltaReport:
    facets_per_part: list[int]
    samples: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _edge_value_up(family, i, f):
    """Value at the top of the least edge point above ``f`` (a point of part ``i``)."""
    part = family.parts[i]
    bottom = part.index(family.shared[0])
    return max(v for x, v in enumerate(f.values) if x != bottom)


def _edge_point(family, i, s):
    part = family.parts[i]
    bottom = part.index(family.shared[0])
    return DeltaPoint(part, [Fraction(1) if x == bottom else s for x in range(part.n)])


def stitch_delta_check(parts: Sequence[Poset], samples: int = 200, seed=0) -> StitchDeltaReport:
    """Check that the complex of the stitched poset is the union of the parts' complexes along their common edge.

    Parts must share exactly their least and greatest elements, with equal names.
    """
    from ..delta import delta_membership

    bottoms = {p.names[p.bottom] if p.bottom is not None else None for p in parts}
    tops = {p.names[p.top] if p.top is not None else None for p in parts}
    if len(bottoms) != 1 or len(tops) != 1 or None in bottoms | tops:
        raise SharedChainViolation("parts must have a common least and a common greatest element")
    shared = [bottoms.pop(), tops.pop()]
    family = StitchFamily(parts, shared)
    stitched = stitch(family)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    report = StitchDeltaReport([0] * len(parts), samples)

    part_sets = [set(p.names) for p in parts]
    for chain in stitched.maximal_chains:
        homes = [i for i, names in enumerate(part_sets) if {stitched.names[x] for x in chain} <= names]
        if len(homes) != 1:
            report.failures.append(("facet", tuple(stitched.names[x] for x in chain)))
        else:
            report.facets_per_part[homes[0]] += 1

    top = stitched.index(shared[1])
    bottom = stitched.index(shared[0])
    for _ in range(samples):
        f = sample_point(stitched, rng, 8, faces=True)
        owners = []
        for i in range(len(parts)):
            piece = restrict_to_part(family, stitched, i, f)
            if delta_membership(parts[i], piece) and extend_from_part(family, stitched, i, DeltaPoint(parts[i], piece)) == f:
                owners.append(i)
        on_edge = all(v == f.values[top] for x, v in enumerate(f.values) if x != bottom)
        if len(owners) != (len(parts) if on_edge else 1):
            report.failures.append(("restriction", f, owners))

    if not all(isinstance(p, Lattice) for p in parts):
        return report
    for _ in range(samples):
        i, j = rng.randrange(len(parts)), rng.randrange(len(parts))
        f = sample_point(parts[i], rng, 8, faces=True)
        g = sample_point(parts[j], rng, 8, faces=True)
        F, G = extend_from_part(family, stitched, i, f), extend_from_part(family, stitched, j, g)
        f_top = f.values[parts[i].index(shared[1])]
        g_top = g.values[parts[j].index(shared[1])]
        if i == j:
            order = f <= g
            join, meet = extend_from_part(family, stitched, i, f | g), extend_from_part(family, stitched, i, f & g)
        else:
            order = _edge_value_up(family, i, f) <= g_top
            if _edge_value_up(family, i, f) >= _edge_value_up(family, j, g):
                join = extend_from_part(family, stitched, i, delta_join(f, _edge_point(family, i, _edge_value_up(family, j, g))))
            else:
                join = extend_from_part(family, stitched, j, delta_join(g, _edge_point(family, j, _edge_value_up(family, i, f))))
            if f_top <= g_top:
                meet = extend_from_part(family, stitched, i, delta_meet(f, _edge_point(family, i, g_top)))
            else:
                meet = extend_from_part(family, stitched, j, delta_meet(g, _edge_point(family, j, f_top)))
        if order != (F <= G):
            report.failures.append(("order", F, G))
        if join != F | G:
            report.failures.append(("join", F, G))
        if meet != F & G:
            report.failures.append(("meet", F, G))
    return report
