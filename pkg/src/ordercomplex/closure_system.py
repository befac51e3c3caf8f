from __future__ import annotations

import warnings
from typing import Iterable, Sequence

from .errors import OrderError, UnknownElement
from .poset import Lattice, _check_names, bits, mask_of


class ClosureSystem:
    """A ground set with an intersection-closed family of closed subsets containing it.

    Subsets are bitmasks over ground indices; the closed sets are kept sorted
    by (size, mask), so index 0 is the closure of the empty set.
    """

    def __init__(self, ground: Sequence[str], closed: Iterable[int]):
        ground = tuple(ground)
        _check_names(ground)
        full = (1 << len(ground)) - 1
        family = set(closed)
        if full not in family:
            raise OrderError("the ground set must be closed")
        if any(m & ~full for m in family):
            raise OrderError("closed set refers to a missing point")
        for a in family:
            for b in family:
                if a & b not in family:
                    raise OrderError("closed sets are not closed under intersection")
        self.ground = ground
        self.n = len(ground)
        self.full = full
        self.closed = tuple(sorted(family, key=lambda m: (m.bit_count(), m)))
        self._closed_index = {m: i for i, m in enumerate(self.closed)}
        self._index = {name: i for i, name in enumerate(ground)}

    @classmethod
    def completed(cls, ground: Sequence[str], family: Iterable[Iterable[str]]):
        """Close ``family`` under intersection and add the ground set.

        Returns ``(system, added)`` where ``added`` lists the sets that were
        missing from the input; a warning is issued when it is nonempty.
        """
        index = {name: i for i, name in enumerate(ground)}
        try:
            given = {mask_of(index[x] for x in members) for members in family}
        except KeyError as exc:
            raise UnknownElement(exc.args[0]) from None
        closed = set(given) | {(1 << len(ground)) - 1}
        frontier = list(closed)
        while frontier:
            fresh = []
            for a in frontier:
                for b in list(closed):
                    if a & b not in closed:
                        closed.add(a & b)
                        fresh.append(a & b)
            frontier = fresh
        system = cls(ground, closed)
        added = [m for m in system.closed if m not in given]
        if added:
            warnings.warn(f"closure system completed with {len(added)} extra set(s): "
                          + ", ".join(system.format_set(m) for m in added), stacklevel=2)
        return system, added

    @classmethod
    def from_lattice(cls, l: Lattice) -> ClosureSystem:
        """Points are the join-irreducibles; closed sets are their traces on principal ideals."""
        irreducible = [x for x in range(l.n) if len(l.lower_covers[x]) == 1]
        closed = {mask_of(k for k, x in enumerate(irreducible) if l.leq(x, y)) for y in range(l.n)}
        return cls([l.names[x] for x in irreducible], closed)

    def __eq__(self, other):
        return isinstance(other, ClosureSystem) and (self.ground, self.closed) == (other.ground, other.closed)

    def __hash__(self):
        return hash((self.ground, self.closed))

    def __repr__(self):
        return f"ClosureSystem({' '.join(self.ground)}; {len(self.closed)} closed sets)"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(name) from None

    def mask(self, names: Iterable[str]) -> int:
        return mask_of(self.index(x) for x in names)

    def is_closed(self, mask: int) -> bool:
        return mask in self._closed_index

    def closure(self, mask: int) -> int:
        result = self.full
        for m in self.closed:
            if m & mask == mask:
                result &= m
        return result

    def format_set(self, mask: int) -> str:
        return "{" + ",".join(self.ground[i] for i in bits(mask)) + "}"

    def lattice(self) -> Lattice:
        """Closed sets ordered by inclusion; element ``i`` is ``self.closed[i]``."""
        names = [self.format_set(m) for m in self.closed]
        return Lattice.from_leq(names, lambda i, j: self.closed[i] & ~self.closed[j] == 0)

    def closed_index(self, mask: int) -> int:
        return self._closed_index[mask]
