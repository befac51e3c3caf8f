"""Finite posets and lattices.

Elements are addressed by canonical indices ``0..n-1``; names are only used
for display and file formats. Down-sets and up-sets are stored as integer
bitmasks, which makes principal-ideal tests a dictionary lookup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    CycleDetected,
    DuplicateName,
    NotALattice,
    OrderError,
    PreimageNotPrincipal,
    SizeLimitExceeded,
    UnknownElement,
)

DEFAULT_SIZE_LIMIT = 16


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _check_names(names):
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name or any(ch.isspace() for ch in name):
            raise OrderError(f"element names must be nonempty strings without whitespace: {name!r}")
        if name in seen:
            raise DuplicateName(name)
        seen.add(name)


class Poset:
    """A finite partial order.

    ``down[i]`` is the bitmask of all ``j`` with ``j <= i``. The constructor
    checks reflexivity, antisymmetry and transitivity.
    """

    def __init__(self, names: Sequence[str], down: Sequence[int]):
        names = tuple(names)
        if not names:
            raise OrderError("posets must be nonempty")
        _check_names(names)
        down = tuple(down)
        if len(down) != len(names):
            raise OrderError("one down-set is needed per element")
        n = len(names)
        for i in range(n):
            if not (down[i] >> i) & 1:
                raise OrderError(f"relation is not reflexive at {names[i]!r}")
            if down[i] >> n:
                raise OrderError("down-set refers to a missing element")
            for j in bits(down[i]):
                if j != i and (down[j] >> i) & 1:
                    raise CycleDetected(f"{names[i]!r} and {names[j]!r} lie below each other")
                if down[j] & ~down[i]:
                    raise OrderError(f"relation is not transitive below {names[i]!r}")
        up = [0] * n
        for i in range(n):
            for j in bits(down[i]):
                up[j] |= 1 << i
        self.names = names
        self.n = n
        self._down = down
        self._up = tuple(up)
        self._index = {name: i for i, name in enumerate(names)}
        self._down_generator = {m: i for i, m in enumerate(down)}
        self._up_generator = {m: i for i, m in enumerate(self._up)}

    @classmethod
    def from_leq(cls, names: Sequence[str], leq: Callable[[int, int], bool]):
        n = len(names)
        down = [mask_of(j for j in range(n) if leq(j, i)) for i in range(n)]
        return cls(names, down)

    # identity and display

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Poset):
            return NotImplemented
        return self.names == other.names and self._down == other._down

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.names, self._down))

    def __repr__(self):
        return f"{type(self).__name__}({' '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(name) from None

    def name(self, i: int) -> str:
        return self.names[i]

    # order

    def leq(self, i: int, j: int) -> bool:
        return bool((self._down[j] >> i) & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def up_mask(self, i: int) -> int:
        return self._up[i]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def principal_generator(self, mask: int) -> int | None:
        """The element ``x`` with ``mask == down(x)``, or None if ``mask`` is not a principal ideal."""
        return self._down_generator.get(mask)

    def principal_filter_generator(self, mask: int) -> int | None:
        return self._up_generator.get(mask)

    def glb(self, i: int, j: int) -> int | None:
        return self._down_generator.get(self._down[i] & self._down[j])

    def lub(self, i: int, j: int) -> int | None:
        return self._up_generator.get(self._up[i] & self._up[j])

    @cached_property
    def bottom(self) -> int | None:
        return self._up_generator.get(self.full_mask)

    @cached_property
    def top(self) -> int | None:
        return self._down_generator.get(self.full_mask)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for i in range(self.n):
            below = self._down[i] & ~(1 << i)
            out.append(tuple(j for j in bits(below) if not any(
                k != j and self.leq(j, k) for k in bits(below))))
        return tuple(out)

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n)]
        for i in range(self.n):
            for j in self.lower_covers[i]:
                out[j].append(i)
        return tuple(tuple(sorted(c)) for c in out)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse edges ``(lower, upper)``, sorted by index."""
        return tuple(sorted((j, i) for i in range(self.n) for j in self.lower_covers[i]))

    @cached_property
    def minimal_elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self._down[i] == 1 << i)

    @cached_property
    def maximal_elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self._up[i] == 1 << i)

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        return tuple(sorted(range(self.n), key=lambda i: (self._down[i].bit_count(), i)))

    @cached_property
    def maximal_chains(self) -> tuple[tuple[int, ...], ...]:
        chains = []

        def walk(chain):
            ups = self.upper_covers[chain[-1]]
            if not ups:
                chains.append(tuple(chain))
            for u in ups:
                walk(chain + [u])

        for m in self.minimal_elements:
            walk([m])
        return tuple(chains)

    @cached_property
    def chains(self) -> tuple[tuple[int, ...], ...]:
        """Every nonempty chain, listed bottom-up."""
        out = []

        def walk(chain):
            out.append(tuple(chain))
            above = self._up[chain[-1]] & ~(1 << chain[-1])
            for j in bits(above):
                walk(chain + [j])

        for i in range(self.n):
            walk([i])
        return tuple(out)

    def dual(self):
        return type(self)(self.names, self._up)

    def restrict(self, indices: Iterable[int]) -> Poset:
        keep = sorted(set(indices))
        return Poset.from_leq([self.names[i] for i in keep],
                              lambda a, b: self.leq(keep[a], keep[b]))


class Lattice(Poset):
    """A finite lattice with precomputed meet and join tables."""

    def __init__(self, names: Sequence[str], down: Sequence[int]):
        super().__init__(names, down)
        n = self.n
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                sup = self.lub(i, j)
                if sup is None:
                    raise NotALattice((self.names[i], self.names[j]), "least upper bound")
                inf = self.glb(i, j)
                if inf is None:
                    raise NotALattice((self.names[i], self.names[j]), "greatest lower bound")
                join[i][j] = join[j][i] = sup
                meet[i][j] = meet[j][i] = inf
        self.meet_table = tuple(map(tuple, meet))
        self.join_table = tuple(map(tuple, join))

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def meet_all(self, elements: Iterable[int]) -> int:
        acc = self.top
        for x in elements:
            acc = self.meet_table[acc][x]
        return acc

    def join_all(self, elements: Iterable[int]) -> int:
        acc = self.bottom
        for x in elements:
            acc = self.join_table[acc][x]
        return acc


def build_poset(names: Sequence[str], covers: Iterable[tuple[str, str]]) -> Poset:
    """Poset generated by the given cover pairs ``(a, b)`` meaning ``a < b``."""
    names = tuple(names)
    _check_names(names)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    below = [set() for _ in range(n)]
    for a, b in covers:
        if a not in index:
            raise UnknownElement(a)
        if b not in index:
            raise UnknownElement(b)
        if a == b:
            raise CycleDetected(f"{a!r} is declared below itself")
        below[index[b]].add(index[a])
    # Kahn's algorithm gives a topological order or exposes a cycle
    above_count = [len(s) for s in below]
    above_of = [[] for _ in range(n)]
    for b in range(n):
        for a in below[b]:
            above_of[a].append(b)
    ready = [i for i in range(n) if above_count[i] == 0]
    order = []
    while ready:
        i = ready.pop()
        order.append(i)
        for b in above_of[i]:
            above_count[b] -= 1
            if above_count[b] == 0:
                ready.append(b)
    if len(order) != n:
        stuck = sorted(names[i] for i in range(n) if above_count[i])
        raise CycleDetected(f"cover relation has a cycle through {stuck}")
    down = [0] * n
    for i in order:
        down[i] = 1 << i
        for a in below[i]:
            down[i] |= down[a]
    return Poset(names, down)


def lattice_from_poset(p: Poset) -> Lattice:
    if isinstance(p, Lattice):
        return p
    return Lattice(p.names, p._down)


def close_under(generators: Iterable, meet: Callable, join: Callable, limit: int = 100_000) -> list:
    """Smallest set containing ``generators`` and closed under both operations."""
    found = list(dict.fromkeys(generators))
    seen = set(found)
    frontier = list(found)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(found):
                for z in (meet(x, y), join(x, y)):
                    if z not in seen:
                        seen.add(z)
                        fresh.append(z)
        found.extend(fresh)
        if len(found) > limit:
            raise SizeLimitExceeded(f"closure exceeded {limit} elements")
        frontier = fresh
    return found


def generated_lattice(generators: Iterable, meet: Callable, join: Callable, leq: Callable,
                      sort_key: Callable | None = None, prefix: str = "g") -> tuple[Lattice, tuple]:
    """Close ``generators`` under both operations and return the abstract lattice.

    Element ``i`` of the returned lattice is the ``i``-th entry of the returned
    tuple; the ordering follows ``sort_key`` so results are reproducible.
    """
    elements = close_under(generators, meet, join)
    if sort_key is not None:
        elements.sort(key=sort_key)
    names = [f"{prefix}{i}" for i in range(len(elements))]
    return Lattice.from_leq(names, lambda i, j: leq(elements[i], elements[j])), tuple(elements)


def longest_chain_length(p: Poset) -> int:
    length = [0] * p.n
    for i in p.linear_extension:
        for j in p.lower_covers[i]:
            length[i] = max(length[i], length[j] + 1)
    return max(length)


# classification

@dataclass(frozen=True)
class ClassificationReport:
    is_modular: bool
    modular_witness: tuple[int, int, int] | None
    is_distributive: bool
    distributive_witness: tuple[int, int, int] | None
    m3_witness: tuple[int, ...] | None
    n5_witness: tuple[int, ...] | None

    @property
    def consistent(self) -> bool:
        return (self.is_modular == (self.n5_witness is None)
                and self.is_distributive == (self.m3_witness is None and self.n5_witness is None))


def modular_violation(l: Lattice) -> tuple[int, int, int] | None:
    """Least triple ``(x, y, z)`` with ``x <= z`` and ``x v (y ^ z) != (x v y) ^ z``."""
    for x, y, z in itertools.product(range(l.n), repeat=3):
        if l.leq(x, z) and l.join(x, l.meet(y, z)) != l.meet(l.join(x, y), z):
            return (x, y, z)
    return None


def distributive_violation(l: Lattice) -> tuple[int, int, int] | None:
    """Least triple with ``x ^ (y v z) != (x ^ y) v (x ^ z)``."""
    for x, y, z in itertools.product(range(l.n), repeat=3):
        if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)):
            return (x, y, z)
    return None


def find_m3(l: Lattice) -> tuple[int, ...] | None:
    """Sublattice isomorphic to M3 as ``(bottom, a, b, c, top)`` with ``a < b < c`` as indices.

    Three distinct elements span an M3 exactly when all their pairwise meets
    agree and all their pairwise joins agree; the lexicographically least
    triple is returned.
    """
    for a in range(l.n):
        groups: dict[tuple[int, int], list[int]] = {}
        for b in range(a + 1, l.n):
            if not l.comparable(a, b):
                groups.setdefault((l.meet(a, b), l.join(a, b)), []).append(b)
        best = None
        for (m, j), partners in groups.items():
            for b, c in itertools.combinations(partners, 2):
                if l.meet(b, c) == m and l.join(b, c) == j:
                    if best is None or (b, c) < best[1:3]:
                        best = (m, b, c, j)
                    break
        if best is not None:
            m, b, c, j = best
            return (m, a, b, c, j)
    return None


def find_n5(l: Lattice) -> tuple[int, ...] | None:
    """Sublattice isomorphic to N5 as ``(bottom, a, b, c, top)`` with ``a < b``.

    ``a < b`` together with ``c`` span a pentagon exactly when
    ``a ^ c == b ^ c`` and ``a v c == b v c``. Least ``(a, b, c)`` wins.
    """
    best = None
    for c in range(l.n):
        groups: dict[tuple[int, int], list[int]] = {}
        for x in range(l.n):
            if not l.comparable(x, c):
                groups.setdefault((l.meet(x, c), l.join(x, c)), []).append(x)
        for (m, j), members in groups.items():
            for a, b in itertools.permutations(members, 2):
                if l.lt(a, b) and (best is None or (a, b, c) < best[1:4]):
                    best = (m, a, b, c, j)
    return best


def verify_embedding(l: Lattice, pattern: Lattice, images: Sequence[int]) -> bool:
    """Check that ``i -> images[i]`` is an injective lattice homomorphism ``pattern -> l``."""
    if len(set(images)) != pattern.n or len(images) != pattern.n:
        return False
    for i, j in itertools.product(range(pattern.n), repeat=2):
        if images[pattern.meet(i, j)] != l.meet(images[i], images[j]):
            return False
        if images[pattern.join(i, j)] != l.join(images[i], images[j]):
            return False
    return True


def classify(l: Lattice) -> ClassificationReport:
    mod = modular_violation(l)
    dist = distributive_violation(l)
    report = ClassificationReport(
        is_modular=mod is None,
        modular_witness=mod,
        is_distributive=dist is None,
        distributive_witness=dist,
        m3_witness=find_m3(l),
        n5_witness=find_n5(l),
    )
    if not report.consistent:
        raise OrderError("identity checks and sublattice search disagree; tables are corrupt")
    return report


# breadth, irreducibles

def is_meet_irredundant(l: Lattice, elements: Sequence[int]) -> bool:
    elements = list(elements)
    if len(set(elements)) != len(elements):
        return False
    whole = l.meet_all(elements)
    return all(l.meet_all(elements[:k] + elements[k + 1:]) != whole for k in range(len(elements)))


def breadth(l: Lattice, limit: int = DEFAULT_SIZE_LIMIT) -> tuple[int, tuple[int, ...]]:
    """Largest meet-irredundant subset, found by depth-first search.

    Subsets of irredundant sets are irredundant, so only irredundant sets are
    extended. The first largest set met in the search is lexicographically least.
    """
    if l.n > limit:
        raise SizeLimitExceeded(f"breadth search is capped at {limit} elements, got {l.n}")
    best: tuple[int, ...] = ()

    def grow(current):
        nonlocal best
        if len(current) > len(best):
            best = tuple(current)
        start = current[-1] + 1 if current else 0
        for x in range(start, l.n):
            candidate = current + [x]
            if is_meet_irredundant(l, candidate):
                grow(candidate)

    grow([])
    return len(best), best


def irreducibles_and_primes(l: Lattice) -> tuple[frozenset[int], frozenset[int]]:
    irreducible = frozenset(x for x in range(l.n) if len(l.lower_covers[x]) == 1)
    prime = frozenset(
        x for x in range(l.n)
        if x != l.bottom and all(
            l.leq(x, w) or l.leq(x, z)
            for w in range(l.n) for z in range(w, l.n) if l.leq(x, l.join(w, z))
        )
    )
    return irreducible, prime


# maps between posets

@dataclass(frozen=True)
class PosetMap:
    domain: Poset
    codomain: Poset
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.n:
            raise OrderError("a map needs exactly one image per domain element")
        if any(not 0 <= y < self.codomain.n for y in self.images):
            raise OrderError("image index out of range")

    @classmethod
    def from_names(cls, domain: Poset, codomain: Poset, mapping: dict[str, str]) -> PosetMap:
        missing = [x for x in domain.names if x not in mapping]
        if missing:
            raise UnknownElement(f"map has no image for {missing}")
        return cls(domain, codomain, tuple(codomain.index(mapping[x]) for x in domain.names))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def isotone_violation(self) -> tuple[int, int] | None:
        for i, j in itertools.product(range(self.domain.n), repeat=2):
            if self.domain.leq(i, j) and not self.codomain.leq(self.images[i], self.images[j]):
                return (i, j)
        return None

    def preimage_of_ideal(self, q: int) -> int:
        return mask_of(p for p, y in enumerate(self.images) if self.codomain.leq(y, q))

    def homomorphism_violation(self) -> tuple[str, int, int] | None:
        """First pair whose meet or join is not preserved (lattice domain and codomain)."""
        src, dst = self.domain, self.codomain
        for i, j in itertools.product(range(src.n), repeat=2):
            if self.images[src.join(i, j)] != dst.join(self.images[i], self.images[j]):
                return ("join", i, j)
            if self.images[src.meet(i, j)] != dst.meet(self.images[i], self.images[j]):
                return ("meet", i, j)
        return None


def galois_upper_adjoint(h: PosetMap) -> PosetMap:
    """The map ``q -> generator of h^-1(down q)``."""
    images = []
    for q in range(h.codomain.n):
        gen = h.domain.principal_generator(h.preimage_of_ideal(q))
        if gen is None:
            raise PreimageNotPrincipal(h.codomain.names[q])
        images.append(gen)
    return PosetMap(h.codomain, h.domain, tuple(images))


# products and isomorphism

def product_name(a: str, b: str) -> str:
    return f"({a},{b})"


def poset_product(p: Poset, q: Poset) -> Poset:
    m = q.n
    names = [product_name(a, b) for a in p.names for b in q.names]
    down = [0] * (p.n * m)
    for i, j in itertools.product(range(p.n), range(m)):
        down[i * m + j] = mask_of(a * m + b for a in bits(p.down_mask(i)) for b in bits(q.down_mask(j)))
    return Poset(names, down)


def direct_product(l1: Lattice, l2: Lattice) -> Lattice:
    prod = poset_product(l1, l2)
    return Lattice(prod.names, prod._down)


def find_isomorphism(p: Poset, q: Poset) -> tuple[int, ...] | None:
    """An order isomorphism ``p -> q`` as an image tuple, or None."""
    if p.n != q.n:
        return None

    def signature(r, i):
        return (r.down_mask(i).bit_count(), r.up_mask(i).bit_count(), len(r.lower_covers[i]), len(r.upper_covers[i]))

    sig_p = [signature(p, i) for i in range(p.n)]
    sig_q = [signature(q, i) for i in range(q.n)]
    if sorted(sig_p) != sorted(sig_q):
        return None
    order = p.linear_extension
    images = [-1] * p.n
    used = [False] * q.n

    def assign(k):
        if k == p.n:
            return True
        x = order[k]
        for y in range(q.n):
            if used[y] or sig_q[y] != sig_p[x]:
                continue
            if all(p.leq(x, z) == q.leq(y, images[z]) and p.leq(z, x) == q.leq(images[z], y)
                   for z in order[:k]):
                images[x], used[y] = y, True
                if assign(k + 1):
                    return True
                images[x], used[y] = -1, False
        return False

    return tuple(images) if assign(0) else None


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None
