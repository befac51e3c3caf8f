"""Transport of points along poset maps, in both directions."""

from __future__ import annotations

from fractions import Fraction

from ..delta import DeltaPoint
from ..errors import HostMismatch, NotIsotone, PreimageNotPrincipal
from ..poset import PosetMap


def prin_prin_violation(h: PosetMap) -> int | None:
    """First codomain element whose principal ideal has a non-principal preimage."""
    for q in range(h.codomain.n):
        if h.domain.principal_generator(h.preimage_of_ideal(q)) is None:
            return q
    return None


def functor_map(h: PosetMap, f: DeltaPoint, variance: str = "covariant") -> DeltaPoint:
    if variance == "covariant":
        if f.host != h.domain:
            raise HostMismatch("covariant transport needs a point over the domain")
        bad = h.isotone_violation()
        if bad is not None:
            raise NotIsotone((h.domain.names[bad[0]], h.domain.names[bad[1]]))
        cod = h.codomain
        values = []
        for y in range(cod.n):
            above = [f.values[x] for x in range(h.domain.n) if cod.leq(y, h(x))]
            values.append(max(above, default=Fraction(0)))
        return DeltaPoint(cod, values)
    if variance == "contravariant":
        if f.host != h.codomain:
            raise HostMismatch("contravariant transport needs a point over the codomain")
        q = prin_prin_violation(h)
        if q is not None:
            raise PreimageNotPrincipal(h.codomain.names[q])
        return DeltaPoint(h.domain, [f.values[h(x)] for x in range(h.domain.n)])
    raise ValueError(f"variance must be 'covariant' or 'contravariant', not {variance!r}")


def inclusion(sub, sup) -> PosetMap:
    """Inclusion of ``sub`` into ``sup`` by element name."""
    return PosetMap(sub, sup, tuple(sup.index(name) for name in sub.names))
