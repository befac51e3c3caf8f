"""The complex of a product as the product of the complexes."""

from __future__ import annotations

from functools import lru_cache

from ..delta import DeltaPoint
from ..errors import HostMismatch
from ..poset import Lattice, Poset, direct_product, poset_product


@lru_cache(maxsize=None)
def product_host(p: Poset, q: Poset) -> Poset:
    if isinstance(p, Lattice) and isinstance(q, Lattice):
        return direct_product(p, q)
    return poset_product(p, q)


def product_iso(f_p: DeltaPoint, f_q: DeltaPoint) -> DeltaPoint:
    """``f(x, y) = min(f_p(x), f_q(y))``."""
    host = product_host(f_p.host, f_q.host)
    return DeltaPoint(host, [min(a, b) for a in f_p.values for b in f_q.values])


def product_iso_inverse(f: DeltaPoint, p: Poset, q: Poset) -> tuple[DeltaPoint, DeltaPoint]:
    """Read the factors off a row and a column through a point where ``f`` is 1."""
    if f.host != product_host(p, q):
        raise HostMismatch("point does not live over the product of these posets")
    m = q.n
    corner = next(k for k, v in enumerate(f.values) if v == 1)
    row, col = divmod(corner, m)
    f_p = DeltaPoint(p, [f.values[x * m + col] for x in range(p.n)])
    f_q = DeltaPoint(q, [f.values[row * m + y] for y in range(m)])
    return f_p, f_q
