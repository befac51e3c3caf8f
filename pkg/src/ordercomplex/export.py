"""DOT Hasse diagrams and OFF meshes of low-dimensional order complexes."""

from __future__ import annotations

import math
from itertools import combinations

from .errors import DimensionTooHigh
from .poset import Poset, longest_chain_length


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(p: Poset, title: str = "hasse") -> str:
    lines = [f"digraph {_quote(title)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    lines += [f"  {_quote(name)};" for name in p.names]
    lines += [f"  {_quote(p.names[a])} -> {_quote(p.names[b])} [arrowhead=none];" for a, b in p.covers]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _frame(n: int) -> list[tuple[float, float, float]]:
    """Three orthonormal vectors in R^n (fewer coordinates if n < 3), fixed for every input."""
    if n <= 3:
        return [tuple(1.0 if i == k else 0.0 for k in range(3)) for i in range(n)]
    rows = []
    for k in range(3):
        v = [math.cos(2 * math.pi * (k + 1) * i / n + 0.5 * k) for i in range(n)]
        for u in rows:
            dot = sum(a * b for a, b in zip(u, v))
            v = [a - dot * b for a, b in zip(v, u)]
        norm = math.sqrt(sum(a * a for a in v))
        rows.append([a / norm for a in v])
    # column i of the 3 x n matrix is the image of e_i
    return [(rows[0][i], rows[1][i], rows[2][i]) for i in range(n)]


def order_complex_facets(p: Poset) -> list[tuple[int, ...]]:
    return sorted(p.maximal_chains)


def to_off(p: Poset) -> str:
    """One vertex per element (image of ``e_i``), one face list per maximal chain.

    Tetrahedra are written as their four triangles; lower-dimensional facets
    as segment or point faces. ``# simplex:`` comments list each facet.
    """
    if longest_chain_length(p) > 3:
        raise DimensionTooHigh(f"order complex has dimension {longest_chain_length(p)}; OFF export needs at most 3")
    vertices = _frame(p.n)
    facets = order_complex_facets(p)
    faces = []
    for chain in facets:
        if len(chain) == 4:
            faces += [tri for tri in combinations(chain, 3)]
        else:
            faces.append(chain)
    lines = ["OFF"]
    lines += [f"# simplex: {' '.join(p.names[x] for x in chain)}" for chain in facets]
    lines.append(f"{p.n} {len(faces)} 0")
    lines += [" ".join(f"{c:.6f}" for c in v) for v in vertices]
    lines += [f"{len(face)} " + " ".join(str(x) for x in face) for face in faces]
    return "\n".join(lines) + "\n"


def parse_off_faces(text: str) -> list[tuple[int, ...]]:
    """Face index lists from OFF text (comments ignored)."""
    rows = [line.split("#", 1)[0].split() for line in text.splitlines()]
    rows = [r for r in rows if r]
    if rows[0] != ["OFF"]:
        raise ValueError("not an OFF file")
    nv, nf, _ = map(int, rows[1])
    return [tuple(int(x) for x in r[1:1 + int(r[0])]) for r in rows[2 + nv:2 + nv + nf]]
