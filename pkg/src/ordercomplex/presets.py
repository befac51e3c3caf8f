"""Named lattices. The fixed ones live as text files under ``data/``."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .errors import UnknownElement
from .formats import parse_document
from .poset import Lattice, build_poset, lattice_from_poset

NAMED = ("M3", "N5", "gluing", "pentagon_6", "pentagon_7", "pentagon_8", "n5_whisker")


def _read(name: str) -> str:
    return resources.files("ordercomplex").joinpath("data").joinpath(f"{name}.txt").read_text()


@lru_cache(maxsize=None)
def named(name: str) -> Lattice:
    if name not in NAMED:
        raise UnknownElement(f"no preset named {name!r}")
    return lattice_from_poset(parse_document(_read(name)).poset())


def m3() -> Lattice:
    return named("M3")


def n5() -> Lattice:
    return named("N5")


def gluing() -> Lattice:
    return named("gluing")


@lru_cache(maxsize=None)
def chain(n: int, names: tuple[str, ...] | None = None) -> Lattice:
    if names is None:
        names = ("0",) if n == 1 else ("0",) + tuple(f"c{i}" for i in range(1, n - 1)) + ("1",)
    if len(names) != n:
        raise ValueError("need one name per chain element")
    return lattice_from_poset(build_poset(names, zip(names, names[1:])))


@lru_cache(maxsize=None)
def boolean(n: int) -> Lattice:
    """Subsets of an n-set; element names are bit strings, coordinate k is character k."""
    names = ["".join("1" if (m >> k) & 1 else "0" for k in range(n)) for m in range(2 ** n)]
    covers = [(names[m], names[m | (1 << k)]) for m in range(2 ** n) for k in range(n) if not (m >> k) & 1]
    return lattice_from_poset(build_poset(names, covers))


def m3_points():
    """Closure system on three points whose closed-set lattice is M3."""
    return parse_document(_read("m3_points")).closure_system()[0]


def lookup(name: str) -> Lattice:
    """Resolve ``M3``, ``chain4``, ``boolean3`` and the other preset names."""
    if name in NAMED:
        return named(name)
    for prefix, make in (("chain", chain), ("boolean", boolean)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            size = int(name[len(prefix):])
            if size >= 1:
                return make(size)
    raise UnknownElement(f"unknown preset {name!r}")
