"""Line-oriented text formats and the JSON poset format.

Every input file is a sequence of ``key: value`` lines; ``#`` starts a
comment. One file may mix keys (a poset together with points, pairs or a
thickening constant), which is how the CLI consumes them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import OrderError, ParseError
from .poset import Poset, build_poset

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")

KEYS = ("elements", "cover", "point", "pair", "c", "pairwise", "ground", "closed", "piece", "cost", "map")


def parse_rational(token: str, line: int | None = None) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"expected an integer or p/q rational, got {token!r}", line)
    value = Fraction(token)
    return value


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class PointLine:
    label: str | None
    assignments: dict[str, Fraction]
    line: int


@dataclass
class Document:
    elements: list[str] | None = None
    elements_line: int | None = None
    covers: list[tuple[str, str, int]] = field(default_factory=list)
    points: list[PointLine] = field(default_factory=list)
    pairs: list[tuple[str, str, int]] = field(default_factory=list)
    c: Fraction | None = None
    pairwise: list[tuple[tuple[str, ...], str, Fraction, int]] = field(default_factory=list)
    ground: list[str] | None = None
    closed: list[tuple[tuple[str, ...], int]] = field(default_factory=list)
    pieces: list[tuple[Fraction, Fraction, str, int]] = field(default_factory=list)
    cost: str | None = None
    maps: list[tuple[str, str, int]] = field(default_factory=list)

    def poset(self) -> Poset:
        if self.elements is None:
            raise ParseError("no 'elements:' line")
        known = set(self.elements)
        for a, b, line in self.covers:
            for name in (a, b):
                if name not in known:
                    raise ParseError(f"unknown element {name!r}", line)
        try:
            return build_poset(self.elements, [(a, b) for a, b, _ in self.covers])
        except OrderError as exc:
            raise ParseError(str(exc), self.elements_line) from exc

    def point_values(self, host: Poset, strict: bool = True, bottom_default: bool = False):
        """Value tuples for each ``point:`` line, as ``(label, values)``."""
        out = []
        for k, pl in enumerate(self.points):
            values = []
            for i, name in enumerate(host.names):
                if name in pl.assignments:
                    values.append(pl.assignments[name])
                elif bottom_default and i == host.bottom:
                    values.append(Fraction(1))
                elif strict:
                    raise ParseError(f"point has no value for {name!r}", pl.line)
                else:
                    values.append(Fraction(0))
            for name in pl.assignments:
                if name not in host._index:
                    raise ParseError(f"unknown element {name!r}", pl.line)
            out.append((pl.label or f"p{k}", tuple(values)))
        return out

    def closure_system(self):
        from .closure_system import ClosureSystem

        if self.ground is None:
            raise ParseError("no 'ground:' line")
        known = set(self.ground)
        for members, line in self.closed:
            for name in members:
                if name not in known:
                    raise ParseError(f"unknown ground element {name!r}", line)
        return ClosureSystem.completed(self.ground, [members for members, _ in self.closed])

    def step_function(self, host):
        from .gamma import StepFunction

        if not self.pieces:
            raise ParseError("no 'piece:' lines")
        pieces = sorted(self.pieces)
        expected = Fraction(0)
        for start, end, _, line in pieces:
            if start != expected or end <= start:
                raise ParseError(f"pieces must tile [0,1] left to right; gap or overlap at {start}", line)
            expected = end
        if expected != 1:
            raise ParseError("pieces must end at 1", pieces[-1][3])
        breakpoints = [p[0] for p in pieces] + [Fraction(1)]
        values = []
        for _, _, token, line in pieces:
            try:
                values.append(host.parse_element(token))
            except (OrderError, ValueError) as exc:
                raise ParseError(str(exc), line) from exc
        return StepFunction(host, breakpoints, values)


def parse_document(text: str) -> Document:
    doc = Document()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in KEYS:
            raise ParseError(f"unrecognized line {raw.strip()!r}", number)
        tokens = rest.split()
        if key == "elements":
            if doc.elements is not None:
                raise ParseError("duplicate 'elements:' line", number)
            if not tokens:
                raise ParseError("'elements:' needs at least one name", number)
            if len(set(tokens)) != len(tokens):
                raise ParseError("duplicate element name", number)
            doc.elements, doc.elements_line = tokens, number
        elif key in ("cover", "pair", "map"):
            if len(tokens) != 2:
                raise ParseError(f"'{key}:' takes exactly two names", number)
            {"cover": doc.covers, "pair": doc.pairs, "map": doc.maps}[key].append((tokens[0], tokens[1], number))
        elif key == "point":
            label = None
            assignments = {}
            for tok in tokens:
                if "=" not in tok:
                    if label is not None or assignments:
                        raise ParseError(f"expected elem=p/q, got {tok!r}", number)
                    label = tok
                    continue
                name, _, value = tok.partition("=")
                if name in assignments:
                    raise ParseError(f"element {name!r} assigned twice", number)
                assignments[name] = parse_rational(value, number)
            doc.points.append(PointLine(label, assignments, number))
        elif key == "c":
            if len(tokens) != 1:
                raise ParseError("'c:' takes one rational", number)
            doc.c = parse_rational(tokens[0], number)
        elif key == "pairwise":
            match = re.match(r"^(.*)->(.*):(.*)$", rest)
            if not match:
                raise ParseError("expected 'pairwise: Y -> z : p/q'", number)
            target = match.group(2).split()
            if len(target) != 1:
                raise ParseError("'pairwise:' needs exactly one target element", number)
            doc.pairwise.append((tuple(match.group(1).split()), target[0],
                                 parse_rational(match.group(3).strip(), number), number))
        elif key == "ground":
            if doc.ground is not None:
                raise ParseError("duplicate 'ground:' line", number)
            if len(set(tokens)) != len(tokens):
                raise ParseError("duplicate ground element", number)
            doc.ground = tokens
        elif key == "closed":
            doc.closed.append((tuple(tokens), number))
        elif key == "piece":
            if len(tokens) != 3:
                raise ParseError("expected 'piece: start end value'", number)
            doc.pieces.append((parse_rational(tokens[0], number), parse_rational(tokens[1], number), tokens[2], number))
        elif key == "cost":
            if tokens != ["momega"]:
                raise ParseError("the only cost preset is 'momega'", number)
            doc.cost = tokens[0]
    return doc


# posets

def parse_poset(text: str) -> Poset:
    return parse_document(text).poset()


def format_poset(p: Poset) -> str:
    lines = ["elements: " + " ".join(p.names)]
    lines += [f"cover: {p.names[a]} {p.names[b]}" for a, b in p.covers]
    return "\n".join(lines) + "\n"


def poset_to_json(p: Poset) -> str:
    data = {"elements": list(p.names), "covers": [[p.names[a], p.names[b]] for a, b in p.covers]}
    return json.dumps(data, indent=2) + "\n"


def poset_from_json(text: str) -> Poset:
    try:
        data = json.loads(text)
        elements = data["elements"]
        covers = data.get("covers", [])
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"bad poset JSON: {exc}") from exc
    if not isinstance(elements, list) or not all(isinstance(c, list) and len(c) == 2 for c in covers):
        raise ParseError("bad poset JSON: 'elements' must be a list and covers pairs")
    try:
        return build_poset(elements, [tuple(c) for c in covers])
    except OrderError as exc:
        raise ParseError(str(exc)) from exc


def load_poset_text(text: str) -> Poset:
    """Accept either the line format or JSON."""
    if text.lstrip().startswith("{"):
        return poset_from_json(text)
    return parse_poset(text)


# points

def parse_point(host: Poset, text: str, strict: bool = True, bottom_default: bool = False):
    from .delta import DeltaPoint

    doc = parse_document(text)
    if len(doc.points) != 1:
        raise ParseError(f"expected exactly one 'point:' line, found {len(doc.points)}")
    (_, values), = doc.point_values(host, strict, bottom_default)
    return DeltaPoint(host, values)


def format_point(f, label: str | None = None) -> str:
    head = "point:" + (f" {label}" if label else "")
    body = " ".join(f"{name}={format_rational(v)}" for name, v in zip(f.host.names, f.values))
    return f"{head} {body}\n"


def format_step_function(f) -> str:
    lines = [f"piece: {format_rational(a)} {format_rational(b)} {f.host.format_element(v)}"
             for (a, b), v in zip(f.intervals(), f.values)]
    return "\n".join(lines) + "\n"
