"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails (a certificate
is printed or written), 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import ast
import itertools
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import presets
from .closure_system import ClosureSystem
from .constructions import edmondson as ed
from .constructions.functor import functor_map, prin_prin_violation
from .constructions.pairs import PairConstraintSet, delta_s_hasse_edges, delta_s_membership, sample_member as pairs_sample
from .constructions.product import product_iso, product_iso_inverse
from .constructions.stitch import StitchFamily, stitch, stitch_delta_check
from .constructions.thicken import (ThickenedSpace, sample_member as thick_sample, thick_join,
                                    thick_join_bruteforce, thick_meet, thick_membership)
from .delta import (DeltaPoint, breadth_family, delta_join, delta_meet, delta_membership, extract_chain,
                    is_meet_irredundant as family_irredundant, sample_point)
from .errors import NotALattice, OrderError, ParseError, SizeLimitExceeded
from .export import to_dot, to_off
from .formats import Document, format_point, format_poset, format_rational, parse_document, parse_rational
from .gamma import (MOmega, StepFunction, cost_bound, gamma_eventual_value, gamma_join, gamma_meet,
                    gamma_leq, gamma_metric, momega_cost, overwrite, sample_step_function,
                    witness_unbounded_interval, witness_unbounded_join)
from .poset import (Lattice, Poset, PosetMap, breadth, classify, distributive_violation, find_isomorphism,
                    is_meet_irredundant, lattice_from_poset, longest_chain_length, modular_violation,
                    verify_embedding)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CHECKS = ("membership", "classify", "breadth", "delta-axioms", "delta-s", "thicken", "edmondson",
          "stitch", "product-iso", "functor", "gamma")
WITNESSES = ("gamma-interval", "gamma-join", "gamma-meet", "edmondson")


class InputError(Exception):
    pass


def _q(x) -> str:
    return format_rational(x)


def _qs(values) -> list[str]:
    return [_q(v) for v in values]


@dataclass
class RunReport:
    command: str
    results: list[tuple[str, bool, str]] = field(default_factory=list)
    info: list[str] = field(default_factory=list)
    certificate: dict | None = None

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.results.append((name, bool(ok), detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.ok else EXIT_FAIL

    def render(self, show_certificate: bool = False) -> str:
        lines = [f"$ {self.command}"]
        lines += [f"  {text}" for text in self.info]
        for name, ok, detail in self.results:
            lines.append(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        lines.append(f"verdict: {'PASS' if self.ok else 'FAIL'}")
        if show_certificate and self.certificate is not None:
            lines.append("certificate: " + json.dumps(self.certificate, sort_keys=True))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        data = {
            "command": self.command,
            "verdict": "pass" if self.ok else "fail",
            "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.results],
            "info": self.info,
            "certificate": self.certificate,
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


# input loading

def read_source(source: str) -> str:
    """Text of a file, or of a preset given as ``preset:NAME``."""
    if source.startswith("preset:"):
        name = source[len("preset:"):]
        if name == "m3_points":
            return presets._read("m3_points")
        if name in presets.NAMED:
            return presets._read(name)
        try:
            return format_poset(presets.lookup(name))
        except OrderError as exc:
            raise InputError(str(exc)) from exc
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from exc


def _lattice(report: RunReport, p: Poset) -> Lattice | None:
    try:
        l = lattice_from_poset(p)
    except NotALattice as exc:
        report.check("lattice", False, str(exc))
        report.certificate = {"witness": {"missing": exc.kind, "pair": list(exc.witness)}}
        return None
    return l


def verify_missing_bound(docs, w) -> bool:
    p = docs[0].poset()
    i, j = (p.index(x) for x in w["pair"])
    bound = p.lub(i, j) if w["missing"] == "least upper bound" else p.glb(i, j)
    return bound is None


def _points(doc: Document, host: Poset, bottom_default: bool):
    return [(label, values) for label, values in doc.point_values(host, strict=not bottom_default,
                                                                   bottom_default=bottom_default)]


# checks; each takes (report, documents, options) and fills the report

def check_membership(report, docs, opts):
    doc = docs[0]
    host = doc.poset()
    report.info.append(f"poset with {host.n} elements")
    for label, values in _points(doc, host, opts.bottom_default):
        result = delta_membership(host, values)
        if result:
            report.check(f"member {label}", True)
        else:
            names = "{" + ",".join(host.names[x] for x in sorted(result.level_set)) + "}"
            report.check(f"member {label}", False, f"level set at t={_q(result.threshold)} is {names}, not principal")
            report.certificate = report.certificate or {
                "witness": {"point": label, "values": _qs(values), "threshold": _q(result.threshold)}}


def verify_membership(docs, witness, opts) -> bool:
    host = docs[0].poset()
    values = [Fraction(v) for v in witness["values"]]
    t = Fraction(witness["threshold"])
    mask = sum(1 << x for x, v in enumerate(values) if v >= t)
    return host.principal_generator(mask) is None


def check_classify(report, docs, opts):
    l = _lattice(report, docs[0].poset())
    if l is None:
        return
    c = classify(l)

    def names(xs):
        return None if xs is None else [l.names[x] for x in xs]

    detail = f"modular={str(c.is_modular).lower()} distributive={str(c.is_distributive).lower()}"
    report.check("classify", c.consistent, detail)
    if c.m3_witness:
        report.info.append("M3 sublattice: " + " ".join(names(c.m3_witness)))
    if c.n5_witness:
        report.info.append("N5 sublattice: " + " ".join(names(c.n5_witness)))
    report.certificate = {"witness": {
        "modular": c.is_modular, "distributive": c.is_distributive,
        "m3": names(c.m3_witness), "n5": names(c.n5_witness),
        "modular_violation": names(c.modular_witness), "distributive_violation": names(c.distributive_witness),
    }}


def verify_classify(docs, w, opts) -> bool:
    l = lattice_from_poset(docs[0].poset())

    def idx(xs):
        return [l.index(x) for x in xs]

    ok = True
    for key, pattern in (("m3", presets.m3()), ("n5", presets.n5())):
        if w[key] is not None:
            ok &= verify_embedding(l, pattern, idx(w[key]))
    if w["modular_violation"] is not None:
        x, y, z = idx(w["modular_violation"])
        ok &= l.leq(x, z) and l.join(x, l.meet(y, z)) != l.meet(l.join(x, y), z)
    if w["distributive_violation"] is not None:
        x, y, z = idx(w["distributive_violation"])
        ok &= l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z))
    if w["modular"]:
        ok &= w["n5"] is None and modular_violation(l) is None
    if w["distributive"]:
        ok &= w["m3"] is None and w["n5"] is None and distributive_violation(l) is None
    return ok


def check_breadth(report, docs, opts):
    l = _lattice(report, docs[0].poset())
    if l is None:
        return
    size, witness = breadth(l, opts.limit)
    names = [l.names[x] for x in witness]
    report.check("breadth", is_meet_irredundant(l, witness), f"{size}, witness {{{','.join(names)}}}")
    length = longest_chain_length(l)
    chain = next(ch for ch in l.maximal_chains if len(ch) == length + 1)
    coefficients = [Fraction(length - i, length + 1) for i in range(length)]
    family = breadth_family(l, chain, coefficients)
    report.check("complex breadth family", family_irredundant(family) and len(family) == length,
                 f"{len(family)} irredundant points along {' < '.join(l.names[x] for x in chain)}")
    recovered = extract_chain(family)
    report.check("chain extraction", len(recovered) == length + 1,
                 "recovered " + " < ".join(l.names[x] for x in recovered))
    report.certificate = {"witness": {"elements": names, "size": size}}


def verify_breadth(docs, w, opts) -> bool:
    l = lattice_from_poset(docs[0].poset())
    elements = [l.index(x) for x in w["elements"]]
    return len(elements) == w["size"] and is_meet_irredundant(l, elements)


AXIOMS = {
    "meet idempotent": lambda f, g, h: f & f == f,
    "join idempotent": lambda f, g, h: f | f == f,
    "meet commutative": lambda f, g, h: f & g == g & f,
    "join commutative": lambda f, g, h: f | g == g | f,
    "meet associative": lambda f, g, h: (f & g) & h == f & (g & h),
    "join associative": lambda f, g, h: (f | g) | h == f | (g | h),
    "absorption": lambda f, g, h: f & (f | g) == f and f | (f & g) == f,
    "order agrees with meet": lambda f, g, h: (f <= g) == (f & g == f),
    "closure": lambda f, g, h: bool(delta_membership(f.host, (f & g).values))
                                and bool(delta_membership(f.host, (f | g).values)),
}


def check_delta_axioms(report, docs, opts):
    l = _lattice(report, docs[0].poset())
    if l is None:
        return
    rng = random.Random(opts.seed)
    failures = {name: None for name in AXIOMS}
    for _ in range(opts.samples):
        f, g, h = (sample_point(l, rng, 8, faces=True) for _ in range(3))
        for name, axiom in AXIOMS.items():
            if failures[name] is None and not axiom(f, g, h):
                failures[name] = (f, g, h)
    for name, bad in failures.items():
        report.check(name, bad is None, f"{opts.samples} sampled triples")
        if bad is not None and report.certificate is None:
            report.certificate = {"witness": {"axiom": name, "points": [_qs(p.values) for p in bad]}}


def verify_delta_axioms(docs, w, opts) -> bool:
    l = lattice_from_poset(docs[0].poset())
    f, g, h = (DeltaPoint(l, [Fraction(v) for v in values]) for values in w["points"])
    return not AXIOMS[w["axiom"]](f, g, h)


def check_delta_s(report, docs, opts):
    doc = docs[0]
    l = _lattice(report, doc.poset())
    if l is None:
        return
    constraints = PairConstraintSet.from_names(l, [(x, y) for x, y, _ in doc.pairs])
    if constraints.dropped:
        report.info.append("implied pairs dropped: " + ", ".join(f"({l.names[x]},{l.names[y]})" for x, y in constraints.dropped))
    ok, edge = delta_s_hasse_edges(constraints)
    report.check("hasse edges", ok, "all present" if ok else f"edge {l.names[edge[0]]}-{l.names[edge[1]]} missing")
    if not ok:
        report.certificate = {"witness": {"edge": [l.names[edge[0]], l.names[edge[1]]]}}
    rng = random.Random(opts.seed)
    bad = None
    for _ in range(opts.samples):
        f, g = pairs_sample(constraints, rng), pairs_sample(constraints, rng)
        for op, result in (("meet", f & g), ("join", f | g)):
            if bad is None and not delta_s_membership(constraints, result):
                bad = (op, f, g)
    report.check("closed under meet and join", bad is None, f"{opts.samples} sampled member pairs")
    if bad is not None and report.certificate is None:
        report.certificate = {"witness": {"op": bad[0], "f": _qs(bad[1].values), "g": _qs(bad[2].values)}}


def verify_delta_s(docs, w, opts) -> bool:
    doc = docs[0]
    l = lattice_from_poset(doc.poset())
    constraints = PairConstraintSet.from_names(l, [(x, y) for x, y, _ in doc.pairs])
    if "edge" in w:
        p, q = (l.index(x) for x in w["edge"])
        band = l.down_mask(q) & ~l.down_mask(p)
        return l.covers.count((p, q)) == 1 and any((band >> x) & 1 and (band >> y) & 1 for x, y in constraints.pairs)
    f, g = (DeltaPoint(l, [Fraction(v) for v in w[k]]) for k in ("f", "g"))
    result = f & g if w["op"] == "meet" else f | g
    return delta_s_membership(constraints, f) and delta_s_membership(constraints, g) and not delta_s_membership(constraints, result)


def _thick_space(doc: Document) -> ThickenedSpace:
    system, added = doc.closure_system()
    if doc.c is None:
        raise ParseError("no 'c:' line")
    table = {}
    for ys, z, value, line in doc.pairwise:
        try:
            table[(system.mask(ys), system.index(z))] = value
        except OrderError as exc:
            raise ParseError(str(exc), line) from exc
    return ThickenedSpace(system, doc.c, table)


def _ground_points(doc: Document, system: ClosureSystem):
    out = []
    for k, pl in enumerate(doc.points):
        unknown = [x for x in pl.assignments if x not in system.ground]
        if unknown:
            raise ParseError(f"unknown ground element {unknown[0]!r}", pl.line)
        missing = [x for x in system.ground if x not in pl.assignments]
        if missing:
            raise ParseError(f"point has no value for {missing[0]!r}", pl.line)
        out.append((pl.label or f"p{k}", tuple(pl.assignments[x] for x in system.ground)))
    return out


def check_thicken(report, docs, opts):
    space = _thick_space(docs[0])
    system = space.system
    report.info.append(f"ground {{{','.join(system.ground)}}}, {len(system.closed)} closed sets, c={_q(space.c)}")
    for label, values in _ground_points(docs[0], system):
        result = thick_membership(space, values)
        where = "" if result else f" (fails at t={_q(result.threshold)})"
        report.info.append(f"point {label} member={str(result.ok).lower()}{where}")
    rng = random.Random(opts.seed)
    bad = {}
    brute = system.n <= 4
    for _ in range(opts.samples):
        f, g = thick_sample(space, rng), thick_sample(space, rng)
        meet, join = thick_meet(space, f, g), thick_join(space, f, g)
        if not thick_membership(space, join) or any(j < max(a, b) for j, a, b in zip(join, f, g)):
            bad.setdefault("join is an upper bound", (f, g))
        if brute and thick_join_bruteforce(space, f, g) != join:
            bad.setdefault("join is least", (f, g))
        if not thick_membership(space, meet):
            bad.setdefault("meet is a member", (f, g))
    names = ["meet is a member", "join is an upper bound"] + (["join is least"] if brute else [])
    for name in names:
        report.check(name, name not in bad, f"{opts.samples} sampled member pairs")
    if bad and report.certificate is None:
        name, (f, g) = next(iter(bad.items()))
        report.certificate = {"witness": {"property": name, "f": _qs(f), "g": _qs(g)}}


def check_edmondson(report, docs, opts):
    rng = random.Random(opts.seed)
    if docs:
        l = _lattice(report, docs[0].poset())
        if l is None:
            return
        if find_isomorphism(presets.n5(), l) is None:
            raise InputError("edmondson check on a lattice needs a pentagon")
        space = ed.pentagon_instance(opts.seed)
        mismatch = None
        for _ in range(opts.samples):
            # half the candidates are band members, half arbitrary
            if rng.random() < 0.5:
                pair = ed.sample_member(space, rng)
            else:
                pair = (ed.sample_cube_point(space, rng), Fraction(rng.randint(0, 8), 8))
            values = ed.pair_to_pentagon_values(l, pair)
            if bool(delta_membership(l, values)) != ed.edmondson_membership(space, pair) and mismatch is None:
                mismatch = values
        report.check("complex equals band description", mismatch is None, f"{opts.samples} sampled points")
        if mismatch is not None:
            report.certificate = {"witness": {"values": _qs(mismatch)}}
        return
    space = ed.classic_instance(opts.seed)
    witnesses = pentagons = 0
    bad_ops = None
    for _ in range(opts.samples):
        x, x2 = ed.sample_cube_point(space, rng), ed.sample_cube_point(space, rng)
        w = ed.edmondson_n5_witness(space, x, x2)
        if w is not None:
            witnesses += 1
            closure, _ = ed.edmondson_generated_sublattice(space, [w.low, w.high, w.side])
            pentagons += find_isomorphism(closure, presets.n5()) is not None
        p, q = ed.sample_member(space, rng), ed.sample_member(space, rng)
        meet, join = ed.edmondson_ops(space, p, q)
        upper, lower = ed.sample_upper_bound(space, p, q, rng), ed.sample_lower_bound(space, p, q, rng)
        ok = (ed.edmondson_membership(space, meet) and ed.edmondson_membership(space, join)
              and ed.edmondson_leq(space, join, upper) and ed.edmondson_leq(space, lower, meet)
              and all(ed.edmondson_leq(space, meet, r) and ed.edmondson_leq(space, r, join) for r in (p, q)))
        if not ok and bad_ops is None:
            bad_ops = (p, q)
    report.check("pentagon witnesses close to N5", pentagons == witnesses, f"{pentagons}/{witnesses} witnesses")
    report.check("meet and join are bounds", bad_ops is None, f"{opts.samples} sampled pairs")
    if bad_ops is not None:
        report.certificate = {"witness": {"p": repr(bad_ops[0]), "q": repr(bad_ops[1])}}


def check_stitch(report, docs, opts):
    parts = [d.poset() for d in docs]
    parts = [lattice_from_poset(p) if _as_lattice(p) else p for p in parts]
    if len(parts) < 2:
        raise InputError("stitch needs at least two parts")
    first = parts[0]
    shared = opts.shared.split(",") if opts.shared else [first.names[first.bottom], first.names[first.top]]
    family = StitchFamily(parts, shared)
    stitched = stitch(family)
    report.info.append("stitched: " + " ".join(stitched.names) + " | "
                       + " ".join(f"{stitched.names[a]}<{stitched.names[b]}" for a, b in stitched.covers))
    cross = [(a, b) for a in family.names for b in family.names
             if family.owner(a) is not None and family.owner(b) is not None and family.owner(a) != family.owner(b)]
    uneven = [(a, b) for a, b in cross if len(set(family.order_conditions(a, b))) != 1]
    report.check("order conditions agree", not uneven, f"{len(cross)} cross-part pairs")
    if isinstance(stitched, Lattice):
        c = classify(stitched)
        report.info.append(f"modular={str(c.is_modular).lower()} distributive={str(c.is_distributive).lower()}")
        for label, pattern in (("2x2", presets.boolean(2)), ("N5", presets.n5()), ("M3", presets.m3())):
            if find_isomorphism(stitched, pattern) is not None:
                report.info.append(f"isomorphic to {label}")
    if list(shared) == [first.names[first.bottom], first.names[first.top]]:
        result = stitch_delta_check(parts, opts.samples, opts.seed)
        report.check("complex is the union of the parts", result.ok,
                     f"facets per part {result.facets_per_part}, {opts.samples} samples")
    if uneven:
        report.certificate = {"witness": {"pair": list(uneven[0])}}


def check_product_iso(report, docs, opts):
    if len(docs) != 2:
        raise InputError("product-iso needs exactly two inputs")
    p, q = docs[0].poset(), docs[1].poset()
    rng = random.Random(opts.seed)
    trip = order = None
    for _ in range(opts.samples):
        fp, gp = sample_point(p, rng, 8, True), sample_point(p, rng, 8, True)
        fq, gq = sample_point(q, rng, 8, True), sample_point(q, rng, 8, True)
        F, G = product_iso(fp, fq), product_iso(gp, gq)
        if product_iso_inverse(F, p, q) != (fp, fq) and trip is None:
            trip = (fp, fq)
        if ((fp <= gp and fq <= gq) != (F <= G)) and order is None:
            order = (fp, gp, fq, gq)
    report.check("round trip", trip is None, f"{opts.samples} sampled pairs")
    report.check("order preserved and reflected", order is None, f"{opts.samples} sampled pairs")
    bad = trip or order
    if bad:
        report.certificate = {"witness": {"points": [_qs(f.values) for f in bad]}}


def _load_map(domain: Poset, text: str) -> PosetMap:
    doc = parse_document(text)
    codomain = doc.poset()
    mapping = {}
    for x, y, line in doc.maps:
        if x not in domain._index or y not in codomain._index:
            raise ParseError(f"unknown element in map line {x} -> {y}", line)
        if x in mapping:
            raise ParseError(f"{x!r} mapped twice", line)
        mapping[x] = y
    return PosetMap.from_names(domain, codomain, mapping)


def check_functor(report, docs, opts):
    if opts.map_text is None:
        raise InputError("functor needs --map")
    domain = docs[0].poset()
    h = _load_map(domain, opts.map_text)
    bad = h.isotone_violation()
    report.check("isotone", bad is None, "" if bad is None else f"{domain.names[bad[0]]} <= {domain.names[bad[1]]} not preserved")
    if bad is not None:
        report.certificate = {"witness": {"pair": [domain.names[bad[0]], domain.names[bad[1]]]}}
        return
    rng = random.Random(opts.seed)
    lattices = isinstance(h.domain, Lattice) and isinstance(h.codomain, Lattice)
    if not lattices:
        lattices = all(_as_lattice(x) for x in (h.domain, h.codomain))
        if lattices:
            h = PosetMap(lattice_from_poset(h.domain), lattice_from_poset(h.codomain), h.images)
    if lattices and h.homomorphism_violation() is None:
        broken = None
        for _ in range(opts.samples):
            f, g = sample_point(h.domain, rng, 8, True), sample_point(h.domain, rng, 8, True)
            cf, cg = functor_map(h, f), functor_map(h, g)
            if (functor_map(h, f | g) != cf | cg or functor_map(h, f & g) != cf & cg) and broken is None:
                broken = (f, g)
        report.check("covariant map preserves meet and join", broken is None, f"{opts.samples} sampled pairs")
    else:
        report.info.append("map is not a lattice homomorphism; covariant preservation not checked")
    q = prin_prin_violation(h)
    if q is not None:
        report.info.append(f"contravariant map undefined: preimage of down({h.codomain.names[q]}) is not principal")
        return
    if not lattices:
        return
    meets = None
    join_example = None
    for _ in range(opts.samples):
        f, g = sample_point(h.codomain, rng, 8, True), sample_point(h.codomain, rng, 8, True)
        cf, cg = functor_map(h, f, "contravariant"), functor_map(h, g, "contravariant")
        if functor_map(h, f & g, "contravariant") != cf & cg and meets is None:
            meets = (f, g)
        if join_example is None and functor_map(h, f | g, "contravariant") != cf | cg:
            join_example = (f, g)
    report.check("contravariant map preserves meets", meets is None, f"{opts.samples} sampled pairs")
    if join_example:
        f, g = join_example
        report.info.append(f"contravariant joins differ, e.g. f={' '.join(_qs(f.values))} g={' '.join(_qs(g.values))}")
    if meets is not None:
        report.certificate = {"witness": {"f": _qs(meets[0].values), "g": _qs(meets[1].values)}}


def _as_lattice(p: Poset) -> bool:
    try:
        lattice_from_poset(p)
        return True
    except NotALattice:
        return False


def check_gamma(report, docs, opts):
    host = MOmega()
    cost = momega_cost(host)
    rng = random.Random(opts.seed)
    fixed = [docs[0].step_function(host)] if docs and docs[0].pieces else []
    failures = {}
    for k in range(opts.samples):
        f, g, h = (sample_step_function(host, rng) for _ in range(3))
        if fixed and k == 0:
            f = fixed[0]
        dfg, dgh, dfh = gamma_metric(f, g, cost), gamma_metric(g, h, cost), gamma_metric(f, h, cost)
        if gamma_metric(f, f, cost) != 0 or (dfg == 0) != (f == g) or dfg != gamma_metric(g, f, cost):
            failures.setdefault("identity and symmetry", (f, g, h))
        if dfh > dfg + dgh:
            failures.setdefault("triangle inequality", (f, g, h))
        s = Fraction(rng.randint(1, 15), 16)
        if (gamma_eventual_value(gamma_join(f, g), s) != host.join(gamma_eventual_value(f, s), gamma_eventual_value(g, s))
                or gamma_eventual_value(gamma_meet(f, g), s) != host.meet(gamma_eventual_value(f, s), gamma_eventual_value(g, s))):
            failures.setdefault("evaluation is a homomorphism", (f, g, h))
        eps = Fraction(1, 2)
        value = host.atom(rng.randint(0, 5))
        bump = StepFunction.constant(host, value)
        m = max(cost_bound(f, cost), cost_bound(g, cost), cost(value))
        delta = eps / (4 * m)
        start = Fraction(rng.randint(0, 7), 8)
        f2 = overwrite(f, start, start + delta / (4 * m), value)
        g2 = overwrite(g, start, start + delta / (4 * m), value)
        close = gamma_metric(f, f2, cost) < delta and gamma_metric(g, g2, cost) < delta
        if close and not (gamma_metric(gamma_join(f, g), gamma_join(f2, g2), cost) < eps
                          and gamma_metric(gamma_meet(f, g), gamma_meet(f2, g2), cost) < eps):
            failures.setdefault("continuity of meet and join", (f, g, bump))
    for name in ("identity and symmetry", "triangle inequality", "evaluation is a homomorphism",
                 "continuity of meet and join"):
        report.check(name, name not in failures, f"{opts.samples} sampled triples")
    if failures:
        name, fs = next(iter(failures.items()))
        report.certificate = {"witness": {"property": name, "functions": [_pieces(f) for f in fs]}}


RUNNERS = {
    "membership": (check_membership, verify_membership),
    "classify": (check_classify, verify_classify),
    "breadth": (check_breadth, verify_breadth),
    "delta-axioms": (check_delta_axioms, verify_delta_axioms),
    "delta-s": (check_delta_s, verify_delta_s),
    "thicken": (check_thicken, None),
    "edmondson": (check_edmondson, None),
    "stitch": (check_stitch, None),
    "product-iso": (check_product_iso, None),
    "functor": (check_functor, None),
    "gamma": (check_gamma, None),
}
NEEDS_INPUT = {"membership", "classify", "breadth", "delta-axioms", "delta-s", "thicken", "stitch",
               "product-iso", "functor"}


@dataclass
class Options:
    seed: int = 0
    samples: int = 200
    limit: int = 16
    bottom_default: bool = False
    shared: str | None = None
    map_text: str | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def run_check(name: str, texts: list[str], opts: Options, command: str = "") -> RunReport:
    if name not in RUNNERS:
        raise InputError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    if name in NEEDS_INPUT and not texts:
        raise InputError(f"check {name} needs an input")
    docs = [parse_document(t) for t in texts]
    report = RunReport(command or f"check {name}")
    RUNNERS[name][0](report, docs, opts)
    report.certificate = {
        "kind": "check", "check": name, "inputs": texts, "options": opts.to_json(),
        "verdict": "pass" if report.ok else "fail", **(report.certificate or {}),
    }
    return report


# step-function serialization for certificates

def _pieces(f: StepFunction) -> list[list[str]]:
    return [[_q(a), _q(b), f.host.format_element(v)] for a, b, v in f.pieces()]


def _from_pieces(host, pieces) -> StepFunction:
    return StepFunction.from_pieces(host, [(parse_rational(a), parse_rational(b), host.parse_element(v))
                                           for a, b, v in pieces])


# witnesses

def run_witness(kind: str, opts: argparse.Namespace, r_text: str | None) -> RunReport:
    report = RunReport(f"witness {kind}")
    if kind == "edmondson":
        return _edmondson_witness(report, opts)
    host = MOmega()
    cost = momega_cost(host)
    eps, target = parse_rational(opts.eps), parse_rational(opts.target)
    if r_text is not None:
        r = parse_document(r_text).step_function(host)
    else:
        r = StepFunction.constant(host, {"gamma-interval": "x1", "gamma-join": "0", "gamma-meet": "1"}[kind])
    report.info.append(f"r = {_fmt_step(r)}")
    if kind == "gamma-interval":
        w = witness_unbounded_interval(r, eps, target, cost)
        report.info += [f"I = [0, {_q(w.width)}), element {w.element}",
                        f"p = {_fmt_step(w.p)}", f"q = {_fmt_step(w.q)}", f"s = {_fmt_step(w.s)}"]
        report.check("d(p,r) < eps", w.distance_p < eps, _q(w.distance_p))
        report.check("d(q,r) < eps", w.distance_q < eps, _q(w.distance_q))
        report.check("d(s,r) >= target", w.distance_s >= target, _q(w.distance_s))
        report.check("p <= s <= q", gamma_leq(w.p, w.s) and gamma_leq(w.s, w.q))
        report.certificate = {"kind": kind, "eps": _q(eps), "target": _q(target), "r": _pieces(r),
                              "p": _pieces(w.p), "q": _pieces(w.q), "s": _pieces(w.s),
                              "width": _q(w.width), "element": w.element,
                              "distances": {"p": _q(w.distance_p), "q": _q(w.distance_q), "s": _q(w.distance_s)}}
    else:
        op = "join" if kind == "gamma-join" else "meet"
        w = witness_unbounded_join(r, eps, target, cost, op)
        report.info += [f"I = [0, {_q(w.width)}), N = {w.subdivisions}, element {w.element}, {len(w.pieces)} pieces",
                        f"{op} = {_fmt_step(w.combined)}"]
        report.check("every piece within eps", w.max_piece_distance < eps, f"max {_q(w.max_piece_distance)}")
        report.check(f"d({op},r) >= target", w.distance >= target, _q(w.distance))
        report.certificate = {"kind": kind, "eps": _q(eps), "target": _q(target), "r": _pieces(r),
                              "pieces": [_pieces(f) for f in w.pieces], "combined": _pieces(w.combined),
                              "width": _q(w.width), "subdivisions": w.subdivisions, "element": w.element,
                              "distance": _q(w.distance)}
    report.certificate["verdict"] = "pass" if report.ok else "fail"
    return report


def _fmt_step(f: StepFunction) -> str:
    return " ".join(f"[{_q(a)},{_q(b)}):{v}" for a, b, v in f.pieces())


def _edmondson_witness(report: RunReport, opts) -> RunReport:
    space = ed.classic_instance(opts.seed)
    cube = space.base_l
    if opts.x is not None:
        x, x2 = cube.parse_element(opts.x), cube.parse_element(opts.x2 or opts.x)
        w = ed.edmondson_n5_witness(space, x, x2)
    else:
        grid = [(Fraction(a, 4), Fraction(b, 4)) for a in range(5) for b in range(5)]
        x, x2, w = next(((x, x2, ed.edmondson_n5_witness(space, x, x2)) for x, x2 in itertools.product(grid, grid)
                         if ed.edmondson_n5_witness(space, x, x2) is not None))
    if w is None:
        report.check("pentagon found", False, f"no witness for x={cube.format_element(x)} x2={cube.format_element(x2)}")
        return report
    closure, elements = ed.edmondson_generated_sublattice(space, [w.low, w.high, w.side])
    fmt = _fmt_pair(space)
    report.info += [f"x = {cube.format_element(x)}, x2 = {cube.format_element(x2)}, branch {w.branch}",
                    f"low {fmt(w.low)}, high {fmt(w.high)}, side {fmt(w.side)}"]
    report.check("closure is a pentagon", find_isomorphism(closure, presets.n5()) is not None,
                 f"{closure.n} elements")
    report.certificate = {"kind": "edmondson", "seed": opts.seed, "x": cube.format_element(x),
                          "x2": cube.format_element(x2), "branch": w.branch,
                          "low": fmt(w.low), "high": fmt(w.high), "side": fmt(w.side),
                          "verdict": "pass" if report.ok else "fail"}
    return report


def _fmt_pair(space):
    return lambda p: f"{space.base_l.format_element(p[0])};{space.base_m.format_element(p[1])}"


def _parse_pair(space, text):
    a, b = text.split(";")
    return (space.base_l.parse_element(a), space.base_m.parse_element(b))


# replay

def replay(cert: dict) -> RunReport:
    kind = cert.get("kind")
    verdict = cert.get("verdict")
    report = RunReport(f"replay {kind}")
    if kind == "check":
        name = cert["check"]
        opts = Options(**cert["options"])
        docs = [parse_document(t) for t in cert["inputs"]]
        verifier = RUNNERS[name][1]
        if "witness" in cert and "missing" in cert["witness"]:
            report.check("missing bound verifies", verify_missing_bound(docs, cert["witness"]))
        elif verifier is not None and "witness" in cert:
            ok = verifier(docs, cert["witness"], opts)
            report.check(f"{name} witness verifies", ok)
        else:
            again = run_check(name, cert["inputs"], opts)
            report.check(f"{name} reproduces verdict {verdict}", ("pass" if again.ok else "fail") == verdict)
        return report
    if kind in ("gamma-interval", "gamma-join", "gamma-meet"):
        host = MOmega()
        cost = momega_cost(host)
        eps, target = parse_rational(cert["eps"]), parse_rational(cert["target"])
        r = _from_pieces(host, cert["r"])
        if kind == "gamma-interval":
            p, q, s = (_from_pieces(host, cert[k]) for k in "pqs")
            d = {k: gamma_metric(f, r, cost) for k, f in (("p", p), ("q", q), ("s", s))}
            report.check("distances match", all(_q(d[k]) == cert["distances"][k] for k in d))
            report.check("p <= s <= q", gamma_leq(p, s) and gamma_leq(s, q))
            report.check("bounds hold", d["p"] < eps and d["q"] < eps and d["s"] >= target)
        else:
            pieces = [_from_pieces(host, f) for f in cert["pieces"]]
            fold = gamma_join if kind == "gamma-join" else gamma_meet
            acc = pieces[0]
            for f in pieces[1:]:
                acc = fold(acc, f)
            report.check("combined value matches", acc == _from_pieces(host, cert["combined"]))
            report.check("pieces within eps", all(gamma_metric(f, r, cost) < eps for f in pieces))
            d = gamma_metric(acc, r, cost)
            report.check("distance matches", _q(d) == cert["distance"] and d >= target)
        return report
    if kind == "edmondson":
        space = ed.classic_instance(cert.get("seed", 0))
        gens = [_parse_pair(space, cert[k]) for k in ("low", "high", "side")]
        report.check("generators are members", all(ed.edmondson_membership(space, g) for g in gens))
        closure, _ = ed.edmondson_generated_sublattice(space, gens)
        report.check("closure is a pentagon", find_isomorphism(closure, presets.n5()) is not None)
        return report
    raise InputError(f"unknown certificate kind {kind!r}")


# eval

class _Evaluator:
    def __init__(self, points: dict, h: PosetMap | None):
        self.points = points
        self.h = h

    def __call__(self, node):
        if isinstance(node, ast.Expression):
            return self(node.body)
        if isinstance(node, ast.Name):
            if node.id not in self.points:
                raise InputError(f"unknown point {node.id!r}")
            host, values = self.points[node.id]
            return DeltaPoint(host, values)
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.BitAnd, ast.BitOr)):
            left, right = self(node.left), self(node.right)
            return delta_meet(left, right) if isinstance(node.op, ast.BitAnd) else delta_join(left, right)
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in ("cov", "contra")
                and len(node.args) == 1 and not node.keywords):
            if self.h is None:
                raise InputError(f"{node.func.id}() needs --map")
            variance = "covariant" if node.func.id == "cov" else "contravariant"
            return functor_map(self.h, self(node.args[0]), variance)
        raise InputError(f"unsupported expression {ast.unparse(node)!r}; use names, &, |, cov(), contra()")


def run_eval(text: str, expression: str, map_text: str | None, bottom_default: bool) -> str:
    doc = parse_document(text)
    host = doc.poset()
    # points are validated when an expression uses them
    points = {label: (host, values) for label, values in _points(doc, host, bottom_default)}
    h = None
    if map_text is not None:
        h = _load_map(host, map_text)
        codomain_doc = parse_document(map_text)
        for label, values in _points(codomain_doc, h.codomain, bottom_default):
            if label in points:
                raise InputError(f"point label {label!r} used in both files")
            points[label] = (h.codomain, values)
    try:
        tree = ast.parse(expression, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse expression: {exc.msg}") from exc
    return format_point(_Evaluator(points, h)(tree), "result")


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordercomplex", description="Order complexes of finite lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a named check on one or more inputs")
    check.add_argument("name", nargs="?", choices=CHECKS)
    check.add_argument("inputs", nargs="*", help="file path or preset:NAME")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--samples", type=int, default=200)
    check.add_argument("--limit", type=int, default=16, help="element cap for exhaustive searches")
    check.add_argument("--replay", metavar="CERT", help="verify a certificate instead of running a check")
    check.add_argument("--map", metavar="FILE", help="codomain poset with 'map: x y' lines")
    check.add_argument("--shared", help="comma-separated shared chain for stitch")
    check.add_argument("--bottom-default", action="store_true", help="points may omit the least element (value 1)")
    check.add_argument("--json", action="store_true", help="print the report as JSON")
    check.add_argument("--cert-out", metavar="FILE", help="write the certificate here")

    export = sub.add_parser("export", help="write a DOT Hasse diagram or an OFF mesh")
    export.add_argument("input")
    export.add_argument("--format", choices=("dot", "off"), default="dot")
    export.add_argument("-o", "--output", help="output file (default stdout)")

    ev = sub.add_parser("eval", help="evaluate an expression over labelled points")
    ev.add_argument("input")
    ev.add_argument("expression", help="e.g. '(f | g) & h' or 'cov(f)'")
    ev.add_argument("--map", metavar="FILE")
    ev.add_argument("--bottom-default", action="store_true")

    wit = sub.add_parser("witness", help="run a witness generator")
    wit.add_argument("kind", choices=WITNESSES)
    wit.add_argument("--r", metavar="FILE", help="step-function file for the base point")
    wit.add_argument("--eps", default="1/10")
    wit.add_argument("--target", default="10")
    wit.add_argument("--x", help="first coordinate, e.g. 1/2,1/4")
    wit.add_argument("--x2")
    wit.add_argument("--seed", type=int, default=0)
    wit.add_argument("--json", action="store_true")
    wit.add_argument("--cert-out", metavar="FILE")
    return parser


def _emit(report: RunReport, args) -> int:
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render(show_certificate=not report.ok and not args.cert_out))
    if args.cert_out and report.certificate is not None:
        Path(args.cert_out).write_text(json.dumps(report.certificate, indent=2, sort_keys=True) + "\n")
    return report.exit_code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = "ordercomplex " + " ".join(sys.argv[1:] if argv is None else argv)
    try:
        if args.command == "check":
            if args.replay:
                try:
                    cert = json.loads(Path(args.replay).read_text())
                except (OSError, ValueError) as exc:
                    raise InputError(f"cannot read certificate: {exc}") from exc
                report = replay(cert)
                report.command = command
                args.cert_out = None
                return _emit(report, args)
            if args.name is None:
                raise InputError("check needs a name or --replay")
            opts = Options(args.seed, args.samples, args.limit, args.bottom_default, args.shared,
                           read_source(args.map) if args.map else None)
            report = run_check(args.name, [read_source(s) for s in args.inputs], opts, command)
            return _emit(report, args)
        if args.command == "export":
            p = parse_document(read_source(args.input)).poset()
            text = to_dot(p) if args.format == "dot" else to_off(p)
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_PASS
        if args.command == "eval":
            sys.stdout.write(run_eval(read_source(args.input), args.expression,
                                      read_source(args.map) if args.map else None, args.bottom_default))
            return EXIT_PASS
        if args.command == "witness":
            r_text = read_source(args.r) if args.r else None
            report = run_witness(args.kind, args, r_text)
            report.command = command
            return _emit(report, args)
    except SizeLimitExceeded as exc:
        print(f"error: SizeLimitExceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, OrderError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT
