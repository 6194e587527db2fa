"""Deciding whether edges can be traded back for base paths.

A structure is univalent when, on every hom-set, the path-to-edge table
induces a bijection from paths onto the cells of the edges.  The witness is
a table sending each edge to the unique path whose image lands in its cell;
in this strict model the table is forced, and it always sends designated
eqv edges to refl.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Budget, Typoid, ValidationReport, Violation, validate_typoid
from .morphisms import TypoidMorphism


@dataclass(frozen=True)
class UnivalenceCertificate:
    typoid_name: str
    ua: tuple[int, ...]
    strict: bool


@dataclass(frozen=True)
class NotUnivalent:
    """Why the path-to-cell map fails to be a bijection on some hom-set.

    reason is "not-injective" (two paths, one cell: witness_paths) or
    "not-surjective" (a cell no path reaches: witness_edge is its
    representative).
    """

    typoid_name: str
    reason: str
    hom: tuple[int, int]
    witness_paths: tuple[int, int] | None = None
    witness_edge: int | None = None


class NotUnivalentError(Exception):
    def __init__(self, witness: NotUnivalent):
        hom = witness.hom
        super().__init__(
            f"typoid {witness.typoid_name!r} is not univalent: {witness.reason} on hom {hom}"
        )
        self.witness = witness


def check_univalence(t: Typoid, budget: Budget | None = None):
    """Decision procedure: returns a UnivalenceCertificate or a NotUnivalent
    witness.  Rejects structures that fail validate_typoid."""
    budget = budget or Budget()
    report = validate_typoid(t, budget)
    if not report.valid:
        first = report.violations[0]
        raise ValueError(
            f"typoid {t.name!r} is invalid ({len(report.violations)} violations; "
            f"first: {first.law} {first.detail})"
        )

    base, layer = t.base, t.layer
    ua = [0] * layer.edge_count
    for x in range(t.term_count):
        for y in range(t.term_count):
            paths = base.hom(x, y)
            edges = layer.hom(x, y)
            budget.spend(len(paths) + len(edges))
            path_of_class: dict[int, int] = {}
            for p in paths:
                rep = layer.cell[t.idtoeqv[p]]
                if rep in path_of_class:
                    return NotUnivalent(
                        typoid_name=t.name,
                        reason="not-injective",
                        hom=(x, y),
                        witness_paths=(path_of_class[rep], p),
                    )
                path_of_class[rep] = p
            for e in edges:
                if layer.cell[e] not in path_of_class:
                    return NotUnivalent(
                        typoid_name=t.name,
                        reason="not-surjective",
                        hom=(x, y),
                        witness_edge=layer.cell[e],
                    )
            for e in edges:
                ua[e] = path_of_class[layer.cell[e]]

    strict = all(ua[layer.eqv[x]] == base.refl[x] for x in range(t.term_count))
    # Forced: the class map sends refl's image cell back to refl itself.
    assert strict, "synthesized table must send designated eqv edges to refl"
    return UnivalenceCertificate(typoid_name=t.name, ua=tuple(ua), strict=True)


def verify_certificate(
    t: Typoid, c: UnivalenceCertificate, budget: Budget | None = None
) -> ValidationReport:
    """Exhaustively check both round-trips and that the table is constant on
    cells; also checks endpoint bookkeeping and the strictness flag."""
    budget = budget or Budget()
    base, layer = t.base, t.layer
    violations: list[Violation] = []
    counts: dict[str, int] = {}

    if len(c.ua) != layer.edge_count:
        violations.append(
            Violation("Bookkeeping", (), f"table has {len(c.ua)} entries for {layer.edge_count} edges")
        )
        return ValidationReport.collect(violations, counts)
    for e in range(layer.edge_count):
        p = c.ua[e]
        if not 0 <= p < base.path_count:
            violations.append(Violation("Bookkeeping", (e,), f"edge {e} maps to out-of-range path {p}"))
            return ValidationReport.collect(violations, counts)
        if (base.path_src[p], base.path_dst[p]) != (layer.edge_src[e], layer.edge_dst[e]):
            violations.append(Violation("Bookkeeping", (e, p), f"image of edge {e} has wrong endpoints"))
            return ValidationReport.collect(violations, counts)

    rt1 = base.path_count
    for p in range(base.path_count):
        if c.ua[t.idtoeqv[p]] != p:
            violations.append(
                Violation("RoundTrip1", (p,), f"path {p} does not come back from its edge image")
            )
    counts["RoundTrip1"] = rt1

    rt2 = layer.edge_count
    for e in range(layer.edge_count):
        if layer.cell[t.idtoeqv[c.ua[e]]] != layer.cell[e]:
            violations.append(
                Violation("RoundTrip2", (e,), f"edge {e} does not come back into its own cell")
            )
    counts["RoundTrip2"] = rt2

    cong = 0
    for members in layer.class_members.values():
        for e in members:
            for d in members:
                cong += 1
                if c.ua[e] != c.ua[d]:
                    violations.append(
                        Violation("UaCong", (e, d), f"{e} and {d} share a cell but map to different paths")
                    )
    counts["UaCong"] = cong

    strict = all(c.ua[layer.eqv[x]] == base.refl[x] for x in range(t.term_count))
    counts["Strictness"] = t.term_count
    if c.strict != strict:
        violations.append(
            Violation("Strictness", (), f"flag says strict={c.strict} but the table says {strict}")
        )
    budget.spend(rt1 + rt2 + cong + t.term_count)

    return ValidationReport.collect(violations, counts)


def induce_morphism(
    src: Typoid,
    dst: Typoid,
    term_map: tuple[int, ...],
    path_map: tuple[int, ...],
    name: str | None = None,
) -> TypoidMorphism:
    """Build the edge action of an arbitrary term map out of a univalent
    source: trade each edge for a path, push it through the base functor,
    and read the result back as an edge of the destination.

    Raises NotUnivalentError when the source admits no witness table.
    """
    cert = check_univalence(src)
    if isinstance(cert, NotUnivalent):
        raise NotUnivalentError(cert)
    edge_map = tuple(
        dst.idtoeqv[path_map[cert.ua[e]]] for e in range(src.layer.edge_count)
    )
    return TypoidMorphism(
        name=name or f"induced_{src.name}_to_{dst.name}",
        source=src,
        target=dst,
        term_map=tuple(term_map),
        path_map=tuple(path_map),
        edge_map=edge_map,
    )


def check_square(
    m: TypoidMorphism,
    c_dst: UnivalenceCertificate,
    c_src: UnivalenceCertificate | None = None,
    budget: Budget | None = None,
) -> ValidationReport:
    """The path square: pushing a path down to an edge, across the morphism
    and back up to a path agrees with the base functor.  When a source
    certificate is supplied, the edge square is checked as well."""
    budget = budget or Budget()
    src = m.source
    violations: list[Violation] = []
    counts: dict[str, int] = {}

    n = src.base.path_count
    for p in range(n):
        got = c_dst.ua[m.edge_map[src.idtoeqv[p]]]
        if got != m.path_map[p]:
            violations.append(
                Violation("Square", (p,), f"path {p} travels to {got}, the base functor gives {m.path_map[p]}")
            )
    counts["Square"] = n

    extra = 0
    if c_src is not None:
        extra = src.layer.edge_count
        for e in range(extra):
            if c_dst.ua[m.edge_map[e]] != m.path_map[c_src.ua[e]]:
                violations.append(
                    Violation("Square", (n + e,), f"edge {e} travels to a different path than its witness image")
                )
        counts["SquareEdges"] = extra
    budget.spend(n + extra)

    return ValidationReport.collect(violations, counts)


@dataclass(frozen=True)
class PointedFactorReport:
    cert_a: UnivalenceCertificate | None
    cert_b: UnivalenceCertificate | None
    note_a: str
    note_b: str


def check_pointed_factors(
    prod: Typoid,
    prov,
    a_point: int | None = None,
    b_point: int | None = None,
) -> PointedFactorReport:
    """Certify the factors of a univalent product: a point of one factor
    embeds the other factor's edges into the product, where the product's
    witness table projects back down.

    `prov` is the ProductProvenance returned with the product.  A factor
    with no terms and no supplied point is reported inapplicable.  Points
    default to term 0 when the opposite factor is inhabited.
    """
    cert = check_univalence(prod)
    if isinstance(cert, NotUnivalent):
        raise NotUnivalentError(cert)
    a, b = prov.factors

    def certify(factor: Typoid, point: int | None, other: Typoid, left: bool):
        if point is None:
            if other.term_count == 0:
                return None, "inapplicable: opposite factor is empty and no point was supplied"
            point = 0
        if not 0 <= point < other.term_count:
            raise ValueError(f"point {point} is not a term of {other.name!r}")
        anchor = other.layer.eqv[point]
        ua = []
        for e in range(factor.layer.edge_count):
            pair = (e, anchor) if left else (anchor, e)
            q = cert.ua[prov.pair_edge[pair]]
            p1, p2 = prov.split_path[q]
            ua.append(p1 if left else p2)
        ua_t = tuple(ua)
        strict = all(
            ua_t[factor.layer.eqv[x]] == factor.base.refl[x]
            for x in range(factor.term_count)
        )
        c = UnivalenceCertificate(typoid_name=factor.name, ua=ua_t, strict=strict)
        return c, f"certified via the point {point} of the opposite factor"

    cert_a, note_a = certify(a, b_point, b, left=True)
    cert_b, note_b = certify(b, a_point, a, left=False)
    return PointedFactorReport(cert_a=cert_a, cert_b=cert_b, note_a=note_a, note_b=note_b)
