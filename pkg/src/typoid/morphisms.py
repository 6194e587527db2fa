"""Structure-preserving maps between typoids.

A morphism carries a term map, a strict functor on base paths, and an edge
map that must preserve units and composition up to cells.  The cell action
is a property here, not data: parallel edges in one cell must land in one
cell.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .model import Budget, Typoid, ValidationReport, Violation


@dataclass(frozen=True)
class TypoidMorphism:
    name: str
    source: Typoid
    target: Typoid
    term_map: tuple[int, ...]
    path_map: tuple[int, ...]
    edge_map: tuple[int, ...]


def validate_morphism(
    m: TypoidMorphism, budget: Budget | None = None, check_base: bool = True
) -> ValidationReport:
    """Check endpoint bookkeeping, the base-path functor laws, preservation
    of units and composition up to cells, and cell-respecting edge action.

    Both endpoints are assumed to pass validate_typoid.  `check_base=False`
    skips the base-path functor checks.
    """
    budget = budget or Budget()
    src, dst = m.source, m.target
    violations: list[Violation] = []
    counts: dict[str, int] = {}

    structural = True
    if len(m.term_map) != src.term_count:
        violations.append(
            Violation("Bookkeeping", (), f"term map has {len(m.term_map)} entries for {src.term_count} terms")
        )
        structural = False
    if len(m.path_map) != src.base.path_count:
        violations.append(
            Violation("Bookkeeping", (), f"path map has {len(m.path_map)} entries for {src.base.path_count} paths")
        )
        structural = False
    if len(m.edge_map) != src.layer.edge_count:
        violations.append(
            Violation("Bookkeeping", (), f"edge map has {len(m.edge_map)} entries for {src.layer.edge_count} edges")
        )
        structural = False
    if structural and not all(0 <= y < dst.term_count for y in m.term_map):
        violations.append(Violation("Bookkeeping", (), "term map value out of range"))
        structural = False
    if not structural:
        return ValidationReport.collect(violations, counts)

    for p in range(src.base.path_count):
        q = m.path_map[p]
        if not 0 <= q < dst.base.path_count:
            violations.append(Violation("Bookkeeping", (p,), f"path {p} maps to out-of-range path {q}"))
            structural = False
        elif (dst.base.path_src[q], dst.base.path_dst[q]) != (
            m.term_map[src.base.path_src[p]],
            m.term_map[src.base.path_dst[p]],
        ):
            violations.append(Violation("Bookkeeping", (p, q), f"image of path {p} has wrong endpoints"))
            structural = False
    for e in range(src.layer.edge_count):
        d = m.edge_map[e]
        if not 0 <= d < dst.layer.edge_count:
            violations.append(Violation("Bookkeeping", (e,), f"edge {e} maps to out-of-range edge {d}"))
            structural = False
        elif (dst.layer.edge_src[d], dst.layer.edge_dst[d]) != (
            m.term_map[src.layer.edge_src[e]],
            m.term_map[src.layer.edge_dst[e]],
        ):
            violations.append(Violation("Bookkeeping", (e, d), f"image of edge {e} has wrong endpoints"))
            structural = False
    if not structural:
        return ValidationReport.collect(violations, counts)

    if check_base:
        ap = 0
        for x in range(src.term_count):
            ap += 1
            if m.path_map[src.base.refl[x]] != dst.base.refl[m.term_map[x]]:
                violations.append(
                    Violation("ApFunctor", (x,), f"refl of term {x} must map to refl of its image")
                )
        for (p, q), pq in sorted(src.base.comp.items()):
            image = dst.base.comp.get((m.path_map[p], m.path_map[q]))
            ap += 1
            if image is None or m.path_map[pq] != image:
                violations.append(
                    Violation("ApFunctor", (p, q), f"image of comp({p},{q}) is not the comp of the images")
                )
        counts["ApFunctor"] = ap
        budget.spend(ap)

    dcell = dst.layer.cell
    unit = 0
    for x in range(src.term_count):
        unit += 1
        if dcell[m.edge_map[src.layer.eqv[x]]] != dcell[dst.layer.eqv[m.term_map[x]]]:
            violations.append(
                Violation("UnitPres", (x,), f"image of eqv at term {x} is not in the cell of eqv")
            )
    counts["UnitPres"] = unit

    comp = 0
    for (e1, e2), e12 in sorted(src.layer.star.items()):
        image = dst.layer.star.get((m.edge_map[e1], m.edge_map[e2]))
        if image is None:
            continue
        comp += 1
        if dcell[m.edge_map[e12]] != dcell[image]:
            violations.append(
                Violation(
                    "CompPres",
                    (e1, e2),
                    f"image of star({e1},{e2}) is not in the cell of the star of the images",
                )
            )
    counts["CompPres"] = comp

    cellp = 0
    for members in src.layer.class_members.values():
        for e in members:
            for d in members:
                cellp += 1
                if dcell[m.edge_map[e]] != dcell[m.edge_map[d]]:
                    violations.append(
                        Violation(
                            "CellPres",
                            (e, d),
                            f"{e} and {d} share a cell but their images do not",
                        )
                    )
    counts["CellPres"] = cellp
    budget.spend(unit + comp + cellp)

    return ValidationReport.collect(violations, counts)


def is_strict(m: TypoidMorphism) -> bool:
    """True iff designated eqv edges map to designated eqv edges on the nose."""
    return all(
        m.edge_map[m.source.layer.eqv[x]] == m.target.layer.eqv[m.term_map[x]]
        for x in range(m.source.term_count)
    )


def check_inverse_law(m: TypoidMorphism, budget: Budget | None = None) -> ValidationReport:
    """Edge inversion commutes with the edge map up to cells.

    This is a consequence of the morphism laws, so it holds for every map
    accepted by validate_morphism.
    """
    budget = budget or Budget()
    src, dst = m.source, m.target
    dcell = dst.layer.cell
    violations: list[Violation] = []
    n = src.layer.edge_count
    for e in range(n):
        if dcell[m.edge_map[src.layer.einv[e]]] != dcell[dst.layer.einv[m.edge_map[e]]]:
            violations.append(
                Violation("InvPres", (e,), f"image of einv({e}) is not in the cell of einv of the image")
            )
    budget.spend(n)
    return ValidationReport.collect(violations, {"InvPres": n})


def compose_morphisms(f: TypoidMorphism, g: TypoidMorphism) -> TypoidMorphism:
    """Composite running f first, then g."""
    if not f.target.same_structure(g.source):
        raise ValueError(
            f"cannot compose: target of {f.name!r} is not the source of {g.name!r}"
        )
    return TypoidMorphism(
        name=f"{g.name}_after_{f.name}",
        source=f.source,
        target=g.target,
        term_map=tuple(g.term_map[y] for y in f.term_map),
        path_map=tuple(g.path_map[q] for q in f.path_map),
        edge_map=tuple(g.edge_map[d] for d in f.edge_map),
    )


def identity_morphism(t: Typoid) -> TypoidMorphism:
    return TypoidMorphism(
        name=f"id_{t.name}",
        source=t,
        target=t,
        term_map=tuple(range(t.term_count)),
        path_map=tuple(range(t.base.path_count)),
        edge_map=tuple(range(t.layer.edge_count)),
    )


def identity_from_equality(t: Typoid) -> TypoidMorphism:
    """The identity term map as a strict morphism out of the equality typoid
    over t's base, with the path-to-edge table as its edge action."""
    from .constructions import equality_typoid

    return TypoidMorphism(
        name=f"idtoeqv_{t.name}",
        source=equality_typoid(t.base, name=f"eq_{t.name}"),
        target=t,
        term_map=tuple(range(t.term_count)),
        path_map=tuple(range(t.base.path_count)),
        edge_map=t.idtoeqv,
    )


def iter_path_functors(src, dst, term_map) -> Iterator[tuple[int, ...]]:
    """All strict base-path functors over the given term map, in
    lexicographic order of the choices for non-refl paths."""
    refl_image = {src.refl[x]: dst.refl[term_map[x]] for x in range(src.term_count)}
    free = [p for p in range(src.path_count) if p not in refl_image]
    candidates = []
    for p in free:
        options = dst.hom(term_map[src.path_src[p]], term_map[src.path_dst[p]])
        if not options:
            return
        candidates.append(options)
    pairs = sorted(src.comp.items())
    for choice in itertools.product(*candidates):
        table = list(range(src.path_count))
        for x in range(src.term_count):
            table[src.refl[x]] = dst.refl[term_map[x]]
        for p, q in zip(free, choice):
            table[p] = q
        if all(
            dst.comp.get((table[p], table[q])) == table[pq] for (p, q), pq in pairs
        ):
            yield tuple(table)


def find_path_functor(src, dst, term_map) -> tuple[int, ...]:
    """First strict base-path functor over the term map, or ValueError
    naming an unmappable path when none exists."""
    for table in iter_path_functors(src, dst, term_map):
        return table
    for p in range(src.path_count):
        if not dst.hom(term_map[src.path_src[p]], term_map[src.path_dst[p]]):
            raise ValueError(f"no image candidates for path {p} under the term map")
    raise ValueError("no choice of path images satisfies the functor laws")
