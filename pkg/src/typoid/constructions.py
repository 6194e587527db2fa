"""Ways of building typoids: equality structures over a groupoid, binary
products, exponentials of morphisms, truncations, finite universes of sets
with bijections as edges, and the completion that regrows a base groupoid
out of the cell classes.

Every public construction returns structures in canonical id layout:
refl paths and designated eqv edges occupy ids 0..term_count-1 in term
order.  The serializer relies on this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .model import (
    Budget,
    EquivalenceLayer,
    FiniteGroupoid,
    ResourceLimitError,
    Typoid,
    validate_groupoid,
    validate_typoid,
)
from .morphisms import TypoidMorphism, find_path_functor, iter_path_functors


# ---------------------------------------------------------------------------
# canonical id layout

def _renumber(t: Typoid) -> tuple[Typoid, dict[int, int], dict[int, int]]:
    """Permute path and edge ids so refl and eqv come first, in term order.

    Returns the renumbered typoid and the old-to-new id maps for paths and
    edges.  Cell labels are recomputed since the least member of a class may
    change under the permutation.
    """
    base, layer = t.base, t.layer
    path_order = list(dict.fromkeys(base.refl))
    path_order += [p for p in range(base.path_count) if p not in set(base.refl)]
    pmap = {old: new for new, old in enumerate(path_order)}
    edge_order = list(dict.fromkeys(layer.eqv))
    edge_order += [e for e in range(layer.edge_count) if e not in set(layer.eqv)]
    emap = {old: new for new, old in enumerate(edge_order)}

    new_base = FiniteGroupoid(
        term_count=base.term_count,
        path_src=tuple(base.path_src[p] for p in path_order),
        path_dst=tuple(base.path_dst[p] for p in path_order),
        refl=tuple(pmap[base.refl[x]] for x in range(base.term_count)),
        comp={(pmap[p], pmap[q]): pmap[r] for (p, q), r in base.comp.items()},
        inv=tuple(pmap[base.inv[p]] for p in path_order),
    )
    new_cell = [0] * layer.edge_count
    members_by_class: dict[int, list[int]] = {}
    for old in range(layer.edge_count):
        members_by_class.setdefault(layer.cell[old], []).append(emap[old])
    for members in members_by_class.values():
        rep = min(members)
        for e in members:
            new_cell[e] = rep
    new_layer = EquivalenceLayer(
        term_count=layer.term_count,
        edge_src=tuple(layer.edge_src[e] for e in edge_order),
        edge_dst=tuple(layer.edge_dst[e] for e in edge_order),
        eqv=tuple(emap[layer.eqv[x]] for x in range(layer.term_count)),
        star={(emap[e], emap[d]): emap[r] for (e, d), r in layer.star.items()},
        einv=tuple(emap[layer.einv[e]] for e in edge_order),
        cell=tuple(new_cell),
    )
    new_idtoeqv = [0] * base.path_count
    for old in range(base.path_count):
        new_idtoeqv[pmap[old]] = emap[t.idtoeqv[old]]
    out = Typoid(name=t.name, base=new_base, layer=new_layer, idtoeqv=tuple(new_idtoeqv))
    return out, pmap, emap


def _require_valid_typoid(t: Typoid) -> None:
    report = validate_typoid(t)
    if not report.valid:
        first = report.violations[0]
        raise ValueError(f"typoid {t.name!r} is invalid: {first.law} {first.detail}")


# ---------------------------------------------------------------------------
# base groupoid generators

def discrete_groupoid(n: int) -> FiniteGroupoid:
    """n terms, refl paths only."""
    return FiniteGroupoid(
        term_count=n,
        path_src=tuple(range(n)),
        path_dst=tuple(range(n)),
        refl=tuple(range(n)),
        comp={(x, x): x for x in range(n)},
        inv=tuple(range(n)),
    )


def codiscrete_groupoid(n: int) -> FiniteGroupoid:
    """n terms with exactly one path in every hom-set."""
    pid = {}
    order = [(x, x) for x in range(n)] + [
        (x, y) for x in range(n) for y in range(n) if x != y
    ]
    for i, xy in enumerate(order):
        pid[xy] = i
    comp = {}
    for (x, y) in order:
        for (y2, z) in order:
            if y2 == y:
                comp[(pid[(x, y)], pid[(y, z)])] = pid[(x, z)]
    return FiniteGroupoid(
        term_count=n,
        path_src=tuple(x for x, _ in order),
        path_dst=tuple(y for _, y in order),
        refl=tuple(pid[(x, x)] for x in range(n)),
        comp=comp,
        inv=tuple(pid[(y, x)] for x, y in order),
    )


def cyclic_groupoid(n: int) -> FiniteGroupoid:
    """One term whose paths form the cyclic group of order n."""
    if n < 1:
        raise ValueError("cyclic order must be at least 1")
    return FiniteGroupoid(
        term_count=1,
        path_src=(0,) * n,
        path_dst=(0,) * n,
        refl=(0,),
        comp={(i, j): (i + j) % n for i in range(n) for j in range(n)},
        inv=tuple((n - i) % n for i in range(n)),
    )


def is_prop(g: FiniteGroupoid) -> bool:
    """Every hom-set is inhabited."""
    return all(g.hom(x, y) for x in range(g.term_count) for y in range(g.term_count))


def is_set(g: FiniteGroupoid) -> bool:
    """Path equality carries no structure of its own here, so this is
    trivially true for every base groupoid."""
    return True


def singleton_homs(g: FiniteGroupoid) -> bool:
    """Every hom-set has exactly one path."""
    return all(
        len(g.hom(x, y)) == 1 for x in range(g.term_count) for y in range(g.term_count)
    )


# ---------------------------------------------------------------------------
# equality typoid and friends

def equality_typoid(g: FiniteGroupoid, name: str = "eq") -> Typoid:
    """The typoid whose edges are the base paths themselves: star is comp,
    einv is inv, and every edge sits alone in its cell."""
    report = validate_groupoid(g)
    if not report.valid:
        first = report.violations[0]
        raise ValueError(f"groupoid is invalid: {first.law} {first.detail}")
    layer = EquivalenceLayer(
        term_count=g.term_count,
        edge_src=g.path_src,
        edge_dst=g.path_dst,
        eqv=g.refl,
        star=dict(g.comp),
        einv=g.inv,
        cell=tuple(range(g.path_count)),
    )
    t = Typoid(name=name, base=g, layer=layer, idtoeqv=tuple(range(g.path_count)))
    out, _, _ = _renumber(t)
    return out


def unit_typoid(name: str = "unit") -> Typoid:
    return equality_typoid(discrete_groupoid(1), name=name)


def twoedge_typoid(name: str = "twoedge") -> Typoid:
    """One term, one refl path, and a second edge in a cell of its own.

    The extra cell is unreachable from the single base path, which makes
    this the smallest non-univalent structure.
    """
    layer = EquivalenceLayer(
        term_count=1,
        edge_src=(0, 0),
        edge_dst=(0, 0),
        eqv=(0,),
        star={(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0},
        einv=(0, 1),
        cell=(0, 1),
    )
    return Typoid(name=name, base=discrete_groupoid(1), layer=layer, idtoeqv=(0,))


# ---------------------------------------------------------------------------
# product

@dataclass(frozen=True)
class ProductProvenance:
    """Pairing tables of a product: how factor paths and edges combine into
    product ids and back."""

    factors: tuple[Typoid, Typoid]
    pair_edge: Mapping[tuple[int, int], int]
    split_edge: tuple[tuple[int, int], ...]
    pair_path: Mapping[tuple[int, int], int]
    split_path: tuple[tuple[int, int], ...]


def product_typoid(a: Typoid, b: Typoid, name: str | None = None) -> tuple[Typoid, ProductProvenance]:
    """Componentwise product: terms, paths, edges and cells are pairs."""
    _require_valid_typoid(a)
    _require_valid_typoid(b)
    name = name or f"{a.name}_x_{b.name}"
    tb = b.term_count
    pb = b.base.path_count
    eb = b.layer.edge_count

    def term(x: int, y: int) -> int:
        return x * tb + y

    def pid(p1: int, p2: int) -> int:
        return p1 * pb + p2

    def eid(e1: int, e2: int) -> int:
        return e1 * eb + e2

    pa, ea = a.base.path_count, a.layer.edge_count
    base = FiniteGroupoid(
        term_count=a.term_count * tb,
        path_src=tuple(
            term(a.base.path_src[p1], b.base.path_src[p2])
            for p1 in range(pa)
            for p2 in range(pb)
        ),
        path_dst=tuple(
            term(a.base.path_dst[p1], b.base.path_dst[p2])
            for p1 in range(pa)
            for p2 in range(pb)
        ),
        refl=tuple(
            pid(a.base.refl[x], b.base.refl[y])
            for x in range(a.term_count)
            for y in range(tb)
        ),
        comp={
            (pid(p1, p2), pid(q1, q2)): pid(r1, r2)
            for (p1, q1), r1 in a.base.comp.items()
            for (p2, q2), r2 in b.base.comp.items()
        },
        inv=tuple(
            pid(a.base.inv[p1], b.base.inv[p2]) for p1 in range(pa) for p2 in range(pb)
        ),
    )
    layer = EquivalenceLayer(
        term_count=base.term_count,
        edge_src=tuple(
            term(a.layer.edge_src[e1], b.layer.edge_src[e2])
            for e1 in range(ea)
            for e2 in range(eb)
        ),
        edge_dst=tuple(
            term(a.layer.edge_dst[e1], b.layer.edge_dst[e2])
            for e1 in range(ea)
            for e2 in range(eb)
        ),
        eqv=tuple(
            eid(a.layer.eqv[x], b.layer.eqv[y])
            for x in range(a.term_count)
            for y in range(tb)
        ),
        star={
            (eid(e1, e2), eid(d1, d2)): eid(r1, r2)
            for (e1, d1), r1 in a.layer.star.items()
            for (e2, d2), r2 in b.layer.star.items()
        },
        einv=tuple(
            eid(a.layer.einv[e1], b.layer.einv[e2])
            for e1 in range(ea)
            for e2 in range(eb)
        ),
        # the least pair in a product class is the pair of least members
        cell=tuple(
            eid(a.layer.cell[e1], b.layer.cell[e2])
            for e1 in range(ea)
            for e2 in range(eb)
        ),
    )
    idtoeqv = tuple(
        eid(a.idtoeqv[p1], b.idtoeqv[p2]) for p1 in range(pa) for p2 in range(pb)
    )
    out, pmap, emap = _renumber(Typoid(name=name, base=base, layer=layer, idtoeqv=idtoeqv))

    pair_edge = {
        (e1, e2): emap[eid(e1, e2)] for e1 in range(ea) for e2 in range(eb)
    }
    split_edge: list[tuple[int, int]] = [(0, 0)] * (ea * eb)
    for (e1, e2), e in pair_edge.items():
        split_edge[e] = (e1, e2)
    pair_path = {
        (p1, p2): pmap[pid(p1, p2)] for p1 in range(pa) for p2 in range(pb)
    }
    split_path: list[tuple[int, int]] = [(0, 0)] * (pa * pb)
    for (p1, p2), p in pair_path.items():
        split_path[p] = (p1, p2)
    prov = ProductProvenance(
        factors=(a, b),
        pair_edge=pair_edge,
        split_edge=tuple(split_edge),
        pair_path=pair_path,
        split_path=tuple(split_path),
    )
    return out, prov


def _check_provenance(p: Typoid, prov: ProductProvenance) -> None:
    a, b = prov.factors
    if (
        p.term_count != a.term_count * b.term_count
        or len(prov.split_path) != p.base.path_count
        or len(prov.split_edge) != p.layer.edge_count
    ):
        raise ValueError("provenance does not describe this product")


def projections(p: Typoid, prov: ProductProvenance) -> tuple[TypoidMorphism, TypoidMorphism]:
    """The two factor projections; both are strict."""
    _check_provenance(p, prov)
    a, b = prov.factors
    tb = b.term_count
    first = TypoidMorphism(
        name="pr1",
        source=p,
        target=a,
        term_map=tuple(z // tb for z in range(p.term_count)),
        path_map=tuple(prov.split_path[q][0] for q in range(p.base.path_count)),
        edge_map=tuple(prov.split_edge[e][0] for e in range(p.layer.edge_count)),
    )
    second = TypoidMorphism(
        name="pr2",
        source=p,
        target=b,
        term_map=tuple(z % tb for z in range(p.term_count)),
        path_map=tuple(prov.split_path[q][1] for q in range(p.base.path_count)),
        edge_map=tuple(prov.split_edge[e][1] for e in range(p.layer.edge_count)),
    )
    return first, second


def pairing(
    f: TypoidMorphism, g: TypoidMorphism, p: Typoid, prov: ProductProvenance
) -> TypoidMorphism:
    """The morphism into a product determined componentwise by f and g."""
    _check_provenance(p, prov)
    a, b = prov.factors
    if not f.source.same_structure(g.source):
        raise ValueError("pairing needs morphisms with a common source")
    if not (f.target.same_structure(a) and g.target.same_structure(b)):
        raise ValueError("pairing targets must be the factors of the product")
    tb = b.term_count
    return TypoidMorphism(
        name=f"pair_{f.name}_{g.name}",
        source=f.source,
        target=p,
        term_map=tuple(
            f.term_map[c] * tb + g.term_map[c] for c in range(f.source.term_count)
        ),
        path_map=tuple(
            prov.pair_path[(f.path_map[q], g.path_map[q])]
            for q in range(f.source.base.path_count)
        ),
        edge_map=tuple(
            prov.pair_edge[(f.edge_map[e], g.edge_map[e])]
            for e in range(f.source.layer.edge_count)
        ),
    )


# ---------------------------------------------------------------------------
# truncation

def truncate(t: Typoid, name: str | None = None) -> Typoid:
    """Keep the base groupoid, collapse the layer to exactly one edge per
    ordered term pair with a single cell per hom-set."""
    _require_valid_typoid(t)
    name = name or f"{t.name}_t"
    n = t.term_count

    def eid(x: int, y: int) -> int:
        return x * n + y

    layer = EquivalenceLayer(
        term_count=n,
        edge_src=tuple(x for x in range(n) for _ in range(n)),
        edge_dst=tuple(y for _ in range(n) for y in range(n)),
        eqv=tuple(eid(x, x) for x in range(n)),
        star={
            (eid(x, y), eid(y, z)): eid(x, z)
            for x in range(n)
            for y in range(n)
            for z in range(n)
        },
        einv=tuple(eid(y, x) for x in range(n) for y in range(n)),
        cell=tuple(range(n * n)),
    )
    idtoeqv = tuple(
        eid(t.base.path_src[p], t.base.path_dst[p]) for p in range(t.base.path_count)
    )
    out, _, _ = _renumber(Typoid(name=name, base=t.base, layer=layer, idtoeqv=idtoeqv))
    return out


def is_truncation_shaped(t: Typoid) -> bool:
    """Exactly one edge per ordered term pair."""
    n = t.term_count
    return t.layer.edge_count == n * n and all(
        len(t.layer.hom(x, y)) == 1 for x in range(n) for y in range(n)
    )


def morphism_into_truncation(
    src: Typoid, dst: Typoid, term_map: tuple[int, ...], name: str | None = None
) -> TypoidMorphism:
    """Any term map into a truncation extends with the constant-unit edge
    action, provided a base-path functor over it exists."""
    if not is_truncation_shaped(dst):
        raise ValueError(f"typoid {dst.name!r} is not a truncation")
    path_map = find_path_functor(src.base, dst.base, term_map)
    edge_map = tuple(
        dst.layer.hom(term_map[src.layer.edge_src[e]], term_map[src.layer.edge_dst[e]])[0]
        for e in range(src.layer.edge_count)
    )
    return TypoidMorphism(
        name=name or f"{src.name}_to_{dst.name}",
        source=src,
        target=dst,
        term_map=tuple(term_map),
        path_map=path_map,
        edge_map=edge_map,
    )


# ---------------------------------------------------------------------------
# completion

def _completion_base(layer: EquivalenceLayer) -> tuple[FiniteGroupoid, tuple[int, ...]]:
    """A strict groupoid on the cell classes of a layer, with the table
    sending each class to its designated or representative edge."""
    reps = sorted(layer.class_members)
    index = {r: i for i, r in enumerate(reps)}
    refl = tuple(index[layer.cell[layer.eqv[x]]] for x in range(layer.term_count))
    comp = {}
    for r1 in reps:
        for r2 in reps:
            if layer.edge_dst[r1] == layer.edge_src[r2]:
                comp[(index[r1], index[r2])] = index[layer.cell[layer.star[(r1, r2)]]]
    base = FiniteGroupoid(
        term_count=layer.term_count,
        path_src=tuple(layer.edge_src[r] for r in reps),
        path_dst=tuple(layer.edge_dst[r] for r in reps),
        refl=refl,
        comp=comp,
        inv=tuple(index[layer.cell[layer.einv[r]]] for r in reps),
    )
    idtoeqv = list(reps)
    for x in range(layer.term_count):
        idtoeqv[refl[x]] = layer.eqv[x]
    return base, tuple(idtoeqv)


def univalent_completion(t: Typoid, name: str | None = None) -> Typoid:
    """Replace the base groupoid with the quotient of the edge layer by its
    cells; the result is univalent by construction."""
    _require_valid_typoid(t)
    base, idtoeqv = _completion_base(t.layer)
    out, _, _ = _renumber(
        Typoid(name=name or f"{t.name}_c", base=base, layer=t.layer, idtoeqv=idtoeqv)
    )
    return out


# ---------------------------------------------------------------------------
# exponential

@dataclass(frozen=True)
class ExponentialLimits:
    max_terms: int = 64
    max_edges: int = 256


@dataclass(frozen=True)
class ExponentialEdge:
    """A family of target edges, one per source term, joining two morphisms
    that are the endpoints of an exponential edge."""

    src_term: int
    dst_term: int
    theta: tuple[int, ...]


@dataclass(frozen=True)
class ExponentialProvenance:
    source: Typoid
    target: Typoid
    terms: tuple[TypoidMorphism, ...]
    edges: tuple[ExponentialEdge, ...]


def _edge_action_ok(a: Typoid, b: Typoid, f: tuple[int, ...], phi: tuple[int, ...]) -> bool:
    bcell = b.layer.cell
    for x in range(a.term_count):
        if bcell[phi[a.layer.eqv[x]]] != bcell[b.layer.eqv[f[x]]]:
            return False
    for (e1, e2), e12 in a.layer.star.items():
        image = b.layer.star[(phi[e1], phi[e2])]
        if bcell[phi[e12]] != bcell[image]:
            return False
    for members in a.layer.class_members.values():
        first = bcell[phi[members[0]]]
        for e in members[1:]:
            if bcell[phi[e]] != first:
                return False
    return True


def _square_ok(
    a: Typoid, b: Typoid, phi_f: tuple[int, ...], phi_g: tuple[int, ...], theta: tuple[int, ...]
) -> bool:
    bcell = b.layer.cell
    bstar = b.layer.star
    for e in range(a.layer.edge_count):
        sx, sy = a.layer.edge_src[e], a.layer.edge_dst[e]
        if bcell[bstar[(phi_f[e], theta[sy])]] != bcell[bstar[(theta[sx], phi_g[e])]]:
            return False
    return True


def exponential_typoid(
    a: Typoid, b: Typoid, limits: ExponentialLimits = ExponentialLimits(), name: str | None = None
) -> tuple[Typoid, ExponentialProvenance]:
    """Terms are all morphisms from a to b, enumerated in lexicographic
    order of (term map, path table, edge table); edges are all families of
    target edges whose squares commute up to cells.  The base groupoid is
    grown from the cell classes of that layer.
    """
    _require_valid_typoid(a)
    _require_valid_typoid(b)
    name = name or f"exp_{a.name}_{b.name}"

    terms: list[TypoidMorphism] = []
    for f in itertools.product(range(b.term_count), repeat=a.term_count):
        for ap in iter_path_functors(a.base, b.base, f):
            options = []
            for e in range(a.layer.edge_count):
                hom = b.layer.hom(f[a.layer.edge_src[e]], f[a.layer.edge_dst[e]])
                if not hom:
                    options = None
                    break
                options.append(hom)
            if options is None:
                continue
            for phi in itertools.product(*options):
                if _edge_action_ok(a, b, f, phi):
                    if len(terms) >= limits.max_terms:
                        raise ResourceLimitError(
                            "max-terms", f"more than {limits.max_terms} morphisms from {a.name!r} to {b.name!r}"
                        )
                    terms.append(
                        TypoidMorphism(
                            name=f"{name}_term{len(terms)}",
                            source=a,
                            target=b,
                            term_map=f,
                            path_map=ap,
                            edge_map=phi,
                        )
                    )

    families: list[ExponentialEdge] = []
    family_id: dict[tuple[int, int, tuple[int, ...]], int] = {}
    for i, fm in enumerate(terms):
        for j, gm in enumerate(terms):
            options = [
                b.layer.hom(fm.term_map[x], gm.term_map[x]) for x in range(a.term_count)
            ]
            if any(not hom for hom in options):
                continue
            for theta in itertools.product(*options):
                if _square_ok(a, b, fm.edge_map, gm.edge_map, theta):
                    if len(families) >= limits.max_edges:
                        raise ResourceLimitError(
                            "max-edges", f"more than {limits.max_edges} edge families"
                        )
                    family_id[(i, j, theta)] = len(families)
                    families.append(ExponentialEdge(src_term=i, dst_term=j, theta=theta))

    bcell = b.layer.cell
    bstar = b.layer.star
    beinv = b.layer.einv

    def fid(i: int, j: int, theta: tuple[int, ...]) -> int:
        key = (i, j, theta)
        if key not in family_id:
            raise AssertionError("edge layer is not closed; construction bug")
        return family_id[key]

    eqv = tuple(
        fid(i, i, tuple(b.layer.eqv[terms[i].term_map[x]] for x in range(a.term_count)))
        for i in range(len(terms))
    )
    star = {}
    for e1, fam1 in enumerate(families):
        for e2, fam2 in enumerate(families):
            if fam1.dst_term != fam2.src_term:
                continue
            pointwise = tuple(
                bstar[(fam1.theta[x], fam2.theta[x])] for x in range(a.term_count)
            )
            star[(e1, e2)] = fid(fam1.src_term, fam2.dst_term, pointwise)
    einv = tuple(
        fid(f.dst_term, f.src_term, tuple(beinv[x] for x in f.theta)) for f in families
    )
    cell = tuple(
        fid(f.src_term, f.dst_term, tuple(bcell[x] for x in f.theta)) for f in families
    )
    layer = EquivalenceLayer(
        term_count=len(terms),
        edge_src=tuple(f.src_term for f in families),
        edge_dst=tuple(f.dst_term for f in families),
        eqv=eqv,
        star=star,
        einv=einv,
        cell=cell,
    )
    base, idtoeqv = _completion_base(layer)
    out, _, emap = _renumber(Typoid(name=name, base=base, layer=layer, idtoeqv=idtoeqv))

    final_edges: list[ExponentialEdge] = list(families)
    for old, fam in enumerate(families):
        final_edges[emap[old]] = fam
    prov = ExponentialProvenance(
        source=a, target=b, terms=tuple(terms), edges=tuple(final_edges)
    )
    return out, prov


# ---------------------------------------------------------------------------
# finite universe

def universe_typoid(
    sets: list[int] | tuple[int, ...], name: str = "universe", max_edges: int = 5000
) -> Typoid:
    """Terms are finite sets given by cardinality; edges and base paths are
    the bijections between them, composed diagrammatically.  Univalent by
    construction."""
    sets = tuple(sets)
    if any(n < 0 for n in sets):
        raise ValueError("cardinalities must be non-negative")
    total = 0
    for i, ni in enumerate(sets):
        for nj in sets:
            if ni == nj:
                f = 1
                for k in range(2, ni + 1):
                    f *= k
                total += f
    if total > max_edges:
        raise ResourceLimitError(
            "universe-size", f"{total} bijections needed, bound is {max_edges}"
        )

    perms: list[tuple[int, int, tuple[int, ...]]] = []
    pid: dict[tuple[int, int, tuple[int, ...]], int] = {}
    for i, ni in enumerate(sets):
        for j, nj in enumerate(sets):
            if ni != nj:
                continue
            for perm in itertools.permutations(range(ni)):
                pid[(i, j, perm)] = len(perms)
                perms.append((i, j, perm))

    comp = {}
    for p, (i, j, sigma) in enumerate(perms):
        for q, (j2, k, tau) in enumerate(perms):
            if j2 != j:
                continue
            composite = tuple(tau[sigma[x]] for x in range(len(sigma)))
            comp[(p, q)] = pid[(i, k, composite)]
    inv = []
    for (i, j, sigma) in perms:
        inverse = [0] * len(sigma)
        for x, y in enumerate(sigma):
            inverse[y] = x
        inv.append(pid[(j, i, tuple(inverse))])
    identity = tuple(
        pid[(i, i, tuple(range(n)))] for i, n in enumerate(sets)
    )
    base = FiniteGroupoid(
        term_count=len(sets),
        path_src=tuple(i for i, _, _ in perms),
        path_dst=tuple(j for _, j, _ in perms),
        refl=identity,
        comp=comp,
        inv=tuple(inv),
    )
    layer = EquivalenceLayer(
        term_count=len(sets),
        edge_src=base.path_src,
        edge_dst=base.path_dst,
        eqv=identity,
        star=dict(comp),
        einv=base.inv,
        cell=tuple(range(len(perms))),
    )
    t = Typoid(name=name, base=base, layer=layer, idtoeqv=tuple(range(len(perms))))
    out, _, _ = _renumber(t)
    return out
