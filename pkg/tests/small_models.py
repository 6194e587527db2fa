"""Exhaustive generation of small valid typoids, and the brute-force
univalence oracle that enumerates every candidate witness table.

The family is generated structurally so that only valid structures are
produced: base groupoids come from group tables and torsor assembly, layers
from a quotient groupoid plus class multiplicities plus a lift choice, and
path-to-edge tables from class-level functors plus a lift choice.  Each
piece is enumerated exhaustively within the requested bounds.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from typoid.model import (
    EquivalenceLayer,
    FiniteGroupoid,
    Typoid,
    validate_typoid,
)

# ---------------------------------------------------------------------------
# base groupoids


def _is_group(n: int, comp: dict[tuple[int, int], int]) -> bool:
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if comp[(comp[(i, j)], k)] != comp[(i, comp[(j, k)])]:
                    return False
    for i in range(n):
        if not any(comp[(i, j)] == 0 and comp[(j, i)] == 0 for j in range(n)):
            return False
    return True


@lru_cache(maxsize=None)
def small_groups(max_order: int) -> tuple[tuple[int, tuple[tuple[tuple[int, int], int], ...]], ...]:
    """All group tables on {0..n-1} with identity 0, n <= max_order, found
    by filtering every candidate table."""
    found = []
    for n in range(1, max_order + 1):
        free = [(i, j) for i in range(1, n) for j in range(1, n)]
        for values in itertools.product(range(n), repeat=len(free)):
            comp = {}
            for i in range(n):
                comp[(0, i)] = i
                comp[(i, 0)] = i
            for pair, v in zip(free, values):
                comp[pair] = v
            if _is_group(n, comp):
                found.append((n, tuple(sorted(comp.items()))))
    return tuple(found)


def _group_inv(n: int, comp: dict[tuple[int, int], int]) -> list[int]:
    inv = [0] * n
    for i in range(n):
        for j in range(n):
            if comp[(i, j)] == 0 and comp[(j, i)] == 0:
                inv[i] = j
    return inv


def _one_term(n: int, comp: dict[tuple[int, int], int]) -> FiniteGroupoid:
    return FiniteGroupoid(
        term_count=1,
        path_src=(0,) * n,
        path_dst=(0,) * n,
        refl=(0,),
        comp=dict(comp),
        inv=tuple(_group_inv(n, comp)),
    )


def _two_disconnected(n1, c1, n2, c2) -> FiniteGroupoid:
    def pid1(i: int) -> int:
        return 0 if i == 0 else 1 + i

    def pid2(j: int) -> int:
        return 1 if j == 0 else n1 + j

    total = n1 + n2
    src = [0] * total
    dst = [0] * total
    for j in range(1, n2):
        src[pid2(j)] = 1
        dst[pid2(j)] = 1
    src[1] = dst[1] = 1
    comp = {}
    for (i, j), v in c1.items():
        comp[(pid1(i), pid1(j))] = pid1(v)
    for (i, j), v in c2.items():
        comp[(pid2(i), pid2(j))] = pid2(v)
    inv1, inv2 = _group_inv(n1, c1), _group_inv(n2, c2)
    inv = [0] * total
    for i in range(n1):
        inv[pid1(i)] = pid1(inv1[i])
    for j in range(n2):
        inv[pid2(j)] = pid2(inv2[j])
    return FiniteGroupoid(
        term_count=2,
        path_src=tuple(src),
        path_dst=tuple(dst),
        refl=(0, 1),
        comp=comp,
        inv=tuple(inv),
    )


def _two_connected(n: int, comp: dict[tuple[int, int], int]) -> FiniteGroupoid:
    """Two terms, every hom a copy of the group: paths are (x, y, g)."""
    order = [(0, 0, 0), (1, 1, 0)]
    for x in range(2):
        for y in range(2):
            for g in range(n):
                if (x, y, g) not in ((0, 0, 0), (1, 1, 0)):
                    order.append((x, y, g))
    pid = {key: i for i, key in enumerate(order)}
    table = {}
    for (x, y, g) in order:
        for (y2, z, h) in order:
            if y2 == y:
                table[(pid[(x, y, g)], pid[(y2, z, h)])] = pid[(x, z, comp[(g, h)])]
    ginv = _group_inv(n, comp)
    return FiniteGroupoid(
        term_count=2,
        path_src=tuple(x for x, _, _ in order),
        path_dst=tuple(y for _, y, _ in order),
        refl=(0, 1),
        comp=table,
        inv=tuple(pid[(y, x, ginv[g])] for x, y, g in order),
    )


@lru_cache(maxsize=None)
def small_groupoids(max_terms: int, max_hom: int) -> tuple[FiniteGroupoid, ...]:
    out: list[FiniteGroupoid] = [FiniteGroupoid(0, (), (), (), {}, ())]
    groups = [(n, dict(items)) for n, items in small_groups(max_hom)]
    if max_terms >= 1:
        for n, comp in groups:
            out.append(_one_term(n, comp))
    if max_terms >= 2:
        for n1, c1 in groups:
            for n2, c2 in groups:
                out.append(_two_disconnected(n1, c1, n2, c2))
        for n, comp in groups:
            out.append(_two_connected(n, comp))
    return tuple(out)


# ---------------------------------------------------------------------------
# layers over a quotient structure


def _profiles(quotient: FiniteGroupoid, max_edges_per_hom: int, extra_budget: int):
    """Multiplicity assignments: every class carries one edge, plus up to
    extra_budget additional edges dropped on classes, keeping each hom-set
    within max_edges_per_hom."""
    classes = list(range(quotient.path_count))
    hom_of = {c: (quotient.path_src[c], quotient.path_dst[c]) for c in classes}
    hom_size: dict[tuple[int, int], int] = {}
    for c in classes:
        hom_size[hom_of[c]] = hom_size.get(hom_of[c], 0) + 1

    def fits(extras: tuple[int, ...]) -> bool:
        load = dict(hom_size)
        for c in extras:
            load[hom_of[c]] += 1
            if load[hom_of[c]] > max_edges_per_hom:
                return False
        return True

    seen = []
    for count in range(extra_budget + 1):
        for extras in itertools.combinations_with_replacement(classes, count):
            if fits(extras):
                mult = {c: 1 for c in classes}
                for c in extras:
                    mult[c] += 1
                seen.append(mult)
    return seen


def _layer_from(
    quotient: FiniteGroupoid, mult: dict[int, int], lift: str
) -> EquivalenceLayer:
    members: dict[int, list[int]] = {}
    edge_src: list[int] = []
    edge_dst: list[int] = []
    cell: list[int] = []
    n = quotient.term_count
    for x in range(n):
        for y in range(n):
            for c in quotient.hom(x, y):
                ids = []
                for _ in range(mult[c]):
                    ids.append(len(edge_src))
                    edge_src.append(x)
                    edge_dst.append(y)
                members[c] = ids
                cell.extend([ids[0]] * len(ids))

    def pick(c: int) -> int:
        ids = members[c]
        return ids[0] if lift == "min" else ids[-1]

    eqv = tuple(pick(quotient.refl[x]) for x in range(n))
    star = {}
    for c1 in range(quotient.path_count):
        for c2 in range(quotient.path_count):
            if quotient.path_dst[c1] != quotient.path_src[c2]:
                continue
            target = pick(quotient.comp[(c1, c2)])
            for e1 in members[c1]:
                for e2 in members[c2]:
                    star[(e1, e2)] = target
    einv = [0] * len(edge_src)
    for c in range(quotient.path_count):
        target = pick(quotient.inv[c])
        for e in members[c]:
            einv[e] = target
    return EquivalenceLayer(
        term_count=n,
        edge_src=tuple(edge_src),
        edge_dst=tuple(edge_dst),
        eqv=eqv,
        star=star,
        einv=tuple(einv),
        cell=tuple(cell),
    )


def small_layers(term_count: int, max_edges_per_hom: int, extra_budget: int):
    layers = []
    seen = set()
    for quotient in small_groupoids(2, max_edges_per_hom):
        if quotient.term_count != term_count:
            continue
        for mult in _profiles(quotient, max_edges_per_hom, extra_budget):
            for lift in ("min", "max"):
                layer = _layer_from(quotient, mult, lift)
                key = (
                    layer.edge_src,
                    layer.edge_dst,
                    layer.eqv,
                    tuple(sorted(layer.star.items())),
                    layer.einv,
                    layer.cell,
                )
                if key not in seen:
                    seen.add(key)
                    layers.append(layer)
    return layers


# ---------------------------------------------------------------------------
# path-to-edge tables


def small_idtoeqvs(base: FiniteGroupoid, layer: EquivalenceLayer):
    """All valid tables: a class-level functor fixed on refl, then a lift."""
    forced = {base.refl[x]: layer.cell[layer.eqv[x]] for x in range(base.term_count)}
    free = [p for p in range(base.path_count) if p not in forced]
    options = []
    for p in free:
        classes = layer.hom_classes(base.path_src[p], base.path_dst[p])
        if not classes:
            return
        options.append(classes)

    def qcomp(c1: int, c2: int) -> int:
        return layer.cell[layer.star[(c1, c2)]]

    members: dict[int, list[int]] = {}
    for e in range(layer.edge_count):
        members.setdefault(layer.cell[e], []).append(e)

    pairs = sorted(base.comp.items())
    for choice in itertools.product(*options):
        f = dict(forced)
        for p, c in zip(free, choice):
            f[p] = c
        if any(qcomp(f[p], f[q]) != f[pq] for (p, q), pq in pairs):
            continue
        for lift in ("min", "max"):
            table = [0] * base.path_count
            for x in range(base.term_count):
                table[base.refl[x]] = layer.eqv[x]
            for p in free:
                ids = members[f[p]]
                table[p] = ids[0] if lift == "min" else ids[-1]
            yield tuple(table)


# ---------------------------------------------------------------------------
# the family


@lru_cache(maxsize=None)
def family(
    max_terms: int = 2,
    max_paths_per_hom: int = 2,
    max_edges_per_hom: int = 3,
    extra_budget: int = 2,
) -> tuple[Typoid, ...]:
    """Every valid typoid the structural enumeration reaches within the
    bounds, deduplicated on the raw tables.  All members pass
    validate_typoid; this is asserted."""
    instances: list[Typoid] = []
    seen = set()
    layers_by_terms = {
        n: small_layers(n, max_edges_per_hom, extra_budget)
        for n in range(max_terms + 1)
    }
    for base in small_groupoids(max_terms, max_paths_per_hom):
        for layer in layers_by_terms[base.term_count]:
            for idtoeqv in small_idtoeqvs(base, layer):
                key = (
                    base.path_src,
                    base.path_dst,
                    base.refl,
                    tuple(sorted(base.comp.items())),
                    base.inv,
                    layer.edge_src,
                    layer.edge_dst,
                    layer.eqv,
                    tuple(sorted(layer.star.items())),
                    layer.einv,
                    layer.cell,
                    idtoeqv,
                )
                if key in seen:
                    continue
                seen.add(key)
                t = Typoid(
                    name=f"fam{len(instances)}",
                    base=base,
                    layer=layer,
                    idtoeqv=idtoeqv,
                )
                assert validate_typoid(t).valid, "generator produced an invalid structure"
                instances.append(t)
    return tuple(instances)


# ---------------------------------------------------------------------------
# brute-force oracle


def all_ua_tables(t: Typoid):
    """Every assignment of a parallel base path to each edge."""
    candidates = [
        t.base.hom(t.layer.edge_src[e], t.layer.edge_dst[e])
        for e in range(t.layer.edge_count)
    ]
    if any(not c for c in candidates):
        return iter(())
    return itertools.product(*candidates)


def table_satisfies(t: Typoid, table) -> bool:
    """Direct transcription of the witness conditions: both round-trips and
    constancy on cells.  Independent of the decision procedure."""
    base, layer = t.base, t.layer
    cell = layer.cell
    ide = t.idtoeqv
    for p in range(base.path_count):
        if table[ide[p]] != p:
            return False
    for e in range(layer.edge_count):
        if table[e] != table[cell[e]]:
            return False
        if cell[ide[table[e]]] != cell[e]:
            return False
    return True


def oracle_search(t: Typoid):
    """Enumerate every table; return (satisfying tables, a few rejected
    samples for cross-checking)."""
    satisfying = []
    rejected = []
    for table in all_ua_tables(t):
        if table_satisfies(t, table):
            satisfying.append(table)
        elif len(rejected) < 3:
            rejected.append(table)
    return satisfying, rejected
