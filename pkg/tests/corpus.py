"""Stock structures shared across the test suite."""

from __future__ import annotations

from functools import lru_cache

import typoid as T
from typoid.univalence import UnivalenceCertificate


@lru_cache(maxsize=1)
def stock_base() -> dict[str, T.Typoid]:
    return {
        "unit": T.unit_typoid(),
        "bool_disc": T.equality_typoid(T.discrete_groupoid(2), name="bool_disc"),
        "prop2": T.equality_typoid(T.codiscrete_groupoid(2), name="prop2"),
        "twoedge": T.twoedge_typoid(),
        "eq_z2": T.equality_typoid(T.cyclic_groupoid(2), name="eq_z2"),
        "universe2": T.universe_typoid([2], name="universe2"),
        "universe11": T.universe_typoid([1, 1], name="universe11"),
    }


@lru_cache(maxsize=1)
def stock_truncations() -> dict[str, T.Typoid]:
    return {f"trunc_{k}": T.truncate(v, name=f"trunc_{k}") for k, v in stock_base().items()}


@lru_cache(maxsize=1)
def univalent_stock() -> dict[str, T.Typoid]:
    """Univalent members of the base exemplars and their truncations."""
    out = {}
    for name, t in {**stock_base(), **stock_truncations()}.items():
        if isinstance(T.check_univalence(t), UnivalenceCertificate):
            out[name] = t
    return out


@lru_cache(maxsize=1)
def stock_products() -> dict[str, tuple[T.Typoid, T.ProductProvenance]]:
    """Products of every pair of univalent stock typoids."""
    out = {}
    for na, a in univalent_stock().items():
        for nb, b in univalent_stock().items():
            prod, prov = T.product_typoid(a, b, name=f"prod_{na}_{nb}")
            out[f"prod_{na}_{nb}"] = (prod, prov)
    return out


@lru_cache(maxsize=1)
def full_stock() -> dict[str, T.Typoid]:
    out: dict[str, T.Typoid] = {}
    out.update(stock_base())
    out.update(stock_truncations())
    out.update({k: v[0] for k, v in stock_products().items()})
    return out
