"""Parser, diagnostics, serializer round-trips."""

from __future__ import annotations

import typoid as T
from typoid.dsl import (
    E_CONFLICT,
    E_DUPLICATE,
    E_ENDPOINTS,
    E_MISSING,
    E_SYNTAX,
    E_UNKNOWN,
    E_UNRESOLVED,
    document_for,
    parse,
    serialize,
)

from corpus import full_stock, stock_products

Z2_SOURCE = """\
typoid Z2 {
  terms x ;
  path p : x -> x ;
  comp p . p = refl_x ;
  pinv p = p ;
  idtoeqv p => eqv_x ;
}
"""

TWOEDGE_SOURCE = """\
typoid T {
  terms x ;
  edge e : x ~ x ;
  star e * e = eqv_x ;
  einv e = e ;
}
"""


def test_minimal_typoid_is_unit():
    result = parse("typoid U { terms x ; }")
    assert result.ok, result.diagnostics
    entry = result.document.typoid_entries()["U"]
    assert entry.typoid.same_structure(T.unit_typoid())


def test_z2_source_matches_programmatic_structure():
    result = parse(Z2_SOURCE)
    assert result.ok, result.diagnostics
    t = result.document.typoid_entries()["Z2"].typoid
    assert t.term_count == 1
    assert t.base.path_count == 2
    expected = T.Typoid(
        name="Z2",
        base=T.cyclic_groupoid(2),
        layer=T.EquivalenceLayer(1, (0,), (0,), (0,), {(0, 0): 0}, (0,), (0,)),
        idtoeqv=(0, 0),
    )
    assert t.same_structure(expected)
    assert T.validate_typoid(t).valid


def test_twoedge_source_matches_factory():
    result = parse(TWOEDGE_SOURCE)
    assert result.ok, result.diagnostics
    t = result.document.typoid_entries()["T"].typoid
    assert t.same_structure(T.twoedge_typoid())


def test_non_composable_comp_is_endpoint_diagnostic_with_span():
    src = "typoid A {\n  terms x y ;\n  path p : x -> y ;\n  path q : x -> y ;\n  comp p . q = refl_x ;\n}"
    result = parse(src)
    assert not result.ok
    hits = [d for d in result.diagnostics if d.code == E_ENDPOINTS]
    assert len(hits) == 1
    assert hits[0].span.line == 5
    assert hits[0].span.column == 12  # points at q


def test_missing_entries_are_parse_level_diagnostics():
    # a declared path with no pinv, no comp for p.p, no idtoeqv row
    src = "typoid A {\n  terms x ;\n  path p : x -> x ;\n}"
    result = parse(src)
    assert not result.ok
    codes = {d.code for d in result.diagnostics}
    assert codes == {E_MISSING}
    messages = " ".join(d.message for d in result.diagnostics)
    assert "comp" in messages and "pinv" in messages and "idtoeqv" in messages


def test_unknown_names_and_duplicates_diagnosed():
    src = "typoid A {\n  terms x x ;\n  path p : x -> z ;\n}"
    result = parse(src)
    codes = {d.code for d in result.diagnostics}
    assert E_DUPLICATE in codes and E_UNKNOWN in codes


def test_conflicting_rows_diagnosed():
    src = (
        "typoid A {\n  terms x ;\n  path p : x -> x ;\n"
        "  comp p . p = refl_x ;\n  comp p . p = p ;\n  pinv p = p ;\n  idtoeqv p => eqv_x ;\n}"
    )
    result = parse(src)
    assert any(d.code == E_CONFLICT for d in result.diagnostics)


def test_diagnostics_shift_with_comment_insertion():
    src = "typoid A {\n  terms x y ;\n  path p : x -> y ;\n  path q : x -> y ;\n  comp p . q = refl_x ;\n}"
    with_comment = "# a comment\n" + src
    first = [d for d in parse(src).diagnostics if d.code == E_ENDPOINTS]
    second = [d for d in parse(with_comment).diagnostics if d.code == E_ENDPOINTS]
    assert len(first) == len(second) == 1
    assert second[0].span.line == first[0].span.line + 1
    assert second[0].span.column == first[0].span.column
    assert second[0].message == first[0].message


def test_parser_recovers_and_reports_multiple_errors():
    src = (
        "typoid A {\n  terms x ;\n  path p : x -> nowhere ;\n"
        "  comp p . = refl_x ;\n}\ntypoid B { terms y ; }"
    )
    result = parse(src)
    assert not result.ok
    assert any(d.code == E_UNKNOWN for d in result.diagnostics)
    assert any(d.code == E_SYNTAX for d in result.diagnostics)


def test_strictunits_fills_absorption_rows_for_overridden_eqv():
    src = (
        "typoid A {\n  strictunits ;\n  terms x ;\n"
        "  edge u : x ~ x ;\n  eqv x = u ;\n  idtoeqv refl_x => u ;\n}"
    )
    result = parse(src)
    assert result.ok, result.diagnostics
    t = result.document.typoid_entries()["A"].typoid
    assert t.layer.edge_count == 1
    assert T.validate_typoid(t).valid
    # without the flag the absorption rows are genuinely missing
    bare = src.replace("  strictunits ;\n", "")
    result = parse(bare)
    assert not result.ok
    assert all(d.code == E_MISSING for d in result.diagnostics)


def test_morphism_parsing_and_resolution():
    src = (
        TWOEDGE_SOURCE
        + "typoid U { terms a ; }\n"
        + "morphism m : U -> T {\n  term a |-> x ;\n  edge eqv_a |-> e ;\n}\n"
    )
    result = parse(src)
    assert result.ok, result.diagnostics
    m = result.document.morphism_entries()["m"].morphism
    assert m.term_map == (0,)
    assert m.edge_map == (1,)
    report = T.validate_morphism(m)
    assert not report.valid  # eqv must not land in the other cell


def test_morphism_unresolved_source_diagnosed():
    src = "morphism m : A -> B { }"
    result = parse(src)
    assert not result.ok
    assert {d.code for d in result.diagnostics} == {E_UNRESOLVED}


def test_serialize_parse_fixed_point_for_canonical_sources():
    for src in (Z2_SOURCE, TWOEDGE_SOURCE, "typoid U { terms x ; }"):
        first = parse(src)
        assert first.ok
        text = serialize(first.document)
        second = parse(text)
        assert second.ok
        assert second.document.structurally_equal(first.document)
        assert serialize(second.document) == text


def test_round_trip_every_stock_structure():
    for name, t in full_stock().items():
        doc = document_for([t])
        result = parse(serialize(doc))
        assert result.ok, (name, result.diagnostics[:3])
        assert result.document.structurally_equal(doc), name


def test_round_trip_morphisms():
    prod, prov = stock_products()["prod_eq_z2_bool_disc"]
    pr1, pr2 = T.projections(prod, prov)
    a, b = prov.factors
    doc = document_for([prod, a, b], [pr1, pr2])
    result = parse(serialize(doc))
    assert result.ok, result.diagnostics[:3]
    assert result.document.structurally_equal(doc)
    parsed = result.document.morphism_entries()["pr1"].morphism
    assert parsed.term_map == pr1.term_map
    assert parsed.path_map == pr1.path_map
    assert parsed.edge_map == pr1.edge_map


def test_round_trip_preserves_non_default_absorption_rows():
    rich_src = (
        "typoid R {\n  terms x ;\n  edge u : x ~ x ;\n"
        "  star eqv_x * u = eqv_x ;\n  star u * eqv_x = u ;\n  star u * u = eqv_x ;\n"
        "  einv u = u ;\n  cell u == eqv_x ;\n}"
    )
    result = parse(rich_src)
    assert result.ok, result.diagnostics
    t = result.document.typoid_entries()["R"].typoid
    assert t.layer.star[(0, 1)] == 0  # the declared non-default row survived
    assert T.validate_typoid(t).valid
    text = serialize(result.document)
    assert "star eqv_x * u = eqv_x ;" in text
    assert "star u * eqv_x = u ;" not in text  # default rows stay implicit
    again = parse(text)
    assert again.ok
    assert again.document.structurally_equal(result.document)


def test_lexical_error_reported_with_position():
    result = parse("typoid A? { terms x ; }")
    assert not result.ok
    assert any(d.code == "E100" and d.span.line == 1 and d.span.column == 9 for d in result.diagnostics)


def test_empty_typoid_expressible_and_round_trips():
    result = parse("typoid Z {\n  terms ;\n}")
    assert result.ok, result.diagnostics
    t = result.document.typoid_entries()["Z"].typoid
    assert t.term_count == 0
    assert T.validate_typoid(t).valid
    text = serialize(result.document)
    again = parse(text)
    assert again.ok and again.document.structurally_equal(result.document)


def test_missing_terms_statement_diagnosed():
    result = parse("typoid A { }")
    assert not result.ok
    assert any(d.code == E_MISSING and "terms" in d.message for d in result.diagnostics)
