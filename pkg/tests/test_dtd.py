import xml.etree.ElementTree as ET

import pytest

from multiform.dtd import (
    Choice,
    ElementRef,
    PCData,
    Repeat,
    Sequence,
    builtin_dtd_text,
    builtin_schema,
    format_dtd,
    match_children,
    nullable,
    parse_dtd,
    render_model,
    validate,
)
from multiform.errors import (
    DtdSyntaxError,
    DuplicateDeclaration,
    MixedContent,
    NoRootElement,
    UndeclaredReference,
)


def test_bundled_dtd_has_37_declarations_rooted_at_complex_object():
    schema = builtin_schema()
    assert len(schema.names) == 37
    assert schema.root == "COMPLEX_OBJECT"


@pytest.mark.parametrize("name, model", [
    ("COMPLEX_OBJECT", "(OBJ_NAME, DATE, SOURCE, SUBDOCUMENT+)"),
    ("SUBDOCUMENT", "(DOC_NAME, TYPE, SIZE, LOCATION, LANGUAGE?, KEYWORD*, "
                    "(TEXT | RELATIONAL_VIEW | IMAGE | CONTINUOUS))"),
    ("TEXT", "(NB_CHAR, NB_LINES, (PLAIN_TEXT | TAGGED_TEXT))"),
    ("TUPLE", "(ATT_NAME_REF, VALUE)+"),
    ("CONTINUOUS", "(DURATION, SPEED, (SOUND | VIDEO))"),
    ("KEYWORD", "(#PCDATA)"),
])
def test_bundled_content_models(name, model):
    schema = builtin_schema()
    assert render_model(schema.elements[name]) == model


def test_single_item_groups_collapse():
    schema = parse_dtd("<!ELEMENT A (B)>\n<!ELEMENT B (#PCDATA)>")
    assert schema.elements["A"] == ElementRef("B")


def test_nested_groups_parse():
    schema = parse_dtd(
        "<!ELEMENT A (B, (C | D)*, B?)>"
        "<!ELEMENT B (#PCDATA)><!ELEMENT C (#PCDATA)><!ELEMENT D (#PCDATA)>")
    assert schema.elements["A"] == Sequence((
        ElementRef("B"),
        Repeat(Choice((ElementRef("C"), ElementRef("D"))), "*"),
        Repeat(ElementRef("B"), "?"),
    ))


def test_comments_are_skipped():
    schema = parse_dtd(
        "<!-- head -->\n<!ELEMENT A (B)>\n<!-- <!ELEMENT X (Y)> -->\n"
        "<!ELEMENT B (#PCDATA)>\n")
    assert set(schema.names) == {"A", "B"}


def test_root_is_the_first_unreferenced_element():
    schema = parse_dtd(
        "<!ELEMENT LEAF (#PCDATA)>\n<!ELEMENT TOP (LEAF)>\n")
    assert schema.root == "TOP"


def test_all_elements_referenced_means_no_root():
    with pytest.raises(NoRootElement):
        parse_dtd("<!ELEMENT A (B)>\n<!ELEMENT B (A)>\n")


def test_duplicate_declaration_reports_the_line():
    with pytest.raises(DuplicateDeclaration) as err:
        parse_dtd("<!ELEMENT A (#PCDATA)>\n<!ELEMENT A (#PCDATA)>\n")
    assert err.value.line == 2


def test_undeclared_reference_names_both_sides():
    with pytest.raises(UndeclaredReference) as err:
        parse_dtd("<!ELEMENT A (MISSING)>")
    assert err.value.element == "A"
    assert err.value.referenced == "MISSING"


def test_mixed_content_is_rejected():
    with pytest.raises(MixedContent):
        parse_dtd("<!ELEMENT A (#PCDATA | B)*>\n<!ELEMENT B (#PCDATA)>")


@pytest.mark.parametrize("text", [
    "<!ELEMENT A EMPTY>",
    "<!ELEMENT A ANY>",
    "<!ATTLIST A x CDATA #IMPLIED>",
    "<!ENTITY x 'y'>",
    "<!ELEMENT A (%thing;)>",
    "<!ELEMENT A (B,)>\n<!ELEMENT B (#PCDATA)>",
    "<!ELEMENT A (B | C, D)>",
    "<!ELEMENT A (B)",
    "not a dtd at all",
])
def test_unsupported_or_malformed_declarations(text):
    with pytest.raises(DtdSyntaxError):
        parse_dtd(text)


def test_syntax_error_carries_line_and_found_token():
    with pytest.raises(DtdSyntaxError) as err:
        parse_dtd("<!ELEMENT A (B)>\n<!ELEMENT B ()>\n")
    assert err.value.line == 2


def test_empty_input_has_no_declarations():
    with pytest.raises(DtdSyntaxError):
        parse_dtd("")
    with pytest.raises(DtdSyntaxError):
        parse_dtd("   \n  ")


def test_format_parse_fixpoint_on_the_bundled_dtd():
    schema = builtin_schema()
    assert parse_dtd(format_dtd(schema)) == schema


def test_format_parse_fixpoint_on_awkward_models():
    text = ("<!ELEMENT A ((X?)*, (X | (Y, Z))?)>\n"
            "<!ELEMENT X (#PCDATA)>\n<!ELEMENT Y (#PCDATA)>\n"
            "<!ELEMENT Z (#PCDATA)>\n")
    schema = parse_dtd(text)
    assert parse_dtd(format_dtd(schema)) == schema


def test_bundled_text_is_what_the_parser_consumed():
    # the resource file itself must stay parseable on its own
    assert parse_dtd(builtin_dtd_text()).root == "COMPLEX_OBJECT"


# -- matching ---------------------------------------------------------------------


def model_of(text):
    return parse_dtd(text).elements["A"]


def test_matching_is_greedy_but_backtracks():
    # B* followed by a required B forces the star to give one back
    model = model_of("<!ELEMENT A (B*, B)>\n<!ELEMENT B (#PCDATA)>")
    assert match_children(model, ["B", "B", "B"]) is not None
    assert match_children(model, []) is None


def test_choice_tries_alternatives_in_order():
    model = model_of("<!ELEMENT A (B | C)>\n<!ELEMENT B (#PCDATA)>"
                     "<!ELEMENT C (#PCDATA)>")
    tree = match_children(model, ["C"])
    assert tree.alt == 1


def test_plus_requires_at_least_one():
    model = model_of("<!ELEMENT A (B+)>\n<!ELEMENT B (#PCDATA)>")
    assert match_children(model, []) is None
    assert len(match_children(model, ["B", "B"]).iterations) == 2


def test_nullable():
    schema = parse_dtd("<!ELEMENT A (B?, C*)>\n<!ELEMENT B (#PCDATA)>"
                       "<!ELEMENT C (#PCDATA)>")
    assert nullable(schema.elements["A"])
    assert not nullable(ElementRef("B"))
    assert nullable(PCData())


# -- validation -------------------------------------------------------------------


def doc(text):
    return ET.fromstring(text)


def test_valid_document_passes(schema):
    tree = doc("<COMPLEX_OBJECT><OBJ_NAME>n</OBJ_NAME><DATE>d</DATE>"
               "<SOURCE>s</SOURCE><SUBDOCUMENT><DOC_NAME>x</DOC_NAME>"
               "<TYPE>Image</TYPE><SIZE>1</SIZE><LOCATION>l</LOCATION>"
               "<IMAGE><COMPRESSION/><FORMAT>Gif</FORMAT><RESOLUTION/>"
               "<LENGTH>2</LENGTH><WIDTH>3</WIDTH></IMAGE>"
               "</SUBDOCUMENT></COMPLEX_OBJECT>")
    report = validate(tree, schema)
    assert report.valid
    assert report.violations == ()


def test_wrong_root_is_reported(schema):
    report = validate(doc("<SUBDOC/>"), schema)
    assert not report.valid
    assert "COMPLEX_OBJECT" in str(report.violations[0])


def test_missing_required_child_points_at_the_gap(schema):
    tree = doc("<COMPLEX_OBJECT><OBJ_NAME>n</OBJ_NAME><SOURCE>s</SOURCE>"
               "</COMPLEX_OBJECT>")
    report = validate(tree, schema)
    assert not report.valid
    message = str(report.violations[0])
    assert "at child 2" in message
    assert "DATE" in message


def test_character_data_between_children_is_a_violation(schema):
    tree = doc("<COMPLEX_OBJECT>stray<OBJ_NAME>n</OBJ_NAME><DATE>d</DATE>"
               "<SOURCE>s</SOURCE></COMPLEX_OBJECT>")
    report = validate(tree, schema)
    assert any("character data" in str(v) for v in report.violations)


def test_whitespace_between_children_is_fine(schema):
    tree = doc("<COMPLEX_OBJECT>\n  <OBJ_NAME>n</OBJ_NAME>\n  <DATE>d</DATE>"
               "\n  <SOURCE>s</SOURCE>\n  <SUBDOCUMENT><DOC_NAME>x</DOC_NAME>"
               "<TYPE>Image</TYPE><SIZE>1</SIZE><LOCATION>l</LOCATION>"
               "<IMAGE><COMPRESSION/><FORMAT/><RESOLUTION/>"
               "<LENGTH>2</LENGTH><WIDTH>3</WIDTH></IMAGE>"
               "</SUBDOCUMENT>\n</COMPLEX_OBJECT>")
    assert validate(tree, schema).valid


def test_leaf_with_children_is_a_violation(schema):
    tree = doc("<COMPLEX_OBJECT><OBJ_NAME><X/></OBJ_NAME><DATE>d</DATE>"
               "<SOURCE>s</SOURCE><SUBDOCUMENT><DOC_NAME>x</DOC_NAME>"
               "<TYPE>Image</TYPE><SIZE>1</SIZE><LOCATION>l</LOCATION>"
               "<IMAGE><COMPRESSION/><FORMAT/><RESOLUTION/>"
               "<LENGTH>2</LENGTH><WIDTH>3</WIDTH></IMAGE>"
               "</SUBDOCUMENT></COMPLEX_OBJECT>")
    report = validate(tree, schema)
    assert any("leaf element" in str(v) for v in report.violations)


def test_undeclared_element_is_reported_with_its_path(schema):
    tree = doc("<COMPLEX_OBJECT><OBJ_NAME>n</OBJ_NAME><DATE>d</DATE>"
               "<SOURCE>s</SOURCE><BONUS/></COMPLEX_OBJECT>")
    report = validate(tree, schema)
    assert any(v.path == "/COMPLEX_OBJECT/BONUS" and "not declared" in v.message
               for v in report.violations)


def test_sibling_paths_carry_indexes(schema):
    tree = doc("<COMPLEX_OBJECT><OBJ_NAME>n</OBJ_NAME><DATE>d</DATE>"
               "<SOURCE>s</SOURCE>"
               "<SUBDOCUMENT><DOC_NAME>a</DOC_NAME><TYPE>Image</TYPE>"
               "<SIZE>1</SIZE><LOCATION>l</LOCATION>"
               "<IMAGE><COMPRESSION/><FORMAT/><RESOLUTION/>"
               "<LENGTH>2</LENGTH><WIDTH>3</WIDTH></IMAGE></SUBDOCUMENT>"
               "<SUBDOCUMENT><DOC_NAME>b</DOC_NAME><TYPE>Image</TYPE>"
               "<SIZE>1</SIZE><LOCATION>l</LOCATION><IMAGE><COMPRESSION/>"
               "<FORMAT/><RESOLUTION/><LENGTH>2</LENGTH><WIDTH>0bad</WIDTH>"
               "<EXTRA/></IMAGE></SUBDOCUMENT></COMPLEX_OBJECT>")
    report = validate(tree, schema)
    assert any(v.path.startswith("/COMPLEX_OBJECT/SUBDOCUMENT[2]/IMAGE")
               for v in report.violations)
