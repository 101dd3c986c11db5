import pytest

from unicore.core import BlockKind, certificate_holds, find_between_block
from unicore.examples import INSTANCES, fixture_text, load_instance
from unicore.model import UNMATCHED, InvalidInstance, Match, PartitionError
from unicore.textio import (
    MatchError,
    ParseError,
    parse_certificate,
    parse_instance,
    parse_match,
    serialize_certificate,
    serialize_instance,
    serialize_match,
)


@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_instance_round_trip(name):
    inst = load_instance(name)
    text = serialize_instance(inst)
    again = parse_instance(text)
    assert again == inst
    assert serialize_instance(again) == text


def test_match_round_trip(ex1, mu_rtz):
    text = serialize_match(ex1, mu_rtz)
    assert parse_match(text, ex1) == mu_rtz


def test_unmatched_written_as_dash(ex2):
    m = Match({"1": "a", "2": "b", "3": UNMATCHED})
    text = serialize_match(ex2, m)
    assert "match 3 : -" in text.splitlines()
    assert parse_match(text, ex2)["3"] is UNMATCHED


def test_comments_and_blank_lines_ignored(ex2):
    text = "# header\n\n" + serialize_instance(ex2).replace("\n", "  # trailing\n", 1)
    assert parse_instance(text) == ex2


def test_missing_student_in_between_line_has_line_number():
    text = fixture_text("ex2.txt").replace("between a : { 2 } { 3 1 }", "between a : { 2 } { 3 }")
    with pytest.raises(InvalidInstance) as info:
        parse_instance(text)
    errors = [e for e in info.value.errors if isinstance(e, PartitionError)]
    assert errors
    line = text.splitlines().index("between a : { 2 } { 3 }") + 1
    assert errors[0].line == line
    assert errors[0].entity == "a"


def test_refinement_violation_reported():
    text = fixture_text("ex2.txt").replace("within a : 2 3 1", "within a : 3 2 1")
    with pytest.raises(InvalidInstance) as info:
        parse_instance(text)
    assert any(e.entity == "a" and e.line is not None for e in info.value.errors)


def test_all_errors_collected():
    text = (fixture_text("ex2.txt")
            .replace("school b capacity 1", "school b capacity 0")
            .replace("pref 3 : a b", "pref 3 : a z"))
    with pytest.raises(InvalidInstance) as info:
        parse_instance(text)
    assert len(info.value.errors) >= 2


@pytest.mark.parametrize("text, message", [
    ("school a capacity 1\n", "missing 'students'"),
    ("students 1\nschool a capacity x\n", "not an integer"),
    ("students 1\nbogus line\n", "unknown directive"),
    ("students 1\nbetween a : 1\n", "outside braces"),
    ("students 1\nbetween a : { 1\n", "unclosed"),
    ("students 1\npref 1 a\n", "expected ':'"),
])
def test_syntax_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_instance(text)


@pytest.mark.parametrize("text, message", [
    ("match 1 : a\nmatch 2 : a\nmatch 3 : b\n", "capacity"),
    ("match 1 : a\nmatch 2 : b\nmatch 9 : -\n", "unknown student"),
    ("match 1 : a\nmatch 2 : z\nmatch 3 : -\n", "unknown school"),
    ("match 1 : a\nmatch 1 : b\nmatch 3 : -\n", "twice"),
    ("match 1 : a\nmatch 2 : b\n", "without an assignment"),
])
def test_match_errors(ex2, text, message):
    with pytest.raises(MatchError, match=message):
        parse_match(text, ex2)


def test_certificate_round_trip(ex1, mu_rtz):
    cert = find_between_block(ex1, mu_rtz)
    text = serialize_certificate(ex1, cert)
    back = parse_certificate(text, ex1, mu_rtz)
    assert back.kind is BlockKind.BETWEEN
    assert back.coalition == cert.coalition
    assert back.alt_match == cert.alt_match
    assert certificate_holds(ex1, mu_rtz, back)


def test_certificate_needs_kind(ex2):
    text = serialize_match(ex2, Match({"1": "a", "2": "b", "3": UNMATCHED})) + "coalition : 3\n"
    with pytest.raises(ParseError):
        parse_certificate(text, ex2)
