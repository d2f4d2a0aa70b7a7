import pytest

from sdquiver import docfmt
from sdquiver.errors import ParseError
from sdquiver.quiver import random_rep


def test_rep_roundtrip(tmp_path):
    v = random_rep(3, (2, 4), 1)
    path = tmp_path / "v.json"
    docfmt.save(docfmt.rep_document(v, "bundle"), path)
    assert docfmt.rep_from_document(docfmt.load(path)) == v


def test_canonical_bytes():
    doc = docfmt.rep_document(random_rep(2, (1, 3), 5))
    text = docfmt.dumps(doc)
    assert docfmt.dumps(docfmt.loads(text)) == text
    assert text.endswith("\n")


@pytest.mark.parametrize("text", [
    "[1, 2]",
    '{"kind": "rep"}',
    '{"kind": "rep", "version": 2}',
    '{"kind": "nope", "version": 1}',
    "{",
])
def test_rejects(text):
    with pytest.raises(ParseError):
        docfmt.loads(text)


def test_wrong_kind_for_rep():
    with pytest.raises(ParseError):
        docfmt.rep_from_document(docfmt.make("report", {}))


def test_bad_rational_in_rep():
    doc = docfmt.rep_document(random_rep(1, (1, 1), 0))
    doc["mats"][0][0][0] = "1/0"
    with pytest.raises(ParseError):
        docfmt.rep_from_document(doc)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        docfmt.load(tmp_path / "absent.json")
