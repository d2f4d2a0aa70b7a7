"""Versioned JSON documents used for every file the command line reads or writes.

A document is a JSON object with ``"kind"`` and ``"version"`` keys plus the
payload fields of its kind.  Emission is canonical (sorted keys, fixed
indentation, trailing newline) so equal content gives equal bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from sdquiver.errors import ParseError
from sdquiver.quiver import Rep

VERSION = 1
KINDS = ("rep", "pencil", "bundle", "poly", "report", "config")
REP_KINDS = ("rep", "pencil", "bundle")


def make(kind: str, payload: dict) -> dict:
    if kind not in KINDS:
        raise ValueError(f"unknown document kind {kind!r}")
    doc = {"kind": kind, "version": VERSION}
    doc.update(payload)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if doc.get("kind") not in KINDS:
        raise ParseError(f"unknown or missing document kind: {doc.get('kind')!r}")
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported document version: {doc.get('version')!r}")
    return doc


def load(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def save(doc: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def rep_document(rep: Rep, kind: str = "rep") -> dict:
    if kind not in REP_KINDS:
        raise ValueError(kind)
    return make(kind, rep.to_json())


def rep_from_document(doc: dict) -> Rep:
    if doc["kind"] not in REP_KINDS:
        raise ParseError(f"expected a representation document, got {doc['kind']!r}")
    return Rep.from_json(doc)
