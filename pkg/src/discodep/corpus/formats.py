"""Readers and writers for the line-oriented corpus and configuration files.

All files are UTF-8 with LF line endings and tab-separated fields; a line
starting with ``#`` is a header or a comment. Free-text fields escape
backslash, tab, CR and LF with a backslash so that every value round-trips.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

from ..core import (
    CONFIDENCES,
    PROVENANCES,
    SCHEMES,
    DepDocument,
    DepEdge,
    Edu,
)

NONE_FIELD = "_"
ATTACH_SIDES = ("left", "right")
RECORD_KINDS = ("explicit", "implicit")
REVIEW_REASONS = ("no_marker_match", "ambiguous_marker", "head_direction_default")


class FormatError(ValueError):
    """Malformed input; carries the 1-based line (and column when known)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self._render())

    def _render(self) -> str:
        where = ""
        if self.line is not None:
            where = f" at line {self.line}"
            if self.column is not None:
                where += f", column {self.column}"
        return self.message + where

    def located(self) -> str:
        loc = self.source or "<input>"
        if self.line is not None:
            loc += f":{self.line}"
            if self.column is not None:
                loc += f":{self.column}"
        return f"{loc}: {self.message}"


_ESC = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESC = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape(text: str) -> str:
    return "".join(_ESC.get(c, c) for c in text)


def unescape(text: str, line: int | None = None) -> str:
    if "\\" not in text:
        return text
    out = []
    it = iter(text)
    for c in it:
        if c != "\\":
            out.append(c)
            continue
        nxt = next(it, None)
        if nxt not in _UNESC:
            raise FormatError(f"bad escape sequence '\\{nxt or ''}'", line)
        out.append(_UNESC[nxt])
    return "".join(out)


def _as_text(data: bytes | str | IO) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    if isinstance(data, str):
        return data
    raw = data.read()
    return raw.decode("utf-8") if isinstance(raw, bytes) else raw


def _lines(data) -> Iterator[tuple[int, str]]:
    text = _as_text(data)
    for no, line in enumerate(text.split("\n"), start=1):
        yield no, line.rstrip("\r")


def _int(field: str, what: str, line: int) -> int:
    try:
        return int(field)
    except ValueError:
        raise FormatError(f"{what} is not an integer: {field!r}", line) from None


# --------------------------------------------------------------------------
# dependency corpus (.ddep)

DOC_HEADER = "# doc "


def read_dep_corpus(data) -> list[DepDocument]:
    docs: list[DepDocument] = []
    doc_id: str | None = None
    edus: list[Edu] = []
    edges: list[DepEdge] = []
    head_lines: list[int] = []

    def finish():
        nonlocal doc_id, edus, edges, head_lines
        if doc_id is None:
            return
        n = len(edus)
        for e, ln in zip(edges, head_lines):
            if e.head > n:
                raise FormatError("head out of range", ln)
        docs.append(DepDocument(doc_id, tuple(edus), tuple(edges)))
        doc_id, edus, edges, head_lines = None, [], [], []

    for no, line in _lines(data):
        if not line.strip():
            finish()
            continue
        if line.startswith(DOC_HEADER):
            finish()
            doc_id = line[len(DOC_HEADER):]
            if not doc_id:
                raise FormatError("empty doc id", no)
            continue
        if line.startswith("#"):
            continue
        if doc_id is None:
            raise FormatError("row outside a '# doc' block", no)
        fields = line.split("\t")
        if len(fields) != 7:
            raise FormatError(f"expected 7 fields, got {len(fields)}", no)
        if any(f == "" for f in fields):
            raise FormatError("empty field", no)
        idx_s, text, head_s, rel_o, rel_u, prov, conf = fields
        idx = _int(idx_s, "index", no)
        head = _int(head_s, "head", no)
        if idx != len(edus) + 1:
            if any(e.dependent == idx for e in edges):
                raise FormatError(f"duplicate dependent {idx}", no)
            raise FormatError(f"index {idx} out of sequence (expected {len(edus) + 1})", no)
        if head < 0:
            raise FormatError("head out of range", no)
        if prov not in PROVENANCES:
            raise FormatError(f"unknown provenance {prov!r}", no)
        if conf not in CONFIDENCES:
            raise FormatError(f"unknown confidence {conf!r}", no)
        edus.append(Edu(idx, unescape(text, no)))
        edges.append(DepEdge(
            head, idx, unescape(rel_o, no),
            None if rel_u == NONE_FIELD else unescape(rel_u, no),
            prov, conf,
        ))
        head_lines.append(no)
    finish()
    return docs


def format_dep_document(doc: DepDocument) -> str:
    rows = [DOC_HEADER + doc.doc_id]
    by_dep = {e.dependent: e for e in doc.edges}
    for edu in doc.edus:
        e = by_dep[edu.index]
        rows.append("\t".join((
            str(edu.index), escape(edu.text), str(e.head), escape(e.rel_original),
            NONE_FIELD if e.rel_unified is None else escape(e.rel_unified),
            e.provenance, e.confidence,
        )))
    return "\n".join(rows) + "\n\n"


def write_dep_corpus(docs: Iterable[DepDocument]) -> bytes:
    return "".join(format_dep_document(d) for d in docs).encode("utf-8")


# --------------------------------------------------------------------------
# PDTB-style relation records (.pdr)

@dataclass(frozen=True)
class PdtbRelationRecord:
    doc_id: str
    kind: str
    connective: str
    label: str
    arg1: frozenset[int]
    arg2: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "arg1", frozenset(self.arg1))
        object.__setattr__(self, "arg2", frozenset(self.arg2))


def _index_list(field: str, line: int) -> frozenset[int]:
    items = [_int(x, "EDU index", line) for x in field.split(",")]
    if any(i < 1 for i in items):
        raise FormatError("EDU index must be >= 1", line)
    return frozenset(items)


def read_pdtb_records(data) -> list[PdtbRelationRecord]:
    out = []
    for no, line in _lines(data):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise FormatError(f"expected 6 fields, got {len(fields)}", no)
        if any(f == "" for f in fields):
            raise FormatError("empty field", no)
        doc_id, kind, con, label, a1, a2 = fields
        if kind not in RECORD_KINDS:
            raise FormatError(f"unknown kind {kind!r}", no)
        arg1, arg2 = _index_list(a1, no), _index_list(a2, no)
        if arg1 & arg2:
            raise FormatError("overlapping argument sets", no)
        out.append(PdtbRelationRecord(doc_id, kind, unescape(con, no), unescape(label, no), arg1, arg2))
    return out


def _fmt_set(s: Iterable[int]) -> str:
    return ",".join(map(str, sorted(s)))


def write_pdtb_records(records: Iterable[PdtbRelationRecord]) -> bytes:
    lines = [
        "\t".join((r.doc_id, r.kind, escape(r.connective), escape(r.label),
                   _fmt_set(r.arg1), _fmt_set(r.arg2)))
        for r in records
    ]
    return "".join(x + "\n" for x in lines).encode("utf-8")


# --------------------------------------------------------------------------
# discourse marker rules (.mkr)

@dataclass(frozen=True)
class MarkerRule:
    label: str
    marker: str
    attach: str  # which EDU of an adjacent pair is the head


def read_marker_rules(data) -> list[MarkerRule]:
    out = []
    for no, line in _lines(data):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 fields, got {len(fields)}", no)
        if any(f == "" for f in fields):
            raise FormatError("empty field", no)
        label, marker, attach = fields
        if attach not in ATTACH_SIDES:
            raise FormatError(f"attach must be left or right, got {attach!r}", no)
        out.append(MarkerRule(unescape(label, no), unescape(marker, no), attach))
    return out


def write_marker_rules(rules: Iterable[MarkerRule]) -> bytes:
    return "".join(f"{escape(r.label)}\t{escape(r.marker)}\t{r.attach}\n" for r in rules).encode("utf-8")


# --------------------------------------------------------------------------
# relation mapping (.map)

class RelationMapping(dict):
    """(scheme, original label) -> unified label, in file order."""

    def unified(self, scheme: str, label: str) -> str | None:
        return self.get((scheme, label))

    def labels(self, scheme: str) -> list[str]:
        return [orig for (s, orig) in self if s == scheme]

    def targets(self) -> list[str]:
        return sorted(set(self.values()))


def read_relation_mapping(data) -> RelationMapping:
    mapping = RelationMapping()
    for no, line in _lines(data):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 fields, got {len(fields)}", no)
        if any(f == "" for f in fields):
            raise FormatError("empty field", no)
        scheme, orig, unified = fields
        if scheme not in SCHEMES:
            raise FormatError(f"unknown scheme {scheme!r}", no)
        key = (scheme, unescape(orig, no))
        if key in mapping:
            raise FormatError(f"duplicate mapping for {scheme} {key[1]!r}", no)
        mapping[key] = unescape(unified, no)
    return mapping


def write_relation_mapping(mapping: dict) -> bytes:
    return "".join(
        f"{s}\t{escape(o)}\t{escape(u)}\n" for (s, o), u in mapping.items()
    ).encode("utf-8")


# --------------------------------------------------------------------------
# review queue (.rvq), corrections (.fix), EDU splits (.spl)

@dataclass(frozen=True)
class ReviewItem:
    doc_id: str
    edge: DepEdge
    reason: str
    suggestion: str

    def __post_init__(self):
        if self.reason not in REVIEW_REASONS:
            raise ValueError(f"unknown review reason {self.reason!r}")


def write_review_queue(items: Iterable[ReviewItem]) -> bytes:
    return "".join(
        f"{it.doc_id}\t{it.edge.dependent}\t{it.edge.head}\t{escape(it.suggestion)}\t{it.reason}\n"
        for it in items
    ).encode("utf-8")


@dataclass(frozen=True)
class ReviewEntry:
    """One review-queue row as read back from disk."""

    doc_id: str
    dependent: int
    head: int
    label: str
    reason: str


def read_review_queue(data) -> list[ReviewEntry]:
    out = []
    for no, line in _lines(data):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5 or any(f == "" for f in fields):
            raise FormatError("expected 5 non-empty fields", no)
        doc_id, dep, head, label, reason = fields
        if reason not in REVIEW_REASONS:
            raise FormatError(f"unknown review reason {reason!r}", no)
        out.append(ReviewEntry(doc_id, _int(dep, "dependent", no), _int(head, "head", no),
                               unescape(label, no), reason))
    return out


@dataclass(frozen=True)
class Correction:
    dependent: int
    new_head: int
    new_label: str


def read_corrections(data) -> dict[str, list[Correction]]:
    """Corrections grouped by document id, file order preserved."""
    out: dict[str, list[Correction]] = {}
    for no, line in _lines(data):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4 or any(f == "" for f in fields):
            raise FormatError("expected 4 non-empty fields", no)
        doc_id, dep, head, label = fields
        out.setdefault(doc_id, []).append(
            Correction(_int(dep, "dependent", no), _int(head, "new head", no), unescape(label, no)))
    return out


def write_corrections(grouped: dict[str, Sequence[Correction]]) -> bytes:
    return "".join(
        f"{doc_id}\t{c.dependent}\t{c.new_head}\t{escape(c.new_label)}\n"
        for doc_id, cs in grouped.items() for c in cs
    ).encode("utf-8")


@dataclass(frozen=True)
class EduSplitRecord:
    doc_id: str
    original_index: int
    parts: tuple[str, ...]
    intra_edges: tuple[tuple[int, int, str], ...]  # (head part, dependent part, label), 1-based

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "intra_edges", tuple(tuple(e) for e in self.intra_edges))


def _split_escape(text: str) -> str:
    return escape(text).replace("|", "\\p")


def _split_unescape(text: str, line: int) -> str:
    return unescape(text.replace("\\\\", "\x00").replace("\\p", "|").replace("\x00", "\\\\"), line)


def read_edu_splits(data) -> list[EduSplitRecord]:
    out = []
    for no, line in _lines(data):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4) or any(f == "" for f in fields[:3]):
            raise FormatError("expected doc_id, index, parts and intra edges", no)
        doc_id, idx, parts_s = fields[:3]
        edges_s = fields[3] if len(fields) == 4 else ""
        parts = tuple(_split_unescape(p, no) for p in parts_s.split("|"))
        if any(not p for p in parts):
            raise FormatError("empty part text", no)
        edges = []
        for item in filter(None, edges_s.split(",")):
            bits = item.split(":", 2)
            if len(bits) != 3 or not bits[2]:
                raise FormatError(f"bad intra edge {item!r}", no)
            edges.append((_int(bits[0], "part", no), _int(bits[1], "part", no), unescape(bits[2], no)))
        out.append(EduSplitRecord(doc_id, _int(idx, "index", no), parts, tuple(edges)))
    return out


def write_edu_splits(records: Iterable[EduSplitRecord]) -> bytes:
    lines = []
    for r in records:
        parts = "|".join(_split_escape(p) for p in r.parts)
        edges = ",".join(f"{h}:{d}:{escape(lab)}" for h, d, lab in r.intra_edges)
        lines.append(f"{r.doc_id}\t{r.original_index}\t{parts}\t{edges}\n")
    return "".join(lines).encode("utf-8")


def open_text(path) -> str:
    with open(path, "rb") as fh:
        return fh.read().decode("utf-8")


def to_stream(data: bytes) -> io.BytesIO:
    return io.BytesIO(data)
