"""Bracketed RST-style constituency trees (``.rsx``).

A leaf is ``[i|text]``; an internal node is ``(label child+)`` where every
child is preceded by its nuclearity, ``N`` or ``S``::

    # doc d1
    (explanation N (joint N [1|a] N [2|b]) S [3|c])

Inside leaf text, ``\\``, ``[``, ``]``, ``|``, tab and newline are
backslash-escaped. Labels may contain spaces but no brackets or parentheses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .formats import DOC_HEADER, FormatError, _lines

NUCLEARITY = ("N", "S")


@dataclass(frozen=True)
class Leaf:
    edu_index: int
    text: str


@dataclass(frozen=True)
class Internal:
    label: str
    children: tuple[tuple[str, "RstTree"], ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(tuple(c) for c in self.children))


RstTree = Union[Leaf, Internal]


def leaves(tree: RstTree) -> Iterator[Leaf]:
    if isinstance(tree, Leaf):
        yield tree
        return
    for _, child in tree.children:
        yield from leaves(child)


def check_tree(tree: RstTree) -> None:
    """Raise ValueError if ``tree`` breaks a structural invariant."""

    def walk(node):
        if isinstance(node, Leaf):
            if not node.text:
                raise ValueError(f"leaf {node.edu_index} has empty text")
            return
        if len(node.children) < 2:
            raise ValueError(f"node {node.label!r} has fewer than two children")
        if not any(nuc == "N" for nuc, _ in node.children):
            raise ValueError(f"node {node.label!r} has no nucleus child")
        for nuc, child in node.children:
            if nuc not in NUCLEARITY:
                raise ValueError(f"bad nuclearity {nuc!r}")
            walk(child)

    walk(tree)
    idx = [leaf.edu_index for leaf in leaves(tree)]
    if idx != list(range(1, len(idx) + 1)):
        raise ValueError(f"leaf indices {idx} are not 1..{len(idx)}")


_LEAF_ESC = {"\\": "\\\\", "[": "\\[", "]": "\\]", "|": "\\|", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_LEAF_UNESC = {"\\": "\\", "[": "[", "]": "]", "|": "|", "t": "\t", "n": "\n", "r": "\r"}
_LABEL_FORBIDDEN = set("()[]\t\n\r\\")


def format_tree(tree: RstTree) -> str:
    if isinstance(tree, Leaf):
        return f"[{tree.edu_index}|" + "".join(_LEAF_ESC.get(c, c) for c in tree.text) + "]"
    label = tree.label
    if not label or label != label.strip() or _LABEL_FORBIDDEN & set(label):
        raise ValueError(f"label {label!r} cannot be serialized")
    kids = " ".join(f"{nuc} {format_tree(child)}" for nuc, child in tree.children)
    return f"({label} {kids})"


class _Parser:
    def __init__(self, text: str, line_offsets: list[int], first_line: int):
        self.s = text
        self.i = 0
        self.offsets = line_offsets
        self.first_line = first_line

    def error(self, msg: str, pos: int | None = None):
        pos = self.i if pos is None else pos
        # line of pos within this record
        line = 0
        while line + 1 < len(self.offsets) and self.offsets[line + 1] <= pos:
            line += 1
        raise FormatError(msg, self.first_line + line, pos - self.offsets[line] + 1)

    def skip_ws(self):
        while self.i < len(self.s) and self.s[self.i] in " \t\n\r":
            self.i += 1

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def parse(self) -> RstTree:
        self.skip_ws()
        node = self.node()
        self.skip_ws()
        if self.i != len(self.s):
            if self.peek() == ")":
                self.error("unbalanced parentheses: unexpected ')'")
            self.error("trailing text after tree")
        return node

    def node(self) -> RstTree:
        c = self.peek()
        if c == "[":
            return self.leaf()
        if c == "(":
            return self.internal()
        if not c:
            self.error("unexpected end of input")
        self.error(f"expected '[' or '(', found {c!r}")

    def leaf(self) -> Leaf:
        start = self.i
        self.i += 1
        bar = self.s.find("|", self.i)
        close = self.s.find("]", self.i)
        if bar < 0 or (0 <= close < bar):
            self.error("leaf without '|'", start)
        num = self.s[self.i:bar].strip()
        if not num.isdigit():
            self.error(f"bad leaf index {num!r}", self.i)
        self.i = bar + 1
        out = []
        while True:
            if self.i >= len(self.s):
                self.error("unterminated leaf", start)
            c = self.s[self.i]
            if c == "\\":
                nxt = self.s[self.i + 1] if self.i + 1 < len(self.s) else ""
                if nxt not in _LEAF_UNESC:
                    self.error(f"bad escape '\\{nxt}'")
                out.append(_LEAF_UNESC[nxt])
                self.i += 2
                continue
            if c == "]":
                self.i += 1
                break
            out.append(c)
            self.i += 1
        return Leaf(int(num), "".join(out))

    def internal(self) -> Internal:
        start = self.i
        self.i += 1
        # the label runs up to the first " N " / " S " that is followed by a child
        j = self.i
        label_end = None
        while j < len(self.s):
            c = self.s[j]
            if c in "()[]":
                break
            if c in " \t\n" and j + 2 < len(self.s) and self.s[j + 1] in "NS" \
                    and self.s[j + 2] in " \t\n":
                k = j + 2
                while k < len(self.s) and self.s[k] in " \t\n":
                    k += 1
                if k < len(self.s) and self.s[k] in "[(":
                    label_end = j
                    break
            j += 1
        if label_end is None:
            if j < len(self.s) and self.s[j] == ")":
                self.error("node has fewer than two children", start)
            if j >= len(self.s):
                self.error("unbalanced parentheses: missing ')'", start)
            self.error("expected nuclearity marker before child", j)
        label = self.s[self.i:label_end].strip()
        if not label:
            self.error("empty relation label", start)
        self.i = label_end
        children = []
        while True:
            self.skip_ws()
            c = self.peek()
            if c == ")":
                self.i += 1
                break
            if not c:
                self.error("unbalanced parentheses: missing ')'", start)
            if c not in "NS":
                self.error(f"expected N or S, found {c!r}")
            nuc_pos = self.i
            self.i += 1
            if self.peek() not in (" ", "\t", "\n"):
                self.error("expected whitespace after nuclearity", nuc_pos)
            self.skip_ws()
            children.append((c, self.node()))
        if len(children) < 2:
            self.error("node has fewer than two children", start)
        if not any(nuc == "N" for nuc, _ in children):
            self.error("no nucleus child", start)
        return Internal(label, tuple(children))


def parse_tree(text: str, first_line: int = 1) -> RstTree:
    offsets = [0]
    for k, c in enumerate(text):
        if c == "\n":
            offsets.append(k + 1)
    return _Parser(text, offsets, first_line).parse()


def read_rst_trees(data) -> list[tuple[str, RstTree]]:
    out: list[tuple[str, RstTree]] = []
    doc_id = None
    buf: list[str] = []
    start = 0

    def finish():
        nonlocal doc_id, buf
        if doc_id is None:
            if buf:
                raise FormatError("tree without '# doc' header", start)
            return
        if not buf:
            raise FormatError(f"document {doc_id!r} has no tree", start)
        tree = parse_tree("\n".join(buf), start)
        idx = [leaf.edu_index for leaf in leaves(tree)]
        if idx != list(range(1, len(idx) + 1)):
            raise FormatError(f"leaf indices {idx} are not 1..{len(idx)}", start)
        out.append((doc_id, tree))
        doc_id, buf = None, []

    for no, line in _lines(data):
        if line.startswith(DOC_HEADER):
            finish()
            doc_id = line[len(DOC_HEADER):]
            start = no + 1
            continue
        if line.startswith("#"):
            continue
        if not line.strip():
            if buf:
                finish()
            continue
        if not buf:
            start = no
        buf.append(line)
    finish()
    return out


def write_rst_trees(records: Iterable[tuple[str, RstTree]]) -> bytes:
    return "".join(f"{DOC_HEADER}{doc_id}\n{format_tree(t)}\n\n" for doc_id, t in records).encode("utf-8")
