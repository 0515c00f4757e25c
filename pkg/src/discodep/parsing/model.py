"""Trained parser bundles, their training entry point and their plain-text files.

A model file is a sequence of tables. Each starts with a ``# table`` header;
classifier tables list their class inventory on a ``# classes`` line and
group weights under ``# class`` lines. Weight lines are
``feature<TAB>weight``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..core import DepDocument
from ..corpus.formats import FormatError, _lines, escape, unescape
from .graph import heads_to_document, parse_graph, train_graph_parser
from .labeler import RelationModel, label_relations, train_relation_labeler
from .linear import ArcScorer, LinearClassifier
from .transition import TransitionModel, parse_transition, train_transition_parser

PARSER_KINDS = ("graph-eisner", "graph-mst", "transition", "two-stage")
MAGIC = "# discodep-model"


@dataclass
class ParserModel:
    kind: str
    label_view: str = "original"
    arcs: ArcScorer | None = None
    transitions: TransitionModel | None = None
    relations: RelationModel | None = None

    def parse(self, doc: DepDocument) -> DepDocument:
        if doc.n == 0:
            return doc
        if self.kind in ("graph-eisner", "graph-mst"):
            heads = parse_graph(doc, self.arcs, decoder=self.kind.split("-")[1])
            return label_relations(heads_to_document(doc, heads), self.relations)
        if self.kind == "transition":
            return parse_transition(doc, self.transitions)
        if self.kind == "two-stage":
            return label_relations(parse_transition(doc, self.transitions, labeled=False), self.relations)
        raise ValueError(f"unknown parser kind {self.kind!r}")


def train_parser(
    kind: str,
    corpus: Sequence[DepDocument],
    epochs: int = 10,
    seed: int = 0,
    label_view: str = "original",
    log: Callable[[dict], None] | None = None,
) -> ParserModel:
    if kind not in PARSER_KINDS:
        raise ValueError(f"unknown parser kind {kind!r}")
    if not corpus:
        raise ValueError("empty training corpus")

    def tagged(stage):
        if log is None:
            return None
        return lambda row: log({"stage": stage, **row})

    model = ParserModel(kind, label_view)
    if kind.startswith("graph-"):
        model.arcs = train_graph_parser(corpus, epochs, seed, decoder=kind.split("-")[1],
                                        log=tagged("arcs"))
        model.relations = train_relation_labeler(corpus, epochs, seed, label_view,
                                                 use_tree_features=False, log=tagged("relations"))
    elif kind == "transition":
        model.transitions = train_transition_parser(corpus, True, epochs, seed, label_view,
                                                    log=tagged("actions"))
    else:
        model.transitions = train_transition_parser(corpus, False, epochs, seed, label_view,
                                                    log=tagged("actions"))
        model.relations = train_relation_labeler(corpus, epochs, seed, label_view,
                                                 use_tree_features=True, log=tagged("relations"))
    return model


def _fmt(x: float) -> str:
    return repr(float(x))


def _classifier_lines(name: str, clf: LinearClassifier, extra: str) -> list[str]:
    lines = [f"# table\t{name}\tmargin={_fmt(clf.margin)}{extra}",
             "# classes\t" + "\t".join(escape(c) for c in clf.classes)]
    for cls, table in clf.weights(averaged=True).items():
        lines.append("# class\t" + escape(cls))
        lines.extend(f"{escape(f)}\t{_fmt(w)}" for f, w in sorted(table.items()))
    return lines


def dump_model(model: ParserModel) -> bytes:
    lines = [f"{MAGIC}\tkind={model.kind}\tlabel_view={model.label_view}"]
    if model.arcs is not None:
        lines.append(f"# table\tarcs\tupdates={model.arcs.update_count}")
        lines.extend(f"{escape(f)}\t{_fmt(w)}" for f, w in sorted(model.arcs.averaged_weights.items()))
    if model.transitions is not None:
        t = model.transitions
        lines += _classifier_lines("transitions", t.classifier,
                                   f"\tlabeled={int(t.labeled)}\tlabel_view={t.label_view}")
    if model.relations is not None:
        r = model.relations
        lines += _classifier_lines("relations", r.classifier,
                                   f"\ttree={int(r.use_tree_features)}\tlabel_view={r.label_view}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _attrs(fields: list[str]) -> dict[str, str]:
    out = {}
    for f in fields:
        k, _, v = f.partition("=")
        out[k] = v
    return out


def load_model(data) -> ParserModel:
    lines = list(_lines(data))
    if not lines or not lines[0][1].startswith(MAGIC):
        raise FormatError("not a discodep model file", 1)
    head = _attrs(lines[0][1].split("\t")[1:])
    model = ParserModel(head.get("kind", ""), head.get("label_view", "original"))
    if model.kind not in PARSER_KINDS:
        raise FormatError(f"unknown parser kind {model.kind!r}", 1)

    tables: list[tuple[str, dict, list[str], dict]] = []
    current_class = None
    for no, line in lines[1:]:
        if not line:
            continue
        fields = line.split("\t")
        if fields[0] == "# table":
            tables.append((fields[1], _attrs(fields[2:]), [], {}))
            current_class = None
        elif fields[0] == "# classes":
            tables[-1][2].extend(unescape(c, no) for c in fields[1:])
        elif fields[0] == "# class":
            current_class = unescape(fields[1], no)
            tables[-1][3].setdefault(current_class, {})
        elif line.startswith("#"):
            continue
        else:
            if not tables or len(fields) != 2:
                raise FormatError("malformed weight line", no)
            try:
                w = float(fields[1])
            except ValueError:
                raise FormatError(f"bad weight {fields[1]!r}", no) from None
            weights = tables[-1][3]
            weights.setdefault(current_class, {})[unescape(fields[0], no)] = w

    for name, attrs, classes, weights in tables:
        if name == "arcs":
            model.arcs = ArcScorer.from_weights(weights.get(None, {}))
            model.arcs.update_count = int(attrs.get("updates", 0))
            continue
        clf = LinearClassifier.from_weights(classes, {c: w for c, w in weights.items() if c is not None},
                                            float(attrs.get("margin", 1.0)))
        if name == "transitions":
            model.transitions = TransitionModel(clf, attrs.get("labeled") == "1",
                                                attrs.get("label_view", "original"))
        elif name == "relations":
            model.relations = RelationModel(clf, attrs.get("tree") == "1",
                                            attrs.get("label_view", "original"))
    return model

