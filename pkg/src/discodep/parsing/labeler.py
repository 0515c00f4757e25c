"""Relation labeling over a fixed tree, and the two-stage parser built on it."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

from ..core import ROOT, ROOT_LABEL, UNLABELED, DepDocument, _require_valid, tree_features
from .features import EduAtoms, label_feature_names
from .linear import LinearClassifier
from .transition import TransitionModel, parse_transition


@dataclass
class RelationModel:
    classifier: LinearClassifier
    use_tree_features: bool = True
    label_view: str = "original"


def _edge_names(at: EduAtoms, doc: DepDocument, d: int, h: int, use_tree: bool) -> list[str]:
    tf = tree_features(doc, d) if use_tree else None
    return label_feature_names(at, h, d, tf)


def train_relation_labeler(
    corpus: Sequence[DepDocument],
    rounds: int = 10,
    seed: int = 0,
    label_view: str = "original",
    use_tree_features: bool = True,
    margin: float = 1.0,
    log=None,
) -> RelationModel:
    """Multiclass margin classifier predicting each non-root edge's relation."""
    events = []
    labels = set()
    for doc in corpus:
        at = EduAtoms(doc)
        for e in doc.edges:
            if e.is_root:
                continue
            lab = e.label(label_view)
            lab = UNLABELED if lab is None else lab
            labels.add(lab)
            events.append((doc, at, e.dependent, e.head, lab))
    if not events:
        raise ValueError("no labeled edges to train on")
    clf = LinearClassifier(sorted(labels), margin)
    examples = [
        (clf.table.ids(_edge_names(at, doc, d, h, use_tree_features), grow=True), clf.class_index[lab])
        for doc, at, d, h, lab in events
    ]
    rng = random.Random(seed)
    order = list(range(len(examples)))
    for r in range(rounds):
        rng.shuffle(order)
        correct = 0
        for k in order:
            ids, gold = examples[k]
            if clf.predict(ids, averaged=False) == gold:
                correct += 1
            clf.learn(ids, gold)
        if log is not None:
            log({"epoch": r + 1, "label_acc": correct / len(examples)})
    return RelationModel(clf, use_tree_features, label_view)


def label_relations(doc: DepDocument, model: RelationModel) -> DepDocument:
    """Assign a relation to every non-root edge of ``doc``'s tree.

    The root edge always keeps the root label.
    """
    _require_valid(doc)
    at = EduAtoms(doc)
    clf = model.classifier
    edges = []
    for e in doc.edges:
        if e.head == ROOT:
            label = ROOT_LABEL
        else:
            ids = clf.table.ids(_edge_names(at, doc, e.dependent, e.head, model.use_tree_features))
            label = clf.classes[clf.predict(ids)]
        if model.label_view == "unified":
            edges.append(replace(e, rel_unified=label))
        else:
            edges.append(replace(e, rel_original=label))
    return doc.with_edges(edges)


def two_stage_parse(doc: DepDocument, structure: TransitionModel, relations: RelationModel) -> DepDocument:
    """Unlabeled transition parse, then relation labeling with tree features."""
    return label_relations(parse_transition(doc, structure, labeled=False), relations)
