"""Arc-standard transition system with the artificial root at the stack bottom."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import ROOT, ROOT_LABEL, UNLABELED, DepDocument, DepEdge, is_projective
from .features import EduAtoms, config_feature_names
from .linear import LinearClassifier

SHIFT, LEFT_ARC, RIGHT_ARC = "SHIFT", "LEFT_ARC", "RIGHT_ARC"
UNLABELED_CLASSES = (SHIFT, LEFT_ARC, RIGHT_ARC)


class IllegalActionError(ValueError):
    pass


class NonProjectiveError(ValueError):
    pass


@dataclass(frozen=True)
class Action:
    kind: str
    label: str | None = None

    def __str__(self) -> str:
        return self.kind if self.label is None else f"{self.kind}:{self.label}"

    @classmethod
    def parse(cls, name: str) -> "Action":
        kind, _, label = name.partition(":")
        return cls(kind, label or None)

    def unlabeled(self) -> "Action":
        return Action(self.kind)


@dataclass(frozen=True)
class TransitionConfig:
    stack: tuple[int, ...]
    buffer: tuple[int, ...]
    arcs: tuple[tuple[int, int, str | None], ...] = ()  # (head, dependent, label)

    @classmethod
    def initial(cls, n: int) -> "TransitionConfig":
        return cls((ROOT,), tuple(range(1, n + 1)), ())

    @property
    def terminal(self) -> bool:
        return not self.buffer and self.stack == (ROOT,)


def is_legal(cfg: TransitionConfig, action: Action) -> bool:
    if action.kind == SHIFT:
        return bool(cfg.buffer)
    if len(cfg.stack) < 2:
        return False
    if action.kind == LEFT_ARC:
        return cfg.stack[-2] != ROOT
    if action.kind == RIGHT_ARC:
        # the root takes its single dependent last
        return cfg.stack[-2] != ROOT or not cfg.buffer
    return False


def apply_action(cfg: TransitionConfig, action: Action) -> TransitionConfig:
    if not is_legal(cfg, action):
        raise IllegalActionError(f"illegal action {action} in stack={list(cfg.stack)} "
                                 f"buffer={list(cfg.buffer)}")
    if action.kind == SHIFT:
        return TransitionConfig(cfg.stack + (cfg.buffer[0],), cfg.buffer[1:], cfg.arcs)
    top, second = cfg.stack[-1], cfg.stack[-2]
    if action.kind == LEFT_ARC:
        return TransitionConfig(cfg.stack[:-2] + (top,), cfg.buffer,
                                cfg.arcs + ((top, second, action.label),))
    return TransitionConfig(cfg.stack[:-1], cfg.buffer, cfg.arcs + ((second, top, action.label),))


def oracle_actions(gold: DepDocument, labeled: bool = True, label_view: str = "original") -> list[Action]:
    """Static arc-standard oracle; executing it rebuilds ``gold`` exactly."""
    if not is_projective(gold):
        raise NonProjectiveError("non-projective, projectivize first")
    heads = gold.heads
    labels = gold.labels(label_view)

    def label_of(d):
        if heads[d - 1] == ROOT:
            return ROOT_LABEL
        return UNLABELED if labels[d - 1] is None else labels[d - 1]
    pending = [0] * (gold.n + 1)
    for h in heads:
        pending[h] += 1
    cfg = TransitionConfig.initial(gold.n)
    actions = []
    while not cfg.terminal:
        action = Action(SHIFT)
        if len(cfg.stack) >= 2:
            top, second = cfg.stack[-1], cfg.stack[-2]
            if second != ROOT and heads[second - 1] == top:
                action = Action(LEFT_ARC, label_of(second) if labeled else None)
            elif heads[top - 1] == second and pending[top] == 0:
                action = Action(RIGHT_ARC, label_of(top) if labeled else None)
        if action.kind == LEFT_ARC:
            pending[cfg.stack[-1]] -= 1
        elif action.kind == RIGHT_ARC:
            pending[cfg.stack[-2]] -= 1
        cfg = apply_action(cfg, action)
        actions.append(action)
    return actions


class _Tracker:
    """Incremental feature view of a configuration."""

    def __init__(self, doc: DepDocument):
        self.atoms = EduAtoms(doc)
        self.n_left = [0] * (doc.n + 1)
        self.n_right = [0] * (doc.n + 1)

    def names(self, cfg: TransitionConfig) -> list[str]:
        return config_feature_names(self.atoms, cfg.stack, cfg.buffer, self.n_left, self.n_right)

    def record(self, cfg: TransitionConfig, action: Action) -> None:
        if action.kind == LEFT_ARC:
            self.n_left[cfg.stack[-1]] += 1
        elif action.kind == RIGHT_ARC:
            self.n_right[cfg.stack[-2]] += 1


def legal_mask(cfg: TransitionConfig, classes: Sequence[Action]) -> np.ndarray:
    """Legal classes; labeled root attachment must carry the root label and only it."""
    mask = np.zeros(len(classes), dtype=bool)
    for k, a in enumerate(classes):
        if not is_legal(cfg, a):
            continue
        if a.label is not None and a.kind == RIGHT_ARC:
            to_root = cfg.stack[-2] == ROOT
            if to_root != (a.label == ROOT_LABEL):
                continue
        elif a.label == ROOT_LABEL:
            continue
        mask[k] = True
    return mask


def class_inventory(actions: Sequence[Action], labeled: bool) -> list[str]:
    if not labeled:
        return list(UNLABELED_CLASSES)
    lefts = sorted({a.label for a in actions if a.kind == LEFT_ARC})
    rights = sorted({a.label for a in actions if a.kind == RIGHT_ARC} | {ROOT_LABEL})
    return [SHIFT] + [f"{LEFT_ARC}:{lab}" for lab in lefts] + [f"{RIGHT_ARC}:{lab}" for lab in rights]


@dataclass
class TransitionModel:
    classifier: LinearClassifier
    labeled: bool
    label_view: str = "original"

    @property
    def actions(self) -> list[Action]:
        return [Action.parse(c) for c in self.classifier.classes]


def train_transition_parser(
    corpus: Sequence[DepDocument],
    labeled: bool = True,
    rounds: int = 10,
    seed: int = 0,
    label_view: str = "original",
    margin: float = 1.0,
    nonprojective: str = "projectivize",
    log=None,
) -> TransitionModel:
    """Fit an action classifier on static-oracle derivations.

    Non-projective documents are lifted to a projective tree first
    (``nonprojective="projectivize"``) or dropped (``"skip"``).
    """
    from .projective import projectivize

    derivations = []
    for doc in corpus:
        if not is_projective(doc):
            if nonprojective == "skip":
                continue
            doc = projectivize(doc)
        derivations.append((doc, oracle_actions(doc, labeled, label_view)))
    if not derivations:
        raise ValueError("no usable training documents")

    all_actions = [a for _, acts in derivations for a in acts]
    clf = LinearClassifier(class_inventory(all_actions, labeled), margin)
    classes = [Action.parse(c) for c in clf.classes]

    examples = []
    for doc, acts in derivations:
        tracker = _Tracker(doc)
        cfg = TransitionConfig.initial(doc.n)
        for a in acts:
            ids = clf.table.ids(tracker.names(cfg), grow=True)
            examples.append((ids, clf.class_index[str(a)], legal_mask(cfg, classes)))
            tracker.record(cfg, a)
            cfg = apply_action(cfg, a)

    rng = random.Random(seed)
    order = list(range(len(examples)))
    for r in range(rounds):
        rng.shuffle(order)
        correct = 0
        for k in order:
            ids, gold, legal = examples[k]
            if clf.predict(ids, legal, averaged=False) == gold:
                correct += 1
            clf.learn(ids, gold, legal)
        if log is not None:
            log({"epoch": r + 1, "train_acc": correct / len(examples)})
    return TransitionModel(clf, labeled, label_view)


def parse_transition(doc: DepDocument, model: TransitionModel, labeled: bool | None = None) -> DepDocument:
    """Greedy decoding with illegal actions masked; always 2n steps."""
    if labeled is None:
        labeled = model.labeled
    clf = model.classifier
    classes = model.actions
    tracker = _Tracker(doc)
    cfg = TransitionConfig.initial(doc.n)
    while not cfg.terminal:
        ids = clf.table.ids(tracker.names(cfg))
        action = classes[clf.predict(ids, legal_mask(cfg, classes))]
        if not labeled:
            action = action.unlabeled()
        tracker.record(cfg, action)
        cfg = apply_action(cfg, action)
    return arcs_to_document(doc, cfg.arcs, model.label_view)


def arcs_to_document(doc: DepDocument, arcs, label_view: str = "original") -> DepDocument:
    edges = []
    for h, d, label in arcs:
        if label is None:
            label = ROOT_LABEL if h == ROOT else UNLABELED
        if label_view == "unified":
            edges.append(DepEdge(h, d, ROOT_LABEL if h == ROOT else UNLABELED, label))
        else:
            edges.append(DepEdge(h, d, label))
    return doc.with_edges(edges)
