"""Sparse linear models with lazily averaged weights.

Feature strings are interned into row ids; row 0 is reserved for features
never seen in training and always holds zero weight. Averaging follows the
usual bookkeeping trick: with ``t`` steps finished, an update ``delta`` to
``w`` also adds ``t * delta`` to ``u``, and the mean of the weights seen
after each step is ``w - u / t``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class WeightTable:
    def __init__(self, n_out: int):
        self.n_out = n_out
        self.index: dict[str, int] = {}
        self.names: list[str] = ["<unk>"]
        self.w = np.zeros((64, n_out))
        self.u = np.zeros((64, n_out))
        self.step = 0  # finished steps
        self._avg: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.names) - 1

    def ids(self, names: Iterable[str], grow: bool = False) -> np.ndarray:
        out = []
        index = self.index
        for name in names:
            i = index.get(name)
            if i is None:
                if not grow:
                    out.append(0)
                    continue
                i = len(self.names)
                index[name] = i
                self.names.append(name)
                if i >= self.w.shape[0]:
                    self._resize(2 * i)
            out.append(i)
        return np.asarray(out, dtype=np.intp)

    def _resize(self, rows: int) -> None:
        for attr in ("w", "u"):
            old = getattr(self, attr)
            new = np.zeros((rows, self.n_out))
            new[: old.shape[0]] = old
            setattr(self, attr, new)

    def update(self, ids: np.ndarray, out: int, delta: float) -> None:
        np.add.at(self.w[:, out], ids, delta)
        np.add.at(self.u[:, out], ids, self.step * delta)
        self.w[0] = 0.0
        self.u[0] = 0.0
        self._avg = None

    def tick(self) -> None:
        self.step += 1
        self._avg = None

    def matrix(self, averaged: bool) -> np.ndarray:
        if not averaged:
            return self.w
        if self.step == 0:
            return self.w
        if self._avg is None:
            self._avg = self.w - self.u / self.step
        return self._avg

    def items(self, averaged: bool) -> list[tuple[str, np.ndarray]]:
        m = self.matrix(averaged)
        return [(name, m[i]) for i, name in enumerate(self.names) if i and np.any(m[i] != 0.0)]

    @classmethod
    def frozen(cls, n_out: int, rows: Sequence[tuple[str, Sequence[float]]]) -> "WeightTable":
        """A table whose raw and averaged weights coincide (loaded from disk)."""
        t = cls(n_out)
        ids = t.ids((name for name, _ in rows), grow=True)
        for i, (_, vals) in zip(ids, rows):
            t.w[i] = vals
        return t


class ArcScorer:
    """Arc-factored perceptron weights."""

    def __init__(self):
        self.table = WeightTable(1)
        self.update_count = 0

    @property
    def weights(self) -> dict[str, float]:
        return {k: float(v[0]) for k, v in self.table.items(averaged=False)}

    @property
    def averaged_weights(self) -> dict[str, float]:
        return {k: float(v[0]) for k, v in self.table.items(averaged=True)}

    def vector(self, averaged: bool) -> np.ndarray:
        return self.table.matrix(averaged)[:, 0]

    @classmethod
    def from_weights(cls, weights: dict[str, float]) -> "ArcScorer":
        s = cls()
        s.table = WeightTable.frozen(1, [(k, [v]) for k, v in weights.items()])
        return s


class LinearClassifier:
    """Multiclass linear classifier trained with a margin (hinge) objective.

    Each step takes a subgradient step on the multiclass hinge loss: when the
    gold class does not beat the best legal rival by ``margin``, add the
    features to the gold row and subtract them from the rival's.
    """

    def __init__(self, classes: Sequence[str], margin: float = 1.0):
        self.classes = list(classes)
        self.class_index = {c: i for i, c in enumerate(self.classes)}
        self.margin = margin
        self.table = WeightTable(len(self.classes))

    def scores(self, ids: np.ndarray, averaged: bool = True) -> np.ndarray:
        return self.table.matrix(averaged)[ids].sum(axis=0)

    def predict(self, ids: np.ndarray, legal: np.ndarray | None = None, averaged: bool = True) -> int:
        """Best class index; among equal scores the earliest class wins."""
        sc = self.scores(ids, averaged)
        if legal is not None:
            sc = np.where(legal, sc, -np.inf)
        return int(np.argmax(sc))

    def learn(self, ids: np.ndarray, gold: int, legal: np.ndarray | None = None) -> bool:
        sc = self.scores(ids, averaged=False).copy()
        sc[gold] = -np.inf
        if legal is not None:
            sc = np.where(legal, sc, -np.inf)
        rival = int(np.argmax(sc))
        updated = False
        if np.isfinite(sc[rival]):
            gold_score = self.table.w[ids, gold].sum()
            if gold_score - sc[rival] < self.margin:
                self.table.update(ids, gold, 1.0)
                self.table.update(ids, rival, -1.0)
                updated = True
        self.table.tick()
        return updated

    def weights(self, averaged: bool = True) -> dict[str, dict[str, float]]:
        out: dict[str, dict[str, float]] = {c: {} for c in self.classes}
        for name, row in self.table.items(averaged):
            for k, v in enumerate(row):
                if v != 0.0:
                    out[self.classes[k]][name] = float(v)
        return out

    @classmethod
    def from_weights(cls, classes: Sequence[str], weights: dict[str, dict[str, float]],
                     margin: float = 1.0) -> "LinearClassifier":
        clf = cls(classes, margin)
        rows: dict[str, list[float]] = {}
        for c, table in weights.items():
            k = clf.class_index[c]
            for name, v in table.items():
                rows.setdefault(name, [0.0] * len(clf.classes))[k] = v
        clf.table = WeightTable.frozen(len(clf.classes), list(rows.items()))
        return clf
