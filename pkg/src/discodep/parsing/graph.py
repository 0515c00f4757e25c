"""Graph-based parser: arc-factored scores, tree decoding, averaged structured perceptron."""
from __future__ import annotations

import random
from typing import Callable, Sequence

import numpy as np

from ..core import ROOT, DepDocument
from .decode import arc_feature_ids, eisner_decode, mst_decode, scores_from_ids
from .linear import ArcScorer

DECODERS = {"eisner": eisner_decode, "mst": mst_decode}


def _decode(decoder: str, s: np.ndarray, single_root: bool) -> list[int]:
    try:
        fn = DECODERS[decoder]
    except KeyError:
        raise ValueError(f"unknown decoder {decoder!r}") from None
    return fn(s, single_root=single_root)


def train_graph_parser(
    corpus: Sequence[DepDocument],
    epochs: int = 10,
    seed: int = 0,
    decoder: str = "eisner",
    single_root: bool = True,
    log: Callable[[dict], None] | None = None,
) -> ArcScorer:
    """Averaged structured perceptron over gold head sequences.

    Documents are visited in a seeded shuffle each epoch. On a wrong
    prediction the features of the gold arcs are added and those of the
    predicted arcs subtracted.
    """
    if not corpus:
        raise ValueError("empty training corpus")
    model = ArcScorer()
    table = model.table
    feats = [arc_feature_ids(doc, table, grow=True) for doc in corpus]
    golds = [doc.heads for doc in corpus]
    rng = random.Random(seed)
    order = list(range(len(corpus)))
    for epoch in range(epochs):
        rng.shuffle(order)
        correct = total = 0
        for k in order:
            ids, gold = feats[k], golds[k]
            s = scores_from_ids(ids, table.w[:, 0])
            pred = _decode(decoder, s, single_root)
            total += len(gold)
            for d, (g, p) in enumerate(zip(gold, pred), start=1):
                if g == p:
                    correct += 1
                    continue
                table.update(ids[g, d], 0, 1.0)
                table.update(ids[p, d], 0, -1.0)
            if pred != gold:
                model.update_count += 1
            table.tick()
        if log is not None:
            log({"epoch": epoch + 1, "train_uas": correct / total})
    return model


def parse_graph(doc: DepDocument, model: ArcScorer, decoder: str = "eisner",
                single_root: bool = True, use_averaged: bool = True) -> list[int]:
    if doc.n == 0:
        return []
    s = scores_from_ids(arc_feature_ids(doc, model.table), model.vector(use_averaged))
    return _decode(decoder, s, single_root)


def heads_to_document(doc: DepDocument, heads: Sequence[int]) -> DepDocument:
    from ..core import ROOT_LABEL, UNLABELED, DepEdge

    edges = [DepEdge(h, d, ROOT_LABEL if h == ROOT else UNLABELED) for d, h in enumerate(heads, start=1)]
    return doc.with_edges(edges)
