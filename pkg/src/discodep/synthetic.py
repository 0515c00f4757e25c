"""Synthetic corpora with the file shapes of the real data.

The original treebanks cannot be redistributed, so tests, benchmarks and
demos run on these generators. Every generator is deterministic in its seed.
"""
from __future__ import annotations

import random
from typing import Sequence

from .core import ROOT, ROOT_LABEL, DepDocument, DepEdge, Edu

ALPHABET = "的一是在不了有和人这中大为上个国我以要他时来用们生到作地于出就分对成会可主发年动同工也能下过子说产种面而方后多定行学法所民得经十三之进着等部度家电力里如水化高自二理起小物现实加量都两体制机当使点从业本去把性好应开它合还因由其些然前外天政四日那社义事平形相全表间样与关各重新线内数正心反你明看原又么利比或但质气第向道命此变条只没结解问意建月公无系军很情者最立代想已通并提直题党程展五果料象员革位入常文总次品式活设及管特件长求老头基资边流路级少图山统接知较将组见计别她手角期根论运农指几九区强放决西被干做必战先回则任取据处理世车"
TOP_LABELS = {  # unified-corpus relation shares, in percent
    "joint": 52.7,
    "explanation": 16.7,
    "causality": 6.9,
    "continuation": 4.3,
    "progressive": 4.1,
}
CORPUS_SIZES = {  # documents, relations
    "HIT": (353, 9796),
    "SU": (2332, 8181),
    "SCI": (108, 1392),
    "UNIFIED": (2793, 19369),
}
SPLIT_SIZES = {
    "HIT": (250, 50, 53),
    "SU": (1600, 400, 332),
    "SCI": (68, 20, 20),
    "UNIFIED": (1918, 470, 405),
}


def random_text(rng: random.Random, lo: int = 3, hi: int = 12, prefix: str = "") -> str:
    return prefix + "".join(rng.choice(ALPHABET) for _ in range(rng.randint(lo, hi)))


def _doc(doc_id: str, texts: Sequence[str], heads: Sequence[int], labels: Sequence[str]) -> DepDocument:
    edus = tuple(Edu(i + 1, t) for i, t in enumerate(texts))
    edges = tuple(
        DepEdge(h, i + 1, ROOT_LABEL if h == ROOT else lab, ROOT_LABEL if h == ROOT else None)
        for i, (h, lab) in enumerate(zip(heads, labels))
    )
    return DepDocument(doc_id, edus, edges)


def random_heads(rng: random.Random, n: int, single_root: bool = True) -> list[int]:
    """Uniform-ish random rooted tree: nodes attach, in random order, to an already placed node."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * n
    placed = [ROOT]
    for k, d in enumerate(order):
        if single_root:
            heads[d - 1] = ROOT if k == 0 else rng.choice(placed[1:])
        else:
            heads[d - 1] = rng.choice(placed)
        placed.append(d)
    return heads


def random_projective_heads(rng: random.Random, n: int) -> list[int]:
    """Random single-root projective tree built from nested spans."""
    heads = [0] * n

    def span(lo, hi, head):
        r = rng.randint(lo, hi)
        heads[r - 1] = head
        children(lo, r - 1, r)
        children(r + 1, hi, r)

    def children(lo, hi, head):
        while lo <= hi:
            end = rng.randint(lo, hi)
            span(lo, end, head)
            lo = end + 1

    if n:
        span(1, n, ROOT)
    return heads


def random_corpus(n_docs: int, seed: int, max_edus: int = 10, labels: Sequence[str] = tuple(TOP_LABELS),
                  projective: bool = False, prefix: str = "doc") -> list[DepDocument]:
    rng = random.Random(seed)
    docs = []
    for k in range(n_docs):
        n = rng.randint(1, max_edus)
        heads = random_projective_heads(rng, n) if projective else random_heads(rng, n)
        texts = [random_text(rng) for _ in range(n)]
        docs.append(_doc(f"{prefix}{k:04d}", texts, heads, [rng.choice(labels) for _ in range(n)]))
    return docs


def chain_corpus(n_docs: int, seed: int, min_edus: int = 2, max_edus: int = 10) -> list[DepDocument]:
    """Every EDU depends on the one before it; the first hangs off the root."""
    rng = random.Random(seed)
    docs = []
    for k in range(n_docs):
        n = rng.randint(min_edus, max_edus)
        texts = [random_text(rng) for _ in range(n)]
        docs.append(_doc(f"chain{k:04d}", texts, list(range(n)), ["continuation"] * n))
    return docs


def depth_corpus(n_docs: int, seed: int, min_edus: int = 3, max_edus: int = 8) -> list[DepDocument]:
    """Relation label decided by tree depth alone.

    The first EDU is the top unit. Any later EDU whose text starts with
    ``A`` attaches to it, one starting with ``B`` to its left neighbour.
    Edges from the top unit are ``joint``, all deeper edges ``explanation``,
    so the label is a function of the head's depth and not of the
    dependent's own words.
    """
    rng = random.Random(seed)
    docs = []
    for k in range(n_docs):
        n = rng.randint(min_edus, max_edus)
        texts = [random_text(rng, prefix=rng.choice("AB")) for _ in range(n)]
        heads = [ROOT] + [1 if texts[i][0] == "A" else i for i in range(1, n)]
        labels = [ROOT_LABEL] + ["joint" if h == 1 else "explanation" for h in heads[1:]]
        docs.append(_doc(f"depth{k:04d}", texts, heads, labels))
    return docs


def doc_sizes(rng: random.Random, n_docs: int, n_relations: int) -> list[int]:
    """EDU counts for ``n_docs`` documents totalling ``n_relations`` non-root edges."""
    total = n_relations + n_docs
    if total < n_docs:
        raise ValueError("fewer EDUs than documents")
    sizes = [1] * n_docs
    for _ in range(total - n_docs):
        sizes[rng.randrange(n_docs)] += 1
    return sizes


def label_distribution(other_labels: int = 12) -> dict[str, float]:
    """The five most frequent unified labels plus placeholders sharing the remainder."""
    rest = 100.0 - sum(TOP_LABELS.values())
    dist = dict(TOP_LABELS)
    for k in range(other_labels):
        dist[f"other-{k + 1:02d}"] = rest / other_labels
    return dist


def shaped_corpus(n_docs: int, n_relations: int, seed: int,
                  distribution: dict[str, float] | None = None) -> list[DepDocument]:
    """A corpus with the given size whose relation labels are drawn from ``distribution``."""
    rng = random.Random(seed)
    dist = distribution or label_distribution()
    names, weights = list(dist), list(dist.values())
    docs = []
    for k, n in enumerate(doc_sizes(rng, n_docs, n_relations)):
        heads = random_heads(rng, n)
        labels = rng.choices(names, weights, k=n)
        texts = [random_text(rng, 2, 40) for _ in range(n)]
        docs.append(_doc(f"syn{k:05d}", texts, heads, labels))
    return docs
