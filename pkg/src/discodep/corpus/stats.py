from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..core import DepDocument


@dataclass(frozen=True)
class CorpusStats:
    n_docs: int
    n_relations: int
    avg_edus_per_doc: float
    avg_chars_per_doc: float
    relation_histogram: dict[str, tuple[int, float]]  # label -> (count, percent)

    def to_tsv(self) -> str:
        lines = [
            f"n_docs\t{self.n_docs}",
            f"n_relations\t{self.n_relations}",
            f"avg_edus_per_doc\t{self.avg_edus_per_doc:.2f}",
            f"avg_chars_per_doc\t{self.avg_chars_per_doc:.2f}",
        ]
        for label, (count, pct) in self.relation_histogram.items():
            lines.append(f"rel\t{label}\t{count}\t{pct:.2f}")
        return "\n".join(lines) + "\n"


def corpus_stats(docs: Sequence[DepDocument], count_root: bool = False,
                 label_view: str = "original") -> CorpusStats:
    """Size and relation distribution of a corpus.

    The artificial root edge is not a relation unless ``count_root`` is set,
    so a document of n EDUs contributes n - 1 relations by default.
    """
    counts: Counter[str] = Counter()
    n_edus = n_chars = 0
    for doc in docs:
        n_edus += len(doc.edus)
        n_chars += sum(e.char_len for e in doc.edus)
        for e in doc.edges:
            if e.is_root and not count_root:
                continue
            lab = e.label(label_view)
            counts["_" if lab is None else lab] += 1
    total = sum(counts.values())
    # most frequent first, ties by label, so the result ignores document order
    hist = {
        lab: (c, 100.0 * c / total)
        for lab, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    }
    n_docs = len(docs)
    return CorpusStats(
        n_docs=n_docs,
        n_relations=total,
        avg_edus_per_doc=n_edus / n_docs if n_docs else 0.0,
        avg_chars_per_doc=n_chars / n_docs if n_docs else 0.0,
        relation_histogram=hist,
    )


def split_corpus(docs: Sequence[DepDocument], n_train: int, n_dev: int, n_test: int,
                 seed: int) -> tuple[list[DepDocument], list[DepDocument], list[DepDocument]]:
    """Seeded shuffle of whole documents, then a prefix partition.

    Documents keep their input order inside each split.
    """
    if min(n_train, n_dev, n_test) < 0 or n_train + n_dev + n_test != len(docs):
        raise ValueError(
            f"split sizes {n_train}+{n_dev}+{n_test} do not add up to {len(docs)} documents")
    order = list(range(len(docs)))
    random.Random(seed).shuffle(order)
    cuts = (order[:n_train], order[n_train:n_train + n_dev], order[n_train + n_dev:])
    return tuple([docs[i] for i in sorted(part)] for part in cuts)  # type: ignore[return-value]
