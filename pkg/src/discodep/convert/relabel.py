from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Sequence

from ..core import ROOT_LABEL, DepDocument, InvalidTreeError, validate_tree
from ..corpus.formats import Correction


class MappingError(KeyError):
    pass


def map_relations(
    docs: Sequence[DepDocument],
    mapping: Mapping[tuple[str, str], str],
    scheme: str,
    strict: bool = False,
) -> tuple[list[DepDocument], int]:
    """Fill ``rel_unified`` from ``(scheme, rel_original)``.

    Returns the relabeled documents and the number of edges whose label had
    no mapping (left unmapped). In strict mode a missing key raises instead.
    Only ``rel_original`` is consulted, so applying this twice is harmless.
    """
    out = []
    misses = 0
    for doc in docs:
        edges = []
        for e in doc.edges:
            if e.is_root or e.rel_original == ROOT_LABEL:
                edges.append(replace(e, rel_unified=ROOT_LABEL))
                continue
            target = mapping.get((scheme, e.rel_original))
            if target is None:
                if strict:
                    raise MappingError(
                        f"no unified label for {scheme} {e.rel_original!r} "
                        f"({doc.doc_id}, EDU {e.dependent})")
                misses += 1
            edges.append(replace(e, rel_unified=target))
        out.append(replace(doc, edges=tuple(edges)))
    return out, misses


def apply_corrections(doc: DepDocument, corrections: Sequence[Correction]) -> DepDocument:
    """Replace edges from a correction batch, all or nothing.

    Corrected edges are marked high-confidence; their unified label is
    cleared since the original label changed.
    """
    if not corrections:
        return doc
    by_dep = {e.dependent: e for e in doc.edges}
    for c in corrections:
        if c.dependent not in by_dep:
            raise InvalidTreeError(f"{doc.doc_id}: correction targets missing EDU {c.dependent}")
        old = by_dep[c.dependent]
        by_dep[c.dependent] = replace(old, head=c.new_head, rel_original=c.new_label,
                                      rel_unified=None, confidence="high")
    fixed = doc.with_edges(by_dep.values())
    report = validate_tree(fixed)
    if report:
        raise InvalidTreeError(f"{doc.doc_id}: corrections rejected: " + "; ".join(map(str, report)))
    return fixed
