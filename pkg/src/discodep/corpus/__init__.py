from .formats import (
    Correction,
    EduSplitRecord,
    FormatError,
    MarkerRule,
    PdtbRelationRecord,
    RelationMapping,
    ReviewEntry,
    ReviewItem,
    read_corrections,
    read_dep_corpus,
    read_edu_splits,
    read_marker_rules,
    read_pdtb_records,
    read_relation_mapping,
    read_review_queue,
    write_corrections,
    write_dep_corpus,
    write_edu_splits,
    write_marker_rules,
    write_pdtb_records,
    write_relation_mapping,
    write_review_queue,
)
from .rst import Internal, Leaf, RstTree, read_rst_trees, write_rst_trees
from .stats import CorpusStats, corpus_stats, split_corpus
