"""Unified dependency discourse corpora: conversion, benchmark parsers, evaluation."""
from importlib import resources

from .core import (
    ROOT,
    ROOT_LABEL,
    DepDocument,
    DepEdge,
    Edu,
    InvalidTreeError,
    NotASubtreeError,
    RelationScheme,
    TreeFeatures,
    ValidationReport,
    is_projective,
    subtree_root,
    tree_features,
    validate_tree,
)
from .kernels import BACKEND

__version__ = "0.1.0"


def default_markers():
    from .corpus.formats import read_marker_rules

    return read_marker_rules(resources.files(__name__).joinpath("data/markers.mkr").read_bytes())


def default_mapping():
    from .corpus.formats import read_relation_mapping

    return read_relation_mapping(resources.files(__name__).joinpath("data/unified.map").read_bytes())
