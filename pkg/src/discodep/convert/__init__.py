from .pdtb import ConversionError, complement_subtree, match_marker, pdtb_to_dep
from .relabel import MappingError, apply_corrections, map_relations
from .rst import apply_edu_splits, rst_to_dep
