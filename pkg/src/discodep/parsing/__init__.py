from .decode import eisner_decode, mst_decode, score_matrix, tree_score
from .features import extract_arc_features
from .graph import parse_graph, train_graph_parser
from .labeler import RelationModel, label_relations, train_relation_labeler, two_stage_parse
from .linear import ArcScorer, LinearClassifier
from .model import PARSER_KINDS, ParserModel, dump_model, load_model, train_parser
from .projective import projectivize
from .transition import (
    Action,
    IllegalActionError,
    NonProjectiveError,
    TransitionConfig,
    TransitionModel,
    apply_action,
    oracle_actions,
    parse_transition,
    train_transition_parser,
)
