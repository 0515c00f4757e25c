import random

import numpy as np
import pytest

import oracles
from discodep.core import DepDocument, is_projective, validate_tree
from discodep.eval import score
from discodep.parsing import (
    Action,
    ArcScorer,
    IllegalActionError,
    LinearClassifier,
    NonProjectiveError,
    TransitionConfig,
    TransitionModel,
    apply_action,
    dump_model,
    label_relations,
    load_model,
    oracle_actions,
    parse_graph,
    parse_transition,
    projectivize,
    train_graph_parser,
    train_parser,
    train_relation_labeler,
    train_transition_parser,
    two_stage_parse,
)
from discodep.parsing.linear import WeightTable
from discodep.parsing.projective import nonprojective_arcs
from discodep.parsing.transition import LEFT_ARC, RIGHT_ARC, SHIFT
from discodep.corpus import FormatError, split_corpus
from discodep.synthetic import chain_corpus, depth_corpus, random_corpus


def doc_from(heads, labels=None, name="t"):
    return DepDocument.from_heads(name, [f"e{i}" for i in range(1, len(heads) + 1)], heads, labels)


class TestTransitions:
    def test_chain_oracle(self):
        doc = doc_from([0, 1], ["root", "joint"])
        assert [str(a) for a in oracle_actions(doc)] == ["SHIFT", "SHIFT", "RIGHT_ARC:joint", "RIGHT_ARC:root"]

    def test_single_edu_oracle(self):
        assert [str(a) for a in oracle_actions(doc_from([0]))] == ["SHIFT", "RIGHT_ARC:root"]

    def test_unlabeled_oracle(self):
        acts = oracle_actions(doc_from([2, 0], ["joint", "root"]), labeled=False)
        assert acts == [Action(SHIFT), Action(SHIFT), Action(LEFT_ARC), Action(RIGHT_ARC)]

    def test_nonprojective_rejected(self):
        with pytest.raises(NonProjectiveError, match="non-projective, projectivize first"):
            oracle_actions(doc_from([3, 3, 0, 1]))

    def test_shift_on_empty_buffer(self):
        with pytest.raises(IllegalActionError):
            apply_action(TransitionConfig((0, 1), ()), Action(SHIFT))

    def test_left_arc(self):
        cfg = apply_action(TransitionConfig((0, 1, 2), (3,)), Action(LEFT_ARC, "x"))
        assert cfg.stack == (0, 2) and cfg.arcs == ((2, 1, "x"),)

    def test_right_arc_to_root(self):
        cfg = apply_action(TransitionConfig((0, 1), ()), Action(RIGHT_ARC, "root"))
        assert cfg.arcs == ((0, 1, "root"),) and cfg.terminal

    def test_root_is_never_dependent(self):
        with pytest.raises(IllegalActionError):
            apply_action(TransitionConfig((0, 1), ()), Action(LEFT_ARC))

    def test_root_waits_for_buffer(self):
        with pytest.raises(IllegalActionError):
            apply_action(TransitionConfig((0, 1), (2,)), Action(RIGHT_ARC))

    def test_action_names(self):
        assert Action.parse("LEFT_ARC:example illustration") == Action(LEFT_ARC, "example illustration")
        assert str(Action(SHIFT)) == "SHIFT"


class TestTransitionParser:
    def test_identical_docs_fit(self):
        docs = [doc_from([0, 1], ["root", "joint"], name=f"d{k}") for k in range(5)]
        rows = []
        train_transition_parser(docs, rounds=3, log=rows.append)
        assert rows[-1]["train_acc"] == 1.0

    def test_unlabeled_inventory(self):
        model = train_transition_parser(chain_corpus(10, 0), labeled=False, rounds=1)
        assert model.classifier.classes == [SHIFT, LEFT_ARC, RIGHT_ARC]

    def test_single_edu_forced(self):
        model = train_transition_parser(chain_corpus(10, 0), rounds=1)
        out = parse_transition(doc_from([0]), model)
        assert out.heads == [0] and out.labels() == ["root"]

    def test_untrained_model_gives_valid_tree(self):
        model = TransitionModel(LinearClassifier([SHIFT, LEFT_ARC, RIGHT_ARC]), labeled=False)
        for n in range(1, 8):
            out = parse_transition(doc_from([0] + list(range(1, n))), model)
            assert not validate_tree(out)
        # all-zero scores: SHIFT first, then left arcs, root takes the last EDU
        assert parse_transition(doc_from([0, 1, 2]), model).heads == [3, 3, 0]

    def test_chain_learned(self):
        docs = chain_corpus(60, 3)
        model = train_transition_parser(docs[:50], rounds=5)
        for doc in docs[50:]:
            assert parse_transition(doc, model).heads == doc.heads

    def test_random_corpus_always_valid(self):
        docs = random_corpus(40, seed=2, max_edus=9)
        model = train_transition_parser(docs[:30], rounds=2)
        for doc in docs[30:]:
            assert not validate_tree(parse_transition(doc, model))

    def test_skip_nonprojective(self):
        bad = doc_from([3, 3, 0, 1])
        with pytest.raises(ValueError):
            train_transition_parser([bad], nonprojective="skip")
        assert train_transition_parser([bad], rounds=1)


class TestGraphParser:
    def test_two_edu_doc(self):
        doc = doc_from([0, 1], ["root", "joint"])
        rows = []
        model = train_graph_parser([doc], epochs=5, log=rows.append)
        assert rows[-1]["train_uas"] == 1.0
        assert parse_graph(doc, model) == [0, 1]

    def test_zero_epochs(self):
        doc = doc_from([0, 1, 1])
        model = train_graph_parser([doc], epochs=0)
        assert all(w == 0 for w in model.averaged_weights.values())
        assert oracles.is_tree(parse_graph(doc, model))

    @pytest.mark.parametrize("decoder", ["eisner", "mst"])
    def test_chain_held_out(self, decoder):
        docs = chain_corpus(60, 4)
        model = train_graph_parser(docs[:50], epochs=5, decoder=decoder)
        for doc in docs[50:]:
            assert parse_graph(doc, model, decoder) == doc.heads

    def test_reproducible(self):
        docs = random_corpus(20, seed=5)
        a = train_graph_parser(docs, epochs=3, seed=1).averaged_weights
        b = train_graph_parser(docs, epochs=3, seed=1).averaged_weights
        assert a == b

    def test_unknown_decoder(self):
        with pytest.raises(ValueError):
            train_graph_parser([doc_from([0, 1])], decoder="cky")

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            train_graph_parser([])


class TestLabeler:
    def test_single_label(self):
        docs = [doc_from([0, 1, 1], ["root", "joint", "joint"], name=f"d{k}") for k in range(3)]
        model = train_relation_labeler(docs, rounds=2)
        out = label_relations(doc_from([0, 1, 2, 1]), model)
        assert out.labels() == ["root", "joint", "joint", "joint"]

    def test_depth_separable(self):
        train, _, test = split_corpus(depth_corpus(200, 1), 160, 0, 40, seed=1)
        model = train_relation_labeler(train, rounds=10)
        for doc in test:
            assert label_relations(doc, model).labels() == doc.labels()

    def test_two_stage_perfect_models(self):
        docs = depth_corpus(120, 2)
        structure = train_transition_parser(docs, labeled=False, rounds=10)
        relations = train_relation_labeler(docs, rounds=10)
        for doc in docs[:20]:
            out = two_stage_parse(doc, structure, relations)
            assert (out.heads, out.labels()) == (doc.heads, doc.labels())

    def test_unified_view(self):
        doc = doc_from([0, 1], ["root", "x"])
        doc = doc.with_edges([doc.edges[0], doc.edges[1].__class__(1, 2, "x", "joint")])
        model = train_relation_labeler([doc], rounds=2, label_view="unified")
        assert label_relations(doc_from([0, 1]), model).labels("unified") == ["root", "joint"]


class TestProjectivize:
    def test_projective_unchanged(self):
        doc = doc_from([0, 1, 1])
        assert projectivize(doc) is doc

    def test_crossing_example(self):
        doc = doc_from([3, 3, 0, 1])
        out = projectivize(doc)
        assert out.n == 4 and is_projective(out)
        assert out.heads == [3, 3, 0, 3]

    def test_random_trees(self):
        rng = random.Random(8)
        from discodep.synthetic import random_heads
        for _ in range(300):
            heads = random_heads(rng, rng.randint(1, 9))
            out = projectivize(doc_from(heads))
            assert not validate_tree(out) and is_projective(out)
            assert nonprojective_arcs(out.heads) == []


class TestLinear:
    def test_weight_table_average(self):
        t = WeightTable(1)
        ids = t.ids(["a"], grow=True)
        t.update(ids, 0, 1.0)
        t.tick()
        t.tick()
        # weight 1 held for both steps
        assert t.matrix(averaged=True)[ids[0], 0] == pytest.approx(1.0)
        t.update(ids, 0, -1.0)
        t.tick()
        t.tick()
        assert t.matrix(averaged=True)[ids[0], 0] == pytest.approx(0.5)

    def test_unknown_features_score_zero(self):
        t = WeightTable(2)
        assert list(t.ids(["never seen"])) == [0]

    def test_classifier_tie_break(self):
        clf = LinearClassifier(["b", "a"])
        ids = clf.table.ids(["x"], grow=True)
        assert clf.predict(ids) == 0
        assert clf.predict(ids, legal=np.array([False, True])) == 1

    def test_margin_update(self):
        clf = LinearClassifier(["a", "b"])
        ids = clf.table.ids(["x"], grow=True)
        for _ in range(5):
            clf.learn(ids, 1)
        assert clf.predict(ids, averaged=False) == 1
        scores = clf.scores(ids, averaged=False)
        assert scores[1] - scores[0] >= 1.0


class TestModelFiles:
    @pytest.mark.parametrize("kind", ["graph-eisner", "graph-mst", "transition", "two-stage"])
    def test_round_trip(self, kind):
        docs = depth_corpus(30, 3)
        model = train_parser(kind, docs, epochs=2, seed=0)
        data = dump_model(model)
        again = load_model(data)
        assert dump_model(again) == data
        for doc in docs[:10]:
            assert again.parse(doc) == model.parse(doc)

    def test_not_a_model(self):
        with pytest.raises(FormatError):
            load_model(b"hello\n")

    def test_bad_weight(self):
        with pytest.raises(FormatError, match="bad weight"):
            load_model(b"# discodep-model\tkind=graph-eisner\tlabel_view=original\n"
                       b"# table\tarcs\tupdates=0\nbias\tnope\n")

    def test_arc_scorer_from_weights(self):
        m = ArcScorer.from_weights({"a": 1.5, "b": -2.0})
        assert m.averaged_weights == {"a": 1.5, "b": -2.0}


def test_all_parsers_on_chains():
    train, _, test = split_corpus(chain_corpus(100, 9), 80, 0, 20, seed=9)
    for kind in ("graph-eisner", "graph-mst", "transition", "two-stage"):
        model = train_parser(kind, train, epochs=5, seed=0)
        result = score(test, [model.parse(d) for d in test])
        assert result.uas == 1.0 and result.las_original == 1.0, kind
