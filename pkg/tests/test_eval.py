import random
from dataclasses import replace

import pytest

from discodep.core import DepDocument
from discodep.eval import AlignmentError, agreement, score
from discodep.synthetic import random_corpus, random_heads


def doc(heads, labels, name="d"):
    return DepDocument.from_heads(name, ["x"] * len(heads), heads, labels)


def test_identical():
    c = random_corpus(10, seed=0)
    r = score(c, c)
    assert (r.uas, r.las_original, r.las_unified) == (1.0, 1.0, 1.0)
    assert r.n_edus_scored == sum(d.n for d in c)


def test_one_wrong_head():
    gold = doc([0, 1, 1], ["root", "j", "j"])
    pred = doc([0, 1, 2], ["root", "j", "j"])
    r = score([gold], [pred])
    assert r.uas == pytest.approx(2 / 3) and r.las == pytest.approx(2 / 3)


def test_one_wrong_label():
    gold = doc([0, 1, 1, 1], ["root", "a", "b", "c"])
    pred = doc([0, 1, 1, 1], ["root", "a", "b", "x"])
    r = score([gold], [pred])
    assert (r.uas, r.las) == (1.0, 0.75)
    assert r.per_label_confusion[("c", "x")] == 1
    assert ("root", "root") not in r.per_label_confusion


def test_exclude_root():
    gold = doc([0, 1], ["root", "a"])
    pred = doc([2, 0], ["a", "root"])
    assert score([gold], [pred]).n_edus_scored == 2
    r = score([gold], [pred], exclude_root=True)
    assert r.n_edus_scored == 1 and r.uas == 0.0


def test_macro_vs_micro():
    g = [doc([0], ["root"], "a"), doc([0, 1, 1], ["root", "x", "x"], "b")]
    p = [doc([0], ["root"], "a"), doc([0, 1, 2], ["root", "x", "x"], "b")]
    assert score(g, p).uas == pytest.approx(3 / 4)
    assert score(g, p, macro=True).uas == pytest.approx((1 + 2 / 3) / 2)


def test_unified_view():
    gold = doc([0, 1], ["root", "example illustration"])
    gold = gold.with_edges([replace(e, rel_unified=lab) for e, lab in zip(gold.edges, ["root", "explanation"])])
    pred = doc([0, 1], ["root", "exemplification"])
    pred = pred.with_edges([replace(e, rel_unified=lab) for e, lab in zip(pred.edges, ["root", "explanation"])])
    r = score([gold], [pred], label_view="unified")
    assert r.las_original == 0.5 and r.las_unified == 1.0 and r.las == 1.0
    assert "LAS_U\t1.0000" in r.summary()


@pytest.mark.parametrize("pred_ids, message", [
    (["a"], "'b' missing"),
    (["a", "b", "c"], "'c' is not in the gold"),
    (["a", "a"], "duplicate document 'a'"),
])
def test_misaligned(pred_ids, message):
    gold = [doc([0], ["root"], "a"), doc([0], ["root"], "b")]
    pred = [doc([0], ["root"], name) for name in pred_ids]
    with pytest.raises(AlignmentError, match=message):
        score(gold, pred)


def test_edu_count_mismatch():
    with pytest.raises(AlignmentError, match="'a'"):
        score([doc([0], ["root"], "a")], [doc([0, 1], ["root", "x"], "a")])


def test_order_invariant_and_symmetric():
    rng = random.Random(3)
    for k in range(50):
        gold = random_corpus(8, seed=k)
        pred = [doc(random_heads(rng, d.n), ["root" if h == 0 else "joint" for h in random_heads(rng, d.n)],
                    d.doc_id) for d in gold]
        shuffled = pred[:]
        rng.shuffle(shuffled)
        assert score(gold, pred) == score(gold, shuffled)
        a, b = agreement(gold, pred), agreement(pred, gold)
        assert a == b and a.las <= a.uas


def test_tsv_report():
    c = random_corpus(3, seed=1)
    text = score(c, c).to_tsv()
    assert text.splitlines()[:2] == ["metric\tvalue", "UAS\t1.0000"]


def test_unknown_view():
    with pytest.raises(ValueError):
        score([], [], label_view="both")
