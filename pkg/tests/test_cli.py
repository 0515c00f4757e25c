import subprocess
import sys

import pytest

from discodep.cli import run
from discodep.core import DepDocument
from discodep.corpus import (
    Correction,
    EduSplitRecord,
    MarkerRule,
    PdtbRelationRecord,
    read_dep_corpus,
    read_review_queue,
    write_corrections,
    write_dep_corpus,
    write_edu_splits,
    write_marker_rules,
    write_pdtb_records,
    write_rst_trees,
)
from discodep.corpus.rst import parse_tree
from discodep.synthetic import chain_corpus, random_corpus


@pytest.fixture
def good(tmp_path):
    path = tmp_path / "good.ddep"
    path.write_bytes(write_dep_corpus(random_corpus(5, seed=1)))
    return path


def test_validate_good(good, capsys):
    assert run(["validate", str(good)]) == 0
    assert capsys.readouterr().out == "0 violations\n"


def test_validate_bad(tmp_path, capsys):
    bad = DepDocument.from_heads("d", ["a", "b"], [0, 0])
    path = tmp_path / "bad.ddep"
    path.write_bytes(write_dep_corpus([bad]))
    assert run(["validate", str(path)]) == 1
    out = capsys.readouterr()
    assert out.out == "1 violations\n" and "multiple root children" in out.err
    assert run(["validate", "--allow-multi-root", str(path)]) == 0


def test_malformed_input_located(tmp_path, capsys):
    path = tmp_path / "x.ddep"
    path.write_text("# doc d\n1\ta\t0\troot\n")
    assert run(["validate", str(path)]) == 1
    assert f"{path}:2:" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    assert run(["frobnicate"]) == 2
    assert run(["validate", str(tmp_path / "missing.ddep")]) == 2
    assert run(["stats", "--in", "x", "--bogus"]) == 2
    assert run(["parse", "--model", "m", "--in", "i", "--out", "o", "--jobs", "0"]) == 2


def test_convert_rst(tmp_path):
    src = tmp_path / "t.rsx"
    src.write_bytes(write_rst_trees([("d1", parse_tree("(causality N [1|a] S [2|b])"))]))
    out = tmp_path / "t.ddep"
    assert run(["convert", "rst", "--in", str(src), "--out", str(out), "--jobs", "2"]) == 0
    (doc,) = read_dep_corpus(out.read_bytes())
    assert doc.heads == [0, 1] and doc.labels() == ["root", "causality"]


def _pdtb_inputs(tmp_path, n_docs=3):
    docs = [DepDocument.from_heads(f"d{k}", ["甲", "乙", "丙后"], [0, 1, 1]) for k in range(n_docs)]
    edus = tmp_path / "x.ddep"
    edus.write_bytes(write_dep_corpus(docs))
    recs = tmp_path / "x.pdr"
    recs.write_bytes(write_pdtb_records(
        [PdtbRelationRecord(f"d{k}", "implicit", "因此", "causality", {1}, {2}) for k in range(n_docs)]))
    rules = tmp_path / "m.mkr"
    rules.write_bytes(write_marker_rules([MarkerRule("temporal", "后", "left")]))
    return edus, recs, rules


def test_convert_pdtb(tmp_path):
    edus, recs, rules = _pdtb_inputs(tmp_path)
    out, review = tmp_path / "y.ddep", tmp_path / "y.rvq"
    argv = ["convert", "pdtb", "--in", str(recs), "--edus", str(edus), "--rules", str(rules),
            "--out", str(out), "--review", str(review)]
    assert run(argv) == 0
    docs = read_dep_corpus(out.read_bytes())
    assert [d.heads for d in docs] == [[0, 1, 1]] * 3
    assert docs[0].labels() == ["root", "causality", "temporal"]
    assert read_review_queue(review.read_bytes()) == []

    parallel = tmp_path / "z.ddep"
    argv[argv.index(str(out))] = str(parallel)
    assert run(argv + ["--jobs", "3"]) == 0
    assert parallel.read_bytes() == out.read_bytes()


def test_convert_pdtb_failure_leaves_no_output(tmp_path):
    edus, recs, rules = _pdtb_inputs(tmp_path)
    recs.write_bytes(write_pdtb_records([
        PdtbRelationRecord("d0", "explicit", "x", "joint", {1}, {2}),
        PdtbRelationRecord("d0", "explicit", "x", "joint", {3}, {2}),
    ]))
    out, review = tmp_path / "y.ddep", tmp_path / "y.rvq"
    assert run(["convert", "pdtb", "--in", str(recs), "--edus", str(edus), "--out", str(out),
                "--review", str(review)]) == 1
    assert not out.exists() and not review.exists()
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".")] == []


def test_split_apply_and_correct(tmp_path):
    src = tmp_path / "a.ddep"
    src.write_bytes(write_dep_corpus([DepDocument.from_heads("d", ["a", "bc"], [0, 1], ["root", "joint"])]))
    spl = tmp_path / "a.spl"
    spl.write_bytes(write_edu_splits([EduSplitRecord("d", 2, ("b", "c"), ((1, 2, "continuation"),))]))
    out = tmp_path / "b.ddep"
    assert run(["split-apply", "--in", str(src), "--splits", str(spl), "--out", str(out)]) == 0
    (doc,) = read_dep_corpus(out.read_bytes())
    assert doc.heads == [0, 1, 2]

    fix = tmp_path / "b.fix"
    fix.write_bytes(write_corrections({"d": [Correction(3, 1, "joint")]}))
    fixed = tmp_path / "c.ddep"
    assert run(["correct", "--in", str(out), "--fixes", str(fix), "--out", str(fixed)]) == 0
    assert read_dep_corpus(fixed.read_bytes())[0].heads == [0, 1, 1]

    fix.write_bytes(write_corrections({"d": [Correction(1, 3, "joint")]}))
    assert run(["correct", "--in", str(out), "--fixes", str(fix), "--out", str(tmp_path / "e.ddep")]) == 1
    assert not (tmp_path / "e.ddep").exists()


def test_map(tmp_path, capsys):
    src = tmp_path / "su.ddep"
    src.write_bytes(write_dep_corpus([DepDocument.from_heads(
        "d", ["a", "b", "c"], [0, 1, 1], ["root", "example illustration", "mystery"])]))
    out = tmp_path / "u.ddep"
    assert run(["map", "--in", str(src), "--scheme", "SU", "--out", str(out)]) == 0
    assert "unmapped edges: 1" in capsys.readouterr().err
    assert read_dep_corpus(out.read_bytes())[0].labels("unified") == ["root", "explanation", None]
    strict = tmp_path / "s.ddep"
    assert run(["map", "--in", str(src), "--scheme", "SU", "--out", str(strict), "--strict"]) == 1
    assert not strict.exists()


def test_stats(good, capsys):
    assert run(["stats", "--in", str(good)]) == 0
    assert capsys.readouterr().out.startswith("n_docs\t5\n")


def test_split_seeded(good, tmp_path, monkeypatch):
    def split(tag, *extra):
        paths = [tmp_path / f"{tag}.{p}.ddep" for p in ("train", "dev", "test")]
        argv = ["split", "--in", str(good), "--sizes", "3", "1", "1", "--train", str(paths[0]),
                "--dev", str(paths[1]), "--test", str(paths[2]), *extra]
        assert run(argv) == 0
        return [p.read_bytes() for p in paths]

    assert split("a", "--seed", "4") == split("b", "--seed", "4")
    monkeypatch.setenv("DDP_SEED", "4")
    assert split("c") == split("a", "--seed", "4")
    assert run(["split", "--in", str(good), "--sizes", "9", "0", "0", "--train", str(tmp_path / "t"),
                "--dev", str(tmp_path / "d"), "--test", str(tmp_path / "e")]) == 1


def test_train_parse_eval_agree(tmp_path, capsys):
    docs = chain_corpus(40, 2)
    train, test = tmp_path / "train.ddep", tmp_path / "test.ddep"
    train.write_bytes(write_dep_corpus(docs[:30]))
    test.write_bytes(write_dep_corpus(docs[30:]))
    model, log = tmp_path / "m.model", tmp_path / "train.tsv"
    assert run(["train", "--parser", "graph-eisner", "--train", str(train), "--dev", str(test),
                "--model", str(model), "--epochs", "3", "--seed", "1", "--log", str(log)]) == 0
    assert log.read_text().startswith("stage\tepoch\tmetric\tvalue\n")
    pred = tmp_path / "pred.ddep"
    assert run(["parse", "--model", str(model), "--in", str(test), "--out", str(pred), "--jobs", "2"]) == 0
    capsys.readouterr()
    report = tmp_path / "eval.tsv"
    assert run(["eval", "--gold", str(test), "--pred", str(pred), "--report", str(report)]) == 0
    assert capsys.readouterr().out.splitlines()[:2] == ["UAS\t1.0000", "LAS_O\t1.0000"]
    assert report.read_text().startswith("metric\tvalue\n")
    assert run(["eval", "--gold", str(test), "--pred", str(pred), "--labels", "unified"]) == 0
    assert "LAS_U\t" in capsys.readouterr().out
    assert run(["agree", "--a", str(test), "--b", str(pred)]) == 0
    assert capsys.readouterr().out.startswith("UAS\t1.0000\n")


def test_eval_misaligned(good, tmp_path, capsys):
    other = tmp_path / "o.ddep"
    other.write_bytes(write_dep_corpus(random_corpus(4, seed=1)))
    assert run(["eval", "--gold", str(good), "--pred", str(other)]) == 1
    assert "doc0004" in capsys.readouterr().err


def test_console_script(good):
    proc = subprocess.run([sys.executable, "-m", "discodep.cli", "validate", str(good)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "0 violations\n"
