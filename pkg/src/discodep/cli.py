"""Command-line entry point: one subcommand per pipeline stage.

Exit status is 0 on success, 1 on a data error (reported as file:line on
stderr) and 2 on a usage error. Output files are written only after all the
work for them has succeeded.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import default_mapping, default_markers
from .convert import (
    ConversionError,
    MappingError,
    apply_corrections,
    apply_edu_splits,
    map_relations,
    pdtb_to_dep,
    rst_to_dep,
)
from .core import InvalidTreeError, validate_tree
from .corpus import formats
from .corpus.formats import FormatError
from .corpus.rst import read_rst_trees
from .corpus.stats import corpus_stats, split_corpus
from .eval import AlignmentError, agreement, score
from .parsing.model import PARSER_KINDS, dump_model, load_model, train_parser
from .parsing.transition import NonProjectiveError


class DataError(Exception):
    pass


class UsageError(Exception):
    pass


def _read(path: str, reader):
    try:
        return reader(Path(path).read_bytes())
    except FormatError as exc:
        exc.source = path
        raise DataError(exc.located()) from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not UTF-8 ({exc.reason})") from None


def _commit(outputs: list[tuple[str, bytes]]) -> None:
    """Write every output via a temporary file; on failure none is left behind."""
    done = []
    try:
        for path, data in outputs:
            target = Path(path)
            fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                os.replace(tmp, target)
            except BaseException:
                Path(tmp).unlink(missing_ok=True)
                raise
            done.append(target)
    except BaseException:
        for p in done:
            p.unlink(missing_ok=True)
        raise


def _check_inputs(*paths):
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise UsageError(f"input file not found: {p}")


def _check_outputs(*paths):
    for p in paths:
        if p is not None and not Path(p).resolve().parent.is_dir():
            raise UsageError(f"output directory does not exist: {p}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DDP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DDP_SEED must be an integer, got {env!r}") from None


def _pmap(fn, items, jobs: int):
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    _check_inputs(*args.files)
    total = 0
    for path in args.files:
        for doc in _read(path, formats.read_dep_corpus):
            for v in validate_tree(doc, single_root_child=not args.allow_multi_root):
                total += 1
                _log(f"{path}: {doc.doc_id}: {v.kind}: {v.message}")
    print(f"{total} violations")
    return 1 if total else 0


def _rst_one(item):
    doc_id, tree = item
    return rst_to_dep(tree, doc_id)


def _pdtb_one(item, records, rules, overrides):
    return pdtb_to_dep(item.doc_id, item.edus, records, rules, overrides)


def cmd_convert(args) -> int:
    _check_outputs(args.out, getattr(args, "review", None))
    if args.source == "rst":
        _check_inputs(args.input)
        trees = _read(args.input, read_rst_trees)
        docs = _pmap(_rst_one, trees, args.jobs)
        _commit([(args.out, formats.write_dep_corpus(docs))])
        _log(f"converted {len(docs)} trees")
        return 0

    _check_inputs(args.input, args.edus, args.rules, args.head_overrides)
    records = _read(args.input, formats.read_pdtb_records)
    segmented = _read(args.edus, formats.read_dep_corpus)
    rules = _read(args.rules, formats.read_marker_rules) if args.rules else default_markers()
    overrides = {}
    if args.head_overrides:
        for no, line in enumerate(Path(args.head_overrides).read_text("utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            bits = line.split("\t")
            if len(bits) != 2 or bits[1] not in ("arg1", "arg2"):
                raise DataError(f"{args.head_overrides}:{no}: expected label<TAB>arg1|arg2")
            overrides[bits[0]] = bits[1]
    known = {d.doc_id for d in segmented}
    for r in records:
        if r.doc_id not in known:
            raise DataError(f"{args.input}: record for unknown document {r.doc_id!r}")
    results = _pmap(partial(_pdtb_one, records=records, rules=rules, overrides=overrides),
                    segmented, args.jobs)
    docs = [doc for doc, _ in results]
    queue = [item for _, items in results for item in items]
    outputs = [(args.out, formats.write_dep_corpus(docs))]
    if args.review:
        outputs.append((args.review, formats.write_review_queue(queue)))
    _commit(outputs)
    _log(f"converted {len(docs)} documents, {len(queue)} review items")
    return 0


def cmd_split_apply(args) -> int:
    _check_inputs(args.input, args.splits)
    _check_outputs(args.out)
    docs = _read(args.input, formats.read_dep_corpus)
    splits = _read(args.splits, formats.read_edu_splits)
    known = {d.doc_id for d in docs}
    for s in splits:
        if s.doc_id not in known:
            raise DataError(f"{args.splits}: split for unknown document {s.doc_id!r}")
    out = [apply_edu_splits(d, splits) for d in docs]
    _commit([(args.out, formats.write_dep_corpus(out))])
    return 0


def cmd_correct(args) -> int:
    _check_inputs(args.input, args.fixes)
    _check_outputs(args.out)
    docs = _read(args.input, formats.read_dep_corpus)
    fixes = _read(args.fixes, formats.read_corrections)
    unknown = set(fixes) - {d.doc_id for d in docs}
    if unknown:
        raise DataError(f"{args.fixes}: corrections for unknown document {sorted(unknown)[0]!r}")
    out = [apply_corrections(d, fixes.get(d.doc_id, [])) for d in docs]
    _commit([(args.out, formats.write_dep_corpus(out))])
    return 0


def cmd_map(args) -> int:
    _check_inputs(args.input, args.map)
    _check_outputs(args.out)
    docs = _read(args.input, formats.read_dep_corpus)
    mapping = _read(args.map, formats.read_relation_mapping) if args.map else default_mapping()
    out, misses = map_relations(docs, mapping, args.scheme, strict=args.strict)
    _commit([(args.out, formats.write_dep_corpus(out))])
    _log(f"unmapped edges: {misses}")
    return 0


def cmd_stats(args) -> int:
    _check_inputs(args.input)
    docs = _read(args.input, formats.read_dep_corpus)
    sys.stdout.write(corpus_stats(docs, count_root=args.count_root, label_view=args.labels).to_tsv())
    return 0


def cmd_split(args) -> int:
    _check_inputs(args.input)
    _check_outputs(args.train, args.dev, args.test)
    docs = _read(args.input, formats.read_dep_corpus)
    try:
        parts = split_corpus(docs, *args.sizes, seed=_seed(args))
    except ValueError as exc:
        raise DataError(f"{args.input}: {exc}") from None
    _commit([(p, formats.write_dep_corpus(c)) for p, c in zip((args.train, args.dev, args.test), parts)])
    return 0


def cmd_train(args) -> int:
    _check_inputs(args.train, args.dev)
    _check_outputs(args.model, args.log)
    train = _read(args.train, formats.read_dep_corpus)
    dev = _read(args.dev, formats.read_dep_corpus) if args.dev else None
    rows: list[str] = ["stage\tepoch\tmetric\tvalue"]

    def log(row):
        stage, epoch = row["stage"], row["epoch"]
        for k, v in row.items():
            if k not in ("stage", "epoch"):
                rows.append(f"{stage}\t{epoch}\t{k}\t{v:.4f}")

    model = train_parser(args.parser, train, epochs=args.epochs, seed=_seed(args),
                         label_view=args.labels, log=log)
    if dev is not None:
        res = score(dev, [model.parse(d) for d in dev], args.labels)
        rows.append(f"dev\t{args.epochs}\tuas\t{res.uas:.4f}")
        rows.append(f"dev\t{args.epochs}\tlas\t{res.las:.4f}")
    report = "\n".join(rows) + "\n"
    outputs = [(args.model, dump_model(model))]
    if args.log:
        outputs.append((args.log, report.encode("utf-8")))
    _commit(outputs)
    if not args.log:
        sys.stdout.write(report)
    return 0


def cmd_parse(args) -> int:
    _check_inputs(args.model, args.input)
    _check_outputs(args.out)
    model = _read(args.model, load_model)
    docs = _read(args.input, formats.read_dep_corpus)
    out = _pmap(model.parse, docs, args.jobs)
    _commit([(args.out, formats.write_dep_corpus(out))])
    return 0


def cmd_eval(args) -> int:
    _check_inputs(args.gold, args.pred)
    _check_outputs(args.report)
    gold = _read(args.gold, formats.read_dep_corpus)
    pred = _read(args.pred, formats.read_dep_corpus)
    res = score(gold, pred, args.labels, exclude_root=args.exclude_root, macro=args.macro)
    if args.report:
        _commit([(args.report, res.to_tsv().encode("utf-8"))])
    sys.stdout.write(res.summary())
    return 0


def cmd_agree(args) -> int:
    _check_inputs(args.a, args.b)
    a = _read(args.a, formats.read_dep_corpus)
    b = _read(args.b, formats.read_dep_corpus)
    res = agreement(a, b, args.labels)
    key = "LAS_U" if args.labels == "unified" else "LAS_O"
    sys.stdout.write(f"UAS\t{res.uas:.4f}\n{key}\t{res.las:.4f}\n")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="discodep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def labels(sp):
        sp.add_argument("--labels", choices=("original", "unified"), default="original",
                        help="relation label view")

    sp = sub.add_parser("validate", help="check dependency tree invariants")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--allow-multi-root", action="store_true")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("convert", help="convert RST trees or PDTB records to dependencies")
    conv = sp.add_subparsers(dest="source", required=True)
    rst = conv.add_parser("rst")
    rst.add_argument("--in", dest="input", required=True)
    rst.add_argument("--out", required=True)
    rst.add_argument("--jobs", type=int, default=1)
    rst.set_defaults(func=cmd_convert)
    pdtb = conv.add_parser("pdtb")
    pdtb.add_argument("--in", dest="input", required=True, help=".pdr relation records")
    pdtb.add_argument("--edus", required=True, help=".ddep file providing the EDU segmentation")
    pdtb.add_argument("--rules", help=".mkr marker rules (default: bundled rules)")
    pdtb.add_argument("--head-overrides", help="label<TAB>arg1|arg2 per line")
    pdtb.add_argument("--out", required=True)
    pdtb.add_argument("--review", help=".rvq review queue output")
    pdtb.add_argument("--jobs", type=int, default=1)
    pdtb.set_defaults(func=cmd_convert)

    sp = sub.add_parser("split-apply", help="subdivide EDUs from a .spl file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--splits", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_split_apply)

    sp = sub.add_parser("correct", help="apply a .fix corrections file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--fixes", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_correct)

    sp = sub.add_parser("map", help="fill unified relation labels")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--map", help=".map file (default: bundled mapping)")
    sp.add_argument("--scheme", required=True, choices=("HIT", "SU", "SCI", "UNIFIED"))
    sp.add_argument("--out", required=True)
    sp.add_argument("--strict", action="store_true")
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("stats", help="corpus size and relation distribution")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--count-root", action="store_true")
    labels(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("split", help="seeded train/dev/test split")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--sizes", type=int, nargs=3, required=True, metavar=("TRAIN", "DEV", "TEST"))
    sp.add_argument("--train", required=True)
    sp.add_argument("--dev", required=True)
    sp.add_argument("--test", required=True)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("train", help="train a parser")
    sp.add_argument("--parser", choices=PARSER_KINDS, required=True)
    sp.add_argument("--train", required=True)
    sp.add_argument("--dev")
    sp.add_argument("--model", required=True)
    sp.add_argument("--epochs", type=int, default=10)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--log", help="write the training log TSV here instead of stdout")
    labels(sp)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("parse", help="parse documents with a trained model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("eval", help="UAS/LAS against gold")
    sp.add_argument("--gold", required=True)
    sp.add_argument("--pred", required=True)
    sp.add_argument("--exclude-root", action="store_true")
    sp.add_argument("--macro", action="store_true")
    sp.add_argument("--report", help="write the full TSV report here")
    labels(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("agree", help="inter-annotator agreement")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    labels(sp)
    sp.set_defaults(func=cmd_agree)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            parser.error("--jobs must be at least 1")
    except SystemExit as exc:  # argparse reports usage errors this way
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"discodep: error: {exc}")
        return 2
    except DataError as exc:
        _log(str(exc))
        return 1
    except (InvalidTreeError, ConversionError, MappingError, AlignmentError,
            NonProjectiveError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        _log(f"discodep: {msg}")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
