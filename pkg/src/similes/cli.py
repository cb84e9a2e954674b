"""Command-line entry point orchestrating the pipeline stages.

Stages communicate through documented intermediate files so each can be
re-run on its own: train-tagger writes a tagger model, extract writes a
candidate file, train-classifier writes a classifier model, classify loads
candidates into a store, eval prints cross-validation metrics, import-seed
merges a published list, stats reports store counts, serve starts the
curation API.

Exit codes: 0 success, 2 usage errors, 3 input/data errors, 4 runtime errors.
"""

from __future__ import annotations

import argparse
import sys

from . import classifier as clf
from . import pipeline, store as store_mod, tagger as tagger_mod
from .dedup import key_of
from .ingest import count_by_subdir, read_local
from .matcher import MatcherConfig
from .service import load_service_config
from .store import CorpusStore

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_RUNTIME = 4

_INPUT_ERRORS = (
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
    PermissionError,
    tagger_mod.CorpusFormatError,
    tagger_mod.ModelFormatError,
    clf.DatasetFormatError,
    clf.ClassifierFormatError,
    pipeline.CandidateFormatError,
    store_mod.StoreFormatError,
    ValueError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="similes",
        description="Mine, classify and curate Serbian similes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-tagger", help="train a POS tagger from a tagged corpus")
    p.add_argument("--corpus", required=True, help="word<TAB>tag lines, blank line between sentences")
    p.add_argument("--out", required=True, help="model file to write")

    p = sub.add_parser("extract", help="extract simile candidates from a document tree")
    p.add_argument("--input", required=True, help="directory of UTF-8 text documents")
    p.add_argument("--tagger", required=True, help="tagger model file")
    p.add_argument("--out", required=True, help="candidate file to write")
    p.add_argument("--jobs", type=int, default=1, help="parallel documents (default 1)")
    p.add_argument("--max-adjectives", type=int, default=3)
    p.add_argument(
        "--keep-script",
        action="store_true",
        help="skip transliteration to Latin before tagging",
    )

    p = sub.add_parser("train-classifier", help="train a classifier from labeled phrases")
    p.add_argument("--data", required=True, help="label<TAB>phrase lines, labels 1/0")
    p.add_argument("--learner", choices=["nb", "linear"], default="nb")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--alpha", type=float, default=1.0, help="NB smoothing")
    p.add_argument("--seed", type=int, default=13, help="linear learner shuffle seed")

    p = sub.add_parser("classify", help="classify candidates into a store")
    p.add_argument("--candidates", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--store", required=True)

    p = sub.add_parser("eval", help="cross-validate a learner on labeled phrases")
    p.add_argument("--data", required=True)
    p.add_argument("--learner", choices=["nb", "linear", "always-positive"], default="nb")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("import-seed", help="import a published simile list as approved seeds")
    p.add_argument("--file", required=True, help="one phrase per line")
    p.add_argument("--store", required=True)
    p.add_argument("--source", required=True, help="seed source name for provenance")

    p = sub.add_parser("stats", help="print store counts")
    p.add_argument("--store", required=True)

    p = sub.add_parser("serve", help="run the curation HTTP service")
    p.add_argument("--store", required=True)
    p.add_argument("--config", help="JSON service config file")
    p.add_argument("--host")
    p.add_argument("--port", type=int)

    return parser


def _cmd_train_tagger(args) -> int:
    corpus = tagger_mod.load_tagged_corpus(args.corpus)
    model = tagger_mod.train(corpus)
    tagger_mod.save_model(model, args.out)
    print(
        f"trained tagger: {len(corpus)} sentences, {len(model.tagset)} tags, "
        f"lambdas=({model.lambdas[0]:.3f}, {model.lambdas[1]:.3f}, {model.lambdas[2]:.3f})"
    )
    return EXIT_OK


def _cmd_extract(args) -> int:
    model = tagger_mod.load_model(args.tagger)
    config = MatcherConfig(max_adjectives=args.max_adjectives)
    docs = list(read_local(args.input))
    candidates = pipeline.extract_corpus(
        model,
        docs,
        config,
        normalize_script=not args.keep_script,
        jobs=args.jobs,
    )
    written = pipeline.write_candidates(candidates, args.out)
    counts = count_by_subdir(args.input)
    total = counts.pop("total")
    for subdir in sorted(counts):
        print(f"documents[{subdir}]: {counts[subdir]}")
    print(f"documents total: {total}")
    print(f"candidates: {written}")
    return EXIT_OK


def _cmd_train_classifier(args) -> int:
    labeled = clf.load_labeled(args.data)
    if args.learner == "nb":
        model = clf.train_nb(labeled, alpha=args.alpha)
    else:
        model = clf.train_linear(labeled, clf.LinearHyperparams(seed=args.seed))
    clf.save_classifier(model, args.out)
    print(f"trained {args.learner} classifier on {len(labeled)} examples")
    return EXIT_OK


def _cmd_classify(args) -> int:
    model = clf.load_classifier(args.model)
    candidates = list(pipeline.read_candidates(args.candidates))
    with CorpusStore(args.store) as corpus_store:
        known_keys = {e.stem_key for e in corpus_store.entries()}
        positives = negatives = inserted_pending = inserted_rejected = skipped = 0
        for candidate in candidates:
            fv = clf.featurize(candidate)
            label, score = clf.predict(model, fv)
            positive = label == clf.POSITIVE
            positives += int(positive)
            negatives += int(not positive)
            key = key_of(candidate.full_text)
            if key in known_keys:
                skipped += 1
                continue
            known_keys.add(key)
            provenance = {
                "doc_id": candidate.doc_id,
                "sentence_offset": candidate.sentence_offset,
                "span": f"{candidate.span[0]}:{candidate.span[1]}",
            }
            corpus_store.add_entry(
                candidate.full_text,
                origin=store_mod.MINED,
                provenance=provenance,
                classifier_score=score,
                actor="model",
                status=store_mod.PENDING if positive else store_mod.REJECTED,
            )
            if positive:
                inserted_pending += 1
            else:
                inserted_rejected += 1
    print(f"candidates: {len(candidates)}")
    print(f"classifier positives: {positives}")
    print(f"classifier negatives: {negatives}")
    print(f"inserted pending: {inserted_pending}")
    print(f"inserted rejected: {inserted_rejected}")
    print(f"skipped existing keys: {skipped}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    labeled = clf.load_labeled(args.data)
    if args.learner == "nb":
        learner = clf.nb_learner()
    elif args.learner == "linear":
        learner = clf.linear_learner(clf.LinearHyperparams(seed=args.seed))
    else:
        learner = clf.constant_learner(clf.POSITIVE, name="AlwaysPositive")
    metrics = clf.cross_validate(labeled, learner, k=args.folds, seed=args.seed)
    print(clf.format_metrics_table([(learner.name, metrics)]))
    return EXIT_OK


def _cmd_import_seed(args) -> int:
    with open(args.file, encoding="utf-8") as handle:
        lines = handle.readlines()
    with CorpusStore(args.store) as corpus_store:
        report = corpus_store.import_seed(lines, source_name=args.source)
    print(f"imported {report.added} seed entries from {report.source_name}")
    print(f"stem-key overlap with mined entries: {report.overlap}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    with CorpusStore(args.store) as corpus_store:
        stats = corpus_store.stats()
    print(f"total: {stats.total}")
    for status in store_mod.STATUSES:
        print(f"status[{status}]: {stats.by_status[status]}")
    for origin in store_mod.ORIGINS:
        print(f"origin[{origin}]: {stats.by_origin[origin]}")
    print(f"approved: {stats.approved}")
    print(f"seed/mined key overlap: {stats.seed_mined_overlap}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from dataclasses import replace

    import uvicorn

    from .service import create_app

    config = load_service_config(args.config)
    if args.host:
        config = replace(config, host=args.host)
    if args.port:
        config = replace(config, port=args.port)
    corpus_store = CorpusStore(args.store)
    app = create_app(corpus_store, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


_COMMANDS = {
    "train-tagger": _cmd_train_tagger,
    "extract": _cmd_extract,
    "train-classifier": _cmd_train_classifier,
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "import-seed": _cmd_import_seed,
    "stats": _cmd_stats,
    "serve": _cmd_serve,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(run())
