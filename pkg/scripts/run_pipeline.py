"""Run the whole mining funnel on the bundled fixture documents.

Drives the CLI stage by stage: train the tagger, extract candidates,
train the classifier, load the store, merge the seed list, and print
store statistics plus a cross-validation report for the labeled set.
All intermediate artifacts land in --workdir so they can be inspected.
"""

import argparse
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from similes import classifier as clf  # noqa: E402
from similes.cli import run  # noqa: E402

FIXTURES = REPO_ROOT / "tests" / "fixtures"


def stage(title: str, argv: list[str]) -> None:
    print(f"== {title}")
    code = run(argv)
    if code != 0:
        sys.exit(code)
    print()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="pipeline_out", help="artifact directory")
    parser.add_argument("--docs", default=str(FIXTURES / "docs"), help="document tree")
    parser.add_argument("--corpus", default=str(FIXTURES / "tagger_corpus.tsv"))
    parser.add_argument("--labeled", default=str(FIXTURES / "labeled_40.tsv"))
    parser.add_argument("--seeds", default=str(FIXTURES / "seed_10.txt"))
    parser.add_argument("--folds", type=int, default=5)
    args = parser.parse_args()

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    tagger = workdir / "tagger.model"
    candidates = workdir / "candidates.tsv"
    model = workdir / "nb.model"
    store = workdir / "store.jsonl"

    stage("train tagger", ["train-tagger", "--corpus", args.corpus, "--out", str(tagger)])
    stage("extract candidates", [
        "extract", "--input", args.docs, "--tagger", str(tagger), "--out", str(candidates),
    ])
    stage("train classifier", ["train-classifier", "--data", args.labeled, "--out", str(model)])
    stage("classify into store", [
        "classify", "--candidates", str(candidates), "--model", str(model), "--store", str(store),
    ])
    stage("import seed list", [
        "import-seed", "--file", args.seeds, "--store", str(store),
        "--source", Path(args.seeds).name,
    ])
    stage("store statistics", ["stats", "--store", str(store)])

    print("== cross-validation on the labeled set")
    labeled = clf.load_labeled(args.labeled)
    rows = []
    for learner in [
        clf.nb_learner(),
        clf.linear_learner(),
        clf.constant_learner(clf.POSITIVE, name="AlwaysPositive"),
    ]:
        metrics = clf.cross_validate(labeled, learner, k=args.folds, seed=7)
        rows.append((learner.name, metrics))
    print(clf.format_metrics_table(rows))
    print()
    print(f"artifacts in {workdir}/ -- inspect or serve with:")
    print(f"  python3 -m similes serve --store {store}")


if __name__ == "__main__":
    main()
