"""True-simile vs. literal-comparison classification.

Each candidate phrase turns into at most six categorical indicators: the
whole phrase, its left and right sides around the connector, and stemmed
variants of all three. Two learners share that representation: multinomial
Naive Bayes with Laplace smoothing and a linear hinge-loss model trained by
seeded stochastic subgradient descent. A stratified cross-validation harness
pools fold confusions into precision/recall/F and renders an aligned table.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .matcher import CANONICAL_CONNECTOR, DEFAULT_CONNECTORS, SimileCandidate
from .stemmer import StemRuleTable, stem_phrase
from .text import PUNCTUATION, normalize, tokenize

POSITIVE = "1"
NEGATIVE = "0"
LABELS = (POSITIVE, NEGATIVE)

NAMESPACES = ("whole", "whole_stem", "left", "left_stem", "right", "right_stem")


class DatasetFormatError(ValueError):
    """Raised for malformed labeled-data lines, naming the line number."""


@dataclass(frozen=True)
class FeatureVector:
    indicators: frozenset[str]

    def __post_init__(self):
        seen: set[str] = set()
        for indicator in self.indicators:
            namespace, _, _ = indicator.partition("=")
            if namespace not in NAMESPACES:
                raise ValueError(f"unknown feature namespace {namespace!r}")
            if namespace in seen:
                raise ValueError(f"duplicate indicator for namespace {namespace!r}")
            seen.add(namespace)


def _build_vector(parts: dict[str, str], mask: Iterable[str] | None) -> FeatureVector:
    enabled = NAMESPACES if mask is None else tuple(mask)
    for namespace in enabled:
        if namespace not in NAMESPACES:
            raise ValueError(f"unknown feature namespace {namespace!r}")
    indicators = frozenset(
        f"{ns}={parts[ns]}" for ns in enabled if parts.get(ns)
    )
    return FeatureVector(indicators)


def featurize(
    candidate: SimileCandidate,
    mask: Iterable[str] | None = None,
    table: StemRuleTable | None = None,
) -> FeatureVector:
    """Indicators for a matcher candidate; ``mask`` selects namespaces."""
    parts = {
        "whole": candidate.full_text,
        "whole_stem": stem_phrase(candidate.full_text, table),
        "left": candidate.left,
        "left_stem": stem_phrase(candidate.left, table),
        "right": candidate.right,
        "right_stem": stem_phrase(candidate.right, table),
    }
    return _build_vector(parts, mask)


def featurize_phrase(
    phrase: str,
    mask: Iterable[str] | None = None,
    table: StemRuleTable | None = None,
) -> FeatureVector:
    """Indicators for a bare phrase, split at its first connector token."""
    words = [
        t.text for t in tokenize(normalize(phrase)) if t.kind != PUNCTUATION
    ]
    if not words:
        raise ValueError("phrase has no word tokens")
    split = next((i for i, w in enumerate(words) if w in DEFAULT_CONNECTORS), None)
    if split is None:
        # no connector: the left/right split is undefined, keep whole only
        left, right = "", ""
        whole = " ".join(words)
    else:
        left = " ".join(words[:split])
        right = " ".join(words[split + 1 :])
        whole = " ".join(words[:split] + [CANONICAL_CONNECTOR] + words[split + 1 :])
    parts = {
        "whole": whole,
        "whole_stem": stem_phrase(whole, table) if whole else "",
        "left": left,
        "left_stem": stem_phrase(left, table) if left else "",
        "right": right,
        "right_stem": stem_phrase(right, table) if right else "",
    }
    return _build_vector(parts, mask)


LabeledExample = tuple[FeatureVector, str]


def read_labeled(lines: Iterable[str], mask: Iterable[str] | None = None) -> list[LabeledExample]:
    """Parse ``label<TAB>phrase`` lines; labels are "1" (simile) or "0"."""
    data: list[LabeledExample] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[0] not in LABELS or not parts[1].strip():
            raise DatasetFormatError(
                f"line {lineno}: expected '1|0<TAB>phrase', got {line!r}"
            )
        data.append((featurize_phrase(parts[1].strip(), mask), parts[0]))
    return data


def load_labeled(path: str | Path, mask: Iterable[str] | None = None) -> list[LabeledExample]:
    with open(path, encoding="utf-8") as handle:
        return read_labeled(handle, mask)


def _check_both_labels(labeled: Sequence[LabeledExample]):
    present = {label for _, label in labeled}
    if present != set(LABELS):
        raise ValueError(f"training data must contain both labels, got {sorted(present)}")


@dataclass
class NbModel:
    priors: dict[str, float]
    counts: dict[str, dict[str, int]]
    totals: dict[str, int]
    vocabulary: set[str]
    alpha: float = 1.0

    def __post_init__(self):
        if abs(sum(self.priors.values()) - 1.0) > 1e-9:
            raise ValueError("priors must sum to 1")
        if self.alpha <= 0:
            raise ValueError("smoothing alpha must be positive")


def train_nb(labeled: Sequence[LabeledExample], alpha: float = 1.0) -> NbModel:
    _check_both_labels(labeled)
    counts: dict[str, dict[str, int]] = {label: {} for label in LABELS}
    totals: dict[str, int] = {label: 0 for label in LABELS}
    vocabulary: set[str] = set()
    per_label = {label: 0 for label in LABELS}
    for fv, label in labeled:
        per_label[label] += 1
        for indicator in fv.indicators:
            counts[label][indicator] = counts[label].get(indicator, 0) + 1
            totals[label] += 1
            vocabulary.add(indicator)
    n = len(labeled)
    priors = {label: per_label[label] / n for label in LABELS}
    return NbModel(priors=priors, counts=counts, totals=totals, vocabulary=vocabulary, alpha=alpha)


def predict_nb(model: NbModel, fv: FeatureVector) -> tuple[str, float]:
    """(label, log-odds). Indicators never seen in training are skipped, so
    an empty or fully out-of-vocabulary vector falls back to the priors."""
    scores: dict[str, float] = {}
    v = len(model.vocabulary)
    for label in LABELS:
        score = math.log(model.priors[label]) if model.priors[label] > 0 else -math.inf
        denom = model.totals[label] + model.alpha * v
        for indicator in fv.indicators:
            if indicator not in model.vocabulary:
                continue
            count = model.counts[label].get(indicator, 0)
            score += math.log((count + model.alpha) / denom)
        scores[label] = score
    log_odds = scores[POSITIVE] - scores[NEGATIVE]
    label = POSITIVE if log_odds >= 0 else NEGATIVE
    return label, log_odds


@dataclass(frozen=True)
class LinearHyperparams:
    epochs: int = 50
    learning_rate: float = 0.1
    l2: float = 0.0
    seed: int = 13

    def __post_init__(self):
        if self.epochs < 1 or self.learning_rate <= 0 or self.l2 < 0:
            raise ValueError("bad linear hyperparameters")


@dataclass
class LinearModel:
    weights: dict[str, float]
    bias: float
    hyperparams: LinearHyperparams = field(default_factory=LinearHyperparams)

    def margin(self, fv: FeatureVector) -> float:
        return self.bias + sum(self.weights.get(ind, 0.0) for ind in fv.indicators)


def train_linear(
    labeled: Sequence[LabeledExample], hyperparams: LinearHyperparams | None = None
) -> LinearModel:
    """Hinge-loss SGD with a decaying step size and seeded shuffling.

    The learning rate schedule lr/(1 + t/100) shrinks late updates so the
    final iterate settles near the hinge minimizer instead of oscillating.
    With l2 > 0 weights decay lazily through a shared scale factor.
    """
    _check_both_labels(labeled)
    hp = hyperparams if hyperparams is not None else LinearHyperparams()
    weights: dict[str, float] = {}
    bias = 0.0
    scale = 1.0
    rng = random.Random(hp.seed)
    order = list(range(len(labeled)))
    step = 0
    for _ in range(hp.epochs):
        rng.shuffle(order)
        for i in order:
            fv, label = labeled[i]
            y = 1.0 if label == POSITIVE else -1.0
            lr = hp.learning_rate / (1.0 + step / 100.0)
            step += 1
            if hp.l2 > 0:
                scale *= 1.0 - lr * hp.l2
                if scale < 1e-9:
                    weights = {k: v * scale for k, v in weights.items()}
                    scale = 1.0
            margin = bias + scale * sum(weights.get(ind, 0.0) for ind in fv.indicators)
            if y * margin < 1.0:
                for ind in fv.indicators:
                    weights[ind] = weights.get(ind, 0.0) + lr * y / scale
                bias += lr * y
    if scale != 1.0:
        weights = {k: v * scale for k, v in weights.items()}
    return LinearModel(weights=weights, bias=bias, hyperparams=hp)


def predict_linear(model: LinearModel, fv: FeatureVector) -> tuple[str, float]:
    margin = model.margin(fv)
    return (POSITIVE if margin > 0 else NEGATIVE), margin


@dataclass(frozen=True)
class EvalMetrics:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f_measure: float

    @classmethod
    def from_confusion(cls, tp: int, fp: int, fn: int, tn: int) -> "EvalMetrics":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(tp=tp, fp=fp, fn=fn, tn=tn, precision=precision, recall=recall, f_measure=f)


PredictFn = Callable[[FeatureVector], tuple[str, float]]


@dataclass(frozen=True)
class Learner:
    name: str
    fit: Callable[[Sequence[LabeledExample]], PredictFn]


def nb_learner(alpha: float = 1.0) -> Learner:
    def fit(labeled: Sequence[LabeledExample]) -> PredictFn:
        model = train_nb(labeled, alpha)
        return lambda fv: predict_nb(model, fv)

    return Learner(name="NaiveBayes", fit=fit)


def linear_learner(hyperparams: LinearHyperparams | None = None) -> Learner:
    def fit(labeled: Sequence[LabeledExample]) -> PredictFn:
        model = train_linear(labeled, hyperparams)
        return lambda fv: predict_linear(model, fv)

    return Learner(name="LinearHinge", fit=fit)


def constant_learner(label: str, name: str | None = None) -> Learner:
    """Baseline that ignores features; useful for closed-form sanity checks."""
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}")

    def fit(_labeled: Sequence[LabeledExample]) -> PredictFn:
        return lambda _fv: (label, 0.0)

    return Learner(name=name or f"Always{label}", fit=fit)


def stratified_folds(
    labels: Sequence[str], k: int, seed: int = 7
) -> list[int]:
    """Fold index per example: per-label seeded shuffle, then round-robin."""
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > len(labels):
        raise ValueError(f"cannot split {len(labels)} examples into {k} folds")
    rng = random.Random(seed)
    fold_of = [0] * len(labels)
    for label in sorted(set(labels)):
        idx = [i for i, l in enumerate(labels) if l == label]
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            fold_of[i] = j % k
    return fold_of


def cross_validate(
    labeled: Sequence[LabeledExample],
    learner: Learner,
    k: int = 10,
    seed: int = 7,
    fold_of: Sequence[int] | None = None,
) -> EvalMetrics:
    """Pooled confusion metrics over k held-out folds.

    ``fold_of`` overrides the seeded stratified assignment with an explicit
    one, which pins fold membership for oracle comparisons.
    """
    if fold_of is None:
        fold_of = stratified_folds([label for _, label in labeled], k, seed)
    elif len(fold_of) != len(labeled):
        raise ValueError("fold assignment length does not match dataset")
    tp = fp = fn = tn = 0
    for fold in sorted(set(fold_of)):
        train_set = [ex for ex, f in zip(labeled, fold_of) if f != fold]
        test_set = [ex for ex, f in zip(labeled, fold_of) if f == fold]
        if not train_set or not test_set:
            continue
        predict = learner.fit(train_set)
        for fv, gold in test_set:
            predicted, _ = predict(fv)
            if gold == POSITIVE and predicted == POSITIVE:
                tp += 1
            elif gold == NEGATIVE and predicted == POSITIVE:
                fp += 1
            elif gold == POSITIVE and predicted == NEGATIVE:
                fn += 1
            else:
                tn += 1
    return EvalMetrics.from_confusion(tp, fp, fn, tn)


def format_metrics_table(rows: Sequence[tuple[str, EvalMetrics]]) -> str:
    """Aligned text table: algorithm name plus P/R/F at three decimals."""
    header = ("Algorithm", "Precision", "Recall", "F-Measure")
    cells = [header] + [
        (name, f"{m.precision:.3f}", f"{m.recall:.3f}", f"{m.f_measure:.3f}")
        for name, m in rows
    ]
    widths = [max(len(row[col]) for row in cells) for col in range(4)]
    lines = []
    for row in cells:
        lines.append(
            "  ".join(
                row[0].ljust(widths[0]) if col == 0 else row[col].rjust(widths[col])
                for col in range(4)
            ).rstrip()
        )
    return "\n".join(lines)


MODEL_FORMAT_VERSION = 1


def save_classifier(model: NbModel | LinearModel, path: str | Path) -> None:
    if isinstance(model, NbModel):
        payload = {
            "format": "similes-classifier",
            "version": MODEL_FORMAT_VERSION,
            "kind": "nb",
            "alpha": model.alpha,
            "priors": model.priors,
            "counts": model.counts,
            "totals": model.totals,
            "vocabulary": sorted(model.vocabulary),
        }
    elif isinstance(model, LinearModel):
        payload = {
            "format": "similes-classifier",
            "version": MODEL_FORMAT_VERSION,
            "kind": "linear",
            "weights": model.weights,
            "bias": model.bias,
            "hyperparams": {
                "epochs": model.hyperparams.epochs,
                "learning_rate": model.hyperparams.learning_rate,
                "l2": model.hyperparams.l2,
                "seed": model.hyperparams.seed,
            },
        }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=0) + "\n",
        encoding="utf-8",
    )


class ClassifierFormatError(ValueError):
    """Raised when a classifier model file is corrupt or wrong-versioned."""


def load_classifier(path: str | Path) -> NbModel | LinearModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ClassifierFormatError(f"not a classifier model file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != "similes-classifier":
        raise ClassifierFormatError("not a classifier model file (bad format marker)")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ClassifierFormatError(f"unsupported model version {payload.get('version')!r}")
    try:
        if payload["kind"] == "nb":
            return NbModel(
                priors=dict(payload["priors"]),
                counts={label: dict(c) for label, c in payload["counts"].items()},
                totals={label: int(t) for label, t in payload["totals"].items()},
                vocabulary=set(payload["vocabulary"]),
                alpha=float(payload["alpha"]),
            )
        if payload["kind"] == "linear":
            hp = payload["hyperparams"]
            return LinearModel(
                weights={k: float(v) for k, v in payload["weights"].items()},
                bias=float(payload["bias"]),
                hyperparams=LinearHyperparams(
                    epochs=int(hp["epochs"]),
                    learning_rate=float(hp["learning_rate"]),
                    l2=float(hp["l2"]),
                    seed=int(hp["seed"]),
                ),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ClassifierFormatError(f"corrupt classifier model: {exc}") from exc
    raise ClassifierFormatError(f"unknown model kind {payload['kind']!r}")


def predict(model: NbModel | LinearModel, fv: FeatureVector) -> tuple[str, float]:
    if isinstance(model, NbModel):
        return predict_nb(model, fv)
    if isinstance(model, LinearModel):
        return predict_linear(model, fv)
    raise TypeError(f"cannot predict with {type(model).__name__}")
