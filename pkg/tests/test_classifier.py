import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from similes.classifier import (
    ClassifierFormatError,
    DatasetFormatError,
    EvalMetrics,
    FeatureVector,
    LinearHyperparams,
    LinearModel,
    NEGATIVE,
    POSITIVE,
    constant_learner,
    cross_validate,
    featurize,
    featurize_phrase,
    format_metrics_table,
    linear_learner,
    load_classifier,
    nb_learner,
    predict,
    predict_linear,
    predict_nb,
    read_labeled,
    save_classifier,
    stratified_folds,
    train_linear,
    train_nb,
)
from similes.matcher import SimileCandidate

from conftest import FIXTURES


def fv_of(phrase):
    return featurize_phrase(phrase)


def dataset(*rows):
    return [(fv_of(phrase), label) for label, phrase in rows]


class TestFeaturize:
    def test_phrase_with_connector_has_six_namespaces(self):
        fv = featurize_phrase("Radi kao konj")
        assert fv.indicators == frozenset(
            {
                "whole=radi kao konj",
                "whole_stem=rad ka konj",
                "left=radi",
                "left_stem=rad",
                "right=konj",
                "right_stem=konj",
            }
        )

    def test_colloquial_connector_is_canonicalized(self):
        assert featurize_phrase("Radi k'o konj") == featurize_phrase("radi kao konj")

    def test_cyrillic_phrase_matches_latin(self):
        assert featurize_phrase("Ради као коњ") == featurize_phrase("radi kao konj")

    def test_phrase_without_connector_has_whole_only(self):
        fv = featurize_phrase("lep cvet")
        assert fv.indicators == frozenset({"whole=lep cvet", "whole_stem=lep cvet"})

    def test_leading_connector_omits_left(self):
        fv = featurize_phrase("kao konj")
        assert "right=konj" in fv.indicators
        assert not any(i.startswith("left=") for i in fv.indicators)

    def test_punctuation_is_dropped(self):
        assert featurize_phrase("Radi, kao konj!") == featurize_phrase("radi kao konj")

    def test_mask_projects_namespaces(self):
        fv = featurize_phrase("radi kao konj", mask=("left", "right"))
        assert fv.indicators == frozenset({"left=radi", "right=konj"})

    def test_candidate_and_phrase_featurize_identically(self):
        candidate = SimileCandidate(
            left="radi", connector="kao", right="konj",
            full_text="radi kao konj", span=(0, 3),
        )
        assert featurize(candidate) == featurize_phrase("radi kao konj")

    def test_bad_indicator_format_rejected(self):
        with pytest.raises(ValueError):
            FeatureVector(frozenset({"no-namespace-separator"}))


class TestReadLabeled:
    def test_parses_labels_and_phrases(self):
        data = read_labeled(["1\tradi kao konj", "", "0\tradi kao pravnik"])
        assert [label for _, label in data] == [POSITIVE, NEGATIVE]

    def test_bad_label_reports_line(self):
        with pytest.raises(DatasetFormatError, match="line 2"):
            read_labeled(["1\tok fraza", "2\tlosa oznaka"])

    def test_missing_tab_reports_line(self):
        with pytest.raises(DatasetFormatError, match="line 1"):
            read_labeled(["nema taba"])


class TestNaiveBayes:
    def train_small(self):
        return train_nb(
            dataset(
                (POSITIVE, "peva kao zmaj"),
                (POSITIVE, "spava kao konj"),
                (NEGATIVE, "radi kao pravnik"),
                (NEGATIVE, "uči kao advokat"),
            )
        )

    def test_hand_computed_log_odds(self):
        model = self.train_small()
        # probe "peva kao konj": whole indicators unseen (skipped), the four
        # left/right indicators each count 1 in the positive class, 0 in the
        # negative. Totals are 12 per class, vocabulary 24, priors equal:
        # log-odds = 4 * (log(2/36) - log(1/36)) = 4 * log 2.
        label, log_odds = predict_nb(model, fv_of("peva kao konj"))
        assert label == POSITIVE
        assert log_odds == pytest.approx(4 * math.log(2))

    def test_fully_oov_probe_falls_back_to_priors(self):
        model = self.train_small()
        label, log_odds = predict_nb(model, fv_of("nešto sasvim drugo"))
        # balanced priors: exact tie, resolved to the positive label
        assert log_odds == 0.0
        assert label == POSITIVE

    def test_unbalanced_priors_decide_oov(self):
        model = train_nb(
            dataset(
                (POSITIVE, "peva kao zmaj"),
                (NEGATIVE, "radi kao pravnik"),
                (NEGATIVE, "uči kao advokat"),
                (NEGATIVE, "svira kao mašina"),
            )
        )
        label, log_odds = predict_nb(model, fv_of("nešto sasvim drugo"))
        assert label == NEGATIVE
        assert log_odds == pytest.approx(math.log(1 / 4) - math.log(3 / 4))

    def test_training_order_is_irrelevant(self):
        rows = [
            (POSITIVE, "peva kao zmaj"),
            (POSITIVE, "jede kao mećava"),
            (NEGATIVE, "radi kao pravnik"),
            (NEGATIVE, "uči kao advokat"),
        ]
        a = train_nb(dataset(*rows))
        b = train_nb(dataset(*reversed(rows)))
        for phrase in ["peva kao konj", "radi kao advokat", "nešto novo"]:
            assert predict_nb(a, fv_of(phrase)) == predict_nb(b, fv_of(phrase))

    def test_larger_alpha_shrinks_confidence(self):
        rows = dataset(
            (POSITIVE, "peva kao zmaj"),
            (NEGATIVE, "radi kao pravnik"),
        )
        sharp = predict_nb(train_nb(rows, alpha=1.0), fv_of("peva kao konj"))[1]
        smooth = predict_nb(train_nb(rows, alpha=10.0), fv_of("peva kao konj"))[1]
        assert 0 < smooth < sharp

    def test_single_label_training_rejected(self):
        with pytest.raises(ValueError):
            train_nb(dataset((POSITIVE, "peva kao zmaj")))

    def test_duplicating_disjoint_data_keeps_labels(self):
        # per-class feature sets are disjoint here, so doubling every count
        # moves each log-ratio away from zero without changing its sign
        rows = dataset(
            (POSITIVE, "peva kao zmaj"),
            (POSITIVE, "spava kao konj"),
            (NEGATIVE, "radi kao pravnik"),
            (NEGATIVE, "uči kao advokat"),
        )
        single = train_nb(rows)
        doubled = train_nb(rows * 2)
        for phrase in ["peva kao konj", "radi kao advokat", "nešto sasvim drugo"]:
            assert predict_nb(single, fv_of(phrase))[0] == predict_nb(doubled, fv_of(phrase))[0]


class TestLinear:
    def separable(self):
        return dataset(
            (POSITIVE, "peva kao zmaj"),
            (POSITIVE, "spava kao konj"),
            (POSITIVE, "jede kao mećava"),
            (POSITIVE, "trči kao vetar"),
            (POSITIVE, "leti kao strela"),
            (NEGATIVE, "radi kao pravnik"),
            (NEGATIVE, "uči kao advokat"),
            (NEGATIVE, "svira kao mašina"),
            (NEGATIVE, "crta kao inženjer"),
            (NEGATIVE, "gradi kao direktor"),
        )

    def test_separable_data_fits_perfectly(self):
        data = self.separable()
        model = train_linear(data)
        for fv, label in data:
            assert predict_linear(model, fv)[0] == label

    def test_same_seed_same_model(self):
        data = self.separable()
        a = train_linear(data, LinearHyperparams(seed=13))
        b = train_linear(data, LinearHyperparams(seed=13))
        assert a.weights == b.weights

    def test_conflicting_duplicates_follow_majority(self):
        fv = fv_of("radi kao konj")
        data = [(fv, POSITIVE)] * 6 + [(fv, NEGATIVE)] * 4
        model = train_linear(data)
        assert predict_linear(model, fv)[0] == POSITIVE

    def test_zero_margin_is_negative(self):
        model = LinearModel(weights={}, bias=0.0)
        label, margin = predict_linear(model, fv_of("bilo šta"))
        assert margin == 0.0
        assert label == NEGATIVE

    def test_l2_shrinks_weights(self):
        data = self.separable()
        plain = train_linear(data, LinearHyperparams(l2=0.0))
        shrunk = train_linear(data, LinearHyperparams(l2=0.05))
        norm = lambda m: sum(w * w for w in m.weights.values())
        assert norm(shrunk) < norm(plain)

    def test_hyperparams_validated(self):
        with pytest.raises(ValueError):
            LinearHyperparams(epochs=0)
        with pytest.raises(ValueError):
            LinearHyperparams(learning_rate=0.0)
        with pytest.raises(ValueError):
            LinearHyperparams(l2=-1.0)


class TestMetrics:
    def test_from_confusion(self):
        m = EvalMetrics.from_confusion(tp=8, fp=2, fn=4, tn=6)
        assert m.precision == pytest.approx(0.8)
        assert m.recall == pytest.approx(8 / 12)
        assert m.f_measure == pytest.approx(2 * 0.8 * (8 / 12) / (0.8 + 8 / 12))

    def test_zero_denominators(self):
        m = EvalMetrics.from_confusion(tp=0, fp=0, fn=3, tn=5)
        assert m.precision == 0.0
        assert m.recall == 0.0
        assert m.f_measure == 0.0

    def test_always_positive_on_balanced_data_is_exact(self):
        m = EvalMetrics.from_confusion(tp=20, fp=20, fn=0, tn=0)
        assert m.precision == 0.5
        assert m.recall == 1.0
        assert m.f_measure == 2 / 3


class TestFolds:
    def test_round_robin_is_stratified(self):
        labels = [POSITIVE] * 20 + [NEGATIVE] * 20
        fold_of = stratified_folds(labels, k=5, seed=7)
        for fold in range(5):
            members = [i for i, f in enumerate(fold_of) if f == fold]
            pos = sum(1 for i in members if labels[i] == POSITIVE)
            assert len(members) == 8
            assert pos == 4

    def test_deterministic_given_seed(self):
        labels = [POSITIVE] * 9 + [NEGATIVE] * 7
        assert stratified_folds(labels, 4, seed=3) == stratified_folds(labels, 4, seed=3)

    def test_k_bounds(self):
        with pytest.raises(ValueError):
            stratified_folds([POSITIVE, NEGATIVE], k=1)
        with pytest.raises(ValueError):
            stratified_folds([POSITIVE, NEGATIVE], k=3)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.sampled_from([POSITIVE, NEGATIVE]), min_size=4, max_size=60),
        st.integers(min_value=2, max_value=4),
        st.integers(min_value=0, max_value=999),
    )
    def test_fold_sizes_differ_by_at_most_one_per_label(self, labels, k, seed):
        if k > len(labels):
            return
        fold_of = stratified_folds(labels, k, seed)
        assert len(fold_of) == len(labels)
        assert set(fold_of) <= set(range(k))
        for label in (POSITIVE, NEGATIVE):
            sizes = [
                sum(1 for i, f in enumerate(fold_of) if f == fold and labels[i] == label)
                for fold in range(k)
            ]
            assert max(sizes) - min(sizes) <= 1


class TestCrossValidate:
    def test_constant_learner_confusion_is_exact(self):
        data = dataset(
            (POSITIVE, "peva kao zmaj"),
            (POSITIVE, "spava kao konj"),
            (POSITIVE, "jede kao mećava"),
            (NEGATIVE, "radi kao pravnik"),
            (NEGATIVE, "uči kao advokat"),
            (NEGATIVE, "svira kao mašina"),
            (NEGATIVE, "crta kao inženjer"),
            (NEGATIVE, "gradi kao direktor"),
        )
        fold_of = [0, 1, 0, 1, 0, 1, 0, 1]
        metrics = cross_validate(data, constant_learner(POSITIVE), k=2, fold_of=fold_of)
        assert (metrics.tp, metrics.fp, metrics.fn, metrics.tn) == (3, 5, 0, 0)
        assert metrics.precision == pytest.approx(3 / 8)
        assert metrics.recall == 1.0

    def test_explicit_fold_assignment_is_respected(self, labeled40):
        # train on the second half, test on the first, and vice versa
        fold_of = [0] * 10 + [1] * 10 + [0] * 10 + [1] * 10
        metrics = cross_validate(labeled40, nb_learner(), k=2, fold_of=fold_of)
        tally = independent_tally(labeled40, fold_of, k=2)
        assert (metrics.tp, metrics.fp, metrics.fn, metrics.tn) == tally

    def test_five_fold_on_bundled_dataset_is_perfect(self, labeled40):
        metrics = cross_validate(labeled40, nb_learner(), k=5, seed=7)
        assert metrics.f_measure == 1.0
        frozen = json.loads((FIXTURES / "labeled_40_metrics.json").read_text())
        assert (metrics.tp, metrics.fp, metrics.fn, metrics.tn) == (
            frozen["tp"], frozen["fp"], frozen["fn"], frozen["tn"],
        )

    def test_fold_of_must_cover_all_examples(self, labeled40):
        with pytest.raises(ValueError):
            cross_validate(labeled40, nb_learner(), k=2, fold_of=[0, 1])


def independent_tally(labeled, fold_of, k):
    """Confusion counts computed without the cross_validate helper."""
    tp = fp = fn = tn = 0
    for fold in range(k):
        train_rows = [ex for ex, f in zip(labeled, fold_of) if f != fold]
        model = train_nb(train_rows)
        for (fv, gold), f in zip(labeled, fold_of):
            if f != fold:
                continue
            predicted, _ = predict_nb(model, fv)
            if gold == POSITIVE and predicted == POSITIVE:
                tp += 1
            elif gold == POSITIVE:
                fn += 1
            elif predicted == POSITIVE:
                fp += 1
            else:
                tn += 1
    return tp, fp, fn, tn


class TestReport:
    def test_table_format_is_aligned(self):
        rows = [
            ("NaiveBayes", EvalMetrics.from_confusion(tp=20, fp=20, fn=0, tn=0)),
            ("Linear", EvalMetrics.from_confusion(tp=18, fp=2, fn=2, tn=18)),
        ]
        table = format_metrics_table(rows)
        lines = table.splitlines()
        assert lines[0].split() == ["Algorithm", "Precision", "Recall", "F-Measure"]
        assert "0.500" in lines[1] and "1.000" in lines[1] and "0.667" in lines[1]
        assert len({len(line) for line in lines}) == 1


class TestPersistence:
    def test_nb_round_trip(self, tmp_path, labeled40):
        model = train_nb(labeled40)
        path = tmp_path / "nb.json"
        save_classifier(model, path)
        loaded = load_classifier(path)
        for fv, _ in labeled40:
            assert predict(loaded, fv) == predict(model, fv)

    def test_linear_round_trip(self, tmp_path):
        data = dataset(
            (POSITIVE, "peva kao zmaj"),
            (NEGATIVE, "radi kao pravnik"),
        )
        model = train_linear(data)
        path = tmp_path / "linear.json"
        save_classifier(model, path)
        loaded = load_classifier(path)
        assert loaded.weights == model.weights

    def test_bad_format_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"format": "other", "version": 1}))
        with pytest.raises(ClassifierFormatError):
            load_classifier(path)

    def test_bad_version_rejected(self, tmp_path, labeled40):
        path = tmp_path / "nb.json"
        save_classifier(train_nb(labeled40), path)
        blob = json.loads(path.read_text())
        blob["version"] = 99
        path.write_text(json.dumps(blob))
        with pytest.raises(ClassifierFormatError):
            load_classifier(path)
