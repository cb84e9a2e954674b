#!/usr/bin/env python3
"""Regenerate the committed test fixtures.

The gold sentences, their tags and their expected candidates are authored by
hand in this file; everything derived (document trees, tagger training
corpus, frozen extraction output, frozen metrics) is rebuilt from them so
the whole fixture set stays mutually consistent. Output is deterministic:
rerunning the script must reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from similes.classifier import (
    NEGATIVE,
    POSITIVE,
    load_labeled,
    predict_nb,
    stratified_folds,
    train_nb,
)
from similes.ingest import read_local
from similes.matcher import extract
from similes.pipeline import extract_corpus, write_candidates
from similes.tagger import TaggedToken, train
from similes.text import normalize, split_into_sentences, tokenize

# --- gold fixture: 25 hand-tagged sentences with hand annotations ----------
# Each item: (raw sentence for the document tree,
#             "word/TAG ..." tagged tokens,
#             [(full_text, left, right, span_start, span_end), ...])
# Tags follow the positional convention: first letter V/A/N decides the
# coarse class, everything else is O.

GOLD: list[tuple[str, str, list[tuple[str, str, str, int, int]]]] = [
    (
        "Radi kao konj.",
        "radi/Vmr3s kao/Cs konj/Ncmsn ./Z",
        [("radi kao konj", "radi", "konj", 0, 3)],
    ),
    (
        "Lep kao cvet.",
        "lep/Agpmsn kao/Cs cvet/Ncmsn ./Z",
        [("lep kao cvet", "lep", "cvet", 0, 3)],
    ),
    (
        "Radi kao pravnik.",
        "radi/Vmr3s kao/Cs pravnik/Ncmsn ./Z",
        [("radi kao pravnik", "radi", "pravnik", 0, 3)],
    ),
    (
        "Smoren kao zmaj u vatrogasnoj stanici.",
        "smoren/Appmsn kao/Cs zmaj/Ncmsn u/Sp vatrogasnoj/Agpfsl stanici/Ncfsl ./Z",
        [("smoren kao zmaj", "smoren", "zmaj", 0, 3)],
    ),
    (
        "Smorio se kao zmaj.",
        "smorio/Vmp-sm se/Px kao/Cs zmaj/Ncmsn ./Z",
        [("smorio se kao zmaj", "smorio se", "zmaj", 0, 4)],
    ),
    (
        "On je kao i ja.",
        "on/Pp3msn je/Var3s kao/Cs i/Cc ja/Pp1-sn ./Z",
        [],
    ),
    (
        "Ко зна где је?",
        "ко/Pq-msn зна/Vmr3s где/Rgp је/Var3s ?/Z",
        [],
    ),
    (
        "Ради као коњ.",
        "ради/Vmr3s као/Cs коњ/Ncmsn ./Z",
        [("radi kao konj", "radi", "konj", 0, 3)],
    ),
    (
        "Jede k’o mećava.",
        "jede/Vmr3s k’o/Cs mećava/Ncfsn ./Z",
        [("jede kao mećava", "jede", "mećava", 0, 3)],
    ),
    (
        "Radi, kao konj.",
        "radi/Vmr3s ,/Z kao/Cs konj/Ncmsn ./Z",
        [],
    ),
    (
        "Ćuti kao zaliven.",
        "ćuti/Vmr3s kao/Cs zaliven/Appmsn ./Z",
        [],
    ),
    (
        "To je kao nekada.",
        "to/Pd-nsn je/Var3s kao/Cs nekada/Rgp ./Z",
        [],
    ),
    (
        "Smeje se kao lud na brašno.",
        "smeje/Vmr3s se/Px kao/Cs lud/Agpmsn na/Sp brašno/Ncnsa ./Z",
        [],
    ),
    (
        "Ide kao po lojanici.",
        "ide/Vmr3s kao/Cs po/Sp lojanici/Ncfsl ./Z",
        [],
    ),
    (
        "Lep kao beli cvet.",
        "lep/Agpmsn kao/Cs beli/Agpmsn cvet/Ncmsn ./Z",
        [("lep kao beli cvet", "lep", "beli cvet", 0, 4)],
    ),
    (
        "Spava kao beba.",
        "spava/Vmr3s kao/Cs beba/Ncfsn ./Z",
        [("spava kao beba", "spava", "beba", 0, 3)],
    ),
    (
        "Peva kao slavuj i radi kao konj.",
        "peva/Vmr3s kao/Cs slavuj/Ncmsn i/Cc radi/Vmr3s kao/Cs konj/Ncmsn ./Z",
        [
            ("peva kao slavuj", "peva", "slavuj", 0, 3),
            ("radi kao konj", "radi", "konj", 4, 7),
        ],
    ),
    (
        "Jak kao medved.",
        "jak/Agpmsn kao/Cs medved/Ncmsn ./Z",
        [("jak kao medved", "jak", "medved", 0, 3)],
    ),
    (
        "Ljut kao ris skače po kući.",
        "ljut/Agpmsn kao/Cs ris/Ncmsn skače/Vmr3s po/Sp kući/Ncfsl ./Z",
        [("ljut kao ris", "ljut", "ris", 0, 3)],
    ),
    (
        "Visok kao mlad zelen bor.",
        "visok/Agpmsn kao/Cs mlad/Agpmsn zelen/Agpmsn bor/Ncmsn ./Z",
        [("visok kao mlad zelen bor", "visok", "mlad zelen bor", 0, 5)],
    ),
    (
        "Težak kao sto kilograma.",
        "težak/Agpmsn kao/Cs sto/Mlc kilograma/Ncmpg ./Z",
        [],
    ),
    (
        "Виче као луд.",
        "виче/Vmr3s као/Cs луд/Agpmsn ./Z",
        [],
    ),
    (
        "Мирише као пролећни цвет.",
        "мирише/Vmr3s као/Cs пролећни/Agpmsn цвет/Ncmsn ./Z",
        [("miriše kao prolećni cvet", "miriše", "prolećni cvet", 0, 4)],
    ),
    (
        "Uporan je kao mazga.",
        "uporan/Agpmsn je/Var3s kao/Cs mazga/Ncfsn ./Z",
        [("je kao mazga", "je", "mazga", 1, 4)],
    ),
    (
        "Vredan kao pčela, kaže baka.",
        "vredan/Agpmsn kao/Cs pčela/Ncfsn ,/Z kaže/Vmr3s baka/Ncfsn ./Z",
        [("vredan kao pčela", "vredan", "pčela", 0, 3)],
    ),
]

# gold sentence index ranges per document file
GOLD_FILES = {
    "recnik/zapisi_1.txt": range(0, 7),
    "recnik/zapisi_2.txt": range(7, 13),
    "forum/teme_1.txt": range(13, 19),
    "vesti/clanak_1.txt": range(19, 25),
}

# --- mixed-document templates ----------------------------------------------

# name entries: (word, tag, gender) so participles can agree
NAMES = [
    ("marko", "Npmsn", "m"),
    ("petar", "Npmsn", "m"),
    ("ana", "Npfsn", "f"),
    ("jovana", "Npfsn", "f"),
    ("milan", "Npmsn", "m"),
]
PROFESSIONS = [("pravnik", "Ncmsn"), ("advokat", "Ncmsn"), ("direktor", "Ncmsn"), ("profesor", "Ncmsn"), ("inženjer", "Ncmsn")]
PLACES = [("gradu", "Ncmsl"), ("sudu", "Ncmsl"), ("firmi", "Ncfsl")]

DOT = (".", "Z")
KAO = ("kao", "Cs")


def _employed(gender: str) -> tuple[str, str]:
    return ("zaposlen", "Appmsn") if gender == "m" else ("zaposlena", "Appfsn")


def _bored(gender: str) -> tuple[str, str]:
    return ("smoren", "Appmsn") if gender == "m" else ("smorena", "Appfsn")


LITERAL_TEMPLATES = [
    lambda name, g, prof, place: [name, ("radi", "Vmr3s"), KAO, prof, DOT],
    lambda name, g, prof, place: [name, ("je", "Var3s"), _employed(g), KAO, prof, DOT],
    lambda name, g, prof, place: [name, ("sada", "Rgp"), ("radi", "Vmr3s"), KAO, prof, ("u", "Sp"), place, DOT],
    lambda name, g, prof, place: [("godinama", "Ncfpi"), ("radi", "Vmr3s"), KAO, prof, DOT],
]

TRUE_TEMPLATES = [
    lambda name, g: [name, ("radi", "Vmr3s"), KAO, ("konj", "Ncmsn"), ("ceo", "Agpmsn"), ("dan", "Ncmsn"), DOT],
    lambda name, g: [name, ("peva", "Vmr3s"), KAO, ("slavuj", "Ncmsn"), DOT],
    lambda name, g: [name, ("spava", "Vmr3s"), KAO, ("top", "Ncmsn"), DOT],
    lambda name, g: [name, ("jede", "Vmr3s"), KAO, ("mećava", "Ncfsn"), DOT],
    lambda name, g: [name, ("je", "Var3s"), _bored(g), KAO, ("zmaj", "Ncmsn"), DOT],
]

FILLER_TEMPLATES = [
    [("vreme", "Ncnsn"), ("je", "Var3s"), ("lepo", "Agpnsn"), ("danas", "Rgp"), DOT],
    [("deca", "Ncfpn"), ("se", "Px"), ("igraju", "Vmr3p"), ("u", "Sp"), ("parku", "Ncmsl"), DOT],
    [("sutra", "Rgp"), ("idemo", "Vmr1p"), ("u", "Sp"), ("školu", "Ncfsa"), DOT],
    [("kiša", "Ncfsn"), ("pada", "Vmr3s"), ("ceo", "Agpmsn"), ("dan", "Ncmsn"), DOT],
    [("ima", "Vmr3s"), ("100", "Mdc"), ("dinara", "Ncmpg"), DOT],
]

# corpus-only sentences: rare nouns feeding the unknown-word suffix tables
CORPUS_EXTRAS = [
    [("planina", "Ncfsn"), ("je", "Var3s"), ("visoka", "Agpfsn"), DOT],
    [("godina", "Ncfsn"), ("brzo", "Rgp"), ("prolazi", "Vmr3s"), DOT],
    [("mašina", "Ncfsn"), ("radi", "Vmr3s"), ("dobro", "Rgp"), DOT],
    [("dolina", "Ncfsn"), ("je", "Var3s"), ("zelena", "Agpfsn"), DOT],
    [("istina", "Ncfsn"), ("se", "Px"), ("zna", "Vmr3s"), DOT],
]

MIXED_FILES = ["forum/teme_2.txt", "vesti/clanak_2.txt", "blog/post_1.txt", "blog/post_2.txt"]
SENTENCES_PER_MIXED_FILE = 50

LABELED_POS = (["peva", "spava", "jede", "trči"], ["konj", "zmaj", "mećava", "top", "sneg"])
LABELED_NEG = (["gradi", "uči", "svira", "crta"], ["pravnik", "advokat", "direktor", "profesor", "inženjer"])

SEED_PHRASES = [
    "Radi k'o konj",
    "Beo kao sneg",
    "Ćuti kao zaliven",
    "Zdrav kao dren",
    "Brz kao munja",
    "Pijan kao majka",
    "Prav kao strela",
    "Go kao pištolj",
    "Sam kao prst",
    "Dosadan kao stenica",
]

GENDER_TRIPLES = [
    ("beo", "bela", "belo"),
    ("ceo", "cela", "celo"),
    ("veseo", "vesela", "veselo"),
    ("debeo", "debela", "debelo"),
    ("lep", "lepa", "lepo"),
    ("brz", "brza", "brzo"),
    ("jak", "jaka", "jako"),
    ("nov", "nova", "novo"),
    ("star", "stara", "staro"),
    ("zelen", "zelena", "zeleno"),
    ("visok", "visoka", "visoko"),
    ("mlad", "mlada", "mlado"),
    ("crven", "crvena", "crveno"),
    ("glup", "glupa", "glupo"),
    ("vruć", "vruća", "vruće"),
]

STEM_LEXICON = [
    ("radi", "rad"),
    ("radu", "rad"),
    ("radom", "rad"),
    ("kao", "ka"),
    ("konj", "konj"),
    ("konja", "konj"),
    ("konjima", "konj"),
    ("stanici", "stanic"),
    ("stanicama", "stanic"),
    ("vatrogasnoj", "vatrogasn"),
    ("sneg", "sneg"),
    ("cvet", "cvet"),
    ("zmaj", "zmaj"),
    ("mećava", "mećav"),
    ("lepa", "lep"),
    ("lepo", "lep"),
    ("lepi", "lep"),
    ("lepoga", "lep"),
    ("lepome", "lep"),
    ("belim", "bel"),
    ("belih", "bel"),
    ("velikome", "velik"),
    ("smorio", "smori"),
    ("uz", "uz"),
    ("se", "se"),
    ("i", "i"),
]


def parse_tagged(line: str) -> list[tuple[str, str]]:
    pairs = []
    for item in line.split(" "):
        word, _, tag = item.rpartition("/")
        pairs.append((word, tag))
    return pairs


def detokenize(tokens: list[tuple[str, str]]) -> str:
    out = ""
    for i, (word, tag) in enumerate(tokens):
        surface = word
        if i == 0 or tag.startswith("Np"):
            surface = surface[0].upper() + surface[1:]
        if out and tag != "Z":
            out += " "
        out += surface
    return out


def corpus_lines(tokens: list[tuple[str, str]]) -> str:
    return "\n".join(f"{normalize(word)}\t{tag}" for word, tag in tokens)


def build_mixed(rng: random.Random) -> tuple[dict[str, list[list[tuple[str, str]]]], dict[str, int]]:
    per_file: dict[str, list[list[tuple[str, str]]]] = {}
    stats = {"literal": 0, "true": 0, "filler": 0}
    for filename in MIXED_FILES:
        sentences = []
        for _ in range(SENTENCES_PER_MIXED_FILE):
            roll = rng.random()
            if roll < 0.60:
                template = rng.choice(LITERAL_TEMPLATES)
                word, tag, gender = rng.choice(NAMES)
                sent = template((word, tag), gender, rng.choice(PROFESSIONS), rng.choice(PLACES))
                stats["literal"] += 1
            elif roll < 0.75:
                template = rng.choice(TRUE_TEMPLATES)
                word, tag, gender = rng.choice(NAMES)
                sent = template((word, tag), gender)
                stats["true"] += 1
            else:
                sent = rng.choice(FILLER_TEMPLATES)
                stats["filler"] += 1
            sentences.append(sent)
        per_file[filename] = sentences
    return per_file, stats


def gold_fixture_text() -> str:
    lines = [
        "# Gold extraction fixture: one block per sentence.",
        "# Line 1 of a block: hand-tagged tokens as word/TAG, space-separated.",
        "# Remaining lines: expected candidates as",
        "#   full_text<TAB>left<TAB>right<TAB>start:end  (token span, half-open).",
        "# Blocks are separated by blank lines.",
        "",
    ]
    blocks = []
    for _, tagged, candidates in GOLD:
        block = [tagged]
        for full_text, left, right, start, end in candidates:
            block.append(f"{full_text}\t{left}\t{right}\t{start}:{end}")
        blocks.append("\n".join(block))
    return "\n".join(lines) + "\n" + "\n\n".join(blocks) + "\n"


def sentences_to_doc(sentences: list[str]) -> str:
    paragraphs = [
        " ".join(sentences[i : i + 5]) for i in range(0, len(sentences), 5)
    ]
    return "\n\n".join(paragraphs) + "\n"


def check_gold_consistency():
    """Raw text, tagged tokens and annotations must agree with the matcher."""
    for raw, tagged_line, annotated in GOLD:
        tokens = parse_tagged(tagged_line)
        raw_tokens = [t.text for t in tokenize(normalize(raw))]
        norm_tokens = [normalize(w) for w, _ in tokens]
        assert raw_tokens == norm_tokens, (raw, raw_tokens, norm_tokens)
        tagged = [
            TaggedToken(token=tok, fine_tag=tag, coarse=tag[0] if tag[0] in "VAN" else "O")
            for tok, (word, tag) in zip(tokenize(raw), tokens)
        ]
        got = [(c.full_text, c.left, c.right, c.span[0], c.span[1]) for c in extract(tagged)]
        assert got == annotated, (raw, got, annotated)


def independent_cv_tally(labeled, k: int, seed: int) -> dict:
    """Fold-by-fold confusion tally written without the harness helpers."""
    labels = [label for _, label in labeled]
    fold_of = stratified_folds(labels, k, seed)
    tp = fp = fn = tn = 0
    for fold in range(k):
        train_set = [ex for ex, f in zip(labeled, fold_of) if f != fold]
        model = train_nb(train_set)
        for ex, f in zip(labeled, fold_of):
            if f != fold:
                continue
            fv, gold_label = ex
            predicted, _ = predict_nb(model, fv)
            if gold_label == POSITIVE:
                if predicted == POSITIVE:
                    tp += 1
                else:
                    fn += 1
            else:
                if predicted == POSITIVE:
                    fp += 1
                else:
                    tn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f_measure = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {
        "algorithm": "NaiveBayes",
        "folds": k,
        "seed": seed,
        "tp": tp,
        "fp": fp,
        "fn": fn,
        "tn": tn,
        "precision": precision,
        "recall": recall,
        "f_measure": f_measure,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out-dir",
        type=Path,
        default=Path(__file__).resolve().parents[1] / "tests" / "fixtures",
    )
    args = parser.parse_args()
    out: Path = args.out_dir
    out.mkdir(parents=True, exist_ok=True)

    check_gold_consistency()

    # 1. gold matcher fixture
    (out / "gold_matcher.txt").write_text(gold_fixture_text(), encoding="utf-8")

    # 2. mixed sentences (deterministic)
    rng = random.Random(20260816)
    mixed, stats = build_mixed(rng)
    n_mixed = sum(len(v) for v in mixed.values())
    assert n_mixed == 200, n_mixed

    # 3. document trees: full corpus and the mixed-only subset
    docs_root = out / "docs"
    mixed_root = out / "mixed_docs"
    for filename, indices in GOLD_FILES.items():
        path = docs_root / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(sentences_to_doc([GOLD[i][0] for i in indices]), encoding="utf-8")
    for filename, sentences in mixed.items():
        raw = sentences_to_doc([detokenize(s) for s in sentences])
        for root in (docs_root, mixed_root):
            path = root / filename
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(raw, encoding="utf-8")

    # every document sentence must split back out of its file verbatim
    for filename, indices in GOLD_FILES.items():
        got = [s.text for s in split_into_sentences((docs_root / filename).read_text(encoding="utf-8"))]
        assert got == [GOLD[i][0] for i in indices], filename

    # 4. tagger training corpus: gold blocks three times, extras, mixed once
    blocks: list[str] = []
    for _, tagged_line, _ in GOLD:
        block = corpus_lines(parse_tagged(tagged_line))
        blocks.extend([block] * 3)
    for sent in CORPUS_EXTRAS:
        blocks.append(corpus_lines(sent))
    seen: set[tuple] = set()
    for filename in MIXED_FILES:
        for sent in mixed[filename]:
            key = tuple(sent)
            if key not in seen:
                seen.add(key)
                blocks.append(corpus_lines(sent))
    corpus_text = "\n\n".join(blocks) + "\n"
    (out / "tagger_corpus.tsv").write_text(corpus_text, encoding="utf-8")

    # 5. labeled dataset: two disjoint 4x5 grids of left/right combinations
    lines = []
    for left in LABELED_POS[0]:
        for right in LABELED_POS[1]:
            lines.append(f"{POSITIVE}\t{left} kao {right}")
    for left in LABELED_NEG[0]:
        for right in LABELED_NEG[1]:
            lines.append(f"{NEGATIVE}\t{left} kao {right}")
    (out / "labeled_40.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    # 6. seed list, gender triples, stem lexicon
    (out / "seed_10.txt").write_text("\n".join(SEED_PHRASES) + "\n", encoding="utf-8")
    (out / "gender_triples.txt").write_text(
        "\n".join(" ".join(t) for t in GENDER_TRIPLES) + "\n", encoding="utf-8"
    )
    (out / "stem_lexicon.txt").write_text(
        "\n".join(f"{w}\t{s}" for w, s in STEM_LEXICON) + "\n", encoding="utf-8"
    )

    # 7. train the tagger on the corpus and freeze the extraction output
    from similes.tagger import read_tagged_corpus

    corpus = list(read_tagged_corpus(corpus_text.splitlines()))
    model = train(corpus)
    vocab = {normalize(w) for sent in corpus for w, _ in sent}
    for doc in read_local(docs_root):
        for sentence in split_into_sentences(doc.text):
            for token in tokenize(normalize(sentence.text)):
                assert token.text in vocab, (doc.source_locator, token.text)
    candidates = extract_corpus(model, read_local(docs_root))
    write_candidates(candidates, out / "expected_candidates.tsv")

    # every gold annotation must be reproduced by the trained-tagger pipeline
    gold_expected = {
        (full, left, right) for _, _, anns in GOLD for (full, left, right, _, _) in anns
    }
    gold_got = {
        (c.full_text, c.left, c.right)
        for c in extract_corpus(model, read_local(docs_root))
        if "zapisi" in _locator_of(c.doc_id, docs_root)
        or "teme_1" in _locator_of(c.doc_id, docs_root)
        or "clanak_1" in _locator_of(c.doc_id, docs_root)
    }
    assert gold_expected == gold_got, gold_expected ^ gold_got

    # 8. frozen metrics for the labeled set (independent tally, k=5, seed 7)
    labeled = load_labeled(out / "labeled_40.tsv")
    metrics = independent_cv_tally(labeled, k=5, seed=7)
    (out / "labeled_40_metrics.json").write_text(
        json.dumps(metrics, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    print(f"gold sentences: {len(GOLD)}")
    print(f"mixed sentences: {n_mixed} ({stats})")
    print(f"candidates frozen: {len(candidates)}")
    print(f"labeled_40 metrics: P={metrics['precision']:.3f} R={metrics['recall']:.3f} F={metrics['f_measure']:.3f}")
    return 0


def _locator_of(doc_id: str, root: Path) -> str:
    from similes.ingest import doc_id_for

    for path in root.rglob("*"):
        if path.is_file():
            locator = path.relative_to(root).as_posix()
            if doc_id_for(locator) == doc_id:
                return locator
    raise KeyError(doc_id)


if __name__ == "__main__":
    sys.exit(main())
