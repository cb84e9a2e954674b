"""Mining, classification and human curation of Serbian similes.

The pipeline tags raw text with a trainable trigram HMM POS tagger, extracts
connector-pattern candidates ("kao" / "ko" / "k'o" between a verb or
adjective and a noun phrase), separates true similes from literal
comparisons with trainable classifiers, collapses inflectional variants
through a rule-based stemmer, and feeds survivors into a curated corpus
served over HTTP.
"""

from .classifier import (
    EvalMetrics,
    FeatureVector,
    LinearHyperparams,
    LinearModel,
    NbModel,
    cross_validate,
    featurize,
    featurize_phrase,
    format_metrics_table,
    linear_learner,
    nb_learner,
    predict,
    train_linear,
    train_nb,
)
from .dedup import DedupIndex, jaccard, key_of, stem_set
from .ingest import Document, SourceConfig, crawl, extract_content, read_local
from .matcher import MatcherConfig, SimileCandidate, extract
from .pipeline import extract_corpus, extract_document, read_candidates, write_candidates
from .stemmer import StemRuleTable, default_rule_table, stem, stem_phrase
from .store import CorpusEntry, CorpusStats, CorpusStore
from .tagger import TaggedToken, TaggerModel, coarse_of, load_model, save_model, tag, train
from .text import Sentence, Token, collation_key, latinize, normalize, split_into_sentences, tokenize

__version__ = "0.1.0"

__all__ = [
    "CorpusEntry",
    "CorpusStats",
    "CorpusStore",
    "DedupIndex",
    "Document",
    "EvalMetrics",
    "FeatureVector",
    "LinearHyperparams",
    "LinearModel",
    "MatcherConfig",
    "NbModel",
    "Sentence",
    "SimileCandidate",
    "SourceConfig",
    "StemRuleTable",
    "TaggedToken",
    "TaggerModel",
    "Token",
    "coarse_of",
    "collation_key",
    "crawl",
    "cross_validate",
    "default_rule_table",
    "extract",
    "extract_content",
    "extract_corpus",
    "extract_document",
    "featurize",
    "featurize_phrase",
    "format_metrics_table",
    "jaccard",
    "key_of",
    "latinize",
    "linear_learner",
    "load_model",
    "nb_learner",
    "normalize",
    "predict",
    "read_candidates",
    "read_local",
    "save_model",
    "split_into_sentences",
    "stem",
    "stem_phrase",
    "stem_set",
    "tag",
    "tokenize",
    "train",
    "train_linear",
    "train_nb",
    "write_candidates",
]
