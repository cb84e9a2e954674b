import pytest
from hypothesis import given
from hypothesis import strategies as st

from similes.text import (
    NUMBER,
    PUNCTUATION,
    WORD,
    collation_key,
    latinize,
    normalize,
    split_into_sentences,
    split_sentences,
    token_kind,
    tokenize,
)


def texts(tokens):
    return [t.text for t in tokens]


class TestTokenize:
    def test_words_and_punctuation(self):
        tokens = tokenize("Radi kao konj.")
        assert texts(tokens) == ["Radi", "kao", "konj", "."]
        assert [t.kind for t in tokens] == [WORD, WORD, WORD, PUNCTUATION]

    def test_apostrophe_stays_inside_word(self):
        assert texts(tokenize("Jede k'o mećava.")) == ["Jede", "k'o", "mećava", "."]
        assert texts(tokenize("Jede k’o mećava.")) == ["Jede", "k’o", "mećava", "."]

    def test_hyphenated_word_is_one_token(self):
        assert texts(tokenize("crno-beli film")) == ["crno-beli", "film"]

    def test_numbers(self):
        tokens = tokenize("Ima 100 dinara, tačno 3,5 posto.")
        assert texts(tokens) == ["Ima", "100", "dinara", ",", "tačno", "3,5", "posto", "."]
        assert tokens[1].kind == NUMBER
        assert tokens[5].kind == NUMBER

    def test_cyrillic(self):
        assert texts(tokenize("Ради као коњ.")) == ["Ради", "као", "коњ", "."]

    def test_empty(self):
        assert tokenize("") == []

    # Serbian letters, digits, punctuation and whitespace; every non-space
    # character must land in exactly one token, in order.
    @given(
        st.text(
            alphabet="abcdžđšćčž ĐŠĆČŽ АБВгдељњџ0123456789.,!?'’-()\"  \n\t",
            max_size=80,
        )
    )
    def test_tokens_cover_all_non_space_text(self, text):
        joined = "".join(t.text for t in tokenize(text))
        assert joined == "".join(text.split())

    @given(st.text(max_size=60))
    def test_no_token_is_empty_or_spaced(self, text):
        for token in tokenize(text):
            assert token.text
            assert not any(ch.isspace() for ch in token.text)


class TestNormalize:
    def test_latinize_maps_serbian_cyrillic(self):
        assert latinize("Ради као коњ.") == "Radi kao konj."
        assert latinize("Џак и љиљан") == "Džak i ljiljan"

    def test_latinize_passes_latin_through(self):
        assert latinize("Već viđeno, čaj.") == "Već viđeno, čaj."

    def test_normalize_lowercases_and_folds_apostrophe(self):
        assert normalize("Ради к’о коњ.") == "radi k'o konj."
        assert normalize("LEP KAO CVET") == "lep kao cvet"

    def test_normalize_idempotent(self):
        for s in ["Ради као коњ.", "Jede k’o mećava.", "abc 123"]:
            assert normalize(normalize(s)) == normalize(s)

    def test_token_kind(self):
        assert token_kind("konj") == WORD
        assert token_kind("к’о") == WORD
        assert token_kind("100") == NUMBER
        assert token_kind("3,5") == NUMBER
        assert token_kind(".") == PUNCTUATION
        assert token_kind("...") == PUNCTUATION


class TestSplitSentences:
    def test_basic_split(self):
        text = "Radi kao konj. Lep kao cvet."
        pieces = [text[a:b] for a, b in split_sentences(text)]
        assert pieces == ["Radi kao konj.", "Lep kao cvet."]

    def test_terminal_run_stays_with_sentence(self):
        text = "Šta?! Ne znam."
        pieces = [text[a:b] for a, b in split_sentences(text)]
        assert pieces == ["Šta?!", "Ne znam."]

    def test_abbreviation_does_not_split(self):
        text = "Dr. Marko ide kući. Sutra dolazi."
        pieces = [text[a:b] for a, b in split_sentences(text)]
        assert pieces == ["Dr. Marko ide kući.", "Sutra dolazi."]

    def test_single_initial_does_not_split(self):
        text = "M. Petrović piše. Kraj."
        pieces = [text[a:b] for a, b in split_sentences(text)]
        assert pieces == ["M. Petrović piše.", "Kraj."]

    def test_lowercase_after_period_does_not_split(self):
        text = "To je kraj. ali ne sasvim."
        assert len(split_sentences(text)) == 1

    def test_cyrillic_uppercase_starts_sentence(self):
        text = "Ко зна где је? Ради као коњ."
        pieces = [text[a:b] for a, b in split_sentences(text)]
        assert pieces == ["Ко зна где је?", "Ради као коњ."]

    def test_no_terminal_is_one_sentence(self):
        text = "nema kraja ovde"
        pieces = [text[a:b] for a, b in split_sentences(text)]
        assert pieces == [text]

    def test_empty_text(self):
        assert split_sentences("") == []
        assert split_sentences("   \n ") == []

    @given(st.text(alphabet="abc ABC.!? \n", max_size=120))
    def test_spans_are_trimmed_ordered_and_cover_content(self, text):
        spans = split_sentences(text)
        prev_end = 0
        for start, end in spans:
            assert 0 <= start < end <= len(text)
            assert start >= prev_end
            piece = text[start:end]
            assert piece == piece.strip()
            prev_end = end
        covered = "".join(text[a:b] for a, b in spans)
        assert "".join(covered.split()) == "".join(text.split())


class TestSplitIntoSentences:
    def test_text_and_offsets_point_into_source(self):
        text = "Radi kao konj.\n\nLep kao cvet. Kraj priče."
        sentences = split_into_sentences(text)
        assert [s.text for s in sentences] == ["Radi kao konj.", "Lep kao cvet.", "Kraj priče."]
        for s in sentences:
            assert text[s.source_offset : s.source_offset + len(s.text)] == s.text
            assert s.tokens

    def test_whitespace_only_yields_nothing(self):
        assert split_into_sentences(" \n\t ") == []


class TestCollation:
    def test_serbian_latin_alphabet_order(self):
        words = ["džak", "dete", "čaj", "ćup", "coka", "đak", "dzep"]
        assert sorted(words, key=collation_key) == [
            "coka", "čaj", "ćup", "dete", "dzep", "džak", "đak",
        ]

    def test_digraph_sorts_as_single_letter(self):
        # lj is one letter between l and m
        assert sorted(["luk", "ljut", "majka"], key=collation_key) == ["luk", "ljut", "majka"]

    def test_cyrillic_collates_with_latin(self):
        assert collation_key("Џак") == collation_key("džak")
        assert collation_key("КОЊ") == collation_key("konj")

    def test_case_insensitive(self):
        assert collation_key("Konj") == collation_key("konj")

    def test_non_alphabet_sorts_after_letters(self):
        assert sorted(["w1", "za"], key=collation_key) == ["za", "w1"]
