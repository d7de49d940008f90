import pytest
from hypothesis import given
from hypothesis import strategies as st

from ctxlex.seedlex import (NEGATIVE, POSITIVE, UNKNOWN, GeneralLexicon, LexiconError, bundled_words, load_word_sets,
                            polarity_of, read_word_file)


def _words(path, *lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_plain_sets(tmp_path):
    lex = load_word_sets({"positive": _words(tmp_path / "p.txt", "good", "great"),
                          "negative": _words(tmp_path / "n.txt", "bad")})
    assert lex.positive_words == {"good", "great"}
    assert lex.negative_words == {"bad"}
    assert lex.counts()["positive"] == 2 and lex.counts()["negative"] == 1


def test_overlap_is_named(tmp_path):
    with pytest.raises(LexiconError, match="good"):
        load_word_sets({"positive": _words(tmp_path / "p.txt", "good", "great"),
                        "negative": _words(tmp_path / "n.txt", "Good", "bad")})


def test_comments_blank_lines_and_case(tmp_path):
    p = _words(tmp_path / "p.txt", "# header", "", "  Great  ", "Well   Made  # trailing note")
    assert read_word_file(p) == ["great", "well made"]


def test_mpqa_clue_counts(tmp_path):
    lines = []
    for i in range(2718):
        lines.append(f"type=strongsubj len=1 word1=pos{i} pos1=adj stemmed1=n priorpolarity=positive")
    for i in range(4902):
        lines.append(f"type=weaksubj len=1 word1=neg{i} pos1=anypos stemmed1=y priorpolarity=negative")
    assert len(lines) == 7620
    clues = _words(tmp_path / "clues.tff", *lines)
    lex = load_word_sets({"positive": clues}, "mpqa")
    assert len(lex.positive_words) == 2718
    assert len(lex.negative_words) == 4902


def test_mpqa_skips_neutral_and_repeats(tmp_path):
    clues = _words(tmp_path / "clues.tff",
                   "type=strongsubj len=1 word1=abandon pos1=verb stemmed1=y priorpolarity=negative",
                   "type=strongsubj len=1 word1=abandon pos1=noun stemmed1=n priorpolarity=negative",
                   "type=weaksubj len=1 word1=absolute pos1=adj stemmed1=n priorpolarity=neutral",
                   "type=weaksubj len=1 word1=able pos1=adj stemmed1=n priorpolarity=positive")
    lex = load_word_sets({"mpqa": clues}, "mpqa")
    assert lex.positive_words == {"able"} and lex.negative_words == {"abandon"}


def test_mpqa_rejects_non_clue_lines(tmp_path):
    with pytest.raises(LexiconError, match=r"x:1: not an MPQA clue line"):
        load_word_sets({"positive": _words(tmp_path / "x", "just a word")}, "mpqa")


def test_missing_required_role(tmp_path):
    with pytest.raises(LexiconError, match="negative"):
        load_word_sets({"positive": _words(tmp_path / "p.txt", "good")})


def test_bundled_defaults():
    lex = GeneralLexicon.from_sets(["good"], ["bad"])
    assert {"no", "not", "never", "hardly", "n't"} <= lex.negation_words
    assert lex.and_words == {"and"}
    assert {"but", "however", "yet"} <= lex.but_words
    assert 25 <= len(lex.classifier_pos_seeds) <= 40 and 25 <= len(lex.classifier_neg_seeds) <= 40
    assert not lex.classifier_pos_seeds & lex.classifier_neg_seeds
    assert bundled_words("and") == ["and"]


def test_optional_file_overrides_default(tmp_path):
    lex = load_word_sets({"positive": _words(tmp_path / "p", "good"), "negative": _words(tmp_path / "n", "bad"),
                          "negation": _words(tmp_path / "neg", "nope")})
    assert lex.negation_words == {"nope"}


def test_polarity_of():
    lex = GeneralLexicon.from_sets(["excellent"], ["awful"])
    assert polarity_of("excellent", lex) == POSITIVE
    assert polarity_of("EXCELLENT", lex) == POSITIVE
    assert polarity_of("awful", lex) == NEGATIVE
    assert polarity_of("quux", lex) == UNKNOWN


_word = st.text(alphabet="abcdefgh", min_size=1, max_size=4)


@given(st.sets(_word, max_size=15), st.sets(_word, max_size=15), _word)
def test_polarity_is_never_both(pos, neg, probe):
    neg = neg - pos
    lex = GeneralLexicon.from_sets(pos, neg)
    p = polarity_of(probe, lex)
    assert p == (POSITIVE if probe in pos else NEGATIVE if probe in neg else UNKNOWN)
