import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxlex.corpus import DictionaryTagger, load_corpus, segment_corpus
from ctxlex.evaluation import label_reviews_by_method
from ctxlex.io import read_labeled_lexicon, read_labels
from ctxlex.seedlex import GeneralLexicon
from ctxlex.synthgen import (CONFIG_NAME, KNOWN, SEED, UNKNOWN, SyntheticSpec, generate, generate_bundle,
                             spec_from_dict)

_CLAUSE = re.compile(r"(feat_\d+) is (not )?(op_\d+)")


def _lexicon(b):
    return GeneralLexicon.from_sets(b.lexicon["positive"], b.lexicon["negative"],
                                    seeds_positive=b.lexicon["seeds_positive"],
                                    seeds_negative=b.lexicon["seeds_negative"])


def _docs(b):
    lex = _lexicon(b)
    return segment_corpus(b.reviews, DictionaryTagger(lex, b.tags)), lex


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0.0, 0.3, 1.0]))
def test_clean_spec_rating_matches_classifier(seed, mix):
    b = generate_bundle(SyntheticSpec(n_pairs=24, n_reviews=80, seed=seed, noise_rate=0.0, negation_rate=0.0,
                                      mix_rate=mix))
    docs, lex = _docs(b)
    assert label_reviews_by_method(b.reviews, docs, "overall", lex) == \
        label_reviews_by_method(b.reviews, docs, "classify", lex)


def test_same_seed_is_byte_identical(tmp_path):
    spec = SyntheticSpec(n_pairs=20, n_reviews=60, seed=11)
    generate(spec, tmp_path / "a")
    generate(spec, tmp_path / "b")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    generate(SyntheticSpec(n_pairs=20, n_reviews=60, seed=12), tmp_path / "c")
    assert (tmp_path / "a" / "corpus.jsonl").read_bytes() != (tmp_path / "c" / "corpus.jsonl").read_bytes()


def test_bundle_files_parse(tmp_path):
    spec = SyntheticSpec(n_pairs=30, n_reviews=100, seed=2)
    corpus, gold, pool = generate(spec, tmp_path)
    reviews = load_corpus(corpus)
    assert len(reviews) == 100 and all(r.subaspect_ratings for r in reviews)
    g, p = read_labeled_lexicon(gold), read_labeled_lexicon(pool)
    assert len(g) == 30
    assert all(p[k] == v for k, v in g.items()) and len(p) == 30 + 30 // 5
    assert set(read_labels(tmp_path / "annotations.tsv")) == {r.review_id for r in reviews}
    assert (tmp_path / CONFIG_NAME).exists()


def test_tiers_and_lexicon_consistency():
    b = generate_bundle(SyntheticSpec(n_pairs=50, n_reviews=10, seed=7))
    pos, neg = set(b.lexicon["positive"]), set(b.lexicon["negative"])
    seeds = set(b.lexicon["seeds_positive"]) | set(b.lexicon["seeds_negative"])
    assert set(b.lexicon["seeds_positive"]) <= pos and set(b.lexicon["seeds_negative"]) <= neg
    for q in b.pairs:
        if q.tier == SEED:
            assert q.opinion in seeds
        if q.tier == KNOWN:
            assert q.opinion in pos | neg and q.opinion not in seeds
        if q.tier == UNKNOWN:
            assert q.opinion not in pos | neg
        if q.tier != UNKNOWN:
            assert (q.opinion in pos) == (q.polarity > 0)
    assert {q.tier for q in b.pairs} == {SEED, KNOWN, UNKNOWN}
    assert len({(q.feature, q.opinion) for q in b.pairs}) == 50


def test_conjunctions_follow_planted_polarity():
    b = generate_bundle(SyntheticSpec(n_pairs=40, n_reviews=300, seed=5, and_rate=0.5, but_rate=0.5))
    planted = {(q.feature, q.opinion): q.polarity for q in b.pairs}
    seen = {"and": 0, "but": 0}
    for r in b.reviews:
        for sentence in r.text.split(". "):
            parts = re.split(r", (and|but) ", sentence)
            clauses = parts[0::2]
            for k, conj in enumerate(parts[1::2]):
                a = _CLAUSE.search(clauses[k]).groups()
                c = _CLAUSE.search(clauses[k + 1]).groups()
                assert not a[1] and not c[1]
                same = planted[(a[0], a[2])] == planted[(c[0], c[2])]
                assert same == (conj == "and")
                seen[conj] += 1
    assert seen["and"] > 0 and seen["but"] > 0


def test_first_clause_and_majority_express_latent_polarity():
    b = generate_bundle(SyntheticSpec(n_pairs=40, n_reviews=300, seed=8, mix_rate=0.6, negation_rate=0.3))
    planted = {(q.feature, q.opinion): q.polarity for q in b.pairs}
    for r in b.reviews:
        p = 1 if b.latent[r.review_id] == "positive" else -1
        expressed = [planted[(f, o)] * (-1 if neg else 1) for f, neg, o in _CLAUSE.findall(r.text)]
        assert expressed[0] == p
        assert sum(e == p for e in expressed) > len(expressed) / 2


def test_rating_noise_rate():
    b = generate_bundle(SyntheticSpec(n_pairs=30, n_reviews=2000, seed=1, noise_rate=0.1))
    flipped = np.mean([(r.overall_rating >= 4) != (b.latent[r.review_id] == "positive") for r in b.reviews])
    assert 0.07 < flipped < 0.13
    b = generate_bundle(SyntheticSpec(n_pairs=30, n_reviews=300, seed=1, noise_rate=0.0))
    assert all((r.overall_rating >= 4) == (b.latent[r.review_id] == "positive") for r in b.reviews)


@pytest.mark.parametrize("bad", [dict(noise_rate=1.5), dict(and_rate=-0.1), dict(n_pairs=3), dict(n_reviews=0),
                                 dict(min_clauses=4, max_clauses=2), dict(n_features=0)])
def test_invalid_spec(bad):
    with pytest.raises(ValueError):
        generate_bundle(SyntheticSpec(**bad))


def test_spec_from_dict():
    s = spec_from_dict({"n_pairs": "20", "noise_rate": "0.25", "seed": 4})
    assert (s.n_pairs, s.noise_rate, s.seed) == (20, 0.25, 4)
    with pytest.raises(ValueError, match="unknown"):
        spec_from_dict({"colour": 1})
    with pytest.raises(ValueError, match="integer"):
        spec_from_dict({"n_pairs": "2.5"})
