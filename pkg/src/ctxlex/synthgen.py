"""Synthetic review corpora with planted feature-opinion polarities.

Vocabulary is ``feat_i`` / ``op_j`` so the dictionary tagger labels it
exactly. Opinion words come in three tiers:

* seed words: in the general lexicon and in the classifier's seed lists;
* known words: in the general lexicon only;
* unknown words: in neither.

Pairs built on seed or known words inherit the word's fixed polarity. Pairs
on unknown words get a random planted polarity, so one opinion word can be
positive with one feature and negative with another.

Each review has a latent polarity p. Its first clause uses a seed pair
expressing p. Later clauses may express -p (``mix_rate``) but always stay a
strict minority, and seed pairs expressing -p are only used while seed
clauses for p keep a lead of two, so the seed classifier and the majority
both recover p. Star ratings follow p, except that a ``noise_rate`` share of
reviews gets a rating from the other side.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .corpus import Review, write_corpus
from .io import write_labeled_lexicon, write_labels
from .seedlex import NEGATIVE, POSITIVE, write_word_file

CONFIG_NAME = "ctxlex.cfg"


@dataclass(frozen=True)
class SyntheticSpec:
    n_pairs: int = 50
    n_reviews: int = 500
    seed: int = 0
    negation_rate: float = 0.1
    and_rate: float = 0.2
    but_rate: float = 0.2
    noise_rate: float = 0.1
    fixed_fraction: float = 0.4
    seed_fraction: float = 0.35
    mix_rate: float = 0.3
    positive_share: float = 0.6
    rare_fraction: float = 0.2
    rare_weight: float = 0.15
    min_clauses: int = 2
    max_clauses: int = 5
    n_features: int | None = None
    noise_pairs: int | None = None

    def validate(self) -> None:
        for name in ("negation_rate", "and_rate", "but_rate", "noise_rate", "fixed_fraction", "seed_fraction",
                     "mix_rate", "positive_share", "rare_fraction", "rare_weight"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.n_pairs < 4:
            raise ValueError(f"n_pairs must be >= 4, got {self.n_pairs}")
        if self.n_reviews < 1:
            raise ValueError(f"n_reviews must be >= 1, got {self.n_reviews}")
        if not 1 <= self.min_clauses <= self.max_clauses:
            raise ValueError(f"need 1 <= min_clauses <= max_clauses, got {self.min_clauses}, {self.max_clauses}")
        if self.n_features is not None and self.n_features < 1:
            raise ValueError(f"n_features must be >= 1, got {self.n_features}")


SEED, KNOWN, UNKNOWN = "seed", "known", "unknown"


@dataclass(frozen=True)
class PlantedPair:
    feature: str
    opinion: str
    polarity: int      # +1 positive, -1 negative
    tier: str

    @property
    def label(self) -> str:
        return POSITIVE if self.polarity > 0 else NEGATIVE


@dataclass
class SyntheticBundle:
    reviews: list[Review]
    pairs: list[PlantedPair]
    gold: dict[tuple[str, str], str]
    pool: dict[tuple[str, str], str]
    latent: dict[str, str]
    lexicon: dict[str, list[str]]     # positive, negative, seeds_positive, seeds_negative
    tags: dict[str, str]


def _plant_pairs(spec: SyntheticSpec, rng: np.random.Generator) -> tuple[list[PlantedPair], dict[str, int], set]:
    n_fixed = min(spec.n_pairs - 2, max(2, round(spec.fixed_fraction * spec.n_pairs)))
    n_feat = spec.n_features or max(3, math.ceil(spec.n_pairs / 4))
    n_fixed_ops = max(2, math.ceil(n_fixed / 3))
    n_seed_ops = min(n_fixed_ops, max(2, round(spec.seed_fraction * n_fixed_ops)))
    n_free_ops = max(2, math.ceil((spec.n_pairs - n_fixed) / 3))
    ops = [f"op_{j}" for j in range(n_fixed_ops + n_free_ops)]
    order = [ops[k] for k in rng.permutation(len(ops))]
    fixed_ops, free_ops = sorted(order[:n_fixed_ops]), sorted(order[n_fixed_ops:])
    # alternating polarities; the first two fixed words become seeds of each sign
    shuffled = [fixed_ops[k] for k in rng.permutation(n_fixed_ops)]
    op_pol = {o: 1 if i % 2 == 0 else -1 for i, o in enumerate(shuffled)}
    seed_ops = set(shuffled[:n_seed_ops])
    features = [f"feat_{i}" for i in range(n_feat)]
    if n_feat * n_fixed_ops < n_fixed or n_feat * n_free_ops < spec.n_pairs - n_fixed:
        raise ValueError("too few features for the requested number of pairs")

    pairs, used = [], set()

    def add(op_choices, tier_of):
        while True:
            f = features[int(rng.integers(n_feat))]
            o = op_choices[int(rng.integers(len(op_choices)))]
            if (f, o) not in used:
                break
        used.add((f, o))
        pol = op_pol[o] if o in op_pol else (1 if rng.random() < 0.5 else -1)
        pairs.append(PlantedPair(f, o, pol, tier_of(o)))

    fixed_tier = lambda o: SEED if o in seed_ops else KNOWN
    by_sign = {pol: [o for o in shuffled if op_pol[o] == pol] for pol in (1, -1)}
    seeds_by_sign = {pol: [o for o in by_sign[pol] if o in seed_ops] for pol in (1, -1)}
    # one seed pair of each polarity guarantees every review can open on a seed;
    # after that fixed pairs alternate in sign, and so do seed pairs among them
    add(seeds_by_sign[1][:1], fixed_tier)
    add(seeds_by_sign[-1][:1], fixed_tier)
    for k in range(n_fixed - 2):
        add(by_sign[1 if k % 2 == 0 else -1], fixed_tier)
    for _ in range(spec.n_pairs - n_fixed):
        add(free_ops, lambda o: UNKNOWN)
    return pairs, op_pol, seed_ops


def _clause(p: PlantedPair, negate: bool, first: bool) -> str:
    return f"{'The' if first else 'the'} {p.feature} is {'not ' if negate else ''}{p.opinion}"


def generate_bundle(spec: SyntheticSpec) -> SyntheticBundle:
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    pairs, op_pol, seed_ops = _plant_pairs(spec, rng)
    seeds = {pol: [q for q in pairs if q.tier == SEED and q.polarity == pol] for pol in (1, -1)}
    others = {pol: [q for q in pairs if q.tier != SEED and q.polarity == pol] for pol in (1, -1)}
    n_users = max(1, spec.n_reviews // 5)

    # a long tail of non-seed pairs is drawn at a reduced rate
    non_seed = [i for i, q in enumerate(pairs) if q.tier != SEED]
    rare = {pairs[i] for i in rng.permutation(non_seed)[:round(spec.rare_fraction * len(non_seed))]}

    def pick(choices):
        w = np.array([spec.rare_weight if q in rare else 1.0 for q in choices])
        if w.sum() == 0:
            w[:] = 1.0
        return choices[int(rng.choice(len(choices), p=w / w.sum()))]

    reviews, latent = [], {}
    for r in range(spec.n_reviews):
        p = 1 if rng.random() < spec.positive_share else -1
        k = int(rng.integers(spec.min_clauses, spec.max_clauses + 1))
        cap = (k - 1) // 2                 # opposite clauses stay a strict minority
        clauses = []                       # (pair, negated)
        n_opp, lead = 0, 0                 # lead: seed clauses for p minus those for -p
        for c in range(k):
            expressed = p
            if c > 0 and n_opp < cap and rng.random() < spec.mix_rate:
                expressed, n_opp = -p, n_opp + 1
            neg = bool(rng.random() < spec.negation_rate)
            planted = -expressed if neg else expressed
            if c == 0:
                choices = seeds[planted]
            elif expressed != p and lead < 2:
                choices = others[planted]
            else:
                choices = seeds[planted] + others[planted]
            if not choices:
                # no admissible pair: fall back to a plain clause for p
                expressed, neg, planted = p, False, p
                choices = seeds[p] + others[p]
            pair = pick(choices)
            if pair.tier == SEED:
                lead += 1 if expressed == p else -1
            clauses.append((pair, neg))
        parts = [_clause(*clauses[0], True)]
        for (pa, na), (pb, nb) in zip(clauses, clauses[1:]):
            joined = None
            if not na and not nb:
                if pa.polarity == pb.polarity and rng.random() < spec.and_rate:
                    joined = ", and "
                elif pa.polarity != pb.polarity and rng.random() < spec.but_rate:
                    joined = ", but "
            parts.append(joined + _clause(pb, nb, False) if joined else ". " + _clause(pb, nb, True))
        side = p if rng.random() >= spec.noise_rate else -p
        rating = int(rng.integers(4, 6)) if side > 0 else int(rng.integers(1, 4))
        sub = tuple(int(np.clip(rating + rng.integers(-1, 2), 1, 5)) for _ in range(3))
        rid = f"r{r:05d}"
        reviews.append(Review(rid, f"u{int(rng.integers(n_users)):04d}", f"i{int(rng.integers(10)):02d}",
                              rating, "".join(parts) + ".", sub))
        latent[rid] = POSITIVE if p > 0 else NEGATIVE

    gold = {(q.feature, q.opinion): q.label for q in pairs}
    pool = dict(gold)
    n_noise = spec.noise_pairs if spec.noise_pairs is not None else max(1, spec.n_pairs // 5)
    feats = sorted({q.feature for q in pairs})
    ops = sorted({q.opinion for q in pairs})
    free = [(f, o) for f in feats for o in ops if (f, o) not in gold]
    for k in sorted(rng.permutation(len(free))[:n_noise]):
        pool[free[k]] = POSITIVE if rng.random() < 0.5 else NEGATIVE
    lexicon = {
        "positive": sorted(o for o, s in op_pol.items() if s > 0),
        "negative": sorted(o for o, s in op_pol.items() if s < 0),
        "seeds_positive": sorted(o for o in seed_ops if op_pol[o] > 0),
        "seeds_negative": sorted(o for o in seed_ops if op_pol[o] < 0),
    }
    tags = {f: "NOUN" for f in feats} | {o: "ADJ" for o in ops}
    return SyntheticBundle(reviews, pairs, gold, pool, latent, lexicon, tags)


def _config_text(spec: SyntheticSpec) -> str:
    lines = [
        "# synthetic bundle: " + ", ".join(f"{f.name}={getattr(spec, f.name)}" for f in fields(spec)),
        "corpus = corpus.jsonl",
        "positive = positive.txt",
        "negative = negative.txt",
        "seeds_positive = seeds_positive.txt",
        "seeds_negative = seeds_negative.txt",
        "tag_dict = tags.tsv",
        "freq = 2",
        "pmi = 0.0001",
        "cor = 0.01",
        "discriminators = is",
        "min_conj = 1",
        "review_labels = classify",
        "gold = gold.tsv",
        "pool = pool.tsv",
        "annotations = annotations.tsv",
        "output = out",
    ]
    return "\n".join(lines) + "\n"


def write_bundle(b: SyntheticBundle, spec: SyntheticSpec, outdir: str | Path) -> tuple[Path, Path, Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(out / "corpus.jsonl", b.reviews)
    write_labeled_lexicon(out / "gold.tsv", b.gold)
    write_labeled_lexicon(out / "pool.tsv", b.pool)
    for role, words in b.lexicon.items():
        write_word_file(out / f"{role}.txt", words)
    with open(out / "tags.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for w, t in sorted(b.tags.items()):
            fh.write(f"{w}\t{t}\n")
    ids = sorted(b.latent)
    write_labels(out / "annotations.tsv", ids, [b.latent[i] for i in ids])
    (out / CONFIG_NAME).write_text(_config_text(spec), encoding="utf-8")
    return out / "corpus.jsonl", out / "gold.tsv", out / "pool.tsv"


def generate(spec: SyntheticSpec, outdir: str | Path) -> tuple[Path, Path, Path]:
    """Write a bundle into ``outdir`` and return the (corpus, gold, pool) paths.

    The bundle also holds general-lexicon and seed word lists, a tag
    dictionary, the latent review polarities as ``annotations.tsv`` and a
    ready-to-run ``ctxlex.cfg``.
    """
    return write_bundle(generate_bundle(spec), spec, outdir)


def spec_from_dict(values: dict) -> SyntheticSpec:
    base = asdict(SyntheticSpec())
    unknown = set(values) - set(base)
    if unknown:
        raise ValueError(f"unknown synthetic spec fields: {sorted(unknown)}")
    for k, v in values.items():
        if v is None:
            base[k] = None
        elif k in ("n_pairs", "n_reviews", "seed", "min_clauses", "max_clauses", "n_features", "noise_pairs"):
            f = float(v)
            if f != int(f):
                raise ValueError(f"{k} must be an integer, got {v!r}")
            base[k] = int(f)
        else:
            base[k] = float(v)
    return SyntheticSpec(**base)
