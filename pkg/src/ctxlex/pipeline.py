"""Pipeline stages. Each reads the config plus earlier stages' files and writes its own."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from . import io
from .classifier import ReviewSentimentMatrix
from .config import ConfigError, PipelineConfig
from .constraints import ConstraintSet, build_conjunction_matrices, build_sentential_similarity, build_X0
from .corpus import DictionaryTagger, ReviewDoc, load_corpus, rating_stats, read_tag_dictionary, segment_corpus, \
    write_stats_report
from .evaluation import METHODS, LabeledLexicon, knockout_run, label_reviews_by_method, labelling_precision, \
    parameter_sweep, score_lexicon, write_knockout, write_labelling, write_report, write_sweep
from .extraction import build_A, build_pairs, extract_feature_candidates, filter_features, match_occurrences
from .seedlex import GeneralLexicon, load_word_sets
from .solver import solve

log = logging.getLogger(__name__)

STAGES = ("stats", "classify", "extract", "solve", "eval")


class StageInputError(RuntimeError):
    """An earlier stage's artifact is missing or inconsistent."""


@dataclass
class Loaded:
    reviews: list
    docs: list[ReviewDoc]
    lex: GeneralLexicon


def load_lexicon(cfg: PipelineConfig) -> GeneralLexicon:
    paths = cfg.word_set_paths()
    for role, p in paths.items():
        if not p.exists():
            raise ConfigError(f"word set {role}: file not found: {p}")
    if cfg.wordset_format == "plain" and not {"positive", "negative"} <= set(paths):
        raise ConfigError("config keys 'positive' and 'negative' are required")
    if cfg.wordset_format == "mpqa" and "positive" not in paths:
        raise ConfigError("config key 'positive' must name the MPQA clues file")
    return load_word_sets(paths, cfg.wordset_format)


def load_inputs(cfg: PipelineConfig) -> Loaded:
    cfg.require("corpus")
    lex = load_lexicon(cfg)
    entries = read_tag_dictionary(cfg.path("tag_dict")) if cfg.tag_dict else None
    if cfg.tag_dict:
        cfg.require("tag_dict")
    reviews = load_corpus(cfg.path("corpus"), cfg.corpus_format)
    docs = segment_corpus(reviews, DictionaryTagger(lex, entries))
    return Loaded(reviews, docs, lex)


def _out(cfg: PipelineConfig) -> Path:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def _need(path: Path, stage: str) -> Path:
    if not path.exists():
        raise StageInputError(f"{path.name} not found in {path.parent}; run the '{stage}' stage first")
    return path


# -- stages --------------------------------------------------------------------

def run_stats(cfg: PipelineConfig, data: Loaded | None = None) -> Path:
    cfg.require("corpus")
    reviews = data.reviews if data else load_corpus(cfg.path("corpus"), cfg.corpus_format)
    out = _out(cfg)
    write_stats_report(rating_stats(reviews), out / "stats.txt", out / "stats_per_user.tsv")
    return out / "stats.txt"


def run_classify(cfg: PipelineConfig, data: Loaded | None = None) -> Path:
    data = data or load_inputs(cfg)
    labels = label_reviews_by_method(data.reviews, data.docs, cfg.review_labels, data.lex)
    path = _out(cfg) / "review_labels.tsv"
    io.write_labels(path, [r.review_id for r in data.reviews], labels)
    log.info("classify: %d reviews, %d positive", len(labels), labels.count("positive"))
    return path


def run_extract(cfg: PipelineConfig, data: Loaded | None = None) -> Path:
    if not cfg.discriminators:
        raise ConfigError("config key 'discriminators' is required for extraction")
    data = data or load_inputs(cfg)
    out = _out(cfg)
    cands = extract_feature_candidates(data.docs, cfg.freq)
    feats = filter_features(cands, list(cfg.discriminators), cfg.pmi, data.docs)
    io.write_csv(out / "features.csv", ("phrase", "freq", "avg_pmi"),
                 [(c.phrase, c.freq, f"{c.avg_pmi:.9g}") for c in feats])
    pairs = build_pairs(data.docs, feats, cfg.cor, cfg.profile)
    occ = match_occurrences(data.docs, pairs, cfg.profile)
    rpm = build_A(occ, len(data.docs), len(pairs), [r.review_id for r in data.reviews])
    io.write_pairs(out / "pairs.tsv", pairs)
    io.write_occurrences(out / "occurrences.tsv", occ)
    io.write_coo(out / "A.coo", rpm.A)
    log.info("extract: %d candidates, %d features, %d pairs, %d occurrences", len(cands), len(feats), len(pairs),
             len(occ))
    return out / "pairs.tsv"


def build_constraints(cfg: PipelineConfig, data: Loaded) -> tuple[ConstraintSet, list]:
    out = cfg.out_dir
    pairs = io.read_pairs(_need(out / "pairs.tsv", "extract"))
    occ = io.read_occurrences(_need(out / "occurrences.tsv", "extract"))
    A = io.read_coo(_need(out / "A.coo", "extract"))
    labels = io.read_labels(_need(out / "review_labels.tsv", "classify"))
    ids = [r.review_id for r in data.reviews]
    missing = [i for i in ids if i not in labels]
    if missing:
        raise StageInputError(f"review_labels.tsv lacks {len(missing)} corpus reviews (e.g. {missing[0]}); rerun classify")
    Xt = ReviewSentimentMatrix.from_labels([labels[i] for i in ids], ids).rows
    X0, G = build_X0(pairs, data.lex)
    n = len(pairs)
    Wa, Wb = build_conjunction_matrices(occ, data.docs, cfg.min_conj, n)
    Ws = build_sentential_similarity(occ, data.docs, Wa, Wb)
    return ConstraintSet(A, Xt, X0, G, Wa, Wb, Ws), pairs


def dump_constraints(C: ConstraintSet, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    io.write_coo(directory / "A.coo", C.A)
    io.write_dense(directory / "Xtilde.tsv", C.Xtilde)
    io.write_dense(directory / "X0.tsv", C.X0)
    for name in ("Wa", "Wb", "Ws"):
        io.write_coo(directory / f"{name}.coo", getattr(C, name))


def load_constraints(directory: Path) -> ConstraintSet:
    """Matrices dumped by :func:`dump_constraints`; G is read off the rows of X0."""
    d = Path(directory)
    X0 = io.read_dense(_need(d / "X0.tsv", "solve"))
    return ConstraintSet(io.read_coo(_need(d / "A.coo", "solve")), io.read_dense(_need(d / "Xtilde.tsv", "solve")),
                         X0, X0.sum(axis=1), *(io.read_coo(_need(d / f"{w}.coo", "solve")) for w in ("Wa", "Wb", "Ws")))


def run_solve(cfg: PipelineConfig, data: Loaded | None = None, matrices: Path | None = None) -> Path:
    out = _out(cfg)
    if matrices is not None:
        C = load_constraints(matrices)
        pairs = io.read_pairs(_need(out / "pairs.tsv", "extract"))
        if len(pairs) != C.n:
            raise StageInputError(f"pairs.tsv has {len(pairs)} pairs but the matrices have {C.n}")
    else:
        C, pairs = build_constraints(cfg, data or load_inputs(cfg))
        dump_constraints(C, out / "constraints")
    result = solve(C, cfg.hyperparams)
    io.write_lexicon(out / "lexicon.tsv", pairs, result.scores, result.labels)
    io.write_trace(out / "trace.csv", result.objective_trace)
    log.info("solve: %d pairs, %d sweeps, converged=%s, objective %.6g", C.n, result.iterations, result.converged,
             result.objective_trace[-1])
    return out / "lexicon.tsv"


def _parse_grid(spec: str) -> dict[str, list[float]]:
    """``lambda1=1,2,4;lambda3=0,1`` -> {"lambda1": [1, 2, 4], "lambda3": [0, 1]}."""
    grid = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        if "=" not in part:
            raise ConfigError(f"sweep grid entry {part!r} must look like lambda1=1,2,4")
        k, v = part.split("=", 1)
        try:
            grid[k.strip()] = [float(x) for x in v.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"sweep grid entry {part!r}: values must be numbers") from None
    return grid


def run_eval(cfg: PipelineConfig, data: Loaded | None = None, knockout: bool = False, sweep: str | None = None,
             sweep_mode: str = "one-at-a-time") -> list[Path]:
    out = _out(cfg)
    written = []
    if cfg.gold or cfg.pool:
        cfg.require("gold", "pool")
        gold = LabeledLexicon(io.read_labeled_lexicon(cfg.path("gold")))
        pool = LabeledLexicon(io.read_labeled_lexicon(cfg.path("pool")))
        predicted = LabeledLexicon(io.read_labeled_lexicon(_need(out / "lexicon.tsv", "solve")))
        write_report(out / "eval_lexicon.csv", score_lexicon(predicted, pool, gold))
        written.append(out / "eval_lexicon.csv")
        if knockout or sweep:
            data = data or load_inputs(cfg)
            C, pairs = build_constraints(cfg, data)
            if knockout:
                write_knockout(out / "knockout.csv", knockout_run(C, cfg.hyperparams, pairs, pool, gold))
                written.append(out / "knockout.csv")
            if sweep:
                grid = _parse_grid(sweep)
                try:
                    rows = parameter_sweep(C, grid, pairs, pool, gold, cfg.hyperparams, sweep_mode)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                write_sweep(out / "sweep.csv", rows)
                written.append(out / "sweep.csv")
    elif knockout or sweep:
        raise ConfigError("knock-out and sweep runs need 'gold' and 'pool' lexicons")
    if cfg.annotations:
        cfg.require("annotations")
        data = data or load_inputs(cfg)
        ann = io.read_labels(cfg.path("annotations"))
        rows = []
        for method in METHODS:
            if method == "subaspect" and any(r.subaspect_ratings is None for r in data.reviews):
                log.info("eval: skipping subaspect labelling, corpus lacks sub-ratings")
                continue
            labels = label_reviews_by_method(data.reviews, data.docs, method, data.lex)
            pred = {r.review_id: l for r, l in zip(data.reviews, labels)}
            rows.append((method, labelling_precision(pred, ann)))
        write_labelling(out / "labelling.csv", rows)
        written.append(out / "labelling.csv")
    if not written:
        raise ConfigError("nothing to evaluate: set 'gold' and 'pool' and/or 'annotations'")
    return written


def run_pipeline(cfg: PipelineConfig) -> Path:
    data = load_inputs(cfg)
    run_stats(cfg, data)
    run_classify(cfg, data)
    run_extract(cfg, data)
    lexicon = run_solve(cfg, data)
    if cfg.gold or cfg.annotations:
        run_eval(cfg, data)
    return lexicon
