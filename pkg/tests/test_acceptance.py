"""Exit criteria. Each test prints one PASS/FAIL line, repeated in the terminal summary."""

import time

import numpy as np
import pytest

from ctxlex import io, pipeline
from ctxlex.config import load_config
from ctxlex.corpus import Review, rating_stats
from ctxlex.evaluation import LabeledLexicon, score_lexicon
from ctxlex.instances import random_constraint_set
from ctxlex.solver import HyperParams, gradient, objective, solve, update_step
from ctxlex.synthgen import CONFIG_NAME, SyntheticSpec, generate
from oracles import central_differences, grid_minimum, pairwise_terms

pytestmark = pytest.mark.acceptance


def _random_lambdas(rng):
    return rng.uniform(0.0, 4.0, 4) + 1e-9  # (0, 4]


def _instance(seed, n_max, m_max, n_min=1):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    return rng, random_constraint_set(rng, n, m)


def test_gradient_matches_finite_differences(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        rng, C = _instance(2000 + seed, 50, 100)
        h = HyperParams(*_random_lambdas(rng))
        X = rng.uniform(0.0, 2.0, (C.n, 2))
        g = gradient(X, C, h)
        fd = central_differences(lambda Y: objective(Y, C, h)[0], X, step=1e-5)
        worst = max(worst, float(np.max(np.abs(fd - g) / np.maximum(np.abs(g), 1e-8))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-5 and elapsed < 10
    acceptance("gradient oracle", ok, f"max relative error {worst:.2e} (< 1e-5), {elapsed:.2f} s (< 10 s)")
    assert ok


@pytest.fixture(scope="module")
def monotonicity_set():
    out = []
    for seed in range(50):
        rng, C = _instance(1000 + seed, 200, 500, n_min=2)
        out.append((C, HyperParams(*_random_lambdas(rng))))
    return out


def test_objective_is_monotone(acceptance, monotonicity_set):
    t0 = time.perf_counter()
    worst = -np.inf
    for C, h in monotonicity_set:
        f = solve(C, h).objective_trace
        worst = max(worst, float(np.max((f[1:] - f[:-1]) / np.abs(f[:-1]))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 30
    acceptance("objective monotonicity", ok,
               f"largest relative step increase {worst:.2e} (<= 1e-9) over 50 instances, {elapsed:.2f} s (< 30 s)")
    assert ok


def test_trace_form_equals_pairwise_sums(acceptance):
    worst = 0.0
    for seed in range(20):
        rng, C = _instance(3000 + seed, 30, 60)
        X = rng.uniform(0.0, 2.0, (C.n, 2))
        _, terms = objective(X, C, HyperParams())
        ref = pairwise_terms(X, C)
        worst = max(worst, abs(terms[2] - ref[2]), abs(terms[3] - ref[3]))
    ok = worst <= 1e-10
    acceptance("trace-form equivalence", ok, f"max |R3, R4 trace - pairwise| = {worst:.2e} (<= 1e-10)")
    assert ok


def test_solver_reaches_grid_minimum(acceptance):
    t0 = time.perf_counter()
    gaps = []
    for seed in range(5):
        rng = np.random.default_rng(4000 + seed)
        n = 1 if seed == 0 else 2
        C = random_constraint_set(rng, n, int(rng.integers(2, 6)), fixed_fraction=0.5)
        h = HyperParams(*_random_lambdas(rng), delta=1e-16, max_iters=20000)
        final = solve(C, h).objective_trace[-1]
        gaps.append(abs(final - grid_minimum(C, h.lambdas)))
    elapsed = time.perf_counter() - t0
    ok = max(gaps) <= 1e-3 and elapsed < 60
    acceptance("brute-force minimizer", ok,
               f"max |solver - grid| = {max(gaps):.2e} (<= 1e-3) on n in {{1,2}}, {elapsed:.2f} s (< 60 s)")
    assert ok


def test_kkt_complementarity_at_convergence(acceptance, monotonicity_set):
    worst = 0.0
    for C, h in monotonicity_set:
        tight = h.replace(delta=1e-16, max_iters=5000)
        r = solve(C, tight)
        g = gradient(r.X, C, tight)
        worst = max(worst, float(np.max(np.abs(g) * r.X)) / (1 + r.objective_trace[-1]))
    ok = worst < 1e-3
    acceptance("KKT stationarity", ok, f"max |grad|*X / (1 + objective) = {worst:.2e} (< 1e-3)")
    assert ok


def _recovery(lexicon_labels, gold):
    return sum(lexicon_labels.get(k) == v for k, v in gold.items())


def test_synthetic_end_to_end_recovery(acceptance, tmp_path):
    t0 = time.perf_counter()
    generate(SyntheticSpec(n_pairs=50, n_reviews=500, noise_rate=0.1, seed=7), tmp_path)
    cfg = load_config(tmp_path / CONFIG_NAME)
    pipeline.run_pipeline(cfg)
    gold = io.read_labeled_lexicon(tmp_path / "gold.tsv")
    full = _recovery(io.read_labeled_lexicon(cfg.out_dir / "lexicon.tsv"), gold)

    data = pipeline.load_inputs(cfg)
    C, pairs = pipeline.build_constraints(cfg, data)
    knocked = {}
    for name in ("lambda1", "lambda2", "lambda3", "lambda4"):
        labels = solve(C, cfg.hyperparams.replace(**{name: 0.0})).labels
        knocked[name] = _recovery(LabeledLexicon.from_pairs(pairs, labels).entries, gold)
    elapsed = time.perf_counter() - t0
    rate = full / len(gold)
    ok = rate >= 0.9 and knocked["lambda1"] < full and knocked["lambda2"] < full and elapsed < 60
    detail = ", ".join(f"{k}=0: {v}/{len(gold)}" for k, v in knocked.items())
    acceptance("synthetic recovery", ok,
               f"all: {full}/{len(gold)} ({rate:.0%}, >= 90%); {detail}; {elapsed:.2f} s (< 60 s)")
    assert ok


def test_common_lambda_scaling(acceptance):
    exact = labels_same = 0
    for seed in range(10):
        rng, C = _instance(5000 + seed, 100, 200)
        lam = rng.integers(1, 33, 4) / 8  # dyadic, so times 10 is exact
        h, h10 = HyperParams(*lam), HyperParams(*(lam * 10))
        X = rng.uniform(0.0, 2.0, (C.n, 2))
        exact += bool(np.array_equal(update_step(X, C, h), update_step(X, C, h10)))
        labels_same += solve(C, h).labels == solve(C, h10).labels
    ok = exact == 10 and labels_same == 10
    acceptance("scale invariance", ok, f"update_step identical on {exact}/10, labels identical on {labels_same}/10")
    assert ok


def test_metric_fixtures(acceptance):
    keys = [(f"f{i}", "o") for i in range(10)]
    predicted = LabeledLexicon({k: "positive" for k in keys})
    pool = LabeledLexicon({**{k: "positive" for k in keys[:7]}, **{k: "negative" for k in keys[7:]}})
    gold = LabeledLexicon({**{k: "positive" for k in keys[:6]}, keys[6]: "negative", ("g", "o"): "positive"})
    r = score_lexicon(predicted, pool, gold)
    f_ref = 2 * 0.7 * 0.75 / 1.45
    score_err = max(abs(r.precision - 0.7), abs(r.recall - 0.75), abs(r.f_measure - f_ref))

    rng = np.random.default_rng(6000)
    reviews = [Review(f"r{i}", f"u{int(rng.integers(40))}", "i", int(rng.integers(1, 6)), "",
                      tuple(int(v) for v in rng.integers(1, 6, 3))) for i in range(1000)]
    s = rating_stats(reviews)
    stats_err = 0.0
    for c, ch in enumerate(("overall", "flavour", "environment", "service")):
        vals = [r.overall_rating if c == 0 else r.subaspect_ratings[c - 1] for r in reviews]
        mu = sum(vals) / len(vals)
        sd = (sum((v - mu) ** 2 for v in vals) / len(vals)) ** 0.5
        frac = [vals.count(k) / len(vals) for k in range(1, 6)]
        stats_err = max(stats_err, abs(s.mu[ch] - mu), abs(s.sigma[ch] - sd), abs(s.cv[ch] - sd / mu),
                        *(abs(a - b) for a, b in zip(s.per_star_fraction[ch], frac)))
    ok = score_err <= 1e-12 and stats_err <= 1e-12
    acceptance("metric fixtures", ok,
               f"p={r.precision:.4f} r={r.recall:.4f} F={r.f_measure:.4f} (err {score_err:.1e}); "
               f"rating stats err {stats_err:.1e} (<= 1e-12)")
    assert ok


def test_pipeline_is_deterministic(acceptance, tmp_path):
    generate(SyntheticSpec(n_pairs=50, n_reviews=500, noise_rate=0.1, seed=7), tmp_path / "bundle")
    outputs = []
    for run in ("first", "second"):
        cfg = load_config(tmp_path / "bundle" / CONFIG_NAME, {"output": str(tmp_path / run)})
        pipeline.run_pipeline(cfg)
        outputs.append({name: (cfg.out_dir / name).read_bytes() for name in ("lexicon.tsv", "trace.csv")})
    same = [name for name in outputs[0] if outputs[0][name] == outputs[1][name]]
    ok = len(same) == 2
    acceptance("determinism", ok, f"byte-identical across two runs: {', '.join(same) or 'none'}")
    assert ok
