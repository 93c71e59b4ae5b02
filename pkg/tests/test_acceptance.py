"""Acceptance suite: one test per release criterion, each printing a
pass line. Everything runs offline against the deterministic fallback
backend; nothing here touches the network or the embedding service.
"""

import itertools
import math
import time

import numpy as np
import pytest

from _synth import make_benchmark, make_direction_benchmark
from paraeval import (
    ParaScoreConfig,
    ScoreVector,
    SimilarityBackendDescriptor,
    bert_ibleu,
    build_s_div,
    build_s_sim,
    case_partition,
    delta_free_vs_based,
    ds,
    edit_distance,
    extend_benchmark,
    mix_term,
    ned,
    parascore_free,
    pearson,
    quartile_groups,
    sim,
    spearman,
    split_dev_test,
    SplitConfig,
    tokenize,
    tune_omega,
)
from paraeval.core import TokenSequence
from paraeval.errors import BothEmptyError
from paraeval.parascore import sim_ds_vectors, with_omega


def passed(line: str) -> None:
    print(f"[PASS] {line}")


# -- criterion: edit distance and NED agree exhaustively with a recursive oracle


def _edit_oracle(a, b):
    memo = {}

    def rec(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        key = (i, j)
        if key in memo:
            return memo[key]
        if a[i - 1] == b[j - 1]:
            value = rec(i - 1, j - 1)
        else:
            value = 1 + min(rec(i - 1, j), rec(i, j - 1), rec(i - 1, j - 1))
        memo[key] = value
        return value

    return rec(len(a), len(b))


def test_edit_distance_and_ned_exhaustive_oracle():
    start = time.monotonic()
    alphabet = ("a", "b", "c")
    sequences = []
    for length in range(7):
        sequences.extend(itertools.product(alphabet, repeat=length))
    token_seqs = [TokenSequence(s) for s in sequences]
    checked = 0
    for ia, a in enumerate(sequences):
        seq_a = token_seqs[ia]
        for ib in range(ia, len(sequences)):
            b = sequences[ib]
            seq_b = token_seqs[ib]
            expected = _edit_oracle(a, b)
            assert edit_distance(seq_a, seq_b) == expected
            longest = max(len(a), len(b))
            if longest == 0:
                with pytest.raises(BothEmptyError):
                    ned(seq_a, seq_b)
            else:
                assert ned(seq_a, seq_b) == expected / longest
            if checked % 16 == 0:  # symmetry spot-check on a sixteenth of pairs
                assert edit_distance(seq_b, seq_a) == expected
            checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"exhaustive oracle sweep took {elapsed:.1f}s"
    passed(
        f"edit-distance/NED oracle equivalence on {checked} sequence pairs "
        f"(length <= 6, 3 symbols) in {elapsed:.1f}s"
    )


# -- criterion: the sectional divergence transform


def test_sectional_divergence_function():
    for gamma in (0.1, 0.35, 0.9):
        assert ds(0.0, gamma) == -1.0
        assert ds(gamma, gamma) == gamma
        # gap between the linear branch evaluated at the knee and the plateau
        linear_at_knee = gamma * (gamma + 1.0) / gamma - 1.0
        assert abs(linear_at_knee - ds(gamma, gamma)) < 1e-12
        # approaching the knee, the gap shrinks at the branch's slope
        for eps in (1e-6, 1e-9, 1e-12):
            gap = abs(ds(gamma - eps, gamma) - ds(gamma, gamma))
            assert gap <= eps * (gamma + 1.0) / gamma + 1e-12
    grid = np.linspace(0.0, 1.0, 1000)
    for gamma in (0.1, 0.35, 0.9):
        values = [ds(float(d), gamma) for d in grid]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert -1.0 <= min(values) and max(values) == gamma
    passed("divergence transform: exact endpoints, continuity at the knee, monotone on 1000 points")


# -- criterion: harmonic-mean decomposition identity


def test_sim_plus_mix_identity():
    rng = np.random.default_rng(123)
    betas = (1.0, 4.0, 5.0, 10.0)
    worst = 0.0
    for _ in range(1000):
        s = float(rng.uniform(0.01, 1.0))
        d = float(rng.uniform(0.01, 1.0))
        for beta in betas:
            closed_form = (beta + 1.0) / (beta / s + 1.0 / d)
            err = abs(s + mix_term(s, d, beta) - closed_form)
            worst = max(worst, err)
            assert err < 1e-9
    passed(f"sim + mix equals the harmonic-mean closed form on 1000 draws x 4 betas (max err {worst:.2e})")


# -- criterion: correlation oracles


def _pearson_oracle(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)


def _ranks_oracle(values):
    return [
        sum(1 for u in values if u < v) + (sum(1 for u in values if u == v) + 1) / 2
        for v in values
    ]


def test_correlation_definitional_oracle():
    rng = np.random.default_rng(2024)
    count = 0
    while count < 100:
        n = int(rng.integers(3, 101))
        a = rng.normal(size=n)
        b = 0.4 * a + rng.normal(size=n)
        if count % 2 == 0:  # force heavy ties half the time
            a = np.round(a * 2) / 2
            b = np.round(b * 2) / 2
        if np.all(a == a[0]) or np.all(b == b[0]):
            continue
        ra, rb = _ranks_oracle(list(a)), _ranks_oracle(list(b))
        if len(set(ra)) == 1 or len(set(rb)) == 1:
            continue
        assert pearson(a, b) == pytest.approx(_pearson_oracle(list(a), list(b)), abs=1e-10)
        assert spearman(a, b) == pytest.approx(_pearson_oracle(ra, rb), abs=1e-10)
        count += 1
    passed("pearson/spearman match a definitional oracle on 100 vector pairs incl. tied ranks")


# -- criterion: attribution subsets equal brute-force enumeration


def _scores_for(bench):
    backend = SimilarityBackendDescriptor(sentence_sim_mode="mean_pool_cosine")
    dist, sims = [], []
    for inst in bench.instances:
        x = bench.tokenized(inst.input_text)
        c = bench.tokenized(inst.candidate_text)
        dist.append(ned(x, c))
        sims.append(sim(backend, x, c))
    return ScoreVector("ned", np.array(dist)), ScoreVector("sim", np.array(sims))


def test_attribution_subsets_match_brute_force():
    bench = make_benchmark(n_inputs=50, n_cands=6, seed=31)
    dist, sims = _scores_for(bench)

    def brute(keep):
        out = set()
        for j in range(len(bench)):
            for k in range(j + 1, len(bench)):
                if bench.instances[j].input_text != bench.instances[k].input_text:
                    continue
                if keep(abs(dist[j] - dist[k]), abs(sims[j] - sims[k])):
                    out.add((j, k))
        return out

    s_sim = build_s_sim(bench, dist, sims, eta1=0.05, eta2=0.15)
    s_div = build_s_div(bench, dist, sims, eta1=0.05, eta2=0.10)
    assert {(p.j, p.k) for p in s_sim} == brute(lambda dd, dss: dd <= 0.05 and dss >= 0.15)
    assert {(p.j, p.k) for p in s_div} == brute(lambda dd, dss: dss <= 0.05 and dd >= 0.10)
    assert s_sim and s_div
    for p in s_sim:
        assert abs(dist[p.j] - dist[p.k]) <= 0.05
        assert abs(sims[p.j] - sims[p.k]) >= 0.15
    for p in s_div:
        assert abs(sims[p.j] - sims[p.k]) <= 0.05
        assert abs(dist[p.j] - dist[p.k]) >= 0.10
    passed(
        f"attribution subsets match brute force on a 50-input benchmark "
        f"(|s_sim|={len(s_sim)}, |s_div|={len(s_div)}), all inequalities re-verified"
    )


# -- criterion: partition contracts


def test_partition_contracts():
    bench = make_benchmark(n_inputs=23, n_cands=5, seed=41)
    dist, _ = _scores_for(bench)
    groups = quartile_groups(bench, dist)
    sizes = [len(g.instance_indices) for g in groups]
    assert max(sizes) - min(sizes) <= 1
    for a, b in zip(groups, groups[1:]):
        assert a.max_dist <= b.min_dist

    dist_cr = []
    for inst in bench.instances:
        r = bench.tokenized(inst.reference_text)
        c = bench.tokenized(inst.candidate_text)
        dist_cr.append(ned(r, c))
    partition = case_partition(bench, ScoreVector("cr", np.array(dist_cr)), dist)
    combined = sorted(partition.case1_indices + partition.case2_indices)
    assert combined == list(range(len(bench)))
    assert set(partition.case1_indices).isdisjoint(partition.case2_indices)
    assert sum(partition.proportions) == pytest.approx(1.0)

    extended = extend_benchmark(bench, fraction=0.2, seed=3)
    added = extended.instances[len(bench):]
    assert len(added) == round(0.2 * bench.num_groups)
    assert all(i.candidate_text == i.input_text and i.human_score == 0.0 for i in added)
    passed(
        f"partition contracts: quartiles sized {sizes}, case split exhaustive+disjoint, "
        f"extension added {len(added)} == round(0.2*{bench.num_groups}) zero-scored copies"
    )


# -- criterion: copy penalty of the reference-free score


def test_copy_penalty_theorem():
    rng = np.random.default_rng(55)
    config = ParaScoreConfig(omega=0.13, gamma=0.35)
    vocab = [f"tok{i}" for i in range(300)]
    for trial in range(20):
        length = int(rng.integers(5, 13))
        x_tokens = [vocab[i] for i in rng.choice(len(vocab), size=length, replace=False)]
        x = TokenSequence(tuple(x_tokens))
        # same token multiset rearranged until far enough from the original,
        # so similarity is unchanged while the distance saturates
        c_tokens = list(reversed(x_tokens))
        c = TokenSequence(tuple(c_tokens))
        assert ned(x, c) >= config.gamma
        copied = parascore_free(x, x, config)
        reworded = parascore_free(x, c, config)
        assert reworded.sim_component == copied.sim_component
        gap = reworded.total - copied.total
        assert gap == pytest.approx(config.omega * (1 + config.gamma), abs=1e-12)
        assert copied.total < reworded.total
    passed("copy penalty: rewording beats copying by exactly omega*(1+gamma) on 20 random inputs")


# -- criterion: direction-level reproduction of the headline comparison


def test_direction_level_reproduction():
    start = time.monotonic()
    seed = 7
    bench = make_direction_benchmark(n_inputs=500, n_cands=8, seed=seed, noise=0.05)
    extended = extend_benchmark(bench, fraction=0.20, seed=seed + 101)
    assert len(extended) == len(bench) + round(0.2 * bench.num_groups)

    # distinct derived seeds: extension and splitting must sample the group
    # list independently, or the dev split would be biased toward (or away
    # from) the groups that received a zero-scored copy
    dev, test = split_dev_test(extended, SplitConfig(dev_fraction=0.10, seed=seed + 202))
    config = ParaScoreConfig()
    omega_star, _ = tune_omega(dev, config, objective="pearson", mode="free")

    tuned = with_omega(config, omega_star)
    sims, dss = sim_ds_vectors(test, tuned, "free")
    human = test.human_scores()
    r_parascore = pearson(sims + omega_star * dss, human)
    r_bare_sim = pearson(sims, human)
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"direction-level run took {elapsed:.1f}s"
    assert r_parascore >= r_bare_sim + 0.05, (
        f"tuned reference-free composite (r={r_parascore:.3f}) must beat "
        f"bare similarity (r={r_bare_sim:.3f}) by at least 0.05"
    )
    passed(
        f"direction-level reproduction: tuned omega={omega_star:.2f}, "
        f"pearson {r_parascore:.3f} vs bare sim {r_bare_sim:.3f} "
        f"(gap {r_parascore - r_bare_sim:+.3f} >= 0.05) in {elapsed:.1f}s"
    )


def test_direction_level_is_deterministic():
    bench = make_direction_benchmark(n_inputs=40, n_cands=4, seed=7)
    again = make_direction_benchmark(n_inputs=40, n_cands=4, seed=7)
    assert [i.candidate_text for i in bench.instances] == [
        i.candidate_text for i in again.instances
    ]
    assert [i.human_score for i in bench.instances] == [i.human_score for i in again.instances]
    passed("direction-level benchmark generation is deterministic under a fixed seed")


# -- criterion: free-vs-based delta arithmetic on transcribed values


def test_delta_free_vs_based_transcription():
    free = [0.207, 0.267, 0.160, 0.191]
    based = [0.357, 0.367, 0.256, 0.284]
    delta = delta_free_vs_based(free, based)
    assert delta == pytest.approx(-0.110, abs=0.0005)
    passed(f"averaged free-based correlation difference {delta:.4f} within 0.0005 of -0.110")


# -- criterion: the suite itself is offline and self-contained


def test_runs_offline_with_fallback_backend_only():
    # every similarity above came from the deterministic fallback or a file
    # in a temp dir; this spot-check confirms the fallback needs no model
    backend = SimilarityBackendDescriptor()
    value = sim(backend, tokenize("a small sanity check"), tokenize("a small sanity check"))
    assert value == pytest.approx(1.0, abs=1e-6)
    composite = bert_ibleu(tokenize("a b c d e"), tokenize("e d c b a"), 4.0, backend)
    assert 0.0 <= composite <= 1.0
    passed("primary suite runs offline: fallback backend only, no service required")
