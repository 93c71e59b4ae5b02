import numpy as np
import pytest

from paraeval import (
    Benchmark,
    EvalInstance,
    ParaScoreConfig,
    SimilarityBackendDescriptor,
    UNSMOOTHED,
    bert_ibleu,
    ds,
    mix_term,
    ned,
    parascore,
    parascore_free,
    self_bleu,
    sim,
    tokenize,
    tune_omega,
)
from paraeval.errors import (
    DegenerateDenominatorError,
    DegenerateHumanScoresError,
    DomainError,
    EmptyGridError,
    MissingReferenceError,
)

FALLBACK = SimilarityBackendDescriptor()


def harmonic(sim_value, div, beta):
    return (beta + 1.0) / (beta / sim_value + 1.0 / div)


# -- the sectional divergence transform ---------------------------------------


def test_ds_boundary_values():
    assert ds(0.0, 0.35) == -1.0
    assert ds(0.35, 0.35) == pytest.approx(0.35, abs=1e-15)
    assert ds(0.7, 0.35) == 0.35
    assert ds(1.0, 0.35) == 0.35


def test_ds_linear_branch_value():
    assert ds(0.175, 0.35) == pytest.approx(0.175 * (1.35 / 0.35) - 1, abs=1e-15)
    assert ds(0.175, 0.35) == pytest.approx(-0.325, abs=1e-12)


def test_ds_continuity_at_knee():
    for gamma in (0.1, 0.35, 0.9):
        below = ds(gamma - 1e-13, gamma)
        assert abs(below - ds(gamma, gamma)) < 1e-11
        assert ds(gamma, gamma) == pytest.approx(gamma, abs=1e-15)


def test_ds_monotone_and_bounded():
    gamma = 0.35
    grid = np.linspace(0.0, 1.0, 1000)
    values = [ds(float(d), gamma) for d in grid]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert min(values) == -1.0
    assert max(values) == pytest.approx(gamma)


def test_ds_domain_errors():
    with pytest.raises(DomainError):
        ds(-0.01, 0.35)
    with pytest.raises(DomainError):
        ds(1.01, 0.35)
    with pytest.raises(DomainError):
        ds(0.5, 0.0)


# -- parascore over a controllable backend ------------------------------------
#
# With orthogonal per-token vectors, greedy F1 reduces to exact token-overlap
# F1, so similarity values are rational and checkable by hand.


@pytest.fixture()
def basis_backend(tmp_path):
    tokens = list("abcdefghijkl")
    lines = [str(len(tokens))]
    for i, token in enumerate(tokens):
        vec = ["1.0" if j == i else "0.0" for j in range(len(tokens))]
        lines.append(token + " " + " ".join(vec))
    path = tmp_path / "basis.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return SimilarityBackendDescriptor(provider="embedding_file", endpoint_or_path=str(path))


def test_parascore_max_picks_larger_sim(basis_backend):
    config = ParaScoreConfig(omega=0.05, gamma=0.35, sim_backend=basis_backend)
    x = tokenize("a b c d e")
    c = tokenize("a b c d f")   # overlap 4/5 with x -> sim 0.8
    r = tokenize("a b f g h")   # overlap 3/5 with c -> sim 0.6
    composite = parascore(x, r, c, config)
    assert composite.sim_component == pytest.approx(0.8, abs=1e-9)
    assert composite.which_sim == "input"
    d = ned(x, c)
    assert d == pytest.approx(0.2)
    expected = 0.8 + 0.05 * ds(0.2, 0.35)
    assert composite.total == pytest.approx(expected, abs=1e-9)


def test_parascore_reference_can_win(basis_backend):
    config = ParaScoreConfig(omega=0.05, sim_backend=basis_backend)
    x = tokenize("a b g h i")   # overlap 2/5 with c -> sim 0.4
    c = tokenize("a b c d e")
    r = tokenize("a b c d f")   # overlap 4/5 with c -> sim 0.8
    composite = parascore(x, r, c, config)
    assert composite.which_sim == "reference"
    assert composite.sim_component == pytest.approx(0.8, abs=1e-9)
    # the divergence side still measures candidate against the input
    assert composite.ds_component == ds(ned(x, c), config.gamma)


def test_parascore_requires_reference():
    config = ParaScoreConfig()
    x = tokenize("a b c")
    with pytest.raises(MissingReferenceError):
        parascore(x, None, x, config)


def test_parascore_free_copy_penalty():
    config = ParaScoreConfig(omega=0.07)
    x = tokenize("one two three four five six")
    composite = parascore_free(x, x, config)
    assert composite.ds_component == -1.0
    assert composite.sim_component == pytest.approx(1.0, abs=1e-6)
    assert composite.total == pytest.approx(composite.sim_component - 0.07, abs=1e-12)


def test_parascore_free_plateau_gap_is_omega_times_one_plus_gamma():
    config = ParaScoreConfig(omega=0.11, gamma=0.35)
    x = tokenize("t1 t2 t3 t4 t5 t6 t7")
    shuffled = tokenize("t7 t6 t5 t4 t3 t2 t1")
    assert ned(x, shuffled) >= config.gamma
    copied = parascore_free(x, x, config)
    reworded = parascore_free(x, shuffled, config)
    # same token multiset, so the similarity side is identical
    assert reworded.sim_component == copied.sim_component
    gap = reworded.total - copied.total
    assert gap == pytest.approx(config.omega * (1 + config.gamma), abs=1e-12)


def test_parascore_free_omega_zero_is_bare_sim():
    config = ParaScoreConfig(omega=0.0)
    x = tokenize("alpha beta gamma delta")
    c = tokenize("alpha beta epsilon")
    composite = parascore_free(x, c, config)
    assert composite.total == sim(FALLBACK, x, c)
    assert composite.ds_component != 0.0  # still reported


def test_parascore_sim_dominates_free(basis_backend):
    config = ParaScoreConfig(sim_backend=basis_backend)
    x = tokenize("a b c d e")
    r = tokenize("a b c f g")
    for cand in ("a b h i j", "a b c d f", "f g h i j"):
        c = tokenize(cand)
        based = parascore(x, r, c, config)
        free = parascore_free(x, c, config)
        assert based.sim_component >= free.sim_component
        assert based.ds_component == free.ds_component


def test_composite_score_invariant_enforced():
    from paraeval import CompositeScore

    with pytest.raises(ValueError):
        CompositeScore(total=1.0, sim_component=0.5, ds_component=0.5, which_sim="input", omega=0.1)


# -- bert-ibleu and its decomposition ------------------------------------------


def test_bert_ibleu_perfect_components():
    # a reversed sequence keeps greedy similarity at 1 while zeroing
    # unsmoothed SelfBLEU, so both components are perfect
    x = tokenize("a b c d e")
    c = tokenize("e d c b a")
    assert self_bleu(c, x, UNSMOOTHED) == 0.0
    assert bert_ibleu(x, c, 4.0, FALLBACK, UNSMOOTHED) == pytest.approx(1.0, abs=1e-6)


def test_bert_ibleu_copy_scores_zero():
    x = tokenize("a b c d e")
    assert bert_ibleu(x, x, 4.0, FALLBACK, UNSMOOTHED) == 0.0


def test_bert_ibleu_matches_closed_form():
    x = tokenize("the cat sat on the mat")
    c = tokenize("a cat sat upon the mat")
    for beta in (1.0, 4.0, 10.0):
        s = sim(FALLBACK, x, c)
        div = 1.0 - self_bleu(c, x)
        assert bert_ibleu(x, c, beta, FALLBACK) == pytest.approx(harmonic(s, div, beta), abs=1e-12)


def test_bert_ibleu_beta_must_be_positive():
    x = tokenize("a b")
    with pytest.raises(ValueError):
        bert_ibleu(x, x, 0.0)


def test_mix_term_hand_value():
    assert mix_term(0.8, 0.5, 4.0) == pytest.approx((0.4 - 0.64) / 2.8, abs=1e-15)
    assert mix_term(0.8, 0.5, 4.0) == pytest.approx(-0.085714285714, abs=1e-9)


def test_mix_term_vanishes_when_sim_equals_div():
    assert mix_term(0.3, 0.3, 4.0) == 0.0
    assert mix_term(0.9, 0.9, 1.5) == 0.0


def test_mix_term_degenerate_denominator():
    with pytest.raises(DegenerateDenominatorError):
        mix_term(0.0, 0.0, 4.0)


def test_sim_plus_mix_equals_harmonic_mean():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        s = rng.uniform(0.01, 1.0)
        d = rng.uniform(0.01, 1.0)
        for beta in (1.0, 4.0, 5.0, 10.0):
            assert s + mix_term(s, d, beta) == pytest.approx(harmonic(s, d, beta), abs=1e-9)


# -- omega tuning ---------------------------------------------------------------


def _benchmark_with_scores(score_fn, n_inputs=12, n_cands=4, seed=3):
    """Build a benchmark whose human score is score_fn(sim, ds) per instance."""
    rng = np.random.default_rng(seed)
    config = ParaScoreConfig()
    vocab = [f"v{i}" for i in range(60)]
    instances = []
    for gi in range(n_inputs):
        x_tokens = [vocab[i] for i in rng.choice(len(vocab), size=8, replace=False)]
        x_text = " ".join(x_tokens)
        x = tokenize(x_text)
        seen = {x_text}
        for _ in range(n_cands):
            c_tokens = list(x_tokens)
            for _ in range(int(rng.integers(1, 6))):
                c_tokens[int(rng.integers(0, len(c_tokens)))] = vocab[int(rng.integers(0, len(vocab)))]
            c_text = " ".join(c_tokens)
            if c_text in seen:
                continue
            seen.add(c_text)
            c = tokenize(c_text)
            s = sim(config.sim_backend, x, c)
            d = ds(ned(x, c), config.gamma)
            h = float(np.clip(score_fn(s, d), 0.0, 1.0))
            instances.append(EvalInstance(x_text, c_text, h))
    return Benchmark(tuple(instances), name="tuning")


def test_tune_omega_prefers_zero_when_h_is_sim():
    dev = _benchmark_with_scores(lambda s, d: s)
    omega, value = tune_omega(dev, ParaScoreConfig(), grid=tuple(np.arange(0, 0.51, 0.05)))
    assert omega == 0.0
    assert value == pytest.approx(1.0, abs=1e-9)


def test_tune_omega_finds_interior_optimum():
    dev = _benchmark_with_scores(lambda s, d: s + 0.1 * d)
    grid = tuple(np.round(np.arange(0, 0.51, 0.05), 10))
    omega, value = tune_omega(dev, ParaScoreConfig(), grid=grid)
    assert omega > 0.0
    # brute-force confirmation that no grid point does better
    from paraeval.meta import pearson
    from paraeval.parascore import sim_ds_vectors

    sims, dss = sim_ds_vectors(dev, ParaScoreConfig(), "free")
    human = dev.human_scores()
    best = max(grid, key=lambda w: pearson(sims + w * dss, human))
    assert omega == best
    assert value == pytest.approx(pearson(sims + best * dss, human))


def test_tune_omega_singleton_grid():
    dev = _benchmark_with_scores(lambda s, d: s)
    omega, _ = tune_omega(dev, ParaScoreConfig(), grid=(0.05,))
    assert omega == 0.05


def test_tune_omega_spearman_objective():
    dev = _benchmark_with_scores(lambda s, d: s + 0.1 * d)
    omega, value = tune_omega(dev, ParaScoreConfig(), objective="spearman")
    assert 0.0 <= omega <= 0.5
    assert -1.0 <= value <= 1.0


def test_tune_omega_empty_grid():
    dev = _benchmark_with_scores(lambda s, d: s)
    with pytest.raises(EmptyGridError):
        tune_omega(dev, ParaScoreConfig(), grid=())


def test_tune_omega_constant_human_scores():
    instances = tuple(
        EvalInstance(f"in {i} text", f"cand {i} text", 0.5) for i in range(6)
    )
    dev = Benchmark(instances)
    with pytest.raises(DegenerateHumanScoresError):
        tune_omega(dev, ParaScoreConfig())


def test_parascore_config_validation():
    with pytest.raises(ValueError):
        ParaScoreConfig(omega=-0.1)
    with pytest.raises(ValueError):
        ParaScoreConfig(gamma=0.0)
    with pytest.raises(ValueError):
        ParaScoreConfig(gamma=1.5)
