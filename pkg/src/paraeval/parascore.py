"""The ParaScore metric family and related composites.

A ParaScore value adds two ingredients: the best semantic similarity the
candidate reaches against the input or the reference, and a plateaued
linear transform of the candidate's edit distance to the input that rewards
rewording up to a saturation point and penalizes verbatim copying.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import Benchmark, TokenSequence, tokenize
from .errors import (
    DegenerateDenominatorError,
    DegenerateHumanScoresError,
    DomainError,
    EmptyGridError,
    MissingReferenceError,
)
from .lexical import BleuConfig, ned, self_bleu
from .semantic import IdfTable, SimilarityBackendDescriptor, sim

DEFAULT_OMEGA = 0.05
DEFAULT_GAMMA = 0.35


def default_omega_grid() -> tuple[float, ...]:
    """The standard tuning grid: 0.00 to 0.50 in steps of 0.01."""
    return tuple(np.round(np.arange(0.0, 0.5001, 0.01), 10))


@dataclass(frozen=True)
class ParaScoreConfig:
    """Hyper-parameters plus the similarity backend and distance scheme.

    ``omega`` weighs the divergence term; 0.05 is an untuned default, use
    :func:`tune_omega` to fit it on a dev split. ``gamma`` is the
    divergence saturation point. ``dist_scheme`` controls how texts are
    tokenized for the edit-distance side.
    """

    omega: float = DEFAULT_OMEGA
    gamma: float = DEFAULT_GAMMA
    sim_backend: SimilarityBackendDescriptor = field(default_factory=SimilarityBackendDescriptor)
    dist_scheme: str = "whitespace"

    def __post_init__(self):
        if not np.isfinite(self.omega) or self.omega < 0:
            raise ValueError("omega must be finite and >= 0")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")


@dataclass(frozen=True)
class CompositeScore:
    """A ParaScore value with its two components kept apart for reporting."""

    total: float
    sim_component: float
    ds_component: float
    which_sim: str
    omega: float

    def __post_init__(self):
        if abs(self.total - (self.sim_component + self.omega * self.ds_component)) > 1e-12:
            raise ValueError("total must equal sim_component + omega * ds_component")


def ds(d: float, gamma: float = DEFAULT_GAMMA) -> float:
    """Sectional divergence transform of a distance d in [0, 1].

    Linear from -1 at d = 0 up to gamma at d = gamma, then flat at gamma:
    more rewording helps until it saturates. Continuous at the knee and
    non-decreasing everywhere.
    """
    if not gamma > 0:
        raise DomainError("gamma must be > 0")
    if not 0.0 <= d <= 1.0:
        raise DomainError(f"distance must be in [0, 1], got {d!r}")
    if d >= gamma:
        # both branches equal gamma at the knee; taking the flat one here
        # keeps the knee value exact in floating point
        return gamma
    return d * (gamma + 1.0) / gamma - 1.0


def _dist_tokens(seq: TokenSequence, scheme: str) -> TokenSequence:
    if seq.scheme == scheme:
        return seq
    return tokenize(seq.text(), scheme)


def input_distance(x: TokenSequence, c: TokenSequence, scheme: str) -> float:
    """Normalized edit distance between input and candidate under ``scheme``."""
    return ned(_dist_tokens(x, scheme), _dist_tokens(c, scheme))


def parascore(
    x: TokenSequence,
    r: TokenSequence | None,
    c: TokenSequence,
    config: ParaScoreConfig = ParaScoreConfig(),
    idf: IdfTable | None = None,
) -> CompositeScore:
    """Reference-based score: max(Sim(X,C), Sim(R,C)) + omega * DS(X,C).

    The divergence side always measures the candidate against the input,
    never the reference. ``which_sim`` records which similarity won the
    max (ties go to the input).
    """
    if r is None:
        raise MissingReferenceError("parascore requires a reference; use parascore_free without one")
    sim_input = sim(config.sim_backend, x, c, idf)
    sim_ref = sim(config.sim_backend, r, c, idf)
    if sim_input >= sim_ref:
        sim_component, which = sim_input, "input"
    else:
        sim_component, which = sim_ref, "reference"
    ds_component = ds(input_distance(x, c, config.dist_scheme), config.gamma)
    total = sim_component + config.omega * ds_component
    return CompositeScore(total, sim_component, ds_component, which, config.omega)


def parascore_free(
    x: TokenSequence,
    c: TokenSequence,
    config: ParaScoreConfig = ParaScoreConfig(),
    idf: IdfTable | None = None,
) -> CompositeScore:
    """Reference-free score: Sim(X,C) + omega * DS(X,C)."""
    sim_component = sim(config.sim_backend, x, c, idf)
    ds_component = ds(input_distance(x, c, config.dist_scheme), config.gamma)
    total = sim_component + config.omega * ds_component
    return CompositeScore(total, sim_component, ds_component, "input", config.omega)


def bert_ibleu(
    x: TokenSequence,
    c: TokenSequence,
    beta: float = 4.0,
    backend: SimilarityBackendDescriptor = SimilarityBackendDescriptor(),
    bleu_config: BleuConfig = BleuConfig(),
    idf: IdfTable | None = None,
) -> float:
    """Weighted harmonic mean of Sim(X,C) and Div = 1 - SelfBLEU.

    Returns 0 whenever either component is 0 (the harmonic-mean limit).
    """
    if not beta > 0:
        raise ValueError("beta must be > 0")
    sim_value = sim(backend, x, c, idf)
    div = 1.0 - self_bleu(c, x, bleu_config)
    if sim_value <= 0.0 or div <= 0.0:
        return 0.0
    return (beta + 1.0) / (beta / sim_value + 1.0 / div)


def mix_term(sim_value: float, div: float, beta: float) -> float:
    """The residual after extracting Sim from the harmonic-mean composite.

    sim + mix_term(sim, div, beta) equals the harmonic mean of sim and div
    weighted by beta, wherever both are defined.
    """
    denom = beta * div + sim_value
    if denom == 0.0:
        raise DegenerateDenominatorError("beta * div + sim must be non-zero")
    return (sim_value * div - sim_value**2) / denom


def sim_ds_vectors(
    benchmark: Benchmark,
    config: ParaScoreConfig,
    mode: str = "free",
    idf: IdfTable | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-instance (sim, ds) component vectors; the score for any omega is
    then sims + omega * dss, which makes grid tuning cheap."""
    if mode not in ("free", "based"):
        raise ValueError(f"unknown mode: {mode!r}")
    sims, dss = [], []
    for inst in benchmark.instances:
        x = benchmark.tokenized(inst.input_text)
        c = benchmark.tokenized(inst.candidate_text)
        if mode == "based":
            if inst.reference_text is None:
                raise MissingReferenceError("based mode requires references on every instance")
            r = benchmark.tokenized(inst.reference_text)
            composite = parascore(x, r, c, config, idf)
        else:
            composite = parascore_free(x, c, config, idf)
        sims.append(composite.sim_component)
        dss.append(composite.ds_component)
    return np.array(sims), np.array(dss)


def tune_omega(
    dev: Benchmark,
    config_template: ParaScoreConfig = ParaScoreConfig(),
    grid: tuple[float, ...] | None = None,
    objective: str = "pearson",
    mode: str = "free",
    idf: IdfTable | None = None,
) -> tuple[float, float]:
    """Pick the grid point whose scores correlate best with human judgments
    on the dev benchmark; ties break toward the smaller omega.

    Grid points whose score vector is constant (correlation undefined) are
    skipped. Returns (omega, objective value).
    """
    from .meta import pearson, spearman

    if grid is None:
        grid = default_omega_grid()
    if len(grid) == 0:
        raise EmptyGridError("omega grid is empty")
    if objective not in ("pearson", "spearman"):
        raise ValueError(f"unknown objective: {objective!r}")
    human = dev.human_scores()
    if len(human) and np.all(human == human[0]):
        raise DegenerateHumanScoresError("human scores are constant on the dev set")
    corr = pearson if objective == "pearson" else spearman
    sims, dss = sim_ds_vectors(dev, config_template, mode, idf)
    best_omega: float | None = None
    best_value = -np.inf
    for omega in sorted(grid):
        if omega < 0 or not np.isfinite(omega):
            raise DomainError(f"grid omega must be finite and >= 0, got {omega!r}")
        scores = sims + omega * dss
        if np.all(scores == scores[0]):
            continue
        value = corr(scores, human)
        if value > best_value:
            best_omega, best_value = omega, value
    if best_omega is None:
        # Every grid point produced a constant score vector.
        best_omega = float(sorted(grid)[0])
        best_value = float("nan")
    return float(best_omega), float(best_value)


def with_omega(config: ParaScoreConfig, omega: float) -> ParaScoreConfig:
    """A copy of ``config`` with a different omega."""
    return replace(config, omega=omega)
