"""Correlation statistics and the analysis procedures built on them.

Covers four kinds of analysis over a scored benchmark:

* plain correlation of a metric against human judgments;
* equal-size quartile groups by lexical distance, to see how metric
  reliability decays as candidates drift from their anchor text;
* the two-case partition by whether a candidate sits lexically closer to
  the reference or to the input, with the average free-vs-based
  correlation gap per case;
* attribution pairs: candidate pairs for one input that differ strongly on
  one quality dimension while nearly matching on the other, so the human
  score difference can be credited to the varying dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np

from .core import Benchmark, ScoreVector
from .errors import (
    ConstantInputError,
    LengthMismatchError,
    MissingReferenceError,
    TooFewInstancesError,
    TooFewPairsError,
)


def _as_paired_vectors(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or len(a) != len(b):
        raise LengthMismatchError(f"paired vectors required, got lengths {a.shape} and {b.shape}")
    if len(a) < 3:
        raise LengthMismatchError("need at least 3 paired values")
    return a, b


def pearson(a, b) -> float:
    """Pearson correlation coefficient of two equal-length vectors."""
    a, b = _as_paired_vectors(a, b)
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise ConstantInputError("correlation is undefined for a constant vector")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da @ da) * (db @ db))
    return float(np.clip((da @ db) / denom, -1.0, 1.0))


def average_ranks(values) -> np.ndarray:
    """1-based ranks with ties receiving the average of their positions."""
    values = np.asarray(values, dtype=float)
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    avg = ends - (counts - 1) / 2.0
    return avg[inverse]


def spearman(a, b) -> float:
    """Spearman rank correlation: Pearson over average ranks."""
    a, b = _as_paired_vectors(a, b)
    return pearson(average_ranks(a), average_ranks(b))


@dataclass(frozen=True)
class CorrelationReport:
    metric_id: str
    pearson: float
    spearman: float
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("a correlation report needs n >= 3")
        if not (np.isfinite(self.pearson) and np.isfinite(self.spearman)):
            raise ValueError("correlation coefficients must be finite")


def correlation_report(metric_id: str, scores, human) -> CorrelationReport:
    """Both correlation coefficients of a score vector against human scores."""
    values = scores.values if isinstance(scores, ScoreVector) else scores
    a, b = _as_paired_vectors(values, human)
    return CorrelationReport(metric_id, pearson(a, b), spearman(a, b), len(a))


@dataclass(frozen=True)
class DistanceGroup:
    group_index: int
    instance_indices: tuple[int, ...]
    dist_key: str
    min_dist: float
    max_dist: float


def quartile_groups(
    benchmark: Benchmark, dist_scores: ScoreVector, dist_key: str = "to_reference"
) -> list[DistanceGroup]:
    """Split instances into four equal-size groups by ascending distance.

    Sizes differ by at most one (the remainder goes to the lowest-index
    groups); ties keep their original instance order, so the split is
    deterministic.
    """
    n = len(benchmark)
    if len(dist_scores) != n:
        raise LengthMismatchError("distance vector is not aligned with the benchmark")
    if n < 4:
        raise TooFewInstancesError("quartile grouping needs at least 4 instances")
    d = dist_scores.values
    order = sorted(range(n), key=lambda i: (d[i], i))
    base, remainder = divmod(n, 4)
    sizes = [base + 1 if g < remainder else base for g in range(4)]
    groups = []
    start = 0
    for g, size in enumerate(sizes, start=1):
        members = tuple(order[start : start + size])
        start += size
        dists = [d[i] for i in members]
        groups.append(DistanceGroup(g, members, dist_key, min(dists), max(dists)))
    return groups


@dataclass(frozen=True)
class CasePartition:
    """Indices of candidates lexically closer to the reference (case 1)
    versus closer to (or equidistant from) the input (case 2)."""

    case1_indices: tuple[int, ...]
    case2_indices: tuple[int, ...]
    proportions: tuple[float, float]


def case_partition(
    benchmark: Benchmark, dist_cr: ScoreVector, dist_xc: ScoreVector
) -> CasePartition:
    """Partition by Dist(R,C) < Dist(X,C); ties fall into case 2."""
    n = len(benchmark)
    if len(dist_cr) != n or len(dist_xc) != n:
        raise LengthMismatchError("distance vectors are not aligned with the benchmark")
    if not benchmark.has_references():
        raise MissingReferenceError("case partition requires a reference on every instance")
    case1 = tuple(i for i in range(n) if dist_cr[i] < dist_xc[i])
    case2 = tuple(i for i in range(n) if dist_cr[i] >= dist_xc[i])
    return CasePartition(case1, case2, (len(case1) / n, len(case2) / n))


def delta_free_vs_based(reports_free, reports_based, coefficient: str = "pearson") -> float:
    """Average correlation difference (free minus based) across metric
    families; positive means the reference-free variants align better.

    Accepts CorrelationReports or bare correlation values.
    """
    if len(reports_free) != len(reports_based) or len(reports_free) == 0:
        raise LengthMismatchError("free/based report lists must be aligned and non-empty")
    if coefficient not in ("pearson", "spearman"):
        raise ValueError(f"unknown coefficient: {coefficient!r}")

    def value(r) -> float:
        if isinstance(r, Real):
            return float(r)
        return float(getattr(r, coefficient))

    diffs = [value(f) - value(b) for f, b in zip(reports_free, reports_based)]
    return float(np.mean(diffs))


@dataclass(frozen=True)
class AttributionPair:
    """Two candidates j and k of the same input, with their cached distance
    and similarity values and the within-pair differences."""

    x_index: int
    j: int
    k: int
    dist_xj: float
    dist_xk: float
    sim_xj: float
    sim_xk: float
    delta_s: float
    delta_h: float
    delta_d: float


def _enumerate_pairs(benchmark: Benchmark, dist_scores: ScoreVector, sim_scores: ScoreVector, keep):
    n = len(benchmark)
    if len(dist_scores) != n or len(sim_scores) != n:
        raise LengthMismatchError("score vectors are not aligned with the benchmark")
    dist = dist_scores.values
    sims = sim_scores.values
    human = benchmark.human_scores()
    pairs = []
    for x_index, indices in enumerate(benchmark.groups.values()):
        for a in range(len(indices)):
            j = indices[a]
            for b in range(a + 1, len(indices)):
                k = indices[b]
                delta_d = float(dist[j] - dist[k])
                delta_s = float(sims[j] - sims[k])
                if keep(abs(delta_d), abs(delta_s)):
                    pairs.append(
                        AttributionPair(
                            x_index=x_index,
                            j=j,
                            k=k,
                            dist_xj=float(dist[j]),
                            dist_xk=float(dist[k]),
                            sim_xj=float(sims[j]),
                            sim_xk=float(sims[k]),
                            delta_s=delta_s,
                            delta_h=float(human[j] - human[k]),
                            delta_d=delta_d,
                        )
                    )
    return pairs


def build_s_sim(
    benchmark: Benchmark,
    dist_scores: ScoreVector,
    sim_scores: ScoreVector,
    eta1: float = 0.05,
    eta2: float = 0.15,
) -> list[AttributionPair]:
    """Candidate pairs nearly tied on distance (|dD| <= eta1) but well
    separated on similarity (|dS| >= eta2): the similarity-promoted subset.

    Pairs are emitted in deterministic order: by input group, then j < k.
    With eta2 = 0 the similarity constraint is vacuous, which yields the
    distance-matched baseline subset.
    """
    if eta1 < 0 or eta2 < 0:
        raise ValueError("eta thresholds must be >= 0")
    return _enumerate_pairs(
        benchmark, dist_scores, sim_scores, lambda dd, dss: dd <= eta1 and dss >= eta2
    )


def build_s_div(
    benchmark: Benchmark,
    dist_scores: ScoreVector,
    sim_scores: ScoreVector,
    eta1: float = 0.05,
    eta2: float = 0.10,
) -> list[AttributionPair]:
    """Candidate pairs nearly tied on similarity (|dS| <= eta1) but well
    separated on distance (|dD| >= eta2): the divergence-promoted subset."""
    if eta1 < 0 or eta2 < 0:
        raise ValueError("eta thresholds must be >= 0")
    return _enumerate_pairs(
        benchmark, dist_scores, sim_scores, lambda dd, dss: dss <= eta1 and dd >= eta2
    )


def split_s_div(
    pairs: list[AttributionPair], threshold: float = 0.35
) -> tuple[list[AttributionPair], list[AttributionPair]]:
    """Split pairs by the smaller of the two distances: pairs whose nearer
    candidate is still within ``threshold`` of the input versus the rest."""
    div1 = [p for p in pairs if min(p.dist_xj, p.dist_xk) <= threshold]
    div2 = [p for p in pairs if min(p.dist_xj, p.dist_xk) > threshold]
    return div1, div2


def pair_delta_correlation(
    pairs: list[AttributionPair],
    quantity: str = "delta_s",
    metric_scores: ScoreVector | None = None,
) -> CorrelationReport:
    """Correlate a within-pair difference against the human-score difference.

    ``quantity`` picks the difference: similarity (delta_s), distance
    (delta_d), or an arbitrary metric (delta_m, computed from
    ``metric_scores`` as value[j] - value[k]).
    """
    if len(pairs) < 3:
        raise TooFewPairsError(f"need at least 3 pairs, got {len(pairs)}")
    if quantity == "delta_s":
        values = [p.delta_s for p in pairs]
        metric_id = "delta_s"
    elif quantity == "delta_d":
        values = [p.delta_d for p in pairs]
        metric_id = "delta_d"
    elif quantity == "delta_m":
        if metric_scores is None:
            raise ValueError("delta_m requires metric_scores")
        values = [float(metric_scores[p.j] - metric_scores[p.k]) for p in pairs]
        metric_id = f"delta_m[{metric_scores.metric_id}]"
    else:
        raise ValueError(f"unknown quantity: {quantity!r}")
    delta_h = [p.delta_h for p in pairs]
    return CorrelationReport(metric_id, pearson(values, delta_h), spearman(values, delta_h), len(pairs))
