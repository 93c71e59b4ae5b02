"""Surface-overlap metrics: BLEU, SelfBLEU, iBLEU, ROUGE, and edit distance.

Everything here is sentence-level and operates on :class:`TokenSequence`
pairs; corpus-level aggregation is deliberately out of scope because every
analysis in this toolkit is per-candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import TokenSequence, ngrams
from .errors import BothEmptyError, EmptySequenceError

SMOOTHING_MODES = ("none", "add_k")


@dataclass(frozen=True)
class PrecisionRecallF1:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "PrecisionRecallF1":
        if precision + recall == 0:
            f1 = 0.0
        else:
            f1 = 2.0 * precision * recall / (precision + recall)
        return cls(precision, recall, f1)


@dataclass(frozen=True)
class BleuConfig:
    """Sentence-BLEU configuration.

    ``add_k`` smoothing replaces each modified precision m/c with
    (m + k) / (c + k), so token-disjoint pairs still score above zero.
    The unsmoothed mode reproduces the classical hard-zero behaviour.
    """

    max_n: int = 4
    smoothing: str = "add_k"
    k: float = 1.0

    def __post_init__(self):
        if not 1 <= self.max_n <= 8:
            raise ValueError("max_n must be in 1..8")
        if self.smoothing not in SMOOTHING_MODES:
            raise ValueError(f"unknown smoothing mode: {self.smoothing!r}")
        if self.smoothing == "add_k" and not self.k > 0:
            raise ValueError("add_k smoothing requires k > 0")


UNSMOOTHED = BleuConfig(smoothing="none")


def _clipped_matches(candidate: TokenSequence, target: TokenSequence, n: int) -> tuple[int, int]:
    """(clipped match count, candidate n-gram count) for order n."""
    cand_counts = ngrams(candidate, n)
    if not cand_counts:
        return 0, 0
    targ_counts = ngrams(target, n)
    matches = sum(min(c, targ_counts.get(g, 0)) for g, c in cand_counts.items())
    return matches, sum(cand_counts.values())


def bleu(candidate: TokenSequence, target: TokenSequence, config: BleuConfig = BleuConfig()) -> float:
    """Sentence BLEU: geometric mean of modified n-gram precisions times
    the brevity penalty.

    Raises EmptySequenceError when either side has no tokens. Orders with
    no candidate n-grams contribute 0 unsmoothed (hence BLEU 0) and k/k = 1
    under add_k smoothing, so identical short sentences still score 1.
    """
    if len(candidate) == 0 or len(target) == 0:
        raise EmptySequenceError("bleu requires non-empty candidate and target")
    log_sum = 0.0
    for n in range(1, config.max_n + 1):
        matches, total = _clipped_matches(candidate, target, n)
        if config.smoothing == "add_k":
            precision = (matches + config.k) / (total + config.k)
        else:
            precision = matches / total if total else 0.0
        if precision == 0.0:
            return 0.0
        log_sum += math.log(precision)
    geo_mean = math.exp(log_sum / config.max_n)
    c, t = len(candidate), len(target)
    brevity = 1.0 if c >= t else math.exp(1.0 - t / c)
    return brevity * geo_mean


def self_bleu(candidate: TokenSequence, input_seq: TokenSequence, config: BleuConfig = BleuConfig()) -> float:
    """BLEU of the candidate against the input; measures copying."""
    return bleu(candidate, input_seq, config)


def ibleu(
    candidate: TokenSequence,
    reference: TokenSequence,
    input_seq: TokenSequence,
    alpha: float = 0.3,
    config: BleuConfig = BleuConfig(),
) -> float:
    """BLEU against the reference minus alpha times SelfBLEU; may be negative."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    return bleu(candidate, reference, config) - alpha * self_bleu(candidate, input_seq, config)


ROUGE_VARIANTS = ("R1", "R2", "RL")


def rouge(candidate: TokenSequence, target: TokenSequence, variant: str = "R1") -> PrecisionRecallF1:
    """ROUGE-1/2 via clipped n-gram overlap, ROUGE-L via the LCS length.

    Precision normalizes by the candidate side, recall by the target side.
    """
    if variant not in ROUGE_VARIANTS:
        raise ValueError(f"unknown rouge variant: {variant!r}")
    if len(candidate) == 0 or len(target) == 0:
        raise EmptySequenceError("rouge requires non-empty candidate and target")
    if variant == "RL":
        overlap = _lcs_length(candidate.tokens, target.tokens)
        cand_total, targ_total = len(candidate), len(target)
    else:
        n = 1 if variant == "R1" else 2
        cand_counts = ngrams(candidate, n)
        targ_counts = ngrams(target, n)
        overlap = sum(min(c, targ_counts.get(g, 0)) for g, c in cand_counts.items())
        cand_total = sum(cand_counts.values())
        targ_total = sum(targ_counts.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / targ_total if targ_total else 0.0
    return PrecisionRecallF1.from_pr(precision, recall)


def _lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for tok_a in a:
        cur = [0]
        for j, tok_b in enumerate(b, 1):
            if tok_a == tok_b:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def edit_distance(a: TokenSequence, b: TokenSequence) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    xs, ys = a.tokens, b.tokens
    if len(xs) < len(ys):
        xs, ys = ys, xs
    if not ys:
        return len(xs)
    prev = list(range(len(ys) + 1))
    for i, tok_x in enumerate(xs, 1):
        cur = [i]
        append = cur.append
        for j, tok_y in enumerate(ys, 1):
            best = prev[j - 1] if tok_x == tok_y else prev[j - 1] + 1
            d = prev[j] + 1
            if d < best:
                best = d
            d = cur[j - 1] + 1
            if d < best:
                best = d
            append(best)
        prev = cur
    return prev[-1]


def ned(a: TokenSequence, b: TokenSequence) -> float:
    """Normalized edit distance: Levenshtein distance over the longer length.

    0 iff the sequences are equal, 1 when no alignment shares a token;
    symmetric. Undefined (BothEmptyError) when both sequences are empty.
    """
    longest = max(len(a), len(b))
    if longest == 0:
        raise BothEmptyError("normalized edit distance is undefined for two empty sequences")
    return edit_distance(a, b) / longest
