"""Domain types and tokenization shared by every metric.

Texts are compared as token sequences. Two schemes are supported:

* ``whitespace``: split on runs of Unicode whitespace (lowercased by
  default, the usual convention for n-gram overlap metrics);
* ``character``: one token per non-whitespace Unicode scalar, which makes
  edit distance and n-gram overlap meaningful for unsegmented languages.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

SCHEMES = ("whitespace", "character")

# Language tags whose benchmarks default to character tokens.
_CJK_PREFIXES = ("zh", "ja", "ko")


def default_scheme(language_tag: str) -> str:
    """Pick the tokenization scheme a language is scored under by default."""
    primary = language_tag.lower().split("-")[0].split("_")[0]
    return "character" if primary in _CJK_PREFIXES else "whitespace"


@dataclass(frozen=True)
class TokenSequence:
    """An immutable tokenized text plus the scheme that produced it."""

    tokens: tuple[str, ...]
    scheme: str = "whitespace"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown tokenization scheme: {self.scheme!r}")
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def text(self) -> str:
        """Reassemble a surface string; re-tokenizing it yields this sequence."""
        sep = " " if self.scheme == "whitespace" else ""
        return sep.join(self.tokens)


def tokenize(text: str, scheme: str = "whitespace", *, lowercase: bool | None = None) -> TokenSequence:
    """Tokenize ``text`` deterministically under the given scheme.

    Empty (or all-whitespace) text yields an empty sequence; callers decide
    whether that is an error. ``lowercase`` defaults to True for the
    whitespace scheme and False for the character scheme.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown tokenization scheme: {scheme!r}")
    if lowercase is None:
        lowercase = scheme == "whitespace"
    if lowercase:
        text = text.lower()
    if scheme == "whitespace":
        tokens = tuple(text.split())
    else:
        tokens = tuple(ch for ch in text if not ch.isspace())
    return TokenSequence(tokens, scheme)


def ngrams(seq: TokenSequence, n: int) -> Counter:
    """All contiguous n-grams of ``seq`` with multiplicity.

    The total count is max(0, len(seq) - n + 1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    toks = seq.tokens
    return Counter(toks[i : i + n] for i in range(len(toks) - n + 1))


@dataclass(frozen=True)
class EvalInstance:
    """One (input, reference, candidate, human score) record.

    The human score must already live in [0, 1]; out-of-range values are a
    loading error, never rescaled or clipped.
    """

    input_text: str
    candidate_text: str
    human_score: float
    reference_text: str | None = None

    def __post_init__(self):
        if not self.input_text:
            raise ValueError("input_text must be non-empty")
        if not self.candidate_text:
            raise ValueError("candidate_text must be non-empty")
        h = float(self.human_score)
        if not np.isfinite(h) or not 0.0 <= h <= 1.0:
            raise ValueError(f"human_score must be in [0, 1], got {self.human_score!r}")
        object.__setattr__(self, "human_score", h)

    @property
    def has_reference(self) -> bool:
        return self.reference_text is not None


@dataclass(frozen=True)
class Benchmark:
    """A validated collection of instances grouped by input sentence.

    ``groups`` maps each distinct input text to the indices of its
    candidates, in first-seen order; every index belongs to exactly one
    group, and all instances of a group share the same input (and the same
    reference, when present).
    """

    instances: tuple[EvalInstance, ...]
    name: str = "benchmark"
    language_tag: str = "en"
    scheme: str | None = None
    groups: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        if self.scheme is None:
            object.__setattr__(self, "scheme", default_scheme(self.language_tag))
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown tokenization scheme: {self.scheme!r}")
        if not self.groups:
            object.__setattr__(self, "groups", _group_by_input(self.instances))
        _validate_groups(self.instances, self.groups)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def human_scores(self) -> np.ndarray:
        return np.array([inst.human_score for inst in self.instances], dtype=float)

    def has_references(self) -> bool:
        return all(inst.has_reference for inst in self.instances)

    def tokenized(self, text: str) -> TokenSequence:
        """Tokenize a text under this benchmark's scheme."""
        return tokenize(text, self.scheme)


def _group_by_input(instances) -> dict[str, tuple[int, ...]]:
    groups: dict[str, list[int]] = {}
    for i, inst in enumerate(instances):
        groups.setdefault(inst.input_text, []).append(i)
    return {k: tuple(v) for k, v in groups.items()}


def _validate_groups(instances, groups) -> None:
    seen: set[int] = set()
    for text, indices in groups.items():
        refs = set()
        for i in indices:
            if i in seen:
                raise ValueError(f"instance {i} appears in more than one group")
            seen.add(i)
            inst = instances[i]
            if inst.input_text != text:
                raise ValueError(f"instance {i} grouped under a different input text")
            refs.add(inst.reference_text)
        if len(refs) > 1:
            raise ValueError(f"group {text!r} mixes different reference texts")
    if len(seen) != len(instances):
        raise ValueError("some instances belong to no group")


@dataclass(frozen=True)
class ScoreVector:
    """Per-instance outputs of one metric configuration.

    Aligned index-for-index with a benchmark's instance order; every value
    must be finite.
    """

    metric_id: str
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"non-finite value in score vector {self.metric_id!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]
