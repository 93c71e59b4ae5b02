"""Pluggable semantic-similarity backends and greedy embedding matching.

Three providers supply token embeddings:

* ``deterministic_fallback``: every token maps to a fixed unit vector
  derived from a seeded hash, so the whole toolkit runs with no model and
  no network;
* ``embedding_file``: static vectors loaded from a text file (first line
  is the dimension, then one ``token v1 .. vdim`` record per line; a
  ``<unk>`` record, when present, serves as the out-of-vocabulary default);
* ``remote_service``: an HTTP service that returns contextual vectors for
  whole texts, segmented by its own tokenizer.

Sentence similarity is either the F1 of greedy token matching (each token
paired with its highest-cosine counterpart, negative cosines clamped to
zero) or the clamped cosine of mean-pooled embeddings.
"""

from __future__ import annotations

import hashlib
import os
import threading
from dataclasses import dataclass

import numpy as np

from .core import Benchmark, TokenSequence, tokenize
from .errors import (
    DimensionMismatchError,
    EmptyEmbeddingsError,
    MissingEmbeddingError,
    MissingReferenceError,
    ProviderUnavailableError,
    ValidationError,
)
from .lexical import PrecisionRecallF1

PROVIDERS = ("deterministic_fallback", "embedding_file", "remote_service")
SENTENCE_SIM_MODES = ("greedy_f1", "mean_pool_cosine")

FALLBACK_DIM = 64
DEFAULT_TOKEN = "<unk>"
REMOTE_TIMEOUT_ENV = "PARAEVAL_REMOTE_TIMEOUT_MS"
DEFAULT_MAX_IN_FLIGHT = 8


@dataclass(frozen=True)
class SimilarityBackendDescriptor:
    """Names which provider supplies embeddings and how Sim is computed."""

    provider: str = "deterministic_fallback"
    sentence_sim_mode: str = "greedy_f1"
    idf_enabled: bool = False
    endpoint_or_path: str = ""

    def __post_init__(self):
        if self.provider not in PROVIDERS:
            raise ValueError(f"unknown provider: {self.provider!r}")
        if self.sentence_sim_mode not in SENTENCE_SIM_MODES:
            raise ValueError(f"unknown sentence_sim_mode: {self.sentence_sim_mode!r}")
        if self.provider in ("embedding_file", "remote_service") and not self.endpoint_or_path:
            raise ValueError(f"{self.provider} requires endpoint_or_path")


@dataclass(frozen=True)
class TokenEmbeddings:
    """Unit-norm token vectors; row i embeds token i."""

    tokens: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if mat.shape[0] != len(self.tokens):
            raise DimensionMismatchError(
                f"{len(self.tokens)} tokens but {mat.shape[0]} embedding rows"
            )
        if not np.all(np.isfinite(mat)):
            raise ValueError("non-finite embedding value")
        mat.setflags(write=False)
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class IdfTable:
    """Token importance weights with a default for unseen tokens."""

    weights: dict[str, float]
    default_weight: float = 0.0

    def __post_init__(self):
        for t, w in self.weights.items():
            if not np.isfinite(w) or w < 0:
                raise ValueError(f"idf weight for {t!r} must be finite and >= 0")
        if not np.isfinite(self.default_weight) or self.default_weight < 0:
            raise ValueError("default_weight must be finite and >= 0")

    def weight(self, token: str) -> float:
        return self.weights.get(token, self.default_weight)


def _normalize_rows(matrix: np.ndarray, what: str) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise ValidationError(f"zero-norm vector in {what}")
    return matrix / norms


class _FallbackProvider:
    """Seeded-hash unit vectors; deterministic across processes."""

    dim = FALLBACK_DIM

    def __init__(self):
        self._cache: dict[str, np.ndarray] = {}

    def _vector(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            seed = int.from_bytes(
                hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "big"
            )
            raw = np.random.default_rng(seed).standard_normal(self.dim)
            vec = raw / np.linalg.norm(raw)
            vec.setflags(write=False)
            self._cache[token] = vec
        return vec

    def embed(self, seq: TokenSequence) -> TokenEmbeddings:
        if not seq.tokens:
            return TokenEmbeddings((), np.zeros((0, self.dim)))
        return TokenEmbeddings(seq.tokens, np.vstack([self._vector(t) for t in seq.tokens]))


class _FileProvider:
    """Static per-token vectors from a whitespace-delimited text file."""

    def __init__(self, path: str):
        self.path = path
        self._table: dict[str, np.ndarray] = {}
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 1 or not header[0].isdigit():
                raise ValidationError(f"{path}: first line must be the embedding dimension")
            self.dim = int(header[0])
            for lineno, line in enumerate(fh, 2):
                parts = line.split()
                if not parts:
                    continue
                token, values = parts[0], parts[1:]
                if len(values) != self.dim:
                    raise DimensionMismatchError(
                        f"{path}:{lineno}: expected {self.dim} floats, got {len(values)}"
                    )
                raw = np.array([float(v) for v in values])
                self._table[token] = _normalize_rows(raw[None, :], f"{path}:{lineno}")[0]

    def _vector(self, token: str) -> np.ndarray:
        vec = self._table.get(token)
        if vec is None:
            vec = self._table.get(DEFAULT_TOKEN)
        if vec is None:
            raise MissingEmbeddingError(
                f"{self.path} has no vector for {token!r} and no {DEFAULT_TOKEN} default"
            )
        return vec

    def embed(self, seq: TokenSequence) -> TokenEmbeddings:
        if not seq.tokens:
            return TokenEmbeddings((), np.zeros((0, self.dim)))
        return TokenEmbeddings(seq.tokens, np.vstack([self._vector(t) for t in seq.tokens]))


def _remote_timeout_s() -> float:
    return float(os.environ.get(REMOTE_TIMEOUT_ENV, "10000")) / 1000.0


class _RemoteProvider:
    """HTTP client for the embedding service wire protocol.

    The service segments texts with its own tokenizer, so the returned
    tokens generally differ from the local scheme's. In-flight requests are
    bounded and retried idempotently on transient failures.
    """

    def __init__(self, endpoint: str, max_in_flight: int = DEFAULT_MAX_IN_FLIGHT):
        self.endpoint = endpoint.rstrip("/")
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._cache: dict[str, TokenEmbeddings] = {}
        self._cache_lock = threading.Lock()
        self.dim: int | None = None
        self.model_id: str | None = None

    def _request(self, method: str, url: str, **kwargs):
        import requests

        last_error: Exception | None = None
        for _ in range(3):
            try:
                with self._semaphore:
                    resp = requests.request(method, url, timeout=_remote_timeout_s(), **kwargs)
                if resp.status_code >= 500:
                    last_error = ProviderUnavailableError(
                        f"{url} returned {resp.status_code}"
                    )
                    continue
                return resp
            except requests.RequestException as exc:
                last_error = exc
        raise ProviderUnavailableError(f"cannot reach {url}: {last_error}")

    def health(self) -> dict:
        resp = self._request("GET", f"{self.endpoint}/health")
        if resp.status_code != 200:
            raise ProviderUnavailableError(f"health check failed: {resp.status_code}")
        info = resp.json()
        self.dim = int(info["dim"])
        self.model_id = info.get("model_id")
        _check_remote_dim(self.dim)
        return info

    def embed(self, seq: TokenSequence) -> TokenEmbeddings:
        text = seq.text()
        with self._cache_lock:
            cached = self._cache.get(text)
        if cached is not None:
            return cached
        if self.dim is None:
            self.health()
        resp = self._request(
            "POST",
            f"{self.endpoint}/embed",
            json={"texts": [text], "pooling": "tokens", "layer": -1},
        )
        if resp.status_code != 200:
            raise ProviderUnavailableError(f"embed request failed: {resp.status_code} {resp.text}")
        payload = resp.json()
        result = payload["results"][0]
        matrix = np.asarray(result["matrix"], dtype=float)
        tokens = tuple(result["tokens"])
        if matrix.shape != (len(tokens), int(payload["dim"])):
            raise DimensionMismatchError(
                f"service returned matrix {matrix.shape} for {len(tokens)} tokens"
            )
        embeddings = TokenEmbeddings(tokens, _normalize_rows(matrix, "remote response"))
        with self._cache_lock:
            self._cache[text] = embeddings
        return embeddings


_provider_lock = threading.Lock()
_provider_cache: dict[tuple[str, str], object] = {}
_file_dims: dict[str, int] = {}


def _check_remote_dim(dim: int) -> None:
    for path, file_dim in _file_dims.items():
        if file_dim != dim:
            raise DimensionMismatchError(
                f"remote service dim {dim} differs from file provider {path!r} dim {file_dim}"
            )


def _provider_for(descriptor: SimilarityBackendDescriptor):
    key = (descriptor.provider, descriptor.endpoint_or_path)
    with _provider_lock:
        provider = _provider_cache.get(key)
        if provider is None:
            if descriptor.provider == "deterministic_fallback":
                provider = _FallbackProvider()
            elif descriptor.provider == "embedding_file":
                provider = _FileProvider(descriptor.endpoint_or_path)
                _file_dims[descriptor.endpoint_or_path] = provider.dim
            else:
                provider = _RemoteProvider(descriptor.endpoint_or_path)
            _provider_cache[key] = provider
        return provider


def reset_providers() -> None:
    """Drop cached providers (test isolation; never needed in normal runs)."""
    with _provider_lock:
        _provider_cache.clear()
        _file_dims.clear()


def embed(descriptor: SimilarityBackendDescriptor, seq: TokenSequence) -> TokenEmbeddings:
    """Embed a token sequence through the descriptor's provider.

    Rows are unit-norm. For the remote provider the returned tokens are the
    service tokenizer's segmentation of the sequence's surface text, so the
    row count matches the service's token count rather than ``len(seq)``.
    """
    return _provider_for(descriptor).embed(seq)


def greedy_match_score(
    cand: TokenEmbeddings, targ: TokenEmbeddings, idf: IdfTable | None = None
) -> PrecisionRecallF1:
    """Greedy token matching: precision over candidate tokens, recall over
    target tokens, each token paired with its max-cosine counterpart.

    Negative cosines clamp to zero before averaging; with an IdfTable, each
    side's tokens are weighted by their own idf (falling back to uniform
    weights if they all weigh zero).
    """
    if len(cand) == 0 or len(targ) == 0:
        raise EmptyEmbeddingsError("greedy matching needs non-empty embeddings on both sides")
    if cand.dim != targ.dim:
        raise DimensionMismatchError(f"dim {cand.dim} vs {targ.dim}")
    cosines = np.maximum(cand.matrix @ targ.matrix.T, 0.0)
    precision = _weighted_mean(cosines.max(axis=1), cand.tokens, idf)
    recall = _weighted_mean(cosines.max(axis=0), targ.tokens, idf)
    precision = min(max(precision, 0.0), 1.0)
    recall = min(max(recall, 0.0), 1.0)
    return PrecisionRecallF1.from_pr(precision, recall)


def _weighted_mean(best: np.ndarray, tokens: tuple[str, ...], idf: IdfTable | None) -> float:
    if idf is None:
        return float(best.mean())
    weights = np.array([idf.weight(t) for t in tokens])
    total = weights.sum()
    if total == 0.0:
        return float(best.mean())
    return float((best * weights).sum() / total)


def sim(
    descriptor: SimilarityBackendDescriptor,
    a: TokenSequence,
    b: TokenSequence,
    idf: IdfTable | None = None,
) -> float:
    """Sentence similarity in [0, 1] under the descriptor's mode.

    ``greedy_f1`` returns the greedy-matching F1; ``mean_pool_cosine``
    returns the clamped cosine of the mean-pooled embeddings.
    """
    emb_a = embed(descriptor, a)
    emb_b = embed(descriptor, b)
    if descriptor.sentence_sim_mode == "greedy_f1":
        return greedy_match_score(emb_b, emb_a, idf).f1
    if len(emb_a) == 0 or len(emb_b) == 0:
        raise EmptyEmbeddingsError("mean pooling needs non-empty embeddings on both sides")
    pooled_a = emb_a.matrix.mean(axis=0)
    pooled_b = emb_b.matrix.mean(axis=0)
    denom = np.linalg.norm(pooled_a) * np.linalg.norm(pooled_b)
    if denom == 0.0:
        return 0.0
    return float(min(max(pooled_a @ pooled_b / denom, 0.0), 1.0))


def build_idf(benchmark: Benchmark, source: str = "references") -> IdfTable:
    """Smoothed idf over the benchmark's reference (or input) sentences.

    weight(t) = ln((N + 1) / (df(t) + 1)) with N the number of distinct
    source sentences (one per input group) and df the sentence frequency;
    unseen tokens default to ln(N + 1).
    """
    if source not in ("references", "inputs"):
        raise ValueError(f"unknown idf source: {source!r}")
    if len(benchmark) == 0:
        raise ValidationError("cannot build idf from an empty benchmark")
    sentences = []
    for text, indices in benchmark.groups.items():
        if source == "inputs":
            sentences.append(text)
        else:
            ref = benchmark.instances[indices[0]].reference_text
            if ref is None:
                raise MissingReferenceError(f"group {text!r} has no reference")
            sentences.append(ref)
    n = len(sentences)
    df: dict[str, int] = {}
    for sentence in sentences:
        for token in set(tokenize(sentence, benchmark.scheme).tokens):
            df[token] = df.get(token, 0) + 1
    weights = {t: float(np.log((n + 1) / (c + 1))) for t, c in df.items()}
    return IdfTable(weights, default_weight=float(np.log(n + 1)))
