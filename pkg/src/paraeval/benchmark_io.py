"""Benchmark files, dev/test splitting, extension, and report emission.

A benchmark file is UTF-8 and line-delimited. The native format is one
JSON object per line with exactly the fields ``input``, ``reference``
(nullable), ``candidate``, ``score``. A TSV fallback is accepted when the
first line is the header ``input<TAB>reference<TAB>candidate<TAB>score``
(an empty reference cell means no reference).
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass

from .core import Benchmark, EvalInstance
from .errors import (
    DomainError,
    DuplicateRecordError,
    ParseError,
    ScoreOutOfRangeError,
    TooFewGroupsError,
)

_RECORD_FIELDS = ("input", "reference", "candidate", "score")
_TSV_HEADER = "input\treference\tcandidate\tscore"


@dataclass(frozen=True)
class SplitConfig:
    """How to carve a dev set out of a benchmark: a fraction of the input
    groups, chosen by seeded shuffle, so all candidates of one input stay
    on the same side."""

    dev_fraction: float = 0.10
    seed: int = 0
    unit: str = "by_input"

    def __post_init__(self):
        if not 0.0 < self.dev_fraction < 1.0:
            raise ValueError("dev_fraction must be in (0, 1)")
        if self.unit != "by_input":
            raise ValueError(f"unsupported split unit: {self.unit!r}")


def _record_to_instance(record: dict, line: int) -> EvalInstance:
    if set(record.keys()) != set(_RECORD_FIELDS):
        raise ParseError(
            f"expected exactly the fields {', '.join(_RECORD_FIELDS)}; got {sorted(record.keys())}",
            line,
        )
    reference = record["reference"]
    if reference is not None and not isinstance(reference, str):
        raise ParseError("reference must be a string or null", line)
    if reference == "":
        raise ParseError("reference must be null when absent, not empty", line)
    try:
        score = float(record["score"])
    except (TypeError, ValueError):
        raise ParseError(f"score is not a number: {record['score']!r}", line) from None
    if not 0.0 <= score <= 1.0:
        raise ScoreOutOfRangeError(f"score {score!r} outside [0, 1]", line)
    if not isinstance(record["input"], str) or not record["input"]:
        raise ParseError("input must be a non-empty string", line)
    if not isinstance(record["candidate"], str) or not record["candidate"]:
        raise ParseError("candidate must be a non-empty string", line)
    return EvalInstance(
        input_text=record["input"],
        candidate_text=record["candidate"],
        human_score=score,
        reference_text=reference,
    )


def load_benchmark(
    path: str,
    scheme: str | None = None,
    language_tag: str = "en",
    name: str | None = None,
) -> Benchmark:
    """Load and validate a benchmark file (JSONL, or TSV by header).

    Instances are grouped by identical input text; a repeated (input,
    candidate) pair, an out-of-range score, or inconsistent references
    within a group are rejected with the offending line number.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    tsv = bool(lines) and lines[0] == _TSV_HEADER
    instances: list[EvalInstance] = []
    seen_pairs: set[tuple[str, str]] = set()
    group_refs: dict[str, str | None] = {}
    start = 1 if tsv else 0
    for lineno, raw in enumerate(lines[start:], start=start + 1):
        if not raw.strip():
            continue
        if tsv:
            parts = raw.split("\t")
            if len(parts) != 4:
                raise ParseError(f"expected 4 tab-separated fields, got {len(parts)}", lineno)
            record = {
                "input": parts[0],
                "reference": parts[1] if parts[1] else None,
                "candidate": parts[2],
                "score": parts[3],
            }
        else:
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
            if not isinstance(record, dict):
                raise ParseError("each line must hold one object", lineno)
        instance = _record_to_instance(record, lineno)
        pair = (instance.input_text, instance.candidate_text)
        if pair in seen_pairs:
            raise DuplicateRecordError(
                f"duplicate (input, candidate) pair: {instance.candidate_text!r}", lineno
            )
        seen_pairs.add(pair)
        if instance.input_text in group_refs:
            if group_refs[instance.input_text] != instance.reference_text:
                raise ParseError(
                    f"input {instance.input_text!r} appears with a different reference", lineno
                )
        else:
            group_refs[instance.input_text] = instance.reference_text
        instances.append(instance)
    if name is None:
        name = path.rsplit("/", 1)[-1]
    return Benchmark(tuple(instances), name=name, language_tag=language_tag, scheme=scheme)


def save_benchmark(benchmark: Benchmark, path: str) -> None:
    """Serialize a benchmark back to the native JSONL format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst in benchmark.instances:
            fh.write(
                json.dumps(
                    {
                        "input": inst.input_text,
                        "reference": inst.reference_text,
                        "candidate": inst.candidate_text,
                        "score": inst.human_score,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def split_dev_test(benchmark: Benchmark, config: SplitConfig = SplitConfig()) -> tuple[Benchmark, Benchmark]:
    """Split at input-group granularity into (dev, test).

    The dev side receives round(dev_fraction * #groups) groups, chosen by a
    seeded shuffle; the same seed always produces the same split, and no
    input text appears on both sides.
    """
    keys = list(benchmark.groups.keys())
    if len(keys) < 10:
        raise TooFewGroupsError(f"need at least 10 input groups to split, got {len(keys)}")
    n_dev = round(config.dev_fraction * len(keys))
    shuffled = keys.copy()
    random.Random(config.seed).shuffle(shuffled)
    dev_keys = set(shuffled[:n_dev])
    dev_instances = tuple(i for i in benchmark.instances if i.input_text in dev_keys)
    test_instances = tuple(i for i in benchmark.instances if i.input_text not in dev_keys)
    common = dict(language_tag=benchmark.language_tag, scheme=benchmark.scheme)
    return (
        Benchmark(dev_instances, name=f"{benchmark.name}-dev", **common),
        Benchmark(test_instances, name=f"{benchmark.name}-test", **common),
    )


def extend_benchmark(benchmark: Benchmark, fraction: float = 0.20, seed: int = 0) -> Benchmark:
    """Stress divergence sensitivity: append the input itself as a
    zero-scored candidate for round(fraction * #groups) seeded-shuffled
    input groups. Original instances are untouched."""
    if not 0.0 <= fraction <= 1.0:
        raise DomainError("fraction must be in [0, 1]")
    keys = list(benchmark.groups.keys())
    n_add = round(fraction * len(keys))
    if n_add == 0:
        return benchmark
    shuffled = keys.copy()
    random.Random(seed).shuffle(shuffled)
    chosen = set(shuffled[:n_add])
    added = []
    for text, indices in benchmark.groups.items():
        if text in chosen:
            reference = benchmark.instances[indices[0]].reference_text
            added.append(
                EvalInstance(
                    input_text=text,
                    candidate_text=text,
                    human_score=0.0,
                    reference_text=reference,
                )
            )
    return Benchmark(
        benchmark.instances + tuple(added),
        name=f"{benchmark.name}-extended",
        language_tag=benchmark.language_tag,
        scheme=benchmark.scheme,
    )


@dataclass(frozen=True)
class ReportRow:
    metric_id: str
    segment: str
    pearson: float | None
    spearman: float | None
    n: int


@dataclass(frozen=True)
class ReportDocument:
    """Rows of (metric, segment, pearson, spearman, n) plus a render format."""

    rows: tuple[ReportRow, ...]
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "markdown", "jsonl"):
            raise ValueError(f"unknown report format: {self.format!r}")
        object.__setattr__(self, "rows", tuple(self.rows))


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def render_report(doc: ReportDocument) -> str:
    """Render a report deterministically; numbers are fixed at 4 decimals."""
    if doc.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "segment", "pearson", "spearman", "n"])
        for row in doc.rows:
            writer.writerow([row.metric_id, row.segment, _fmt(row.pearson), _fmt(row.spearman), row.n])
        return buf.getvalue()
    if doc.format == "markdown":
        lines = [
            "| metric | segment | pearson | spearman | n |",
            "| --- | --- | --- | --- | --- |",
        ]
        for row in doc.rows:
            lines.append(
                f"| {row.metric_id} | {row.segment} | {_fmt(row.pearson)} | {_fmt(row.spearman)} | {row.n} |"
            )
        return "\n".join(lines) + "\n"
    lines = []
    for row in doc.rows:
        obj = {"metric": row.metric_id, "segment": row.segment, "n": row.n}
        if row.pearson is not None:
            obj["pearson"] = round(row.pearson, 4)
        if row.spearman is not None:
            obj["spearman"] = round(row.spearman, 4)
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def emit_report(doc: ReportDocument, path: str) -> None:
    """Write a rendered report; identical documents produce identical bytes."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_report(doc))
