"""Command-line front door for batch scoring, evaluation, and analyses.

Every subcommand reads one benchmark file, resolves all defaults, and
writes a run manifest next to its output file (or, when results go to
stdout, prints the manifest to stderr). Exit codes: 0 success, 1 usage
error, 2 data or validation error, 3 embedding-provider error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .benchmark_io import (
    ReportDocument,
    ReportRow,
    SplitConfig,
    extend_benchmark,
    load_benchmark,
    render_report,
    save_benchmark,
    split_dev_test,
)
from .core import Benchmark, ScoreVector, TokenSequence, tokenize
from .errors import (
    ConstantInputError,
    LengthMismatchError,
    MissingReferenceError,
    ProviderError,
    TooFewPairsError,
    ValidationError,
)
from .lexical import BleuConfig, bleu, ibleu, ned, rouge
from .meta import (
    build_s_div,
    build_s_sim,
    case_partition,
    correlation_report,
    delta_free_vs_based,
    pair_delta_correlation,
    pearson,
    quartile_groups,
    spearman,
    split_s_div,
)
from .parascore import (
    DEFAULT_GAMMA,
    DEFAULT_OMEGA,
    ParaScoreConfig,
    bert_ibleu,
    parascore,
    parascore_free,
    sim_ds_vectors,
    tune_omega,
    with_omega,
)
from .semantic import IdfTable, SimilarityBackendDescriptor, build_idf, sim

SCORE_METRICS = (
    "bleu4",
    "selfbleu",
    "ibleu",
    "rouge1",
    "rouge2",
    "rougeL",
    "ned",
    "bertscore",
    "bertscore-free",
    "bert-ibleu",
    "parascore",
    "parascore-free",
)

# Metric families with both a reference-based and a reference-free variant.
FAMILIES = ("bleu4", "rouge1", "rouge2", "rougeL", "bertscore")

DEFAULT_CASE_FAMILIES = ("rougeL", "rouge1", "rouge2", "bertscore")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise UsageError(message)


@dataclass
class ScoringContext:
    """Resolved configuration shared by every per-instance metric function."""

    backend: SimilarityBackendDescriptor
    idf: IdfTable | None
    bleu_config: BleuConfig
    alpha: float
    beta: float
    parascore_config: ParaScoreConfig
    dist_scheme: str
    jobs: int = 1


class BenchmarkScorer:
    """Caches tokenizations and computes per-metric score vectors."""

    def __init__(self, benchmark: Benchmark, ctx: ScoringContext):
        self.benchmark = benchmark
        self.ctx = ctx
        self._tokens: dict[tuple[str, str], TokenSequence] = {}

    def tokens(self, text: str, scheme: str | None = None) -> TokenSequence:
        scheme = scheme or self.benchmark.scheme
        key = (text, scheme)
        seq = self._tokens.get(key)
        if seq is None:
            seq = tokenize(text, scheme)
            self._tokens[key] = seq
        return seq

    def _xrc(self, i: int):
        inst = self.benchmark.instances[i]
        x = self.tokens(inst.input_text)
        c = self.tokens(inst.candidate_text)
        r = self.tokens(inst.reference_text) if inst.reference_text is not None else None
        return x, r, c

    def _require_ref(self, r, name):
        if r is None:
            raise MissingReferenceError(f"{name} needs a reference on every instance")
        return r

    def instance_score(self, name: str, i: int) -> float:
        ctx = self.ctx
        x, r, c = self._xrc(i)
        family, _, variant = name.partition(".")
        if family == "selfbleu":
            family, variant = "bleu4", "free"
        if family == "bertscore-free":
            family, variant = "bertscore", "free"
        if family == "parascore" and variant == "free":
            family, variant = "parascore-free", ""
        if variant not in ("", "free", "to-reference"):
            raise UsageError(f"unknown metric: {name!r}")
        if family == "bleu4":
            target = x if variant == "free" else self._require_ref(r, name)
            return bleu(c, target, ctx.bleu_config)
        if family in ("rouge1", "rouge2", "rougeL"):
            target = x if variant == "free" else self._require_ref(r, name)
            return rouge(c, target, "R" + family[5:]).f1
        if family == "bertscore":
            target = x if variant == "free" else self._require_ref(r, name)
            return sim(ctx.backend, target, c, ctx.idf)
        if family == "ibleu":
            return ibleu(c, self._require_ref(r, name), x, ctx.alpha, ctx.bleu_config)
        if family == "ned":
            target = self._require_ref(r, name) if variant == "to-reference" else x
            return self.dist(target, c)
        if family == "bert-ibleu":
            return bert_ibleu(x, c, ctx.beta, ctx.backend, ctx.bleu_config, ctx.idf)
        if family == "parascore":
            return parascore(x, self._require_ref(r, name), c, ctx.parascore_config, ctx.idf).total
        if family == "parascore-free":
            return parascore_free(x, c, ctx.parascore_config, ctx.idf).total
        raise UsageError(f"unknown metric: {name!r}")

    def dist(self, a: TokenSequence, b: TokenSequence) -> float:
        scheme = self.ctx.dist_scheme
        return ned(self.tokens(a.text(), scheme), self.tokens(b.text(), scheme))

    def map_instances(self, fn) -> list:
        n = len(self.benchmark)
        if self.ctx.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.ctx.jobs) as pool:
                return list(pool.map(fn, range(n)))
        return [fn(i) for i in range(n)]

    def vector(self, name: str) -> ScoreVector:
        values = self.map_instances(lambda i: self.instance_score(name, i))
        return ScoreVector(name, np.array(values))

    def dist_to_input(self) -> ScoreVector:
        def f(i):
            x, _, c = self._xrc(i)
            return self.dist(x, c)

        return ScoreVector("ned", np.array(self.map_instances(f)))

    def dist_to_reference(self) -> ScoreVector:
        def f(i):
            x, r, c = self._xrc(i)
            return self.dist(self._require_ref(r, "ned.to-reference"), c)

        return ScoreVector("ned.to-reference", np.array(self.map_instances(f)))

    def sim_to_input(self, mode: str) -> ScoreVector:
        backend = replace(self.ctx.backend, sentence_sim_mode=mode)

        def f(i):
            x, _, c = self._xrc(i)
            return sim(backend, x, c, self.ctx.idf)

        return ScoreVector(f"sim[{mode}]", np.array(self.map_instances(f)))


def _metric_needs_reference(name: str) -> bool:
    base = {"bleu4", "rouge1", "rouge2", "rougeL", "bertscore", "ibleu", "parascore"}
    if name in ("ned.to-reference",):
        return True
    family, _, variant = name.partition(".")
    if variant == "free":
        return False
    return family in base


def _normalize_metrics(raw: list[str]) -> list[str]:
    out = []
    for chunk in raw:
        for name in chunk.split(","):
            name = name.strip()
            if name:
                out.append(name)
    return out


# -- argument plumbing --------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, *, needs_benchmark: bool = True) -> None:
    if needs_benchmark:
        parser.add_argument("--benchmark", required=True, help="benchmark file (JSONL or TSV)")
    parser.add_argument("--language", default="en", help="language tag (sets default scheme)")
    parser.add_argument(
        "--scheme", choices=("whitespace", "character"), default=None,
        help="tokenization scheme override",
    )
    parser.add_argument(
        "--dist-scheme", choices=("whitespace", "character"), default=None,
        help="tokenization scheme for edit distance (default: benchmark scheme)",
    )
    parser.add_argument(
        "--backend", default="fallback",
        help="similarity backend: fallback, file:PATH, or remote:URL",
    )
    parser.add_argument(
        "--sim-mode", choices=("greedy-f1", "mean-pool-cosine"), default="greedy-f1",
        help="sentence similarity mode",
    )
    parser.add_argument(
        "--idf", choices=("off", "inputs", "references"), default="off",
        help="weight greedy matching by idf built from this source",
    )
    parser.add_argument("--omega", type=float, default=None, help="divergence weight (default 0.05, untuned)")
    parser.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="divergence saturation point")
    parser.add_argument("--alpha", type=float, default=0.3, help="ibleu self-overlap weight")
    parser.add_argument("--beta", type=float, default=4.0, help="bert-ibleu harmonic weight")
    parser.add_argument("--smoothing", default="add_k", help="bleu smoothing: none, add_k, or add_k:K")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="parallel scoring degree")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="paraeval", description="Paraphrase evaluation toolkit")
    parser.add_argument("--version", action="version", version=f"paraeval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="per-instance scores for one metric")
    p_score.add_argument("--metric", choices=SCORE_METRICS, required=True)
    _add_common(p_score)
    p_score.set_defaults(handler=cmd_score)

    p_eval = sub.add_parser("evaluate", help="metric-vs-human correlation report")
    p_eval.add_argument("--metric", "--metrics", action="append", default=None, dest="metrics",
                        help="metric name(s), comma separated or repeated (default: full roster)")
    p_eval.add_argument("--correlations", choices=("pearson", "spearman", "both"), default="both")
    p_eval.add_argument("--format", choices=("csv", "markdown", "jsonl"), default="csv")
    _add_common(p_eval)
    p_eval.set_defaults(handler=cmd_evaluate)

    p_analyze = sub.add_parser("analyze", help="distance, case, and attribution analyses")
    analyze_sub = p_analyze.add_subparsers(dest="analysis", required=True)

    p_dg = analyze_sub.add_parser("distance-groups", help="correlations per distance quartile")
    p_dg.add_argument("--dist-key", choices=("to-reference", "to-input"), default="to-reference")
    p_dg.add_argument("--metric", "--metrics", action="append", default=None, dest="metrics")
    p_dg.add_argument("--format", choices=("csv", "markdown", "jsonl"), default="csv")
    _add_common(p_dg)
    p_dg.set_defaults(handler=cmd_distance_groups)

    p_cases = analyze_sub.add_parser("cases", help="closer-to-reference vs closer-to-input split")
    p_cases.add_argument("--metric", "--metrics", action="append", default=None, dest="metrics")
    p_cases.add_argument("--format", choices=("csv", "markdown", "jsonl"), default="csv")
    _add_common(p_cases)
    p_cases.set_defaults(handler=cmd_cases)

    p_attr = analyze_sub.add_parser("attribution", help="disentangle similarity from divergence")
    p_attr.add_argument("--subset", choices=("s-sim", "s-div", "base"), default="s-sim")
    p_attr.add_argument("--eta1", type=float, default=None, help="closeness threshold (default 0.05)")
    p_attr.add_argument("--eta2", type=float, default=None,
                        help="separation threshold (default 0.15 for s-sim, 0.10 for s-div)")
    p_attr.add_argument("--threshold", type=float, default=0.35, help="s-div split point")
    p_attr.add_argument("--quantity", choices=("delta-s", "delta-d", "delta-m"), default=None)
    p_attr.add_argument("--delta-metric", default=None, help="metric for --quantity delta-m")
    p_attr.add_argument("--attr-sim-mode", choices=("greedy-f1", "mean-pool-cosine"),
                        default="mean-pool-cosine",
                        help="similarity mode used as the Sim surrogate for pair selection")
    p_attr.add_argument("--format", choices=("csv", "markdown", "jsonl"), default="csv")
    _add_common(p_attr)
    p_attr.set_defaults(handler=cmd_attribution)

    p_tune = sub.add_parser("tune", help="fit omega on a dev split")
    p_tune.add_argument("--grid", default="0:0.5:0.01", help="START:STOP:STEP, stop inclusive")
    p_tune.add_argument("--objective", choices=("pearson", "spearman"), default="pearson")
    p_tune.add_argument("--mode", choices=("free", "based"), default="free")
    p_tune.add_argument("--dev-fraction", type=float, default=0.10)
    p_tune.add_argument("--seed", type=int, default=0)
    _add_common(p_tune)
    p_tune.set_defaults(handler=cmd_tune)

    p_extend = sub.add_parser("extend", help="append inputs as zero-scored candidates")
    p_extend.add_argument("--fraction", type=float, default=0.20)
    p_extend.add_argument("--seed", type=int, default=0)
    _add_common(p_extend)
    p_extend.set_defaults(handler=cmd_extend)

    return parser


def _parse_backend(spec: str) -> SimilarityBackendDescriptor:
    kind, _, rest = spec.partition(":")
    if kind == "fallback" and not rest:
        return SimilarityBackendDescriptor(provider="deterministic_fallback")
    if kind == "file" and rest:
        return SimilarityBackendDescriptor(provider="embedding_file", endpoint_or_path=rest)
    if kind == "remote" and rest:
        return SimilarityBackendDescriptor(provider="remote_service", endpoint_or_path=rest)
    raise UsageError(f"bad --backend value: {spec!r} (use fallback, file:PATH, or remote:URL)")


def _parse_smoothing(spec: str) -> BleuConfig:
    if spec == "none":
        return BleuConfig(smoothing="none")
    if spec == "add_k":
        return BleuConfig(smoothing="add_k", k=1.0)
    if spec.startswith("add_k:"):
        return BleuConfig(smoothing="add_k", k=float(spec.split(":", 1)[1]))
    raise UsageError(f"bad --smoothing value: {spec!r}")


def _parse_grid(spec: str) -> tuple[float, ...]:
    parts = spec.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise UsageError(f"bad --grid value: {spec!r} (use START:STOP:STEP)")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise UsageError("grid needs step > 0 and stop >= start")
    return tuple(np.round(np.arange(start, stop + step / 2, step), 10))


def _load(args) -> Benchmark:
    return load_benchmark(args.benchmark, scheme=args.scheme, language_tag=args.language)


def _build_context(args, benchmark: Benchmark, warn_untuned: bool = False) -> ScoringContext:
    backend = _parse_backend(args.backend)
    backend = replace(
        backend,
        sentence_sim_mode="greedy_f1" if args.sim_mode == "greedy-f1" else "mean_pool_cosine",
        idf_enabled=args.idf != "off",
    )
    idf = build_idf(benchmark, args.idf) if args.idf != "off" else None
    omega = args.omega
    if omega is None:
        omega = DEFAULT_OMEGA
        if warn_untuned:
            print(
                f"note: omega defaults to {DEFAULT_OMEGA} (untuned); fit it with 'paraeval tune'",
                file=sys.stderr,
            )
    dist_scheme = args.dist_scheme or benchmark.scheme
    return ScoringContext(
        backend=backend,
        idf=idf,
        bleu_config=_parse_smoothing(args.smoothing),
        alpha=args.alpha,
        beta=args.beta,
        parascore_config=ParaScoreConfig(
            omega=omega, gamma=args.gamma, sim_backend=backend, dist_scheme=dist_scheme
        ),
        dist_scheme=dist_scheme,
        jobs=max(1, args.jobs),
    )


# -- manifests and output -----------------------------------------------------


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _manifest(args, extra: dict | None = None) -> dict:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("handler",) or callable(value):
            continue
        config[key] = value
    inputs = {}
    if getattr(args, "benchmark", None):
        inputs[args.benchmark] = _sha256(args.benchmark)
    backend = getattr(args, "backend", "")
    if backend.startswith("file:"):
        path = backend.split(":", 1)[1]
        if os.path.exists(path):
            inputs[path] = _sha256(path)
    manifest = {
        "command": args.command if args.command != "analyze" else f"analyze {args.analysis}",
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "config": config,
        "inputs": inputs,
    }
    if extra:
        manifest.update(extra)
    return manifest


def _write_output(text: str, args, extra: dict | None = None) -> None:
    manifest_json = json.dumps(_manifest(args, extra), sort_keys=True, ensure_ascii=False, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        with open(args.out + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(manifest_json + "\n")
    else:
        sys.stdout.write(text)
        print(f"manifest: {json.dumps(_manifest(args, extra), sort_keys=True)}", file=sys.stderr)


def _maybe_none(fn, *args_, **kwargs):
    """Run a correlation, mapping degenerate data to None cells."""
    try:
        return fn(*args_, **kwargs)
    except (ConstantInputError, LengthMismatchError, TooFewPairsError):
        return None


# -- subcommand handlers ------------------------------------------------------


def cmd_score(args) -> None:
    benchmark = _load(args)
    is_parascore = args.metric in ("parascore", "parascore-free")
    ctx = _build_context(args, benchmark, warn_untuned=is_parascore and args.omega is None)
    scorer = BenchmarkScorer(benchmark, ctx)
    if is_parascore:
        def composite(i):
            inst = benchmark.instances[i]
            x = scorer.tokens(inst.input_text)
            c = scorer.tokens(inst.candidate_text)
            if args.metric == "parascore":
                if inst.reference_text is None:
                    raise MissingReferenceError("parascore needs a reference on every instance")
                r = scorer.tokens(inst.reference_text)
                return parascore(x, r, c, ctx.parascore_config, ctx.idf)
            return parascore_free(x, c, ctx.parascore_config, ctx.idf)

        composites = scorer.map_instances(composite)
        lines = [
            json.dumps(
                {
                    "index": i,
                    "score": comp.total,
                    "sim": comp.sim_component,
                    "ds": comp.ds_component,
                    "which_sim": comp.which_sim,
                },
                ensure_ascii=False,
            )
            for i, comp in enumerate(composites)
        ]
    else:
        vector = scorer.vector(args.metric)
        lines = [
            json.dumps({"index": i, "score": float(v)}, ensure_ascii=False)
            for i, v in enumerate(vector.values)
        ]
    _write_output("\n".join(lines) + "\n", args)


def _default_roster(benchmark: Benchmark) -> list[str]:
    if not benchmark.has_references():
        return [f"{family}.free" for family in FAMILIES] + ["bert-ibleu", "parascore-free"]
    roster = []
    for family in FAMILIES:
        roster.extend([family, f"{family}.free"])
    roster.extend(["ibleu", "bert-ibleu", "parascore", "parascore-free"])
    return roster


def cmd_evaluate(args) -> None:
    benchmark = _load(args)
    metrics = _normalize_metrics(args.metrics) if args.metrics else _default_roster(benchmark)
    wants_parascore = any(m.startswith("parascore") for m in metrics)
    ctx = _build_context(args, benchmark, warn_untuned=wants_parascore and args.omega is None)
    scorer = BenchmarkScorer(benchmark, ctx)
    human = benchmark.human_scores()
    rows = []
    for name in metrics:
        vector = scorer.vector(name)
        report = correlation_report(name, vector, human)
        rows.append(
            ReportRow(
                name,
                "all",
                report.pearson if args.correlations in ("pearson", "both") else None,
                report.spearman if args.correlations in ("spearman", "both") else None,
                report.n,
            )
        )
    doc = ReportDocument(tuple(rows), format=args.format)
    _write_output(render_report(doc), args)


def cmd_distance_groups(args) -> None:
    benchmark = _load(args)
    ctx = _build_context(args, benchmark)
    scorer = BenchmarkScorer(benchmark, ctx)
    if args.dist_key == "to-reference":
        dist = scorer.dist_to_reference()
        default_metrics = ["rouge1", "rouge2", "rougeL", "bertscore"]
    else:
        dist = scorer.dist_to_input()
        default_metrics = ["rouge1.free", "rouge2.free", "rougeL.free", "bertscore.free"]
    metrics = _normalize_metrics(args.metrics) if args.metrics else default_metrics
    groups = quartile_groups(benchmark, dist, dist_key=args.dist_key.replace("-", "_"))
    human = benchmark.human_scores()
    rows = []
    for name in metrics:
        vector = scorer.vector(name)
        for group in groups:
            idx = list(group.instance_indices)
            p = _maybe_none(pearson, vector.values[idx], human[idx])
            s = _maybe_none(spearman, vector.values[idx], human[idx])
            rows.append(ReportRow(name, f"group{group.group_index}", p, s, len(idx)))
    for group in groups:
        print(
            f"group{group.group_index}: n={len(group.instance_indices)} "
            f"dist=[{group.min_dist:.4f}, {group.max_dist:.4f}]",
            file=sys.stderr,
        )
    doc = ReportDocument(tuple(rows), format=args.format)
    _write_output(render_report(doc), args)


def cmd_cases(args) -> None:
    benchmark = _load(args)
    ctx = _build_context(args, benchmark)
    scorer = BenchmarkScorer(benchmark, ctx)
    partition = case_partition(benchmark, scorer.dist_to_reference(), scorer.dist_to_input())
    families = _normalize_metrics(args.metrics) if args.metrics else list(DEFAULT_CASE_FAMILIES)
    human = benchmark.human_scores()
    segments = (("case1", list(partition.case1_indices)), ("case2", list(partition.case2_indices)))
    rows = []
    per_case_free: dict[str, list] = {"case1": [], "case2": []}
    per_case_based: dict[str, list] = {"case1": [], "case2": []}
    for family in families:
        if _metric_needs_reference(family) is False:
            raise UsageError(f"case analysis needs reference-based families, got {family!r}")
        based = scorer.vector(family)
        free = scorer.vector(f"{family}.free")
        for segment, idx in segments:
            for label, vector, sink in (
                (family, based, per_case_based),
                (f"{family}.free", free, per_case_free),
            ):
                p = _maybe_none(pearson, vector.values[idx], human[idx])
                s = _maybe_none(spearman, vector.values[idx], human[idx])
                rows.append(ReportRow(label, segment, p, s, len(idx)))
                sink[segment].append((p, s))
    for segment, _ in segments:
        free_vals = per_case_free[segment]
        based_vals = per_case_based[segment]
        if all(p is not None for p, _ in free_vals + based_vals):
            dp = delta_free_vs_based([p for p, _ in free_vals], [p for p, _ in based_vals])
            ds_ = delta_free_vs_based([s for _, s in free_vals], [s for _, s in based_vals])
        else:
            dp = ds_ = None
        rows.append(ReportRow("delta(free-based)", segment, dp, ds_, len(families)))
    n = len(benchmark)
    rows.append(ReportRow("case-proportion", "case1", partition.proportions[0],
                          partition.proportions[0], len(partition.case1_indices)))
    rows.append(ReportRow("case-proportion", "case2", partition.proportions[1],
                          partition.proportions[1], len(partition.case2_indices)))
    print(
        f"case1: {len(partition.case1_indices)}/{n} case2: {len(partition.case2_indices)}/{n}",
        file=sys.stderr,
    )
    doc = ReportDocument(tuple(rows), format=args.format)
    _write_output(render_report(doc), args)


def cmd_attribution(args) -> None:
    benchmark = _load(args)
    ctx = _build_context(args, benchmark)
    scorer = BenchmarkScorer(benchmark, ctx)
    dist = scorer.dist_to_input()
    sim_scores = scorer.sim_to_input(
        "greedy_f1" if args.attr_sim_mode == "greedy-f1" else "mean_pool_cosine"
    )
    eta1 = 0.05 if args.eta1 is None else args.eta1
    if args.subset == "s-sim":
        eta2 = 0.15 if args.eta2 is None else args.eta2
        pairs = build_s_sim(benchmark, dist, sim_scores, eta1, eta2)
        segments = [("s-sim", pairs)]
        default_quantity = "delta-s"
    elif args.subset == "base":
        pairs = build_s_sim(benchmark, dist, sim_scores, eta1, 0.0)
        segments = [("base", pairs)]
        default_quantity = "delta-s"
    else:
        eta2 = 0.10 if args.eta2 is None else args.eta2
        pairs = build_s_div(benchmark, dist, sim_scores, eta1, eta2)
        div1, div2 = split_s_div(pairs, args.threshold)
        segments = [("s-div", pairs), ("s-div1", div1), ("s-div2", div2)]
        default_quantity = "delta-d"
    quantity = args.quantity or default_quantity
    metric_scores = None
    if quantity == "delta-m":
        if not args.delta_metric:
            raise UsageError("--quantity delta-m requires --delta-metric")
        metric_scores = scorer.vector(args.delta_metric)
        label = f"delta-m[{args.delta_metric}]"
    else:
        label = quantity
    rows = []
    for segment, segment_pairs in segments:
        report = _maybe_none(
            pair_delta_correlation, segment_pairs, quantity.replace("-", "_"), metric_scores
        )
        if report is None:
            rows.append(ReportRow(label, segment, None, None, len(segment_pairs)))
        else:
            rows.append(ReportRow(label, segment, report.pearson, report.spearman, report.n))
    doc = ReportDocument(tuple(rows), format=args.format)
    _write_output(render_report(doc), args)


def cmd_tune(args) -> None:
    benchmark = _load(args)
    ctx = _build_context(args, benchmark)
    dev, test = split_dev_test(benchmark, SplitConfig(dev_fraction=args.dev_fraction, seed=args.seed))
    grid = _parse_grid(args.grid)
    omega_star, objective_value = tune_omega(
        dev, ctx.parascore_config, grid, args.objective, args.mode, ctx.idf
    )
    tuned = with_omega(ctx.parascore_config, omega_star)
    sims, dss = sim_ds_vectors(test, tuned, args.mode, ctx.idf)
    scores = sims + omega_star * dss
    human = test.human_scores()
    result = {
        "omega": omega_star,
        "objective": args.objective,
        "objective_value": objective_value,
        "mode": args.mode,
        "dev_groups": dev.num_groups,
        "test_groups": test.num_groups,
        "test_pearson": _maybe_none(pearson, scores, human),
        "test_spearman": _maybe_none(spearman, scores, human),
    }
    _write_output(json.dumps(result, ensure_ascii=False, sort_keys=True) + "\n", args)


def cmd_extend(args) -> None:
    if not args.out:
        raise UsageError("extend requires --out")
    benchmark = _load(args)
    extended = extend_benchmark(benchmark, fraction=args.fraction, seed=args.seed)
    save_benchmark(extended, args.out)
    manifest_json = json.dumps(
        _manifest(args, {"added": len(extended) - len(benchmark)}),
        sort_keys=True, ensure_ascii=False, indent=2,
    )
    with open(args.out + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(manifest_json + "\n")
    print(f"added {len(extended) - len(benchmark)} instances", file=sys.stderr)


def run(argv: list[str] | None = None) -> int:
    """Parse and dispatch; returns the process exit code."""
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        args.handler(args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ProviderError as exc:
        print(f"provider error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
