# Meta-evaluation of metrics against human judgments on a synthetic
# benchmark: overall correlations, distance-quartile degradation, the
# two-case partition, and omega tuning on a dev split.

import numpy as np

from paraeval import (
    Benchmark,
    EvalInstance,
    ParaScoreConfig,
    ScoreVector,
    SimilarityBackendDescriptor,
    SplitConfig,
    case_partition,
    correlation_report,
    delta_free_vs_based,
    extend_benchmark,
    ned,
    parascore_free,
    pearson,
    quartile_groups,
    rouge,
    sim,
    split_dev_test,
    tokenize,
    tune_omega,
)

rng = np.random.default_rng(42)
vocab = [f"w{i}" for i in range(300)]


def perturb(tokens):
    out = list(tokens)
    for _ in range(int(rng.integers(1, len(out)))):
        out[int(rng.integers(0, len(out)))] = vocab[int(rng.integers(0, len(vocab)))]
    if rng.random() < 0.3:
        rng.shuffle(out)
    return out


# Human scores are driven by similarity plus a plateaued divergence bonus,
# so a metric that models both should win.
backend = SimilarityBackendDescriptor()
config = ParaScoreConfig(sim_backend=backend)
instances = []
for _ in range(120):
    x_tokens = [vocab[i] for i in rng.choice(len(vocab), size=9, replace=False)]
    x_text = " ".join(x_tokens)
    x = tokenize(x_text)
    ref = " ".join(perturb(x_tokens))
    seen = {x_text}
    for _ in range(6):
        c_text = " ".join(perturb(x_tokens))
        if c_text in seen:
            continue
        seen.add(c_text)
        c = tokenize(c_text)
        s = sim(backend, x, c)
        h = float(np.clip(0.85 * s + 0.15 * (1 - ned(x, c)) + rng.uniform(-0.05, 0.05), 0, 1))
        instances.append(EvalInstance(x_text, c_text, h, ref))
bench = Benchmark(tuple(instances), name="demo")
human = bench.human_scores()
print(f"benchmark: {len(bench)} instances over {bench.num_groups} inputs")

# Overall correlation per metric, reference-based vs reference-free.
def vector(metric_id, fn):
    return ScoreVector(metric_id, np.array([fn(i) for i in bench.instances]))

tok = bench.tokenized
metrics = {
    "rouge1":        vector("rouge1", lambda i: rouge(tok(i.candidate_text), tok(i.reference_text), "R1").f1),
    "rouge1.free":   vector("rouge1.free", lambda i: rouge(tok(i.candidate_text), tok(i.input_text), "R1").f1),
    "bertscore":     vector("bertscore", lambda i: sim(backend, tok(i.reference_text), tok(i.candidate_text))),
    "bertscore.free": vector("bertscore.free", lambda i: sim(backend, tok(i.input_text), tok(i.candidate_text))),
}
for metric_id, vec in metrics.items():
    report = correlation_report(metric_id, vec, human)
    print(f"{metric_id:15s} pearson={report.pearson:+.3f} spearman={report.spearman:+.3f}")

free_based_gap = delta_free_vs_based(
    [correlation_report("f", metrics["rouge1.free"], human),
     correlation_report("f", metrics["bertscore.free"], human)],
    [correlation_report("b", metrics["rouge1"], human),
     correlation_report("b", metrics["bertscore"], human)],
)
print("avg free-based gap:", round(free_based_gap, 4))

# Correlation sliced by input-candidate distance quartile. On real data
# this exposes how metric reliability shifts as candidates drift from
# their anchor text; here it simply demonstrates the slicing machinery.
dist_xc = vector("ned", lambda i: ned(tok(i.input_text), tok(i.candidate_text)))
print("\nrouge1.free by distance quartile:")
for group in quartile_groups(bench, dist_xc, dist_key="to_input"):
    idx = list(group.instance_indices)
    r = pearson(metrics["rouge1.free"].values[idx], human[idx])
    print(f"  group {group.group_index}: dist [{group.min_dist:.2f}, {group.max_dist:.2f}] "
          f"n={len(idx)} pearson={r:+.3f}")

# The two-case partition: candidates lexically closer to the reference
# versus closer to the input.
dist_cr = vector("ned.cr", lambda i: ned(tok(i.reference_text), tok(i.candidate_text)))
partition = case_partition(bench, dist_cr, dist_xc)
print(f"\ncase proportions: closer-to-reference {partition.proportions[0]:.1%}, "
      f"closer-to-input {partition.proportions[1]:.1%}")

# Extend the benchmark with zero-scored verbatim copies, then tune omega on
# a dev split; the tuned composite beats raw similarity.
extended = extend_benchmark(bench, fraction=0.2, seed=1)
dev, test = split_dev_test(extended, SplitConfig(dev_fraction=0.10, seed=2))
omega, dev_value = tune_omega(dev, config)
print(f"\ntuned omega={omega:.2f} (dev pearson {dev_value:.3f})")

test_human = test.human_scores()
sims = np.array([sim(backend, tok(i.input_text), tok(i.candidate_text)) for i in test.instances])
tuned = np.array([
    parascore_free(tok(i.input_text), tok(i.candidate_text),
                   ParaScoreConfig(omega=omega, sim_backend=backend)).total
    for i in test.instances
])
print(f"test pearson: bare sim {pearson(sims, test_human):+.3f}  "
      f"tuned composite {pearson(tuned, test_human):+.3f}")
