# Semantic similarity through pluggable embedding providers: the
# deterministic fallback (no model, no network), an embedding file, and the
# greedy token-matching score with optional idf weighting.

import numpy as np

from paraeval import (
    Benchmark,
    EvalInstance,
    SimilarityBackendDescriptor,
    build_idf,
    embed,
    greedy_match_score,
    sim,
    tokenize,
)

fallback = SimilarityBackendDescriptor()  # deterministic_fallback, greedy_f1

a = tokenize("the committee approved the new budget")
b = tokenize("the panel signed off on the budget")

# Every token maps to a fixed unit vector derived from a seeded hash, so the
# whole pipeline is reproducible without any model.
emb = embed(fallback, a)
print("embedding matrix:", emb.matrix.shape, "row norms:", np.linalg.norm(emb.matrix, axis=1)[:3])

score = greedy_match_score(embed(fallback, b), embed(fallback, a))
print(f"greedy match: P={score.precision:.3f} R={score.recall:.3f} F1={score.f1:.3f}")

print("sim greedy_f1       :", round(sim(fallback, a, b), 4))
pooled = SimilarityBackendDescriptor(sentence_sim_mode="mean_pool_cosine")
print("sim mean_pool_cosine:", round(sim(pooled, a, b), 4))
print("sim self            :", round(sim(fallback, a, a), 4))

# Idf weighting: tokens that appear in every source sentence stop mattering.
instances = tuple(
    EvalInstance(text, f"candidate {i}", 0.5)
    for i, text in enumerate(
        ["the cat sat", "the dog ran", "the bird flew", "the fish swam"]
    )
)
table = build_idf(Benchmark(instances), source="inputs")
print("idf('the') =", round(table.weight("the"), 4), " idf('cat') =", round(table.weight("cat"), 4))

x = tokenize("the cat sat")
c = tokenize("the dog sat")
plain = sim(fallback, x, c)
weighted = sim(fallback, x, c, idf=table)
print("sim unweighted:", round(plain, 4), " idf-weighted:", round(weighted, 4))

# A file provider serves fixed vectors; the first line is the dimension,
# then one "token v1 .. vdim" record per line. A <unk> row, when present,
# covers out-of-vocabulary tokens.
with open("/tmp/demo_embeddings.txt", "w", encoding="utf-8") as fh:
    fh.write("4\n")
    fh.write("cat 1 0 0 0\n")
    fh.write("dog 0.9 0.1 0 0\n")
    fh.write("car 0 0 1 0\n")
    fh.write("<unk> 0 0 0 1\n")
file_backend = SimilarityBackendDescriptor(
    provider="embedding_file", endpoint_or_path="/tmp/demo_embeddings.txt"
)
print("file sim(cat, dog):", round(sim(file_backend, tokenize("cat"), tokenize("dog")), 4))
print("file sim(cat, car):", round(sim(file_backend, tokenize("cat"), tokenize("car")), 4))
