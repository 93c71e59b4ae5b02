# The ParaScore family: the sectional divergence transform, the
# reference-based and reference-free composites, the copy penalty, and the
# harmonic-mean alternative (BERT-iBLEU) with its decomposition.

from paraeval import (
    ParaScoreConfig,
    UNSMOOTHED,
    bert_ibleu,
    ds,
    mix_term,
    parascore,
    parascore_free,
    tokenize,
)

# The divergence transform rewards rewording linearly up to gamma, then
# saturates: beyond the knee, more distance stops helping.
print("d    ->  ds(d, 0.35)")
for d in (0.0, 0.1, 0.2, 0.35, 0.5, 0.8, 1.0):
    print(f"{d:4.2f} -> {ds(d, 0.35):+.4f}")

config = ParaScoreConfig(omega=0.05, gamma=0.35)
x = tokenize("the committee approved the new budget")
r = tokenize("the panel signed off on the budget plan")
c = tokenize("the committee gave the budget its approval")

based = parascore(x, r, c, config)
free = parascore_free(x, c, config)
print("\nreference-based :", round(based.total, 4),
      f"(sim={based.sim_component:.4f} from {based.which_sim}, ds={based.ds_component:+.4f})")
print("reference-free  :", round(free.total, 4))

# Copying the input maximizes similarity but lands on ds = -1, so the copy
# loses to any sufficiently reworded candidate with the same similarity.
copy = parascore_free(x, x, config)
print("\nverbatim copy   :", round(copy.total, 4), "(sim 1.0, ds -1.0)")
shuffled = tokenize(" ".join(reversed(x.tokens)))
reworded = parascore_free(x, shuffled, config)
print("same words shuffled:", round(reworded.total, 4),
      f"(gap = omega*(1+gamma) = {config.omega * (1 + config.gamma):.4f})")

# BERT-iBLEU composes similarity with 1 - SelfBLEU through a weighted
# harmonic mean instead of an additive divergence term.
print("\nbert-ibleu(beta=4):", round(bert_ibleu(x, c, 4.0, config.sim_backend), 4))
print("bert-ibleu of copy:", bert_ibleu(x, x, 4.0, config.sim_backend, UNSMOOTHED))

# The harmonic mean decomposes into Sim plus a residual mix term; the
# residual is what the composite adds beyond raw similarity.
s, d = 0.8, 0.5
for beta in (1, 4, 10):
    closed = (beta + 1.0) / (beta / s + 1.0 / d)
    print(f"beta={beta:>2}: sim + mix = {s + mix_term(s, d, beta):.6f}  harmonic mean = {closed:.6f}")
