# Surface-overlap metrics on a few sentence pairs: BLEU, SelfBLEU, iBLEU,
# ROUGE variants, edit distance, and normalized edit distance (NED).

from paraeval import (
    BleuConfig,
    UNSMOOTHED,
    bleu,
    edit_distance,
    ibleu,
    ned,
    rouge,
    self_bleu,
    tokenize,
)

x = tokenize("the cat sat on the mat")            # input sentence
r = tokenize("a cat was sitting on the mat")      # human reference
c = tokenize("a cat sat upon the mat")            # candidate paraphrase

print("tokens:", c.tokens)

# Sentence BLEU against the reference. The default config smooths each
# modified precision with add-1, so sparse overlaps stay above zero;
# UNSMOOTHED reproduces the classical hard-zero scores.
print("bleu (smoothed)  :", round(bleu(c, r), 4))
print("bleu (unsmoothed):", round(bleu(c, r, UNSMOOTHED), 4))
print("bleu max_n=2     :", round(bleu(c, r, BleuConfig(max_n=2)), 4))

# SelfBLEU scores the candidate against the *input*: high SelfBLEU means the
# candidate copied the input. iBLEU subtracts a slice of it from BLEU.
print("self_bleu        :", round(self_bleu(c, x), 4))
print("ibleu alpha=0.3  :", round(ibleu(c, r, x, alpha=0.3), 4))

# A verbatim copy maximizes SelfBLEU and gets punished by iBLEU.
copy = tokenize("the cat sat on the mat")
print("copy self_bleu   :", self_bleu(copy, x))
print("copy ibleu       :", round(ibleu(copy, r, x, alpha=0.3), 4))

# ROUGE returns precision/recall/F1; pick the component you need.
for variant in ("R1", "R2", "RL"):
    score = rouge(c, r, variant)
    print(f"rouge {variant}: P={score.precision:.3f} R={score.recall:.3f} F1={score.f1:.3f}")

# Edit distance works on any token sequence; character tokens give the
# classic string distance.
a = tokenize("kitten", "character")
b = tokenize("sitting", "character")
print("edit_distance(kitten, sitting):", edit_distance(a, b))
print("ned(kitten, sitting)          :", round(ned(a, b), 4))

# Word-level NED between input and candidate, the distance ParaScore uses.
print("ned(input, candidate)         :", round(ned(x, c), 4))
