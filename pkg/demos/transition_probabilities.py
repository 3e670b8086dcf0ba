"""Closed-form class-transition probabilities for a uniform random flip."""

from flip754 import (
    BINARY16,
    BINARY32,
    BINARY64,
    BucketConvention,
    FpClass,
    decimal_str,
    interval_probabilities,
    transition_matrix,
)

CLASSES = [FpClass.NORMALIZED, FpClass.DENORMALIZED, FpClass.NAN, FpClass.INF]

# ── the binary64 transition matrix ────────────────────────────────────────

# Pick a word uniformly from the source class, flip one uniformly random
# bit: these are the probabilities of landing in each class.

m = transition_matrix(BINARY64)
print("binary64, P(source class -> result class):\n")
print(f"{'':>14s}" + "".join(f"{c.value:>14s}" for c in CLASSES))
for src in CLASSES:
    row = "".join(f"{decimal_str(m.entry(src, dst), 5):>14s}" for dst in CLASSES)
    print(f"{src.value:>14s}" + row)

# Normalized words almost always stay normalized: only an exponent flip
# can change their class, the exponent is 11 of 64 bits, and only the
# step to or from the all-ones code escapes.  The NaN -> Inf entry is
# the rarest move of all: the fraction must be exactly one set bit.
escape = m.entry(FpClass.NORMALIZED, FpClass.DENORMALIZED)
print(f"\nnormalized escape probability per flip: {decimal_str(escape, 5)}"
      f" = {escape}")

# ── how the matrix moves with the format ──────────────────────────────────

print("\nP(normalized stays normalized), across formats:")
for fmt in (BINARY16, BINARY32, BINARY64):
    stay = transition_matrix(fmt).entry(FpClass.NORMALIZED, FpClass.NORMALIZED)
    print(f"  {fmt.name:>8s}: {decimal_str(stay, 7)}")

# ── relative-error magnitude buckets ──────────────────────────────────────

# For a normalized source, the closed forms also give the chance that
# the relative error is large (>= 1), moderate, or small (<= 1/2).

print("\nbinary64 error-magnitude buckets (normalized source):")
p = interval_probabilities(BINARY64, BucketConvention.MERGED)
for name, q in (
    ("error >= 1 (or non-finite)", p.ge_one),
    ("1/2 < error < 1", p.between_half_and_one),
    ("error <= 1/2", p.le_half),
):
    print(f"  {name:>27s}: {decimal_str(q, 5):>9s}  = {q}")
assert p.ge_one + p.between_half_and_one + p.le_half == 1
print("  (the three rationals sum to exactly 1)")

s = interval_probabilities(BINARY64, BucketConvention.SEPARATED)
print(f"\nseparated convention keeps non-finite flips apart: "
      f"{decimal_str(s.nonfinite, 5)} of all flips")
