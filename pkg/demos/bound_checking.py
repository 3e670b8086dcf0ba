"""Checking every flip's exact error against its closed-form prediction."""

import numpy as np

from flip754 import (
    BINARY64,
    FieldLocus,
    FpClass,
    bounds_sweep,
    check_bounds,
    recompose,
)
from flip754._vector import sample_class_bits

# ── a hundred thousand words, every position ──────────────────────────────

# bounds_sweep flips all 64 positions of each word and checks the exact
# error against the predicted point or interval, with pure integer
# comparisons (no rational arithmetic in the hot path).

rng = np.random.default_rng(1234)
for cls in (FpClass.NORMALIZED, FpClass.DENORMALIZED):
    bits = sample_class_bits(BINARY64, cls, rng, 100_000)
    report = bounds_sweep(BINARY64, bits)
    print(f"{cls.value:>13s}: {report.cases:,} flips checked: "
          f"{report.conforms:,} conform, {report.violations} violate, "
          f"{report.informational:,} informational, "
          f"{report.nonfinite:,} non-finite, {report.undefined:,} undefined")
    assert report.violations == 0

# ── the one informational case ────────────────────────────────────────────

# Exponent flips on nonzero denormals have no exact closed form, only a
# strict one-sided floor: the error always exceeds 2^(2^place) - 1.
# check_bounds reports these as informational and quantifies the excess.

w = recompose(BINARY64, 0, 0, 3)  # the denormal 3 * 2^-1074
chk = check_bounds(w, 52)  # flip the lowest exponent entry
assert chk.status.value == "informational"
print(f"\ndenormal {w.hex()} with exponent entry 11 flipped:")
print(f"  floor 2^(2^0) - 1 = {chk.reference}")
print(f"  exact error       = {chk.error.value}")
print(f"  excess            = {chk.deviation} (always > 0)")

# For comparison, the same entry on a normalized word has an exact
# prediction, so the check conforms with zero deviation.
one = recompose(BINARY64, 0, 1023, 0)
chk = check_bounds(one, 52)
locus = FieldLocus.exponent(11)
print(f"\nnormalized 1.0, same entry ({locus.field.value}[{locus.index}]): "
      f"status={chk.status.value}, predicted exactly {chk.interval.exact_point}")
