"""The distribution of the relative error of one flip on a normalized word."""

from fractions import Fraction

from flip754 import (
    BINARY64,
    cdf_dyadic,
    decimal_str,
    decimal_threshold_bounds,
    floor_log2,
    tolerance_table,
)

# ── the dyadic CDF ────────────────────────────────────────────────────────

# At powers of two the distribution collapses to a word-independent
# closed form: Pr(error <= 2^-i) = (w_f + 1 - i) / W for i in 2..w_f.
# Only fraction flips produce errors this small, and exactly w_f + 1 - i
# of the 64 bit positions qualify, whatever the word.

print("binary64, Pr(relative error <= 2^-i):\n")
for i in (2, 8, 16, 24, 32, 40, 48, 52):
    q = cdf_dyadic(BINARY64, i)
    bar = "#" * round(40 * float(q))
    print(f"  i={i:2d}  {str(q):>6s}  {decimal_str(q, 5):>8s}  {bar}")

# ── bracketing a decimal tolerance ────────────────────────────────────────

# Decimal tolerances like 10^-6 fall between two dyadic levels, so the
# exact closed form brackets them from both sides.

tol = Fraction(1, 10**6)
tb = decimal_threshold_bounds(BINARY64, tol)
print(f"\ntolerance 1e-6 sits between 2^-{tb.i_lower} and 2^-{tb.i_upper}"
      f" (floor(log2(1e6)) = {floor_log2(Fraction(10**6))})")
print(f"  {tb.lower} = {decimal_str(tb.lower, 5)}"
      f"  <=  Pr(error <= 1e-6)  <=  {tb.upper} = {decimal_str(tb.upper, 5)}")

# ── a survivability table ─────────────────────────────────────────────────

# Read: if a computation tolerates a relative error up to 10^-m, this is
# the chance that one random flip in one binary64 word stays tolerable.

print("\ntolerance     bracket of Pr(error <= tolerance)")
for row in tolerance_table(BINARY64):
    power = len(str(row.tolerance.denominator)) - 1
    print(f"  10^-{power:<3d}     [{decimal_str(row.lower, 5):>8s},"
          f" {decimal_str(row.upper, 5):>8s}]"
          f"   = [{row.lower}, {row.upper}]")

# Even a picky tolerance of 10^-15 is met by roughly one flip in
# twenty: the 52-entry fraction gives low-order flips plenty of room.
