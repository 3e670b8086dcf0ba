"""What one flipped bit does to a binary64 word, field by field."""

from flip754 import (
    BINARY64,
    check_bounds,
    classify,
    decode_fields,
    locus_of_bit,
    relative_error,
    transition,
    word_from_float,
)

w = word_from_float(1.0)
s, e, f = decode_fields(w)
print(f"start: {w.hex()}  class={classify(w).value}  s={s} e={e} f={f}")
print(f"layout: bit 63 = sign, bits 62..52 = exponent, bits 51..0 = fraction")
print()

# ── one flip per field kind ───────────────────────────────────────────────

for bit in (63, 51, 40, 0, 52, 61, 62):
    locus = locus_of_bit(BINARY64, bit)
    rec = transition(w, bit)
    err = relative_error(w, bit)
    value = "non-finite" if err.value is None else f"{float(err.value):.6g}"
    print(
        f"bit {bit:2d} ({locus.field.value}[{locus.index}]): "
        f"{rec.before.hex()} -> {rec.after.hex()}  "
        f"{rec.class_before.value} -> {rec.class_after.value}  "
        f"error {value}"
    )

# ── the same flips, judged against the closed-form bounds ─────────────────

print()
for bit in (63, 51, 40, 52):
    chk = check_bounds(w, bit)
    iv = chk.interval
    if iv is None:
        shape = "(no finite bound)"
    elif iv.exact_point is not None:
        shape = f"exactly {iv.exact_point}"
    else:
        left = "(" if iv.lower_open else "["
        right = ")" if iv.upper_open else "]"
        shape = f"in {left}{iv.lower}, {iv.upper}{right}"
    print(f"bit {bit:2d}: status={chk.status.value:13s} predicted {shape}")

# A sign flip is always a relative error of exactly 2: the value moves
# to its own negation, |x - (-x)| / |x| = 2.  Fraction flips shrink
# geometrically with the entry index.  Exponent flips are the violent
# ones: 1.0 has every exponent entry but the first set, so its exponent
# flips either collapse toward zero or leave the finite range, while a
# clear entry, like entry 2 of the word for 2.0, flips upward and
# multiplies the value by 2^512.
big = relative_error(word_from_float(2.0), 61).value
print(f"\nup-flip of exponent entry 2 of 2.0: error 2^512 - 1, "
      f"{len(str(big.numerator))} decimal digits")
