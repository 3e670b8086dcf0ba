"""Parameterized binary floating-point formats and exact word decoding.

A word is a W-bit pattern (W = 1 + exponent_bits + fraction_bits, W <= 64)
interpreted as sign / biased exponent / fraction.  Everything here is exact:
decoded values are integers scaled by powers of two, never host floats.
The flagship instance is binary64; small formats (down to W = 4) exist so
that closed-form results can be checked by exhaustive enumeration.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .rationals import floor_log2 as _floor_log2

__all__ = [
    "FpFormat",
    "Word",
    "FpClass",
    "Field",
    "FieldLocus",
    "ExactValue",
    "ValueKind",
    "BINARY16",
    "BINARY32",
    "BINARY64",
    "decode_fields",
    "recompose",
    "classify",
    "decode_value",
    "locus_of_bit",
    "bit_of_locus",
    "first_nonzero_fraction_entry",
    "class_size",
    "parse_hex_word",
    "word_from_float",
    "word_to_float",
    "encode_nearest",
]


# ── Format ───────────────────────────────────────────────────────


@dataclass(frozen=True)
class FpFormat:
    """Bit layout of a binary floating-point format: 1 + w_e + w_f bits."""

    exponent_bits: int
    fraction_bits: int

    def __post_init__(self):
        if self.exponent_bits < 2:
            raise ValueError("exponent field needs at least 2 bits")
        if self.fraction_bits < 1:
            raise ValueError("fraction field needs at least 1 bit")
        if self.total_bits > 64:
            raise ValueError("words wider than 64 bits are not supported")

    @property
    def total_bits(self) -> int:
        return 1 + self.exponent_bits + self.fraction_bits

    @property
    def bias(self) -> int:
        return (1 << (self.exponent_bits - 1)) - 1

    @property
    def exponent_all_ones(self) -> int:
        return (1 << self.exponent_bits) - 1

    @property
    def fraction_mask(self) -> int:
        return (1 << self.fraction_bits) - 1

    @property
    def word_mask(self) -> int:
        return (1 << self.total_bits) - 1

    @property
    def hex_digits(self) -> int:
        return -(-self.total_bits // 4)

    @property
    def name(self) -> str:
        for label, fmt in _STANDARD.items():
            if fmt == self:
                return label
        return f"{self.exponent_bits},{self.fraction_bits}"

    def word(self, bits: int) -> Word:
        return Word(bits, self)


BINARY16 = FpFormat(5, 10)
BINARY32 = FpFormat(8, 23)
BINARY64 = FpFormat(11, 52)

_STANDARD = {"binary64": BINARY64, "binary32": BINARY32, "binary16": BINARY16}


# ── Word ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Word:
    """A W-bit pattern under a format.  Pure value; no hidden state."""

    bits: int
    fmt: FpFormat

    def __post_init__(self):
        if not 0 <= self.bits <= self.fmt.word_mask:
            raise ValueError(
                f"bit pattern 0x{self.bits:X} does not fit in "
                f"{self.fmt.total_bits} bits"
            )

    def hex(self) -> str:
        return f"0x{self.bits:0{self.fmt.hex_digits}X}"

    def __str__(self) -> str:
        return self.hex()


class FpClass(Enum):
    """Word class.  +-0 counts as denormalized (zero fraction, zero exponent)."""

    NORMALIZED = "normalized"
    DENORMALIZED = "denormalized"
    NAN = "nan"
    INF = "inf"


class Field(Enum):
    SIGN = "s"
    EXPONENT = "e"
    FRACTION = "f"


@dataclass(frozen=True)
class FieldLocus:
    """A field plus a 1-based in-field index; index 1 is the field's MSB.

    With this convention a fraction flip at index k changes the stored
    significand by 2^-k (times the scale), and an exponent flip at index k
    changes the biased exponent by 2^(w_e - k).
    """

    field: Field
    index: int = 0

    @classmethod
    def sign(cls) -> FieldLocus:
        return cls(Field.SIGN)

    @classmethod
    def exponent(cls, k: int) -> FieldLocus:
        return cls(Field.EXPONENT, k)

    @classmethod
    def fraction(cls, k: int) -> FieldLocus:
        return cls(Field.FRACTION, k)

    def __str__(self) -> str:
        if self.field is Field.SIGN:
            return "s"
        return f"{self.field.value}({self.index})"


# ── Exact decoded values ─────────────────────────────────────────


class ValueKind(Enum):
    FINITE = "finite"
    INF = "inf"
    NAN = "nan"


@dataclass(frozen=True)
class ExactValue:
    """Decoded value: sign * significand * 2^scale, or NaN / +-Inf.

    significand and scale are meaningful only for kind FINITE;
    significand 0 encodes +-0 (sign still tracked).
    """

    kind: ValueKind
    sign: int = 1
    significand: int = 0
    scale: int = 0

    @property
    def is_finite(self) -> bool:
        return self.kind is ValueKind.FINITE

    @property
    def is_zero(self) -> bool:
        return self.kind is ValueKind.FINITE and self.significand == 0

    def as_fraction(self) -> Fraction:
        if not self.is_finite:
            raise ValueError(f"{self.kind.value} has no rational value")
        if self.scale >= 0:
            return Fraction(self.sign * self.significand << self.scale)
        return Fraction(self.sign * self.significand, 1 << -self.scale)

    def __str__(self) -> str:
        if self.kind is ValueKind.NAN:
            return "nan"
        if self.kind is ValueKind.INF:
            return "+inf" if self.sign > 0 else "-inf"
        if self.significand == 0:
            return "0" if self.sign > 0 else "-0"
        return str(self.as_fraction())


# ── Decoding operations ──────────────────────────────────────────


def decode_fields(w: Word) -> tuple[int, int, int]:
    """Split a word into (sign bit, biased exponent, fraction) integers."""
    fmt = w.fmt
    f = w.bits & fmt.fraction_mask
    e = (w.bits >> fmt.fraction_bits) & fmt.exponent_all_ones
    s = w.bits >> (fmt.total_bits - 1)
    return s, e, f


def recompose(fmt: FpFormat, s: int, e: int, f: int) -> Word:
    """Inverse of decode_fields."""
    if s >> 1 or e > fmt.exponent_all_ones or f > fmt.fraction_mask:
        raise ValueError("field value out of range for format")
    return Word((s << (fmt.total_bits - 1)) | (e << fmt.fraction_bits) | f, fmt)


def classify(w: Word) -> FpClass:
    """Class of a word; all-ones exponent gives NaN/Inf, all-zeros denormal."""
    _, e, f = decode_fields(w)
    if e == w.fmt.exponent_all_ones:
        return FpClass.NAN if f != 0 else FpClass.INF
    if e == 0:
        return FpClass.DENORMALIZED
    return FpClass.NORMALIZED


def decode_value(w: Word) -> ExactValue:
    """Exact decoded value of a word.

    Normalized: (-1)^s (2^w_f + f) 2^(e - bias - w_f).
    Denormalized: (-1)^s f 2^(1 - bias - w_f).
    """
    fmt = w.fmt
    s, e, f = decode_fields(w)
    sign = -1 if s else 1
    if e == fmt.exponent_all_ones:
        kind = ValueKind.NAN if f != 0 else ValueKind.INF
        return ExactValue(kind, sign)
    if e == 0:
        return ExactValue(ValueKind.FINITE, sign, f, 1 - fmt.bias - fmt.fraction_bits)
    return ExactValue(
        ValueKind.FINITE,
        sign,
        (1 << fmt.fraction_bits) | f,
        e - fmt.bias - fmt.fraction_bits,
    )


def locus_of_bit(fmt: FpFormat, pos: int) -> FieldLocus:
    """Map an absolute bit position (0 = LSB) to its field locus."""
    if not 0 <= pos < fmt.total_bits:
        raise ValueError(f"bit position {pos} outside [0, {fmt.total_bits})")
    if pos == fmt.total_bits - 1:
        return FieldLocus.sign()
    if pos >= fmt.fraction_bits:
        return FieldLocus.exponent(fmt.total_bits - 1 - pos)
    return FieldLocus.fraction(fmt.fraction_bits - pos)


def bit_of_locus(fmt: FpFormat, locus: FieldLocus) -> int:
    """Inverse of locus_of_bit."""
    if locus.field is Field.SIGN:
        return fmt.total_bits - 1
    if locus.field is Field.EXPONENT:
        if not 1 <= locus.index <= fmt.exponent_bits:
            raise ValueError(f"exponent index {locus.index} out of range")
        return fmt.total_bits - 1 - locus.index
    if not 1 <= locus.index <= fmt.fraction_bits:
        raise ValueError(f"fraction index {locus.index} out of range")
    return fmt.fraction_bits - locus.index


def first_nonzero_fraction_entry(w: Word) -> int | None:
    """1-based index (MSB first) of the first set fraction bit, None if f = 0."""
    _, _, f = decode_fields(w)
    if f == 0:
        return None
    return w.fmt.fraction_bits - f.bit_length() + 1


def class_size(fmt: FpFormat, cls: FpClass) -> int:
    """Exact number of bit patterns in a class."""
    if cls is FpClass.NORMALIZED:
        return 2 * ((1 << fmt.exponent_bits) - 2) * (1 << fmt.fraction_bits)
    if cls is FpClass.DENORMALIZED:
        return 2 * (1 << fmt.fraction_bits)
    if cls is FpClass.NAN:
        return 2 * ((1 << fmt.fraction_bits) - 1)
    return 2


# ── Parsing / conversion ─────────────────────────────────────────


def parse_hex_word(fmt: FpFormat, text: str) -> Word:
    """Parse a hex bit pattern ('0x...' prefix required, case-insensitive)."""
    t = text.strip()
    if not t.lower().startswith("0x"):
        raise ValueError(f"hex word must start with 0x: {text!r}")
    try:
        bits = int(t, 16)
    except ValueError:
        raise ValueError(f"not a hex word: {text!r}") from None
    if bits > fmt.word_mask:
        raise ValueError(f"{text!r} does not fit in {fmt.total_bits} bits")
    return Word(bits, fmt)


def word_from_float(x: float) -> Word:
    """binary64 word carrying the bit pattern of a host float."""
    return Word(struct.unpack("<Q", struct.pack("<d", x))[0], BINARY64)


def word_to_float(w: Word) -> float:
    """Host-float value of a binary64 word (bit-exact)."""
    if w.fmt != BINARY64:
        raise ValueError("word_to_float expects a binary64 word")
    return struct.unpack("<d", struct.pack("<Q", w.bits))[0]


def encode_nearest(fmt: FpFormat, magnitude: Fraction, sign_bit: int = 0) -> Word:
    """Round a non-negative rational to the nearest word (ties to even).

    Values beyond the overflow threshold map to Inf.  Exact rational
    arithmetic throughout, so this is correctly rounded for every format,
    including the tiny ones.
    """
    if magnitude < 0:
        raise ValueError("magnitude must be non-negative; pass the sign separately")
    if magnitude == 0:
        return recompose(fmt, sign_bit, 0, 0)

    emax = fmt.exponent_all_ones - 1  # largest finite biased exponent
    # Biased exponent of the value: the e with 2^(e-bias) <= magnitude
    # < 2^(e-bias+1), clamped up to 0 for the subnormal range.
    e = _floor_log2(magnitude) + fmt.bias
    if e < 1:
        e = 0  # subnormal range

    while True:
        # Stored significand = magnitude / 2^(scale); scale as in decode_value.
        scale = (e if e else 1) - fmt.bias - fmt.fraction_bits
        sig = _round_half_even(magnitude * Fraction(2) ** -scale)
        limit = 1 << (fmt.fraction_bits + 1)
        if e == 0 and sig >= limit >> 1:
            e = 1  # rounding promoted a subnormal to the normal range
            continue
        if sig >= limit:
            e += 1  # significand carry
            continue
        break

    if e > emax:
        return recompose(fmt, sign_bit, fmt.exponent_all_ones, 0)
    f = sig & fmt.fraction_mask if e else sig
    return recompose(fmt, sign_bit, e, f)


def _round_half_even(q: Fraction) -> int:
    """Round a non-negative rational to the nearest integer, ties to even."""
    floor = q.numerator // q.denominator
    rem = q - floor
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and floor & 1):
        return floor + 1
    return floor
