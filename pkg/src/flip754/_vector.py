"""Internal numpy kernels shared by the sweep and sampling engines.

Everything here works on uint64 arrays of raw words and stays exact:
field splits and flips are pure bit arithmetic, and msb_index falls back
to Python integers where float64 could misround.  The scalar routines in
`formats` remain the reference semantics; these kernels are checked
against them in the test suite.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .formats import FpClass, FpFormat

# Fixed class order shared by transition matrices, reports, and tallies.
CLASS_ORDER: tuple[FpClass, ...] = (
    FpClass.NORMALIZED,
    FpClass.DENORMALIZED,
    FpClass.NAN,
    FpClass.INF,
)
CLASS_CODE: dict[FpClass, int] = {cls: i for i, cls in enumerate(CLASS_ORDER)}

_U1 = np.uint64(1)


# ── field access ──────────────────────────────────────────────────────────


def split_fields(fmt: FpFormat, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split raw words into (sign, biased exponent, fraction) uint64 arrays."""
    b = np.asarray(bits, dtype=np.uint64)
    w_f = np.uint64(fmt.fraction_bits)
    s = (b >> np.uint64(fmt.total_bits - 1)) & _U1
    e = (b >> w_f) & np.uint64(fmt.exponent_all_ones)
    f = b & np.uint64(fmt.fraction_mask)
    return s, e, f


def classify_codes(fmt: FpFormat, bits: np.ndarray) -> np.ndarray:
    """Class code per word, indexing into CLASS_ORDER."""
    _, e, f = split_fields(fmt, bits)
    top = e == np.uint64(fmt.exponent_all_ones)
    codes = np.full(e.shape, CLASS_CODE[FpClass.NORMALIZED], dtype=np.uint8)
    codes[e == 0] = CLASS_CODE[FpClass.DENORMALIZED]
    codes[top & (f != 0)] = CLASS_CODE[FpClass.NAN]
    codes[top & (f == 0)] = CLASS_CODE[FpClass.INF]
    return codes


def flip_bits(bits: np.ndarray, pos: np.ndarray | int) -> np.ndarray:
    """XOR each word with 1 << pos (pos may be scalar or per-word)."""
    b = np.asarray(bits, dtype=np.uint64)
    p = np.asarray(pos, dtype=np.uint64)
    return b ^ (_U1 << p)


def msb_index(values: np.ndarray) -> np.ndarray:
    """floor(log2(v)) per element for positive values; zeros give -1.

    frexp on float64 is exact below 2^53; wider fractions take the
    slow exact path through Python integers.
    """
    v = np.asarray(values, dtype=np.uint64)
    _, exp = np.frexp(v.astype(np.float64))
    out = exp.astype(np.int64) - 1
    if v.size and int(v.max()) >= (1 << 53):
        big = v >= np.uint64(1 << 53)
        out[big] = [int(x).bit_length() - 1 for x in v[big]]
    return out


# ── class enumeration and sampling ────────────────────────────────────────


def enumerate_class(
    fmt: FpFormat, cls: FpClass, chunk_size: int = 1 << 18
) -> Iterator[np.ndarray]:
    """Yield every word of `cls` in ascending order, in uint64 chunks."""
    w_f = fmt.fraction_bits
    n_frac = 1 << w_f
    top = fmt.exponent_all_ones

    def compose(s: np.ndarray, e: np.ndarray, f: np.ndarray) -> np.ndarray:
        return (
            (s.astype(np.uint64) << np.uint64(fmt.total_bits - 1))
            | (e.astype(np.uint64) << np.uint64(w_f))
            | f.astype(np.uint64)
        )

    if cls is FpClass.NORMALIZED:
        n_exp = top - 1
        total = 2 * n_exp * n_frac
        for start in range(0, total, chunk_size):
            idx = np.arange(start, min(start + chunk_size, total), dtype=np.uint64)
            s = idx // np.uint64(n_exp * n_frac)
            rem = idx % np.uint64(n_exp * n_frac)
            e = np.uint64(1) + rem // np.uint64(n_frac)
            f = rem % np.uint64(n_frac)
            yield compose(s, e, f)
    elif cls is FpClass.DENORMALIZED:
        total = 2 * n_frac
        for start in range(0, total, chunk_size):
            idx = np.arange(start, min(start + chunk_size, total), dtype=np.uint64)
            s = idx // np.uint64(n_frac)
            f = idx % np.uint64(n_frac)
            yield compose(s, np.zeros_like(idx), f)
    elif cls is FpClass.NAN:
        total = 2 * (n_frac - 1)
        for start in range(0, total, chunk_size):
            idx = np.arange(start, min(start + chunk_size, total), dtype=np.uint64)
            s = idx // np.uint64(n_frac - 1)
            f = np.uint64(1) + idx % np.uint64(n_frac - 1)
            yield compose(s, np.full_like(idx, top), f)
    else:
        s = np.array([0, 1], dtype=np.uint64)
        e = np.full(2, top, dtype=np.uint64)
        yield compose(s, e, np.zeros(2, dtype=np.uint64))


def sample_class_bits(
    fmt: FpFormat, cls: FpClass, rng: np.random.Generator, n: int
) -> np.ndarray:
    """Draw n words uniformly from `cls` (draw order: sign, exponent, fraction)."""
    w_f = np.uint64(fmt.fraction_bits)
    shift_s = np.uint64(fmt.total_bits - 1)
    top = np.uint64(fmt.exponent_all_ones)
    s = rng.integers(0, 2, size=n, dtype=np.uint64)
    if cls is FpClass.NORMALIZED:
        e = rng.integers(1, fmt.exponent_all_ones, size=n, dtype=np.uint64)
        f = rng.integers(0, 1 << fmt.fraction_bits, size=n, dtype=np.uint64)
    elif cls is FpClass.DENORMALIZED:
        e = np.zeros(n, dtype=np.uint64)
        f = rng.integers(0, 1 << fmt.fraction_bits, size=n, dtype=np.uint64)
    elif cls is FpClass.NAN:
        e = np.full(n, top, dtype=np.uint64)
        f = rng.integers(1, 1 << fmt.fraction_bits, size=n, dtype=np.uint64)
    else:
        e = np.full(n, top, dtype=np.uint64)
        f = np.zeros(n, dtype=np.uint64)
    return (s << shift_s) | (e << w_f) | f
