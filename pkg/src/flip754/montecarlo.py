"""Sampling campaigns and exhaustive censuses of single bit flips.

Two empirical engines back the closed forms in `analytic`:

* `exhaustive_census` enumerates every (word, position) pair of one
  class of a small format (at most 24 bits) and tallies outcomes with
  exact integer logic, so its frequencies must equal the closed forms
  as rationals, not merely approximate them;
* `run_campaign` samples words and positions uniformly at random.
  Sampling is chunked, and each fixed-size chunk derives its generator
  from SeedSequence((seed, chunk_index)), so a campaign's tallies are
  bit-identical across reruns and across worker counts.

`compare` judges either engine's tallies against the closed forms:
exact rational equality for a census, a binomial z-test for a campaign.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from ._vector import (
    CLASS_CODE,
    CLASS_ORDER,
    classify_codes,
    enumerate_class,
    flip_bits,
    msb_index,
    sample_class_bits,
    split_fields,
)
from .analytic import (
    BucketConvention,
    TransitionMatrix,
    cdf_dyadic,
    interval_probabilities,
)
from .formats import FpClass, FpFormat, Word, class_size
from .rationals import ratio_str

__all__ = [
    "CampaignConfig",
    "FlipTally",
    "CampaignReport",
    "CensusReport",
    "ComparisonCell",
    "ComparisonReport",
    "sample_word",
    "run_campaign",
    "exhaustive_census",
    "compare",
]

REPORT_SCHEMA = "flip754/report-v1"

_U1 = np.uint64(1)
_U63 = np.uint64(63)

# Bucket slots used by the tally engine.
_GE_ONE, _BETWEEN, _LE_HALF, _NONFINITE, _UNDEFINED = range(5)


# ── tallies ───────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class FlipTally:
    """Raw outcome counts over a set of flip trials.

    `transitions` is indexed by CLASS_ORDER twice.  `buckets` holds the
    relative-error counts (at least 1; strictly between 1/2 and 1; at
    most 1/2; non-finite result; undefined source).  `dyadic[i]` counts
    finite errors whose largest dyadic level is exactly 2^-i.
    """

    transitions: tuple[tuple[int, ...], ...]
    buckets: tuple[int, int, int, int, int]
    dyadic: tuple[int, ...]

    def transition(self, src: FpClass, dst: FpClass) -> int:
        return self.transitions[CLASS_CODE[src]][CLASS_CODE[dst]]

    def cdf_count(self, i: int) -> int:
        """Number of trials with relative error at most 2^-i."""
        return sum(self.dyadic[i:])

    def bucket_view(self, convention: BucketConvention) -> dict[str, int]:
        """Bucket counts under a convention; keys match IntervalProbabilities."""
        b = self.buckets
        if convention is BucketConvention.MERGED:
            return {
                "ge_one": b[_GE_ONE] + b[_NONFINITE],
                "between_half_and_one": b[_BETWEEN],
                "le_half": b[_LE_HALF],
            }
        return {
            "ge_one": b[_GE_ONE],
            "between_half_and_one": b[_BETWEEN],
            "le_half": b[_LE_HALF],
            "nonfinite": b[_NONFINITE],
        }


class _MutableTally:
    def __init__(self, fmt: FpFormat) -> None:
        self.trans = np.zeros((4, 4), dtype=np.int64)
        self.buckets = np.zeros(5, dtype=np.int64)
        self.dyadic = np.zeros(fmt.fraction_bits + 1, dtype=np.int64)

    def merge(self, other: "_MutableTally") -> None:
        self.trans += other.trans
        self.buckets += other.buckets
        self.dyadic += other.dyadic

    def freeze(self) -> FlipTally:
        return FlipTally(
            transitions=tuple(tuple(int(c) for c in row) for row in self.trans),
            buckets=tuple(int(c) for c in self.buckets),
            dyadic=tuple(int(c) for c in self.dyadic),
        )


def _accumulate(
    fmt: FpFormat, bits: np.ndarray, pos: np.ndarray | int, tally: _MutableTally
) -> None:
    """Tally class transitions and error buckets for one batch of flips.

    Pure integer logic throughout, so census counts are exact.  `pos`
    may be a scalar (census: one position for the whole batch) or a
    per-word array (campaign).
    """
    b = np.asarray(bits, dtype=np.uint64)
    p = np.asarray(pos, dtype=np.uint64)
    if p.ndim == 0:
        p = np.broadcast_to(p, b.shape)
    w_e, w_f, w = fmt.exponent_bits, fmt.fraction_bits, fmt.total_bits

    _, e, f = split_fields(fmt, b)
    codes = classify_codes(fmt, b)
    flipped = flip_bits(b, p)
    _, e2, _ = split_fields(fmt, flipped)
    codes2 = classify_codes(fmt, flipped)

    pair = codes.astype(np.int64) * 4 + codes2
    tally.trans += np.bincount(pair, minlength=16).reshape(4, 4)

    norm = codes == CLASS_CODE[FpClass.NORMALIZED]
    den = codes == CLASS_CODE[FpClass.DENORMALIZED]
    f_nz = f != 0
    den_nz = den & f_nz
    finite_src = norm | den_nz

    bucket = np.full(b.shape, _UNDEFINED, dtype=np.uint8)
    m = np.zeros(b.shape, dtype=np.int64)  # largest dyadic level, 0 = none
    p_i = p.astype(np.int64)

    sign_pos = p_i == w - 1
    frac_pos = p_i < w_f
    exp_pos = ~sign_pos & ~frac_pos

    # Sign flip: error exactly 2 for any finite nonzero source.
    bucket[sign_pos & finite_src] = _GE_ONE

    # Normalized fraction flip: error in (2^-(k+1), 2^-k] with k = w_f - pos,
    # so the largest dyadic level is exactly k.
    nf = frac_pos & norm
    bucket[nf] = _LE_HALF
    m[nf] = w_f - p_i[nf]

    # Denormal fraction flip: error is exactly 2^pos / f.
    df = frac_pos & den_nz
    bit_value = _U1 << np.minimum(p, _U63)
    ge = df & (bit_value >= f)
    le = df & ((_U1 << np.minimum(p + _U1, _U63)) <= f)
    bucket[ge] = _GE_ONE
    bucket[le] = _LE_HALF
    bucket[df & ~ge & ~le] = _BETWEEN
    lead = msb_index(f)
    m[le] = (lead - p_i)[le]

    # Exponent flips.  `place` is the entry's position within the biased
    # exponent; its value there is 2^place.
    place = np.clip(p_i - w_f, 0, None).astype(np.uint64)
    up = exp_pos & (((e >> place) & _U1) == 0)
    down = exp_pos & ~up

    # Normalized, 0 to 1: error 2^(2^place) - 1 >= 1, unless the word
    # leaves the finite range entirely.
    ne_up = up & norm
    lands_nonfinite = ne_up & (codes2 >= 2)
    bucket[lands_nonfinite] = _NONFINITE
    bucket[ne_up & ~lands_nonfinite] = _GE_ONE

    # Normalized, 1 to 0, still normalized: error 1 - 2^-(2^place),
    # exactly 1/2 at the lowest entry and in (1/2, 1) above it.
    nd = down & norm
    nd_norm = nd & (e2 > 0)
    low = nd_norm & (place == 0)
    bucket[low] = _LE_HALF
    m[low] = 1
    bucket[nd_norm & (place > 0)] = _BETWEEN

    # Normalized, 1 to 0, into the denormals: error 1 - (f / M) 2^(1 - e)
    # is exactly 1 on a zero fraction and in (1/2, 1) otherwise.
    nd_den = nd & (e2 == 0)
    bucket[nd_den & ~f_nz] = _GE_ONE
    bucket[nd_den & f_nz] = _BETWEEN

    # Nonzero denormal exponent flip: error > 2^(2^place) - 1 >= 1.
    bucket[exp_pos & den_nz] = _GE_ONE

    tally.buckets += np.bincount(bucket, minlength=5)
    mm = m[m > 0]
    if mm.size:
        tally.dyadic += np.bincount(mm, minlength=w_f + 1)


# ── campaigns ─────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CampaignConfig:
    """Parameters of one sampling campaign.

    `chunk_size` is part of the sampling scheme: chunk c of a campaign
    draws from SeedSequence((seed, c)), so identical (seed, chunk_size,
    sample_count) give identical tallies regardless of worker count.
    """

    fmt: FpFormat
    source_class: FpClass
    sample_count: int
    seed: int
    convention: BucketConvention = BucketConvention.MERGED
    chunk_size: int = 65536

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")


@dataclass(frozen=True)
class CampaignReport:
    """Tallies of one campaign; `cases` equals the configured sample count."""

    config: CampaignConfig
    tally: FlipTally

    @property
    def fmt(self) -> FpFormat:
        return self.config.fmt

    @property
    def source_class(self) -> FpClass:
        return self.config.source_class

    @property
    def convention(self) -> BucketConvention:
        return self.config.convention

    @property
    def cases(self) -> int:
        return self.config.sample_count

    def to_payload(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "kind": "campaign",
            "source_class": self.source_class.value,
            "sample_count": self.cases,
            "seed": self.config.seed,
            "chunk_size": self.config.chunk_size,
            "convention": self.convention.value,
            **_tally_payload(self.tally, self.convention),
        }


def sample_word(fmt: FpFormat, cls: FpClass, rng: np.random.Generator) -> Word:
    """Draw one word uniformly from a class (draws sign, exponent, fraction)."""
    return Word(int(sample_class_bits(fmt, cls, rng, 1)[0]), fmt)


def run_campaign(config: CampaignConfig, workers: int = 1) -> CampaignReport:
    """Run a seeded sampling campaign of uniform (word, position) flips.

    Work is split into fixed-size chunks with independent, index-derived
    generator streams; tallies are summed over chunks, so worker count
    affects wall time only, never the counts.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    fmt, cls = config.fmt, config.source_class
    n, step = config.sample_count, config.chunk_size
    chunks = [(c, min(step, n - c * step)) for c in range((n + step - 1) // step)]

    def run_chunk(task: tuple[int, int]) -> _MutableTally:
        index, size = task
        seq = np.random.SeedSequence((config.seed, index))
        rng = np.random.Generator(np.random.Philox(seq))
        bits = sample_class_bits(fmt, cls, rng, size)
        pos = rng.integers(0, fmt.total_bits, size=size, dtype=np.uint64)
        t = _MutableTally(fmt)
        _accumulate(fmt, bits, pos, t)
        return t

    total = _MutableTally(fmt)
    if workers == 1:
        for task in chunks:
            total.merge(run_chunk(task))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for t in pool.map(run_chunk, chunks):
                total.merge(t)
    return CampaignReport(config, total.freeze())


# ── exhaustive census ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class CensusReport:
    """Exact tallies over every (word, position) pair of one class."""

    fmt: FpFormat
    source_class: FpClass
    convention: BucketConvention
    class_size: int
    tally: FlipTally

    @property
    def cases(self) -> int:
        return self.class_size * self.fmt.total_bits

    def transition_fraction(self, src: FpClass, dst: FpClass) -> Fraction:
        return Fraction(self.tally.transition(src, dst), self.cases)

    def to_payload(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "kind": "census",
            "source_class": self.source_class.value,
            "class_size": self.class_size,
            "cases": self.cases,
            "convention": self.convention.value,
            **_tally_payload(self.tally, self.convention),
        }


def exhaustive_census(
    fmt: FpFormat,
    source_class: FpClass,
    convention: BucketConvention = BucketConvention.MERGED,
    chunk_size: int = 1 << 18,
) -> CensusReport:
    """Tally every flip of every word of a class; exact by construction.

    Restricted to formats of at most 24 bits, which caps the case count
    near half a billion in the worst case and keeps small formats fast.
    """
    if fmt.total_bits > 24:
        raise ValueError("exhaustive census supports formats of at most 24 bits")
    t = _MutableTally(fmt)
    for chunk in enumerate_class(fmt, source_class, chunk_size):
        for pos in range(fmt.total_bits):
            _accumulate(fmt, chunk, pos, t)
    return CensusReport(
        fmt, source_class, convention, class_size(fmt, source_class), t.freeze()
    )


# ── model comparison ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class ComparisonCell:
    """One model quantity set against its observed count.

    `z` is None for exact (census) comparisons and for zero-probability
    cells; `passed` is None when the cell was skipped as unresolvable at
    the campaign's sample size.
    """

    name: str
    expected: Fraction
    observed: int
    total: int
    z: float | None
    passed: bool | None

    @property
    def skipped(self) -> bool:
        return self.passed is None


@dataclass(frozen=True)
class ComparisonReport:
    """Verdict of an empirical report against the closed-form models."""

    mode: str  # "census" or "campaign"
    fmt: FpFormat
    source_class: FpClass
    sigma: float
    min_p: float
    cells: tuple[ComparisonCell, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells if not c.skipped)

    def failures(self) -> list[ComparisonCell]:
        return [c for c in self.cells if c.passed is False]

    def to_payload(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "kind": "comparison",
            "mode": self.mode,
            "source_class": self.source_class.value,
            "sigma": self.sigma,
            "min_p": self.min_p,
            "passed": self.passed,
            "cells": [
                {
                    "name": c.name,
                    "expected": ratio_str(c.expected),
                    "observed": c.observed,
                    "total": c.total,
                    "z": c.z,
                    "passed": c.passed,
                }
                for c in self.cells
            ],
        }


def compare(
    matrix: TransitionMatrix,
    report: CampaignReport | CensusReport,
    *,
    sigma: float = 4.0,
    min_p: float = 1e-6,
) -> ComparisonReport:
    """Judge a census or campaign report against the closed-form models.

    Census counts must reproduce every probability exactly as rationals.
    Campaign counts must sit within `sigma` binomial standard deviations
    of expectation; cells with 0 < p <= min_p are skipped as unresolvable,
    and zero-probability cells must have a zero count.  For normalized
    sources the error buckets and the dyadic CDF are judged alongside
    the class transitions.
    """
    if matrix.fmt != report.fmt:
        raise ValueError("matrix and report describe different formats")
    fmt = report.fmt
    exact = isinstance(report, CensusReport)
    mode = "census" if exact else "campaign"
    n = report.cases
    src = report.source_class

    def judge(name: str, p: Fraction, count: int) -> ComparisonCell:
        if exact:
            return ComparisonCell(name, p, count, n, None, Fraction(count, n) == p)
        if p == 0:
            return ComparisonCell(name, p, count, n, None, count == 0)
        if p <= min_p:
            return ComparisonCell(name, p, count, n, None, None)
        sd = sqrt(n * float(p) * (1.0 - float(p)))
        z = (count - n * float(p)) / sd
        return ComparisonCell(name, p, count, n, z, abs(z) <= sigma)

    cells = [
        judge(f"to_{dst.value}", matrix.entry(src, dst), report.tally.transition(src, dst))
        for dst in CLASS_ORDER
    ]
    if src is FpClass.NORMALIZED:
        probs = interval_probabilities(fmt, report.convention)
        counts = report.tally.bucket_view(report.convention)
        expected = {
            "ge_one": probs.ge_one,
            "between_half_and_one": probs.between_half_and_one,
            "le_half": probs.le_half,
            "nonfinite": probs.nonfinite,
        }
        cells += [
            judge(f"err_{name}", expected[name], count)
            for name, count in counts.items()
        ]
        cells += [
            judge(f"cdf_2^-{i}", cdf_dyadic(fmt, i), report.tally.cdf_count(i))
            for i in range(2, fmt.fraction_bits + 1)
        ]
    return ComparisonReport(mode, fmt, src, sigma, min_p, tuple(cells))


def _tally_payload(tally: FlipTally, convention: BucketConvention) -> dict:
    return {
        "transitions": {
            src.value: {
                dst.value: tally.transition(src, dst) for dst in CLASS_ORDER
            }
            for src in CLASS_ORDER
        },
        "buckets": tally.bucket_view(convention),
        "undefined": tally.buckets[_UNDEFINED],
        "dyadic_counts": list(tally.dyadic),
    }
