"""Exact index distributions, Monte Carlo sampling and normality checks.

The exact side enumerates every chain of a given length and aggregates index
values with rational probabilities, giving oracle moments for the closed
forms.  The sampling side draws chains with a splittable counter-based RNG
laid out as 64 fixed logical streams: stream s is seeded with
SeedSequence(masterSeed, spawn_key=(s,)) and owns the sample indices
congruent to s mod 64, in fixed chunks, so the result of a run depends only
on (masterSeed, sampleCount) and never on the number of worker processes.
Per-chunk two-pass statistics are merged with the exact pairwise Welford
combination in fixed stream order.

The normality check standardizes samples by the verified closed-form moments
(or by sample moments on request) and measures the two-sided Kolmogorov
sup-distance to the standard normal.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy.special import ndtr

from .chain import ProbabilityParams, enumerate_blueprints, enumeration_cap
from .closedform import expected_index, variance_index
from .indices import IndexKind, affine_in_t2, incremental_indices, t2_weights

_STREAMS = 64
_CHUNK = 4096
# At most this many realizations go one at a time through the O(n) engine;
# larger enumerations aggregate mode masks by dynamic programming over the
# per-step weights.  Tests pin the two paths equal where they overlap.
_BULK_ENUM_LIMIT = 4096

# Asymptotic two-sided Kolmogorov critical constants c(alpha); the test
# threshold is c(alpha) / sqrt(sampleCount).
_KS_CRITICAL = {0.01: 1.628, 0.05: 1.358}


def _as_exact_p1(p1) -> Fraction:
    if isinstance(p1, ProbabilityParams):
        return p1.as_fraction()
    return Fraction(p1)


def _as_float_p1(p1) -> float:
    if isinstance(p1, ProbabilityParams):
        return p1.as_float()
    return float(p1)


@dataclass(frozen=True)
class ExactDistribution:
    """Full law of one index over all chains of n pentagons, exact."""

    index: IndexKind
    n: int
    p1: Fraction
    support: tuple[tuple[Fraction, Fraction], ...]
    mean: Fraction
    variance: Fraction

    def to_csv(self) -> str:
        lines = ["value,probability"]
        for value, prob in self.support:
            lines.append(
                f"{value.numerator}/{value.denominator},"
                f"{prob.numerator}/{prob.denominator}"
            )
        return "\n".join(lines) + "\n"


def exact_distribution(index: IndexKind, n: int, p1, cap: int | None = None) -> ExactDistribution:
    """Enumerate the exact distribution of one index at chain length n.

    p1 is used exactly: float input is converted through Fraction(float), so
    probabilities always sum to exactly 1 in rational arithmetic.  Raises
    ValueError when n exceeds the enumeration cap.
    """
    exact = _as_exact_p1(p1)
    if not 0 <= exact <= 1:
        raise ValueError(f"p1 must lie in [0, 1], got {p1!r}")
    limit = enumeration_cap(cap)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > limit:
        raise ValueError(
            f"n={n} exceeds the enumeration cap {limit} "
            f"(2^{max(0, n - 2)} realizations)"
        )
    steps = max(0, n - 2)
    acc: dict[Fraction, Fraction] = {}
    if 2**steps <= _BULK_ENUM_LIMIT:
        params = ProbabilityParams(p1=exact)
        for blueprint, prob in enumerate_blueprints(n, params, cap=limit):
            value = incremental_indices(blueprint).get(index)
            acc[value] = acc.get(value, Fraction(0)) + prob
    else:
        base, slope = affine_in_t2(index, n)
        weights = t2_weights(n)
        # counts[j, t]: mode masks with j mode-2 choices and weight sum t
        counts = np.zeros((steps + 1, int(weights.sum()) + 1), dtype=np.int64)
        counts[0, 0] = 1
        for w in weights:
            shifted = np.zeros_like(counts)
            shifted[1:, w:] = counts[:-1, : counts.shape[1] - w]
            counts += shifted
        q = 1 - exact
        for j in range(steps + 1):
            row = counts[j]
            if not row.any():
                continue
            prob_j = exact ** (steps - j) * q**j
            if prob_j == 0:
                continue
            for t in np.nonzero(row)[0]:
                value = base + slope * int(t)
                acc[value] = acc.get(value, Fraction(0)) + int(row[t]) * prob_j
    support = tuple(sorted(acc.items()))
    total = sum(prob for _, prob in support)
    assert total == 1
    mean = sum(prob * value for value, prob in support)
    variance = sum(prob * value * value for value, prob in support) - mean * mean
    return ExactDistribution(
        index=index, n=n, p1=exact, support=support, mean=mean, variance=variance
    )


@dataclass(frozen=True)
class SampleStats:
    """Streaming summary (Welford form) of Monte Carlo draws of one index."""

    index: IndexKind
    count: int
    mean: float
    m2: float
    min: float
    max: float
    seed: int

    @property
    def variance(self) -> float:
        """Sample variance (ddof 1); zero for fewer than two samples."""
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    def merge(self, other: "SampleStats") -> "SampleStats":
        """Exact pairwise combination of two disjoint sample summaries."""
        if other.index is not self.index or other.seed != self.seed:
            raise ValueError("can only merge stats of the same index and seed")
        block = _merge_block(
            (self.count, self.mean, self.m2, self.min, self.max),
            (other.count, other.mean, other.m2, other.min, other.max),
        )
        return SampleStats(self.index, *block, seed=self.seed)

    @classmethod
    def from_values(cls, index: IndexKind, values, seed: int) -> "SampleStats":
        """Two-pass summary of a value array (test fixtures, small dumps)."""
        arr = np.asarray(values, dtype=np.float64)
        mean = float(arr.mean())
        return cls(
            index=index,
            count=arr.size,
            mean=mean,
            m2=float(((arr - mean) ** 2).sum()),
            min=float(arr.min()),
            max=float(arr.max()),
            seed=seed,
        )


def _merge_block(a, b):
    na, mean_a, m2a, min_a, max_a = a
    nb, mean_b, m2b, min_b, max_b = b
    nc = na + nb
    delta = mean_b - mean_a
    return (
        nc,
        mean_a + delta * (nb / nc),
        m2a + m2b + delta * delta * (na * nb / nc),
        min(min_a, min_b),
        max(max_a, max_b),
    )


def _stream_sample_count(sample_count: int, stream: int) -> int:
    if stream >= sample_count:
        return 0
    return (sample_count - stream + _STREAMS - 1) // _STREAMS


def _stream_rng(master_seed: int, stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(seq))


def _stream_stats(args):
    """Chunked two-pass stats of one logical stream, one block per index."""
    master_seed, stream, sample_count, n, p1f, bases, slopes = args
    count = _stream_sample_count(sample_count, stream)
    blocks = [None] * len(bases)
    if count == 0:
        return blocks
    steps = max(0, n - 2)
    weights = t2_weights(n)
    rng = _stream_rng(master_seed, stream)
    for start in range(0, count, _CHUNK):
        length = min(_CHUNK, count - start)
        if steps:
            u = rng.random((length, steps))
            t2 = (u >= p1f) @ weights
        else:
            t2 = np.zeros(length, dtype=np.int64)
        for i, (base, slope) in enumerate(zip(bases, slopes)):
            vals = base + slope * t2
            mean = float(vals.mean())
            block = (
                length,
                mean,
                float(((vals - mean) ** 2).sum()),
                float(vals.min()),
                float(vals.max()),
            )
            blocks[i] = block if blocks[i] is None else _merge_block(blocks[i], block)
    return blocks


def monte_carlo(
    indices,
    n: int,
    p1,
    sample_count: int,
    master_seed: int,
    workers: int = 1,
) -> dict[IndexKind, SampleStats]:
    """Sample random chains and summarize the given indices.

    One chain draw feeds every requested index.  Deterministic in
    (master_seed, sample_count) alone: logical streams own fixed sample
    slots and merge in fixed order, so any worker count gives bit-identical
    results.
    """
    kinds = (indices,) if isinstance(indices, IndexKind) else tuple(indices)
    if not kinds:
        raise ValueError("need at least one index")
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    p1f = _as_float_p1(p1)
    if not 0.0 <= p1f <= 1.0:
        raise ValueError(f"p1 must lie in [0, 1], got {p1!r}")
    pairs = [affine_in_t2(kind, n) for kind in kinds]
    bases = tuple(float(base) for base, _ in pairs)
    slopes = tuple(float(slope) for _, slope in pairs)
    tasks = [
        (master_seed, s, sample_count, n, p1f, bases, slopes)
        for s in range(_STREAMS)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_stream_stats, tasks))
    else:
        results = [_stream_stats(task) for task in tasks]
    stats = {}
    for i, kind in enumerate(kinds):
        acc = None
        for blocks in results:
            block = blocks[i]
            if block is not None:
                acc = block if acc is None else _merge_block(acc, block)
        stats[kind] = SampleStats(kind, *acc, seed=master_seed)
    return stats


def sample_values(
    index: IndexKind, n: int, p1, sample_count: int, master_seed: int
) -> np.ndarray:
    """The exact value sequence monte_carlo aggregates, in draw order."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    p1f = _as_float_p1(p1)
    base, slope = affine_in_t2(index, n)
    base_f, slope_f = float(base), float(slope)
    steps = max(0, n - 2)
    weights = t2_weights(n)
    out = np.empty(sample_count, dtype=np.float64)
    for stream in range(_STREAMS):
        count = _stream_sample_count(sample_count, stream)
        if count == 0:
            continue
        rng = _stream_rng(master_seed, stream)
        vals = np.empty(count, dtype=np.float64)
        pos = 0
        for start in range(0, count, _CHUNK):
            length = min(_CHUNK, count - start)
            if steps:
                u = rng.random((length, steps))
                t2 = (u >= p1f) @ weights
            else:
                t2 = np.zeros(length, dtype=np.int64)
            vals[pos : pos + length] = base_f + slope_f * t2
            pos += length
        out[stream::_STREAMS] = vals
    return out


def samples_csv(values) -> str:
    """CSV dump of a sample sequence: columns sampleIndex, value."""
    lines = ["sampleIndex,value"]
    for i, v in enumerate(np.asarray(values)):
        lines.append(f"{i},{v}")
    return "\n".join(lines) + "\n"


class Standardization(Enum):
    """How normality_test centers and scales the samples."""

    CLOSED_FORM = "closed-form"
    SAMPLE = "sample"


@dataclass(frozen=True)
class NormalityResult:
    """Kolmogorov sup-distance of a standardized index sample to Phi."""

    index: IndexKind
    n: int
    p1: float
    sample_count: int
    ks_statistic: float
    standardization: Standardization
    seed: int

    def threshold(self, alpha: float = 0.01) -> float:
        """Asymptotic two-sided critical value c(alpha) / sqrt(m)."""
        try:
            c = _KS_CRITICAL[alpha]
        except KeyError:
            known = sorted(_KS_CRITICAL)
            raise ValueError(f"alpha must be one of {known}, got {alpha}") from None
        return c / math.sqrt(self.sample_count)

    def passes(self, alpha: float = 0.01) -> bool:
        return self.ks_statistic < self.threshold(alpha)

    def to_json(self) -> str:
        return json.dumps(
            {
                "index": self.index.value,
                "n": self.n,
                "p1": self.p1,
                "sample_count": self.sample_count,
                "ks_statistic": self.ks_statistic,
                "standardization": self.standardization.value,
                "seed": self.seed,
                "thresholds": {
                    str(alpha): self.threshold(alpha) for alpha in sorted(_KS_CRITICAL)
                },
            }
        )


def ks_statistic(standardized) -> float:
    """Two-sided discrete sup distance between a sample CDF and Phi."""
    z = np.sort(np.asarray(standardized, dtype=np.float64))
    m = z.size
    cdf = ndtr(z)
    upper = np.arange(1, m + 1) / m
    return float(np.maximum(upper - cdf, cdf - (upper - 1.0 / m)).max())


def normality_test(
    index: IndexKind,
    n: int,
    p1,
    sample_count: int,
    seed: int,
    standardization: Standardization = Standardization.CLOSED_FORM,
) -> NormalityResult:
    """Draw samples, standardize, and measure the distance to normality.

    Closed-form standardization uses the verified expectation and variance;
    sample standardization uses the drawn moments.  Parameter points with a
    deterministic chain (n <= 2, or p1 in {0, 1}) are refused: there is
    nothing to standardize.
    """
    p1f = _as_float_p1(p1)
    if n <= 2 or not 0.0 < p1f < 1.0:
        raise ValueError("normality needs n >= 3 and p1 strictly inside (0, 1)")
    values = sample_values(index, n, p1, sample_count, seed)
    if standardization is Standardization.CLOSED_FORM:
        center = expected_index(index, n, p1f)
        scale = math.sqrt(variance_index(index, n, p1f))
    else:
        center = float(values.mean())
        scale = float(values.std(ddof=1))
    stat = ks_statistic((values - center) / scale)
    return NormalityResult(
        index=index,
        n=n,
        p1=p1f,
        sample_count=sample_count,
        ks_statistic=stat,
        standardization=standardization,
        seed=seed,
    )
