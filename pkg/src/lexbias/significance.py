"""Paired bootstrap comparison of a diversity metric between two corpora.

Sentences are resampled with replacement from each corpus. Iteration ``i``
draws from its own PRNG substream (``SeedSequence(seed, spawn_key=(i,))``),
so results depend only on the seed, never on evaluation order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .corpus import Corpus
from .diversity import (MTLD_THRESHOLD, mtld_factors, mtld_from_factors, mtld, ttr,
                        yules_i_from_moments, yules_i)
from .errors import DegenerateBootstrapError, EmptyCorpusError, UndefinedMetricError

METRICS = ("ttr", "yules_i", "mtld")
PVALUE_METHOD = "two-sided sign proportion of bootstrap deltas"
MIN_ITERATIONS = 100
MAX_DEGENERATE_FRACTION = 0.10


class LowIterationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BootstrapConfig:
    iterations: int = 1000
    seed: int = 0
    metric: str = "ttr"
    mtld_threshold: float = MTLD_THRESHOLD
    alpha: float = 0.05

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class BootstrapResult:
    metric: str
    observed_delta: float
    p_value: float
    ci_low: float
    ci_high: float
    iterations: int
    seed: int
    degenerate_samples: int
    alpha: float = 0.05
    deltas: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha

    def to_dict(self):
        return {
            "metric": self.metric,
            "observed_delta": self.observed_delta,
            "p_value": self.p_value,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "iterations": self.iterations,
            "seed": self.seed,
            "degenerate_samples": self.degenerate_samples,
            "alpha": self.alpha,
            "significant": self.significant,
            "status": "significant" if self.significant else "not significant",
            "p_value_method": PVALUE_METHOD,
        }


class _Resampler:
    """Evaluates one metric on sentence multisets drawn from a fixed corpus."""

    def __init__(self, corpus: Corpus, config: BootstrapConfig):
        self.corpus = corpus
        self.metric = config.metric
        self.threshold = config.mtld_threshold
        n_types = max(len(corpus.types), 1)
        if corpus.ids.size and int(corpus.ids.max()) >= n_types:
            raise ValueError("corpus ids exceed its type table")
        self.counts = np.zeros(n_types, dtype=np.int64)
        self.stamp = np.full(n_types, -1, dtype=np.int64)
        self.lengths = corpus.lengths
        self.segment = 0

    def __call__(self, order) -> float:
        c = self.corpus
        if self.metric == "mtld":
            passes = []
            for reverse in (False, True):
                # keep segment ids increasing so stale stamps never collide
                state = (self.segment, 0, 0, 0)
                state = kernels.mtld_scan_sentences(c.ids, c.offsets, order, reverse, self.stamp,
                                                    state, self.threshold, validated=True)
                self.segment = state[0] + 1
                passes.append(mtld_factors(state, self.threshold))
            m1 = int(self.lengths[order].sum())
            return mtld_from_factors(m1, *passes)[0]
        types, m1, m2 = kernels.resample_spectrum(c.ids, c.offsets, order, self.counts,
                                                  validated=True)
        if self.metric == "ttr":
            return types / m1
        return yules_i_from_moments(m1, m2)


def metric_value(corpus: Corpus, metric: str, threshold=MTLD_THRESHOLD) -> float:
    if metric == "ttr":
        return ttr(corpus)
    if metric == "yules_i":
        return yules_i(corpus)
    if metric == "mtld":
        return mtld(corpus, threshold)[0]
    raise ValueError(f"unknown metric {metric!r}")


def sign_test_pvalue(deltas, observed) -> float:
    """Twice the share of deltas at or beyond zero on the far side from ``observed``, capped at 1."""
    deltas = np.asarray(deltas)
    if deltas.size == 0:
        raise ValueError("no bootstrap deltas")
    if observed == 0:
        return 1.0
    opposing = np.count_nonzero(deltas <= 0) if observed > 0 else np.count_nonzero(deltas >= 0)
    return min(1.0, 2.0 * opposing / deltas.size)


def bootstrap_compare(a: Corpus, b: Corpus, config: BootstrapConfig = BootstrapConfig()) -> BootstrapResult:
    """Bootstrap ``metric(a) - metric(b)`` by resampling sentences of each corpus."""
    if len(a) == 0 or len(b) == 0:
        raise EmptyCorpusError("both corpora must be non-empty")
    if config.iterations < MIN_ITERATIONS:
        warnings.warn(
            f"{config.iterations} bootstrap iterations is below {MIN_ITERATIONS}; "
            "the p-value is unreliable",
            LowIterationWarning,
            stacklevel=2,
        )
    observed = (metric_value(a, config.metric, config.mtld_threshold)
                - metric_value(b, config.metric, config.mtld_threshold))

    eval_a, eval_b = _Resampler(a, config), _Resampler(b, config)
    na, nb = len(a), len(b)
    deltas = np.empty(config.iterations, dtype=np.float64)
    valid = np.ones(config.iterations, dtype=bool)
    root = np.random.SeedSequence(config.seed)
    for i in range(config.iterations):
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(root.entropy, spawn_key=(i,))))
        sample_a = rng.integers(0, na, size=na, dtype=np.int64)
        sample_b = rng.integers(0, nb, size=nb, dtype=np.int64)
        try:
            deltas[i] = eval_a(sample_a) - eval_b(sample_b)
        except UndefinedMetricError:
            valid[i] = False
    degenerate = int(np.count_nonzero(~valid))
    if degenerate > MAX_DEGENERATE_FRACTION * config.iterations:
        raise DegenerateBootstrapError(
            f"{config.metric} was undefined on {degenerate} of {config.iterations} resamples"
        )
    kept = deltas[valid]
    lo, hi = np.percentile(kept, [2.5, 97.5])
    return BootstrapResult(
        metric=config.metric,
        observed_delta=float(observed),
        p_value=sign_test_pvalue(kept, observed),
        ci_low=float(lo),
        ci_high=float(hi),
        iterations=config.iterations,
        seed=config.seed,
        degenerate_samples=degenerate,
        alpha=config.alpha,
        deltas=kept,
    )
