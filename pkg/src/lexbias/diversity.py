"""Lexical diversity: type/token ratio, Yule's K and I, and MTLD."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .corpus import Corpus
from .errors import EmptyCorpusError, UndefinedMetricError

MTLD_THRESHOLD = 0.72

# reason codes carried in reports in place of an undefined value
TOO_FEW_TOKENS = "too_few_tokens"
ALL_TYPES_SINGLETON = "all_types_singleton"
ZERO_FACTORS = "zero_factors"


@dataclass(frozen=True)
class FrequencySpectrum:
    """``spectrum[m]`` is the number of types occurring exactly ``m`` times."""

    spectrum: dict
    M1: int
    M2: int

    @property
    def type_count(self) -> int:
        return sum(self.spectrum.values())

    @classmethod
    def from_counts(cls, counts):
        counts = np.asarray(counts)
        counts = counts[counts > 0].astype(np.int64)
        if counts.size == 0:
            raise EmptyCorpusError("frequency spectrum of an empty corpus")
        m, v = np.unique(counts, return_counts=True)
        return cls({int(a): int(b) for a, b in zip(m, v)}, int(counts.sum()), int(counts @ counts))


def _require_tokens(corpus: Corpus, n=1, metric="yules_k"):
    if corpus.token_count < n:
        if corpus.token_count == 0:
            raise EmptyCorpusError("metric undefined on an empty corpus")
        raise UndefinedMetricError(metric, TOO_FEW_TOKENS,
                                   f"need at least {n} tokens, got {corpus.token_count}")


def ttr(corpus: Corpus) -> float:
    _require_tokens(corpus)
    return corpus.type_count / corpus.token_count


def frequency_spectrum(corpus: Corpus) -> FrequencySpectrum:
    _require_tokens(corpus)
    return FrequencySpectrum.from_counts(corpus.type_counts())


def yules_k_from_moments(m1: int, m2: int) -> float:
    if m1 < 2:
        raise UndefinedMetricError("yules_k", TOO_FEW_TOKENS)
    return 10_000 * (m2 - m1) / (m1 * m1)


def yules_i_from_moments(m1: int, m2: int) -> float:
    if m1 < 2:
        raise UndefinedMetricError("yules_i", TOO_FEW_TOKENS)
    if m2 == m1:
        raise UndefinedMetricError("yules_i", ALL_TYPES_SINGLETON,
                                   "Yule's I is undefined when every type occurs once (K = 0)")
    return m1 * m1 / (m2 - m1)


def yules_k(corpus: Corpus) -> float:
    _require_tokens(corpus, 2)
    spec = frequency_spectrum(corpus)
    return yules_k_from_moments(spec.M1, spec.M2)


def yules_i(corpus: Corpus) -> float:
    """Reciprocal of Yule's K scaled by 10^4; higher means lexically richer."""
    _require_tokens(corpus, 2, "yules_i")
    spec = frequency_spectrum(corpus)
    return yules_i_from_moments(spec.M1, spec.M2)


def new_mtld_state(n_types):
    """Fresh ``(stamp, state)`` for :func:`lexbias.kernels.mtld_scan`."""
    return np.full(max(n_types, 1), -1, dtype=np.int64), (0, 0, 0, 0)


def mtld_factors(state, threshold) -> float:
    """Total factor count (full plus partial) from a finished scan state."""
    _, seg_len, seg_types, factors = state
    partial = 0.0
    if seg_len:
        partial = (1.0 - seg_types / seg_len) / (1.0 - threshold)
    return factors + partial


def mtld_from_factors(n_tokens, forward, backward):
    if forward == 0 or backward == 0:
        raise UndefinedMetricError(
            "mtld", ZERO_FACTORS,
            "MTLD is undefined: the text never drops below the threshold and ends with TTR 1",
        )
    fwd = n_tokens / forward
    bwd = n_tokens / backward
    return (fwd + bwd) / 2, fwd, bwd


def _check_threshold(threshold):
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"MTLD threshold must lie in (0, 1), got {threshold}")


def mtld(corpus: Corpus, threshold: float = MTLD_THRESHOLD):
    """Return ``(mtld, forward, backward)`` over the corpus token stream in order."""
    _check_threshold(threshold)
    _require_tokens(corpus)
    order = np.arange(len(corpus), dtype=np.int64)
    passes = []
    for reverse in (False, True):
        stamp, state = new_mtld_state(len(corpus.types))
        state = kernels.mtld_scan_sentences(corpus.ids, corpus.offsets, order, reverse,
                                            stamp, state, threshold)
        passes.append(mtld_factors(state, threshold))
    return mtld_from_factors(corpus.token_count, *passes)


@dataclass(frozen=True)
class DiversityReport:
    """All diversity metrics for one corpus.

    Metrics that are undefined on the input are ``None`` and the reason code
    is recorded in ``undefined`` under the metric name.
    """

    token_count: int
    type_count: int
    ttr: float
    yules_k: float | None
    yules_i: float | None
    mtld: float | None
    mtld_forward: float | None
    mtld_backward: float | None
    mtld_threshold: float = MTLD_THRESHOLD
    label: str = ""
    undefined: dict = field(default_factory=dict)

    @property
    def ttr_scaled(self) -> float:
        return 1000 * self.ttr

    def to_dict(self):
        return {
            "label": self.label,
            "token_count": self.token_count,
            "type_count": self.type_count,
            "ttr": self.ttr,
            "ttr_scaled": self.ttr_scaled,
            "yules_k": self.yules_k,
            "yules_i": self.yules_i,
            "mtld": self.mtld,
            "mtld_forward": self.mtld_forward,
            "mtld_backward": self.mtld_backward,
            "mtld_threshold": self.mtld_threshold,
            "undefined": dict(self.undefined),
        }


def report_from_stats(counts, forward_state, backward_state, threshold, label="") -> DiversityReport:
    """Assemble a report from per-type counts and two finished MTLD scan states."""
    spec = FrequencySpectrum.from_counts(counts)
    undefined = {}
    k = i = None
    try:
        k = yules_k_from_moments(spec.M1, spec.M2)
        i = yules_i_from_moments(spec.M1, spec.M2)
    except UndefinedMetricError as exc:
        if k is None:
            undefined["yules_k"] = exc.reason
        undefined["yules_i"] = exc.reason
    m = fwd = bwd = None
    try:
        m, fwd, bwd = mtld_from_factors(spec.M1, mtld_factors(forward_state, threshold),
                                        mtld_factors(backward_state, threshold))
    except UndefinedMetricError as exc:
        undefined["mtld"] = exc.reason
    return DiversityReport(
        token_count=spec.M1,
        type_count=spec.type_count,
        ttr=spec.type_count / spec.M1,
        yules_k=k,
        yules_i=i,
        mtld=m,
        mtld_forward=fwd,
        mtld_backward=bwd,
        mtld_threshold=threshold,
        label=label,
        undefined=undefined,
    )


def diversity_report(corpus: Corpus, mtld_threshold: float = MTLD_THRESHOLD) -> DiversityReport:
    _check_threshold(mtld_threshold)
    if corpus.token_count == 0:
        raise EmptyCorpusError(f"corpus {corpus.label!r} has no tokens")
    order = np.arange(len(corpus), dtype=np.int64)
    states = []
    for reverse in (False, True):
        stamp, state = new_mtld_state(len(corpus.types))
        states.append(kernels.mtld_scan_sentences(corpus.ids, corpus.offsets, order, reverse,
                                                  stamp, state, mtld_threshold))
    return report_from_stats(corpus.type_counts(), states[0], states[1], mtld_threshold,
                             corpus.label)
