"""Frequency exacerbation and decay between a human reference and an MT output.

Every word of the human translation (HT) falls into one of six classes by
two coordinates: whether it is frequent in the HT (probability above the
mean HT probability, i.e. ``1 / |V_HT|``), and whether its probability in
the MT output went up, went down, or dropped to zero::

    PP  "+ +"   frequent, higher in MT
    PM  "+ -"   frequent, lower (or equal) but present
    MP  "- +"   non-frequent, higher
    MM  "- -"   non-frequent, lower (or equal) but present
    PZ  "+ 0"   frequent, absent from MT
    MZ  "- 0"   non-frequent, absent from MT

Words that only occur in the MT output are "novel" and are tallied apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import VocabProfile
from .errors import EmptyCorpusError

CLASSES = ("PP", "PM", "MP", "MM", "PZ", "MZ")
SYMBOLS = {"PP": "++", "PM": "+-", "MP": "-+", "MM": "--", "PZ": "+0", "MZ": "-0"}
THRESHOLD_RULES = ("ht_mean",)

# Probabilities within this relative distance count as equal. Mathematically
# equal values reached by different summation orders differ by a few ulps,
# and must take the tie branch rather than a side picked by rounding.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class BiasClassConfig:
    threshold_rule: str = "ht_mean"
    diff_scale: float = 1e4

    def __post_init__(self):
        if self.threshold_rule not in THRESHOLD_RULES:
            raise ValueError(f"unknown threshold rule {self.threshold_rule!r}")
        if not self.diff_scale > 0:
            raise ValueError("diff_scale must be positive")

    def to_dict(self):
        return {"threshold_rule": self.threshold_rule, "diff_scale": self.diff_scale}


@dataclass(frozen=True)
class BiasClassification:
    counts: dict
    acc_diffs: dict
    novel_count: int
    novel_mass: float
    threshold: float
    diff_scale: float
    ht_type_count: int
    label: str = ""

    @property
    def normalized_counts(self) -> dict:
        """Class counts divided by the HT vocabulary size."""
        return {c: self.counts[c] / self.ht_type_count for c in CLASSES}

    @property
    def absent_count(self) -> int:
        return self.counts["PZ"] + self.counts["MZ"]

    def to_dict(self):
        return {
            "label": self.label,
            "counts": {SYMBOLS[c]: self.counts[c] for c in CLASSES},
            "counts_normalized": {SYMBOLS[c]: v for c, v in self.normalized_counts.items()},
            "acc_diffs": {SYMBOLS[c]: self.acc_diffs[c] for c in CLASSES},
            "novel_count": self.novel_count,
            "novel_mass": self.novel_mass,
            "threshold": self.threshold,
            "diff_scale": self.diff_scale,
            "ht_type_count": self.ht_type_count,
        }


def classify_word(p_ht: float, p_mt: float, threshold: float) -> str:
    """Class of one HT word given its HT and MT probabilities.

    Ties go to the "-" side: ``p_ht == threshold`` is non-frequent and
    ``p_mt == p_ht`` counts as a decrease (contributing zero difference).
    Equality is judged up to a relative ``TIE_RTOL``.
    """
    if not p_ht > 0:
        raise ValueError("p_ht must be positive; words absent from the HT are novel, not classified")
    if p_mt < 0:
        raise ValueError("p_mt must be non-negative")
    first = "P" if p_ht > threshold * (1 + TIE_RTOL) else "M"
    if p_mt == 0:
        return first + "Z"
    return first + ("P" if p_mt > p_ht * (1 + TIE_RTOL) else "M")


def compute_threshold(ht: VocabProfile, config: BiasClassConfig) -> float:
    # mean of a distribution over its own support
    return 1.0 / ht.type_count


def _aligned(ht: VocabProfile, mt: VocabProfile):
    if ht.type_count == 0 or mt.type_count == 0:
        raise EmptyCorpusError("both vocabulary profiles must be non-empty")
    index = mt.index
    pos = np.fromiter((index.get(t, -1) for t in ht.types), dtype=np.int64, count=ht.type_count)
    p_mt = np.where(pos >= 0, mt.probability[np.maximum(pos, 0)], 0.0)
    in_ht = np.zeros(mt.type_count, dtype=bool)
    in_ht[pos[pos >= 0]] = True
    return ht.probability, p_mt, ~in_ht


def _class_masks(p_ht, p_mt, threshold):
    frequent = p_ht > threshold * (1 + TIE_RTOL)
    zero = p_mt == 0
    up = (p_mt > p_ht * (1 + TIE_RTOL)) & ~zero
    down = ~up & ~zero
    return {
        "PP": frequent & up,
        "PM": frequent & down,
        "MP": ~frequent & up,
        "MM": ~frequent & down,
        "PZ": frequent & zero,
        "MZ": ~frequent & zero,
    }


def classify_corpora(ht: VocabProfile, mt: VocabProfile,
                     config: BiasClassConfig = BiasClassConfig(), label=None) -> BiasClassification:
    """Classify every HT word against the MT output and accumulate differences."""
    p_ht, p_mt, novel = _aligned(ht, mt)
    threshold = compute_threshold(ht, config)
    masks = _class_masks(p_ht, p_mt, threshold)
    diff = np.abs(p_mt - p_ht)
    diff[np.abs(p_mt - p_ht) <= p_ht * TIE_RTOL] = 0.0
    counts = {c: int(np.count_nonzero(m)) for c, m in masks.items()}
    acc = {c: float(diff[m].sum()) * config.diff_scale for c, m in masks.items()}
    return BiasClassification(
        counts=counts,
        acc_diffs=acc,
        novel_count=int(np.count_nonzero(novel)),
        novel_mass=float(mt.probability[novel].sum()) * config.diff_scale,
        threshold=threshold,
        diff_scale=config.diff_scale,
        ht_type_count=ht.type_count,
        label=mt.label if label is None else label,
    )


def accumulated_differences(ht: VocabProfile, mt: VocabProfile,
                            config: BiasClassConfig = BiasClassConfig()) -> dict:
    """Per-class sum of ``|p_MT - p_HT|`` scaled by ``config.diff_scale``."""
    return classify_corpora(ht, mt, config).acc_diffs
