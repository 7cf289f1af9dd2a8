"""Relative frequencies of translation variants across corpora."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .corpus import DEFAULT_TOKENIZER, Corpus, TokenizerConfig, VocabProfile, tokenize
from .errors import VariantFileError


@dataclass(frozen=True)
class VariantSet:
    source_word: str
    variants: tuple

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        if not self.variants:
            raise ValueError(f"variant set for {self.source_word!r} is empty")
        if len(set(self.variants)) != len(self.variants):
            raise ValueError(f"variant set for {self.source_word!r} has duplicate variants")

    def normalized(self, config: TokenizerConfig = DEFAULT_TOKENIZER) -> "VariantSet":
        """The same set with each variant passed through the corpus tokenizer."""
        out = []
        for v in self.variants:
            toks = tokenize(v, config)
            if len(toks) != 1:
                raise ValueError(f"variant {v!r} of {self.source_word!r} is not a single token")
            out.append(toks[0])
        return VariantSet(self.source_word, tuple(out))

    def to_dict(self):
        return {"source_word": self.source_word, "variants": list(self.variants)}


@dataclass(frozen=True)
class VariantCount:
    raw_count: int
    relative_frequency: float


@dataclass(frozen=True)
class VariantProfile:
    source_word: str
    variants: tuple
    per_corpus: dict

    def to_dict(self):
        return {
            "source_word": self.source_word,
            "variants": list(self.variants),
            "per_corpus": {
                label: {v: {"count": c.raw_count, "relative_frequency": c.relative_frequency}
                        for v, c in row.items()}
                for label, row in self.per_corpus.items()
            },
        }

    def rows(self):
        """Long-format rows ``(source_word, variant, corpus_label, count, relative_frequency)``."""
        for label, row in self.per_corpus.items():
            for v in self.variants:
                c = row[v]
                yield self.source_word, v, label, c.raw_count, c.relative_frequency


def _counter(source):
    if isinstance(source, VocabProfile):
        return source.raw_count
    if isinstance(source, Corpus):
        counts = source.type_counts()
        index = {t: i for i, t in enumerate(source.types)}
        return lambda w: int(counts[index[w]]) if w in index else 0
    raise TypeError(f"expected Corpus or VocabProfile, got {type(source).__name__}")


def variant_profile(corpora: Sequence, vs: VariantSet) -> VariantProfile:
    """Count each variant per corpus and normalize within the set.

    ``corpora`` may mix :class:`Corpus` and :class:`VocabProfile` objects;
    their ``label`` attributes key the result and must be distinct.
    """
    if not corpora:
        raise ValueError("at least one corpus is required")
    labels = [c.label for c in corpora]
    if len(set(labels)) != len(labels):
        raise ValueError(f"corpus labels must be unique, got {labels}")
    per_corpus = {}
    for source in corpora:
        count = _counter(source)
        raw = {v: count(v) for v in vs.variants}
        total = sum(raw.values())
        per_corpus[source.label] = {
            v: VariantCount(n, n / total if total else 0.0) for v, n in raw.items()
        }
    return VariantProfile(vs.source_word, vs.variants, per_corpus)


def parse_variant_sets(data, path="<variants>") -> list[VariantSet]:
    if not isinstance(data, list):
        raise VariantFileError(path, "top level must be a list of {source_word, variants} objects")
    sets = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "variants" not in item:
            raise VariantFileError(path, f"entry {i}: expected an object with a 'variants' list")
        variants = item["variants"]
        if not isinstance(variants, list) or not all(isinstance(v, str) for v in variants):
            raise VariantFileError(path, f"entry {i}: 'variants' must be a list of strings")
        try:
            sets.append(VariantSet(str(item.get("source_word", "")), tuple(variants)))
        except ValueError as exc:
            raise VariantFileError(path, f"entry {i}: {exc}") from None
    return sets


def load_variant_sets(path) -> list[VariantSet]:
    """Read a JSON list of ``{"source_word": ..., "variants": [...]}`` objects."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise VariantFileError(path, exc.msg, exc.lineno, exc.colno) from None
    return parse_variant_sets(data, path)
