"""Synthetic HT/MT corpus pairs with a planted greedy-decoding bias.

The "human" side realizes a Zipf-distributed stream of concepts, each
through one of several surface variants drawn from a skewed distribution.
The "machine" side keeps every sentence's concept sequence but realizes
each concept with its most frequent HT variant, which is what greedy
decoding over the HT distribution would emit. Rare variants therefore
vanish and frequent ones gain mass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, write_corpus
from .variants import VariantSet

_SUFFIXES = "abcdefghij"


@dataclass
class SyntheticPair:
    ht: Corpus
    mt: Corpus
    variant_sets: list


def _variant_name(concept, j):
    return f"w{concept}" if j == 0 else f"w{concept}{_SUFFIXES[j - 1]}"


def generate_pair(n_sentences=2000, n_concepts=2000, mean_length=28, zipf_exponent=1.05,
                  max_variants=6, n_planted=15, variant_decay=1.2, seed=0,
                  ht_label="ht", mt_label="mt") -> SyntheticPair:
    """Sample an HT corpus and its greedy MT counterpart.

    ``n_planted`` concepts among the most frequent ones get at least four
    variants and are returned as :class:`VariantSet` objects, in the same
    spirit as hand-picked source words with known translations.
    """
    if not 1 <= max_variants <= len(_SUFFIXES) + 1:
        raise ValueError(f"max_variants must be between 1 and {len(_SUFFIXES) + 1}")
    if n_planted and max_variants < 4:
        raise ValueError("planted variant sets need max_variants >= 4")
    rng = np.random.default_rng(seed)

    ranks = np.arange(1, n_concepts + 1, dtype=np.float64)
    concept_cdf = np.cumsum(ranks ** -zipf_exponent)
    concept_cdf /= concept_cdf[-1]

    n_var = rng.integers(1, max_variants + 1, size=n_concepts)
    planted = np.arange(min(n_planted, n_concepts)) * 3 + 2
    planted = planted[planted < n_concepts]
    n_var[planted] = np.maximum(n_var[planted], 4)

    # per-concept cumulative variant distribution, padded with 1.0
    j = np.arange(max_variants, dtype=np.float64)
    w = (j + 1.0) ** -variant_decay
    w = np.where(j[None, :] < n_var[:, None], w[None, :], 0.0)
    variant_cdf = np.cumsum(w, axis=1)
    variant_cdf /= variant_cdf[:, -1:]
    variant_cdf[:, -1] = 1.0

    first_id = np.zeros(n_concepts + 1, dtype=np.int64)
    np.cumsum(n_var, out=first_id[1:])
    types = [_variant_name(c, k) for c in range(n_concepts) for k in range(n_var[c])]

    lengths = 1 + rng.poisson(mean_length - 1, size=n_sentences)
    offsets = np.zeros(n_sentences + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    n_tokens = int(offsets[-1])

    concepts = np.empty(n_tokens, dtype=np.int32)
    ht_ids = np.empty(n_tokens, dtype=np.int32)
    step = 1 << 20
    for lo in range(0, n_tokens, step):
        hi = min(lo + step, n_tokens)
        c = np.searchsorted(concept_cdf, rng.random(hi - lo), side="right")
        c = np.minimum(c, n_concepts - 1)
        u = rng.random(hi - lo)
        k = (variant_cdf[c] <= u[:, None]).sum(axis=1)
        concepts[lo:hi] = c
        ht_ids[lo:hi] = first_id[c] + k

    # greedy choice: the HT-most-frequent variant of each concept, lowest index on ties
    counts = np.bincount(ht_ids, minlength=len(types))
    greedy = np.empty(n_concepts, dtype=np.int32)
    for c in range(n_concepts):
        a, b = first_id[c], first_id[c + 1]
        greedy[c] = a + int(np.argmax(counts[a:b]))
    mt_ids = greedy[concepts]

    ht = Corpus(ht_ids, offsets, types, ht_label)
    mt = Corpus(mt_ids, offsets, types, mt_label)
    sets = [
        VariantSet(f"src{c}", tuple(types[first_id[c]:first_id[c + 1]]))
        for c in planted.tolist()
    ]
    return SyntheticPair(ht, mt, sets)


def greedy_translate(ht: Corpus, variant_sets, label="mt") -> Corpus:
    """Replace every variant token of ``ht`` by its set's most frequent HT variant.

    Tokens outside all variant sets are copied unchanged. Sets must be
    disjoint.
    """
    index = {t: i for i, t in enumerate(ht.types)}
    counts = ht.type_counts()
    remap = np.arange(len(ht.types), dtype=np.int32)
    types = list(ht.types)
    seen = set()
    for vs in variant_sets:
        if seen.intersection(vs.variants):
            raise ValueError("variant sets overlap")
        seen.update(vs.variants)
        present = [(int(counts[index[v]]), -n, v) for n, v in enumerate(vs.variants) if v in index]
        if not present:
            continue
        best = max(present)[2]
        for v in vs.variants:
            if v in index:
                remap[index[v]] = index[best]
    return Corpus(remap[ht.ids], ht.offsets, types, label, 0, ht.tokenizer)


def write_pair(pair: SyntheticPair, ht_path, mt_path, variants_path=None):
    write_corpus(pair.ht, ht_path)
    write_corpus(pair.mt, mt_path)
    if variants_path is not None:
        with open(variants_path, "w", encoding="utf-8") as fh:
            json.dump([vs.to_dict() for vs in pair.variant_sets], fh, indent=2)
            fh.write("\n")
