"""Bounded-memory analysis of corpus files.

A file is read twice: front to back for type counts, length weights and the
forward MTLD pass, then back to front for the backward pass. Memory is
proportional to the vocabulary plus one chunk of lines, never to the number
of tokens in the file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import kernels
from .corpus import (DEFAULT_TOKENIZER, TokenizerConfig, VocabProfile, iter_id_chunks,
                     profile_from_arrays, sentence_weights)
from .diversity import MTLD_THRESHOLD, DiversityReport, _check_threshold, report_from_stats
from .errors import EmptyCorpusError


@dataclass
class FileAnalysis:
    label: str
    path: str
    report: DiversityReport
    profile: VocabProfile
    sentences: int
    dropped_lines: int


def _grow(arr, n, fill=0):
    if arr.shape[0] >= n:
        return arr
    out = np.full(max(n, 2 * arr.shape[0]), fill, dtype=arr.dtype)
    out[:arr.shape[0]] = arr
    return out


def analyze_file(path, config: TokenizerConfig = DEFAULT_TOKENIZER, label=None,
                 mtld_threshold: float = MTLD_THRESHOLD, chunk_lines=16384) -> FileAnalysis:
    """Diversity report and vocabulary profile of a corpus file in two streaming passes."""
    _check_threshold(mtld_threshold)
    if not os.path.exists(path):
        raise FileNotFoundError(f"corpus file not found: {path}")
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]

    vocab: dict[str, int] = {}
    stats: dict = {}
    counts = np.zeros(1024, dtype=np.int64)
    weights = np.zeros(1024, dtype=np.float64)
    stamp = np.full(1024, -1, dtype=np.int64)
    state = (0, 0, 0, 0)
    for ids, lengths in iter_id_chunks(path, config, vocab, chunk_lines, stats=stats):
        n = len(vocab)
        counts = _grow(counts, n)
        weights = _grow(weights, n)
        stamp = _grow(stamp, n, -1)
        counts[:n] += np.bincount(ids, minlength=n)
        weights[:n] += np.bincount(ids, weights=sentence_weights(lengths), minlength=n)
        state = kernels.mtld_scan(ids, stamp, state, mtld_threshold)
    if stats["sentences"] == 0:
        raise EmptyCorpusError(f"{path}: no non-empty lines")
    forward = state

    n = len(vocab)
    stamp = np.full(max(n, 1), -1, dtype=np.int64)
    state = (0, 0, 0, 0)
    for ids, _ in iter_id_chunks(path, config, vocab, chunk_lines, reverse=True):
        if len(vocab) != n:
            raise RuntimeError(f"{path} changed while it was being analyzed")
        state = kernels.mtld_scan(np.ascontiguousarray(ids[::-1]), stamp, state, mtld_threshold)
    backward = state

    types = list(vocab)
    report = report_from_stats(counts[:n], forward, backward, mtld_threshold, label)
    profile = profile_from_arrays(types, counts[:n], weights[:n], stats["sentences"], label)
    return FileAnalysis(label, str(path), report, profile, stats["sentences"],
                        stats["dropped_lines"])


def profile_file(path, config: TokenizerConfig = DEFAULT_TOKENIZER, label=None,
                 chunk_lines=16384) -> VocabProfile:
    """Vocabulary profile of a corpus file in a single streaming pass."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"corpus file not found: {path}")
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    vocab: dict[str, int] = {}
    stats: dict = {}
    counts = np.zeros(1024, dtype=np.int64)
    weights = np.zeros(1024, dtype=np.float64)
    for ids, lengths in iter_id_chunks(path, config, vocab, chunk_lines, stats=stats):
        n = len(vocab)
        counts = _grow(counts, n)
        weights = _grow(weights, n)
        counts[:n] += np.bincount(ids, minlength=n)
        weights[:n] += np.bincount(ids, weights=sentence_weights(lengths), minlength=n)
    n = len(vocab)
    if n == 0:
        raise EmptyCorpusError(f"{path}: no non-empty lines")
    return profile_from_arrays(list(vocab), counts[:n], weights[:n], stats["sentences"], label)
