"""Corpus loading, tokenization, train/test/dev splitting and vocabulary profiles.

Sentences are stored as one flat ``int32`` array of type ids plus an
``offsets`` array (sentence ``i`` is ``ids[offsets[i]:offsets[i + 1]]``),
which keeps multi-million-token corpora compact and lets the kernels in
:mod:`lexbias.kernels` walk them without Python objects per token.
"""

from __future__ import annotations

import json
import os
import sys
import unicodedata
from array import array
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CorpusDecodeError, EmptyCorpusError, SplitSizeError

SPLIT_RULES = ("whitespace",)

#: recorded in split manifests so a split can be regenerated bit-for-bit
SHUFFLE_PRNG = f"numpy.random.PCG64/Generator.permutation (numpy {np.__version__})"


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = False
    strip_punctuation: bool = False
    split_rule: str = "whitespace"

    def __post_init__(self):
        if self.split_rule not in SPLIT_RULES:
            raise ValueError(f"unknown split rule {self.split_rule!r}; expected one of {SPLIT_RULES}")

    def to_dict(self):
        return asdict(self)


DEFAULT_TOKENIZER = TokenizerConfig()


@lru_cache(maxsize=1)
def _punctuation_table():
    return {
        cp: None
        for cp in range(sys.maxunicode + 1)
        if unicodedata.category(chr(cp)).startswith("P")
    }


def _decode(raw: bytes, lineno, path=None) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(path, lineno, exc.reason) from exc


def tokenize(line, config: TokenizerConfig = DEFAULT_TOKENIZER, lineno=None) -> list[str]:
    """Split one line into tokens.

    ``line`` may be ``bytes``, in which case it is decoded as UTF-8 and a
    failure raises :class:`CorpusDecodeError` carrying ``lineno``.
    Tokens emptied by punctuation stripping are dropped.
    """
    if isinstance(line, (bytes, bytearray)):
        line = _decode(bytes(line), lineno)
    if config.lowercase:
        line = line.lower()
    tokens = line.split()
    if config.strip_punctuation:
        table = _punctuation_table()
        tokens = [t for t in (tok.translate(table) for tok in tokens) if t]
    return tokens


def _token_fn(config: TokenizerConfig):
    # fast path for the default configuration; str.split already handles CRLF
    if not config.lowercase and not config.strip_punctuation:
        return str.split
    return lambda line: tokenize(line, config)


def iter_lines(path) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, text)`` for a UTF-8 file, 1-based, line ending removed."""
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, 1):
            yield lineno, _decode(raw, lineno, path).rstrip("\r\n")


def iter_lines_reversed(path, block_size=1 << 20) -> Iterator[str]:
    """Yield the lines of ``path`` last to first, reading fixed-size blocks from the end.

    Memory stays bounded by ``block_size`` plus the longest line. Splitting
    on the ``\\n`` byte is safe for UTF-8, which never uses it inside a
    multi-byte sequence.
    """
    with open(path, "rb") as fh:
        fh.seek(0, os.SEEK_END)
        pos = fh.tell()
        tail = b""
        first = True
        from_end = 0
        while pos > 0:
            step = min(block_size, pos)
            pos -= step
            fh.seek(pos)
            pieces = (fh.read(step) + tail).split(b"\n")
            tail = pieces[0]
            rest = pieces[1:]
            if first:
                # a trailing newline terminates the last line rather than opening a new one
                if rest and rest[-1] == b"":
                    rest.pop()
                first = False
            for raw in reversed(rest):
                from_end += 1
                yield _decode(raw, f"-{from_end}", path).rstrip("\r")
        if tail or not first:
            from_end += 1
            yield _decode(tail, f"-{from_end}", path).rstrip("\r")


def iter_id_chunks(path, config: TokenizerConfig, vocab: dict, chunk_lines=16384,
                   reverse=False, stats: dict | None = None):
    """Tokenize ``path`` in chunks of lines, interning tokens into ``vocab``.

    Yields ``(ids, lengths)`` per chunk: an ``int32`` id array and the
    lengths of its (non-empty) sentences. With ``reverse`` the chunks come
    from the end of the file first, but each chunk's contents keep their
    original order. Empty lines are skipped and tallied in
    ``stats["dropped_lines"]``; ``stats["sentences"]`` counts the rest.
    """
    split = _token_fn(config)
    get = vocab.get
    if stats is None:
        stats = {}
    stats.setdefault("dropped_lines", 0)
    stats.setdefault("sentences", 0)

    def flush(lines):
        ids = array("i")
        lengths = array("q")
        for line in lines:
            toks = split(line)
            if not toks:
                stats["dropped_lines"] += 1
                continue
            for tok in toks:
                i = get(tok)
                if i is None:
                    i = vocab[tok] = len(vocab)
                ids.append(i)
            lengths.append(len(toks))
        stats["sentences"] += len(lengths)
        return np.frombuffer(ids, dtype=np.int32), np.frombuffer(lengths, dtype=np.int64)

    buf = []
    if reverse:
        for line in iter_lines_reversed(path):
            buf.append(line)
            if len(buf) >= chunk_lines:
                buf.reverse()
                yield flush(buf)
                buf = []
        if buf:
            buf.reverse()
            yield flush(buf)
    else:
        for _, line in iter_lines(path):
            buf.append(line)
            if len(buf) >= chunk_lines:
                yield flush(buf)
                buf = []
        if buf:
            yield flush(buf)


class Corpus:
    """An ordered sequence of non-empty tokenized sentences.

    ``types[i]`` is the surface form of id ``i``. A corpus derived by
    :meth:`subset` keeps its parent's type table, so ``types`` may list forms
    that no longer occur; use :attr:`type_count` for the number that do.
    """

    __slots__ = ("ids", "offsets", "types", "label", "dropped_lines", "tokenizer")

    def __init__(self, ids, offsets, types, label="", dropped_lines=0, tokenizer=None):
        ids = np.ascontiguousarray(ids, dtype=np.int32)
        offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        if offsets.ndim != 1 or offsets.size == 0 or offsets[0] != 0 or offsets[-1] != ids.size:
            raise ValueError("offsets must start at 0 and end at len(ids)")
        if np.any(np.diff(offsets) <= 0):
            raise ValueError("corpus sentences must be non-empty")
        self.ids = ids
        self.offsets = offsets
        self.types = list(types)
        self.label = label
        self.dropped_lines = dropped_lines
        self.tokenizer = tokenizer or DEFAULT_TOKENIZER

    @classmethod
    def from_sentences(cls, sentences: Iterable[Sequence[str]], label="", tokenizer=None):
        """Build a corpus from token lists; empty sentences are dropped and counted."""
        vocab: dict[str, int] = {}
        ids = array("i")
        offsets = array("q", [0])
        dropped = 0
        for sent in sentences:
            if isinstance(sent, str):
                raise TypeError("sentences must be sequences of tokens, not strings")
            if not sent:
                dropped += 1
                continue
            for tok in sent:
                ids.append(vocab.setdefault(tok, len(vocab)))
            offsets.append(len(ids))
        return cls(np.frombuffer(ids, dtype=np.int32), np.frombuffer(offsets, dtype=np.int64),
                   list(vocab), label, dropped, tokenizer)

    @classmethod
    def from_tokens(cls, tokens: Sequence[str], label=""):
        """A single-sentence corpus, handy for metric examples over a bare token list."""
        return cls.from_sentences([list(tokens)] if tokens else [], label)

    def __len__(self):
        return self.offsets.size - 1

    def __iter__(self):
        types = self.types
        for i in range(len(self)):
            yield [types[t] for t in self.ids[self.offsets[i]:self.offsets[i + 1]].tolist()]

    def __getitem__(self, i):
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return [self.types[t] for t in self.ids[self.offsets[i]:self.offsets[i + 1]].tolist()]

    def __repr__(self):
        return (f"Corpus(label={self.label!r}, sentences={len(self)}, "
                f"tokens={self.token_count}, dropped_lines={self.dropped_lines})")

    @property
    def sentences(self) -> list[list[str]]:
        return list(self)

    @property
    def token_count(self) -> int:
        return int(self.ids.size)

    @property
    def lengths(self):
        return np.diff(self.offsets)

    @property
    def type_count(self) -> int:
        return int(np.count_nonzero(self.type_counts()))

    def type_counts(self):
        """Occurrence count per id, indexed like :attr:`types`."""
        return np.bincount(self.ids, minlength=len(self.types))

    def tokens(self) -> list[str]:
        types = self.types
        return [types[t] for t in self.ids.tolist()]

    def subset(self, indices, label=None):
        """Sentences ``indices`` (in that order, repeats allowed) as a new corpus."""
        indices = np.asarray(indices, dtype=np.int64)
        lengths = self.lengths[indices]
        offsets = np.zeros(indices.size + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        if indices.size:
            starts = self.offsets[indices]
            pos = np.repeat(starts - offsets[:-1], lengths) + np.arange(offsets[-1])
            ids = self.ids[pos]
        else:
            ids = self.ids[:0]
        return Corpus(ids, offsets, self.types, self.label if label is None else label,
                      0, self.tokenizer)

    def concat(self, other, label=None):
        """This corpus followed by ``other``, re-interning ``other``'s types."""
        vocab = {t: i for i, t in enumerate(self.types)}
        remap = np.array([vocab.setdefault(t, len(vocab)) for t in other.types], dtype=np.int32)
        ids = np.concatenate([self.ids, remap[other.ids] if other.ids.size else other.ids])
        offsets = np.concatenate([self.offsets, other.offsets[1:] + self.offsets[-1]])
        return Corpus(ids, offsets, list(vocab), self.label if label is None else label,
                      0, self.tokenizer)


def load_corpus(path, config: TokenizerConfig = DEFAULT_TOKENIZER, label=None) -> Corpus:
    """Read a one-sentence-per-line UTF-8 file, dropping empty lines."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"corpus file not found: {path}")
    vocab: dict[str, int] = {}
    stats: dict = {}
    id_parts, len_parts = [], []
    for ids, lengths in iter_id_chunks(path, config, vocab, stats=stats):
        id_parts.append(ids)
        len_parts.append(lengths)
    ids = np.concatenate(id_parts) if id_parts else np.zeros(0, dtype=np.int32)
    lengths = np.concatenate(len_parts) if len_parts else np.zeros(0, dtype=np.int64)
    offsets = np.zeros(lengths.size + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    return Corpus(ids, offsets, list(vocab), label, stats["dropped_lines"], config)


@dataclass
class ParallelCorpus:
    source: Corpus
    target: Corpus
    dropped_pairs: int = 0

    def __post_init__(self):
        if len(self.source) != len(self.target):
            raise ValueError(
                f"source has {len(self.source)} sentences but target has {len(self.target)}"
            )

    def __len__(self):
        return len(self.source)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Sequence[str], Sequence[str]]],
                   source_label="src", target_label="trg"):
        """Build from aligned token lists, dropping pairs where either side is empty."""
        src, trg = [], []
        dropped = 0
        for s, t in pairs:
            if not s or not t:
                dropped += 1
                continue
            src.append(s)
            trg.append(t)
        return cls(Corpus.from_sentences(src, source_label),
                   Corpus.from_sentences(trg, target_label), dropped)

    def subset(self, indices):
        return ParallelCorpus(self.source.subset(indices), self.target.subset(indices))


def load_parallel(src_path, trg_path, config: TokenizerConfig = DEFAULT_TOKENIZER,
                  source_label=None, target_label=None) -> ParallelCorpus:
    """Load line-aligned source/target files, dropping pairs with an empty side."""
    for p in (src_path, trg_path):
        if not os.path.exists(p):
            raise FileNotFoundError(f"corpus file not found: {p}")
    split = _token_fn(config)
    src, trg = [], []
    dropped = 0
    s_iter, t_iter = iter_lines(src_path), iter_lines(trg_path)
    while True:
        s_line = next(s_iter, None)
        t_line = next(t_iter, None)
        if s_line is None or t_line is None:
            if s_line is not None or t_line is not None:
                longer = src_path if s_line is not None else trg_path
                raise ValueError(f"{src_path} and {trg_path} differ in line count ({longer} is longer)")
            break
        s_toks, t_toks = split(s_line[1]), split(t_line[1])
        if not s_toks or not t_toks:
            dropped += 1
            continue
        src.append(s_toks)
        trg.append(t_toks)
    label = lambda p, given: given or os.path.splitext(os.path.basename(p))[0]
    pc = ParallelCorpus(Corpus.from_sentences(src, label(src_path, source_label), config),
                        Corpus.from_sentences(trg, label(trg_path, target_label), config),
                        dropped)
    return pc


@dataclass(frozen=True)
class SplitSpec:
    train_size: int
    test_size: int
    dev_size: int
    seed: int = 0

    def __post_init__(self):
        for name in ("train_size", "test_size", "dev_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def total(self):
        return self.train_size + self.test_size + self.dev_size


def split_permutation(n, seed):
    return np.random.Generator(np.random.PCG64(seed)).permutation(n)


def split_parallel(pc: ParallelCorpus, spec: SplitSpec):
    """Shuffle aligned pairs with ``spec.seed`` and cut train, test, dev in that order."""
    n = len(pc)
    if spec.total > n:
        raise SplitSizeError(spec.total, n)
    perm = split_permutation(n, spec.seed)
    a = spec.train_size
    b = a + spec.test_size
    c = b + spec.dev_size
    return pc.subset(perm[:a]), pc.subset(perm[a:b]), pc.subset(perm[b:c])


def write_corpus(corpus: Corpus, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sent in corpus:
            fh.write(" ".join(sent))
            fh.write("\n")


def write_split(splits, prefix, spec: SplitSpec, config: TokenizerConfig = DEFAULT_TOKENIZER,
                dropped_pairs=0, extra=None):
    """Write ``<prefix>.{train,test,dev}.{src,trg}`` and ``<prefix>.manifest.json``.

    Returns the list of paths written, manifest last.
    """
    written = []
    parent = os.path.dirname(str(prefix))
    if parent:
        os.makedirs(parent, exist_ok=True)
    for name, pc in zip(("train", "test", "dev"), splits):
        for side, corpus in (("src", pc.source), ("trg", pc.target)):
            path = f"{prefix}.{name}.{side}"
            write_corpus(corpus, path)
            written.append(path)
    manifest = {
        "seed": spec.seed,
        "prng": SHUFFLE_PRNG,
        "sizes": {"train": spec.train_size, "test": spec.test_size, "dev": spec.dev_size},
        "dropped_pairs": dropped_pairs,
        "tokenizer": config.to_dict(),
    }
    if extra:
        manifest.update(extra)
    path = f"{prefix}.manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    written.append(path)
    return written


@dataclass(frozen=True)
class VocabEntry:
    raw_count: int
    length_weighted: float
    probability: float


@dataclass
class VocabProfile:
    """Per-type counts and sentence-length-normalized probabilities.

    Each occurrence of a word contributes ``1 / len(sentence)`` to its
    ``length_weighted`` mass, so the masses sum to the number of sentences;
    ``probability`` rescales them to sum to one.
    """

    types: list
    raw_counts: np.ndarray
    length_weighted: np.ndarray
    probability: np.ndarray
    label: str = ""
    _index: dict = field(default=None, repr=False, compare=False)

    @property
    def type_count(self) -> int:
        return len(self.types)

    @property
    def token_count(self) -> int:
        return int(self.raw_counts.sum())

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {t: i for i, t in enumerate(self.types)}
        return self._index

    @property
    def entries(self) -> dict:
        return {
            t: VocabEntry(int(c), float(w), float(p))
            for t, c, w, p in zip(self.types, self.raw_counts, self.length_weighted, self.probability)
        }

    def __contains__(self, word):
        return word in self.index

    def __len__(self):
        return len(self.types)

    def raw_count(self, word) -> int:
        i = self.index.get(word)
        return 0 if i is None else int(self.raw_counts[i])

    def prob(self, word) -> float:
        i = self.index.get(word)
        return 0.0 if i is None else float(self.probability[i])


def profile_from_arrays(types, counts, weights, n_sentences, label="") -> VocabProfile:
    """Build a profile from per-id counts and length weights, dropping unused ids.

    The weights of a corpus sum to its sentence count, which is used as the
    normalizer: it is exact, so two corpora that place a word identically
    give it bit-identical probabilities.
    """
    counts = np.asarray(counts)
    present = np.flatnonzero(counts)
    if present.size == 0 or n_sentences < 1:
        raise EmptyCorpusError("cannot profile an empty corpus")
    w = np.asarray(weights, dtype=np.float64)[present]
    return VocabProfile(
        types=[types[i] for i in present.tolist()],
        raw_counts=counts[present].astype(np.int64),
        length_weighted=w,
        probability=w / n_sentences,
        label=label,
    )


def sentence_weights(lengths):
    """Per-token weight ``1 / len(sentence)`` for sentences of the given lengths."""
    lengths = np.asarray(lengths)
    return np.repeat(1.0 / lengths, lengths)


def build_vocab_profile(corpus: Corpus) -> VocabProfile:
    if corpus.token_count == 0:
        raise EmptyCorpusError("cannot profile an empty corpus")
    n = len(corpus.types)
    counts = np.bincount(corpus.ids, minlength=n)
    weights = np.bincount(corpus.ids, weights=sentence_weights(corpus.lengths), minlength=n)
    return profile_from_arrays(corpus.types, counts, weights, len(corpus), corpus.label)


def vocab_size(corpus: Corpus) -> int:
    return corpus.type_count
