import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lexbias import kernels
from lexbias.diversity import mtld_factors, new_mtld_state


def scan(ids, n_types, threshold=0.72, chunks=1):
    stamp, state = new_mtld_state(n_types)
    ids = np.asarray(ids, dtype=np.int32)
    for part in np.array_split(ids, chunks):
        state = kernels.mtld_scan(np.ascontiguousarray(part), stamp, state, threshold)
    return mtld_factors(state, threshold)


def oracle_factors(tokens, threshold=0.72):
    m = oracles.mtld_one_direction(tokens, threshold)
    return 0.0 if m is None else len(tokens) / m


def test_backend_selection():
    assert kernels.backend() in kernels.BACKENDS
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass


def test_input_checks():
    stamp, state = new_mtld_state(3)
    with pytest.raises(TypeError):
        kernels.mtld_scan(np.array([0, 1], dtype=np.int64), stamp, state, 0.72)
    with pytest.raises(IndexError):
        kernels.mtld_scan(np.array([0, 5], dtype=np.int32), stamp, state, 0.72)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 9), max_size=120), st.integers(1, 7),
       st.sampled_from([0.5, 0.72, 0.9]))
def test_chunked_scan_matches_oracle(ids, chunks, threshold):
    for name in kernels.BACKENDS:
        with kernels.use_backend(name):
            got = scan(ids, 10, threshold, chunks)
        assert got == pytest.approx(oracle_factors(ids, threshold), rel=1e-12, abs=1e-12)


def test_sentence_scan_matches_concatenation(backend):
    rng = random.Random(0)
    for _ in range(50):
        lengths = [rng.randint(1, 8) for _ in range(rng.randint(1, 30))]
        ids = np.array([rng.randrange(12) for _ in range(sum(lengths))], dtype=np.int32)
        offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        order = np.array([rng.randrange(len(lengths)) for _ in range(len(lengths))], dtype=np.int64)
        stream = np.concatenate([ids[offsets[i]:offsets[i + 1]] for i in order])
        for reverse in (False, True):
            stamp, state = new_mtld_state(12)
            state = kernels.mtld_scan_sentences(ids, offsets, order, reverse, stamp, state, 0.72)
            expected = oracle_factors(list(stream[::-1] if reverse else stream))
            assert mtld_factors(state, 0.72) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_resample_spectrum(backend):
    rng = random.Random(1)
    for _ in range(50):
        lengths = [rng.randint(1, 8) for _ in range(rng.randint(1, 30))]
        ids = np.array([rng.randrange(15) for _ in range(sum(lengths))], dtype=np.int32)
        offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        order = np.array([rng.randrange(len(lengths)) for _ in range(len(lengths))], dtype=np.int64)
        counts = np.zeros(15, dtype=np.int64)
        types, m1, m2 = kernels.resample_spectrum(ids, offsets, order, counts)
        stream = np.concatenate([ids[offsets[i]:offsets[i + 1]] for i in order])
        bc = np.bincount(stream)
        assert (types, m1, m2) == (np.count_nonzero(bc), stream.size, int((bc.astype(np.int64) ** 2).sum()))
        assert not counts.any()


def test_backends_bit_identical():
    if len(kernels.BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(5)
    ids = rng.integers(0, 300, size=20000).astype(np.int32)
    out = []
    for name in sorted(kernels.BACKENDS):
        with kernels.use_backend(name):
            stamp, state = new_mtld_state(300)
            out.append(kernels.mtld_scan(ids, stamp, state, 0.72))
    assert out[0] == out[1]
