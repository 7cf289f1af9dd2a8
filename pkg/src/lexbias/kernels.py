"""Kernel backend selection.

The compiled extension is used when importable. Set ``LEXBIAS_KERNELS`` to
``python`` to force the fallback, or ``cython`` to fail loudly if the
extension is missing.
"""

import os
from contextlib import contextmanager

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def _select(choice):
    if choice == "auto":
        return "cython" if "cython" in BACKENDS else "python"
    if choice not in ("python", "cython"):
        raise ValueError(f"unknown kernel backend {choice!r}")
    if choice not in BACKENDS:
        raise ImportError("lexbias._ckernels is not built; reinstall with Cython available")
    return choice


BACKEND = _select(os.environ.get("LEXBIAS_KERNELS", "auto"))
_impl = BACKENDS[BACKEND]


def backend():
    return BACKEND


@contextmanager
def use_backend(name):
    """Temporarily route every kernel call through backend ``name``."""
    global BACKEND, _impl
    saved = BACKEND, _impl
    BACKEND = _select(name)
    _impl = BACKENDS[BACKEND]
    try:
        yield
    finally:
        BACKEND, _impl = saved


def _check_ids(ids, width, bounds=True):
    if ids.dtype != np.int32 or not ids.flags.c_contiguous:
        raise TypeError("ids must be a C-contiguous int32 array")
    # the compiled loops do no bounds checking
    if bounds and ids.size and (int(ids.max()) >= width or int(ids.min()) < 0):
        raise IndexError("token id outside the scratch buffer")


def mtld_scan(ids, stamp, state, threshold):
    """Advance an MTLD factor scan over ``ids``.

    ``state`` is ``(segment_id, segment_len, segment_types, factors)``;
    ``stamp[t] == segment_id`` marks type ``t`` as seen in the open segment.
    Returns the new state; call repeatedly to scan a stream in chunks.
    """
    _check_ids(ids, stamp.shape[0])
    return _impl.mtld_scan(ids, stamp, *state, threshold)


def mtld_scan_sentences(ids, offsets, order, reverse, stamp, state, threshold,
                        validated=False):
    """As :func:`mtld_scan`, over the sentences ``order`` of a corpus.

    With ``reverse`` the concatenated stream is scanned back to front.
    Pass ``validated=True`` to skip the O(tokens) id range check when the
    caller already made it (e.g. once before a bootstrap loop).
    """
    _check_ids(ids, stamp.shape[0], not validated)
    return _impl.mtld_scan_sentences(ids, offsets, order, bool(reverse), stamp,
                                     *state, threshold)


def resample_spectrum(ids, offsets, order, counts, validated=False):
    """Return ``(types, M1, M2)`` for the multiset of sentences ``order``.

    ``counts`` is an all-zero int64 scratch buffer, left zeroed on return.
    """
    _check_ids(ids, counts.shape[0], not validated)
    return _impl.resample_spectrum(ids, offsets, order, counts)
