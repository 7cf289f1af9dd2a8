"""Pure-Python/numpy versions of the compiled kernels in ``_ckernels.pyx``.

Used when the extension is not built, or when ``LEXBIAS_KERNELS=python``.
Results are bit-identical to the compiled versions.
"""

import numpy as np


def mtld_scan(ids, stamp, seg_id, seg_len, seg_types, factors, threshold):
    seen = stamp.tolist()
    for t in ids.tolist():
        seg_len += 1
        if seen[t] != seg_id:
            seen[t] = seg_id
            seg_types += 1
        if seg_types / seg_len < threshold:
            factors += 1
            seg_id += 1
            seg_len = 0
            seg_types = 0
    stamp[:] = seen
    return seg_id, seg_len, seg_types, factors


def _gather(ids, offsets, order, reverse):
    if len(order) == 0:
        return ids[:0]
    starts = offsets[order]
    lengths = offsets[order + 1] - starts
    # index of every token of every selected sentence, in selection order
    base = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
    stream = ids[base + np.arange(int(lengths.sum()))]
    return stream[::-1] if reverse else stream


def mtld_scan_sentences(ids, offsets, order, reverse, stamp,
                        seg_id, seg_len, seg_types, factors, threshold):
    stream = _gather(ids, offsets, order, reverse)
    return mtld_scan(stream, stamp, seg_id, seg_len, seg_types, factors, threshold)


def resample_spectrum(ids, offsets, order, counts):
    stream = _gather(ids, offsets, order, False)
    c = np.bincount(stream, minlength=counts.shape[0]).astype(np.int64)
    return int(np.count_nonzero(c)), int(stream.shape[0]), int(c @ c)
