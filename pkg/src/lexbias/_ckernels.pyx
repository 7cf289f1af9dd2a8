# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`lexbias._pykernels` exactly."""

from libc.stdint cimport int32_t, int64_t


def mtld_scan(const int32_t[::1] ids, int64_t[::1] stamp,
              int64_t seg_id, int64_t seg_len, int64_t seg_types,
              int64_t factors, double threshold):
    cdef Py_ssize_t i, n = ids.shape[0]
    cdef int32_t t
    with nogil:
        for i in range(n):
            t = ids[i]
            seg_len += 1
            if stamp[t] != seg_id:
                stamp[t] = seg_id
                seg_types += 1
            if <double>seg_types / <double>seg_len < threshold:
                factors += 1
                seg_id += 1
                seg_len = 0
                seg_types = 0
    return seg_id, seg_len, seg_types, factors


def mtld_scan_sentences(const int32_t[::1] ids, const int64_t[::1] offsets,
                        const int64_t[::1] order, bint reverse,
                        int64_t[::1] stamp,
                        int64_t seg_id, int64_t seg_len, int64_t seg_types,
                        int64_t factors, double threshold):
    cdef Py_ssize_t k, j, m = order.shape[0]
    cdef int64_t s, lo, hi
    cdef int32_t t
    with nogil:
        for k in range(m):
            s = order[m - 1 - k] if reverse else order[k]
            lo = offsets[s]
            hi = offsets[s + 1]
            for j in range(hi - lo):
                t = ids[hi - 1 - j] if reverse else ids[lo + j]
                seg_len += 1
                if stamp[t] != seg_id:
                    stamp[t] = seg_id
                    seg_types += 1
                if <double>seg_types / <double>seg_len < threshold:
                    factors += 1
                    seg_id += 1
                    seg_len = 0
                    seg_types = 0
    return seg_id, seg_len, seg_types, factors


def resample_spectrum(const int32_t[::1] ids, const int64_t[::1] offsets,
                      const int64_t[::1] order, int64_t[::1] counts):
    cdef Py_ssize_t k, m = order.shape[0]
    cdef int64_t s, j, c, types = 0, m1 = 0, m2 = 0
    with nogil:
        for k in range(m):
            s = order[k]
            for j in range(offsets[s], offsets[s + 1]):
                c = counts[ids[j]]
                if c == 0:
                    types += 1
                m2 += 2 * c + 1
                counts[ids[j]] = c + 1
            m1 += offsets[s + 1] - offsets[s]
        # leave the scratch buffer zeroed for the next call
        for k in range(m):
            s = order[k]
            for j in range(offsets[s], offsets[s + 1]):
                counts[ids[j]] = 0
    return types, m1, m2
