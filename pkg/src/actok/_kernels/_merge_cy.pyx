# cython: boundscheck=False, wraparound=False, nonecheck=False
"""Compiled merge kernels. Semantics must match _merge_py exactly."""

import numpy as np


def apply_merge(buf, int a, int b, int z):
    """Return a new buffer with (a, b) -> z applied left-to-right."""
    cdef const int[::1] src = np.ascontiguousarray(buf, dtype=np.int32)
    cdef Py_ssize_t n = src.shape[0]
    out_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] out = out_arr
    cdef Py_ssize_t i = 0, j = 0
    while i < n:
        if i + 1 < n and src[i] == a and src[i + 1] == b:
            out[j] = z
            i += 2
        else:
            out[j] = src[i]
            i += 1
        j += 1
    return out_arr[:j].copy()


def encode_stream(stream, merges, int base_size):
    """Apply every merge in training order to one stream."""
    cdef const int[:, ::1] table = np.ascontiguousarray(merges, dtype=np.int32).reshape(-1, 2)
    cdef Py_ssize_t n_merges = table.shape[0]
    buf_arr = np.ascontiguousarray(stream, dtype=np.int32).copy()
    cdef Py_ssize_t n = buf_arr.shape[0]
    cdef int[::1] buf = buf_arr
    cdef Py_ssize_t r, i, j
    cdef int a, b, z
    for r in range(n_merges):
        a = table[r, 0]
        b = table[r, 1]
        z = base_size + <int> r
        i = 0
        j = 0
        while i < n:
            if i + 1 < n and buf[i] == a and buf[i + 1] == b:
                buf[j] = z
                i += 2
            else:
                buf[j] = buf[i]
                i += 1
            j += 1
        n = j
    return buf_arr[:n].copy()
