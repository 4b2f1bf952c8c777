# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scoring kernels; same contract as ``_kernels_py``."""


def accumulate(int[::1] counts, const int[::1] ids, const unsigned char[::1] truth):
    cdef Py_ssize_t k, n = ids.shape[0]
    if counts.shape[0] != n:
        raise ValueError("counts and ids differ in length")
    for k in range(n):
        counts[k] += truth[ids[k]]


def argmax(const int[::1] counts):
    cdef Py_ssize_t k, n = counts.shape[0]
    cdef int c = counts[0]
    cdef Py_ssize_t hits = 0
    for k in range(1, n):
        if counts[k] > c:
            c = counts[k]
    mask = bytearray(n)
    cdef unsigned char[::1] m = mask
    for k in range(n):
        if counts[k] == c:
            m[k] = 1
            hits += 1
    return c, mask, hits


def count_equal(const int[::1] counts, int target):
    cdef Py_ssize_t k, hits = 0
    for k in range(counts.shape[0]):
        if counts[k] == target:
            hits += 1
    return hits


def equal_mask(const int[::1] counts, int target):
    cdef Py_ssize_t k, n = counts.shape[0]
    mask = bytearray(n)
    cdef unsigned char[::1] m = mask
    for k in range(n):
        if counts[k] == target:
            m[k] = 1
    return mask


def masked_count_equal(const unsigned char[::1] mask, const int[::1] counts, int target):
    cdef Py_ssize_t k, hits = 0
    for k in range(counts.shape[0]):
        if mask[k] and counts[k] == target:
            hits += 1
    return hits


def pack_bits(const unsigned char[::1] flags):
    cdef Py_ssize_t j, n = flags.shape[0]
    buf = bytearray((n + 7) // 8)
    cdef unsigned char[::1] b = buf
    for j in range(n):
        if flags[j]:
            b[j >> 3] |= 1 << (j & 7)
    return int.from_bytes(buf, "little")


def unpack_bits(x, Py_ssize_t n):
    raw = x.to_bytes((n + 7) // 8, "little")
    cdef const unsigned char[::1] b = raw
    out = bytearray(n)
    cdef unsigned char[::1] o = out
    cdef Py_ssize_t j
    for j in range(n):
        o[j] = (b[j >> 3] >> (j & 7)) & 1
    return out
