"""Pure-Python scoring kernels (fallback when the compiled extension is absent).

All buffers are flat: ``counts`` and ``ids`` are ``array('i')`` of length K,
``truth`` and masks are ``bytearray``.
"""


def accumulate(counts, ids, truth):
    """counts[k] += truth[ids[k]] for every datum k."""
    for k, i in enumerate(ids):
        if truth[i]:
            counts[k] += 1


def argmax(counts):
    """Return ``(c, mask, n)``: the maximum, the 0/1 mask of maximisers and their number."""
    c = max(counts)
    mask = bytearray(1 if x == c else 0 for x in counts)
    return c, mask, mask.count(1)


def count_equal(counts, target):
    return sum(1 for x in counts if x == target)


def equal_mask(counts, target):
    return bytearray(1 if x == target else 0 for x in counts)


def masked_count_equal(mask, counts, target):
    return sum(1 for m, x in zip(mask, counts) if m and x == target)


_TO_ASCII = bytes.maketrans(b"\x00\x01", b"01")
_FROM_ASCII = bytes.maketrans(b"01", b"\x00\x01")


def pack_bits(flags):
    """0/1 bytes -> int with bit j set iff flags[j]."""
    if not flags:
        return 0
    return int(bytes(flags).translate(_TO_ASCII)[::-1], 2)


def unpack_bits(x, n):
    """Inverse of ``pack_bits`` for ``n`` flags."""
    if n == 0:
        return bytearray()
    return bytearray(format(x, "0%db" % n)[::-1].encode("ascii").translate(_FROM_ASCII))
