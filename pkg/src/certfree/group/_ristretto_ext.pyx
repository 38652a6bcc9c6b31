# cython: language_level=3, boundscheck=False, wraparound=False
"""ristretto255 kernels backed by libsodium.

Same calling convention as ``_ristretto_py``: points are canonical 32-byte
encodings, scalars are 32-byte little-endian strings.
"""

from libc.string cimport memcpy, memset

cdef extern from "sodium.h":
    int sodium_init() nogil
    int crypto_core_ristretto255_is_valid_point(const unsigned char *p) nogil
    int crypto_core_ristretto255_add(unsigned char *r, const unsigned char *p,
                                     const unsigned char *q) nogil
    int crypto_core_ristretto255_sub(unsigned char *r, const unsigned char *p,
                                     const unsigned char *q) nogil
    int crypto_scalarmult_ristretto255(unsigned char *q, const unsigned char *n,
                                       const unsigned char *p) nogil
    int crypto_scalarmult_ristretto255_base(unsigned char *q,
                                            const unsigned char *n) nogil

if sodium_init() < 0:
    raise ImportError("libsodium failed to initialise")

NAME = "libsodium"

_L = 2**252 + 27742317777372353535851937790883648493
_MINUS_ONE = (_L - 1).to_bytes(32, "little")


cdef inline bint _valid(bytes p):
    # libsodium 1.0.18 ignores bit 255 when decoding; canonical form requires it clear
    if len(p) != 32 or (<const unsigned char *>p)[31] & 0x80:
        return False
    return crypto_core_ristretto255_is_valid_point(<const unsigned char *>p) == 1


cdef inline void _check_point(bytes p) except *:
    if not _valid(p):
        raise ValueError("invalid ristretto255 encoding")


cdef inline void _check_scalar(bytes n) except *:
    if len(n) != 32:
        raise ValueError("scalar must be 32 bytes")


def is_valid(p):
    if not isinstance(p, (bytes, bytearray)) or len(p) != 32:
        return False
    return _valid(bytes(p))


def add(bytes p, bytes q):
    cdef unsigned char r[32]
    _check_point(p)
    _check_point(q)
    if crypto_core_ristretto255_add(r, <const unsigned char *>p, <const unsigned char *>q) != 0:
        raise ValueError("invalid ristretto255 encoding")
    return r[:32]


def sub(bytes p, bytes q):
    cdef unsigned char r[32]
    _check_point(p)
    _check_point(q)
    if crypto_core_ristretto255_sub(r, <const unsigned char *>p, <const unsigned char *>q) != 0:
        raise ValueError("invalid ristretto255 encoding")
    return r[:32]


def neg(bytes p):
    return scalarmult(_MINUS_ONE, p)


def scalarmult(bytes n, bytes p):
    cdef unsigned char r[32]
    _check_scalar(n)
    _check_point(p)
    memset(r, 0, 32)
    # a nonzero return after validation means the product is the identity
    if crypto_scalarmult_ristretto255(r, <const unsigned char *>n, <const unsigned char *>p) != 0:
        return bytes(32)
    return r[:32]


def scalarmult_base(bytes n):
    cdef unsigned char r[32]
    _check_scalar(n)
    memset(r, 0, 32)
    if crypto_scalarmult_ristretto255_base(r, <const unsigned char *>n) != 0:
        return bytes(32)
    return r[:32]


def multi_add(points):
    cdef unsigned char acc[32]
    cdef unsigned char tmp[32]
    cdef bytes b
    memset(acc, 0, 32)
    for p in points:
        b = <bytes?>p
        _check_point(b)
        if crypto_core_ristretto255_add(tmp, acc, <const unsigned char *>b) != 0:
            raise ValueError("invalid ristretto255 encoding")
        memcpy(acc, tmp, 32)
    return acc[:32]
