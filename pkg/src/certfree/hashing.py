"""Random-oracle instantiations H1..H5, the index derivation and the KDF.

All oracles are SHAKE256 with a distinct ASCII label prefix.  H1's label
also encodes (t, k), so index sets for different parameter choices never
collide.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

LABEL_H2 = b"CFC-H2"
LABEL_H3 = b"CFC-H3"
LABEL_H4 = b"CFC-H4"
LABEL_H5 = b"CFC-H5"
LABEL_KDF = b"CFC-KDF"
LABEL_TRANSCRIPT = b"CFC-KEX-TR"

WIDE = 64


def _xof(data: bytes, n: int) -> bytes:
    return hashlib.shake_256(data).digest(n)


def h1_label(t: int, k: int) -> bytes:
    return b"CFC-H1" + t.to_bytes(4, "little") + k.to_bytes(2, "little")


def _len16(b: bytes) -> bytes:
    return len(b).to_bytes(2, "little") + b


@dataclass(frozen=True)
class IndexSet:
    """k indexes into the master key vector, each in [1, t] (1-based)."""

    indexes: tuple
    gamma: int

    def __iter__(self):
        return iter(self.indexes)

    def __len__(self):
        return len(self.indexes)


def indexes_from_stream(stream: bytes, t: int, k: int) -> IndexSet:
    """Split the first k*log2(t) bits of ``stream`` (MSB first) into indexes."""
    width = t.bit_length() - 1
    gamma = k * width
    nbytes = (gamma + 7) // 8
    if len(stream) < nbytes:
        raise ValueError("hash stream shorter than gamma bits")
    bits = int.from_bytes(stream[:nbytes], "big") >> (8 * nbytes - gamma)
    mask = t - 1
    out = [((bits >> (width * (k - 1 - i))) & mask) + 1 for i in range(k)]
    return IndexSet(tuple(out), gamma)


class HashSuite:
    """The five oracles bound to one group and one (t, k, n) choice."""

    def __init__(self, group, t: int, k: int, n: int = 128):
        if n % 8:
            raise ValueError("n must be a whole number of bytes")
        self.group = group
        self.t = t
        self.k = k
        self.n = n
        self.nbytes = n // 8
        self.gamma = k * (t.bit_length() - 1)
        self._h1 = h1_label(t, k)

    def h1_stream(self, identity: bytes, Q) -> bytes:
        data = (self._h1 + len(identity).to_bytes(4, "little") + identity
                + self.group.encode_point(Q))
        return _xof(data, (self.gamma + 7) // 8)

    def h1_indexes(self, identity: bytes, Q) -> IndexSet:
        return indexes_from_stream(self.h1_stream(identity, Q), self.t, self.k)

    def h2(self, sigma: bytes, m: bytes) -> int:
        return self.group.scalar_from_wide(_xof(LABEL_H2 + sigma + m, WIDE))

    def h3(self, K) -> bytes:
        return _xof(LABEL_H3 + self.group.encode_point(K), self.nbytes)

    def h4_expand(self, sigma: bytes, out_len: int) -> bytes:
        # shake output is prefix-stable, so out_len == n/8 is the plain H4
        if out_len == 0:
            return b""
        return _xof(LABEL_H4 + sigma, out_len)

    def h5(self, m: bytes, R) -> int:
        data = LABEL_H5 + len(m).to_bytes(8, "little") + m + self.group.encode_point(R)
        return self.group.scalar_from_wide(_xof(data, WIDE))

    def kdf(self, K, transcript: bytes) -> bytes:
        th = _xof(LABEL_TRANSCRIPT + transcript, 32)
        return _xof(LABEL_KDF + self.group.encode_point(K) + th, 32)


def kex_transcript(first_id: bytes, first_msg: bytes,
                   second_id: bytes, second_msg: bytes) -> bytes:
    return _len16(first_id) + first_msg + _len16(second_id) + second_msg
