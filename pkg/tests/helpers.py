"""Scripted entropy and stubbed hash suites for hand-computed examples."""

from certfree.hashing import HashSuite


class ScriptedRng:
    """rng(n) that replays values: ints are encoded little-endian to n bytes."""

    def __init__(self, *items):
        self.items = list(items)

    def __call__(self, n):
        item = self.items.pop(0)
        if isinstance(item, int):
            return item.to_bytes(n, "little")
        assert len(item) == n
        return item


def stream_for(indexes, t):
    """Hash stream whose leading bits are the 0-based chunks of ``indexes``."""
    width = t.bit_length() - 1
    bits = "".join(format(j - 1, f"0{width}b") for j in indexes)
    bits += "0" * (-len(bits) % 8)
    return int(bits, 2).to_bytes(len(bits) // 8, "big")


class StubSuite(HashSuite):
    """HashSuite with a scripted H1 stream and optionally a fixed H5."""

    def __init__(self, group, t, k, n=128, indexes=None, e=None):
        super().__init__(group, t, k, n)
        self.fixed_indexes = indexes
        self.fixed_e = e

    def h1_stream(self, identity, Q):
        if self.fixed_indexes is None:
            return super().h1_stream(identity, Q)
        return stream_for(self.fixed_indexes, self.t)

    def h5(self, m, R):
        if self.fixed_e is None:
            return super().h5(m, R)
        return self.fixed_e
