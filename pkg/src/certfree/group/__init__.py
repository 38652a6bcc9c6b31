"""Prime-order groups the schemes run over.

Two profiles are provided:

``production-curve-128``
    ristretto255 (prime order ~2**252, 32-byte encodings).  The hot kernels
    come from the compiled libsodium wrapper when it was built, otherwise
    from the pure-Python implementation.  ``CERTFREE_BACKEND`` set to
    ``python`` or ``ext`` forces one of them.

``mock-small-prime``
    The additive group Z_q for a small prime q (7919 by default), generator
    1.  Discrete logs are trivial, which is what makes it useful as a test
    oracle.  Never use it for anything else.

Scalars are plain ``int`` in ``[0, q)``.  Points are opaque: canonical
encoded ``bytes`` for ristretto255, ``int`` for the mock group.  Randomness
always comes from a caller-supplied ``rng(n) -> bytes`` callable such as
``os.urandom``.
"""

from __future__ import annotations

import importlib
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..errors import EntropyError, FormatError, ValidationError

Rng = Callable[[int], bytes]

PRODUCTION = "production-curve-128"
MOCK = "mock-small-prime"

# bytes read from the rng per scalar; 512 bits keeps the mod-q bias < 2**-250
WIDE_BYTES = 64


class Group:
    group_id: str
    order: int
    point_len: int
    scalar_len: int

    @property
    def identity(self):
        raise NotImplementedError

    @property
    def generator(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Group) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        return (self.group_id, self.order)

    # scalars

    def reduce(self, n: int) -> int:
        return n % self.order

    def scalar_from_wide(self, data: bytes) -> int:
        return int.from_bytes(data, "little") % self.order

    def scalar_random(self, rng: Rng) -> int:
        try:
            raw = rng(WIDE_BYTES)
        except Exception as exc:
            raise EntropyError(f"entropy source failed: {exc}") from exc
        if not isinstance(raw, (bytes, bytearray)) or len(raw) != WIDE_BYTES:
            raise EntropyError("entropy source returned a short read")
        return self.scalar_from_wide(raw)

    def encode_scalar(self, a: int) -> bytes:
        return (a % self.order).to_bytes(self.scalar_len, "little")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != self.scalar_len:
            raise FormatError(
                f"scalar must be {self.scalar_len} bytes, got {len(data)}")
        a = int.from_bytes(data, "little")
        if a >= self.order:
            raise ValidationError("non-canonical scalar encoding")
        return a

    # points (implemented by subclasses)

    def base_mul(self, a: int):
        raise NotImplementedError

    def mul(self, a: int, X):
        raise NotImplementedError

    def add(self, X, Y):
        raise NotImplementedError

    def sub(self, X, Y):
        raise NotImplementedError

    def multi_add(self, points: Iterable):
        raise NotImplementedError

    def encode_point(self, X) -> bytes:
        raise NotImplementedError

    def decode_point(self, data: bytes):
        raise NotImplementedError

    def is_point(self, X) -> bool:
        raise NotImplementedError


class RistrettoGroup(Group):
    group_id = PRODUCTION
    order = 2**252 + 27742317777372353535851937790883648493
    point_len = 32
    scalar_len = 32

    def __init__(self, kernels):
        self.kernels = kernels
        self._generator = kernels.scalarmult_base((1).to_bytes(32, "little"))

    def __repr__(self):
        return f"RistrettoGroup(backend={self.kernels.NAME!r})"

    @property
    def backend(self) -> str:
        return self.kernels.NAME

    @property
    def identity(self) -> bytes:
        return bytes(32)

    @property
    def generator(self) -> bytes:
        return self._generator

    def _s(self, a: int) -> bytes:
        return (a % self.order).to_bytes(32, "little")

    def base_mul(self, a):
        return self.kernels.scalarmult_base(self._s(a))

    def mul(self, a, X):
        return self.kernels.scalarmult(self._s(a), X)

    def add(self, X, Y):
        return self.kernels.add(X, Y)

    def sub(self, X, Y):
        return self.kernels.sub(X, Y)

    def multi_add(self, points):
        return self.kernels.multi_add(list(points))

    def encode_point(self, X):
        return bytes(X)

    def decode_point(self, data):
        if len(data) != 32:
            raise FormatError(f"point must be 32 bytes, got {len(data)}")
        data = bytes(data)
        if not self.kernels.is_valid(data):
            raise ValidationError("not a ristretto255 group element")
        return data

    def is_point(self, X):
        return isinstance(X, bytes) and self.kernels.is_valid(X)


class MockGroup(Group):
    """Z_q under addition.  ``a*P`` is ``a mod q``."""

    group_id = MOCK

    def __init__(self, order: int = 7919):
        if order < 3 or any(order % d == 0 for d in range(2, int(order**0.5) + 1)):
            raise ValueError("mock group order must be a prime >= 3")
        self.order = order
        self.point_len = self.scalar_len = (order.bit_length() + 7) // 8

    def __repr__(self):
        return f"MockGroup(order={self.order})"

    backend = "mock"
    identity = 0
    generator = 1

    def base_mul(self, a):
        return a % self.order

    def mul(self, a, X):
        return a * X % self.order

    def add(self, X, Y):
        return (X + Y) % self.order

    def sub(self, X, Y):
        return (X - Y) % self.order

    def multi_add(self, points):
        return sum(points) % self.order

    def encode_point(self, X):
        return X.to_bytes(self.point_len, "little")

    def decode_point(self, data):
        if len(data) != self.point_len:
            raise FormatError(
                f"point must be {self.point_len} bytes, got {len(data)}")
        X = int.from_bytes(data, "little")
        if X >= self.order:
            raise ValidationError("mock point out of range")
        return X

    def is_point(self, X):
        return isinstance(X, int) and 0 <= X < self.order

    def dlog(self, X) -> int:
        """Exhaustive discrete log, the whole point of this group."""
        for a in range(self.order):
            if self.base_mul(a) == X:
                return a
        raise ValidationError("not a group element")


@dataclass
class OpCounts:
    base_mul: int = 0
    mul: int = 0
    add: int = 0

    @property
    def muls(self) -> int:
        return self.base_mul + self.mul

    def reset(self):
        self.base_mul = self.mul = self.add = 0


class CountingGroup(Group):
    """Delegating wrapper that counts group operations.

    Counting convention: ``base_mul`` and ``mul`` count one scalar
    multiplication each; ``add``/``sub`` count one addition; ``multi_add``
    over m points counts m - 1 additions.
    """

    def __init__(self, inner: Group):
        self.inner = inner
        self.counts = OpCounts()

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def __repr__(self):
        return f"CountingGroup({self.inner!r})"

    group_id = property(lambda self: self.inner.group_id)
    order = property(lambda self: self.inner.order)
    point_len = property(lambda self: self.inner.point_len)
    scalar_len = property(lambda self: self.inner.scalar_len)
    identity = property(lambda self: self.inner.identity)
    generator = property(lambda self: self.inner.generator)

    def reset(self):
        self.counts.reset()

    def base_mul(self, a):
        self.counts.base_mul += 1
        return self.inner.base_mul(a)

    def mul(self, a, X):
        self.counts.mul += 1
        return self.inner.mul(a, X)

    def add(self, X, Y):
        self.counts.add += 1
        return self.inner.add(X, Y)

    def sub(self, X, Y):
        self.counts.add += 1
        return self.inner.sub(X, Y)

    def multi_add(self, points):
        points = list(points)
        self.counts.add += max(len(points) - 1, 0)
        return self.inner.multi_add(points)

    def encode_point(self, X):
        return self.inner.encode_point(X)

    def decode_point(self, data):
        return self.inner.decode_point(data)

    def is_point(self, X):
        return self.inner.is_point(X)


def op_counter_wrap(group: Group) -> CountingGroup:
    return CountingGroup(group)


def load_kernels(name: str | None = None):
    """Return the ristretto255 kernel module.

    ``name`` is ``"ext"``, ``"python"`` or ``None``/``"auto"`` (compiled if
    importable).  Defaults to ``$CERTFREE_BACKEND``.
    """
    name = name or os.environ.get("CERTFREE_BACKEND", "auto")
    if name == "python":
        return importlib.import_module("._ristretto_py", __name__)
    try:
        return importlib.import_module("._ristretto_ext", __name__)
    except ImportError:
        if name == "ext":
            raise
        return importlib.import_module("._ristretto_py", __name__)


def available_backends() -> list[str]:
    names = ["python"]
    try:
        importlib.import_module("._ristretto_ext", __name__)
        names.insert(0, "ext")
    except ImportError:
        pass
    return names


_cache: dict = {}


def get_group(profile: str = PRODUCTION, *, backend: str | None = None,
              mock_order: int = 7919) -> Group:
    """Group for a profile name (``production``/``mock`` short names accepted)."""
    if profile in ("production", PRODUCTION):
        kernels = load_kernels(backend)
        key = (PRODUCTION, kernels.NAME)
        if key not in _cache:
            _cache[key] = RistrettoGroup(kernels)
        return _cache[key]
    if profile in ("mock", MOCK):
        return MockGroup(mock_order)
    raise ValueError(f"unknown group profile {profile!r}")


@dataclass(frozen=True)
class GroupProfile:
    group_id: str
    order: int
    point_len: int
    scalar_len: int
    backend: str = field(default="", compare=False)


def describe(group: Group) -> GroupProfile:
    return GroupProfile(group.group_id, group.order, group.point_len,
                        group.scalar_len, getattr(group, "backend", ""))
