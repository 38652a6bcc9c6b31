"""Trusted-authority side: system setup, IDB key extraction, CL partial keys.

One authority object plays both the identity-based PKG and the
certificateless KGC role; the master key pair is shared between them,
which is what lets users of either kind talk to each other.
"""

from __future__ import annotations

import copy
import enum
import math
from dataclasses import dataclass, field

from .errors import CertFreeError, ParameterError, ValidationError
from .group import MOCK, Group, Rng
from .hashing import HashSuite

DEFAULT_T = 1024
DEFAULT_K = 18
DEFAULT_N = 128

# Forgery-by-index-collision budget used when vetting production parameters.
DEFAULT_H1_BUDGET = 2**64
# Required security bits against a DEFAULT_H1_BUDGET-query adversary.  63
# admits (1024, 18), whose budget-free level is 127.49 bits.
MIN_RESIDUAL_BITS = 63.0


class Domain(enum.IntEnum):
    IDB = 1
    CL = 2


def security_level(t: int, k: int, q_h1_budget: float = 1) -> float:
    """Bits of security against index-collision forgery.

    -log2(q_h1 * k! / 2**(k*log2 t)).
    """
    if t < 2 or t & (t - 1):
        raise ParameterError(f"t must be a power of two, got {t}")
    if not 1 <= k <= t:
        raise ParameterError(f"k must satisfy 1 <= k <= t, got k={k}")
    if q_h1_budget < 1:
        raise ParameterError("q_h1_budget must be >= 1")
    gamma = k * (t.bit_length() - 1)
    return gamma - math.lgamma(k + 1) / math.log(2) - math.log2(q_h1_budget)


def validate_params(group: Group, t: int, k: int, n: int) -> None:
    if n not in (128, 256):
        raise ParameterError(f"n must be 128 or 256, got {n}")
    if t > 2**20:
        raise ParameterError("t larger than 2**20 is not supported")
    level = security_level(t, k, 1)
    if group.group_id == MOCK:
        return
    if t < 4 * k:
        raise ParameterError(f"t must be >= 4k (t={t}, k={k})")
    residual = security_level(t, k, DEFAULT_H1_BUDGET)
    if residual < MIN_RESIDUAL_BITS:
        raise ParameterError(
            f"(t={t}, k={k}) gives {level:.2f} bits ({residual:.2f} bits at "
            f"2^64 H1 queries); need >= {MIN_RESIDUAL_BITS} at 2^64")


@dataclass(frozen=True)
class SystemParams:
    group: Group
    t: int = DEFAULT_T
    k: int = DEFAULT_K
    n: int = DEFAULT_N
    hashes: HashSuite = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        validate_params(self.group, self.t, self.k, self.n)
        if self.hashes is None:
            object.__setattr__(self, "hashes",
                               HashSuite(self.group, self.t, self.k, self.n))

    @property
    def gamma(self) -> int:
        return self.k * (self.t.bit_length() - 1)

    def with_group(self, group: Group) -> "SystemParams":
        """Same parameters over another view of the group (e.g. a counter)."""
        hashes = copy.copy(self.hashes)
        hashes.group = group
        return SystemParams(group, self.t, self.k, self.n, hashes)


@dataclass(frozen=True)
class MasterSecretKey:
    params: SystemParams
    v: tuple

    def __repr__(self):
        return f"MasterSecretKey(t={len(self.v)}, <secret>)"


@dataclass(frozen=True)
class MasterPublicKey:
    params: SystemParams
    V: tuple

    def select(self, identity: bytes, Q) -> list:
        idx = self.params.hashes.h1_indexes(identity, Q)
        return [self.V[j - 1] for j in idx]

    def public_point(self, identity: bytes, Q):
        """Y = sum of V_j over H1(ID, Q): k-1 additions."""
        return self.params.group.multi_add(self.select(identity, Q))

    def key_point(self, identity: bytes, Q):
        """Y + Q, the point every online operation needs: k additions."""
        group = self.params.group
        return group.add(self.public_point(identity, Q), Q)

    def with_params(self, params: SystemParams) -> "MasterPublicKey":
        return MasterPublicKey(params, self.V)


@dataclass(frozen=True)
class PartialKey:
    """Authority output: (x, Q) for IDB, (w, Q) for CL."""

    scalar: int
    Q: object
    domain: Domain

    def __repr__(self):
        return f"PartialKey(domain={self.domain.name}, Q={self.Q!r}, <secret>)"


def as_identity(identity) -> bytes:
    if isinstance(identity, str):
        identity = identity.encode("utf-8")
    identity = bytes(identity)
    if not identity:
        raise ValidationError("identity must be non-empty")
    if len(identity) > 0xFFFF:
        raise ValidationError("identity longer than 65535 bytes")
    return identity


def setup(params: SystemParams, rng: Rng) -> tuple[MasterSecretKey, MasterPublicKey]:
    group = params.group
    v = tuple(group.scalar_random(rng) for _ in range(params.t))
    V = tuple(group.base_mul(vi) for vi in v)
    return MasterSecretKey(params, v), MasterPublicKey(params, V)


def _masked_key(identity, Q, beta, mask_point, msk, mpk):
    params = msk.params
    group = params.group
    idx = params.hashes.h1_indexes(identity, Q)
    y = sum(msk.v[j - 1] for j in idx) % group.order
    key = (y + beta) % group.order
    # key*P must equal Y + (beta*P); catches misconfigured hashes or keys
    if group.base_mul(key) != group.add(mpk.public_point(identity, Q), mask_point):
        raise CertFreeError("key self-check failed: msk and mpk disagree")
    return key


def extract(identity, msk: MasterSecretKey, mpk: MasterPublicKey, rng: Rng) -> PartialKey:
    """IDB private key (x, Q) for ``identity``."""
    identity = as_identity(identity)
    group = msk.params.group
    beta = group.scalar_random(rng)
    Q = group.base_mul(beta)
    x = _masked_key(identity, Q, beta, Q, msk, mpk)
    return PartialKey(x, Q, Domain.IDB)


def part_key_gen(identity, U, msk: MasterSecretKey, mpk: MasterPublicKey,
                 rng: Rng) -> PartialKey:
    """CL partial private key (w, Q) binding the user's commitment U."""
    identity = as_identity(identity)
    group = msk.params.group
    if not group.is_point(U):
        raise ValidationError("user commitment U is not a group element")
    beta = group.scalar_random(rng)
    W = group.base_mul(beta)
    Q = group.add(U, W)
    w = _masked_key(identity, Q, beta, W, msk, mpk)
    return PartialKey(w, Q, Domain.CL)
