"""Online operations shared by identity-based and certificateless users.

The recipient / signer / peer is always named by (identity, Q); its key
point Y + Q comes from the master public key, so the caller never needs to
know which domain the other party belongs to.
"""

from __future__ import annotations

import hmac
from dataclasses import dataclass, field

from .authority import MasterPublicKey, as_identity
from .errors import EntropyError, FormatError, KeyReuseError, ValidationError
from .group import Rng
from .hashing import kex_transcript
from .users import UserCredential


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


@dataclass(frozen=True)
class Ciphertext:
    R: object
    u: bytes
    v: bytes


@dataclass(frozen=True)
class Signature:
    s: int
    e: int


@dataclass(frozen=True)
class KexMessage:
    M: object
    Q: object


@dataclass(eq=False)
class KexEphemeral:
    """One-shot key-exchange secret; kex_finalize consumes it."""

    z: int
    M: object
    consumed: bool = field(default=False)

    def __repr__(self):
        return f"KexEphemeral(M={self.M!r}, consumed={self.consumed}, <secret>)"


@dataclass(frozen=True)
class SessionKey:
    K_point: object
    key: bytes


def _check_point(group, X, what):
    if not group.is_point(X):
        raise ValidationError(f"{what} is not a group element")


def encrypt(m: bytes, identity, Q, mpk: MasterPublicKey, rng: Rng) -> Ciphertext:
    params = mpk.params
    group, hashes = params.group, params.hashes
    _check_point(group, Q, "recipient Q")
    identity = as_identity(identity)
    try:
        sigma = rng(hashes.nbytes)
    except Exception as exc:
        raise EntropyError(str(exc)) from exc
    if len(sigma) != hashes.nbytes:
        raise EntropyError("entropy source returned a short read")
    r = hashes.h2(sigma, m)
    R = group.base_mul(r)
    K = group.mul(r, mpk.key_point(identity, Q))
    u = _xor(hashes.h3(K), sigma)
    v = _xor(hashes.h4_expand(sigma, len(m)), m)
    return Ciphertext(R, u, v)


def decrypt(cred: UserCredential, c: Ciphertext) -> bytes | None:
    """Plaintext, or None when the ciphertext fails the re-encryption check."""
    params = cred.params
    group, hashes = params.group, params.hashes
    if len(c.u) != hashes.nbytes:
        raise FormatError(f"u must be {hashes.nbytes} bytes")
    if not group.is_point(c.R):
        return None
    sigma = _xor(hashes.h3(group.mul(cred.x, c.R)), c.u)
    m = _xor(c.v, hashes.h4_expand(sigma, len(c.v)))
    r = hashes.h2(sigma, m)
    if not hmac.compare_digest(group.encode_point(group.base_mul(r)),
                               group.encode_point(c.R)):
        return None
    return m


def sign(m: bytes, cred: UserCredential, rng: Rng) -> Signature:
    group, hashes = cred.params.group, cred.params.hashes
    r = group.scalar_random(rng)
    R = group.base_mul(r)
    e = hashes.h5(m, R)
    return Signature((r - e * cred.x) % group.order, e)


def verify(m: bytes, identity, Q, mpk: MasterPublicKey, sig: Signature) -> bool:
    group, hashes = mpk.params.group, mpk.params.hashes
    if not (0 <= sig.s < group.order and 0 <= sig.e < group.order):
        raise FormatError("signature scalars are not canonical")
    _check_point(group, Q, "signer Q")
    identity = as_identity(identity)
    R = group.add(group.base_mul(sig.s), group.mul(sig.e, mpk.key_point(identity, Q)))
    return hmac.compare_digest(group.encode_scalar(hashes.h5(m, R)),
                               group.encode_scalar(sig.e))


def kex_init(params_or_cred, rng: Rng) -> KexEphemeral:
    params = getattr(params_or_cred, "params", params_or_cred)
    group = params.group
    z = group.scalar_random(rng)
    return KexEphemeral(z, group.base_mul(z))


def kex_message(cred: UserCredential, eph: KexEphemeral) -> KexMessage:
    return KexMessage(eph.M, cred.Q)


def kdf(params, K_point, transcript: bytes) -> bytes:
    return params.hashes.kdf(K_point, transcript)


def kex_finalize(cred: UserCredential, eph: KexEphemeral, peer_id,
                 peer_msg: KexMessage, mpk: MasterPublicKey,
                 role: str | None = None) -> SessionKey:
    """K = x*(Y_peer + Q_peer) + z*M_peer, then a transcript-bound KDF.

    ``role`` ("initiator"/"responder") only fixes transcript order; with
    None the encoded messages are ordered lexicographically.
    """
    if eph.consumed:
        raise KeyReuseError("ephemeral key already used")
    params = mpk.params
    group = params.group
    _check_point(group, peer_msg.M, "peer M")
    _check_point(group, peer_msg.Q, "peer Q")
    peer_id = as_identity(peer_id)
    eph.consumed = True

    K = group.add(group.mul(cred.x, mpk.key_point(peer_id, peer_msg.Q)),
                  group.mul(eph.z, peer_msg.M))

    own = (cred.identity, encode_kexmsg(group, kex_message(cred, eph)))
    peer = (peer_id, encode_kexmsg(group, peer_msg))
    if role == "initiator":
        first, second = own, peer
    elif role == "responder":
        first, second = peer, own
    elif role is None:
        first, second = sorted([own, peer], key=lambda p: (p[1], p[0]))
    else:
        raise ValueError(f"unknown role {role!r}")
    key = kdf(params, K, kex_transcript(first[0], first[1], second[0], second[1]))
    return SessionKey(K, key)


def encode_kexmsg(group, msg: KexMessage) -> bytes:
    return group.encode_point(msg.M) + group.encode_point(msg.Q)
