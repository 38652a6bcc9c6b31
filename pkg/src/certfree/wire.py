"""Binary container format for every artifact the CLI reads or writes.

Layout (all integers little-endian)::

    magic    4  b"CFC1"
    version  1  0x01
    kind     1  see Kind
    digest   8  first 8 bytes of SHA-256(params payload)
    payload  *  kind-specific, see encode_payload

Payloads, with P = point length and S = scalar length of the group:

    params        group u8 | t u32 | k u16 | n u16 | xof u8 [| q u32 (mock)]
    mpk           t * P
    msk           b"SECRET" | t * S
    credential    domain u8 | x S | Q P | id_len u16 | id
    ciphertext    R P | u n/8 | v (rest, |v| = |m|)
    signature     s S | e S
    kexmsg        M P | Q P
    user_secret   alpha S | U P
    partial_key   domain u8 | scalar S | Q P

Identities are raw bytes with no normalisation; callers must canonicalise.
"""

from __future__ import annotations

import enum
import hashlib
import struct

from .authority import (Domain, MasterPublicKey, MasterSecretKey, PartialKey,
                        SystemParams)
from .errors import (DigestMismatch, FormatError, KindError, MagicError,
                     ValidationError, VersionError)
from .group import MOCK, PRODUCTION, MockGroup, get_group
from .schemes import Ciphertext, KexMessage, Signature
from .users import UserCredential, UserSecret

MAGIC = b"CFC1"
VERSION = 1
HEADER_LEN = 14
SECRET_SENTINEL = b"SECRET"

_GROUP_IDS = {PRODUCTION: 1, MOCK: 2}
_XOF_SHAKE256 = 1


class Kind(enum.IntEnum):
    PARAMS = 1
    MPK = 2
    MSK = 3
    CREDENTIAL = 4
    CIPHERTEXT = 5
    SIGNATURE = 6
    KEXMSG = 7
    USER_SECRET = 8
    PARTIAL_KEY = 9


SECRET_KINDS = {Kind.MSK, Kind.CREDENTIAL, Kind.USER_SECRET, Kind.PARTIAL_KEY}


def params_payload(params: SystemParams) -> bytes:
    group = params.group
    out = struct.pack("<BIHHB", _GROUP_IDS[group.group_id], params.t, params.k,
                      params.n, _XOF_SHAKE256)
    if group.group_id == MOCK:
        out += struct.pack("<I", group.order)
    return out


def params_digest(params: SystemParams) -> bytes:
    return hashlib.sha256(params_payload(params)).digest()[:8]


def _parse_params_payload(payload: bytes, backend: str | None = None) -> SystemParams:
    if len(payload) < 10:
        raise FormatError("params payload truncated")
    gid, t, k, n, xof = struct.unpack_from("<BIHHB", payload)
    if xof != _XOF_SHAKE256:
        raise ValidationError(f"unknown hash suite id {xof}")
    if gid == 1:
        if len(payload) != 10:
            raise FormatError("params payload has trailing bytes")
        group = get_group(PRODUCTION, backend=backend)
    elif gid == 2:
        if len(payload) != 14:
            raise FormatError("mock params payload must be 14 bytes")
        try:
            group = MockGroup(struct.unpack_from("<I", payload, 10)[0])
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    else:
        raise ValidationError(f"unknown group id {gid}")
    return SystemParams(group, t, k, n)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("payload truncated")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def rest(self) -> bytes:
        out = self.data[self.pos:]
        self.pos = len(self.data)
        return out

    def done(self):
        if self.pos != len(self.data):
            raise FormatError(f"{len(self.data) - self.pos} trailing bytes")


def _domain(b: int) -> Domain:
    try:
        return Domain(b)
    except ValueError:
        raise ValidationError(f"unknown domain tag {b}") from None


def encode_payload(kind: Kind, value, params: SystemParams) -> bytes:
    g = params.group
    pt, sc = g.encode_point, g.encode_scalar
    if kind is Kind.PARAMS:
        return params_payload(value)
    if kind is Kind.MPK:
        return b"".join(pt(V) for V in value.V)
    if kind is Kind.MSK:
        return SECRET_SENTINEL + b"".join(sc(v) for v in value.v)
    if kind is Kind.CREDENTIAL:
        return (bytes([value.domain]) + sc(value.x) + pt(value.Q)
                + struct.pack("<H", len(value.identity)) + value.identity)
    if kind is Kind.CIPHERTEXT:
        if len(value.u) != params.hashes.nbytes:
            raise FormatError("u has the wrong length")
        return pt(value.R) + value.u + value.v
    if kind is Kind.SIGNATURE:
        return sc(value.s) + sc(value.e)
    if kind is Kind.KEXMSG:
        return pt(value.M) + pt(value.Q)
    if kind is Kind.USER_SECRET:
        return sc(value.alpha) + pt(value.U)
    if kind is Kind.PARTIAL_KEY:
        return bytes([value.domain]) + sc(value.scalar) + pt(value.Q)
    raise KindError(f"unknown kind {kind}")


def decode_payload(kind: Kind, payload: bytes, params: SystemParams):
    g = params.group
    r = _Reader(payload)
    pt = lambda: g.decode_point(r.take(g.point_len))  # noqa: E731
    sc = lambda: g.decode_scalar(r.take(g.scalar_len))  # noqa: E731

    if kind is Kind.PARAMS:
        return _parse_params_payload(payload)
    if kind is Kind.MPK:
        if len(payload) != params.t * g.point_len:
            raise FormatError(f"mpk payload must be {params.t * g.point_len} bytes")
        value = MasterPublicKey(params, tuple(pt() for _ in range(params.t)))
    elif kind is Kind.MSK:
        if r.take(len(SECRET_SENTINEL)) != SECRET_SENTINEL:
            raise FormatError("msk payload lacks the SECRET sentinel")
        if len(payload) != len(SECRET_SENTINEL) + params.t * g.scalar_len:
            raise FormatError("msk payload has the wrong length")
        value = MasterSecretKey(params, tuple(sc() for _ in range(params.t)))
    elif kind is Kind.CREDENTIAL:
        domain = _domain(r.take(1)[0])
        x, Q = sc(), pt()
        (n,) = struct.unpack("<H", r.take(2))
        identity = r.take(n)
        if not identity:
            raise ValidationError("empty identity")
        value = UserCredential(params, identity, Q, x, domain)
    elif kind is Kind.CIPHERTEXT:
        R = pt()
        u = r.take(params.hashes.nbytes)
        value = Ciphertext(R, u, r.rest())
    elif kind is Kind.SIGNATURE:
        value = Signature(sc(), sc())
    elif kind is Kind.KEXMSG:
        value = KexMessage(pt(), pt())
    elif kind is Kind.USER_SECRET:
        alpha, U = sc(), pt()
        if g.base_mul(alpha) != U:
            raise ValidationError("user secret: U != alpha*P")
        value = UserSecret(alpha, U)
    elif kind is Kind.PARTIAL_KEY:
        domain = _domain(r.take(1)[0])
        value = PartialKey(sc(), pt(), domain)
    else:
        raise KindError(f"unknown kind {kind}")
    r.done()
    return value


def kind_of(value) -> Kind:
    for cls, kind in ((SystemParams, Kind.PARAMS), (MasterPublicKey, Kind.MPK),
                      (MasterSecretKey, Kind.MSK), (UserCredential, Kind.CREDENTIAL),
                      (Ciphertext, Kind.CIPHERTEXT), (Signature, Kind.SIGNATURE),
                      (KexMessage, Kind.KEXMSG), (UserSecret, Kind.USER_SECRET),
                      (PartialKey, Kind.PARTIAL_KEY)):
        if isinstance(value, cls):
            return kind
    raise KindError(f"cannot serialize {type(value).__name__}")


def serialize(kind: Kind, value, params: SystemParams) -> bytes:
    kind = Kind(kind)
    if kind is Kind.PARAMS:
        params = value
    header = MAGIC + bytes([VERSION, kind]) + params_digest(params)
    return header + encode_payload(kind, value, params)


def dump(value, params: SystemParams) -> bytes:
    return serialize(kind_of(value), value, params)


def parse_header(data: bytes) -> tuple[Kind, bytes, bytes]:
    if len(data) < HEADER_LEN:
        raise FormatError("container shorter than its header")
    if data[:4] != MAGIC:
        raise MagicError("not a CFC1 container")
    if data[4] != VERSION:
        raise VersionError(f"unsupported container version {data[4]}")
    try:
        kind = Kind(data[5])
    except ValueError:
        raise KindError(f"unknown kind byte {data[5]}") from None
    return kind, data[6:14], data[14:]


def deserialize(data: bytes, params: SystemParams | None = None,
                expect: Kind | None = None):
    """Parse a container.  ``params`` may be omitted only for params files."""
    kind, digest, payload = parse_header(data)
    if expect is not None and kind is not Kind(expect):
        raise KindError(f"expected {Kind(expect).name.lower()}, got {kind.name.lower()}")
    if kind is Kind.PARAMS:
        value = _parse_params_payload(payload)
        if params_digest(value) != digest:
            raise DigestMismatch("params digest does not match payload")
        if params is not None and value != params:
            raise DigestMismatch("params file differs from the supplied params")
        return value
    if params is None:
        raise DigestMismatch("system params are required to decode this container")
    if digest != params_digest(params):
        raise DigestMismatch("container was produced under different params")
    return decode_payload(kind, payload, params)


def load_params(data: bytes, backend: str | None = None) -> SystemParams:
    kind, digest, payload = parse_header(data)
    if kind is not Kind.PARAMS:
        raise KindError("not a params container")
    params = _parse_params_payload(payload, backend)
    if params_digest(params) != digest:
        raise DigestMismatch("params digest does not match payload")
    return params


def size_report(params: SystemParams) -> dict:
    """Expected payload sizes in bytes (container header excluded)."""
    g = params.group
    P, S, nb = g.point_len, g.scalar_len, params.n // 8
    return {
        "point": P,
        "scalar": S,
        "signature": 2 * S,
        "kexmsg": 2 * P,
        "ct_overhead": P + nb,
        "credential_sk": S,
        "credential_pk": P,
        "credential_core": 1 + S + P,
        "partial_key": 1 + S + P,
        "user_secret": S + P,
        "mpk": params.t * P,
        "msk": len(SECRET_SENTINEL) + params.t * S,
        "params": len(params_payload(params)),
        "container_header": HEADER_LEN,
    }


def read_ciphertext(data: bytes, params: SystemParams) -> Ciphertext:
    """Ciphertext container for decryption.

    Length problems raise FormatError.  A correctly sized R that is not a
    group element is kept as ``None`` so that decrypt() rejects it with the
    same outcome as any other forged ciphertext.
    """
    kind, digest, payload = parse_header(data)
    if kind is not Kind.CIPHERTEXT:
        raise KindError(f"expected ciphertext, got {kind.name.lower()}")
    if digest != params_digest(params):
        raise DigestMismatch("container was produced under different params")
    g = params.group
    r = _Reader(payload)
    raw_R = r.take(g.point_len)
    u = r.take(params.hashes.nbytes)
    try:
        R = g.decode_point(raw_R)
    except ValidationError:
        R = None
    return Ciphertext(R, u, r.rest())
