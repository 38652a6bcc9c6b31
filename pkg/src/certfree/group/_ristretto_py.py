"""Pure-Python ristretto255 kernels.

Points cross this module boundary as canonical 32-byte encodings and
scalars as 32-byte little-endian strings, the same calling convention as
the compiled ``_ristretto_ext`` module, so either can back the group.

Internally points live in extended twisted Edwards coordinates
(X : Y : Z : T) on edwards25519 (a = -1).  Nothing here is constant time.
"""

from functools import lru_cache

P = 2**255 - 19
L = 2**252 + 27742317777372353535851937790883648493
D = (-121665 * pow(121666, P - 2, P)) % P
D2 = (2 * D) % P
SQRT_M1 = pow(2, (P - 1) // 4, P)

NAME = "python"


def _is_negative(x):
    return x & 1


def _abs(x):
    return (P - x) % P if x & 1 else x


def _sqrt_ratio_m1(u, v):
    v3 = v * v % P * v % P
    v7 = v3 * v3 % P * v % P
    r = u * v3 % P * pow(u * v7 % P, (P - 5) // 8, P) % P
    check = v * r % P * r % P
    correct = check == u % P
    flipped = check == (-u) % P
    flipped_i = check == (-u * SQRT_M1) % P
    if flipped or flipped_i:
        r = r * SQRT_M1 % P
    return correct or flipped, _abs(r)


INVSQRT_A_MINUS_D = _sqrt_ratio_m1(1, (-1 - D) % P)[1]

IDENTITY = (0, 1, 1, 0)


def _add(p1, p2):
    X1, Y1, Z1, T1 = p1
    X2, Y2, Z2, T2 = p2
    a = (Y1 - X1) * (Y2 - X2) % P
    b = (Y1 + X1) * (Y2 + X2) % P
    c = T1 * D2 % P * T2 % P
    d = 2 * Z1 * Z2 % P
    e, f, g, h = b - a, d - c, d + c, b + a
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def _double(p1):
    X1, Y1, Z1, _ = p1
    a = X1 * X1 % P
    b = Y1 * Y1 % P
    c = 2 * Z1 * Z1 % P
    h = a + b
    e = h - (X1 + Y1) * (X1 + Y1)
    g = a - b
    f = c + g
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def _neg(p1):
    X, Y, Z, T = p1
    return ((-X) % P, Y, Z, (-T) % P)


# decoding costs a field exponentiation; master public key points recur
# on every operation, so keep recent results (bytes in, immutable tuple out)
@lru_cache(maxsize=4096)
def _decode(s_bytes):
    if len(s_bytes) != 32:
        return None
    s = int.from_bytes(s_bytes, "little")
    if s >= P or _is_negative(s):
        return None
    ss = s * s % P
    u1 = (1 - ss) % P
    u2 = (1 + ss) % P
    u2_sqr = u2 * u2 % P
    v = (-(D * u1 % P * u1) - u2_sqr) % P
    was_square, invsqrt = _sqrt_ratio_m1(1, v * u2_sqr % P)
    den_x = invsqrt * u2 % P
    den_y = invsqrt * den_x % P * v % P
    x = _abs(2 * s * den_x % P)
    y = u1 * den_y % P
    t = x * y % P
    if not was_square or _is_negative(t) or y == 0:
        return None
    return (x, y, 1, t)


def _encode(p1):
    x0, y0, z0, t0 = p1
    u1 = (z0 + y0) * (z0 - y0) % P
    u2 = x0 * y0 % P
    _, invsqrt = _sqrt_ratio_m1(1, u1 * u2 % P * u2 % P)
    den1 = invsqrt * u1 % P
    den2 = invsqrt * u2 % P
    z_inv = den1 * den2 % P * t0 % P
    if _is_negative(t0 * z_inv % P):
        x, y = y0 * SQRT_M1 % P, x0 * SQRT_M1 % P
        den_inv = den1 * INVSQRT_A_MINUS_D % P
    else:
        x, y = x0, y0
        den_inv = den2
    if _is_negative(x * z_inv % P):
        y = (-y) % P
    s = _abs(den_inv * (z0 - y) % P)
    return s.to_bytes(32, "little")


def _decode_checked(p):
    pt = _decode(bytes(p)) if isinstance(p, (bytes, bytearray)) else None
    if pt is None:
        raise ValueError("invalid ristretto255 encoding")
    return pt


def _window_table(pt):
    table = [IDENTITY, pt]
    for _ in range(14):
        table.append(_add(table[-1], pt))
    return table


def _mul_point(n, pt):
    table = _window_table(pt)
    acc = IDENTITY
    for shift in range(252, -1, -4):
        acc = _double(_double(_double(_double(acc))))
        nib = (n >> shift) & 15
        if nib:
            acc = _add(acc, table[nib])
    return acc


_BASE_Y = 4 * pow(5, P - 2, P) % P


def _recover_base():
    yy = _BASE_Y * _BASE_Y % P
    ok, x = _sqrt_ratio_m1((yy - 1) % P, (D * yy + 1) % P)
    assert ok
    return (x, _BASE_Y, 1, x * _BASE_Y % P)


BASE = _recover_base()
BASE_BYTES = _encode(BASE)

# comb table: _COMB[i][j] = j * 16**i * B
_COMB = []
_row_base = BASE
for _i in range(64):
    _row = _window_table(_row_base)
    _COMB.append(_row)
    _row_base = _double(_double(_double(_double(_row_base))))
del _row, _row_base, _i


def is_valid(p):
    return isinstance(p, (bytes, bytearray)) and _decode(bytes(p)) is not None


def add(p, q):
    return _encode(_add(_decode_checked(p), _decode_checked(q)))


def sub(p, q):
    return _encode(_add(_decode_checked(p), _neg(_decode_checked(q))))


def neg(p):
    return _encode(_neg(_decode_checked(p)))


def scalarmult(n, p):
    k = int.from_bytes(n, "little") % L
    return _encode(_mul_point(k, _decode_checked(p)))


def scalarmult_base(n):
    k = int.from_bytes(n, "little") % L
    acc = IDENTITY
    i = 0
    while k:
        nib = k & 15
        if nib:
            acc = _add(acc, _COMB[i][nib])
        k >>= 4
        i += 1
    return _encode(acc)


def multi_add(points):
    acc = IDENTITY
    for p in points:
        acc = _add(acc, _decode_checked(p))
    return _encode(acc)
