"""Stand-alone re-execution of the full protocol over Z_q.

Plain integers and hashlib only; nothing is imported from certfree.  Each
flow consumes its entropy stream in the same order as the library so the
two can be compared value for value.
"""

import hashlib
import random

Q = 7919
ENC = 2  # bytes per point / scalar for q = 7919


def xof(data, n):
    return hashlib.shake_256(data).digest(n)


def wide(data):
    return int.from_bytes(data, "little") % Q


def enc(a):
    return a.to_bytes(ENC, "little")


def indexes(ident, Qpt, t, k):
    width = t.bit_length() - 1
    gamma = k * width
    nbytes = (gamma + 7) // 8
    data = (b"CFC-H1" + t.to_bytes(4, "little") + k.to_bytes(2, "little")
            + len(ident).to_bytes(4, "little") + ident + enc(Qpt))
    bits = int.from_bytes(xof(data, nbytes), "big") >> (8 * nbytes - gamma)
    return [((bits >> (width * (k - 1 - i))) % t) + 1 for i in range(k)]


def h2(sigma, m):
    return wide(xof(b"CFC-H2" + sigma + m, 64))


def h3(K):
    return xof(b"CFC-H3" + enc(K), 16)


def h4(sigma, n):
    return xof(b"CFC-H4" + sigma, n) if n else b""


def h5(m, R):
    return wide(xof(b"CFC-H5" + len(m).to_bytes(8, "little") + m + enc(R), 64))


def kdf(K, transcript):
    th = xof(b"CFC-KEX-TR" + transcript, 32)
    return xof(b"CFC-KDF" + enc(K) + th, 32)


def xor(a, b):
    return bytes(x ^ y for x, y in zip(a, b))


def run_flow(seed, message, t=1024, k=18):
    draw = random.Random(seed).randbytes
    scalar = lambda: wide(draw(64))  # noqa: E731

    v = [scalar() for _ in range(t)]
    V = [vi % Q for vi in v]
    Y = lambda ident, Qpt: sum(V[j - 1] for j in indexes(ident, Qpt, t, k)) % Q  # noqa: E731
    y = lambda ident, Qpt: sum(v[j - 1] for j in indexes(ident, Qpt, t, k)) % Q  # noqa: E731

    # identity-based user
    alice = f"alice-{seed}".encode()
    beta = scalar()
    Qa = beta % Q
    xa = (y(alice, Qa) + beta) % Q
    assert xa == (Y(alice, Qa) + Qa) % Q

    # certificateless user
    bob = f"bob-{seed}".encode()
    alpha = scalar()
    U = alpha % Q
    beta = scalar()
    Qb = (U + beta) % Q
    w = (y(bob, Qb) + beta) % Q
    assert (Qb - U) % Q == (w - Y(bob, Qb)) % Q
    xb = (w + alpha) % Q

    # alice -> bob encryption, bob decrypts
    sigma = draw(16)
    r = h2(sigma, message)
    R = r % Q
    u = xor(h3(r * (Y(bob, Qb) + Qb) % Q), sigma)
    vv = xor(h4(sigma, len(message)), message)
    sigma2 = xor(h3(xb * R % Q), u)
    m2 = xor(vv, h4(sigma2, len(vv)))
    recovered = m2 if h2(sigma2, m2) % Q == R else None

    # bob signs, anyone verifies
    rs = scalar()
    e = h5(message, rs % Q)
    s = (rs - e * xb) % Q
    valid = h5(message, (s + e * (Y(bob, Qb) + Qb)) % Q) == e

    # alice (initiator) and bob (responder) key exchange
    za, zb = scalar(), scalar()
    Ma, Mb = za % Q, zb % Q
    Ka = (xa * (Y(bob, Qb) + Qb) + za * Mb) % Q
    Kb = (xb * (Y(alice, Qa) + Qa) + zb * Ma) % Q
    transcript = (len(alice).to_bytes(2, "little") + alice + enc(Ma) + enc(Qa)
                  + len(bob).to_bytes(2, "little") + bob + enc(Mb) + enc(Qb))

    return {
        "v": v, "alice": (xa, Qa), "bob_secret": (alpha, U), "bob_partial": (w, Qb),
        "bob": (xb, Qb), "ciphertext": (R, u, vv), "decrypted": recovered,
        "signature": (s, e), "sig_valid": valid,
        "kex": (Ma, Mb, Ka, Kb, kdf(Ka, transcript), kdf(Kb, transcript)),
    }
