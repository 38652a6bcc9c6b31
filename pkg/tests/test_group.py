import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certfree.errors import EntropyError, FormatError, ValidationError
from certfree.group import (MOCK, PRODUCTION, MockGroup, RistrettoGroup,
                            describe, get_group, load_kernels, op_counter_wrap)

from conftest import seeded

Q25519 = 2**252 + 27742317777372353535851937790883648493


def test_profiles(mock_group, prod_group):
    prod = describe(prod_group)
    assert prod.group_id == PRODUCTION
    assert prod.order == Q25519 and prod.order >= 2**250
    assert (prod.point_len, prod.scalar_len) == (32, 32)
    mock = describe(mock_group)
    assert (mock.group_id, mock.order, mock.point_len) == (MOCK, 7919, 2)
    assert mock_group.generator == 1 and mock_group.base_mul(5) == 5


def test_mock_rejects_composite_order():
    with pytest.raises(ValueError):
        MockGroup(7917)


def test_scalar_random_all_zero_stream(prod_group):
    zero = lambda n: bytes(n)  # noqa: E731
    assert prod_group.scalar_random(zero) == 0


def test_scalar_random_golden_stream(prod_group):
    raw = bytes(range(64))
    # oracle: plain big-integer reduction of the raw little-endian stream
    expected = int.from_bytes(raw, "little") % Q25519
    assert prod_group.scalar_random(lambda n: raw[:n]) == expected
    assert expected == 0x572d0e474b5e0da7a932112c3d46159cce628540db62350a0372df082623c7a


def test_scalar_random_mock_reduction(mock_group):
    assert mock_group.scalar_random(lambda n: (8000).to_bytes(n, "little")) == 81


def test_scalar_random_independent_draws(prod_group):
    rng = seeded(5)
    assert prod_group.scalar_random(rng) != prod_group.scalar_random(rng)


@pytest.mark.parametrize("bad", [lambda n: b"\x00" * (n - 1), lambda n: 1 / 0])
def test_entropy_failure(prod_group, bad):
    with pytest.raises(EntropyError):
        prod_group.scalar_random(bad)


@pytest.mark.parametrize("profile", ["mock", "production"])
def test_zero_times_point_is_identity(profile):
    g = get_group(profile)
    X = g.base_mul(12345)
    assert g.mul(0, X) == g.identity
    assert g.base_mul(0) == g.identity
    assert g.mul(g.order, X) == g.identity


def test_mock_additive_law(mock_group):
    g = mock_group
    assert g.add(g.base_mul(3), g.base_mul(4)) == g.base_mul(7) == 7


@pytest.mark.parametrize("profile", ["mock", "production"])
def test_distributive_laws(profile):
    g = get_group(profile)
    r = random.Random(7)
    X = g.base_mul(r.randrange(1, g.order))
    for _ in range(100):
        a, b = r.randrange(g.order), r.randrange(g.order)
        assert g.base_mul((a + b) % g.order) == g.add(g.base_mul(a), g.base_mul(b))
        assert g.mul((a + b) % g.order, X) == g.add(g.mul(a, X), g.mul(b, X))
        assert g.mul(a, g.mul(b, X)) == g.mul(a * b % g.order, X)


@pytest.mark.parametrize("profile", ["mock", "production"])
def test_multi_add_and_sub(profile):
    g = get_group(profile)
    pts = [g.base_mul(v) for v in (3, 5, 7, 11)]
    assert g.multi_add(pts) == g.base_mul(26)
    assert g.multi_add([]) == g.identity
    assert g.sub(pts[3], pts[0]) == g.base_mul(8)
    assert g.sub(pts[0], pts[0]) == g.identity


@pytest.mark.parametrize("profile", ["mock", "production"])
def test_point_roundtrip(profile):
    g = get_group(profile)
    r = random.Random(3)
    for X in [g.identity, g.generator] + [g.base_mul(r.randrange(g.order)) for _ in range(20)]:
        enc = g.encode_point(X)
        assert len(enc) == g.point_len
        assert g.decode_point(enc) == X


def test_identity_encoding(prod_group):
    assert prod_group.encode_point(prod_group.identity) == bytes(32)
    assert prod_group.decode_point(bytes(32)) == prod_group.identity


def test_random_bytes_mostly_invalid(prod_group):
    r = random.Random(11)
    failures = 0
    for _ in range(64):
        try:
            prod_group.decode_point(r.randbytes(32))
        except ValidationError:
            failures += 1
    assert failures > 0


def test_decode_errors_are_distinct(prod_group, mock_group):
    with pytest.raises(FormatError):
        prod_group.decode_point(bytes(31))
    with pytest.raises(ValidationError):
        prod_group.decode_point(b"\x01" + bytes(31))  # negative field element
    with pytest.raises(FormatError):
        mock_group.decode_point(b"\x00")
    with pytest.raises(ValidationError):
        mock_group.decode_point((7919).to_bytes(2, "little"))
    assert not issubclass(ValidationError, FormatError)


def test_scalar_encoding(prod_group):
    g = prod_group
    assert g.encode_scalar(1) == b"\x01" + bytes(31)
    assert g.decode_scalar(g.encode_scalar(Q25519 - 1)) == Q25519 - 1
    with pytest.raises(ValidationError):
        g.decode_scalar(Q25519.to_bytes(32, "little"))
    with pytest.raises(FormatError):
        g.decode_scalar(bytes(33))


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=Q25519 - 1))
def test_scalar_roundtrip_property(a):
    g = get_group("production")
    assert g.decode_scalar(g.encode_scalar(a)) == a


def test_op_counter(prod_group):
    c = op_counter_wrap(prod_group)
    X = c.base_mul(5)
    c.mul(3, X)
    c.add(X, X)
    c.multi_add([X, X, X])
    assert (c.counts.base_mul, c.counts.mul, c.counts.add) == (1, 1, 3)
    assert c.counts.muls == 2
    c.reset()
    assert (c.counts.base_mul, c.counts.mul, c.counts.add) == (0, 0, 0)
    assert c == prod_group and c.point_len == 32


def test_mock_dlog_brute_force(mock_group):
    assert mock_group.dlog(mock_group.base_mul(4321)) == 4321


def test_backend_forced_python():
    g = get_group("production", backend="python")
    assert isinstance(g, RistrettoGroup) and g.backend == "python"


def test_fallback_when_extension_missing(monkeypatch):
    import sys

    monkeypatch.setitem(sys.modules, "certfree.group._ristretto_ext", None)
    assert load_kernels("auto").NAME == "python"
    with pytest.raises(ImportError):
        load_kernels("ext")
