import pytest

from rabe.errors import BackendMismatchError, EnvelopeError, ParameterError, SideMismatchError
from rabe.groups import (
    REAL,
    SIDE_ONE,
    SIDE_TARGET,
    SIDE_TWO,
    TRANSPARENT,
    Scalar,
    lagrange_coefficient,
    new_context,
)
from rabe.rng import SeededRng

SIDES = (SIDE_ONE, SIDE_TWO, SIDE_TARGET)


@pytest.fixture(scope="module")
def tctx():
    return new_context(TRANSPARENT, seed=0)


@pytest.fixture(scope="module")
def rctx():
    return new_context(REAL)


def test_transparent_bilinearity_100_trials(tctx):
    # oracle: the pairing of g^x and g~^y must have exponent x*y
    rng = SeededRng("bilinearity")
    g = tctx.generator(SIDE_ONE)
    h = tctx.generator(SIDE_TWO)
    for _ in range(100):
        x = tctx.random_scalar(rng)
        y = tctx.random_scalar(rng)
        out = tctx.pair(g ** x, h ** y)
        assert out.transparent_log == int(x) * int(y) % tctx.prime_order
        assert out == tctx.pair(g ** y, h ** x)


def test_real_bilinearity(rctx):
    rng = SeededRng("bilinearity-real")
    g = rctx.generator(SIDE_ONE)
    h = rctx.generator(SIDE_TWO)
    gt = rctx.generator(SIDE_TARGET)
    for _ in range(3):
        x = rctx.random_scalar(rng)
        y = rctx.random_scalar(rng)
        lhs = rctx.pair(g ** x, h ** y)
        assert lhs == rctx.pair(g ** y, h ** x)
        assert lhs == gt ** (x * y)


def test_pair_product_matches_termwise(tctx):
    rng = SeededRng("pair-product")
    g = tctx.generator(SIDE_ONE)
    h = tctx.generator(SIDE_TWO)
    pairs = [(g ** tctx.random_scalar(rng), h ** tctx.random_scalar(rng)) for _ in range(6)]
    prod = tctx.identity(SIDE_TARGET)
    for a, b in pairs:
        prod = prod * tctx.pair(a, b)
    assert tctx.pair_product(pairs) == prod


def test_real_pair_product_matches_termwise(rctx):
    rng = SeededRng("pair-product-real")
    g = rctx.generator(SIDE_ONE)
    h = rctx.generator(SIDE_TWO)
    pairs = [(g ** rctx.random_scalar(rng), h ** rctx.random_scalar(rng)) for _ in range(3)]
    prod = rctx.identity(SIDE_TARGET)
    for a, b in pairs:
        prod = prod * rctx.pair(a, b)
    assert rctx.pair_product(pairs) == prod


def test_group_laws(tctx):
    rng = SeededRng("laws")
    for side in SIDES:
        a = tctx.random_element(side, rng)
        b = tctx.random_element(side, rng)
        c = tctx.random_element(side, rng)
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * tctx.identity(side) == a
        assert (a * a.inverse()).is_identity()
        assert a / b == a * b.inverse()
        assert a ** 0 == tctx.identity(side)
        assert a ** 1 == a
        assert a ** (tctx.prime_order - 1) == a.inverse()


def test_encode_roundtrip_transparent_1000_per_side(tctx):
    rng = SeededRng("roundtrip")
    for side in SIDES:
        for _ in range(1000):
            el = tctx.random_element(side, rng)
            data = el.encode()
            back = tctx.decode_element(data)
            assert back == el and back.side == side


def test_encode_roundtrip_real(rctx):
    rng = SeededRng("roundtrip-real")
    lengths = {SIDE_ONE: 2 + 48, SIDE_TWO: 2 + 96, SIDE_TARGET: 2 + 576}
    for side in SIDES:
        for _ in range(4):
            el = rctx.random_element(side, rng)
            data = el.encode()
            assert len(data) == lengths[side]
            assert rctx.decode_element(data) == el
        ident = rctx.identity(side)
        assert rctx.decode_element(ident.encode()) == ident


def test_side_mixing_is_rejected(tctx):
    rng = SeededRng("sides")
    one = tctx.random_element(SIDE_ONE, rng)
    two = tctx.random_element(SIDE_TWO, rng)
    with pytest.raises(SideMismatchError):
        one * two
    with pytest.raises(SideMismatchError):
        tctx.pair(two, one)
    with pytest.raises(SideMismatchError):
        tctx.pair(one, one)


def test_cross_context_mixing_is_rejected(tctx):
    other = new_context(TRANSPARENT, seed=99)
    assert other.prime_order != tctx.prime_order
    rng = SeededRng("cross")
    a = tctx.random_element(SIDE_ONE, rng)
    b = other.random_element(SIDE_ONE, rng)
    with pytest.raises(BackendMismatchError):
        a * b
    with pytest.raises(BackendMismatchError):
        tctx.pair_product([(b, tctx.random_element(SIDE_TWO, rng))])
    with pytest.raises(BackendMismatchError):
        a ** other.scalar(3)


def test_scalar_arithmetic(tctx):
    p = tctx.prime_order
    a = tctx.scalar(p - 1)
    b = tctx.scalar(2)
    assert int(a + b) == 1
    assert int(a + 2) == 1
    assert int(b - a) == 3 % p
    assert int(a * b) == (2 * (p - 1)) % p
    assert int(-b) == p - 2
    assert int(b * b.inverse()) == 1
    assert int(Scalar.decode(b.encode(), p)) == 2
    with pytest.raises(EnvelopeError):
        Scalar.decode(b"short", p)
    with pytest.raises(BackendMismatchError):
        a + Scalar(1, p + 2)


def test_decode_rejects_malformed(tctx, rctx):
    el = tctx.generator(SIDE_ONE) ** 5
    data = el.encode()
    with pytest.raises(EnvelopeError):
        tctx.decode_element(b"")
    with pytest.raises(EnvelopeError):
        tctx.decode_element(data[:-1])
    with pytest.raises(EnvelopeError):
        rctx.decode_element(data)  # transparent bytes into the real context
    with pytest.raises(EnvelopeError):
        tctx.decode_element(bytes([data[0], 0x7F]) + data[2:])
    too_big = data[:2] + (tctx.prime_order).to_bytes(8, "big")
    with pytest.raises(EnvelopeError):
        tctx.decode_element(too_big)


def test_real_decode_rejects_off_curve_bytes(rctx):
    good = rctx.generator(SIDE_ONE).encode()
    bad = good[:2] + bytes([good[2] ^ 0x01]) + good[3:]
    with pytest.raises(EnvelopeError):
        rctx.decode_element(bad)


def test_transparent_log_is_transparent_only(tctx, rctx):
    assert (tctx.generator(SIDE_TWO) ** 7).transparent_log == 7
    with pytest.raises(BackendMismatchError):
        _ = rctx.generator(SIDE_TWO).transparent_log


def test_context_determinism():
    a = new_context(TRANSPARENT, seed=5)
    b = new_context(TRANSPARENT, seed=5)
    assert a.prime_order == b.prime_order and a.group_id == b.group_id
    # cross-instance elements interoperate because group_id matches
    assert a.generator(SIDE_ONE) * b.generator(SIDE_ONE) == a.generator(SIDE_ONE) ** 2
    with pytest.raises(ParameterError):
        new_context("imaginary")


def test_lagrange_coefficient_basis_property(tctx):
    points = [tctx.scalar(v) for v in (1, 2, 3, 5)]
    for i in points:
        for j in points:
            expected = 1 if int(i) == int(j) else 0
            assert int(lagrange_coefficient(i, points, j)) == expected


def test_lagrange_interpolation_recovers_polynomial(tctx):
    p = tctx.prime_order
    rng = SeededRng("lagrange")
    coeffs = [rng.randbelow(p) for _ in range(4)]

    def poly(x):
        return sum(c * pow(x, k, p) for k, c in enumerate(coeffs)) % p

    points = [1, 2, 3, 4]
    at = tctx.scalar(0)
    total = 0
    for i in points:
        w = lagrange_coefficient(tctx.scalar(i), points, at)
        total = (total + int(w) * poly(i)) % p
    assert total == coeffs[0]
    with pytest.raises(ZeroDivisionError):
        lagrange_coefficient(tctx.scalar(1), [1, 1, 2], at)
