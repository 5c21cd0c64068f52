"""Curve-level checks against externally known BLS12-381 values."""

import pytest

import rabe.bls12381 as bls
from rabe.rng import SeededRng

# standard compressed serializations of the fixed generators
G1_GEN_HEX = (
    "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
    "6c55e83ff97a1aeffb3af00adb22c6bb"
)
G2_GEN_HEX = (
    "93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
    "334cf11213945d57e5ac7d055d042b7e"
    "024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d177"
    "0bac0326a805bbefd48056c8c121bdb8"
)


def test_field_and_order_constants():
    assert bls.P % 4 == 3
    assert bls.R.bit_length() == 255
    # embedding degree 12: r divides p^12 - 1 but not p - 1
    assert (bls.P**12 - 1) % bls.R == 0
    assert (bls.P - 1) % bls.R != 0


def test_generator_serialization_vectors():
    assert bls.g1_to_bytes(bls.G1_GEN).hex() == G1_GEN_HEX
    assert bls.g2_to_bytes(bls.G2_GEN).hex() == G2_GEN_HEX
    assert bls.g1_from_bytes(bytes.fromhex(G1_GEN_HEX)) == bls.G1_GEN
    assert bls.g2_from_bytes(bytes.fromhex(G2_GEN_HEX)) == bls.G2_GEN


def test_generators_have_order_r():
    assert bls.g1_on_curve(bls.G1_GEN) and bls.g1_in_subgroup(bls.G1_GEN)
    assert bls.g2_on_curve(bls.G2_GEN) and bls.g2_in_subgroup(bls.G2_GEN)
    assert bls.g1_mul(bls.G1_GEN, bls.R) is None
    assert bls.g2_mul(bls.G2_GEN, bls.R) is None
    assert bls.g1_mul(bls.G1_GEN, bls.R - 1) == bls.g1_neg(bls.G1_GEN)


def test_point_arithmetic_matches_scalar_identities():
    p2 = bls.g1_add(bls.G1_GEN, bls.G1_GEN)
    p3 = bls.g1_add(p2, bls.G1_GEN)
    assert p2 == bls.g1_mul(bls.G1_GEN, 2)
    assert p3 == bls.g1_mul(bls.G1_GEN, 3)
    assert bls.g1_add(p3, bls.g1_neg(p3)) is None
    assert bls.g1_add(None, p2) == p2
    q2 = bls.g2_add(bls.G2_GEN, bls.G2_GEN)
    assert q2 == bls.g2_mul(bls.G2_GEN, 2)
    assert bls.g2_add(q2, bls.g2_neg(q2)) is None


def test_compressed_roundtrip_both_sign_branches():
    rng = SeededRng("bls-roundtrip")
    seen_signs = set()
    for _ in range(6):
        k = rng.randbelow(bls.R - 1) + 1
        pt = bls.g1_mul(bls.G1_GEN, k)
        data = bls.g1_to_bytes(pt)
        assert len(data) == 48 and data[0] & 0x80
        seen_signs.add(bool(data[0] & 0x20))
        assert bls.g1_from_bytes(data) == pt
        qt = bls.g2_mul(bls.G2_GEN, k)
        qdata = bls.g2_to_bytes(qt)
        assert len(qdata) == 96
        assert bls.g2_from_bytes(qdata) == qt
    assert seen_signs == {True, False}


def test_infinity_encoding():
    inf = bls.g1_to_bytes(None)
    assert inf[0] == 0xC0 and set(inf[1:]) == {0}
    assert bls.g1_from_bytes(inf) is None
    assert bls.g2_from_bytes(bls.g2_to_bytes(None)) is None


def test_from_bytes_rejects_malformed():
    good = bytes.fromhex(G1_GEN_HEX)
    with pytest.raises(ValueError):
        bls.g1_from_bytes(good[:-1])
    with pytest.raises(ValueError):
        bls.g1_from_bytes(bytes([good[0] & 0x7F]) + good[1:])  # compression bit off
    with pytest.raises(ValueError):
        bls.g1_from_bytes(bytes([0xC0, 1]) + bytes(46))  # dirty infinity
    oversized = (1 << 380) + bls.P  # x coordinate >= field modulus
    data = bytearray(oversized.to_bytes(48, "big"))
    data[0] |= 0x80
    with pytest.raises(ValueError):
        bls.g1_from_bytes(bytes(data))
    with pytest.raises(ValueError):
        bls.g2_from_bytes(bytes.fromhex(G2_GEN_HEX)[:-1])


def test_from_bytes_rejects_non_square_x():
    # scan small x values; the first undecodable one must raise cleanly
    rejected = 0
    for x in range(40):
        data = bytearray(x.to_bytes(48, "big"))
        data[0] |= 0x80
        try:
            pt = bls.g1_from_bytes(bytes(data))
        except ValueError:
            rejected += 1
        else:
            assert bls.g1_on_curve(pt) and bls.g1_in_subgroup(pt)
    assert rejected > 0


def test_pairing_bilinear_and_nondegenerate():
    base = bls.pairing(bls.G1_GEN, bls.G2_GEN)
    assert base != bls.FQ12_ONE
    assert bls.gt_is_valid(base)
    a, b = 6, 11
    lhs = bls.pairing(bls.g1_mul(bls.G1_GEN, a), bls.g2_mul(bls.G2_GEN, b))
    assert lhs == bls.fq12_pow(base, a * b)
    assert lhs == bls.fq12_pow_cyclo(base, a * b)
    # pairing with infinity degenerates to one
    assert bls.final_exponentiation(bls.FQ12_ONE) == bls.FQ12_ONE


def test_cyclotomic_pow_agrees_with_generic_pow():
    rng = SeededRng("cyclo")
    f = bls.pairing(bls.G1_GEN, bls.G2_GEN)
    for _ in range(3):
        k = rng.randbelow(bls.R)
        assert bls.fq12_pow_cyclo(f, k) == bls.fq12_pow(f, k)
    assert bls.fq12_pow_cyclo(f, 0) == bls.FQ12_ONE
    assert bls.fq12_mul(bls.fq12_pow_cyclo(f, bls.R - 1), f) == bls.FQ12_ONE


def test_frobenius_is_pth_power():
    f = bls.pairing(bls.g1_mul(bls.G1_GEN, 5), bls.G2_GEN)
    assert bls.fq12_frob1(f) == bls.fq12_pow(f, bls.P)
    assert bls.fq12_frob2(f) == bls.fq12_pow(bls.fq12_pow(f, bls.P), bls.P)


def test_fq12_bytes_roundtrip_and_validity():
    f = bls.pairing(bls.G1_GEN, bls.g2_mul(bls.G2_GEN, 9))
    data = bls.fq12_to_bytes(f)
    assert len(data) == 576
    assert bls.fq12_from_bytes(data) == f
    with pytest.raises(ValueError):
        bls.fq12_from_bytes(data[:-1])
    # a field constant outside the r-torsion is not a valid pairing value
    assert not bls.gt_is_valid(bls.fq12_from_int(2))
