import pytest

from rabe.errors import EpochRangeError, ParameterError
from rabe.timecode import (
    backdatable_epochs,
    bit_width,
    check_epoch,
    ct_epoch_bits,
    epoch_bits,
    zero_positions,
)


def test_bit_width():
    assert bit_width(4) == 2
    assert bit_width(32) == 5
    assert bit_width(65536) == 16
    for bad in (0, 1, 2, 3, 6, 31, 33):
        with pytest.raises(ParameterError):
            bit_width(bad)


def test_epoch_bits_examples():
    assert epoch_bits(5, 32) == "00101"
    assert epoch_bits(7, 32) == "00111"
    assert epoch_bits(25, 32) == "11001"
    assert epoch_bits(1, 32) == "00001"
    assert epoch_bits(31, 32) == "11111"
    assert epoch_bits(0, 32) == "00000"


def test_epoch_bits_range_checks():
    with pytest.raises(EpochRangeError):
        epoch_bits(32, 32)
    with pytest.raises(EpochRangeError):
        epoch_bits(-1, 32)
    check_epoch(0, 32)
    with pytest.raises(EpochRangeError):
        check_epoch(0, 32, allow_zero=False)
    with pytest.raises(ParameterError):
        bit_width(12)


def test_ct_epoch_bits_keeps_only_the_ones_prefix():
    assert ct_epoch_bits(7, 32) == "00000"
    assert ct_epoch_bits(25, 32) == "11000"
    assert ct_epoch_bits(31, 32) == "11111"
    assert ct_epoch_bits(16, 32) == "10000"
    assert ct_epoch_bits(6, 8) == "110"
    # any epoch below the midpoint starts with 0, so nothing survives
    for t in range(1, 16):
        assert ct_epoch_bits(t, 32) == "00000"


def test_zero_positions():
    assert zero_positions("00101") == {1, 2, 4}
    assert zero_positions("00111") == {1, 2}
    assert zero_positions("00000") == {1, 2, 3, 4, 5}
    assert zero_positions("11111") == frozenset()
    assert zero_positions("110") == {3}


def test_zero_positions_of_the_worked_pair():
    # the (t=5, t*=7) pair: slots needed vs slots kept
    assert zero_positions(epoch_bits(5, 32)) == {1, 2, 4}
    assert zero_positions(ct_epoch_bits(7, 32)) == {1, 2, 3, 4, 5}


def test_backdatable_epochs_lower_half():
    # a lower-half target keeps every slot, so every earlier epoch qualifies
    assert backdatable_epochs(7, 32) == [1, 2, 3, 4, 5, 6]
    assert backdatable_epochs(2, 32) == [1]
    assert backdatable_epochs(1, 32) == []


def test_backdatable_epochs_upper_half():
    # epoch 25 = "11000" keeps slots {3,4,5}; only epochs holding both
    # leading ones can go back to them
    assert backdatable_epochs(25, 32) == [24]
    assert backdatable_epochs(6, 8) == []
    assert backdatable_epochs(31, 32) == []


def test_backdatable_epochs_is_sound_and_complete():
    for max_time in (8, 16, 32):
        for t_star in range(1, max_time):
            kept = zero_positions(ct_epoch_bits(t_star, max_time))
            listed = backdatable_epochs(t_star, max_time)
            assert listed == sorted(listed)
            for t in range(1, t_star):
                wanted = zero_positions(epoch_bits(t, max_time)) <= kept
                assert (t in listed) == wanted, (t, t_star, max_time)


def test_encoding_shapes():
    for max_time in (4, 8, 16, 32, 64):
        tau = bit_width(max_time)
        for t in range(1, max_time):
            bits = epoch_bits(t, max_time)
            cbits = ct_epoch_bits(t, max_time)
            assert len(bits) == len(cbits) == tau
            assert int(bits, 2) == t
            # ct encoding: maximal all-ones prefix survives, the rest zeroed
            prefix = len(bits) - len(bits.lstrip("1"))
            assert cbits == "1" * prefix + "0" * (tau - prefix)
            assert zero_positions(cbits) >= zero_positions(bits)
