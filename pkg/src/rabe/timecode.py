"""Epoch bit encodings.

Epochs t in [0, max_time - 1] are encoded as fixed-width big-endian bit
strings of length tau = log2(max_time).  Key updates bind the exact epoch
(epoch_bits); ciphertexts bind only the maximal leading run of ones
(ct_epoch_bits), zeroing every position from the first 0 onwards so that a
ciphertext can later be moved forward to any epoch whose zero positions are
covered.  That asymmetry is what makes ciphertexts backdatable: whenever the
zero positions of an earlier epoch's exact encoding are a subset of the
ciphertext encoding's zero positions, the earlier epoch's slot value can be
assembled from the published components.

Positions are 1-based from the most significant bit, matching the update
component indexing used by the scheme.
"""

from __future__ import annotations

from .errors import EpochRangeError, ParameterError


def bit_width(max_time: int) -> int:
    """Number of bits tau for a horizon of max_time epochs (a power of two >= 4)."""
    if max_time < 4 or max_time & (max_time - 1) != 0:
        raise ParameterError(f"max_time must be a power of two >= 4, got {max_time}")
    return max_time.bit_length() - 1


def check_epoch(t: int, max_time: int, allow_zero: bool = True) -> None:
    low = 0 if allow_zero else 1
    if not low <= t < max_time:
        raise EpochRangeError(f"epoch {t} outside [{low}, {max_time - 1}]")


def epoch_bits(t: int, max_time: int) -> str:
    """Exact encoding: big-endian binary of t, left-padded with zeros."""
    tau = bit_width(max_time)
    check_epoch(t, max_time)
    return format(t, f"0{tau}b")


def ct_epoch_bits(t: int, max_time: int) -> str:
    """Ciphertext encoding: keep the leading all-ones run of the exact
    encoding, force everything from the first 0 onwards to 0."""
    bits = epoch_bits(t, max_time)
    ones = 0
    while ones < len(bits) and bits[ones] == "1":
        ones += 1
    return bits[:ones] + "0" * (len(bits) - ones)


def zero_positions(bits: str) -> frozenset[int]:
    """1-based indices of the 0 bits, position 1 being the most significant."""
    if not bits or any(b not in "01" for b in bits):
        raise ParameterError(f"not a bit string: {bits!r}")
    return frozenset(i + 1 for i, b in enumerate(bits) if b == "0")


def backdatable_epochs(t_star: int, max_time: int) -> list[int]:
    """All epochs t in [1, t_star) whose exact-encoding zero positions are
    covered by the ciphertext-encoding zero positions of t_star, ascending.

    A ciphertext issued for t_star can be rewound to exactly these epochs.
    For every t_star < max_time/2 the ciphertext encoding is all zeros, so
    the whole range [1, t_star) qualifies.
    """
    check_epoch(t_star, max_time, allow_zero=False)
    cover = zero_positions(ct_epoch_bits(t_star, max_time))
    return [
        t for t in range(1, t_star)
        if zero_positions(epoch_bits(t, max_time)) <= cover
    ]
