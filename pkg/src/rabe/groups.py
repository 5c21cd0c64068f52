"""Pairing-group abstraction with two interchangeable backends.

The scheme is written against a symmetric pairing e(g^a, g~^b) =
e(g, g~)^(ab), realized over an asymmetric curve by keeping mirrored
generator pairs (same exponent in both source groups, see scheme.setup).
Elements carry a side tag: ciphertext-side elements live in source group
"one", key-side elements in "two", pairing outputs in "target"; mixing sides
is an error, which is exactly the discipline that makes the mirroring sound.

Backends:

* "transparent": every element stores its discrete logarithm modulo a small
  prime derived from the seed.  The pairing multiplies exponents.  Nothing
  is hidden, which is the point: tests can audit every component of every
  artifact against its defining formula, field by field.
* "real": BLS12-381 at the usual ~128-bit level (see bls12381).

Canonical element encoding: one backend byte, one side byte, then the
payload (8-byte big-endian exponent, or a 48/96-byte compressed point /
576-byte Fq12 coefficient block).  Scalars encode as 32-byte little-endian.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bls12381 as bls
from .errors import BackendMismatchError, EnvelopeError, ParameterError, SideMismatchError
from .rng import derive_transparent_modulus

TRANSPARENT = "transparent"
REAL = "real"
BACKENDS = (TRANSPARENT, REAL)

SIDE_ONE = "one"
SIDE_TWO = "two"
SIDE_TARGET = "target"

_BACKEND_BYTE = {TRANSPARENT: 0x01, REAL: 0x02}
_SIDE_BYTE = {SIDE_ONE: 0x01, SIDE_TWO: 0x02, SIDE_TARGET: 0x03}
_BYTE_BACKEND = {v: k for k, v in _BACKEND_BYTE.items()}
_BYTE_SIDE = {v: k for k, v in _SIDE_BYTE.items()}


@dataclass(frozen=True)
class Scalar:
    """Element of Z_p for the group order p of one context."""

    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise ParameterError(f"scalar {self.value} outside [0, {self.modulus})")

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, int):
            return Scalar(other % self.modulus, self.modulus)
        if isinstance(other, Scalar):
            if other.modulus != self.modulus:
                raise BackendMismatchError("scalars from different groups")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar((self.value + other.value) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.value * other.value % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value % self.modulus, self.modulus)

    def inverse(self) -> "Scalar":
        return Scalar(pow(self.value, -1, self.modulus), self.modulus)

    def __int__(self):
        return self.value

    def encode(self) -> bytes:
        return self.value.to_bytes(32, "little")

    @classmethod
    def decode(cls, data: bytes, modulus: int) -> "Scalar":
        if len(data) != 32:
            raise EnvelopeError("scalar encoding must be 32 bytes")
        return cls(int.from_bytes(data, "little") % modulus, modulus)


class GroupElement:
    """Immutable element of one side of one context.

    `*` is the group operation, `**` exponentiation by an int or Scalar,
    `/` multiplies by the inverse.
    """

    __slots__ = ("ctx", "side", "payload")

    def __init__(self, ctx: "BilinearContext", side: str, payload):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, *_):
        raise AttributeError("GroupElement is immutable")

    @property
    def backend(self) -> str:
        return self.ctx.backend

    @property
    def transparent_log(self) -> int:
        """Discrete logarithm to the side generator; transparent backend only."""
        if self.backend != TRANSPARENT:
            raise BackendMismatchError("logarithms are only readable on the transparent backend")
        return self.payload

    def _check_same(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement) or other.ctx.group_id != self.ctx.group_id:
            raise BackendMismatchError("elements from different group contexts")
        if other.side != self.side:
            raise SideMismatchError(f"cannot combine side {self.side} with side {other.side}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check_same(other)
        return GroupElement(self.ctx, self.side, self.ctx._op(self.side, self.payload, other.payload))

    def __truediv__(self, other: "GroupElement") -> "GroupElement":
        return self * other.inverse()

    def __pow__(self, exponent) -> "GroupElement":
        if isinstance(exponent, Scalar):
            if exponent.modulus != self.ctx.prime_order:
                raise BackendMismatchError("scalar from a different group")
            exponent = exponent.value
        elif not isinstance(exponent, int):
            return NotImplemented
        exponent %= self.ctx.prime_order
        return GroupElement(self.ctx, self.side, self.ctx._exp(self.side, self.payload, exponent))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.ctx, self.side, self.ctx._inv(self.side, self.payload))

    def is_identity(self) -> bool:
        return self.payload == self.ctx._identity_payload(self.side)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.ctx.group_id == other.ctx.group_id
            and self.side == other.side
            and self.payload == other.payload
        )

    def __hash__(self):
        return hash((self.ctx.group_id, self.side, self.payload))

    def __repr__(self):
        return f"<{self.backend} {self.side} element>"

    def encode(self) -> bytes:
        head = bytes([_BACKEND_BYTE[self.backend], _SIDE_BYTE[self.side]])
        return head + self.ctx._encode_payload(self.side, self.payload)


class BilinearContext:
    """Shared interface of both backends."""

    backend: str
    prime_order: int
    group_id: str

    # -- element construction ------------------------------------------------

    def generator(self, side: str) -> GroupElement:
        self._check_side(side)
        return GroupElement(self, side, self._generator_payload(side))

    def identity(self, side: str) -> GroupElement:
        self._check_side(side)
        return GroupElement(self, side, self._identity_payload(side))

    def scalar(self, value: int) -> Scalar:
        return Scalar(value % self.prime_order, self.prime_order)

    def random_scalar(self, rng) -> Scalar:
        return Scalar(rng.randbelow(self.prime_order), self.prime_order)

    def random_element(self, side: str, rng) -> GroupElement:
        return self.generator(side) ** self.random_scalar(rng)

    # -- pairing -------------------------------------------------------------

    def pair(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.pair_product([(a, b)])

    def pair_product(self, pairs) -> GroupElement:
        """prod e(a_i, b_i); on the real backend one shared final
        exponentiation over the combined Miller loops."""
        checked = []
        for a, b in pairs:
            for el, side in ((a, SIDE_ONE), (b, SIDE_TWO)):
                if not isinstance(el, GroupElement) or el.ctx.group_id != self.group_id:
                    raise BackendMismatchError("pairing argument from a different context")
                if el.side != side:
                    raise SideMismatchError(f"pairing argument on side {el.side}, expected {side}")
            checked.append((a.payload, b.payload))
        return GroupElement(self, SIDE_TARGET, self._pair_product_payload(checked))

    # -- decoding ------------------------------------------------------------

    def decode_element(self, data: bytes) -> GroupElement:
        if len(data) < 2:
            raise EnvelopeError("element encoding too short")
        backend = _BYTE_BACKEND.get(data[0])
        side = _BYTE_SIDE.get(data[1])
        if backend != self.backend or side is None:
            raise EnvelopeError("element encoding does not match this context")
        try:
            payload = self._decode_payload(side, data[2:])
        except ValueError as exc:
            raise EnvelopeError(str(exc)) from None
        return GroupElement(self, side, payload)

    def decode_scalar(self, data: bytes) -> Scalar:
        return Scalar.decode(data, self.prime_order)

    # -- misc ----------------------------------------------------------------

    @staticmethod
    def _check_side(side: str) -> None:
        if side not in (SIDE_ONE, SIDE_TWO, SIDE_TARGET):
            raise ParameterError(f"unknown side {side!r}")


class TransparentContext(BilinearContext):
    """Exponent-bookkeeping backend: an element is its discrete log."""

    backend = TRANSPARENT

    def __init__(self, seed=0, modulus=None):
        # modulus wins over seed; used when reloading serialized parameters
        self.prime_order = derive_transparent_modulus(seed) if modulus is None else modulus
        self.group_id = f"{TRANSPARENT}/{self.prime_order}"

    def _generator_payload(self, side):
        return 1

    def _identity_payload(self, side):
        return 0

    def _op(self, side, x, y):
        return (x + y) % self.prime_order

    def _exp(self, side, x, k):
        return x * k % self.prime_order

    def _inv(self, side, x):
        return -x % self.prime_order

    def _pair_product_payload(self, pairs):
        return sum(a * b for a, b in pairs) % self.prime_order

    def _encode_payload(self, side, payload):
        return payload.to_bytes(8, "big")

    def _decode_payload(self, side, data):
        if len(data) != 8:
            raise ValueError("transparent element payload must be 8 bytes")
        value = int.from_bytes(data, "big")
        if value >= self.prime_order:
            raise ValueError("transparent element exponent out of range")
        return value


class RealContext(BilinearContext):
    """BLS12-381 backend; the context itself is stateless curve data."""

    backend = REAL

    def __init__(self):
        self.prime_order = bls.R
        self.group_id = f"{REAL}/bls12-381"
        self._target_gen = None

    def _generator_payload(self, side):
        if side == SIDE_ONE:
            return bls.G1_GEN
        if side == SIDE_TWO:
            return bls.G2_GEN
        if self._target_gen is None:
            self._target_gen = bls.pairing(bls.G1_GEN, bls.G2_GEN)
        return self._target_gen

    def _identity_payload(self, side):
        return None if side in (SIDE_ONE, SIDE_TWO) else bls.FQ12_ONE

    def _op(self, side, x, y):
        if side == SIDE_ONE:
            return bls.g1_add(x, y)
        if side == SIDE_TWO:
            return bls.g2_add(x, y)
        return bls.fq12_mul(x, y)

    def _exp(self, side, x, k):
        if side == SIDE_ONE:
            return bls.g1_mul(x, k)
        if side == SIDE_TWO:
            return bls.g2_mul(x, k)
        # target elements are r-torsion, hence cyclotomic
        return bls.fq12_pow_cyclo(x, k)

    def _inv(self, side, x):
        if side == SIDE_ONE:
            return bls.g1_neg(x)
        if side == SIDE_TWO:
            return bls.g2_neg(x)
        return bls.fq12_inv(x)

    def _pair_product_payload(self, pairs):
        f = None
        for a, b in pairs:
            if a is None or b is None:
                continue
            ml = bls.miller_loop(a, b)
            f = ml if f is None else bls.fq12_mul(f, ml)
        if f is None:
            return bls.FQ12_ONE
        return bls.final_exponentiation(f)

    def _encode_payload(self, side, payload):
        if side == SIDE_ONE:
            return bls.g1_to_bytes(payload)
        if side == SIDE_TWO:
            return bls.g2_to_bytes(payload)
        return bls.fq12_to_bytes(payload)

    def _decode_payload(self, side, data):
        if side == SIDE_ONE:
            return bls.g1_from_bytes(data)
        if side == SIDE_TWO:
            return bls.g2_from_bytes(data)
        value = bls.fq12_from_bytes(data)
        if not bls.gt_is_valid(value):
            raise ValueError("target element outside the pairing image")
        return value


_REAL_CONTEXT = None


def new_context(backend: str = TRANSPARENT, seed=0) -> BilinearContext:
    """Create (or reuse, for the fixed curve) a group context.

    The transparent modulus is a deterministic function of the seed; the
    real curve ignores the seed entirely.
    """
    if backend == TRANSPARENT:
        return TransparentContext(seed)
    if backend == REAL:
        global _REAL_CONTEXT
        if _REAL_CONTEXT is None:
            _REAL_CONTEXT = RealContext()
        return _REAL_CONTEXT
    raise ParameterError(f"unknown backend {backend!r}")


def lagrange_coefficient(i: Scalar, points, x: Scalar) -> Scalar:
    """Interpolation coefficient Delta_{i,J}(x) = prod_{j in J, j != i}
    (x - j) / (i - j)."""
    modulus = i.modulus
    values = []
    for j in points:
        if isinstance(j, Scalar):
            if j.modulus != modulus:
                raise BackendMismatchError("interpolation points from different groups")
            values.append(j.value)
        else:
            values.append(j % modulus)
    if len(set(values)) != len(values):
        raise ZeroDivisionError("duplicate interpolation points")
    if x.modulus != modulus:
        raise BackendMismatchError("evaluation point from a different group")
    num, den = 1, 1
    for j in values:
        if j == i.value:
            continue
        num = num * (x.value - j) % modulus
        den = den * (i.value - j) % modulus
    if den == 0:
        raise ZeroDivisionError("interpolation points collide with i")
    return Scalar(num * pow(den, -1, modulus) % modulus, modulus)
