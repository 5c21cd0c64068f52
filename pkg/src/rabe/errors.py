"""Exception types shared across the package.

Fallible algorithm outcomes that the scheme itself defines (a revoked user
deriving no decryption key, updating a ciphertext backwards in time) are
returned as None rather than raised; exceptions are reserved for misuse.
"""


class RabeError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatchError(RabeError):
    """Elements or scalars from different group contexts were combined."""


class SideMismatchError(RabeError):
    """A pairing-group element was used on the wrong side of the pairing."""


class ParameterError(RabeError):
    """A parameter is out of its documented range."""


class EpochRangeError(ParameterError):
    """An epoch lies outside [0, max_time - 1] or is the reserved epoch 0."""


class CapacityError(RabeError):
    """The user tree has no free leaf left."""


class InvalidNodeError(RabeError):
    """A node id does not belong to the tree."""


class UnknownIdentityError(RabeError):
    """An identity has no assigned leaf."""


class PolicyParseError(RabeError):
    """A policy formula is malformed or uses a non-monotone operator."""


class UnsatisfiedPolicyError(RabeError):
    """An attribute set does not satisfy the access policy."""


class MissingComponentError(RabeError):
    """A ciphertext lacks the update components the requested epoch needs."""


class EnvelopeError(RabeError):
    """A serialized artifact is malformed or inconsistent with its context."""
