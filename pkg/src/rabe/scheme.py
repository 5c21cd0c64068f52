"""The revocable key-policy ABE scheme.

Roles and artifacts:

* setup: public parameters, master key, user tree, empty revocation list.
* keygen: a per-user private key; one share vector of the node secret per
  tree node on the user's leaf path, blinded row-wise.
* update_key: the broadcast key update for an epoch, one component pair per
  cover node of the currently non-revoked users.
* derive_dk: private key + key update -> decryption key (None for a user
  revoked at that epoch, whose path misses the cover).
* encrypt: a ciphertext bound to an attribute set and an epoch; its epoch
  binding uses the truncated ciphertext encoding and ships one update
  component per zero position so the holder can move it forward in time.
* update_ct / fold_ciphertext: re-anchor a ciphertext to another epoch by
  folding the matching update components and re-randomizing everything.
* decrypt: recombine row shares along a satisfied policy and strip both the
  attribute and the epoch blinding.
* revoke: add an identity to the revocation list from an epoch onwards.

All group equations are stated against mirrored generator pairs: every
public generator except g1 exists in both source groups with the same
exponent, ciphertext components use side one, key components side two, so
each pairing in decrypt sees one element of each side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    MissingComponentError,
    ParameterError,
    SideMismatchError,
    UnsatisfiedPolicyError,
)
from .groups import (
    SIDE_ONE,
    SIDE_TWO,
    SIDE_TARGET,
    BilinearContext,
    GroupElement,
    Scalar,
)
from .policy import (
    AccessPolicy,
    check_attributes,
    reconstruction_coefficients,
    satisfies,
    share_secret,
)
from .timecode import bit_width, check_epoch, ct_epoch_bits, epoch_bits, zero_positions
from .tree import RevocationList, TreeState, cover_nodes


@dataclass(frozen=True)
class MirroredPair:
    """The same unknown exponent under both source-group generators."""

    one: GroupElement
    two: GroupElement


def _mirror(ctx: BilinearContext, exponent: Scalar) -> MirroredPair:
    return MirroredPair(
        ctx.generator(SIDE_ONE) ** exponent,
        ctx.generator(SIDE_TWO) ** exponent,
    )


@dataclass
class PublicParams:
    ctx: BilinearContext
    n_users: int
    max_time: int
    attr_max: int
    g1: GroupElement              # side one, g^alpha
    g2: MirroredPair
    t_gens: tuple[MirroredPair, ...]   # attr_max + 1 interpolation anchors
    u0: MirroredPair
    u_gens: tuple[MirroredPair, ...]   # one per epoch bit position
    _t_cache: dict = field(default_factory=dict, repr=False)
    _blind_base: GroupElement | None = field(default=None, repr=False)

    @property
    def tau(self) -> int:
        return bit_width(self.max_time)

    def blinding_base(self) -> GroupElement:
        """e(g1, g2), the target-group base every message is blinded with."""
        if self._blind_base is None:
            self._blind_base = self.ctx.pair(self.g1, self.g2.two)
        return self._blind_base

    def eval_t(self, x: int, side: str) -> GroupElement:
        """The attribute generator T(x) = g2^(x^n) * prod T_i^(L_i(x)) with
        L_i the Lagrange basis over the anchor points 1..n+1."""
        key = (side, x)
        cached = self._t_cache.get(key)
        if cached is not None:
            return cached
        p = self.ctx.prime_order
        n = self.attr_max
        if side == SIDE_ONE:
            gens = [self.g2.one] + [t.one for t in self.t_gens]
        elif side == SIDE_TWO:
            gens = [self.g2.two] + [t.two for t in self.t_gens]
        else:
            raise SideMismatchError("T(x) exists on the source sides only")
        acc = gens[0] ** pow(x, n, p)
        points = list(range(1, n + 2))
        for i, gen in zip(points, gens[1:]):
            acc = acc * gen ** _lagrange_int(i, points, x, p)
        self._t_cache[key] = acc
        return acc


def _lagrange_int(i: int, points, x: int, p: int) -> int:
    num, den = 1, 1
    for j in points:
        if j == i:
            continue
        num = num * (x - j) % p
        den = den * (i - j) % p
    return num * pow(den, -1, p) % p


@dataclass(frozen=True)
class MasterKey:
    alpha: Scalar


@dataclass(frozen=True)
class PrivateKey:
    identity: str
    policy: AccessPolicy
    # node id -> one (k0, k1) pair per policy row
    parts: dict[int, tuple[tuple[GroupElement, GroupElement], ...]]


@dataclass(frozen=True)
class KeyUpdate:
    epoch: int
    # cover node id -> (d0, d1)
    parts: dict[int, tuple[GroupElement, GroupElement]]


@dataclass(frozen=True)
class DecryptionKey:
    identity: str
    epoch: int
    node: int
    policy: AccessPolicy
    rows: tuple[tuple[GroupElement, GroupElement], ...]
    d0: GroupElement
    d1: GroupElement


@dataclass(frozen=True)
class OriginalCiphertext:
    attrs: frozenset[int]
    epoch: int
    c: GroupElement
    c1: GroupElement
    c2: dict[int, GroupElement]   # per attribute
    e1: GroupElement
    e2: dict[int, GroupElement]   # per zero position of the ct encoding


@dataclass(frozen=True)
class UpdatedCiphertext:
    attrs: frozenset[int]
    epoch: int
    c: GroupElement
    c1: GroupElement
    c2: dict[int, GroupElement]
    e_t: GroupElement


def setup(
    ctx: BilinearContext,
    n_users: int,
    max_time: int,
    attr_max: int,
    rng,
) -> tuple[PublicParams, MasterKey, TreeState, RevocationList]:
    if n_users < 1:
        raise ParameterError("need at least one user")
    if attr_max < 1:
        raise ParameterError("need at least one attribute")
    tau = bit_width(max_time)
    alpha = ctx.random_scalar(rng)
    pp = PublicParams(
        ctx=ctx,
        n_users=n_users,
        max_time=max_time,
        attr_max=attr_max,
        g1=ctx.generator(SIDE_ONE) ** alpha,
        g2=_mirror(ctx, ctx.random_scalar(rng)),
        t_gens=tuple(_mirror(ctx, ctx.random_scalar(rng)) for _ in range(attr_max + 1)),
        u0=_mirror(ctx, ctx.random_scalar(rng)),
        u_gens=tuple(_mirror(ctx, ctx.random_scalar(rng)) for _ in range(tau)),
    )
    capacity = 1
    while capacity < n_users:
        capacity *= 2
    return pp, MasterKey(alpha), TreeState(capacity), RevocationList()


def keygen(
    pp: PublicParams,
    mk: MasterKey,
    state: TreeState,
    identity: str,
    policy: AccessPolicy,
    rng,
) -> PrivateKey:
    check_attributes(policy.attributes(), pp.attr_max)
    p = pp.ctx.prime_order
    leaf = state.assign_leaf(identity)
    parts = {}
    for node in state.path(leaf):
        node_secret = state.get_or_create_secret(node, pp.ctx, rng)
        shares = share_secret(policy, node_secret.value, p, rng)
        rows = []
        for attr, lam in zip(policy.row_attrs, shares):
            r = pp.ctx.random_scalar(rng)
            k0 = pp.g2.two ** lam * pp.eval_t(attr, SIDE_TWO) ** r
            k1 = pp.ctx.generator(SIDE_TWO) ** r
            rows.append((k0, k1))
        parts[node] = tuple(rows)
    return PrivateKey(identity=identity, policy=policy, parts=parts)


def update_key(
    pp: PublicParams,
    mk: MasterKey,
    state: TreeState,
    rl: RevocationList,
    epoch: int,
    rng,
) -> KeyUpdate:
    check_epoch(epoch, pp.max_time, allow_zero=False)
    positions = sorted(zero_positions(epoch_bits(epoch, pp.max_time)))
    base = pp.u0.two
    for j in positions:
        base = base * pp.u_gens[j - 1].two
    parts = {}
    for node in sorted(cover_nodes(state, rl, epoch)):
        node_secret = state.get_or_create_secret(node, pp.ctx, rng)
        r = pp.ctx.random_scalar(rng)
        d0 = pp.g2.two ** (mk.alpha - node_secret) * base ** r
        d1 = pp.ctx.generator(SIDE_TWO) ** r
        parts[node] = (d0, d1)
    return KeyUpdate(epoch=epoch, parts=parts)


def derive_dk(sk: PrivateKey, ku: KeyUpdate) -> DecryptionKey | None:
    """None when the user is revoked at the update's epoch."""
    common = sk.parts.keys() & ku.parts.keys()
    if not common:
        return None
    # the path meets the cover in at most one node by construction
    if len(common) != 1:
        raise ParameterError(f"path meets cover in {len(common)} nodes; corrupt artifacts")
    node = common.pop()
    d0, d1 = ku.parts[node]
    return DecryptionKey(
        identity=sk.identity,
        epoch=ku.epoch,
        node=node,
        policy=sk.policy,
        rows=sk.parts[node],
        d0=d0,
        d1=d1,
    )


def encrypt(
    pp: PublicParams,
    attrs,
    epoch: int,
    message: GroupElement,
    rng,
) -> OriginalCiphertext:
    attrs = check_attributes(attrs, pp.attr_max)
    check_epoch(epoch, pp.max_time, allow_zero=False)
    if message.side != SIDE_TARGET or message.ctx.group_id != pp.ctx.group_id:
        raise SideMismatchError("messages are target-group elements of this context")
    s = pp.ctx.random_scalar(rng)
    positions = sorted(zero_positions(ct_epoch_bits(epoch, pp.max_time)))
    return OriginalCiphertext(
        attrs=attrs,
        epoch=epoch,
        c=pp.blinding_base() ** s * message,
        c1=pp.ctx.generator(SIDE_ONE) ** s,
        c2={x: pp.eval_t(x, SIDE_ONE) ** s for x in sorted(attrs)},
        e1=pp.u0.one ** s,
        e2={j: pp.u_gens[j - 1].one ** s for j in positions},
    )


def fold_ciphertext(
    pp: PublicParams,
    ct: OriginalCiphertext,
    epoch: int,
    rng,
) -> UpdatedCiphertext:
    """Anchor an original ciphertext to a concrete epoch.

    Folds the update components at the target epoch's exact-encoding zero
    positions into the single slot value, then re-randomizes every
    component with fresh randomness.  Performs no direction check: the only
    requirement is that the needed components exist, i.e. the target's zero
    positions are covered by the ciphertext's.  update_ct enforces the
    forward-only rule on top of this; the attack harness deliberately does
    not.
    """
    check_epoch(epoch, pp.max_time, allow_zero=False)
    positions = sorted(zero_positions(epoch_bits(epoch, pp.max_time)))
    missing = [j for j in positions if j not in ct.e2]
    if missing:
        raise MissingComponentError(
            f"ciphertext at epoch {ct.epoch} lacks update components {missing} "
            f"needed for epoch {epoch}"
        )
    folded = ct.e1
    base = pp.u0.one
    for j in positions:
        folded = folded * ct.e2[j]
        base = base * pp.u_gens[j - 1].one
    s2 = pp.ctx.random_scalar(rng)
    return UpdatedCiphertext(
        attrs=ct.attrs,
        epoch=epoch,
        c=ct.c * pp.blinding_base() ** s2,
        c1=ct.c1 * pp.ctx.generator(SIDE_ONE) ** s2,
        c2={x: v * pp.eval_t(x, SIDE_ONE) ** s2 for x, v in ct.c2.items()},
        e_t=folded * base ** s2,
    )


def update_ct(
    pp: PublicParams,
    ct: OriginalCiphertext,
    epoch: int,
    rng,
) -> UpdatedCiphertext | None:
    """Forward-only public ciphertext update; None when asked to go back."""
    check_epoch(epoch, pp.max_time, allow_zero=False)
    if epoch < ct.epoch:
        return None
    return fold_ciphertext(pp, ct, epoch, rng)


def decrypt(pp: PublicParams, ct: UpdatedCiphertext, dk: DecryptionKey) -> GroupElement:
    """Recover the message; the result is well-defined garbage when the
    key's epoch does not match the ciphertext's (no oracle here)."""
    p = pp.ctx.prime_order
    if not satisfies(dk.policy, ct.attrs, p):
        raise UnsatisfiedPolicyError(
            f"policy {dk.policy.formula!r} not satisfied by {sorted(ct.attrs)}"
        )
    w = reconstruction_coefficients(dk.policy, ct.attrs, p)
    # A1 = prod_i (e(c1, k0_i) / e(c2[rho(i)], k1_i))^(w_i) collapses into
    # the product below by moving each w_i inside the pairing; A2 =
    # e(c1, d0) / e(e_t, d1).  One shared final exponentiation.
    key_side = dk.d0
    pairs = [(ct.e_t.inverse(), dk.d1)]
    for i, w_i in w.items():
        k0, k1 = dk.rows[i]
        key_side = key_side * k0 ** w_i
        pairs.append(((ct.c2[dk.policy.row_attrs[i]] ** w_i).inverse(), k1))
    pairs.append((ct.c1, key_side))
    return ct.c / pp.ctx.pair_product(pairs)


def revoke(
    state: TreeState,
    rl: RevocationList,
    identity: str,
    epoch: int,
    max_time: int,
) -> None:
    state.leaf_for(identity)  # unknown identities are an error
    rl.add(identity, epoch, max_time)
