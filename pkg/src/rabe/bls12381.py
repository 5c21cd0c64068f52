"""BLS12-381 pairing curve, pure Python.

Field tower: Fq2 = Fq[u]/(u^2+1), Fq6 = Fq2[v]/(v^3 - xi) with xi = u+1,
Fq12 = Fq6[w]/(w^2 - v).  Elements are nested tuples of ints; all functions
are free functions over those tuples, which keeps the hot paths free of
attribute lookups.

G1 is E(Fq): y^2 = x^3 + 4, G2 is the sextic twist E'(Fq2): y^2 = x^3 +
4(u+1).  Points are affine pairs (or None for infinity); scalar
multiplication runs on Jacobian coordinates internally (EFD dbl-2009-l /
add-2007-bl).  The pairing is the ate pairing: Miller loop over the curve
parameter with the twist point untwisted into E(Fq12), then the final
exponentiation split into the easy part and a NAF-windowed hard part using
cyclotomic squaring.
"""

from __future__ import annotations

# Base field prime, subgroup order, and |z| for the curve parameter z < 0.
P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
BLS_X = 0xD201000000010000

G1_GEN = (
    0x17F1D3A73197D7942695638C4FA9AC0FC3688C4F9774B905A14E3A3F171BAC586C55E83FF97A1AEFFB3AF00ADB22C6BB,
    0x08B3F481E3AAA0F1A09E30ED741D8AE4FCF5E095D5D00AF600DB18CB2C04B3EDD03CC744A2888AE40CAA232946C5E7E1,
)
G2_GEN = (
    (
        0x024AA2B2F08F0A91260805272DC51051C6E47AD4FA403B02B4510B647AE3D1770BAC0326A805BBEFD48056C8C121BDB8,
        0x13E02B6052719F607DACD3A088274F65596BD0D09920B61AB5DA61BBDC7F5049334CF11213945D57E5AC7D055D042B7E,
    ),
    (
        0x0CE5D527727D6E118CC9CDC6DA2E351AADFD9BAA8CBDD3A76D429A695160D12C923AC9CC3BACA289E193548608B82801,
        0x0606C4A02EA734CC32ACD2B02BC28B99CB3E287E85A763AF267492AB572E99AB3F370D275CEC1DA1AAA9075FF05F79BE,
    ),
)

B1 = 4  # G1 curve constant
HALF_P = (P - 1) // 2

# ---------------------------------------------------------------------------
# Fq2: a + b*u, u^2 = -1.  Elements are (a, b) with 0 <= a, b < P.

FQ2_ZERO = (0, 0)
FQ2_ONE = (1, 0)
XI = (1, 1)  # the cubic/sextic non-residue u + 1


def fq2_add(x, y):
    return ((x[0] + y[0]) % P, (x[1] + y[1]) % P)


def fq2_sub(x, y):
    return ((x[0] - y[0]) % P, (x[1] - y[1]) % P)


def fq2_neg(x):
    return (-x[0] % P, -x[1] % P)


def fq2_conj(x):
    return (x[0], -x[1] % P)


def fq2_mul(x, y):
    # Karatsuba: 3 base multiplications
    a, b = x
    c, d = y
    t0 = a * c
    t1 = b * d
    t2 = (a + b) * (c + d)
    return ((t0 - t1) % P, (t2 - t0 - t1) % P)


def fq2_sqr(x):
    a, b = x
    # (a+b)(a-b), 2ab
    return ((a + b) * (a - b) % P, 2 * a * b % P)


def fq2_scalar(x, k):
    return (x[0] * k % P, x[1] * k % P)


def fq2_mul_xi(x):
    # multiply by u + 1
    a, b = x
    return ((a - b) % P, (a + b) % P)


def fq2_inv(x):
    a, b = x
    norm_inv = pow(a * a + b * b, -1, P)
    return (a * norm_inv % P, -b * norm_inv % P)


def fq2_pow(x, e):
    result = FQ2_ONE
    while e:
        if e & 1:
            result = fq2_mul(result, x)
        x = fq2_sqr(x)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Fq6: a + b*v + c*v^2 over Fq2, v^3 = xi.

FQ6_ZERO = (FQ2_ZERO, FQ2_ZERO, FQ2_ZERO)
FQ6_ONE = (FQ2_ONE, FQ2_ZERO, FQ2_ZERO)


def fq6_add(x, y):
    return (fq2_add(x[0], y[0]), fq2_add(x[1], y[1]), fq2_add(x[2], y[2]))


def fq6_sub(x, y):
    return (fq2_sub(x[0], y[0]), fq2_sub(x[1], y[1]), fq2_sub(x[2], y[2]))


def fq6_neg(x):
    return (fq2_neg(x[0]), fq2_neg(x[1]), fq2_neg(x[2]))


def fq6_mul(x, y):
    # Toom-style interpolation: 6 Fq2 multiplications
    a0, a1, a2 = x
    b0, b1, b2 = y
    v0 = fq2_mul(a0, b0)
    v1 = fq2_mul(a1, b1)
    v2 = fq2_mul(a2, b2)
    c0 = fq2_add(v0, fq2_mul_xi(fq2_sub(fq2_mul(fq2_add(a1, a2), fq2_add(b1, b2)), fq2_add(v1, v2))))
    c1 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a1), fq2_add(b0, b1)), fq2_add(v0, v1)), fq2_mul_xi(v2))
    c2 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a2), fq2_add(b0, b2)), fq2_add(v0, v2)), v1)
    return (c0, c1, c2)


def fq6_sqr(x):
    return fq6_mul(x, x)


def fq6_scalar(x, k):
    return (fq2_scalar(x[0], k), fq2_scalar(x[1], k), fq2_scalar(x[2], k))


def fq6_mul_fq2(x, c):
    return (fq2_mul(x[0], c), fq2_mul(x[1], c), fq2_mul(x[2], c))


def fq6_mul_v(x):
    # (a0 + a1 v + a2 v^2) * v = xi*a2 + a0 v + a1 v^2
    return (fq2_mul_xi(x[2]), x[0], x[1])


def fq6_inv(x):
    a0, a1, a2 = x
    c0 = fq2_sub(fq2_sqr(a0), fq2_mul_xi(fq2_mul(a1, a2)))
    c1 = fq2_sub(fq2_mul_xi(fq2_sqr(a2)), fq2_mul(a0, a1))
    c2 = fq2_sub(fq2_sqr(a1), fq2_mul(a0, a2))
    t = fq2_inv(
        fq2_add(fq2_mul(a0, c0), fq2_mul_xi(fq2_add(fq2_mul(a2, c1), fq2_mul(a1, c2))))
    )
    return (fq2_mul(c0, t), fq2_mul(c1, t), fq2_mul(c2, t))


# ---------------------------------------------------------------------------
# Fq12: a + b*w over Fq6, w^2 = v.

FQ12_ZERO = (FQ6_ZERO, FQ6_ZERO)
FQ12_ONE = (FQ6_ONE, FQ6_ZERO)


def fq12_add(x, y):
    return (fq6_add(x[0], y[0]), fq6_add(x[1], y[1]))


def fq12_sub(x, y):
    return (fq6_sub(x[0], y[0]), fq6_sub(x[1], y[1]))


def fq12_mul(x, y):
    a0, a1 = x
    b0, b1 = y
    v0 = fq6_mul(a0, b0)
    v1 = fq6_mul(a1, b1)
    c0 = fq6_add(v0, fq6_mul_v(v1))
    c1 = fq6_sub(fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(b0, b1)), v0), v1)
    return (c0, c1)


def fq12_sqr(x):
    a0, a1 = x
    v0 = fq6_sqr(a0)
    v1 = fq6_sqr(a1)
    c1 = fq6_sub(fq6_sub(fq6_sqr(fq6_add(a0, a1)), v0), v1)
    return (fq6_add(v0, fq6_mul_v(v1)), c1)


def fq12_conj(x):
    return (x[0], fq6_neg(x[1]))


def fq12_inv(x):
    a0, a1 = x
    t = fq6_inv(fq6_sub(fq6_sqr(a0), fq6_mul_v(fq6_sqr(a1))))
    return (fq6_mul(a0, t), fq6_neg(fq6_mul(a1, t)))


def fq12_from_int(n):
    return (((n % P, 0), FQ2_ZERO, FQ2_ZERO), FQ6_ZERO)


def fq12_pow(x, e):
    if e < 0:
        return fq12_pow(fq12_inv(x), -e)
    result = FQ12_ONE
    while e:
        if e & 1:
            result = fq12_mul(result, x)
        x = fq12_sqr(x)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Cyclotomic subgroup helpers.  After the easy part of the final
# exponentiation every element satisfies f^(p^6+1) = const... more to the
# point conj(f) = f^-1, which makes negative NAF digits free and enables the
# compressed squaring below.


def _fq4_sqr(a, b):
    # (a + b*s)^2 in Fq2[s]/(s^2 - xi): (a^2 + xi b^2, (a+b)^2 - a^2 - b^2)
    a2 = fq2_sqr(a)
    b2 = fq2_sqr(b)
    return (
        fq2_add(a2, fq2_mul_xi(b2)),
        fq2_sub(fq2_sqr(fq2_add(a, b)), fq2_add(a2, b2)),
    )


def fq12_cyclo_sqr(f):
    # Granger-Scott squaring, valid only in the cyclotomic subgroup
    (z0, z4, z3), (z2, z1, z5) = f

    t0, t1 = _fq4_sqr(z0, z1)
    z0 = fq2_add(fq2_scalar(fq2_sub(t0, z0), 2), t0)
    z1 = fq2_add(fq2_scalar(fq2_add(t1, z1), 2), t1)

    t0, t1 = _fq4_sqr(z2, z3)
    t2, t3 = _fq4_sqr(z4, z5)

    z4 = fq2_add(fq2_scalar(fq2_sub(t0, z4), 2), t0)
    z5 = fq2_add(fq2_scalar(fq2_add(t1, z5), 2), t1)

    t0 = fq2_mul_xi(t3)
    z2 = fq2_add(fq2_scalar(fq2_add(t0, z2), 2), t0)
    z3 = fq2_add(fq2_scalar(fq2_sub(t2, z3), 2), t2)

    return ((z0, z4, z3), (z2, z1, z5))


def _naf(e, width):
    # Least-significant-first signed digits, odd digits in (-2^(w-1), 2^(w-1))
    digits = []
    while e:
        if e & 1:
            d = e % (1 << width)
            if d >= 1 << (width - 1):
                d -= 1 << width
            e -= d
        else:
            d = 0
        digits.append(d)
        e >>= 1
    return digits


def fq12_pow_cyclo(f, e):
    """Windowed-NAF power of a cyclotomic-subgroup element (e >= 0)."""
    if e == 0:
        return FQ12_ONE
    digits = _naf(e, 4)
    f2 = fq12_cyclo_sqr(f)
    table = {1: f}
    for d in (3, 5, 7):
        table[d] = fq12_mul(table[d - 2], f2)
    result = None
    for d in reversed(digits):
        if result is not None:
            result = fq12_cyclo_sqr(result)
        if d:
            m = table[d] if d > 0 else fq12_conj(table[-d])
            result = m if result is None else fq12_mul(result, m)
    return result


# Frobenius maps on Fq12 act coefficient-wise: the w^k coordinate picks up
# gamma_n^k with gamma_n = xi^(k(p^n-1)/6), and odd powers also conjugate
# the Fq2 coefficient.
_FROB = {}


def _frob_constants(n):
    if n not in _FROB:
        gamma = fq2_pow(XI, (P**n - 1) // 6)
        row = [FQ2_ONE]
        for _ in range(5):
            row.append(fq2_mul(row[-1], gamma))
        _FROB[n] = row
    return _FROB[n]


def fq12_frob1(f):
    g = _frob_constants(1)
    (a0, a1, a2), (b0, b1, b2) = f
    return (
        (fq2_conj(a0), fq2_mul(fq2_conj(a1), g[2]), fq2_mul(fq2_conj(a2), g[4])),
        (fq2_mul(fq2_conj(b0), g[1]), fq2_mul(fq2_conj(b1), g[3]), fq2_mul(fq2_conj(b2), g[5])),
    )


def fq12_frob2(f):
    g = _frob_constants(2)
    (a0, a1, a2), (b0, b1, b2) = f
    return (
        (a0, fq2_mul(a1, g[2]), fq2_mul(a2, g[4])),
        (fq2_mul(b0, g[1]), fq2_mul(b1, g[3]), fq2_mul(b2, g[5])),
    )


HARD_EXP = (P**4 - P**2 + 1) // R

# The hard part is computed as f^(3*hard) via the curve-parameter chain
#   3*hard = (z-1)^2 (z+p) (z^2+p^2-1) + 3,
# a fixed cube of the usual value, which is still a non-degenerate bilinear
# pairing since gcd(3, r) = 1.
assert 3 * HARD_EXP == (-BLS_X - 1) ** 2 * (-BLS_X + P) * (BLS_X**2 + P**2 - 1) + 3


def _exp_neg_z(f):
    # f^z for the (negative) curve parameter: conj(f^|z|), f unitary
    return fq12_conj(fq12_pow_cyclo(f, BLS_X))


def final_exponentiation(f):
    # easy part: f^((p^6-1)(p^2+1)) lands in the cyclotomic subgroup
    f = fq12_mul(fq12_conj(f), fq12_inv(f))
    f = fq12_mul(fq12_frob2(f), f)
    # hard part
    t = fq12_mul(_exp_neg_z(f), fq12_conj(f))          # f^(z-1)
    t = fq12_mul(_exp_neg_z(t), fq12_conj(t))          # ^(z-1) again
    t = fq12_mul(_exp_neg_z(t), fq12_frob1(t))         # ^(z+p)
    t = fq12_mul(
        fq12_mul(_exp_neg_z(_exp_neg_z(t)), fq12_frob2(t)),
        fq12_conj(t),
    )                                                  # ^(z^2+p^2-1)
    return fq12_mul(t, fq12_mul(fq12_cyclo_sqr(f), f))  # * f^3


# ---------------------------------------------------------------------------
# G1: y^2 = x^3 + 4 over Fq.  Affine points are (x, y) or None.


def g1_neg(pt):
    if pt is None:
        return None
    return (pt[0], -pt[1] % P)


def g1_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return (y * y - (x * x * x + B1)) % P == 0


def _g1_dbl_jac(p):
    X, Y, Z = p
    if not Z or not Y:
        return (0, 1, 0)
    A = X * X % P
    B = Y * Y % P
    C = B * B % P
    D = 2 * ((X + B) ** 2 - A - C) % P
    E = 3 * A % P
    X3 = (E * E - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y * Z % P
    return (X3, Y3, Z3)


def _g1_add_jac(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if not Z1:
        return q
    if not Z2:
        return p
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 * Z2Z2 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    H = (U2 - U1) % P
    r = (S2 - S1) % P
    if H == 0:
        if r == 0:
            return _g1_dbl_jac(p)
        return (0, 1, 0)
    I = 4 * H * H % P
    J = H * I % P
    r = 2 * r % P
    V = U1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) ** 2 - Z1Z1 - Z2Z2) % P * H % P
    return (X3, Y3, Z3)


def _g1_from_jac(p):
    X, Y, Z = p
    if not Z:
        return None
    zinv = pow(Z, -1, P)
    z2 = zinv * zinv % P
    return (X * z2 % P, Y * z2 * zinv % P)


def g1_add(p, q):
    if p is None:
        return q
    if q is None:
        return p
    return _g1_from_jac(_g1_add_jac((*p, 1), (*q, 1)))


def g1_mul(pt, k):
    # no reduction mod R here: subgroup checks rely on the raw multiple
    if k < 0:
        return g1_mul(g1_neg(pt), -k)
    if pt is None or k == 0:
        return None
    digits = _naf(k, 4)
    base = (*pt, 1)
    dbl = _g1_dbl_jac(base)
    table = {1: base}
    for d in (3, 5, 7):
        table[d] = _g1_add_jac(table[d - 2], dbl)
    acc = (0, 1, 0)
    for d in reversed(digits):
        acc = _g1_dbl_jac(acc)
        if d > 0:
            acc = _g1_add_jac(acc, table[d])
        elif d < 0:
            X, Y, Z = table[-d]
            acc = _g1_add_jac(acc, (X, -Y % P, Z))
    return _g1_from_jac(acc)


def g1_in_subgroup(pt):
    return pt is None or (g1_on_curve(pt) and g1_mul(pt, R) is None)


# ---------------------------------------------------------------------------
# G2: y^2 = x^3 + 4(u+1) over Fq2.  Same formulas over Fq2.

B2 = fq2_scalar(XI, 4)


def g2_neg(pt):
    if pt is None:
        return None
    return (pt[0], fq2_neg(pt[1]))


def g2_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    lhs = fq2_sqr(y)
    rhs = fq2_add(fq2_mul(fq2_sqr(x), x), B2)
    return lhs == rhs


def _g2_dbl_jac(p):
    X, Y, Z = p
    if Z == FQ2_ZERO or Y == FQ2_ZERO:
        return (FQ2_ZERO, FQ2_ONE, FQ2_ZERO)
    A = fq2_sqr(X)
    B = fq2_sqr(Y)
    C = fq2_sqr(B)
    D = fq2_scalar(fq2_sub(fq2_sub(fq2_sqr(fq2_add(X, B)), A), C), 2)
    E = fq2_scalar(A, 3)
    X3 = fq2_sub(fq2_sqr(E), fq2_scalar(D, 2))
    Y3 = fq2_sub(fq2_mul(E, fq2_sub(D, X3)), fq2_scalar(C, 8))
    Z3 = fq2_scalar(fq2_mul(Y, Z), 2)
    return (X3, Y3, Z3)


def _g2_add_jac(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == FQ2_ZERO:
        return q
    if Z2 == FQ2_ZERO:
        return p
    Z1Z1 = fq2_sqr(Z1)
    Z2Z2 = fq2_sqr(Z2)
    U1 = fq2_mul(X1, Z2Z2)
    U2 = fq2_mul(X2, Z1Z1)
    S1 = fq2_mul(fq2_mul(Y1, Z2), Z2Z2)
    S2 = fq2_mul(fq2_mul(Y2, Z1), Z1Z1)
    H = fq2_sub(U2, U1)
    r = fq2_sub(S2, S1)
    if H == FQ2_ZERO:
        if r == FQ2_ZERO:
            return _g2_dbl_jac(p)
        return (FQ2_ZERO, FQ2_ONE, FQ2_ZERO)
    I = fq2_scalar(fq2_sqr(H), 4)
    J = fq2_mul(H, I)
    r = fq2_scalar(r, 2)
    V = fq2_mul(U1, I)
    X3 = fq2_sub(fq2_sub(fq2_sqr(r), J), fq2_scalar(V, 2))
    Y3 = fq2_sub(fq2_mul(r, fq2_sub(V, X3)), fq2_scalar(fq2_mul(S1, J), 2))
    Z3 = fq2_mul(fq2_sub(fq2_sub(fq2_sqr(fq2_add(Z1, Z2)), Z1Z1), Z2Z2), H)
    return (X3, Y3, Z3)


def _g2_from_jac(p):
    X, Y, Z = p
    if Z == FQ2_ZERO:
        return None
    zinv = fq2_inv(Z)
    z2 = fq2_sqr(zinv)
    return (fq2_mul(X, z2), fq2_mul(fq2_mul(Y, z2), zinv))


def g2_add(p, q):
    if p is None:
        return q
    if q is None:
        return p
    return _g2_from_jac(_g2_add_jac((*p, FQ2_ONE), (*q, FQ2_ONE)))


def g2_mul(pt, k):
    if k < 0:
        return g2_mul(g2_neg(pt), -k)
    if pt is None or k == 0:
        return None
    digits = _naf(k, 4)
    base = (*pt, FQ2_ONE)
    dbl = _g2_dbl_jac(base)
    table = {1: base}
    for d in (3, 5, 7):
        table[d] = _g2_add_jac(table[d - 2], dbl)
    acc = (FQ2_ZERO, FQ2_ONE, FQ2_ZERO)
    for d in reversed(digits):
        acc = _g2_dbl_jac(acc)
        if d > 0:
            acc = _g2_add_jac(acc, table[d])
        elif d < 0:
            X, Y, Z = table[-d]
            acc = _g2_add_jac(acc, (X, fq2_neg(Y), Z))
    return _g2_from_jac(acc)


def g2_in_subgroup(pt):
    return pt is None or (g2_on_curve(pt) and g2_mul(pt, R) is None)


# ---------------------------------------------------------------------------
# Ate pairing.

_XI_INV = None


def _untwist(q):
    """Map a twist point into E(Fq12): (x, y) -> (x/w^2, y/w^3)."""
    global _XI_INV
    if _XI_INV is None:
        _XI_INV = fq2_inv(XI)
    x, y = q
    # 1/w^2 = xi^-1 v^2 and 1/w^3 = (xi^-1 v) w
    x12 = ((FQ2_ZERO, FQ2_ZERO, fq2_mul(x, _XI_INV)), FQ6_ZERO)
    y12 = (FQ6_ZERO, (FQ2_ZERO, fq2_mul(y, _XI_INV), FQ2_ZERO))
    return (x12, y12)


def _dbl_step(t, xp12, yp12):
    x, y = t
    lam = fq12_mul(
        fq12_sqr(x),
        fq12_inv(fq12_add(y, y)),
    )
    lam = (fq6_scalar(lam[0], 3), fq6_scalar(lam[1], 3))
    x3 = fq12_sub(fq12_sqr(lam), fq12_add(x, x))
    y3 = fq12_sub(fq12_mul(lam, fq12_sub(x, x3)), y)
    line = fq12_add(fq12_mul(lam, fq12_sub(xp12, x)), fq12_sub(y, yp12))
    return (x3, y3), line


def _add_step(t, q, xp12, yp12):
    x1, y1 = t
    x2, y2 = q
    lam = fq12_mul(fq12_sub(y2, y1), fq12_inv(fq12_sub(x2, x1)))
    x3 = fq12_sub(fq12_sub(fq12_sqr(lam), x1), x2)
    y3 = fq12_sub(fq12_mul(lam, fq12_sub(x1, x3)), y1)
    line = fq12_add(fq12_mul(lam, fq12_sub(xp12, x2)), fq12_sub(y2, yp12))
    return (x3, y3), line


def miller_loop(p, q):
    """Miller function f_{|z|,Q'}(P) in Fq12, Q' the untwisted Q, conjugated
    at the end because the curve parameter is negative."""
    xp12 = fq12_from_int(p[0])
    yp12 = fq12_from_int(p[1])
    qu = _untwist(q)
    t = qu
    f = FQ12_ONE
    for bit in bin(BLS_X)[3:]:
        t, line = _dbl_step(t, xp12, yp12)
        f = fq12_mul(fq12_sqr(f), line)
        if bit == "1":
            t, line = _add_step(t, qu, xp12, yp12)
            f = fq12_mul(f, line)
    return fq12_conj(f)


def pairing(p, q):
    """e(P, Q) for P in G1, Q in G2, final exponentiation included."""
    if p is None or q is None:
        return FQ12_ONE
    return final_exponentiation(miller_loop(p, q))


# ---------------------------------------------------------------------------
# Canonical encodings: standard 48/96-byte compressed points (flag bits in
# the top three bits of the first byte), 576-byte Fq12.


def _fq_sign(a):
    return a > HALF_P


def g1_to_bytes(pt):
    if pt is None:
        return bytes([0xC0]) + bytes(47)
    x, y = pt
    flags = 0x80 | (0x20 if _fq_sign(y) else 0)
    data = bytearray(x.to_bytes(48, "big"))
    data[0] |= flags
    return bytes(data)


def g1_from_bytes(data):
    if len(data) != 48:
        raise ValueError("G1 encoding must be 48 bytes")
    flags = data[0]
    if not flags & 0x80:
        raise ValueError("uncompressed G1 encoding not supported")
    if flags & 0x40:
        if any(data[1:]) or flags & 0x3F:
            raise ValueError("malformed G1 infinity encoding")
        return None
    x = int.from_bytes(bytes([flags & 0x1F]) + data[1:], "big")
    if x >= P:
        raise ValueError("G1 x coordinate out of range")
    rhs = (x * x * x + B1) % P
    y = pow(rhs, (P + 1) // 4, P)
    if y * y % P != rhs:
        raise ValueError("G1 x coordinate not on curve")
    if _fq_sign(y) != bool(flags & 0x20):
        y = -y % P
    pt = (x, y)
    if not g1_in_subgroup(pt):
        raise ValueError("G1 point not in the prime-order subgroup")
    return pt


_FQ2_SQRT_Z = None


def _fq2_legendre_is_one(a):
    return fq2_pow(a, (P * P - 1) // 2) == FQ2_ONE


def fq2_sqrt(a):
    """Tonelli-Shanks over Fq2 (2-adicity of p^2-1 is 3); None if a is not
    a square."""
    global _FQ2_SQRT_Z
    if a == FQ2_ZERO:
        return FQ2_ZERO
    if not _fq2_legendre_is_one(a):
        return None
    if _FQ2_SQRT_Z is None:
        cand = (0, 1)
        while _fq2_legendre_is_one(cand):
            cand = (cand[0] + 1, cand[1])
        _FQ2_SQRT_Z = cand
    q = P * P - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = fq2_pow(_FQ2_SQRT_Z, q)
    x = fq2_pow(a, (q + 1) // 2)
    b = fq2_pow(a, q)
    while b != FQ2_ONE:
        m = 0
        t = b
        while t != FQ2_ONE:
            t = fq2_sqr(t)
            m += 1
        for _ in range(s - m - 1):
            z = fq2_sqr(z)
        x = fq2_mul(x, z)
        z = fq2_sqr(z)
        b = fq2_mul(b, z)
        s = m
    return x


def _fq2_sign(a):
    c0, c1 = a
    return _fq_sign(c1) if c1 else _fq_sign(c0)


def g2_to_bytes(pt):
    if pt is None:
        return bytes([0xC0]) + bytes(95)
    (x0, x1), y = pt
    flags = 0x80 | (0x20 if _fq2_sign(y) else 0)
    data = bytearray(x1.to_bytes(48, "big") + x0.to_bytes(48, "big"))
    data[0] |= flags
    return bytes(data)


def g2_from_bytes(data):
    if len(data) != 96:
        raise ValueError("G2 encoding must be 96 bytes")
    flags = data[0]
    if not flags & 0x80:
        raise ValueError("uncompressed G2 encoding not supported")
    if flags & 0x40:
        if any(data[1:]) or flags & 0x3F:
            raise ValueError("malformed G2 infinity encoding")
        return None
    x1 = int.from_bytes(bytes([flags & 0x1F]) + data[1:48], "big")
    x0 = int.from_bytes(data[48:], "big")
    if x0 >= P or x1 >= P:
        raise ValueError("G2 x coordinate out of range")
    x = (x0, x1)
    rhs = fq2_add(fq2_mul(fq2_sqr(x), x), B2)
    y = fq2_sqrt(rhs)
    if y is None:
        raise ValueError("G2 x coordinate not on curve")
    if _fq2_sign(y) != bool(flags & 0x20):
        y = fq2_neg(y)
    pt = (x, y)
    if not g2_in_subgroup(pt):
        raise ValueError("G2 point not in the prime-order subgroup")
    return pt


def fq12_to_bytes(f):
    out = bytearray()
    for half in f:
        for c in half:
            out += c[0].to_bytes(48, "big")
            out += c[1].to_bytes(48, "big")
    return bytes(out)


def fq12_from_bytes(data):
    if len(data) != 576:
        raise ValueError("Fq12 encoding must be 576 bytes")
    vals = []
    for i in range(12):
        v = int.from_bytes(data[48 * i : 48 * (i + 1)], "big")
        if v >= P:
            raise ValueError("Fq12 coefficient out of range")
        vals.append(v)
    return (
        ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])),
        ((vals[6], vals[7]), (vals[8], vals[9]), (vals[10], vals[11])),
    )


def gt_is_valid(f):
    """Membership test for pairing outputs: unitary and r-torsion."""
    if fq12_mul(f, fq12_conj(f)) != FQ12_ONE:
        return False
    return fq12_pow_cyclo(f, R) == FQ12_ONE
