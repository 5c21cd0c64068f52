"""Monotone access policies as linear secret sharing matrices.

A policy is a boolean formula over positive integer attributes with AND/OR
and parentheses ("1 AND (2 OR 3)"; AND binds tighter than OR).  It compiles
to a share-generating matrix M (one row per leaf, in left-to-right formula
order) and a row -> attribute map, by the usual inductive construction: the
root starts with vector (1) and counter c = 1; an OR node passes its vector
to both children; an AND node gives one child the vector padded to length c
with 1 appended, the other c zeros with -1 appended, and bumps c.  An
attribute set satisfies the policy iff the target vector (1, 0, ..., 0) lies
in the span of its rows, in which case the secret is recovered as a linear
combination of the row shares.

The matrix entries are backend-independent small integers; all linear
algebra takes the group order explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParameterError, PolicyParseError, UnsatisfiedPolicyError

_TOKEN = re.compile(r"\s*(\(|\)|\d+|[A-Za-z]+)")


@dataclass(frozen=True)
class AccessPolicy:
    """rows[i] is the sharing vector for attribute row_attrs[i]."""

    rows: tuple[tuple[int, ...], ...]
    row_attrs: tuple[int, ...]
    formula: str

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def attributes(self) -> frozenset[int]:
        return frozenset(self.row_attrs)


def _tokenize(formula: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(formula):
        m = _TOKEN.match(formula, pos)
        if not m:
            if formula[pos:].strip():
                raise PolicyParseError(f"unexpected character at {formula[pos:]!r}")
            break
        tok = m.group(1)
        if tok.isalpha():
            word = tok.upper()
            if word not in ("AND", "OR"):
                raise PolicyParseError(
                    f"unknown operator {tok!r}: only the monotone AND/OR are supported"
                )
            tok = word
        tokens.append(tok)
        pos = m.end()
    return tokens


class _Parser:
    # expr := term (OR term)* ; term := factor (AND factor)* ;
    # factor := INT | '(' expr ')'
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            raise PolicyParseError(f"trailing tokens at {self.peek()!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() == "OR":
            self.take()
            node = ("OR", node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek() == "AND":
            self.take()
            node = ("AND", node, self.factor())
        return node

    def factor(self):
        tok = self.take()
        if tok == "(":
            node = self.expr()
            if self.take() != ")":
                raise PolicyParseError("unbalanced parentheses")
            return node
        if tok is None:
            raise PolicyParseError("unexpected end of formula")
        if tok.isdigit():
            attr = int(tok)
            if attr < 1:
                raise PolicyParseError("attributes are positive integers")
            return ("ATTR", attr)
        raise PolicyParseError(f"expected an attribute or '(', got {tok!r}")


def parse_policy(formula: str) -> AccessPolicy:
    tokens = _tokenize(formula)
    if not tokens:
        raise PolicyParseError("empty formula")
    tree = _Parser(tokens).parse()

    rows: list[tuple[int, list[int]]] = []
    counter = 1

    def build(node, vec: list[int]) -> None:
        nonlocal counter
        kind = node[0]
        if kind == "ATTR":
            rows.append((node[1], vec))
        elif kind == "OR":
            build(node[1], vec)
            build(node[2], vec)
        else:  # AND
            padded = vec + [0] * (counter - len(vec))
            pos = counter  # the coordinate this gate introduces
            counter += 1
            build(node[1], padded + [1])
            build(node[2], [0] * pos + [-1])

    build(tree, [1])
    width = counter
    return AccessPolicy(
        rows=tuple(tuple(vec + [0] * (width - len(vec))) for _, vec in rows),
        row_attrs=tuple(attr for attr, _ in rows),
        formula=" ".join(tokens),
    )


def evaluate_formula(policy: AccessPolicy, attrs) -> bool:
    """Direct boolean evaluation of the stored formula; the oracle the
    matrix semantics must agree with."""
    tree = _Parser(_tokenize(policy.formula)).parse()
    have = set(attrs)

    def walk(node):
        if node[0] == "ATTR":
            return node[1] in have
        if node[0] == "OR":
            return walk(node[1]) or walk(node[2])
        return walk(node[1]) and walk(node[2])

    return walk(tree)


def _solve_target(policy: AccessPolicy, attrs, modulus: int):
    """Coefficients w (by row index) with sum_i w_i M_i = (1, 0, ..., 0) mod
    modulus, or None.  Deterministic: Gaussian elimination taking the lowest
    usable row index as each pivot, free rows fixed to 0."""
    have = set(attrs)
    usable = [i for i, attr in enumerate(policy.row_attrs) if attr in have]
    if not usable:
        return None
    width = policy.width
    # One equation per matrix column: sum_i w_i M[i][col] = target[col]
    aug = [[policy.rows[i][col] % modulus for i in usable] + [1 if col == 0 else 0] for col in range(width)]
    n_unknowns = len(usable)
    pivot_of_unknown: dict[int, int] = {}
    used_rows: set[int] = set()
    for unknown in range(n_unknowns):
        pivot_row = None
        for r in range(width):
            if r not in used_rows and aug[r][unknown] % modulus != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        used_rows.add(pivot_row)
        pivot_of_unknown[unknown] = pivot_row
        inv = pow(aug[pivot_row][unknown], -1, modulus)
        aug[pivot_row] = [v * inv % modulus for v in aug[pivot_row]]
        for r in range(width):
            if r != pivot_row and aug[r][unknown] % modulus != 0:
                factor = aug[r][unknown]
                aug[r] = [(v - factor * pv) % modulus for v, pv in zip(aug[r], aug[pivot_row])]
    # Inconsistent system -> not satisfiable with these rows
    for r in range(width):
        if r not in used_rows and aug[r][n_unknowns] % modulus != 0:
            return None
    w = {}
    for unknown, r in pivot_of_unknown.items():
        value = aug[r][n_unknowns]
        if value:
            w[usable[unknown]] = value
    return w


def satisfies(policy: AccessPolicy, attrs, modulus: int) -> bool:
    """True iff the rows labeled by attrs span the target vector."""
    return _solve_target(policy, attrs, modulus) is not None


def reconstruction_coefficients(policy: AccessPolicy, attrs, modulus: int) -> dict[int, int]:
    """Row-index -> coefficient map recombining shares to the secret;
    rows with coefficient 0 are omitted."""
    w = _solve_target(policy, attrs, modulus)
    if w is None:
        raise UnsatisfiedPolicyError(f"attributes {sorted(set(attrs))} do not satisfy {policy.formula!r}")
    return w


def share_secret(policy: AccessPolicy, secret, modulus: int, rng) -> list:
    """Shares M_i . u for a random vector u with u[0] = secret."""
    secret = int(secret) % modulus
    u = [secret] + [rng.randbelow(modulus) for _ in range(policy.width - 1)]
    return [sum(m * uj for m, uj in zip(row, u)) % modulus for row in policy.rows]


def check_attributes(attrs, attr_max: int) -> frozenset[int]:
    """Validate an attribute set against the universe size."""
    values = frozenset(int(a) for a in attrs)
    if not values:
        raise ParameterError("attribute set must be non-empty")
    for a in values:
        if not 1 <= a <= attr_max:
            raise ParameterError(f"attribute {a} outside [1, {attr_max}]")
    return values
