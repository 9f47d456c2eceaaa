"""Sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero rational
coefficients, tagged with the tuple of variable names of its ring.
Values are immutable once built.
"""

from __future__ import annotations

import itertools
import random
import re
from functools import lru_cache
from math import comb

from .errors import ParseError
from .rational import ONE, QQ, ZERO, format_rational, to_rational

__all__ = [
    "MonomialOrder",
    "DEGREVLEX",
    "NEGDEGREVLEX",
    "NEGDEGLEX",
    "LEX",
    "elimination_order",
    "Poly",
    "parse_poly",
    "print_poly",
    "derivative",
    "jacobian_matrix",
    "PolyMatrix",
    "ConstMatrix",
    "minors_of_size",
    "random_matrix",
]


# ---------------------------------------------------------------------------
# monomial orders


def _degrevlex_key(e):
    return (sum(e),) + tuple(-a for a in reversed(e))


def _negdegrevlex_key(e):
    return (-sum(e),) + tuple(-a for a in reversed(e))


def _negdeglex_key(e):
    return (-sum(e),) + tuple(e)


def _lex_key(e):
    return tuple(e)


class MonomialOrder:
    """A monomial order, exposed through ``key``: larger key, larger monomial.

    ``kind`` is one of ``degrevlex``, ``lex`` (global), ``negdegrevlex``,
    ``negdeglex`` (local: 1 > x_i) or ``elim`` (degrevlex on the first
    ``block`` variables, ties broken by degrevlex on the rest).
    """

    __slots__ = ("kind", "block", "key")

    def __init__(self, kind: str, block: int = 0):
        self.kind = kind
        self.block = block
        if kind == "degrevlex":
            self.key = _degrevlex_key
        elif kind == "negdegrevlex":
            self.key = _negdegrevlex_key
        elif kind == "negdeglex":
            self.key = _negdeglex_key
        elif kind == "lex":
            self.key = _lex_key
        elif kind == "elim":
            if block < 1:
                raise ValueError("elimination block must contain at least one variable")
            k = block

            def key(e):
                head, tail = e[:k], e[k:]
                return (
                    (sum(head),)
                    + tuple(-a for a in reversed(head))
                    + (sum(tail),)
                    + tuple(-a for a in reversed(tail))
                )

            self.key = key
        else:
            raise ValueError(f"unknown monomial order {kind!r}")

    @property
    def is_local(self) -> bool:
        return self.kind in ("negdegrevlex", "negdeglex")

    @property
    def is_global(self) -> bool:
        return not self.is_local

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.block) == (
            other.kind,
            other.block,
        )

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "elim":
            return f"MonomialOrder('elim', block={self.block})"
        return f"MonomialOrder({self.kind!r})"


DEGREVLEX = MonomialOrder("degrevlex")
NEGDEGREVLEX = MonomialOrder("negdegrevlex")
NEGDEGLEX = MonomialOrder("negdeglex")
LEX = MonomialOrder("lex")


def elimination_order(k: int) -> MonomialOrder:
    """Block order eliminating the first ``k`` ring variables."""
    return MonomialOrder("elim", k)


# ---------------------------------------------------------------------------
# polynomials


def _add_into(acc, terms, scale=ONE):
    for m, c in terms.items():
        v = acc.get(m, ZERO) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to ``QQ``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms=None):
        self.ring = tuple(ring)
        clean = {}
        if terms:
            n = len(self.ring)
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"exponent {m} does not match ring {self.ring}")
                if c:
                    clean[tuple(m)] = c if isinstance(c, QQ) else to_rational(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, ring, value) -> Poly:
        ring = tuple(ring)
        c = to_rational(value)
        return cls._raw(ring, {(0,) * len(ring): c} if c else {})

    @classmethod
    def var(cls, ring, name: str) -> Poly:
        ring = tuple(ring)
        if name not in ring:
            raise ValueError(f"unknown variable {name!r}")
        e = tuple(int(v == name) for v in ring)
        return cls._raw(ring, {e: ONE})

    @classmethod
    def monomial(cls, ring, exp, coeff=1) -> Poly:
        return cls(ring, {tuple(exp): to_rational(coeff)})

    # -- basic queries

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def order_at_origin(self) -> int:
        """Smallest total degree of a term; -1 for the zero polynomial."""
        return min((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, ZERO)

    def variables(self) -> set[str]:
        used = set()
        for m in self.terms:
            used.update(v for v, a in zip(self.ring, m) if a)
        return used

    def leading_term(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder):
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder) -> Poly:
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self * (ONE / c)

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return Poly.constant(self.ring, other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return Poly._raw(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms, -ONE)
        return Poly._raw(self.ring, acc)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_rational(other)
            if not c:
                return Poly._raw(self.ring, {})
            return Poly._raw(self.ring, {m: c * a for m, a in self.terms.items()})
        other = self._coerce(other)
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = acc.get(m, ZERO) + c1 * c2
                if v:
                    acc[m] = v
                else:
                    del acc[m]
        return Poly._raw(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exp, coeff) -> Poly:
        return Poly._raw(
            self.ring,
            {tuple(a + b for a, b in zip(m, exp)): c * coeff for m, c in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, QQ)):
            return self == Poly.constant(self.ring, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- substitution and ring changes

    def derivative(self, var: str) -> Poly:
        i = self.ring.index(var)
        acc = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                acc[tuple(e)] = c * m[i]
        return Poly._raw(self.ring, acc)

    def specialize(self, var: str, value) -> Poly:
        """Substitute a rational for ``var`` and drop it from the ring."""
        i = self.ring.index(var)
        value = to_rational(value)
        ring = self.ring[:i] + self.ring[i + 1 :]
        acc = {}
        for m, c in self.terms.items():
            e = m[:i] + m[i + 1 :]
            v = acc.get(e, ZERO) + c * value ** m[i]
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return Poly._raw(ring, acc)

    def embed(self, ring) -> Poly:
        """Same polynomial viewed in a ring containing all of its used variables."""
        ring = tuple(ring)
        if ring == self.ring:
            return self
        pos = {v: j for j, v in enumerate(ring)}
        n = len(ring)
        acc = {}
        for m, c in self.terms.items():
            e = [0] * n
            for v, a in zip(self.ring, m):
                if a:
                    if v not in pos:
                        raise ValueError(f"variable {v!r} missing from target ring {ring}")
                    e[pos[v]] = a
            acc[tuple(e)] = c
        return Poly._raw(ring, acc)

    def compose(self, images: dict, ring) -> Poly:
        """Substitute ``images[v]`` (a Poly over ``ring``) for each variable ``v``."""
        ring = tuple(ring)
        powers = {}
        result = Poly._raw(ring, {})
        for m, c in self.terms.items():
            term = Poly.constant(ring, c)
            for v, a in zip(self.ring, m):
                if a:
                    key = (v, a)
                    if key not in powers:
                        img = images[v] if v in images else Poly.var(ring, v)
                        powers[key] = img**a
                    term = term * powers[key]
            result = result + term
        return result

    def __call__(self, point) -> QQ:
        """Evaluate at a point given as a sequence of rationals."""
        point = [to_rational(x) for x in point]
        total = ZERO
        for m, c in self.terms.items():
            t = c
            for x, a in zip(point, m):
                if a:
                    t *= x**a
            total += t
        return total

    # -- text

    def __str__(self):
        return print_poly(self)

    def __repr__(self):
        return f"Poly({print_poly(self)!r}, ring={self.ring})"


# ---------------------------------------------------------------------------
# text form


def _format_monomial(ring, m):
    parts = []
    for v, a in zip(ring, m):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def print_poly(p: Poly) -> str:
    """Canonical text: terms in descending degrevlex order, e.g. ``x^2*y - 2*z^2``."""
    if not p.terms:
        return "0"
    out = []
    for m in sorted(p.terms, key=_degrevlex_key, reverse=True):
        c = p.terms[m]
        mono = _format_monomial(p.ring, m)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at column {pos + 1}")
        num, name, op = mt.groups()
        if num is not None:
            if "/" in num and int(num.split("/")[1]) == 0:
                raise ParseError("zero denominator")
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        elif op is not None:
            tokens.append(("op", "^" if op == "**" else op))
        pos = mt.end()
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if (kind, val) == ("op", "-"):
                raise ParseError("negative exponent")
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly.constant(self.ring, to_rational(val))
        if kind == "name":
            if val not in self.ring:
                raise ParseError(f"unknown variable {val!r}")
            return Poly.var(self.ring, val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing closing parenthesis")
            return p
        if kind is None:
            raise ParseError("unexpected end of input")
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, vars) -> Poly:
    """Parse ``text`` over the variables ``vars``.

    Grammar: integers and ``a/b`` rationals, variable names, ``+ - * ^``
    (``**`` accepted as ``^``) and parentheses.
    """
    return _Parser(text, tuple(vars)).parse()


def derivative(p: Poly, var: str) -> Poly:
    return p.derivative(var)


# ---------------------------------------------------------------------------
# matrices


class PolyMatrix:
    """Rectangular matrix of polynomials over a common ring."""

    __slots__ = ("ring", "entries")

    def __init__(self, entries, ring=None):
        rows = tuple(tuple(r) for r in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix rows have different lengths")
        self.ring = tuple(ring) if ring is not None else rows[0][0].ring
        self.entries = rows

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(zip(*self.entries), self.ring)

    def submatrix(self, rows, cols) -> PolyMatrix:
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows], self.ring)

    def det(self) -> Poly:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _laplace_det(self.entries, self.ring)

    def minors(self, k: int) -> list[Poly]:
        return minors_of_size(self, k)

    def left_mul(self, a: ConstMatrix) -> PolyMatrix:
        """``a @ self`` for a constant matrix ``a``."""
        if a.cols != self.rows:
            raise ValueError("shape mismatch")
        zero = Poly.constant(self.ring, 0)
        out = []
        for arow in a.entries:
            row = []
            for j in range(self.cols):
                acc = zero
                for c, i in zip(arow, range(self.rows)):
                    if c:
                        acc = acc + self.entries[i][j] * c
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.ring)

    def right_mul(self, b: ConstMatrix) -> PolyMatrix:
        """``self @ b`` for a constant matrix ``b``."""
        return self.transpose().left_mul(b.transpose()).transpose()

    def __str__(self):
        return "\n".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries)

    def __repr__(self):
        return f"PolyMatrix({[[str(e) for e in r] for r in self.entries]})"


def _laplace_det(entries, ring):
    k = len(entries)

    @lru_cache(maxsize=None)
    def det(cols):
        # expand along row k - len(cols)
        r = k - len(cols)
        if not cols:
            return Poly.constant(ring, 1)
        total = Poly.constant(ring, 0)
        for pos, j in enumerate(cols):
            e = entries[r][j]
            if not e:
                continue
            sub = det(cols[:pos] + cols[pos + 1 :])
            term = e * sub
            total = total - term if pos % 2 else total + term
        return total

    return det(tuple(range(k)))


def minors_of_size(M: PolyMatrix, k: int) -> list[Poly]:
    """All k x k minors; row subsets outer, column subsets inner, both lexicographic."""
    if not 1 <= k <= min(M.rows, M.cols):
        raise ValueError(f"minor size {k} out of range for a {M.rows}x{M.cols} matrix")
    out = []
    for rs in itertools.combinations(range(M.rows), k):
        for cs in itertools.combinations(range(M.cols), k):
            out.append(_laplace_det([[M.entries[i][j] for j in cs] for i in rs], M.ring))
    assert len(out) == comb(M.rows, k) * comb(M.cols, k)
    return out


def jacobian_matrix(equations, vars) -> PolyMatrix:
    """p x n matrix of partial derivatives with respect to ``vars`` only."""
    equations = list(equations)
    if not equations:
        raise ValueError("empty equation list")
    return PolyMatrix([[f.derivative(v) for v in vars] for f in equations], equations[0].ring)


class ConstMatrix:
    """Rectangular matrix of rationals."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(to_rational(x) for x in r) for r in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix rows have different lengths")
        self.entries = rows

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def transpose(self) -> ConstMatrix:
        return ConstMatrix(zip(*self.entries))

    def apply(self, polys) -> list[Poly]:
        """The column vector ``self @ polys``."""
        polys = list(polys)
        if len(polys) != self.cols:
            raise ValueError("shape mismatch")
        ring = polys[0].ring
        out = []
        for row in self.entries:
            acc = Poly.constant(ring, 0)
            for c, f in zip(row, polys):
                if c:
                    acc = acc + f * c
            out.append(acc)
        return out

    def rank(self) -> int:
        rows = [list(r) for r in self.entries]
        rank = 0
        for j in range(self.cols):
            piv = next((i for i in range(rank, len(rows)) if rows[i][j]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            p = rows[rank]
            for i in range(rank + 1, len(rows)):
                if rows[i][j]:
                    f = rows[i][j] / p[j]
                    rows[i] = [a - f * b for a, b in zip(rows[i], p)]
            rank += 1
        return rank

    def tolist(self) -> list[list[str]]:
        return [[format_rational(c) for c in r] for r in self.entries]

    def __eq__(self, other):
        return isinstance(other, ConstMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ConstMatrix({self.tolist()})"


def random_matrix(rows: int, cols: int, seed: int, bound: int = 7) -> ConstMatrix:
    """Entries uniform over the nonzero integers in [-bound, bound].

    Deterministic in (seed, rows, cols, bound).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rng = random.Random(f"curvesing:{seed}:{rows}x{cols}:{bound}")
    choices = [v for v in range(-bound, bound + 1) if v]
    return ConstMatrix([[rng.choice(choices) for _ in range(cols)] for _ in range(rows)])
