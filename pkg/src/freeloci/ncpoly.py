"""Noncommutative polynomials over Q.

A polynomial is a map from words (tuples of 1-based letter indices) to
nonzero Fractions. Terms are kept in degree-lexicographic order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import DimensionError, QMatrix, format_rational, to_fraction

Word = tuple

__all__ = ["NCPoly", "ParseError", "eval_nc", "word_key", "nc_matmul"]


class ParseError(ValueError):
    pass


def word_key(w: Word):
    return (len(w), w)


class NCPoly:
    __slots__ = ("g", "_terms", "_hash")

    def __init__(self, g: int, terms: Mapping[Sequence[int], object] | None = None):
        if g < 0:
            raise ValueError("variable count must be nonnegative")
        clean = {}
        for w, a in (terms or {}).items():
            w = tuple(w)
            for j in w:
                if not 1 <= j <= g:
                    raise DimensionError(f"letter x{j} outside 1..{g}")
            a = to_fraction(a)
            if a:
                clean[w] = clean.get(w, Fraction(0)) + a
                if not clean[w]:
                    del clean[w]
        self.g = g
        self._terms = dict(sorted(clean.items(), key=lambda t: word_key(t[0])))
        self._hash = None

    @classmethod
    def _raw(cls, g: int, terms: dict) -> "NCPoly":
        p = cls.__new__(cls)
        p.g = g
        p._terms = dict(sorted(((w, a) for w, a in terms.items() if a), key=lambda t: word_key(t[0])))
        p._hash = None
        return p

    @classmethod
    def zero(cls, g: int) -> "NCPoly":
        return cls._raw(g, {})

    @classmethod
    def const(cls, a, g: int) -> "NCPoly":
        return cls._raw(g, {(): to_fraction(a)})

    @classmethod
    def one(cls, g: int) -> "NCPoly":
        return cls.const(1, g)

    @classmethod
    def var(cls, j: int, g: int) -> "NCPoly":
        if not 1 <= j <= g:
            raise DimensionError(f"letter x{j} outside 1..{g}")
        return cls._raw(g, {(j,): Fraction(1)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, w: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(w), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((len(w) for w in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def support_vars(self) -> frozenset:
        return frozenset(j for w in self._terms for j in w)

    def with_g(self, g: int) -> "NCPoly":
        """Same polynomial viewed in g variables (g at least the largest letter used)."""
        return NCPoly(g, self._terms)

    def _coerce(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.g != self.g:
                raise DimensionError(f"variable count mismatch {self.g} vs {other.g}")
            return other
        return NCPoly.const(other, self.g)

    def __add__(self, other) -> "NCPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for w, a in other._terms.items():
            out[w] = out.get(w, Fraction(0)) + a
        return NCPoly._raw(self.g, out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw(self.g, {w: -a for w, a in self._terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NCPoly":
        return self._coerce(other) - self

    def scalar_mul(self, s) -> "NCPoly":
        s = to_fraction(s)
        return NCPoly._raw(self.g, {w: a * s for w, a in self._terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scalar_mul(other)
        other = self._coerce(other)
        out: dict = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                w = u + v
                out[w] = out.get(w, Fraction(0)) + a * b
        return NCPoly._raw(self.g, out)

    def __rmul__(self, other) -> "NCPoly":
        return self.scalar_mul(other)

    def __pow__(self, k: int) -> "NCPoly":
        out = NCPoly.one(self.g)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPoly):
            return self.g == other.g and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.g, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"NCPoly({str(self)!r}, g={self.g})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (w, a) in enumerate(self._terms.items()):
            mono = _format_word(w)
            mag = abs(a)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if i == 0:
                parts.append(("-" if a < 0 else "") + body)
            else:
                parts.append(("- " if a < 0 else "+ ") + body)
        return " ".join(parts)

    def __call__(self, X: Sequence[QMatrix]) -> QMatrix:
        return eval_nc(self, X)

    @classmethod
    def parse(cls, text: str, g: int | None = None) -> "NCPoly":
        terms = _parse(text)
        used = max((j for w in terms for j in w), default=0)
        if g is None:
            g = max(used, 1)
        elif used > g:
            raise ParseError(f"letter x{used} exceeds declared variable count {g}")
        return cls(g, terms)


def _format_word(w: Word) -> str:
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = j - i
        out.append(f"x{w[i]}" + (f"^{k}" if k > 1 else ""))
        i = j
    return "*".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|x(\d+)|([-+*^]))")


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1) is not None:
            yield ("num", m.group(1))
        elif m.group(2) is not None:
            yield ("var", int(m.group(2)))
        else:
            yield ("op", m.group(3))


def _parse(text: str) -> dict:
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty polynomial")
    terms: dict = {}
    i = 0
    n = len(toks)
    first = True
    while i < n:
        sign = 1
        if toks[i] == ("op", "+") or toks[i] == ("op", "-"):
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms")
        first = False
        coef = Fraction(sign)
        word: tuple = ()
        expect_factor = True
        while i < n and expect_factor:
            kind, val = toks[i]
            if kind == "num":
                q = Fraction(val)
                if q.denominator == 0:
                    raise ParseError("zero denominator")
                coef *= q
                i += 1
            elif kind == "var":
                if val < 1:
                    raise ParseError("variables are numbered from x1")
                i += 1
                k = 1
                if i < n and toks[i] == ("op", "^"):
                    if i + 1 >= n or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise ParseError("exponent must be a nonnegative integer")
                    k = int(toks[i + 1][1])
                    i += 2
                word += (val,) * k
            else:
                raise ParseError(f"unexpected operator {val!r}")
            if i < n and toks[i] == ("op", "*"):
                i += 1
                if i >= n:
                    raise ParseError("dangling '*'")
            else:
                expect_factor = False
        if expect_factor:
            raise ParseError("missing term after sign")
        terms[word] = terms.get(word, Fraction(0)) + coef
    return {w: a for w, a in terms.items() if a}


def eval_nc(f: NCPoly, X: Sequence[QMatrix]) -> QMatrix:
    """Substitute the matrices X_j for the letters x_j."""
    X = list(X)
    if len(X) != f.g:
        raise DimensionError(f"expected {f.g} matrices, got {len(X)}")
    if not X:
        raise DimensionError("cannot infer evaluation size without matrices")
    n = X[0].rows
    for M in X:
        if M.shape != (n, n):
            raise DimensionError("evaluation matrices must be square of equal size")
    cache = {(): QMatrix.identity(n)}

    def prod(w):
        if w not in cache:
            cache[w] = prod(w[:-1]) @ X[w[-1] - 1]
        return cache[w]

    out = QMatrix.zeros(n, n)
    for w, a in f.items():
        out = out + prod(w).scale(a)
    return out


def nc_matmul(P: Sequence[Sequence[NCPoly]], Q: Sequence[Sequence[NCPoly]]) -> list[list[NCPoly]]:
    """Product of matrices with NCPoly entries."""
    if not P or len(P[0]) != len(Q):
        raise DimensionError("inner dimensions differ")
    g = P[0][0].g
    return [
        [sum((P[i][k] * Q[k][j] for k in range(len(Q))), NCPoly.zero(g)) for j in range(len(Q[0]))]
        for i in range(len(P))
    ]
