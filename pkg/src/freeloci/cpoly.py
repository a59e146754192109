"""Commutative multivariate polynomials over Q and symbolic determinants."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .linalg import DimensionError, format_rational, to_fraction

__all__ = ["CPoly", "SizeCapError", "det_cpoly", "det_generic", "generic_matrices", "cpoly_matmul", "DEFAULT_SIZE_CAP"]

DEFAULT_SIZE_CAP = 12


class SizeCapError(ValueError):
    pass


class CPoly:
    """Polynomial in named commuting variables; terms map exponent tuples to Fractions."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], object] | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean: dict = {}
        for e, a in (terms or {}).items():
            e = tuple(e)
            if len(e) != nv:
                raise DimensionError("exponent vector length does not match variable count")
            a = to_fraction(a)
            if a:
                clean[e] = clean.get(e, Fraction(0)) + a
        self._terms = {e: a for e, a in clean.items() if a}

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "CPoly":
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = terms
        return p

    @classmethod
    def const(cls, variables: Sequence[str], a) -> "CPoly":
        return cls(variables, {(0,) * len(variables): a})

    @classmethod
    def var(cls, variables: Sequence[str], i: int) -> "CPoly":
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "CPoly"):
        if self.variables != other.variables:
            raise DimensionError("polynomials use different variable sets")

    def _lift(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            self._check(other)
            return other
        return CPoly.const(self.variables, other)

    def __add__(self, other) -> "CPoly":
        other = self._lift(other)
        out = dict(self._terms)
        for e, a in other._terms.items():
            s = out.get(e, 0) + a
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return CPoly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "CPoly":
        return CPoly._raw(self.variables, {e: -a for e, a in self._terms.items()})

    def __sub__(self, other) -> "CPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "CPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "CPoly":
        other = self._lift(other)
        out: dict = {}
        for e1, a in self._terms.items():
            for e2, b in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + a * b
        return CPoly._raw(self.variables, {e: a for e, a in out.items() if a})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, CPoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == CPoly.const(self.variables, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    def evaluate(self, values: Sequence) -> Fraction:
        values = [to_fraction(v) for v in values]
        if len(values) != self.nvars:
            raise DimensionError("wrong number of values")
        total = Fraction(0)
        for e, a in self._terms.items():
            t = a
            for v, k in zip(values, e):
                if k:
                    t *= v**k
            total += t
        return total

    def sorted_terms(self) -> list:
        # graded, then reverse-lex on exponents so x before y
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, a) in enumerate(self.sorted_terms()):
            mono = "*".join(
                self.variables[v] + (f"^{k}" if k > 1 else "") for v, k in enumerate(e) if k
            )
            mag = abs(a)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            sign = ("-" if a < 0 else "") if i == 0 else ("- " if a < 0 else "+ ")
            parts.append(sign + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"CPoly({str(self)!r})"

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "degree": self.degree(),
            "n_terms": len(self._terms),
            "terms": [
                [{self.variables[v]: k for v, k in enumerate(e) if k}, format_rational(a)]
                for e, a in self.sorted_terms()
            ],
            "text": str(self),
        }


def cpoly_matmul(P: Sequence[Sequence[CPoly]], Q: Sequence[Sequence[CPoly]]) -> list[list[CPoly]]:
    if not P or len(P[0]) != len(Q):
        raise DimensionError("inner dimensions differ")
    out = []
    for i in range(len(P)):
        row = []
        for j in range(len(Q[0])):
            s = P[i][0] * Q[0][j]
            for k in range(1, len(Q)):
                s = s + P[i][k] * Q[k][j]
            row.append(s)
        out.append(row)
    return out


def det_cpoly(M: Sequence[Sequence[CPoly]]) -> CPoly:
    """Exact determinant of a square matrix of CPoly entries.

    Division-free expansion over column subsets (a memoized Laplace
    expansion). Monomials are packed into integers and coefficients are
    kept integral after clearing row denominators.
    """
    n = len(M)
    for r in M:
        if len(r) != n:
            raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        raise DimensionError("empty matrix has no variable set")
    variables = M[0][0].variables
    nv = len(variables)
    for r in M:
        for p in r:
            if p.variables != variables:
                raise DimensionError("entries use different variable sets")

    # bound any single exponent by the total degree of the product of row maxima
    bound = sum(max((p.degree() for p in r), default=0) for r in M)
    bits = max(bound, 1).bit_length() + 1
    mask = (1 << bits) - 1

    def pack(e):
        k = 0
        for i, x in enumerate(e):
            k |= x << (bits * i)
        return k

    scale = Fraction(1)
    rows = []
    for r in M:
        den = 1
        for p in r:
            for a in p._terms.values():
                den = lcm(den, a.denominator)
        scale *= den
        rows.append(
            [
                (c, [(pack(e), int(a * den)) for e, a in p._terms.items()])
                for c, p in enumerate(r)
                if p._terms
            ]
        )

    state: dict[int, dict[int, int]] = {0: {0: 1}}
    for r in rows:
        new: dict[int, dict[int, int]] = {}
        for used, poly in state.items():
            for c, entry in r:
                bit = 1 << c
                if used & bit:
                    continue
                neg = bin(used >> (c + 1)).count("1") & 1
                tgt = new.setdefault(used | bit, {})
                for m1, a in poly.items():
                    for m2, b in entry:
                        m = m1 + m2
                        v = tgt.get(m, 0) + (-a * b if neg else a * b)
                        if v:
                            tgt[m] = v
                        else:
                            del tgt[m]
        state = {k: v for k, v in new.items() if v}
        if not state:
            break
    final = state.get((1 << n) - 1, {})
    terms = {}
    for m, a in final.items():
        e = tuple((m >> (bits * i)) & mask for i in range(nv))
        terms[e] = Fraction(a) / scale
    return CPoly._raw(variables, terms)


def generic_variables(g: int, n: int) -> tuple:
    return tuple(f"xi_{j}_{i}_{k}" for j in range(1, g + 1) for i in range(1, n + 1) for k in range(1, n + 1))


def generic_matrices(g: int, n: int) -> list[list[list[CPoly]]]:
    """The g generic n x n matrices whose (i,k) entry is the variable xi_{j,i,k}."""
    names = generic_variables(g, n)
    out = []
    for j in range(g):
        out.append([[CPoly.var(names, j * n * n + i * n + k) for k in range(n)] for i in range(n)])
    return out


def det_generic(L, n: int, cap: int = DEFAULT_SIZE_CAP) -> CPoly:
    """det L(X) at g-tuples of generic n x n matrices.

    L is a MonicPencil; an NCPoly with constant term 1 is first linearized."""
    from .pencil import MonicPencil

    if n < 1:
        raise ValueError("n must be at least 1")
    if not isinstance(L, MonicPencil):
        from .realization import higman_linearize

        L = higman_linearize(L)[0]
    d, g = L.d, L.g
    if d * n > cap:
        raise SizeCapError(f"symbolic determinant of size {d * n} exceeds the cap {cap}")
    names = generic_variables(g, n)
    nv = len(names)
    rows = []
    for a in range(d):
        for p in range(n):
            row = []
            for b in range(d):
                for q in range(n):
                    t: dict = {}
                    if a == b and p == q:
                        t[(0,) * nv] = Fraction(1)
                    for j, A in enumerate(L.coeffs):
                        x = A[a, b]
                        if x:
                            e = [0] * nv
                            e[j * n * n + p * n + q] = 1
                            t[tuple(e)] = -x
                    row.append(CPoly._raw(names, t))
            rows.append(row)
    return det_cpoly(rows)
