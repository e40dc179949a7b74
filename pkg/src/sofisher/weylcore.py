"""Weyl algebra arithmetic in normal order.

An operator over positions ``v_1..v_m`` is stored as a dict mapping the
concatenated exponent vector ``(alpha, beta)`` (length ``2m``) to a rational
coefficient, meaning ``sum c * v^alpha * d^beta`` with every position factor
to the left of every derivation factor.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .polycore import (
    Polynomial,
    TableMismatchError,
    Variable,
    _add_into,
    _frac,
    canonical_sort,
    format_terms,
    parse_expression,
    terms_to_json,
)


class UndefinedSymbolError(ValueError):
    """The principal symbol of the zero operator is undefined."""


@lru_cache(maxsize=None)
def _ordering_coefficients(b, c):
    """Expansion of ``d^b * v^c`` (one variable) as ``[(k, coeff)]``.

    ``d^b v^c = sum_k C(b,k) C(c,k) k! v^(c-k) d^(b-k)``.
    """
    return tuple((k, comb(b, k) * comb(c, k) * factorial(k)) for k in range(min(b, c) + 1))


def _mono_mul(m, a, b):
    """Normal-ordered product of monomials ``a`` and ``b`` (length 2m exps)."""
    alpha, beta = a[:m], a[m:]
    gamma, delta = b[:m], b[m:]
    per_var = []
    for i in range(m):
        if beta[i] and gamma[i]:
            per_var.append(_ordering_coefficients(beta[i], gamma[i]))
        else:
            per_var.append(((0, 1),))
    out = {}
    for choice in itertools.product(*per_var):
        coeff = 1
        pos = []
        der = []
        for i, (k, c) in enumerate(choice):
            coeff *= c
            pos.append(alpha[i] + gamma[i] - k)
            der.append(beta[i] + delta[i] - k)
        key = tuple(pos) + tuple(der)
        out[key] = out.get(key, 0) + coeff
    return out


def _mul_terms(m, a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            for key, k in _mono_mul(m, ma, mb).items():
                v = out.get(key, 0) + ca * cb * k
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


class _WeylRing:
    product_criterion = False

    def __init__(self, m):
        self.m = m

    def mono_mul(self, mono, coeff, terms):
        out = {}
        m = self.m
        for t, c in terms.items():
            for key, k in _mono_mul(m, mono, t).items():
                v = out.get(key, 0) + coeff * c * k
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out


class WeylOperator:
    """Element of the Weyl algebra over the position variables ``positions``.

    >>> x = WeylOperator.variable((Variable("x", (1,)),), Variable("x", (1,)))
    >>> d = WeylOperator.variable(x.positions, Variable("dx", (1,)))
    >>> str(d * x)
    'x[1]*dx[1] + 1'
    """

    __slots__ = ("positions", "terms", "_hash")

    def __init__(self, positions, terms=None):
        self.positions = tuple(positions)
        for v in self.positions:
            if v.is_derivation or v.family == "xi":
                raise ValueError(f"{v} cannot be a position variable")
        n = 2 * len(self.positions)
        clean = {}
        for k, c in (terms or {}).items():
            k = tuple(k)
            if len(k) != n:
                raise ValueError("exponent vector length must be twice the position count")
            c = _frac(c)
            if c:
                clean[k] = clean.get(k, 0) + c
        self.terms = {k: c for k, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, positions, terms):
        op = cls.__new__(cls)
        op.positions = positions
        op.terms = terms
        op._hash = None
        return op

    # -- constructors -----------------------------------------------------
    @property
    def m(self):
        return len(self.positions)

    @property
    def table(self):
        """Full commutative table: positions followed by their derivations."""
        return self.positions + tuple(v.derivation() for v in self.positions)

    @classmethod
    def constant(cls, positions, c):
        positions = tuple(positions)
        return cls(positions, {(0,) * (2 * len(positions)): c})

    @classmethod
    def variable(cls, positions, v):
        """Generator ``v``: a position or the derivation of one."""
        positions = tuple(positions)
        m = len(positions)
        e = [0] * (2 * m)
        if v.is_derivation:
            e[m + positions.index(v.position())] = 1
        else:
            e[positions.index(v)] = 1
        return cls(positions, {tuple(e): 1})

    @classmethod
    def generators(cls, positions):
        """Return ``(positions, derivations)`` as lists of operators."""
        positions = tuple(positions)
        return (
            [cls.variable(positions, v) for v in positions],
            [cls.variable(positions, v.derivation()) for v in positions],
        )

    @classmethod
    def from_polynomial(cls, p, positions=None):
        """Multiplication operator by a polynomial in the position variables."""
        positions = tuple(positions) if positions is not None else p.table
        z = (0,) * len(positions)
        q = p.embed(positions)
        return cls._raw(positions, {k + z: c for k, c in q.terms.items()})

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if self.positions is not other.positions and self.positions != other.positions:
            raise TableMismatchError("operators live over different variable tables")

    def _coerce(self, other):
        if isinstance(other, WeylOperator):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return WeylOperator.constant(self.positions, other)
        if isinstance(other, Polynomial):
            return WeylOperator.from_polynomial(other, self.positions)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return WeylOperator._raw(self.positions, _add_into(dict(self.terms), other.terms))

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return WeylOperator._raw(self.positions, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return WeylOperator._raw(self.positions, _add_into(dict(self.terms), other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return WeylOperator._raw(self.positions, {})
            return WeylOperator._raw(self.positions, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return weyl_mul(other, self)

    def __pow__(self, k):
        out = WeylOperator.constant(self.positions, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOperator.constant(self.positions, other)
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.positions == other.positions and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.positions, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def commutator(self, other):
        return self * other - other * self

    # -- inspection -------------------------------------------------------
    def order(self):
        """Highest total derivation degree (-1 for the zero operator)."""
        m = self.m
        return max((sum(k[m:]) for k in self.terms), default=-1)

    def as_polynomial(self):
        """The normal-ordered terms read as a commutative polynomial."""
        return Polynomial._raw(self.table, dict(self.terms))

    def __str__(self):
        return format_terms(self.table, self.terms)

    def __repr__(self):
        return f"WeylOperator({self})"

    def to_json(self):
        return terms_to_json(self.table, self.terms)

    @classmethod
    def parse(cls, text, positions=None):
        """Parse the shared grammar; factors are multiplied left to right."""
        items = parse_expression(text)
        if positions is None:
            names = []
            for _, factors in items:
                for v, _ in factors:
                    names.append(v.position() if v.is_derivation else v)
            positions = canonical_sort(names)
        positions = tuple(positions)
        out = cls(positions)
        for c, factors in items:
            term = cls.constant(positions, c)
            for v, a in factors:
                key = v.position() if v.is_derivation else v
                if key not in positions:
                    raise TableMismatchError(f"{v} is not in the table")
                g = cls.variable(positions, v)
                for _ in range(a):
                    term = weyl_mul(term, g)
            out = out + term
        return out

    @classmethod
    def from_json(cls, data, positions=None):
        p = Polynomial.from_json(data)
        text = str(p) if not p.is_zero() else "0"
        return cls.parse(text, positions)


def weyl_mul(P, Q):
    """Normal-ordered product ``P * Q``."""
    P._check(Q)
    return WeylOperator._raw(P.positions, _mul_terms(P.m, P.terms, Q.terms))


def symbol_table(positions):
    """Table ``(positions..., xi...)`` hosting principal symbols."""
    positions = tuple(positions)
    syms = tuple(v.symbol() for v in positions)
    if len(set(syms)) != len(syms) or set(syms) & set(positions):
        raise ValueError("symbol variables collide; use a table with one family")
    return positions + syms


def symbol_01(P):
    """Principal symbol: top-order part with derivations replaced by ``xi``."""
    if P.is_zero():
        raise UndefinedSymbolError("the zero operator has no principal symbol")
    top = P.order()
    m = P.m
    table = symbol_table(P.positions)
    return Polynomial._raw(table, {k: c for k, c in P.terms.items() if sum(k[m:]) == top})


def _swap_image(P, pos_sign, der_sign):
    """Image under ``v_i -> pos_sign * d_i``, ``d_i -> der_sign * v_i``.

    Each term ``v^a d^b`` maps to ``(pos_sign)^|a| (der_sign)^|b| d^a v^b``,
    which is then normal ordered.
    """
    m = P.m
    out = {}
    for k, c in P.terms.items():
        a, b = k[:m], k[m:]
        sign = pos_sign ** sum(a) * der_sign ** sum(b)
        # d^a * v^b in normal order
        prod = _mono_mul(m, (0,) * m + tuple(a), tuple(b) + (0,) * m)
        _add_into(out, prod, sign * c)
    return WeylOperator._raw(P.positions, out)


def fourier(P):
    """Algebra automorphism ``v_i -> -d_i``, ``d_i -> v_i``."""
    return _swap_image(P, -1, 1)


def fourier_inv(P):
    """Inverse automorphism ``v_i -> d_i``, ``d_i -> -v_i``."""
    return _swap_image(P, 1, -1)


def twist(P, f):
    """Conjugate by ``exp(f)``: each ``d_i`` becomes ``d_i - df/dv_i``.

    ``f`` is a polynomial in (a subset of) the position variables.
    """
    positions = P.positions
    m = P.m
    f = f.embed(positions)
    shifted = []
    for i, v in enumerate(positions):
        d = WeylOperator.variable(positions, v.derivation())
        grad = f.diff(v)
        shifted.append(d - WeylOperator.from_polynomial(grad, positions) if grad else d)
    powers = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = shifted[i] ** e
        return powers[(i, e)]

    out = WeylOperator(positions)
    for k, c in P.terms.items():
        term = WeylOperator._raw(positions, {k[:m] + (0,) * m: c})
        for i, e in enumerate(k[m:]):
            if e:
                term = weyl_mul(term, power(i, e))
        out = out + term
    return out


class ExpPolyFunction:
    """Smooth function ``prefactor * exp(exponent)`` of the position variables.

    Both parts are polynomials over the same table.  ``exponent`` is usually a
    linear form in the active variables with polynomial coefficients in the
    remaining (parameter) variables, e.g. ``x[1]*y[1,1] + x[2]*y[2,2]``.
    """

    __slots__ = ("prefactor", "exponent")

    def __init__(self, prefactor, exponent):
        if prefactor.table != exponent.table:
            raise TableMismatchError("prefactor and exponent tables differ")
        self.prefactor = prefactor
        self.exponent = exponent

    @property
    def table(self):
        return self.prefactor.table

    def __eq__(self, other):
        if not isinstance(other, ExpPolyFunction):
            return NotImplemented
        if self.prefactor.is_zero() and other.prefactor.is_zero():
            return self.table == other.table
        return self.prefactor == other.prefactor and self.exponent == other.exponent

    def __add__(self, other):
        if self.exponent != other.exponent:
            raise ValueError("can only add functions with the same exponential part")
        return ExpPolyFunction(self.prefactor + other.prefactor, self.exponent)

    def __repr__(self):
        return f"ExpPolyFunction(({self.prefactor}) * exp({self.exponent}))"

    def diff(self, v):
        return ExpPolyFunction(
            self.prefactor.diff(v) + self.prefactor * self.exponent.diff(v), self.exponent
        )

    def evaluate(self, values):
        import math

        return float(self.prefactor.evaluate(values)) * math.exp(float(self.exponent.evaluate(values)))


def apply(P, g):
    """Act with ``P`` on ``g``; derivatives first, then position factors."""
    positions = P.positions
    if tuple(g.table) != positions:
        raise TableMismatchError("operator and function tables differ")
    m = P.m
    cache = {(0,) * m: g.prefactor}

    def derivative(beta):
        if beta in cache:
            return cache[beta]
        i = next(j for j, e in enumerate(beta) if e)
        prev = list(beta)
        prev[i] -= 1
        p = derivative(tuple(prev))
        v = positions[i]
        res = p.diff(v) + p * g.exponent.diff(v)
        cache[beta] = res
        return res

    out = Polynomial(positions)
    for k, c in P.terms.items():
        mono = Polynomial._raw(positions, {k[:m]: c})
        out = out + mono * derivative(k[m:])
    return ExpPolyFunction(out, g.exponent)


def adjoint(P):
    """Formal adjoint: ``v^a d^b -> (-1)^|b| d^b v^a``, normal ordered.

    For a distribution ``u`` and test function ``phi``,
    ``<P u, phi> = <u, adjoint(P) phi>``.
    """
    m = P.m
    out = {}
    for k, c in P.terms.items():
        a, b = k[:m], k[m:]
        prod = _mono_mul(m, (0,) * m + tuple(b), tuple(a) + (0,) * m)
        _add_into(out, prod, (-1) ** sum(b) * c)
    return WeylOperator._raw(P.positions, out)
