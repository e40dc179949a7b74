"""Exact commutative polynomials over Q, Buchberger bases and Krull dimension.

Polynomials live over an explicit *variable table* (a tuple of
:class:`Variable`).  Two polynomials may only be combined when their tables
are equal; there is no silent coercion.

Term orders are represented by flat integer sort keys so that the Buchberger
loop can keep its working polynomials in a heap.
"""

from __future__ import annotations

import heapq
import itertools
import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

logger = logging.getLogger(__name__)

Exps = tuple  # tuple[int, ...]

FAMILIES = ("y", "x", "xi", "dy", "dx")
_FAMILY_RANK = {f: i for i, f in enumerate(FAMILIES)}


class TableMismatchError(ValueError):
    """Raised when two objects over different variable tables are combined."""


class BudgetExhausted(RuntimeError):
    """Raised when a Gröbner computation exceeds its pair budget.

    ``progress`` holds a small dict describing how far the run got.
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


@dataclass(frozen=True, order=True)
class Variable:
    """A named indeterminate such as ``y[1,2]`` or ``dx[3]``."""

    family: str
    indices: tuple

    def __post_init__(self):
        if self.family not in _FAMILY_RANK:
            raise ValueError(f"unknown variable family {self.family!r}")
        if len(self.indices) not in (1, 2) or any(int(i) < 1 for i in self.indices):
            raise ValueError(f"bad indices {self.indices!r} for {self.family}")

    def __str__(self):
        return f"{self.family}[{','.join(str(i) for i in self.indices)}]"

    @property
    def is_derivation(self):
        return self.family.startswith("d")

    def derivation(self):
        """Derivation partner of a position variable (``y -> dy``)."""
        if self.family not in ("y", "x"):
            raise ValueError(f"{self} has no derivation partner")
        return Variable("d" + self.family, self.indices)

    def position(self):
        if not self.is_derivation:
            raise ValueError(f"{self} is not a derivation")
        return Variable(self.family[1:], self.indices)

    def symbol(self):
        """Commuting symbol variable ``xi[...]`` standing for this derivation."""
        if self.is_derivation:
            return Variable("xi", self.indices)
        return self.derivation().symbol()

    @classmethod
    def parse(cls, text):
        m = _VAR_RE.fullmatch(text.strip())
        if m is None:
            raise ValueError(f"cannot parse variable {text!r}")
        idx = tuple(int(s) for s in m.group(2).split(","))
        return cls(m.group(1), idx)


def var(family, *indices):
    return Variable(family, tuple(indices))


def canonical_sort(variables):
    return sorted(set(variables), key=lambda v: (_FAMILY_RANK[v.family], v.indices))


# ---------------------------------------------------------------------------
# term orders


@dataclass(frozen=True)
class TermOrder:
    """A monomial order given by a flat integer sort key.

    ``kind`` is one of ``"lex"``, ``"grlex"``, ``"grevlex"`` or ``"weight"``;
    the weighted kind compares ``weight . e`` first and breaks ties with
    ``tiebreak``.  Variables earlier in a table are larger.
    """

    kind: str
    weight: tuple = ()
    tiebreak: "TermOrder | None" = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "weight"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "weight":
            if any(w < 0 for w in self.weight):
                raise ValueError("weight vectors must be nonnegative")
            if self.tiebreak is None or self.tiebreak.kind == "weight":
                raise ValueError("weight order needs a non-weight tiebreak order")

    def key(self, e):
        k = self._cache.get(e)
        if k is None:
            k = self._compute(e)
            self._cache[e] = k
        return k

    def _compute(self, e):
        if self.kind == "lex":
            return e
        if self.kind == "grlex":
            return (sum(e),) + e
        if self.kind == "grevlex":
            return (sum(e),) + tuple(-a for a in reversed(e))
        if len(self.weight) != len(e):
            raise ValueError("weight vector length does not match the table")
        w = sum(a * b for a, b in zip(self.weight, e))
        return (w,) + self.tiebreak.key(e)

    def __str__(self):
        if self.kind == "weight":
            return f"weight({','.join(map(str, self.weight))};{self.tiebreak})"
        return self.kind


LEX = TermOrder("lex")
GRLEX = TermOrder("grlex")
GREVLEX = TermOrder("grevlex")


def weight_order(weight, tiebreak=GREVLEX):
    return TermOrder("weight", tuple(weight), tiebreak)


# ---------------------------------------------------------------------------
# polynomials


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("float coefficients are not allowed; use Fraction")
    return Fraction(c)


def _add_into(acc, terms, scale=1):
    for m, c in terms.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def _mul_terms(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                del out[m]
    return out


class Polynomial:
    """Exact polynomial with rational coefficients over a variable table.

    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table, terms=None):
        self.table = tuple(table)
        n = len(self.table)
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n:
                raise ValueError("exponent vector length does not match table")
            c = _frac(c)
            if c:
                clean[m] = clean.get(m, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, table, c):
        return cls(table, {(0,) * len(tuple(table)): c})

    @classmethod
    def variable(cls, table, v):
        table = tuple(table)
        e = [0] * len(table)
        e[table.index(v)] = 1
        return cls(table, {tuple(e): 1})

    @classmethod
    def _raw(cls, table, terms):
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.table = table
        p.terms = terms
        p._hash = None
        return p

    # -- basic protocol ---------------------------------------------------
    def _check(self, other):
        if self.table is not other.table and self.table != other.table:
            raise TableMismatchError("polynomials live over different variable tables")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.table, _add_into(dict(self.terms), other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.table, _add_into(dict(self.terms), other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw(self.table, {})
            return Polynomial._raw(self.table, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.table, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Polynomial.constant(self.table, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_terms(self.table, self.terms)

    # -- inspection -------------------------------------------------------
    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, a in enumerate(m) if a)
        return [self.table[i] for i in sorted(used)]

    def leading_monomial(self, order):
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order):
        return self * (1 / self.leading_coefficient(order))

    # -- calculus / substitution -------------------------------------------
    def diff(self, v):
        i = self.table.index(v)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial._raw(self.table, out)

    def embed(self, table):
        """Re-express over ``table``, which must contain every used variable."""
        table = tuple(table)
        pos = {v: j for j, v in enumerate(table)}
        used = self.variables()
        missing = [str(v) for v in used if v not in pos]
        if missing:
            raise TableMismatchError(f"target table lacks {', '.join(missing)}")
        idx = [pos.get(v) for v in self.table]
        out = {}
        for m, c in self.terms.items():
            e = [0] * len(table)
            for i, a in enumerate(m):
                if a:
                    e[idx[i]] = a
            out[tuple(e)] = c
        return Polynomial._raw(table, out)

    def substitute(self, mapping, table=None):
        """Ring homomorphism sending each variable ``v`` to ``mapping[v]``.

        Variables absent from ``mapping`` are sent to themselves (embedded in
        the target table).  All images must share the target ``table``.
        """
        table = tuple(table) if table is not None else self.table
        images = []
        for v in self.table:
            img = mapping.get(v)
            if img is None:
                img = Polynomial.variable(table, v) if v in table else None
            elif img.table != table:
                raise TableMismatchError(f"image of {v} lives over another table")
            images.append(img)
        out = Polynomial(table)
        powers = {}
        for m, c in self.terms.items():
            term = Polynomial.constant(table, c)
            for i, a in enumerate(m):
                if not a:
                    continue
                if images[i] is None:
                    raise TableMismatchError(f"no image for {self.table[i]}")
                key = (i, a)
                if key not in powers:
                    powers[key] = images[i] ** a
                term = term * powers[key]
            out = out + term
        return out

    def evaluate(self, values):
        """Evaluate at ``values`` (mapping Variable -> number or sequence by table)."""
        if isinstance(values, Mapping):
            vals = [values[v] for v in self.table]
        else:
            vals = list(values)
        total = 0
        for m, c in self.terms.items():
            t = c
            for a, x in zip(m, vals):
                if a:
                    t = t * x**a
            total = total + t
        return total

    # -- serialization ----------------------------------------------------
    def to_json(self):
        return terms_to_json(self.table, self.terms)

    @classmethod
    def from_json(cls, data, table=None):
        data = json.loads(data) if isinstance(data, str) else data
        names = [Variable.parse(k) for item in data for k in item["exps"]]
        if table is None:
            table = canonical_sort(names)
        table = tuple(table)
        pos = {v: i for i, v in enumerate(table)}
        terms = {}
        for item in data:
            e = [0] * len(table)
            for k, a in item["exps"].items():
                e[pos[Variable.parse(k)]] = int(a)
            terms[tuple(e)] = terms.get(tuple(e), 0) + Fraction(item["coeff"])
        return cls(table, terms)

    @classmethod
    def parse(cls, text, table=None):
        items = parse_expression(text)
        if table is None:
            table = canonical_sort(v for _, factors in items for v, _ in factors)
        table = tuple(table)
        pos = {v: i for i, v in enumerate(table)}
        out = {}
        for c, factors in items:
            e = [0] * len(table)
            for v, a in factors:
                if v not in pos:
                    raise TableMismatchError(f"{v} is not in the table")
                e[pos[v]] += a
            _add_into(out, {tuple(e): c})
        return cls._raw(table, out)


# ---------------------------------------------------------------------------
# text grammar shared by polynomials and operators

_VAR_RE = re.compile(r"(y|x|xi|dy|dx)\[\s*(\d+(?:\s*,\s*\d+)?)\s*\]")
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<var>(?:y|x|xi|dy|dx)\[\s*\d+(?:\s*,\s*\d+)?\s*\])"
    r"|(?P<num>\d+)|(?P<op>[-+*/^]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ValueError(f"unexpected input at {text[pos:pos + 12]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind).replace(" ", "")))
    return tokens


def parse_expression(text):
    """Parse the shared grammar into ``[(coeff, [(Variable, power), ...]), ...]``.

    Factor order within a term is preserved, which matters for operators.
    """
    toks = _tokenize(text)
    if not toks:
        raise ValueError("empty expression")
    i = 0
    items = []
    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val = toks[i]
        if kind == "op" and val in "+-":
            if expect_term and items:
                raise ValueError("two signs in a row")
            sign = -1 if val == "-" else 1
            i += 1
            if i >= len(toks):
                raise ValueError("dangling sign")
            kind, val = toks[i]
        elif not expect_term:
            raise ValueError(f"expected '+' or '-', got {val!r}")
        coeff = Fraction(1)
        factors = []
        if kind == "num":
            coeff = Fraction(int(val))
            i += 1
            if i < len(toks) and toks[i] == ("op", "/"):
                if i + 1 >= len(toks) or toks[i + 1][0] != "num":
                    raise ValueError("bad rational coefficient")
                den = int(toks[i + 1][1])
                if den == 0:
                    raise ZeroDivisionError("zero denominator")
                coeff /= den
                i += 2
            need_factor = False
        elif kind == "var":
            need_factor = True
        else:
            raise ValueError(f"unexpected {val!r}")
        while True:
            if need_factor:
                kind, val = toks[i] if i < len(toks) else (None, None)
                if kind != "var":
                    raise ValueError("expected a variable")
                v = Variable.parse(val)
                i += 1
                power = 1
                if i < len(toks) and toks[i] == ("op", "^"):
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num":
                        raise ValueError("bad exponent")
                    power = int(toks[i + 1][1])
                    i += 2
                factors.append((v, power))
            if i < len(toks) and toks[i] == ("op", "*"):
                i += 1
                need_factor = True
                continue
            break
        items.append((sign * coeff, factors))
        sign = 1
        expect_term = False
    return items


def _format_monomial(table, m):
    parts = []
    for v, a in zip(table, m):
        if a == 1:
            parts.append(str(v))
        elif a:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def _display_key(m):
    return (-sum(m), tuple(-a for a in m))


def format_terms(table, terms):
    """Print terms in the shared grammar, highest total degree first."""
    if not terms:
        return "0"
    out = []
    for m in sorted(terms, key=_display_key):
        c = terms[m]
        mono = _format_monomial(table, m)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def terms_to_json(table, terms):
    return [
        {
            "coeff": str(terms[m]),
            "exps": {str(v): a for v, a in zip(table, m) if a},
        }
        for m in sorted(terms, key=_display_key)
    ]


# ---------------------------------------------------------------------------
# Buchberger machinery (shared with the Weyl algebra via ``_Ring``)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _quot(b, a):
    return tuple(y - x for x, y in zip(a, b))


class _CommutativeRing:
    product_criterion = True

    @staticmethod
    def mono_mul(mono, coeff, terms):
        return {tuple(a + b for a, b in zip(mono, m)): coeff * c for m, c in terms.items()}


def _reduce(f, basis, key, ring, full=True):
    """Normal form of ``f`` (a terms dict) by ``basis`` = [(lm, lc, terms)].

    Uses a max-heap of negated flat keys; stale heap entries are skipped.
    """
    f = dict(f)
    rem = {}
    heap = [(tuple(-k for k in key(m)), m) for m in f]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = f.get(m)
        if c is None:
            continue
        for lm, lc, g in basis:
            if _divides(lm, m):
                q = _quot(m, lm)
                sub = ring.mono_mul(q, -c / lc, g)
                for mm, cc in sub.items():
                    old = f.get(mm)
                    if old is None:
                        f[mm] = cc
                        heapq.heappush(heap, (tuple(-k for k in key(mm)), mm))
                    else:
                        v = old + cc
                        if v:
                            f[mm] = v
                        else:
                            del f[mm]
                break
        else:
            rem[m] = f.pop(m)
            if not full:
                rem.update(f)
                return rem
    return rem


def _buchberger(polys, key, ring, max_pairs=None, label="groebner"):
    """Core Buchberger loop with sugar selection; returns reduced monic terms dicts."""
    basis = []  # entries: [lm, lc, terms, sugar]
    pairs = []  # heap of (sugar, lcm key, counter, i, j)
    counter = itertools.count()
    active = []
    processed = 0

    def add(terms, sugar):
        lm = max(terms, key=key)
        lc = terms[lm]
        idx = len(basis)
        basis.append([lm, lc, terms, sugar])
        new = []
        for i in active:
            lmi = basis[i][0]
            l = _lcm(lmi, lm)
            if ring.product_criterion and all(a == 0 or b == 0 for a, b in zip(lmi, lm)):
                continue
            s = max(basis[i][3] + sum(l) - sum(lmi), sugar + sum(l) - sum(lm))
            new.append((s, key(l), next(counter), i, idx, l))
        # chain criterion against the new element (Gebauer-Moeller style)
        keep = []
        for p in pairs:
            _, _, _, i, j, l = p
            if _divides(lm, l) and _lcm(basis[i][0], lm) != l and _lcm(basis[j][0], lm) != l:
                continue
            keep.append(p)
        # among new pairs, drop those whose lcm is a proper multiple of another's
        new.sort(key=lambda p: (p[1], p[2]))
        filtered = []
        for p in new:
            if any(_divides(q[5], p[5]) and q[5] != p[5] for q in filtered):
                continue
            if any(q[5] == p[5] for q in filtered):
                continue
            filtered.append(p)
        keep.extend(filtered)
        heapq.heapify(keep)
        pairs[:] = keep
        # elements whose leading monomial is divisible by the new one leave the active set
        active[:] = [i for i in active if not _divides(lm, basis[i][0])]
        active.append(idx)

    current = lambda: [(basis[i][0], basis[i][1], basis[i][2]) for i in active]

    seeds = [t for t in polys if t]
    seeds.sort(key=lambda t: key(max(t, key=key)))
    for t in seeds:
        r = _reduce(t, current(), key, ring)
        if r:
            add(r, max(sum(m) for m in t))
            if all(not any(m) for m in r):
                break

    while pairs:
        s, _, _, i, j, l = heapq.heappop(pairs)
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise BudgetExhausted(
                f"{label}: pair budget {max_pairs} exhausted",
                {"pairs_processed": processed - 1, "pairs_pending": len(pairs) + 1,
                 "basis_size": len(active), "sugar": s},
            )
        lmi, lci, gi, _ = basis[i]
        lmj, lcj, gj, _ = basis[j]
        sp = ring.mono_mul(_quot(l, lmi), Fraction(1) / lci, gi)
        _add_into(sp, ring.mono_mul(_quot(l, lmj), -Fraction(1) / lcj, gj))
        r = _reduce(sp, current(), key, ring)
        if r:
            add(r, s)
            if all(not any(m) for m in r):
                break
        if processed % 200 == 0:
            logger.debug("%s: %d pairs done, %d pending, basis %d, sugar %d",
                         label, processed, len(pairs), len(active), s)

    gens = [basis[i][2] for i in active]
    return _interreduce(gens, key, ring), processed


def _interreduce(gens, key, ring):
    gens = [g for g in gens if g]
    if any(all(not any(m) for m in g) for g in gens):
        g = gens[0]
        return [{(0,) * len(next(iter(g))): Fraction(1)}]
    lms = [max(g, key=key) for g in gens]
    minimal = []
    for i, (g, lm) in enumerate(zip(gens, lms)):
        dominated = False
        for j, lm2 in enumerate(lms):
            if j == i:
                continue
            if _divides(lm2, lm) and (lm2 != lm or j < i):
                dominated = True
                break
        if not dominated:
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = [(max(h, key=key), h[max(h, key=key)], h) for j, h in enumerate(minimal) if j != i]
        r = _reduce(g, others, key, ring)
        lm = max(r, key=key)
        lc = r[lm]
        out.append({m: c / lc for m, c in r.items()})
    out.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# public Gröbner API


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Gröbner basis together with its order.

    ``generators`` are monic and sorted by decreasing leading monomial.
    """

    generators: tuple
    order: TermOrder
    reduced: bool = True
    pairs_processed: int = 0

    @property
    def table(self):
        return self.generators[0].table

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.generators]

    def is_unit(self):
        return any(g.total_degree() == 0 for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def contains(self, p):
        return normal_form(p, self).is_zero()


def groebner(gens, order=GREVLEX, *, max_pairs=None):
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    The zero ideal is returned as an empty basis only when a table can be
    inferred from the input; ``max_pairs`` bounds the number of S-pairs.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator to fix the variable table")
    table = gens[0].table
    for g in gens[1:]:
        gens[0]._check(g)
    if not table:
        raise ValueError("empty variable table")
    terms, processed = _buchberger(
        [g.terms for g in gens], order.key, _CommutativeRing, max_pairs=max_pairs
    )
    return GroebnerBasis(
        tuple(Polynomial._raw(table, t) for t in terms), order, True, processed
    )


def normal_form(p, gb):
    """Remainder of ``p`` on division by ``gb``; zero iff ``p`` is in the ideal."""
    if len(gb) and p.table != gb.table:
        raise TableMismatchError("polynomial and basis live over different tables")
    basis = [(g.leading_monomial(gb.order), Fraction(1), g.terms) for g in gb.generators]
    return Polynomial._raw(p.table, _reduce(p.terms, basis, gb.order.key, _CommutativeRing))


def s_polynomial(f, g, order):
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    l = _lcm(lf, lg)
    a = _CommutativeRing.mono_mul(_quot(l, lf), 1 / f.terms[lf], f.terms)
    _add_into(a, _CommutativeRing.mono_mul(_quot(l, lg), -1 / g.terms[lg], g.terms))
    return Polynomial._raw(f.table, a)


# ---------------------------------------------------------------------------
# Krull dimension via coordinate subspaces of the leading-term variety


def dimension_of_monomial_ideal(monomials, nvars):
    """Dimension of V(<monomials>): nvars minus a minimum hitting set size.

    Returns ``None`` when a monomial is constant (empty variety).
    """
    supports = set()
    for m in monomials:
        s = frozenset(i for i, a in enumerate(m) if a)
        if not s:
            return None
        supports.add(s)
    minimal = [s for s in supports if not any(t < s for t in supports)]
    if not minimal:
        return nvars
    masks = sorted({sum(1 << i for i in s) for s in minimal}, key=lambda b: bin(b).count("1"))

    best = [min(nvars, len(masks))]

    def search(chosen, count, remaining):
        if count >= best[0]:
            return
        for idx, mask in enumerate(remaining):
            if not mask & chosen:
                break
        else:
            best[0] = count
            return
        rest = remaining[idx + 1:]
        bits = mask
        while bits:
            low = bits & -bits
            bits ^= low
            search(chosen | low, count + 1, [r for r in rest if not r & low])

    search(0, 0, masks)
    return nvars - best[0]


def krull_dimension(gens, order=GREVLEX, *, table=None, max_pairs=None):
    """Krull dimension of the affine variety cut out by ``gens``.

    An empty generator list needs ``table`` and gives the whole space.  The
    unit ideal yields ``None`` (empty variety).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        if table is None:
            raise ValueError("table required for an empty generator list")
        return len(tuple(table))
    gb = groebner(gens, order, max_pairs=max_pairs)
    return dimension_of_monomial_ideal(gb.leading_monomials(), len(gb.table))
