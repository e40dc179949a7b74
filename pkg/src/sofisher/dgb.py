"""Left Gröbner bases in the Weyl algebra, characteristic ideals, holonomicity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polycore import (
    GREVLEX,
    TableMismatchError,
    _add_into,
    _buchberger,
    _lcm,
    _quot,
    _reduce,
    dimension_of_monomial_ideal,
    groebner,
    normal_form,
    weight_order,
)
from .weylcore import WeylOperator, _WeylRing, symbol_01


class EmptyCharacteristicVariety(ValueError):
    """The ideal is the whole Weyl algebra; its characteristic variety is empty."""


@dataclass(frozen=True)
class WeylIdealPresentation:
    """Left ideal given by generators over a shared position table."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal presentation needs at least one generator")
        for g in gens[1:]:
            gens[0]._check(g)
        object.__setattr__(self, "generators", gens)

    @property
    def positions(self):
        return self.generators[0].positions

    def map(self, fn):
        return WeylIdealPresentation(tuple(fn(g) for g in self.generators))


def _as_presentation(ideal):
    if isinstance(ideal, WeylIdealPresentation):
        return ideal
    return WeylIdealPresentation(tuple(ideal))


def order_01(m, tiebreak=GREVLEX):
    """Weight 0 on positions and 1 on derivations, refined by ``tiebreak``."""
    return weight_order((0,) * m + (1,) * m, tiebreak)


@dataclass(frozen=True)
class WeylGroebnerBasis:
    generators: tuple
    order: object
    pairs_processed: int = 0

    @property
    def positions(self):
        return self.generators[0].positions

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_unit(self):
        return any(g.as_polynomial().total_degree() == 0 for g in self.generators)

    def leading_monomials(self):
        return [max(g.terms, key=self.order.key) for g in self.generators]


def weyl_groebner(ideal, *, max_pairs=None, order=None):
    """Reduced left Gröbner basis under the (0,1)-weight order refined by grevlex."""
    ideal = _as_presentation(ideal)
    positions = ideal.positions
    m = len(positions)
    order = order or order_01(m)
    terms, processed = _buchberger(
        [g.terms for g in ideal.generators if g], order.key, _WeylRing(m),
        max_pairs=max_pairs, label="weyl_groebner",
    )
    gens = tuple(WeylOperator._raw(positions, t) for t in terms)
    return WeylGroebnerBasis(gens, order, processed)


def weyl_normal_form(P, gb):
    """Remainder of ``P`` under left division by ``gb``."""
    if len(gb) and P.positions != gb.positions:
        raise TableMismatchError("operator and basis live over different tables")
    basis = [(max(g.terms, key=gb.order.key), None, g.terms) for g in gb.generators]
    basis = [(lm, g[lm], g) for lm, _, g in basis]
    return WeylOperator._raw(P.positions, _reduce(P.terms, basis, gb.order.key, _WeylRing(P.m)))


def weyl_s_polynomial(f, g, order):
    ring = _WeylRing(f.m)
    lf, lg = max(f.terms, key=order.key), max(g.terms, key=order.key)
    l = _lcm(lf, lg)
    s = ring.mono_mul(_quot(l, lf), Fraction(1) / f.terms[lf], f.terms)
    _add_into(s, ring.mono_mul(_quot(l, lg), -Fraction(1) / g.terms[lg], g.terms))
    return WeylOperator._raw(f.positions, s)


def characteristic_ideal(ideal, *, max_pairs=None, gb=None):
    """Principal symbols of a (0,1)-Gröbner basis of ``ideal``.

    These generate the characteristic ideal; this is the standard fact that
    symbols of a Gröbner basis for a weight-refined order generate the
    initial ideal.
    """
    gb = gb or weyl_groebner(ideal, max_pairs=max_pairs)
    return [symbol_01(g) for g in gb.generators]


@dataclass(frozen=True)
class HolonomicReport:
    holonomic: bool
    dimension: int
    nvars: int
    basis_size: int
    budget_exhausted: bool = False

    def to_json(self):
        return {
            "holonomic": self.holonomic,
            "dimension": self.dimension,
            "basis_size": self.basis_size,
            "budget_exhausted": self.budget_exhausted,
        }

    def __bool__(self):
        return self.holonomic


def characteristic_dimension(ideal, *, max_pairs=None, gb=None):
    """Krull dimension of the characteristic variety (``None`` if empty)."""
    gb = gb or weyl_groebner(ideal, max_pairs=max_pairs)
    symbols = characteristic_ideal(ideal, gb=gb)
    cgb = groebner(symbols, GREVLEX)
    return dimension_of_monomial_ideal(cgb.leading_monomials(), len(cgb.table))


def is_holonomic(ideal, *, max_pairs=None):
    """Holonomicity test: characteristic dimension equals the position count."""
    ideal = _as_presentation(ideal)
    gb = weyl_groebner(ideal, max_pairs=max_pairs)
    if gb.is_unit():
        raise EmptyCharacteristicVariety("empty characteristic variety: the ideal is the unit ideal")
    dim = characteristic_dimension(ideal, gb=gb)
    m = len(ideal.positions)
    return HolonomicReport(dim == m, dim, m, len(gb))


def ideal_contains(gb, polys):
    """True when every polynomial reduces to zero modulo a commutative basis."""
    return all(normal_form(p, gb).is_zero() for p in polys)
