import random
from fractions import Fraction

import pytest
import sympy

from sofisher.polycore import Polynomial, var
from sofisher.weylcore import WeylOperator

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)


def xs(m):
    return tuple(var("x", i) for i in range(1, m + 1))


def random_operator(rng, positions, max_terms=4, max_deg=3):
    m = len(positions)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * (2 * m)
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(2 * m)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    op = WeylOperator(positions, terms)
    return op if op else WeylOperator.constant(positions, 1)


def random_polynomial(rng, table, max_terms=4, max_deg=3):
    n = len(table)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return Polynomial(table, terms)


@pytest.fixture
def rng():
    return random.Random(20131)


def sympy_action(P, h, syms):
    """Apply a normal-ordered operator to a sympy expression."""
    m = P.m
    out = 0
    for k, c in P.terms.items():
        g = h
        for s, e in zip(syms, k[m:]):
            g = sympy.diff(g, s, e)
        mono = sympy.prod(s**a for s, a in zip(syms, k[:m]))
        out += sympy.Rational(c.numerator, c.denominator) * mono * g
    return sympy.expand(out)
