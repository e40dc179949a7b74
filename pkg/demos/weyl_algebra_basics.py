"""
Computing in the Weyl algebra
=============================

Operators are kept in normal order: positions to the left, derivations to the
right.  Everything is exact over the rationals.
"""

from sofisher.polycore import Polynomial, var
from sofisher.weylcore import ExpPolyFunction, WeylOperator, apply, fourier, symbol_01, twist

x = (var("x", 1), var("x", 2))
W = lambda text: WeylOperator.parse(text, x)

# d x = x d + 1, and a second-order example
print(W("dx[1]") * W("x[1]"))
print(W("dx[1]^2") * W("x[1]^2"))

# the principal symbol keeps the top order part
P = W("x[1]*dx[1]^2 + dx[2] - 3")
print("symbol:", symbol_01(P))

# the Fourier automorphism swaps the roles of x and d (up to sign)
print("fourier:", fourier(P))

# conjugation by exp(f) shifts each derivation by a gradient component
f = Polynomial.parse("x[1]*x[2]", x)
print("twisted:", twist(W("dx[1]"), f))

# operators act on functions p * exp(L)
g = ExpPolyFunction(Polynomial.parse("x[1]^2", x), Polynomial.parse("2*x[2]", x))
print("action:", apply(W("x[1]*dx[1] + dx[2]"), g))
