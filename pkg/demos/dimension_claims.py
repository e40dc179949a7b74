"""
Dimensions of the varieties behind the characteristic ideal
===========================================================

Krull dimension is computed from the leading monomials of a Groebner basis:
the number of variables minus a minimum hitting set of the monomial supports.
"""

from sofisher.polycore import krull_dimension
from sofisher.songen import char_ideal_generators, matrix_table, so_relations, xi_symmetry, y_table

print(" n  SO(n)  xi-sym  J'")
for n in (2, 3):
    so = krull_dimension(so_relations(n, y_table(n)))
    sym = krull_dimension(xi_symmetry(n, matrix_table("xi", n)))
    jp = krull_dimension(char_ideal_generators(n, "Jprime").operators)
    print(f"{n:2d}  {so:5d}  {sym:6d}  {jp:2d}   expected {n * (n - 1) // 2}, {n * (n + 1) // 2}, {n * n}")
