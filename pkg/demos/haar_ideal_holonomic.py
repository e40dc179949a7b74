"""
The annihilating ideal of the Haar measure on SO(2)
===================================================

Build the eight generators, compute a Groebner basis for the (0,1) weight
order, read off the characteristic ideal and its dimension.  The same is done
for the Fourier image, which annihilates the Fisher integral.
"""

import time

from sofisher.dgb import characteristic_ideal, ideal_contains, is_holonomic, weyl_groebner
from sofisher.polycore import GREVLEX, groebner
from sofisher.songen import char_ideal_generators, fisher_generators, haar_generators

haar = haar_generators(2)
for label, op in zip(haar.labels, haar.operators):
    print(f"{label:>14}: {op}")

t0 = time.perf_counter()
gb = weyl_groebner(haar.operators)
print(f"\nGroebner basis: {len(gb)} elements, {gb.pairs_processed} pairs ({time.perf_counter() - t0:.2f}s)")

# characteristic ideal versus the ideal J built from the skew symbols
char = characteristic_ideal(haar.operators, gb=gb)
J = [p.embed(char[0].table) for p in char_ideal_generators(2, "J").operators]
char_gb = groebner(char, GREVLEX)
J_gb = groebner(J, GREVLEX)
print("J inside char:", ideal_contains(char_gb, J))
print("char inside J:", ideal_contains(J_gb, char))

for name, gens in (("haar", haar.operators), ("fisher", fisher_generators(2).operators)):
    rep = is_holonomic(gens)
    print(f"{name}: holonomic={rep.holonomic} dimension={rep.dimension}")
