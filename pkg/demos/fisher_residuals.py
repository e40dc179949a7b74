"""
Checking annihilators numerically
=================================

For an operator P in the x variables, (P f)(x) is a combination of moments
E[y^beta exp(<x, y>)].  Three oracles evaluate them: Euler-angle quadrature
on SO(3), Monte Carlo over Haar samples, and the I0 series for diagonal SO(2).
"""

import numpy as np

from sofisher.numint import Bessel, MonteCarlo, Quadrature, annihilation_residual, fisher_value
from sofisher.songen import diagonal_operators, fisher_generators, so3_mixed_operators

x = (0.4, 0.9, 1.5)
print("diagonal SO(3) operators at", x)
for gs in (diagonal_operators(3), so3_mixed_operators()):
    for label, op in zip(gs.labels, gs.operators):
        r = annihilation_residual(op, x, Quadrature())
        print(f"  {label:>12}: {r.normalized:.2e}")

print("\nI0 oracle, n = 2:", annihilation_residual(diagonal_operators(2)[0], (0.5, 0.2), Bessel()).normalized)

# full-matrix point, Monte Carlo: residuals should sit within a few standard errors
xm = np.random.default_rng(7).uniform(-1, 1, (3, 3))
mc = MonteCarlo(200_000, seed=7)
gens = fisher_generators(3)
for label, op in list(zip(gens.labels, gens.operators))[:5]:
    r = annihilation_residual(op, xm, mc)
    print(f"  {label:>16}: {r.normalized:.2e} (stderr {r.normalized_stderr:.1e})")

print("\nf(x) by quadrature:", fisher_value(xm).value, " by MC:", fisher_value(xm, mc).value)
