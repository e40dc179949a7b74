"""
Holonomic gradient method for the diagonal SO(3) Fisher integral
=================================================================

F = (f, f_1, f_2, f_3) satisfies a Pfaffian system away from |x_i| = |x_j|.
Start from quadrature values at a small point and integrate along a straight
line with RK4.  Halving the step should cut the error by about 16.
"""

import numpy as np

from sofisher.numint import fisher_value, hgm_evaluate
from sofisher.songen import SingularLocusError, pfaffian_so3

# exact rational connection matrix for d/dx_1 at a rational point
for row in pfaffian_so3((1, 2, 3)).matrices[0]:
    print("  ".join(f"{str(v):>6}" for v in row))

start, target = (0.1, 0.2, 0.3), (1.0, 2.0, 3.0)
ref = fisher_value(np.diag(target)).value
print(f"\nquadrature f(target) = {ref!r}")

prev = None
for steps in (10, 20, 40, 80, 160, 320):
    err = abs(hgm_evaluate(start, target, steps=steps).final[0] - ref)
    ratio = "" if prev is None else f"  ratio {prev / err:5.1f}"
    print(f"steps {steps:4d}  error {err:.3e}{ratio}")
    prev = err

try:
    hgm_evaluate((0.1, 0.5, 0.9), (0.7, 0.5, 0.9))
except SingularLocusError as exc:
    print("\n", exc)
