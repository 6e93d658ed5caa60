"""A factorisation that fails: squaring on the Szego square root.

The quotient k(z, w) / k(z^2, w^2) is sqrt(1 + z conj(w)), which is not a
positive kernel. A 16-point grid is enough to find a negative direction.
"""

import numpy as np

from rkboundary import zoo
from rkboundary.julia import factor_quotient, refuted_witness_check
from rkboundary.numerics import gram
from rkboundary.sampling import grid_g16

k = zoo.szego_pow(0.5)
q = factor_quotient(k, k, zoo.square())
rep = gram(q, grid_g16())
print(f"verdict {rep.verdict}, min eigenvalue {rep.min_eig:.6f} (tol {rep.tol:.2e})")

v = rep.witness
print("witness Rayleigh quotient:", float(np.real(v.conj() @ rep.matrix @ v)))
print("witness rechecks from raw points:", refuted_witness_check(rep, q))

# the same map against the full Szego kernel is fine: the quotient is 1 + z conj(w)
ok = gram(factor_quotient(zoo.szego(), zoo.szego(), zoo.square()), grid_g16())
print(f"Szego / Szego o square: {ok.verdict}, min eigenvalue {ok.min_eig:.3e}")
