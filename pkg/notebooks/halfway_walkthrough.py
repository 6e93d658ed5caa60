"""Walkthrough: the halfway map z -> (1 + z)/2 on the Szego kernel.

Runs the full pipeline at the boundary point 1 and prints what each stage
sees. Run with ``python3 notebooks/halfway_walkthrough.py``.
"""

from rkboundary import zoo
from rkboundary.boundary import boundary_point
from rkboundary.julia import horocycle_points, iterate_to_boundary, jc_report, julia_inclusion_check

sz, phi = zoo.szego(), zoo.halfway()
xi = boundary_point(sz, 1)

# c is the angular-derivative constant; for this map it is exactly 1/2
r = jc_report(sz, sz, phi, 1)
print(f"c_hat = {r.c_hat:.8f}  |q|^2 >= {r.q_norm_sq_lb:.8f}  sandwich ok: {r.sandwich_ok}")

# Julia: phi maps each horocycle of size M into the one of size c M
pts = horocycle_points(1, 2.0, 100, shrink=(1.0, 0.5, 0.1))
rep = julia_inclusion_check(sz, phi, xi, xi, r.c_hat, [2.0], pts)
print(f"Julia inclusion on {rep.checked} points: ok={rep.ok}, worst ratio {rep.max_ratio:.6f}")

# iterates march to 1 and the E-level halves each step once 2^-n is small
tr = iterate_to_boundary(sz, phi, sz.domain.point(0), xi, 0.5, N=25)
print(f"iteration verdict {tr.verdict} at step {tr.converged_at}")
for n, ratio in enumerate(tr.ratios()[:8], start=1):
    print(f"  step {n:2d}: E-level ratio {ratio:.6f}   exact {(2 - 2.0**(1 - n)) / (4 - 2.0**(1 - n)):.6f}")
