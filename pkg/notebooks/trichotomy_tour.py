"""Where do normalised kernel sections go along a sequence?

Three kernels, three different answers: a genuine boundary point, a limit
that is a function in the space, and a limit that is an interior point.
"""

import math

from rkboundary import zoo
from rkboundary.boundary import RADIAL, boundary_point, classify_limit, make_sequence, nested_samples

cases = [("szego", zoo.szego(), 1), ("dbr_half", zoo.dbr_half(), 1), ("nat_matrix", zoo.nat_matrix(), math.inf)]
for name, k, anchor in cases:
    seq = make_sequence(RADIAL, boundary_point(k, anchor), 40)
    tri = classify_limit(k, seq, nested_samples(k, seq))
    extra = f" match={tri.match.z}" if tri.match is not None else ""
    print(f"{name:11s} -> {tri.verdict}{extra}")
