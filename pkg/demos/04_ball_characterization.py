"""
Only balls reproduce the point-source value
===========================================

Average U(y) = a_sphere(mu |y|) over a domain and compare with what a ball of
the same volume gives. The difference vanishes for the ball and is positive
for every other shape. Likewise, decaying and growing point sources placed
outside the domain are averaged to the "point source at the center" value
only when the domain is a ball.
"""

import numpy as np

from panharmonia import Ball, Ellipsoid, RngStream
from panharmonia.verify import kugel_discrepancy, kugel_fundamental_check

n = 1_000_000
for ratio in (1.0, 1.05, 1.2, 1.5):
    d = Ellipsoid([ratio, 1.0, 1.0 / ratio])
    est = kugel_discrepancy(d, 1.0, n, RngStream(0, 1))
    print(f"axis ratio {ratio:4.2f}: discrepancy {est.value:+.5f} +- {est.std_error:.5f}  "
          f"(z = {est.value / est.std_error:6.1f})")

probes = np.array([[2.0, 0, 0], [0, 2.5, 0], [-1.5, -1.5, 1.0]])
for d in (Ball(1.0), Ellipsoid([1.2, 1.0, 1 / 1.2])):
    rep = kugel_fundamental_check(d, 1.0, np.zeros(3), probes, n, RngStream(0, 2))
    zs = ", ".join(f"{c['inputs']['sign']}:{c['residual']:.1f}" for c in rep.cases)
    print(f"{d!r}: z-scores {zs} -> {'consistent' if rep.passed else 'mismatch'}")
